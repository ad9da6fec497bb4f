"""Arithmetic in GF(q) for prime powers q.

Elements are the integers 0..q-1.  The integer ``e`` encodes the polynomial
whose coefficient of x**i is the i-th base-p digit of ``e``, so for prime
q the encoding is plain residues.  Extension fields are reduced modulo the
monic irreducible polynomial of degree k with the smallest such encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, DivisionByZero, NotPrimePower, OutOfRange

MAX_ORDER = 1024


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q == p**k, or raise NotPrimePower."""
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    q = int(q)
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, k


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except NotPrimePower:
        return False
    return True


def is_power_of(q: int, p: int) -> bool:
    try:
        return prime_power(q)[0] == p
    except NotPrimePower:
        return False


# -- polynomials over GF(p), coefficient lists low -> high --------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _monic(degree: int, p: int):
    for low in product(range(p), repeat=degree):
        yield list(reversed(low)) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for div in _monic(d, p):
            if not _poly_mod(poly, div, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Monic irreducible of degree k over GF(p) with the smallest integer encoding."""
    if k == 1:
        return (0, 1)
    for code in range(p**k):
        low = [(code // p**i) % p for i in range(k)]
        poly = low + [1]
        if low[0] != 0 and is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class Field:
    p: int
    k: int
    modulus: tuple[int, ...]
    q: int = field(init=False)
    add_table: np.ndarray = field(init=False, repr=False, compare=False)
    mul_table: np.ndarray = field(init=False, repr=False, compare=False)
    neg_table: np.ndarray = field(init=False, repr=False, compare=False)
    inv_table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        q = self.p**self.k
        object.__setattr__(self, "q", q)
        elems = np.arange(q)
        digits = np.stack([(elems // self.p**i) % self.p for i in range(self.k)])
        weights = self.p ** np.arange(self.k)

        add = np.zeros((q, q), dtype=np.int64)
        for i in range(self.k):
            add += ((digits[i][:, None] + digits[i][None, :]) % self.p) * weights[i]
        neg = (((-digits) % self.p) * weights[:, None]).sum(axis=0)

        mul = np.zeros((q, q), dtype=np.int64)
        if self.k == 1:
            mul[:] = (elems[:, None] * elems[None, :]) % self.p
        else:
            mul[:] = self._mul_table_via_generator()
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        for arr in (add, mul, neg, inv):
            arr.setflags(write=False)
        object.__setattr__(self, "add_table", add)
        object.__setattr__(self, "mul_table", mul)
        object.__setattr__(self, "neg_table", neg)
        object.__setattr__(self, "inv_table", inv)

    # encoding helpers
    def to_poly(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.k)]

    def from_poly(self, coeffs: Sequence[int]) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs))

    def _slow_mul(self, a: int, b: int) -> int:
        prod = _poly_mul(_trim(self.to_poly(a)), _trim(self.to_poly(b)), self.p)
        return self.from_poly(_poly_mod(prod, self.modulus, self.p))

    def _mul_table_via_generator(self) -> np.ndarray:
        q = self.p**self.k
        for g in range(2, q):
            exp = [1]
            x = 1
            for _ in range(q - 2):
                x = self._slow_mul(x, g)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q - 1:
                break
        exp_arr = np.array(exp + exp, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        log[np.array(exp)] = np.arange(q - 1)
        a = np.arange(q)
        table = exp_arr[(log[:, None] + log[None, :]) % (q - 1)]
        table[(a[:, None] == 0) | (a[None, :] == 0)] = 0
        return table

    # scalar operations
    def _check(self, *elems):
        for e in elems:
            if not 0 <= e < self.q:
                raise OutOfRange(f"{e} is not an element of GF({self.q})")

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.add_table[a, self.neg_table[b]])

    def neg(self, a: int) -> int:
        self._check(a)
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        self._check(a)
        if e < 0:
            a, e = self.inv(a), -e
        out = 1
        for _ in range(e):
            out = int(self.mul_table[out, a])
        return out

    def elements(self) -> range:
        return range(self.q)

    # vectorised helpers used by the geometry generators
    def vadd(self, a, b):
        return self.add_table[a, b]

    def vsub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def vmul(self, a, b):
        return self.mul_table[a, b]


@lru_cache(maxsize=None)
def field_create(q: int) -> Field:
    """Build GF(q).  Raises NotPrimePower for q that is not a prime power."""
    p, k = prime_power(q)
    if q > MAX_ORDER:
        raise OutOfRange(f"GF({q}) is above the supported order {MAX_ORDER}")
    return Field(p, k, smallest_irreducible(p, k))


GF = field_create


def field_arith(f: Field, op: str, a: int, b: Optional[int] = None) -> int:
    if op in ("neg", "inv"):
        return getattr(f, op)(a)
    if op not in ("add", "sub", "mul", "div"):
        raise ValueError(f"unknown field operation {op!r}")
    if b is None:
        raise ValueError(f"{op} needs two operands")
    return getattr(f, op)(a, b)


# -- linear algebra ------------------------------------------------------------

@dataclass(frozen=True)
class LinearSolution:
    """Affine solution set: particular + span(kernel).  particular is None when inconsistent."""

    rank: int
    particular: Optional[tuple[int, ...]]
    kernel: tuple[tuple[int, ...], ...]

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def rref(f: Field, matrix: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = [list(map(int, r)) for r in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = int(f.inv_table[rows[r][c]])
        rows[r] = [int(f.mul_table[inv, x]) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [int(f.add_table[x, f.neg_table[f.mul_table[factor, y]]])
                           for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def solve_linear(f: Field, matrix: Sequence[Sequence[int]], rhs: Sequence[int]) -> LinearSolution:
    """Solve matrix @ x = rhs over GF(q)."""
    if len(matrix) != len(rhs):
        raise DimensionMismatch(f"{len(matrix)} rows but {len(rhs)} right-hand sides")
    ncols = len(matrix[0]) if matrix else 0
    if any(len(row) != ncols for row in matrix):
        raise DimensionMismatch("ragged matrix")
    for x in (v for row in matrix for v in row):
        f._check(x)
    f._check(*rhs)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    reduced, pivots = rref(f, aug)
    if ncols in pivots:
        particular = None
        pivots = [c for c in pivots if c != ncols]
        reduced = reduced[: len(pivots)]
    else:
        particular = [0] * ncols
        for row, c in zip(reduced, pivots):
            particular[c] = row[ncols]
        particular = tuple(particular)
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for row, c in zip(reduced, pivots):
            vec[c] = int(f.neg_table[row[fc]])
        kernel.append(tuple(vec))
    return LinearSolution(len(pivots), particular, tuple(kernel))
