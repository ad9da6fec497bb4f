import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from girthforge.errors import DimensionMismatch, DivisionByZero, NotPrimePower, OutOfRange
from girthforge.field import (field_arith, field_create, is_irreducible, is_prime_power,
                              prime_power, smallest_irreducible, solve_linear)
from girthforge.geometry import symplectic_gram

SMALL_Q = [2, 3, 4, 5, 7, 8, 9]


def _poly_mul_ref(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_rem_ref(a, m, p):
    a = list(a)
    inv = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        shift = len(a) - len(m)
        for i, x in enumerate(m):
            a[shift + i] = (a[shift + i] - c * x) % p
        a.pop()
    return a + [0] * (len(m) - 1 - len(a))


def _ref_mul(f, a, b):
    """Schoolbook product of base-p digit vectors reduced by the field modulus."""
    da, db = f.to_poly(a), f.to_poly(b)
    r = _poly_rem_ref(_poly_mul_ref(da, db, f.p), list(f.modulus), f.p)
    return sum(c * f.p**i for i, c in enumerate(r))


def test_field_create_prime():
    f = field_create(2)
    assert (f.p, f.k, f.q) == (2, 1, 2)


def test_gf4_modulus_is_x2_x_1():
    f = field_create(4)
    assert (f.p, f.k) == (2, 2)
    assert f.modulus == (1, 1, 1)


def test_gf4_modulus_is_only_irreducible_quadratic():
    quads = [(c0, c1, 1) for c0 in range(2) for c1 in range(2)]
    irreducible = [m for m in quads
                   if all(_poly_mul_ref(list(a) + [1], list(b) + [1], 2) != list(m)
                          for a in ((0,), (1,)) for b in ((0,), (1,)))]
    assert irreducible == [(1, 1, 1)]


@pytest.mark.parametrize("q", [6, 1, 0, 12, 100])
def test_not_prime_power(q):
    with pytest.raises(NotPrimePower):
        field_create(q)


def test_out_of_supported_range():
    with pytest.raises(OutOfRange):
        field_create(2048)


def test_small_arith_examples():
    assert field_arith(field_create(2), "add", 1, 1) == 0
    assert field_arith(field_create(3), "mul", 2, 2) == 1
    assert field_arith(field_create(4), "mul", 2, 2) == 3


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        field_arith(field_create(5), "inv", 0)


def test_encoding_out_of_range():
    with pytest.raises(OutOfRange):
        field_arith(field_create(4), "add", 4, 0)


@pytest.mark.parametrize("q", SMALL_Q)
def test_mul_table_matches_schoolbook(q):
    f = field_create(q)
    ref = np.array([[_ref_mul(f, a, b) for b in range(q)] for a in range(q)])
    assert np.array_equal(f.mul_table, ref)


@pytest.mark.parametrize("q", SMALL_Q)
def test_field_axioms_exhaustive(q):
    f = field_create(q)
    A, M = f.add_table, f.mul_table
    r = np.arange(q)
    a, b, c = np.meshgrid(r, r, r, indexing="ij")
    assert np.array_equal(A[a, A[b, c]], A[A[a, b], c])
    assert np.array_equal(M[a, M[b, c]], M[M[a, b], c])
    assert np.array_equal(M[a, A[b, c]], A[M[a, b], M[a, c]])
    assert np.array_equal(A, A.T) and np.array_equal(M, M.T)


@pytest.mark.parametrize("q", SMALL_Q)
def test_inverses_and_cyclic_group(q):
    f = field_create(q)
    for a in range(1, q):
        assert f.mul(a, f.inv(a)) == 1
        assert f.add(a, f.neg(a)) == 0
    orders = []
    for a in range(1, q):
        k, x = 1, a
        while x != 1:
            x, k = f.mul(x, a), k + 1
        orders.append(k)
    assert max(orders) == q - 1


@pytest.mark.parametrize("q", SMALL_Q)
def test_frobenius(q):
    f = field_create(q)
    for a, b in itertools.product(range(q), repeat=2):
        assert f.pow(f.add(a, b), f.p) == f.add(f.pow(a, f.p), f.pow(b, f.p))


@given(st.integers(2, 1024))
def test_prime_power_decomposition(q):
    facs = {d for d in range(2, q + 1) if q % d == 0 and all(d % e for e in range(2, d))}
    assert is_prime_power(q) == (len(facs) == 1)
    if len(facs) == 1:
        p, k = prime_power(q)
        assert p**k == q and facs == {p}


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (2, 5)])
def test_smallest_irreducible_by_brute_force(p, k):
    def monic(deg):
        for low in itertools.product(range(p), repeat=deg):
            yield list(low) + [1]

    def irreducible(m):
        for d in range(1, k // 2 + 1):
            for a in monic(d):
                for b in monic(k - d):
                    if _poly_mul_ref(a, b, p) == m:
                        return False
        return True

    expected = next(tuple(low + [1]) for low in
                    ([(code // p**i) % p for i in range(k)] for code in range(p**k))
                    if irreducible(low + [1]))
    assert smallest_irreducible(p, k) == expected
    assert is_irreducible(list(expected), p)


def test_solve_identity():
    f = field_create(5)
    s = solve_linear(f, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], [0, 0, 0])
    assert s.particular == (0, 0, 0) and s.kernel == ()


def test_solve_zero_row_kernel():
    s = solve_linear(field_create(2), [[0, 0]], [0])
    assert len(s.kernel) == 2 and s.rank == 0


def test_symplectic_gram_nondegenerate():
    f = field_create(2)
    s = solve_linear(f, symplectic_gram(f), [0, 0, 0, 0])
    assert s.rank == 4 and s.kernel == ()


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_linear(field_create(3), [[1, 2]], [1, 2])


def test_inconsistent_system():
    s = solve_linear(field_create(3), [[1, 1], [1, 1]], [0, 1])
    assert not s.consistent


@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9]), st.integers(1, 4), st.integers(1, 4), st.data())
def test_solutions_satisfy_system(q, rows, cols, data):
    f = field_create(q)
    el = st.integers(0, q - 1)
    mat = data.draw(st.lists(st.lists(el, min_size=cols, max_size=cols), min_size=rows, max_size=rows))
    x0 = data.draw(st.lists(el, min_size=cols, max_size=cols))
    rhs = [0] * rows
    for i in range(rows):
        for j in range(cols):
            rhs[i] = f.add(rhs[i], f.mul(mat[i][j], x0[j]))
    s = solve_linear(f, mat, rhs)
    assert s.consistent and s.rank + len(s.kernel) == cols

    def apply(v):
        out = []
        for i in range(rows):
            acc = 0
            for j in range(cols):
                acc = f.add(acc, f.mul(mat[i][j], v[j]))
            out.append(acc)
        return out

    assert apply(s.particular) == rhs
    for kv in s.kernel:
        assert apply(kv) == [0] * rows
