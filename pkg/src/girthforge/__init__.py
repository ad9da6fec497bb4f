"""Constructions and certificates for chromatic numbers of graph powers."""

from .algorithms import (INFINITE, CliqueCertificate, diameter, find_cycle, forbidden_cycles,
                         girth, greedy_color, is_bipartite, max_degree, power,
                         trivial_upper_bound, verify_clique_in_power)
from .analysis import (AnalysisReport, analyze, bfs_layers, count_bottlenecks,
                       neighborhood_path_bound, power_neighborhood_density, six_path_check)
from .catalog import catalog_entry, load_catalog
from .circular import (CircularSpec, ConduitRef, HopSpec, circular_construct, debruijn_circular,
                       debruijn_graph, hamming_circular, plan, unfold)
from .conduit import (DualityMap, conduit_cycle, find_perfect_matching, find_self_duality,
                      matching_contraction, verify_conduit)
from .errors import *  # noqa: F401,F403
from .field import GF, Field, field_create
from .geometry import (complete_bipartite_conduit, conduit, mirror, projective_plane_incidence,
                       split_cayley_hexagon_incidence, symplectic_quadrangle_incidence)
from .graph import BipartiteGraph, Graph

__version__ = "0.1.0"
