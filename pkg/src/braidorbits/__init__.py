"""Braid orbits on Nielsen classes of permutation-group tuples."""
__version__ = "0.1.0"
ENGINE_VERSION = "1"

from .perm import Permutation, compose, conjugate, cycle_type, element_order, fixed_points, inverse, perm_index, parse_cycles
from .group import ConjClass, PermGroup, Subgroup, double_cosets
from .braid import BraidWord, GTuple, RamificationType, default_k, orbit_generators, qij_steps, qij_steps_alt
from .classic import OrbitReport, compute_heads, compute_tails, orbit_partition
from .matching import MatchingIndex
from .graph import OrbitGraph, sample_edges, verify_components
from .genus0 import Classification, classify
from .catalog import Catalog, load_catalog, load_tables
