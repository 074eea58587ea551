"""Combinatorial invariants of tent-map inverse limits, computed exactly."""

from .errors import *  # noqa: F401,F403
from .numerics import Interval, Ordering, compare, parse_scalar  # noqa: F401
from .tentmap import TentMap, critical_orbit, delta_bound, fixed_point, tent_eval  # noqa: F401
from .folding import PLFunction, k_pattern, realize_pattern, shift_pattern, turning_points  # noqa: F401
from .arcs import Arc, arc_A, arc_at_depth, contains, verify_arc_lattice  # noqa: F401
from .chains import natural_chain, verify_completeness  # noqa: F401
from .symmetry import frechet_1d, is_eps_close, is_eps_symmetric, verify_lemma12, verify_no_symmetry  # noqa: F401
from .invariants import count_levels, distinguish, invariant_sequence  # noqa: F401

__version__ = "0.1.0"
