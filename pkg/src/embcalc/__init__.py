"""Symbolic calculator for the embedding-calculus Taylor tower.

Basic-word enumeration, layer factors of the tower for embeddings of an
interval, closed-form connectivity estimates, and a small derivation engine
that replays how those estimates are obtained.
"""
__version__ = "0.1.0"

from .errors import EmbCalcError, InvalidArgument, PreconditionViolation, UnsupportedRange
from .extint import INF, NEG_INF, ExtInt
from .words import BasicWord, MultiDegree, alpha, beta, enumerate_basic_words, involves_all_but_first, witt_count
from .spaces import (
    CubeOfSpaces,
    GenericCW,
    Loop,
    Point,
    Smash,
    SmashPower,
    Sphere,
    Susp,
    Wedge,
    WeakProd,
    build_layer_cube,
    connectivity,
    hilton_milnor_split,
    normalize,
    total_fiber_factors,
)
from .estimates import (
    AnalyticCofunctor,
    HandleProfile,
    analytic_cube_cartesianness,
    converges,
    emb_analyticity,
    emb_eta_connectivity,
    eta_connectivity,
    excision_cartesianness,
    haefliger_metastable,
    homogeneous_analyticity,
    layer_map_connectivity,
)
from .tower import Factor, knot_tower, layer_factors, tower_summary
from .engine import ConnFact, DerivationTrace, apply_rule, derive_eta_bound, derive_homogeneous_cartesianness
