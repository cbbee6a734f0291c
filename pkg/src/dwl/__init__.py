"""Directed width decompositions: constructions, validators and exact oracles."""
from .decomposition import (
    ArborealDecomposition,
    DagDecomposition,
    DirectedPathDecomposition,
    KellyDecomposition,
    Skeleton,
    ValidationReport,
    dpd_to_kelly_path,
    kelly_path_to_dpd,
    normalize_dpd,
    trivial_decomposition,
    validate,
    width,
)
from .digraph import Digraph, is_guarding, is_normal, reachable_set, scc_condensation
from .errors import CapabilityError, InvalidInputError
from .families import biorient, gen_family
from .oracles import (
    dagwidth_by_game,
    dpw_by_ordering,
    dtw_exact_small,
    kellywidth_by_elimination,
    kellywidth_by_game,
)
from .pathwidth import DpwRunConfig, approx_dagwidth, approx_kellywidth, make_dpdec
from .separators import SeparatorResult, SeparatorStrategy, dsn, find_sep, separator_from_arboreal
from .treewidth import make_arbdec

__version__ = "0.1.0"
