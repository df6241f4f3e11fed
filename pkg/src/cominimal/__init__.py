"""Co-minimal pairs built from lacunary sequences in Z^d, with windowed verification.

The package builds the partner sets of W = T ∪ {0} ∪ −T, V = T ∪ −T and
T (for a rapidly growing sequence T) as exact lazy sets, and checks the
co-minimality statements on finite windows with certificates.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CapExceededError,
    CominimalError,
    DimensionError,
    DivergenceError,
    HypothesisError,
    InconclusiveError,
    SequenceError,
)
from .lattice import Box, HalfSpace, Slab, point  # noqa: E402
from .lazyset import Certificate, LazySet, enumerate_window, from_finite, representations  # noqa: E402
from .lacunary import GrowthReport, build_T, build_V, build_W, classify_growth, make_sequence  # noqa: E402
from .constructions import build_G, build_layers, choose_mk, greedy_prune, intervals  # noqa: E402
from .verify import (  # noqa: E402
    FiniteGroup,
    PairReport,
    check_cominimal,
    check_cover,
    check_minimality,
    check_prop_M,
    check_sum_bound,
    oracle_agreement,
    oracle_minimal_complements,
)

__all__ = [
    "Box",
    "CapExceededError",
    "Certificate",
    "CominimalError",
    "DimensionError",
    "DivergenceError",
    "FiniteGroup",
    "GrowthReport",
    "HalfSpace",
    "HypothesisError",
    "InconclusiveError",
    "LazySet",
    "PairReport",
    "SequenceError",
    "Slab",
    "build_G",
    "build_T",
    "build_V",
    "build_W",
    "build_layers",
    "check_cominimal",
    "check_cover",
    "check_minimality",
    "check_prop_M",
    "check_sum_bound",
    "choose_mk",
    "classify_growth",
    "enumerate_window",
    "from_finite",
    "greedy_prune",
    "intervals",
    "make_sequence",
    "oracle_agreement",
    "oracle_minimal_complements",
    "point",
    "representations",
]
