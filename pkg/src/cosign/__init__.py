"""Exact cosine sign correlations of integer frequency sets."""

from .bounds import SandwichBound, lcm_prune_applies, sandwich, trivial_lower_bound
from .core import (
    Configuration,
    ConfigurationError,
    ConsistencyError,
    CosSign,
    ExactRational,
    PiFraction,
    WidthOverflow,
    cos_sign_at,
    lcm_checked,
    normalize,
)
from .exact import (
    SignSpectrum,
    exact_probability,
    exact_probability_cells,
    exact_probability_sweep,
    extend_probabilities,
    is_tight,
    sign_spectrum,
)
from .fourier import (
    ReducedRatio,
    even_reduction_score,
    phi_integral_magnitude,
    phi_integral_signed,
    reduced_ratio,
    triple_from_pairs,
)
from .montecarlo import McEstimate, estimate
from .search import (
    SearchOptions,
    SearchReport,
    TheoremVerdict,
    enumerate_normalized,
    find_minimum,
    verify_p3_theorem,
    verify_power_ladder,
)

__version__ = "0.1.0"
