"""Multisetting tripartite Bell inequalities as device-independent entanglement witnesses."""

from .bisep import (
    BoundsReport,
    biseparable_closed,
    biseparable_upper_bruteforce,
    compute_bounds,
    is_modified_circulant,
    mod_circulant_spectrum,
    planar_vector_lower_bound,
    reduced_matrix,
    singular_upper_bound,
)
from .optimize import OptResult, evaluate_operator, seesaw_quantum_max
from .quantum import (
    CorrelationTensor,
    MeasurementAngles,
    StateSpec,
    bell_value,
    canonical_angles,
    ghz_correlators,
    no_signalling_limit,
    quantum_lower_bound,
)
from .tensor import BellTensor, Family, build_cosine_tensor, build_parity_tensor, nonzero_count
from .witness import (
    CertificationResult,
    Verdict,
    certify,
    simulate_noisy_ghz,
    sweep,
    threshold_for,
    threshold_visibility,
)

__version__ = "0.1.0"
