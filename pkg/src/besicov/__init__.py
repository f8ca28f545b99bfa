"""Exact Besicovitch distances, covering numbers and scaling exponents
for B-free subshifts and golden-rotation coded sequences."""

from .bsets import (
    BSet,
    PeriodicWord,
    density_mb,
    density_mb_bounds,
    divisors_in,
    eta_word,
    is_taut,
    lcm_of,
    make_bset,
    normalize_primitive,
    parse_bset_spec,
    serialize_bset_spec,
)
from .circle import (
    ALPHA,
    PHI,
    CircleIntervalSet,
    CirclePoint,
    QSqrt5,
    alpha_power,
    rotation_point,
    window_shift_distance,
)
from .covering import (
    CoveringBounds,
    ball_mass,
    build_eps_grid,
    covering_grid,
    covering_sandwich,
    distance_at_lcm,
    exact_cover_small,
    lemma_bounds,
    min_distance_upto,
    separated_cover,
)
from .distance import (
    DistanceProfile,
    apply_block_code,
    d1_empirical,
    d1_oracle_periodic,
    d1_shift,
    d1_shift_all,
    d1_shift_coprime,
    density_union_shift,
    distance_profile,
    mismatch_counts,
    profile_from_word,
    reduce_r,
    t_r_count,
)
from .errors import (
    BesicovError,
    CertificationError,
    CrossCheckError,
    ResourceCapError,
    ValidationError,
)
from .families import ToeplitzFamily, make_toeplitz, squarefree_elements
from .intervals import RationalInterval
from .rotation import (
    WindowStage,
    block_density_check,
    build_window,
    code_orbit,
    empirical_vs_exact,
    fibonacci_data,
    omega_sequence,
    sublevel_mass,
    sublevel_masses,
    verify_p3_slope,
    window_stages,
    window_to_text,
)
from .scaling import (
    ScalingReport,
    fit_dimensional_exponent,
    fit_power_exponential_exponent,
    fit_report,
    reference_12_over_pi2,
    squarefree_eps,
    squarefree_rows,
    synthetic_rows,
    toeplitz_eps,
    toeplitz_lower_gap,
    toeplitz_rows,
)

__version__ = "0.1.0"
