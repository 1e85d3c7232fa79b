"""pinchlab: explicit hyperbolic collar geometry and verification of pinching
one-parameter families of collar metrics."""

from .collar import (
    ELL_MAX,
    BoundSweepReport,
    CollarParams,
    CollarPoint,
    GeodesicLoop,
    InjProfile,
    collar_area,
    conformal_factor,
    d_inj_d_dist,
    d_inj_d_ell,
    dist_to_boundary,
    half_width,
    inj_bounds,
    inj_critical_dist,
    inj_from_boundary_dist,
    injectivity_radius,
    pointwise_bound_sweep,
    thin_part_area,
)
from .errors import DomainError, UnsupportedError
from .pinching import (
    CurveReport,
    CuspLimit,
    EquivalenceReport,
    LimitInjReport,
    LipschitzReport,
    PinchSchedule,
    RootInjReport,
    UnifConvReport,
    boundary_gauge_fermi,
    curve_report,
    default_times,
    equivalence_checks,
    limit_inj,
    lipschitz_check,
    metric_in_boundary_gauge,
    rootinj_bound_check,
    speed_density,
    tail_exponent,
    unif_conv_check,
    wp_length,
)
from .regions import (
    ComponentSpec,
    DescriptorReport,
    LimitDecomposition,
    NestedFamily,
    SeparationResult,
    SRegion,
    SurfaceDescriptor,
    ThickThinQuery,
    descriptor_validate,
    epsilon_for_separation,
    limit_decomposition,
    nested_sets,
    separation_check,
    thin_interval,
)
from .report import DEFAULT_TOLERANCES, CheckRecord, RunConfig, VerificationReport
from .suites import LEMMA_SUITES, SUITE_SUMMARIES
from .variations import (
    DecompositionResult,
    QuadDiffCoeff,
    RadialField,
    SymTwoTensorField,
    ck_seminorm,
    divergence,
    dl_variation,
    first_variation_inj,
    horizontal_project,
    lie_derivative,
    pointwise_norm,
    projected_coefficient,
    re_quad_diff,
    tensor_evolution_check,
    trace,
    wp_speed,
    wp_speed_quadrature,
    yaba_ratio,
)

__version__ = "0.1.0"
