"""statikit: exact Groebner stratifications, staticity certificates on smooth
toric charts, and chip-firing combinatorics."""

from .chipfiring import (
    Graph,
    firing_script,
    is_chip_firing_equivalent,
    jacobian_group,
    laplacian,
    reduced_divisor,
)
from .errors import (
    InvalidInputError,
    NonSmoothChartError,
    NotPointedError,
    RayOutsideSupportError,
    StatikitError,
    SupportMismatchError,
    UnsupportedSupportError,
    ZeroVectorError,
)
from .groebner import (
    GroebnerStratification,
    MarkedGB,
    ModuleVector,
    Poly,
    Submodule,
    colon_module,
    groebner_stratification,
    initial_form,
    initial_module,
    module_membership,
    reduced_gb,
    syzygies,
)
from .polyhedral import (
    Cone,
    Fan,
    PLStratification,
    common_refinement,
    fan_refines,
    hilbert_basis,
    orthant,
    refines,
    star_subdivision,
    stratification_to_smooth_fan,
)
from .staticity import (
    ModulePresentation,
    SmoothChart,
    TorReport,
    is_log_flat,
    is_regular_sequence_on,
    is_static,
    koszul_tor,
    log_tor_dim_at_most,
    orthant_chart,
)
from .statify import (
    ChartReport,
    StatificationCertificate,
    TheoremCheck,
    ToricModification,
    compute_statification,
    pullback_presentation,
    substitution_matrix,
    verify_theorem_instance,
)

__version__ = "0.1.0"
