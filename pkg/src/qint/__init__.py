"""Real algebras from quivers, algebra-valued step functions and their integration."""

__version__ = "0.1.0"

from .algebra import (  # noqa: E402
    TAU_ALG,
    AlgebraElement,
    AlgebraHom,
    Path,
    RewriteRule,
    RewriteSystem,
    StructureConstantAlgebra,
    WeightQuiver,
    algebra_from_admissible_quiver,
    algebra_from_rewrite_system,
    apply_hom,
    enumerate_paths,
    kernel_basis,
    verify_algebra,
    verify_hom,
)
from .norms import BasisNormFn, PNormSpec, algebra_norm, seminorm_sigma  # noqa: E402
from .stepfn import (  # noqa: E402
    Box,
    Domain,
    StepFunction,
    evaluate,
    gamma_xi,
    gamma_xi_inverse,
    module_action,
    sample_to_Eu,
    step_norm,
)
from .contexts import SigmaContext, context  # noqa: E402
from .integrate import (  # noqa: E402
    CategoryTriple,
    IntegralReport,
    bochner_integrate,
    check_H_laws,
    daniell_suite,
    frakA,
    integrate_limit,
    integrate_step,
    lebesgue_integrate,
    operator_norm_check,
)
from .approx import convergence_report, fourier_coeffs, l1_distance, taylor_truncate  # noqa: E402
