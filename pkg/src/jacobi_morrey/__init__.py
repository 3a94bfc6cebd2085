"""Fourier-Jacobi expansions and Morrey norms on [-1, 1]."""

from .expansion import (
    ExpansionCoefficients,
    coefficient,
    coefficients,
    kernel,
    partial_sum,
    partial_sum_function,
    pollard_operator,
    sign_of_jacobi,
    signed_power_of_jacobi,
    t_operator,
)
from .experiments import (
    ExperimentReport,
    GrowthReport,
    RegionVerdict,
    boundary_divergence_experiment,
    convergence_experiment,
    dual_growth_experiment,
    hilbert_weight_experiment,
    mnt_check,
    necessity_experiment,
    norm_growth_experiment,
    region_membership,
)
from .jacobi_core import (
    JacobiFunction,
    JacobiParams,
    endpoint_bound_check,
    hilb_envelope,
    jacobi_function,
    jacobi_poly,
    jacobi_roots,
    normalization_constant,
)
from .morrey import (
    BallScan,
    MorreyExponents,
    PowerWeight,
    ScanSpec,
    dual_functional,
    lp_norm,
    morrey_norm,
    morrey_norm_estimate,
    weighted_morrey_norm,
)
from .quadrature import (
    QuadratureRule,
    SampledFunction,
    StepFunction,
    gauss_jacobi_rule,
    hilbert_transform,
    integrate,
)

__version__ = "0.1.0"
