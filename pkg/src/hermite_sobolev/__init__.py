"""Hermite expansions, Hermite potentials and Hermite-Sobolev spaces, numerically.

Submodules
----------
hermite_basis        Hermite functions, Gauss-Hermite quadrature, coefficient containers.
spectral_operators   Ladder operators, spectral multipliers, Riesz transforms, propagators.
kernels              Mehler kernels, the potential kernel ``K_a``, its envelope, Bessel kernels.
function_spaces      Grid norms, Hermite-Sobolev and potential norms, classical comparisons.
verify               Numerical experiments returning structured reports.
cli                  Command-line front end.
"""

from .hermite_basis import (
    DimensionError,
    MultiIndex,
    QuadratureError,
    QuadratureRule,
    ResolutionError,
    SpectralCoefficients,
    analyze,
    build_quadrature,
    eval_hermite_1d,
    eval_hermite_tensor,
    hermite_functions,
    multi_indices,
    synthesize,
)
from .spectral_operators import (
    LadderWord,
    MultiplierSpec,
    SymbolError,
    apply_H,
    apply_ladder,
    apply_multiplier,
    apply_word,
    heat_evolve,
    ladder_identity_constants,
    power,
    riesz,
    riesz_adjoint,
    riesz_higher,
    schrodinger_evolve,
)
from .kernels import (
    KernelEvalConfig,
    KernelValue,
    PhiProfile,
    bessel_kernel,
    complex_mehler,
    free_propagator,
    mehler_kernel,
    phi_a,
    potential_kernel,
)
from .function_spaces import (
    BoundaryDecayError,
    GridFunction,
    classical_sobolev_apply,
    hermite_sobolev_norm,
    hilbert_transform,
    lp_norm,
    potential_norm,
)
from .verify import ExperimentReport

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
