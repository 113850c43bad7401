"""Planar lattice sums, their asymptotic expansions, and graph invariants.

The package evaluates the double sums F_n (reciprocals of the lattice
kernel psi on an n x n grid), the quadratic-form sums G_n / H_n / U_n, and
the matching integrals, both exactly and through closed-form asymptotic
expansions, and certifies the expansions' error orders empirically.  The
same sums give the pseudoinverse trace of the doubly periodic lattice
graph's Laplacian, hence its tau constant and Kirchhoff index.
"""

from .asymptotics import (
    ExpansionTerms,
    ResidualReport,
    composite_fn_estimate,
    euler_maclaurin,
    euler_maclaurin_remainder_bound,
    fn_f1_expansion,
    fn_f1_expansion_assembled,
    gn_expansion,
    gn_via_euler_maclaurin,
    hn_expansion,
    in_f1_expansion,
    leading_term,
    residual_order_fit,
    theorem2_combination,
    un_expansion,
)
from .errors import (
    CutViolation,
    DegenerateGraph,
    DegeneratePoint,
    InsufficientSamples,
    LatticeSumError,
    LowerHalfPlane,
    NotPositiveDefinite,
    PoleAt,
    SingularPoint,
    ToleranceNotMet,
)
from .graph import (
    TorusGraph,
    laplacian_matrix,
    tau_and_kirchhoff,
    trace_pseudoinverse_dense,
    trace_pseudoinverse_spectral,
)
from .lattice import (
    DEFAULT_BETA,
    NAMED_SPECS,
    SQUARE,
    TRIANGULAR,
    UNIONJACK,
    GridDomain,
    LatticeSpec,
    QuadraticForm,
    box_radius,
    f_eval,
    fm_eval,
    grid_points,
    lemma_radius,
    load_spec,
    psi_eval,
    taylor_poly_eval,
)
from .quadrature import (
    in_f1_closed,
    in_f_numeric,
    in_fm_numeric,
    integrate_rectangles,
    midpoint_error_bound,
)
from .special import (
    CATALAN,
    EULER_GAMMA,
    GAMMA_QUARTER,
    GAMMA_THIRD,
    bernoulli_numbers,
    bernoulli_poly,
    clausen_cl2,
    constants,
    digamma_complex,
    dilog_complex,
    kummer_omega,
    log_abs_eta,
)
from .sums import (
    SumResult,
    fn_direct,
    gn_digamma,
    gn_direct,
    hn_direct,
    neumaier_sum,
    un_direct,
)

__version__ = "0.1.0"
