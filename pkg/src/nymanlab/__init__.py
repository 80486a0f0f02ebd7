"""nymanlab: a desk-scale laboratory for Nyman-Beurling and Hardy-space
criteria around the Riemann zeta function, Dirichlet L-functions and
function-field zeta functions."""

__version__ = "0.1.0"

from .analytic import (ComplexPoint, DirichletCharacter, EvalResult, bernoulli_numbers,
                       character_table, dirichlet_L, hurwitz_zeta, log_gamma, riemann_zeta)
from .errors import (BoundaryZeroError, DomainError, IncompleteTableError, InconclusiveError,
                     InconsistencyError, InputFormatError, NymanLabError, ReportIOError,
                     UnsupportedRangeError)
from .function_field import (DiscreteSequence, LPolynomial, ff_discrete_conv, ff_multiplier_eval,
                             ff_rh_check, ff_roots, ff_zeta_eval, lpoly_validate)
from .hardy import (BadZeroSet, CausalityReport, Rectangle, blaschke_eval, bsy_integral,
                    causality_verdict, jensen_check, poisson_log_modulus, scattering_multiplier,
                    zero_count_rectangle)
from .kernels import (A_mult_convolve, E_halfline, MellinSample, SmoothBump, T_sum, V_additive,
                      VE_halfline, big_A, dilation_apply, inversion_apply, mellin_numeric,
                      rho_alpha)
from .nyman import (GramSystem, StepCombination, distance_curve, gram_assemble,
                    inner_product_rho, nb_distance)
from .piecewise import PiecewiseLogPoly
