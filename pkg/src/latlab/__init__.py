"""latlab: a numerical laboratory for Laplace-transform identities in the
circle problem, the divisor problem, and moments of the Riemann zeta function.

The sieve-backed error terms P(x) and Delta(x), their Bessel-series
expansions, the mean-square transform identities, the zeta moment integrals
I_1, I_2 and Laplace transforms L_1, L_2, shift-correlation sums, and the
exponential-family ratio functional equation all live in their own modules;
``suites`` bundles them into reproducible verification runs used by both the
command line and the acceptance tests.
"""

from .sieve import SieveTable, build_sieve, summatory_r, summatory_d
from .special import (SwitchPolicy, DEFAULT_POLICY, bessel_j0, bessel_j1,
                      bessel_y1, bessel_k1, bessel_i0, bessel_i1,
                      bessel_i0_scaled, bessel_i1_scaled, gamma_complex,
                      loggamma_complex, chi, log_chi, EULER_GAMMA)
from .zeta import (ZetaGrid, MomentReport, zeta_em, zeta_rs_mod,
                   zeta_critical, dirichlet_square_check, hurwitz_em,
                   dirichlet_beta, moment_I1, moment_I2, zeta_prime_2,
                   CriticalLineSampler, shared_sampler)
from .errterm import (ErrorTermSample, P_direct, Delta_direct, P_hardy,
                      Delta_voronoi, mean_square_direct, mean_direct)
from .correlations import (CorrelationResult, correlation_r, correlation_d,
                           alternating_divisor_sum, log_divisor_sum)
from .laplace import (LaplaceEstimate, FitReport, laplace_P_closed,
                      laplace_P_piecewise, laplace_bessel_single,
                      quad_bessel_single, bessel_product_laplace,
                      quad_bessel_product, verify_theorem4, verify_theorem5,
                      kober_check, jutila_theorem6, atkinson_L2,
                      atkinson_B_formula, mellin_gamma_check,
                      lk_bound_diagnostic)
from .funceq import (SolutionParams, ratio_integrand, verify_theorem3,
                     hayman_check)
from .quadrature import QuadratureConfig, DEFAULT_QUAD

__version__ = "0.1.0"
