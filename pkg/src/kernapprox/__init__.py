"""Best mean (L1) approximation of Poisson, conjugate Poisson and Bernoulli
kernel combinations by trigonometric polynomials."""

__version__ = "0.1.0"

from .conditions import SignChangeCertificate, Verdict, find_sign_changes, verify_N_np
from .construction import (ConstructionResult, build_alpha_star, construct_uniform, null_vector,
                           rational_form_conj_poisson)
from .estimators import BestMeanApproximator, TrigFeatures, TrigPolyL1Regressor
from .exact import (BestApproxResult, estimate_n0, exact_value_bernoulli_combo, exact_value_conj_poisson_combo,
                    exact_value_integer_beta, exact_value_poisson, extremal_interpolant, favard_constant,
                    n0_rhs, phase_equation, solve_theta_n)
from .exceptions import *  # noqa: F401,F403
from .kernels import BernoulliTerm, KernelSpec, PoissonTerm, delta_k, epsilon_n, eval_kernel, psi
from .oracle import (Harmonic, HarmonicSum, best_l1_interp_scan, best_l1_lp, conv_sup_norm, l1_fit,
                     l1_norm_residual)
from .trigpoly import TrigPoly, interpolate_at_2nm1, interpolate_odd

__all__ = [
    "BernoulliTerm", "BestApproxResult", "BestMeanApproximator", "ConstructionResult", "Harmonic",
    "HarmonicSum", "KernelSpec", "PoissonTerm", "SignChangeCertificate", "TrigFeatures", "TrigPoly",
    "TrigPolyL1Regressor", "Verdict", "best_l1_interp_scan", "best_l1_lp", "build_alpha_star",
    "construct_uniform", "conv_sup_norm", "delta_k", "epsilon_n", "estimate_n0", "eval_kernel",
    "exact_value_bernoulli_combo", "exact_value_conj_poisson_combo", "exact_value_integer_beta",
    "exact_value_poisson", "extremal_interpolant", "favard_constant", "find_sign_changes",
    "interpolate_at_2nm1", "interpolate_odd", "l1_fit", "l1_norm_residual", "n0_rhs", "null_vector",
    "phase_equation", "psi", "rational_form_conj_poisson", "solve_theta_n", "verify_N_np",
]
