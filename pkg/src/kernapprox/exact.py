"""Closed-form best mean approximations.

For a Poisson combination K with coefficient sequence psi(k) and shared
phase beta, and n large enough, the common value of the best uniform
approximation of the class K*U_inf, the best mean approximation of K*U_1 and
E_n(K)_L / pi is

    (4/pi) |sum_k psi((2k+1)n)/(2k+1) sin((2k+1) theta pi - beta pi/2)|,

where theta in [0, 1) is the root of the phase equation

    sum_k psi((2k+1)n) cos((2k+1) theta pi - beta pi/2) = 0.

The extremal polynomial interpolates K at (theta pi + k pi)/n, k = 0..2n-2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .exceptions import DimensionMismatch, DuplicateQ, NoRootBracketed, NonIntegerBeta, SpecError
from .kernels import KernelSpec, epsilon_n, eval_kernel
from .trigpoly import TrigPoly, interpolate_at_2nm1

log = logging.getLogger(__name__)

THETA_SCAN = 1024
THETA_TOL = 1e-13
_SERIES_REL = 1e-17


class Method(str, Enum):
    CLOSED_FORM = "ClosedForm"
    ORACLE = "Oracle"


@dataclass
class BestApproxResult:
    value: float
    theta_n: Optional[float]
    n_effective: int
    method: Method = Method.CLOSED_FORM
    poly: Optional[TrigPoly] = None
    info: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "value": self.value,
            "theta_n": self.theta_n,
            "n_effective": self.n_effective,
            "method": self.method.value,
        }
        if self.poly is not None:
            out["poly"] = {"a": self.poly.a.tolist(), "b": self.poly.b.tolist()}
        out.update(self.info)
        return out


def _odd_harmonic_table(spec: KernelSpec, n: int):
    """Multipliers j = 2k+1 and psi(j n), truncated by the geometric tail."""
    c = spec.canonical()
    alpha = np.array([t.alpha for t in c.terms])
    q = np.array([t.q for t in c.terms])
    qn = q ** n
    lead = float(np.sum(np.abs(alpha) * qn))
    ratio = qn ** 2
    # sum_{k>=K} |alpha_i| q_i^{(2k+1)n} = |alpha_i| q_i^n ratio_i^K / (1 - ratio_i)
    n_terms = 1
    while n_terms < 100_000:
        tail = np.sum(np.abs(alpha) * qn * ratio ** n_terms / (1.0 - ratio))
        if tail < _SERIES_REL * lead:
            break
        n_terms += 1
    j = 2 * np.arange(n_terms) + 1.0
    psi_j = (alpha[:, None] * np.power(q[:, None], (j * n)[None, :])).sum(axis=0)
    return c.terms[0].beta, j, psi_j, lead


def phase_equation(spec: KernelSpec, n: int, theta):
    """Left-hand side of the phase equation at theta (scalar or array)."""
    beta, j, psi_j, _ = _odd_harmonic_table(spec, n)
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    out = np.cos(np.multiply.outer(th, j) * math.pi - beta * math.pi / 2) @ psi_j
    return float(out[0]) if np.ndim(theta) == 0 else out


def _sine_series(beta, j, psi_j, theta):
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    return np.sin(np.multiply.outer(th, j) * math.pi - beta * math.pi / 2) @ (psi_j / j)


def solve_theta_n(spec: KernelSpec, n: int, tol: float = THETA_TOL) -> float:
    """Root of the phase equation in [0, 1).

    Integer beta gives 1/2 (even) or 0 (odd) exactly.  Otherwise the interval
    is scanned at resolution 1/1024 and the bracketed root refined by
    bisection to ``tol``.  The left-hand side is antiperiodic with period 1,
    so a bracket always exists at fine enough resolution; if several appear,
    the one maximizing the sine series (the extremal phase) is taken.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    beta, j, psi_j, lead = _odd_harmonic_table(spec, n)
    if float(beta).is_integer():
        return 0.5 if int(beta) % 2 == 0 else 0.0

    def lhs(th):
        return np.cos(np.multiply.outer(np.atleast_1d(th), j) * math.pi - beta * math.pi / 2) @ psi_j

    grid = np.arange(THETA_SCAN + 1) / THETA_SCAN
    vals = lhs(grid)
    roots = []
    for i in range(THETA_SCAN):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
            continue
        if vals[i] * vals[i + 1] < 0.0:
            lo, hi, flo = grid[i], grid[i + 1], vals[i]
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                fm = lhs(mid)[0]
                if fm == 0.0:
                    lo = hi = mid
                    break
                if (fm > 0) == (flo > 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            roots.append(float(0.5 * (lo + hi)) % 1.0)
    if not roots:
        raise NoRootBracketed(f"phase equation has no sign change on [0, 1) at resolution 1/{THETA_SCAN}")
    if len(roots) > 1:
        log.warning("phase equation has %d roots in [0, 1); picking the extremal one", len(roots))
        return max(roots, key=lambda th: abs(_sine_series(beta, j, psi_j, th)[0]))
    return roots[0]


def extremal_interpolant(spec: KernelSpec, n: int, theta: Optional[float] = None) -> TrigPoly:
    """Degree n-1 polynomial interpolating K at (theta pi + k pi)/n, k = 0..2n-2."""
    if theta is None:
        theta = solve_theta_n(spec, n)
    nodes = (theta * math.pi + np.arange(2 * n - 1) * math.pi) / n
    return interpolate_at_2nm1(nodes, eval_kernel(spec, nodes, at_jump="mean"))


def exact_value_poisson(spec: KernelSpec, n: int, with_poly: bool = True) -> BestApproxResult:
    """Closed-form value for a pure-Poisson combination with any real beta.

    The formula is evaluated for every n; it equals the best approximation
    once n >= n_0 (see :func:`estimate_n0`), which is left to the caller.
    """
    theta = solve_theta_n(spec, n)
    beta, j, psi_j, _ = _odd_harmonic_table(spec, n)
    value = 4.0 / math.pi * abs(float(_sine_series(beta, j, psi_j, theta)[0]))
    poly = extremal_interpolant(spec, n, theta) if with_poly else None
    return BestApproxResult(value, theta, n, Method.CLOSED_FORM, poly)


def exact_value_integer_beta(spec: KernelSpec, n: int) -> BestApproxResult:
    """arctan / log closed forms for even / odd integer beta."""
    c = spec.canonical()
    beta = c.terms[0].beta
    if not float(beta).is_integer():
        raise NonIntegerBeta(f"beta={beta} is not an integer")
    alpha = np.array([t.alpha for t in c.terms])
    qn = np.array([t.q for t in c.terms]) ** n
    if int(beta) % 2 == 0:
        value = 4.0 / math.pi * abs(float(alpha @ np.arctan(qn)))
        theta = 0.5
    else:
        value = 2.0 / math.pi * abs(float(alpha @ (np.log1p(qn) - np.log1p(-qn))))
        theta = 0.0
    return BestApproxResult(value, theta, n, Method.CLOSED_FORM)


def favard_constant(r: int) -> float:
    """K_r = (4/pi) sum_{k>=0} (2k+1)^-(r+1) for odd r >= 1.

    Direct sum of the first 1000 terms plus an Euler-Maclaurin tail; the
    first omitted correction is below 1e-19 for every r >= 1.
    """
    if int(r) != r or r < 1 or r % 2 == 0:
        raise ValueError("Favard constants are defined here for odd r >= 1")
    s = r + 1
    big_n = 1000
    head = math.fsum((2 * k + 1) ** -s for k in range(big_n))
    x = 2 * big_n + 1.0
    # f(k) = (2k+1)^-s: integral + f/2 - f'/12 + f'''/720
    tail = (x ** (1 - s) / (2.0 * (s - 1)) + 0.5 * x ** -s
            + (2.0 * s * x ** (-s - 1)) / 12.0
            - (8.0 * s * (s + 1) * (s + 2) * x ** (-s - 3)) / 720.0)
    return 4.0 / math.pi * (head + tail)


def _check_combo(alpha_star, params, m) -> np.ndarray:
    alpha = np.asarray(alpha_star, dtype=float).reshape(-1)
    if alpha.size != m or len(params) != m:
        raise DimensionMismatch(f"expected {m} weights and parameters, got {alpha.size} and {len(params)}")
    if m < 2:
        raise ValueError("combinations need m >= 2")
    if not np.any(alpha):
        raise SpecError("alpha_star is trivial")
    return alpha


def exact_value_bernoulli_combo(alpha_star: Sequence[float], r_bar: Sequence[int], n: int, m: int) -> BestApproxResult:
    """|sum_i alpha_i (-1)^((r_i-1)/2) K_{r_i} / N^{r_i}| with N = n + m - 1."""
    alpha = _check_combo(alpha_star, r_bar, m)
    if len(set(r_bar)) != m:
        raise SpecError("orders r_i must be distinct")
    big_n = n + m - 1
    total = math.fsum(a * (-1.0 if (r // 2) % 2 else 1.0) * favard_constant(r) / big_n ** r
                      for a, r in zip(alpha, r_bar))
    return BestApproxResult(abs(total), None, big_n)


def exact_value_conj_poisson_combo(alpha_star: Sequence[float], q_bar: Sequence[float], n: int, m: int) -> BestApproxResult:
    """(2/pi) |sum_i alpha_i ln((1 + q_i^N)/(1 - q_i^N))| with N = n + m - 1."""
    alpha = _check_combo(alpha_star, q_bar, m)
    q = np.asarray(q_bar, dtype=float)
    if np.unique(q).size != m:
        raise DuplicateQ("q_i must be distinct")
    if np.any((q <= 0) | (q >= 1)):
        raise SpecError("q_i must lie in (0, 1)")
    qn = q ** (n + m - 1)
    value = 2.0 / math.pi * abs(float(alpha @ (np.log1p(qn) - np.log1p(-qn))))
    return BestApproxResult(value, None, n + m - 1)


def n0_rhs(q1: float, n: int, eps: float = 0.0) -> float:
    """Right-hand side of the explicit n_0 inequality; +inf where the square
    root argument is not positive."""
    c2n = ((1.0 + q1 * q1) / 2.0) ** (2 * n)
    arg = 1.0 - 2.0 * c2n
    if arg <= 0.0:
        return math.inf
    return (5.0 + 3.0 * q1 * q1) / (1.0 - q1 * q1) * c2n / math.sqrt(arg) + eps * (2.0 + eps)


def estimate_n0(spec: KernelSpec, n_max: int = 1_000_000) -> int:
    """Smallest n with (1 - q_1)^2 >= rhs(n) + eps_n (2 + eps_n).

    The bound is sufficient, not sharp, and does not depend on beta.
    """
    c = spec.canonical()
    q1 = c.terms[0].q
    lhs = (1.0 - q1) ** 2
    for n in range(1, n_max + 1):
        base = n0_rhs(q1, n)
        if base > lhs:
            continue
        eps = epsilon_n(c, n)
        if lhs >= base + eps * (2.0 + eps):
            return n
    raise RuntimeError(f"n_0 not found below {n_max}")
