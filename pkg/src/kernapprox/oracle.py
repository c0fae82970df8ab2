"""Independent numerical ground truth for the closed forms.

* :func:`l1_norm_residual` -- adaptive Gauss-Legendre integral of |f| over a
  period, split at the sign changes of f so every panel is smooth.
* :func:`best_l1_lp` -- discrete best L1 fit on a uniform grid, solved exactly
  as a linear program with the in-repo simplex.
* :func:`best_l1_interp_scan` -- minimizes the L1 error over interpolants at
  uniform node sets xi + k pi/(n+p).
* :func:`conv_sup_norm` -- sup norm of (1/pi) int sign(sin N(x-t)) K(t) dt,
  computed from the Fourier series of K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .conditions import find_sign_changes, kernel_callable
from .exceptions import ToleranceNotMet
from .kernels import BernoulliTerm, KernelSpec, PoissonTerm, _phase_cos_sin
from .simplex import solve_bounded_lp
from .trigpoly import TrigPoly, design_matrix, interpolate_at_2nm1, interpolate_odd

TWO_PI = 2.0 * math.pi

_GL_LO = np.polynomial.legendre.leggauss(16)
_GL_HI = np.polynomial.legendre.leggauss(32)


@dataclass(frozen=True)
class Harmonic:
    """amplitude * cos(k t - phase pi/2); a test kernel with a single frequency."""

    k: int
    amplitude: float = 1.0
    phase: float = 0.0

    def __call__(self, t):
        return self.amplitude * np.cos(self.k * np.asarray(t, dtype=float) - self.phase * math.pi / 2)


@dataclass(frozen=True)
class HarmonicSum:
    """Finite sum of harmonics, e.g. a truncated Poisson kernel."""

    harmonics: tuple

    @classmethod
    def truncated_poisson(cls, q: float, beta: float, degree: int, alpha: float = 1.0) -> "HarmonicSum":
        return cls(tuple(Harmonic(k, alpha * q ** k, beta) for k in range(1, degree + 1)))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return sum((h(t) for h in self.harmonics), np.zeros(t.shape))


Kernel = Union[KernelSpec, HarmonicSum, Harmonic, Callable]


def _is_odd_kernel(kernel) -> bool:
    if isinstance(kernel, KernelSpec):
        return kernel.is_odd
    if isinstance(kernel, Harmonic):
        return float(kernel.phase).is_integer() and int(kernel.phase) % 2 == 1
    if isinstance(kernel, HarmonicSum):
        return all(_is_odd_kernel(h) for h in kernel.harmonics)
    return False


def _kernel_scale(f: Callable) -> float:
    t = (np.arange(1024) + 0.5) * TWO_PI / 1024
    return max(float(np.max(np.abs(f(t)))), 1e-300)


# -- adaptive L1 norm --------------------------------------------------------

def _gauss(f, a, b, rule):
    x, w = rule
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    pts = mid[:, None] + half[:, None] * x[None, :]
    vals = np.abs(np.asarray(f(pts.ravel()), dtype=float)).reshape(pts.shape)
    return half * (vals @ w)


def l1_norm_residual(f: Callable, breakpoints_hint: Sequence[float] = (0.0,), tol: float = 1e-12,
                     grid_size: int = 8192, max_panels: int = 200_000) -> float:
    """Integral of |f| over [0, 2pi) for a piecewise smooth periodic f.

    Panels are cut at the refined sign changes of f and at the hinted
    breakpoints (jumps); each panel is integrated by 16/32-point
    Gauss-Legendre pairs and bisected until the pair agrees to the panel's
    share of ``tol``.
    """
    cuts = np.r_[0.0, TWO_PI, np.mod(np.asarray(breakpoints_hint, dtype=float), TWO_PI),
                 find_sign_changes(f, grid_size)]
    cuts = np.unique(cuts)
    cuts = cuts[np.r_[True, np.diff(cuts) > 1e-13]]
    if cuts[-1] < TWO_PI:
        cuts = np.r_[cuts, TWO_PI]
    else:
        cuts[-1] = TWO_PI
    a, b = cuts[:-1], cuts[1:]
    total = 0.0
    used = 0
    while a.size:
        used += a.size
        if used > max_panels:
            raise ToleranceNotMet(f"L1 quadrature exceeded {max_panels} panels")
        lo = _gauss(f, a, b, _GL_LO)
        hi = _gauss(f, a, b, _GL_HI)
        ok = np.abs(hi - lo) <= tol * (b - a) / TWO_PI
        total += float(np.sum(hi[ok]))
        mid = 0.5 * (a + b)
        a, b = np.r_[a[~ok], mid[~ok]], np.r_[mid[~ok], b[~ok]]
    return total


def l1_norm_midpoint(f: Callable, grid: int = 2048) -> float:
    t = (np.arange(grid) + 0.5) * TWO_PI / grid
    return float(np.sum(np.abs(f(t)))) * TWO_PI / grid


# -- discrete L1 fit by linear programming ---------------------------------

@dataclass
class L1Fit:
    poly: TrigPoly
    value: float
    dual_value: float
    iterations: int

    def __iter__(self):
        return iter((self.poly, self.value))


def l1_fit(t, y, degree: int, weights=None, max_iter: Optional[int] = None) -> L1Fit:
    """Minimize sum_j w_j |y_j - T(t_j)| over polynomials T of the given degree.

    Solved through the LP dual: maximize sum_j w_j y_j z_j subject to
    sum_j w_j z_j phi(t_j) = 0 and |z_j| <= 1.  The polynomial coefficients are
    the negated simplex multipliers of the equality rows.
    """
    t = np.asarray(t, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    w = np.full(t.size, 1.0) if weights is None else np.asarray(weights, dtype=float).reshape(-1)
    phi = design_matrix(t, degree)
    a_eq = (phi * w[:, None]).T
    cost = -w * y
    sol = solve_bounded_lp(cost, a_eq, np.zeros(a_eq.shape[0]), -1.0, 1.0,
                           start_at_upper=y > 0, max_iter=max_iter)
    coef = -sol.duals
    poly = TrigPoly.from_vector(coef, degree)
    value = float(np.sum(w * np.abs(y - phi @ coef)))
    return L1Fit(poly, value, -sol.objective, sol.iterations)


def best_l1_lp(kernel: Kernel, n: int, grid: int = 2048) -> L1Fit:
    """Best L1 polynomial of degree n-1 for the kernel sampled on a midpoint grid.

    The objective is the midpoint-rule L1 norm with weights 2pi/grid; it tends
    to E_n(K)_L as the grid is refined.
    """
    if grid < 8 * n:
        raise ValueError("grid must be at least 8n")
    f = kernel_callable(kernel)
    t = (np.arange(grid) + 0.5) * TWO_PI / grid
    return l1_fit(t, f(t), n - 1, np.full(grid, TWO_PI / grid))


# -- interpolation scan -----------------------------------------------------

@dataclass
class ScanResult:
    xi: float
    poly: TrigPoly
    value: float
    node_rule: str

    def __iter__(self):
        return iter((self.xi, self.poly, self.value))


def _scan_interpolant(f, n, p, xi, odd):
    step = math.pi / (n + p)
    if p > 0 and odd:
        k = np.arange(-1, 2 * (n + p) + 1)
        cand = xi + k * step
        inside = cand[(cand > 1e-12) & (cand < math.pi - 1e-12)][: n - 1]
        if n == 1:
            return TrigPoly.zero()
        return interpolate_odd(inside, f(inside))
    nodes = xi + np.arange(2 * n - 1) * step
    return interpolate_at_2nm1(nodes, f(nodes))


def best_l1_interp_scan(kernel: Kernel, n: int, p: int = 0, xi_grid: int = 64, xtol: float = 1e-10) -> ScanResult:
    """Minimize the L1 error of interpolants at xi + k pi/(n+p) over xi.

    With p = 0 (or a non-odd kernel) the first 2n-1 nodes are used.  For odd
    kernels and p > 0, the first n-1 nodes inside (0, pi) are used with odd
    interpolation.  A coarse midpoint-rule scan over ``xi_grid`` offsets is
    followed by golden-section refinement on the adaptive L1 norm.  The value
    always bounds E_n(K)_L from above.
    """
    if xi_grid < 64:
        raise ValueError("xi_grid must be at least 64")
    f = kernel_callable(kernel)
    odd = _is_odd_kernel(kernel)
    step = math.pi / (n + p)
    rule = "odd-interior-first-(n-1)" if (p > 0 and odd) else "first-(2n-1)"

    def coarse(xi):
        poly = _scan_interpolant(f, n, p, xi, odd)
        return l1_norm_midpoint(lambda t: f(t) - poly(t))

    def fine(xi):
        poly = _scan_interpolant(f, n, p, xi, odd)
        try:
            return l1_norm_residual(lambda t: f(t) - poly(t))
        except ToleranceNotMet:
            # nodes crowding a jump make the interpolant explode; never the optimum
            return math.inf

    xs = np.arange(xi_grid) * step / xi_grid
    vals = np.array([coarse(x) for x in xs])
    j = int(np.argmin(vals))
    h = step / xi_grid
    lo, hi = xs[j] - h, xs[j] + h
    # golden-section search
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = hi - g * (hi - lo), lo + g * (hi - lo)
    fc, fd = fine(c), fine(d)
    while hi - lo > xtol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - g * (hi - lo)
            fc = fine(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + g * (hi - lo)
            fd = fine(d)
    cands = [(fc, c), (fd, d), (fine(xs[j]), xs[j])]
    value, xi = min(cands)
    if not math.isfinite(value):
        raise ToleranceNotMet("no offset in the refined bracket gave a finite L1 error")
    xi_mod = xi % step
    if step - xi_mod < 1e-9:
        xi_mod = 0.0
    return ScanResult(xi_mod, _scan_interpolant(f, n, p, xi, odd), value, rule)


# -- sign convolution ---------------------------------------------------------

def _fourier_terms(kernel):
    """List of (coef_fn(k), tail_fn(J, N), phase)."""
    if isinstance(kernel, Harmonic):
        kernel = HarmonicSum((kernel,))
    out = []
    if isinstance(kernel, HarmonicSum):
        for h in kernel.harmonics:
            out.append((lambda k, h=h: np.where(k == h.k, h.amplitude, 0.0),
                        lambda jj, nn, h=h: 0.0 if (2 * jj + 1) * nn > h.k else abs(h.amplitude),
                        h.phase))
        return out
    if not isinstance(kernel, KernelSpec):
        raise TypeError("conv_sup_norm needs a KernelSpec or harmonic test kernel")
    for term in kernel.terms:
        if isinstance(term, PoissonTerm):
            def tail(jj, nn, term=term):
                qn = term.q ** nn
                return abs(term.alpha) * qn ** (2 * jj + 1) / ((2 * jj + 1) * (1.0 - qn * qn))
        else:
            def tail(jj, nn, term=term):
                if jj == 0:
                    return math.inf
                return abs(term.alpha) / (nn ** term.r * 2.0 * term.r * (2 * jj - 1) ** term.r)
        out.append((term.coefficient, tail, term.phase))
    return out


def _terms_needed(terms, big_n, tol, cap=1 << 22):
    jj = 1
    while jj < cap and sum(t(jj, big_n) for _, t, _ in terms) > tol:
        jj *= 2
    return jj


def _sign_conv(terms, big_n, x, n_terms, chunk=4096):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros(x.shape)
    for lo in range(0, n_terms, chunk):
        j = 2.0 * np.arange(lo, min(lo + chunk, n_terms)) + 1.0
        freq = j * big_n
        ang = np.multiply.outer(x, freq)
        for coef, _, phase in terms:
            cs, sn = _phase_cos_sin(phase)
            c = coef(freq) / j
            # sin(f x - phase pi/2) = sin(f x) cos - cos(f x) sin
            if cs:
                out += cs * (np.sin(ang) @ c)
            if sn:
                out -= sn * (np.cos(ang) @ c)
    return 4.0 / math.pi * out


def conv_sup_norm(kernel: Kernel, n_effective: int, tol: float = 1e-12, grid: int = 4096) -> float:
    """max_x |(1/pi) int sign(sin(N(x - t))) K(t) dt| with N = n_effective.

    Uses sign sin(Nu) = (4/pi) sum_k sin((2k+1)Nu)/(2k+1), so only the
    kernel's harmonics at odd multiples of N contribute.  |g| has period pi/N;
    it is maximized on a grid over one period, then refined by successive
    parabolic fits.  Slowly decaying kernels (D_1) are capped at 2^22 terms.
    """
    big_n = int(n_effective)
    terms = _fourier_terms(kernel)
    coarse_terms = _terms_needed(terms, big_n, 1e-7)
    full_terms = _terms_needed(terms, big_n, tol)
    x = np.arange(grid) * (math.pi / big_n) / grid
    g = _sign_conv(terms, big_n, x, coarse_terms)
    i = int(np.argmax(np.abs(g)))
    h = x[1] - x[0]
    x0 = x[i]
    sgn = 1.0 if g[i] >= 0 else -1.0
    for _ in range(6):
        y = sgn * _sign_conv(terms, big_n, np.array([x0 - h, x0, x0 + h]), full_terms)
        den = y[0] - 2.0 * y[1] + y[2]
        if den < 0:
            shift = 0.5 * h * (y[0] - y[2]) / den
            x0 = x0 + float(np.clip(shift, -h, h))
        h /= 8.0
    return float(abs(_sign_conv(terms, big_n, np.array([x0]), full_terms)[0]))
