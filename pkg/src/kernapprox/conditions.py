"""Numerical sign-change counting and the uniform sign-change certificates.

A kernel K satisfies the (n, p) condition when some polynomial T of degree
n-1 makes K - T change sign on [0, 2pi) exactly at xi + k pi/(n+p),
k = 0..2(n+p)-1, for one xi in [0, pi/(n+p)).  p = 0 is the classical
Nagy condition.  Everything here is grid-and-bisection numerics: zeros of even
multiplicity, or two zeros inside one grid cell, are invisible to the scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Union

import numpy as np

from .exceptions import DegreeTooHigh
from .kernels import KernelSpec, eval_kernel
from .trigpoly import TrigPoly

TWO_PI = 2.0 * math.pi

GRID_SIZE = 8192
REFINE_TOL = 1e-12
TOL_NODE = 1e-8


class Verdict(str, Enum):
    SATISFIED = "Satisfied"
    VIOLATED = "Violated"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class SignChangeCertificate:
    n: int
    p: int
    xi: float
    locations: np.ndarray
    count: int
    max_node_deviation: float
    verdict: Verdict
    reason: str = ""
    grid_size: int = GRID_SIZE
    node_indices: list = field(default_factory=list)

    @property
    def satisfied(self) -> bool:
        return self.verdict is Verdict.SATISFIED

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "xi": self.xi,
            "locations": [float(x) for x in self.locations],
            "count": self.count,
            "max_node_deviation": self.max_node_deviation,
            "verdict": self.verdict.value,
            "reason": self.reason,
        }


def scan_grid(grid_size: int) -> np.ndarray:
    """Uniform grid on [0, 2pi) shifted by half a step, so t = 0 is never sampled."""
    h = TWO_PI / grid_size
    return (np.arange(grid_size) + 0.5) * h


def find_sign_changes(f: Callable, grid_size: int = GRID_SIZE, refine_tol: float = REFINE_TOL) -> np.ndarray:
    """Sorted sign-change points of a 2pi-periodic vectorized ``f`` on [0, 2pi).

    Every grid cell whose end samples have opposite signs is bisected down to
    ``refine_tol``; the wrap-around cell straddling 2pi is included.  Samples
    that are exactly zero are skipped when pairing neighbours, so a zero that
    lands on the grid is still caught by the surrounding bracket.
    """
    if grid_size < 64:
        raise ValueError("grid_size must be at least 64")
    t = scan_grid(grid_size)
    y = np.asarray(f(t), dtype=float)
    if not np.all(np.isfinite(y)):
        raise ValueError("f is not finite on the scan grid")
    nz = np.nonzero(y)[0]
    if nz.size < 2:
        return np.zeros(0)
    left = nz
    right = np.roll(nz, -1)
    flip = np.sign(y[left]) != np.sign(y[right])
    if not np.any(flip):
        return np.zeros(0)
    lo = t[left[flip]].copy()
    hi = t[right[flip]].copy()
    hi = np.where(hi <= lo, hi + TWO_PI, hi)
    f_lo = y[left[flip]].copy()
    # vectorized bisection over all brackets
    while True:
        active = (hi - lo) > refine_tol
        if not np.any(active):
            break
        mid = 0.5 * (lo + hi)
        fm = np.asarray(f(mid[active]), dtype=float)
        m_all = np.full(mid.shape, np.nan)
        m_all[active] = fm
        exact = active & (m_all == 0.0)
        lo = np.where(exact, mid, lo)
        hi = np.where(exact, mid, hi)
        same = active & ~exact & (np.sign(m_all) == np.sign(f_lo))
        lo = np.where(same, mid, lo)
        f_lo = np.where(same, m_all, f_lo)
        other = active & ~exact & ~same
        hi = np.where(other, mid, hi)
    roots = np.mod(0.5 * (lo + hi), TWO_PI)
    roots[roots >= TWO_PI] = 0.0
    return np.sort(roots)


KernelLike = Union[KernelSpec, Callable]


def kernel_callable(kernel: KernelLike) -> Callable:
    """Vectorized evaluator; spec kernels report the series value at jumps."""
    if isinstance(kernel, KernelSpec):
        return lambda t: eval_kernel(kernel, t, at_jump="mean")
    return kernel


def residual_function(kernel: KernelLike, poly: TrigPoly) -> Callable:
    k = kernel_callable(kernel)
    return lambda t: np.asarray(k(t), dtype=float) - poly(t)


def _circular_offset(locations: np.ndarray, step: float) -> float:
    ang = (np.mod(locations, step) / step) * TWO_PI
    mean = math.atan2(np.sin(ang).mean(), np.cos(ang).mean())
    return (mean / TWO_PI * step) % step


def fit_uniform_pattern(locations: np.ndarray, n: int, p: int, tol_node: float = TOL_NODE):
    """Best common offset xi and the max deviation from xi + k pi/(n+p).

    Returns (xi, max_deviation, indices) where indices are the pattern slots
    matched by each location.
    """
    step = math.pi / (n + p)
    slots = 2 * (n + p)
    xi = _circular_offset(locations, step)
    if step - xi < tol_node:
        xi = 0.0
    k = np.rint((locations - xi) / step)
    dev = np.abs(locations - xi - k * step)
    idx = np.mod(k.astype(int), slots)
    return xi, float(dev.max()) if dev.size else 0.0, idx.tolist()


def verify_N_np(kernel: KernelLike, poly: TrigPoly, n: int, p: int = 0, tol_node: float = TOL_NODE,
                grid_size: int = GRID_SIZE, refine_tol: float = REFINE_TOL) -> SignChangeCertificate:
    """Certify that ``kernel - poly`` changes sign exactly at xi + k pi/(n+p).

    Verdicts: Satisfied when the count is 2(n+p), every slot is hit once and
    the largest node deviation is within ``tol_node``; Violated on a count
    mismatch or a misfit larger than two grid steps; Inconclusive when the
    residual is numerically zero or the misfit sits between the two limits.
    """
    if n < 1 or p < 0:
        raise ValueError("need n >= 1 and p >= 0")
    if poly.effective_degree >= n:
        raise DegreeTooHigh(f"polynomial degree {poly.effective_degree} is not below n={n}")
    kf = kernel_callable(kernel)
    res = residual_function(kernel, poly)
    grid = scan_grid(grid_size)
    scale = float(np.max(np.abs(kf(grid))))
    rmax = float(np.max(np.abs(res(grid))))
    if rmax < 1e-10 * (scale if scale > 0 else 1.0):
        return SignChangeCertificate(n, p, 0.0, np.zeros(0), 0, 0.0, Verdict.INCONCLUSIVE,
                                     "residual vanishes: kernel is a polynomial of degree < n",
                                     grid_size)
    locs = find_sign_changes(res, grid_size, refine_tol)
    expected = 2 * (n + p)
    if locs.size == 0:
        return SignChangeCertificate(n, p, 0.0, locs, 0, math.inf, Verdict.VIOLATED,
                                     f"no sign changes, expected {expected}", grid_size)
    xi, dev, idx = fit_uniform_pattern(locs, n, p, tol_node)
    cert = SignChangeCertificate(n, p, xi, locs, int(locs.size), dev, Verdict.VIOLATED,
                                 grid_size=grid_size, node_indices=idx)
    if locs.size != expected:
        cert.reason = f"found {locs.size} sign changes, expected {expected}"
        return cert
    if sorted(idx) != list(range(expected)):
        cert.reason = "sign changes do not occupy every pattern slot once"
        return cert
    if dev <= tol_node:
        cert.verdict = Verdict.SATISFIED
        cert.reason = "uniform pattern confirmed"
    elif dev > 2.0 * TWO_PI / grid_size:
        cert.reason = f"node deviation {dev:.3g} exceeds two grid steps"
    else:
        cert.verdict = Verdict.INCONCLUSIVE
        cert.reason = f"node deviation {dev:.3g} above tol_node but within scan resolution"
    return cert


def midpoint_signs(f: Callable, locations: np.ndarray) -> np.ndarray:
    """Signs of f halfway between consecutive (cyclic) sign-change locations."""
    locs = np.sort(np.asarray(locations, dtype=float))
    nxt = np.r_[locs[1:], locs[0] + TWO_PI]
    return np.sign(f(0.5 * (locs + nxt)))
