"""Poisson and Bernoulli kernels, their linear combinations and coefficients.

A kernel term is either a Poisson kernel

    P_{q,beta}(t) = sum_{k>=1} q^k cos(k t - beta pi/2),   0 < q < 1,

or a Bernoulli kernel of odd order r

    D_r(t) = sum_{k>=1} k^{-r} cos(k t - r pi/2) = (-1)^((r-1)/2) sum_{k>=1} sin(k t) / k^r.

A :class:`KernelSpec` is a weighted sum of such terms.  Both families share the
shape ``c(k) cos(k t - phase pi/2)``, with ``phase = beta`` for Poisson terms and
``phase = r`` for Bernoulli terms; most routines here lean on that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .exceptions import Inconclusive, JumpPoint, MixedPhase, SpecError, ZeroDenominator

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-12



@dataclass(frozen=True)
class PoissonTerm:
    q: float
    beta: float = 0.0
    alpha: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise SpecError(f"Poisson term needs 0 < q < 1, got q={self.q!r}")
        if not (math.isfinite(self.beta) and math.isfinite(self.alpha)):
            raise SpecError("beta and alpha must be finite")

    @property
    def phase(self) -> float:
        return float(self.beta)

    def coefficient(self, k):
        return self.alpha * np.power(self.q, k)


@dataclass(frozen=True)
class BernoulliTerm:
    r: int
    alpha: float = 1.0

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1 or self.r % 2 == 0:
            raise SpecError(f"Bernoulli term needs odd r >= 1, got r={self.r!r}")
        if not math.isfinite(self.alpha):
            raise SpecError("alpha must be finite")
        object.__setattr__(self, "r", int(self.r))

    @property
    def phase(self) -> float:
        return float(self.r)

    def coefficient(self, k):
        return self.alpha / np.power(np.asarray(k, dtype=float), self.r)


KernelTerm = Union[PoissonTerm, BernoulliTerm]


def _same_phase(a: float, b: float) -> bool:
    # cos(kt - beta pi/2) is 4-periodic in beta
    d = (a - b) % 4.0
    return min(d, 4.0 - d) < 1e-14


@dataclass(frozen=True)
class KernelSpec:
    """Finite nontrivial linear combination of kernel terms."""

    terms: tuple

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise SpecError("a kernel spec needs at least one term")
        for term in terms:
            if not isinstance(term, (PoissonTerm, BernoulliTerm)):
                raise SpecError(f"unknown kernel term {term!r}")
        if sum(t.alpha ** 2 for t in terms) <= 0.0:
            raise SpecError("trivial combination: all weights are zero")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def poisson(cls, alphas: Sequence[float], qs: Sequence[float], beta: float = 0.0) -> "KernelSpec":
        if len(alphas) != len(qs):
            raise SpecError("alphas and qs differ in length")
        return cls(tuple(PoissonTerm(q, beta, a) for a, q in zip(alphas, qs)))

    @classmethod
    def bernoulli(cls, alphas: Sequence[float], rs: Sequence[int]) -> "KernelSpec":
        if len(alphas) != len(rs):
            raise SpecError("alphas and rs differ in length")
        return cls(tuple(BernoulliTerm(r, a) for a, r in zip(alphas, rs)))

    @classmethod
    def from_dicts(cls, items: Iterable[dict]) -> "KernelSpec":
        """Build a spec from the JSON document form (a list of term objects)."""
        if not isinstance(items, (list, tuple)):
            raise SpecError("spec document must be a list of term objects")
        terms = []
        for item in items:
            if not isinstance(item, dict) or "type" not in item:
                raise SpecError(f"bad term object: {item!r}")
            kind = item["type"]
            try:
                if kind == "poisson":
                    terms.append(PoissonTerm(float(item["q"]), float(item.get("beta", 0.0)),
                                             float(item.get("alpha", 1.0))))
                elif kind == "bernoulli":
                    r = item["r"]
                    if isinstance(r, bool) or not isinstance(r, (int, float)) or int(r) != r:
                        raise SpecError(f"Bernoulli r must be an odd integer, got {r!r}")
                    terms.append(BernoulliTerm(int(r), float(item.get("alpha", 1.0))))
                else:
                    raise SpecError(f"unknown term type {kind!r}")
            except (KeyError, TypeError) as exc:
                raise SpecError(f"bad term object {item!r}: {exc}") from exc
        return cls(tuple(terms))

    def to_dicts(self) -> list:
        out = []
        for t in self.terms:
            if isinstance(t, PoissonTerm):
                out.append({"type": "poisson", "q": t.q, "beta": t.beta, "alpha": t.alpha})
            else:
                out.append({"type": "bernoulli", "r": t.r, "alpha": t.alpha})
        return out

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def is_pure_poisson(self) -> bool:
        return all(isinstance(t, PoissonTerm) for t in self.terms)

    @property
    def phase(self):
        """Shared phase of all terms, or None when phases are mixed."""
        first = self.terms[0].phase
        if all(_same_phase(t.phase, first) for t in self.terms[1:]):
            return first
        return None

    @property
    def is_odd(self) -> bool:
        """True when every term is an odd function of t."""
        return all(_is_odd_integer(t.phase) for t in self.terms)

    def scaled(self, c: float) -> "KernelSpec":
        terms = []
        for t in self.terms:
            if isinstance(t, PoissonTerm):
                terms.append(PoissonTerm(t.q, t.beta, c * t.alpha))
            else:
                terms.append(BernoulliTerm(t.r, c * t.alpha))
        return KernelSpec(tuple(terms))

    def canonical(self) -> "KernelSpec":
        """Pure-Poisson canonical form: shared beta, distinct q sorted descending,
        no zero weights (so alpha_1 != 0)."""
        if not self.is_pure_poisson:
            raise SpecError("canonical form is defined for pure-Poisson specs only")
        if self.phase is None:
            raise MixedPhase("Poisson terms must share one beta")
        beta = self.terms[0].beta
        merged = {}
        for t in self.terms:
            merged[t.q] = merged.get(t.q, 0.0) + t.alpha
        pairs = sorted(((q, a) for q, a in merged.items() if a != 0.0), reverse=True)
        if not pairs:
            raise SpecError("trivial combination after merging equal q")
        return KernelSpec(tuple(PoissonTerm(q, beta, a) for q, a in pairs))

    def __call__(self, t, tol: float = DEFAULT_TOL, at_jump: str = "raise"):
        return eval_kernel(self, t, tol=tol, at_jump=at_jump)


def _is_odd_integer(x: float) -> bool:
    return float(x).is_integer() and int(x) % 2 == 1


def _phase_cos_sin(phase: float):
    """(cos, sin) of phase*pi/2, exact for integer phases."""
    if float(phase).is_integer():
        return [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][int(phase) % 4]
    ang = phase * math.pi / 2.0
    return math.cos(ang), math.sin(ang)


# -- coefficient sequences -------------------------------------------------

def term_coefficients(spec: KernelSpec, k) -> np.ndarray:
    """Per-term Fourier magnitudes c_i(k), shape (m,) + shape(k)."""
    return np.array([t.coefficient(k) for t in spec.terms])


def psi(spec: KernelSpec, k):
    """Coefficient sequence psi(k) = sum_i c_i(k) of a shared-phase spec.

    For pure-Poisson specs this is sum_i alpha_i q_i^k; a Bernoulli term
    contributes alpha / k^r.  Specs whose terms do not share one phase have no
    single sequence; use :func:`term_coefficients` for those.
    """
    if np.any(np.asarray(k) < 1):
        raise ValueError("psi is defined for k >= 1")
    if spec.phase is None:
        raise MixedPhase("terms do not share a phase; use term_coefficients()")
    return term_coefficients(spec, k).sum(axis=0)


def _require_canonical(spec: KernelSpec) -> KernelSpec:
    return spec.canonical()


def _ratio_parts(spec: KernelSpec, k):
    # a_i = alpha_i/alpha_1, rho_i = q_i/q_1 for i >= 2 (canonical order)
    c = _require_canonical(spec)
    q1, a1 = c.terms[0].q, c.terms[0].alpha
    a = np.array([t.alpha / a1 for t in c.terms[1:]])
    q = np.array([t.q for t in c.terms[1:]])
    k = np.asarray(k, dtype=float)
    w = a[:, None] * np.power((q / q1)[:, None], k.reshape(1, -1)) if a.size else np.zeros((0, k.size))
    return q1, q, w


def delta_k(spec: KernelSpec, k: int) -> float:
    """psi(k+1)/psi(k) - q_1, evaluated in the overflow-safe ratio form."""
    if k < 1:
        raise ValueError("k must be >= 1")
    q1, q, w = _ratio_parts(spec, [k])
    den = 1.0 + w[:, 0].sum()
    if den == 0.0:
        raise ZeroDenominator(f"psi({k}) = 0")
    return float((w[:, 0] * (q - q1)).sum() / den)


def epsilon_n(spec: KernelSpec, n: int, window: int = 100_000) -> float:
    """Upper bound on sup_{k>=n} |delta_k|.

    Scans |delta_k| directly from k = n until the analytic tail bound

        |delta_k| <= sum_i |a_i| rho_i^k (q_1 - q_i) / (1 - sum_i |a_i| rho_i^k)

    is valid (denominator sum below one) and no larger than the running
    maximum; both sums decrease in k, so the bound at the switch index covers
    every later k.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    c = _require_canonical(spec)
    if c.m == 1:
        return 0.0
    q1 = c.terms[0].q
    a = np.abs([t.alpha / c.terms[0].alpha for t in c.terms[1:]])
    q = np.array([t.q for t in c.terms[1:]])
    rho = q / q1
    running = 0.0
    chunk = 256
    start = n
    while start < n + window:
        ks = np.arange(start, start + chunk, dtype=float)
        _, _, w = _ratio_parts(c, ks)
        den = 1.0 + w.sum(axis=0)
        if np.any(den == 0.0):
            bad = int(ks[np.argmax(den == 0.0)])
            raise ZeroDenominator(f"psi({bad}) = 0")
        deltas = np.abs((w * (q - q1)[:, None]).sum(axis=0) / den)
        pw = a[:, None] * np.power(rho[:, None], ks[None, :])
        s = pw.sum(axis=0)
        tail = (pw * (q1 - q)[:, None]).sum(axis=0) / np.where(s < 1.0, 1.0 - s, np.nan)
        for j in range(ks.size):
            if s[j] < 1.0 and tail[j] <= running:
                return float(max(running, tail[j]))
            running = max(running, float(deltas[j]))
        start += chunk
    raise Inconclusive(f"tail bound for delta_k not reached within {window} terms past n={n}")


# -- evaluation -------------------------------------------------------------

def _poisson_sums(q: float, t: np.ndarray):
    ct, st = np.cos(t), np.sin(t)
    den = 1.0 - 2.0 * q * ct + q * q
    return (q * ct - q * q) / den, q * st / den


def _poisson_value(term: PoissonTerm, t: np.ndarray) -> np.ndarray:
    cs, sn = _phase_cos_sin(term.beta)
    ccos, csin = _poisson_sums(term.q, t)
    out = np.zeros_like(t)
    if cs:
        out += cs * ccos
    if sn:
        out += sn * csin
    return term.alpha * out


@lru_cache(maxsize=None)
def _bernoulli_numbers(r: int) -> tuple:
    # exact B_0..B_r (B_1 = -1/2); floating-point tables lose ~1e-13 already at B_4
    b = [Fraction(1)]
    for m in range(1, r + 1):
        b.append(-sum(math.comb(m + 1, k) * b[k] for k in range(m)) / (m + 1))
    return tuple(b)


@lru_cache(maxsize=None)
def _bernoulli_poly_coeffs(r: int) -> np.ndarray:
    # B_r(1/2 + y) = sum_k C(r,k) B_k(1/2) y^(r-k), B_k(1/2) = (2^(1-k) - 1) B_k; ascending powers of y
    bn = _bernoulli_numbers(r)
    coeffs = [math.comb(r, k) * (Fraction(2) ** (1 - k) - 1) * bn[k] for k in range(r + 1)]
    return np.array([float(c) for c in reversed(coeffs)])


def _bernoulli_series_terms(r: int, tol: float) -> int:
    # sum_{k>N} k^-r <= N^(1-r)/(r-1)
    return max(1, math.ceil(((r - 1) * tol) ** (-1.0 / (r - 1))))


def bernoulli_series(r: int, t, tol: float = DEFAULT_TOL) -> np.ndarray:
    """sum_{k<=N} sin(kt)/k^r with N chosen from the integral tail bound (r >= 3)."""
    if r < 3:
        raise ValueError("direct series needs r >= 3 for the tail bound")
    t = np.asarray(t, dtype=float)
    n_terms = _bernoulli_series_terms(r, tol)
    out = np.zeros(t.shape)
    flat = t.reshape(-1)
    acc = out.reshape(-1)
    block = 2048
    for lo in range(1, n_terms + 1, block):
        k = np.arange(lo, min(lo + block, n_terms + 1), dtype=float)
        acc += (np.sin(np.outer(flat, k)) / k ** r).sum(axis=1)
    return out


def _bernoulli_value(term: BernoulliTerm, t: np.ndarray, tol: float, at_jump: str, method: str):
    r = term.r
    sign = -1.0 if (r // 2) % 2 else 1.0  # (-1)^((r-1)/2)
    tm = np.mod(t, TWO_PI)
    if r == 1:
        jump = tm == 0.0
        if np.any(jump) and at_jump == "raise":
            raise JumpPoint("D_1 evaluated at its jump t = 0 (mod 2pi)")
        val = (math.pi - tm) / 2.0
        val = np.where(jump, 0.0, val)  # series value: mean of one-sided limits
        return term.alpha * val
    if method == "auto":
        method = "polynomial"
    if method == "series":
        return term.alpha * sign * bernoulli_series(r, tm, tol)
    # sum sin(kt)/k^r = (-1)^((r+1)/2) (2pi)^r B_r(t/2pi) / (2 r!)  on [0, 2pi]
    y = tm / TWO_PI - 0.5
    poly = np.polynomial.polynomial.polyval(y, _bernoulli_poly_coeffs(r))
    series = -sign * TWO_PI ** r / (2.0 * math.factorial(r)) * poly
    return term.alpha * sign * series


def eval_kernel(spec: KernelSpec, t, tol: float = DEFAULT_TOL, at_jump: str = "raise",
                bernoulli_method: str = "auto"):
    """Evaluate the kernel combination at t (scalar or array).

    Poisson terms use the geometric-series closed form.  ``D_1`` uses
    (pi - t)/2 on (0, 2pi); at its jump it raises :class:`JumpPoint`, or with
    ``at_jump="mean"`` returns the series value 0.  Higher odd orders use the
    Bernoulli-polynomial closed form; ``bernoulli_method="series"`` sums the
    series directly to ``tol`` instead.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if at_jump not in ("raise", "mean"):
        raise ValueError("at_jump must be 'raise' or 'mean'")
    scalar = np.ndim(t) == 0
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    total = np.zeros_like(tt)
    for term in spec.terms:
        if isinstance(term, PoissonTerm):
            total += _poisson_value(term, tt)
        else:
            total += _bernoulli_value(term, tt, tol, at_jump, bernoulli_method)
    return float(total[0]) if scalar else total.reshape(np.shape(t))
