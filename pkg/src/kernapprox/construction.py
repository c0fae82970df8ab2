"""Extremal combinations of odd kernels.

Given odd kernels K_1..K_m and nodes t_1..t_{n+l-1} in (0, pi) with l < m,
there is a nontrivial combination sum alpha_i K_i that an odd polynomial of
degree n-1 interpolates at every node: interpolate each K_i at the first n-1
nodes, collect the leftover residuals at the remaining l nodes into an l x m
matrix, and take a null vector of it.  With uniform nodes k pi/(n+m-1) and
Bernoulli or conjugate Poisson kernels the resulting residual changes sign
exactly at k pi/(n+m-1), which pins down the best mean approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .conditions import (SignChangeCertificate, find_sign_changes, midpoint_signs, residual_function,
                         scan_grid, verify_N_np)
from .exact import BestApproxResult, exact_value_bernoulli_combo, exact_value_conj_poisson_combo
from .exceptions import DegenerateCombination, DimensionMismatch, DuplicateQ, SpecError
from .kernels import BernoulliTerm, KernelSpec, PoissonTerm, eval_kernel
from .trigpoly import TrigPoly, interpolate_odd

NULL_RANK_TOL = 1e-10
DEGENERATE_TOL = 1e-12

KINDS = ("bernoulli", "conj-poisson")


@dataclass
class NullCombination:
    """Null-vector combination: alpha_star, the odd interpolant, and diagnostics."""

    alpha_star: np.ndarray
    poly: TrigPoly
    nodes: np.ndarray
    residual_matrix: np.ndarray
    degenerate: bool
    ambiguous: bool

    def __iter__(self):
        # allows ``alpha, poly = build_alpha_star(...)``
        return iter((self.alpha_star, self.poly))


@dataclass
class ConstructionResult:
    alpha_star: np.ndarray
    poly: TrigPoly
    nodes: np.ndarray
    certificate: SignChangeCertificate
    delta: Optional[int]
    degenerate: bool
    kind: str
    params: tuple
    n: int
    m: int
    spec: KernelSpec
    ambiguous: bool = False
    alternation_ok: bool = False
    closed_form: Optional[BestApproxResult] = None
    info: dict = field(default_factory=dict)

    @property
    def n_effective(self) -> int:
        return self.n + self.m - 1

    def residual(self, t):
        return residual_function(self.spec, self.poly)(t)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": list(self.params),
            "n": self.n,
            "m": self.m,
            "alpha_star": self.alpha_star.tolist(),
            "poly": {"a": self.poly.a.tolist(), "b": self.poly.b.tolist()},
            "nodes": self.nodes.tolist(),
            "delta": self.delta,
            "degenerate": self.degenerate,
            "ambiguous": self.ambiguous,
            "alternation_ok": self.alternation_ok,
            "closed_form": None if self.closed_form is None else self.closed_form.value,
            "certificate": self.certificate.to_dict(),
        }


def null_vector(mat: np.ndarray, rel_tol: float = NULL_RANK_TOL):
    """A null vector of ``mat`` by Gauss-Jordan elimination with complete pivoting.

    Numerical rank stops at pivots below ``rel_tol`` times the first pivot.
    Returns (vector, nullity); when the nullity exceeds one, the free column
    with the smallest original index is set to one.
    """
    a = np.array(mat, dtype=float, copy=True)
    rows, cols = a.shape
    perm = np.arange(cols)
    rank = 0
    first = None
    for step in range(min(rows, cols)):
        sub = np.abs(a[step:, step:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        piv = sub[i, j]
        if first is None:
            first = piv
        if piv == 0.0 or piv <= rel_tol * first:
            break
        i += step
        j += step
        a[[step, i]] = a[[i, step]]
        a[:, [step, j]] = a[:, [j, step]]
        perm[[step, j]] = perm[[j, step]]
        a[step] /= a[step, step]
        for r in range(rows):
            if r != step and a[r, step] != 0.0:
                a[r] -= a[r, step] * a[step]
        rank += 1
    free_pos = list(range(rank, cols))
    chosen = min(free_pos, key=lambda pos: perm[pos])
    x = np.zeros(cols)
    x[chosen] = 1.0
    x[:rank] = -a[:rank, chosen]
    out = np.zeros(cols)
    out[perm] = x
    return out, cols - rank


def _normalize(alpha: np.ndarray) -> np.ndarray:
    alpha = alpha / np.max(np.abs(alpha))
    first = alpha[np.nonzero(alpha)[0][0]]
    return alpha if first > 0 else -alpha


def build_alpha_star(kernels: Sequence[Callable], n: int, l: int,
                     nodes: Optional[Sequence[float]] = None) -> NullCombination:
    """Nontrivial combination of odd kernels interpolated at n+l-1 nodes.

    ``kernels`` are vectorized odd 2pi-periodic callables.  ``nodes`` default
    to k pi/(n+l), k = 1..n+l-1.
    """
    m = len(kernels)
    if m < 2:
        raise ValueError("need at least two kernels")
    if not 1 <= l <= m - 1:
        raise ValueError(f"l must lie in [1, {m - 1}]")
    if n < 1:
        raise ValueError("n must be >= 1")
    if nodes is None:
        nodes = np.arange(1, n + l) * math.pi / (n + l)
    nodes = np.asarray(nodes, dtype=float)
    if nodes.size != n + l - 1:
        raise DimensionMismatch(f"need {n + l - 1} nodes, got {nodes.size}")
    base, extra = nodes[: n - 1], nodes[n - 1:]
    polys = []
    resid = np.empty((l, m))
    for i, k in enumerate(kernels):
        p = interpolate_odd(base, k(base)) if n > 1 else TrigPoly.zero()
        polys.append(p)
        resid[:, i] = k(extra) - p(extra)
    alpha, nullity = null_vector(resid)
    alpha = _normalize(alpha)
    poly = TrigPoly.zero(max(n - 1, 0))
    for a, p in zip(alpha, polys):
        poly = poly + a * p
    grid = scan_grid(1024)
    combined = sum(a * np.asarray(k(grid)) for a, k in zip(alpha, kernels)) - poly(grid)
    scale = max(max(float(np.max(np.abs(k(grid)))) for k in kernels), 1e-300)
    degenerate = float(np.max(np.abs(combined))) < DEGENERATE_TOL * scale
    return NullCombination(alpha, poly, nodes, resid, degenerate, nullity > 1)


def _combo_terms(kind: str, params):
    if kind == "bernoulli":
        rs = [int(r) for r in params]
        if len(set(rs)) != len(rs):
            raise SpecError("Bernoulli orders must be distinct")
        return [BernoulliTerm(r, 1.0) for r in rs]
    if kind == "conj-poisson":
        qs = [float(q) for q in params]
        if len(set(qs)) != len(qs):
            raise DuplicateQ("q_i must be distinct")
        return [PoissonTerm(q, 1.0, 1.0) for q in qs]
    raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")


def construct_uniform(kind: str, params: Sequence, n: int, m: Optional[int] = None,
                      tol_node: float = 1e-8, grid_size: int = 8192) -> ConstructionResult:
    """Build the extremal combination at uniform nodes k pi/(n+m-1) and certify it.

    ``kind`` is ``"bernoulli"`` (params are distinct odd orders r_i) or
    ``"conj-poisson"`` (params are distinct q_i).  The residual is checked for
    the (n, m-1) uniform sign-change pattern and for the alternation
    sign(K - T) = delta sign sin((n+m-1) t) at every cell midpoint.
    """
    params = tuple(params)
    if m is None:
        m = len(params)
    if m != len(params):
        raise DimensionMismatch(f"m={m} but {len(params)} parameters given")
    if m < 2:
        raise ValueError("construction needs m >= 2 kernels")
    if n < 1:
        raise ValueError("n must be >= 1")
    terms = _combo_terms(kind, params)
    kernels = [lambda t, term=term: eval_kernel(KernelSpec((term,)), t, at_jump="mean") for term in terms]
    big_n = n + m - 1
    combo = build_alpha_star(kernels, n, m - 1, np.arange(1, big_n) * math.pi / big_n)
    if combo.degenerate:
        raise DegenerateCombination("residual of the constructed combination vanishes identically")
    spec = KernelSpec(tuple(
        BernoulliTerm(t.r, a) if isinstance(t, BernoulliTerm) else PoissonTerm(t.q, 1.0, a)
        for t, a in zip(terms, combo.alpha_star)))
    res = residual_function(spec, combo.poly)
    first_mid = math.pi / (2 * big_n)
    delta = int(np.sign(res(np.array([first_mid]))[0])) or None
    cert = verify_N_np(spec, combo.poly, n, m - 1, tol_node=tol_node, grid_size=grid_size)
    mids = (np.arange(2 * big_n) + 0.5) * math.pi / big_n
    pattern = np.where(np.arange(2 * big_n) % 2 == 0, 1.0, -1.0)
    alternation_ok = delta is not None and bool(np.all(np.sign(res(mids)) == delta * pattern))
    if kind == "bernoulli":
        nodes = np.arange(1, 2 * big_n) * math.pi / big_n
        closed = exact_value_bernoulli_combo(combo.alpha_star, params, n, m)
    else:
        nodes = np.arange(0, 2 * big_n) * math.pi / big_n
        closed = exact_value_conj_poisson_combo(combo.alpha_star, params, n, m)
    return ConstructionResult(combo.alpha_star, combo.poly, nodes, cert, delta, False, kind, params, n, m,
                              spec, combo.ambiguous, alternation_ok, closed)


def interior_sign_changes(result: ConstructionResult, grid_size: int = 8192, refine_tol: float = 1e-12) -> np.ndarray:
    """Sign changes of the residual strictly inside (0, 2pi)."""
    locs = find_sign_changes(result.residual, grid_size, refine_tol)
    return locs[(locs > 1e-9) & (locs < 2 * math.pi - 1e-9)]


def alternation_signs(result: ConstructionResult) -> np.ndarray:
    """Residual signs between consecutive detected sign changes."""
    return midpoint_signs(result.residual, result.certificate.locations)


def rational_form_conj_poisson(alpha: Sequence[float], q_bar: Sequence[float]):
    """Numerator polynomial and denominator of a conjugate Poisson combination.

    sum_i alpha_i q_i sin t / (1 - 2 q_i cos t + q_i^2) = N(t) / prod_i (1 - 2 q_i cos t + q_i^2),
    where N is an odd polynomial of degree at most m.
    """
    alpha = np.asarray(alpha, dtype=float).reshape(-1)
    q = np.asarray(q_bar, dtype=float).reshape(-1)
    if alpha.size != q.size:
        raise DimensionMismatch("alpha and q_bar differ in length")
    if np.unique(q).size != q.size:
        raise DuplicateQ("q_i must be distinct")
    if np.any((q <= 0) | (q >= 1)):
        raise SpecError("q_i must lie in (0, 1)")
    # 1 - 2q cos t + q^2 as a cosine polynomial (a_0/2 = 1 + q^2)
    factors = [TrigPoly([2.0 * (1.0 + qk * qk), -2.0 * qk], [0.0]) for qk in q]
    inner = TrigPoly.zero()
    for i in range(q.size):
        prod = TrigPoly([2.0], [])
        for k, fk in enumerate(factors):
            if k != i:
                prod = prod * fk
        inner = inner + (alpha[i] * q[i]) * prod
    numerator = TrigPoly([0.0, 0.0], [1.0]) * inner

    def denominator(t):
        t = np.asarray(t, dtype=float)
        return np.prod([1.0 - 2.0 * qk * np.cos(t) + qk * qk for qk in q], axis=0)

    return numerator, denominator
