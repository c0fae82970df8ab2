"""Dense revised simplex for bounded-variable linear programs.

    minimize c @ x  subject to  A @ x = b,  lower <= x <= upper

Structural bounds must be finite.  Phase 1 starts from every structural
variable at a bound (caller may pick which) plus one artificial per row; the
basis inverse is kept explicitly and refactorized periodically.  Pricing is
Dantzig's rule, switching to Bland's rule after a run of degenerate pivots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SimplexCycling, UnboundedLP

REFACTOR_EVERY = 64
DEGENERATE_RUN = 50


@dataclass
class LPSolution:
    x: np.ndarray
    duals: np.ndarray
    objective: float
    iterations: int
    basis: np.ndarray


def solve_bounded_lp(c, a, b, lower, upper, start_at_upper=None, max_iter=None,
                     tol: float = 1e-9) -> LPSolution:
    c = np.asarray(c, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = a.shape
    lower = np.broadcast_to(np.asarray(lower, dtype=float), (n,)).copy()
    upper = np.broadcast_to(np.asarray(upper, dtype=float), (n,)).copy()
    if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
        raise ValueError("structural bounds must be finite")
    if np.any(lower > upper):
        raise ValueError("infeasible bounds")
    if max_iter is None:
        max_iter = 50 * max(n, 1)

    x = lower.copy()
    if start_at_upper is not None:
        x = np.where(start_at_upper, upper, lower)
    r = b - a @ x
    s = np.where(r < 0, -1.0, 1.0)
    a_full = np.hstack([a, np.diag(s)])
    lo = np.r_[lower, np.zeros(m)]
    hi = np.r_[upper, np.full(m, np.inf)]
    xf = np.r_[x, np.abs(r)]
    basis = np.arange(n, n + m)
    binv = np.diag(s)
    total_iters = 0

    def run(cost, budget):
        nonlocal binv, basis, xf, total_iters
        is_basic = np.zeros(n + m, dtype=bool)
        is_basic[basis] = True
        cscale = max(1.0, float(np.max(np.abs(cost))))
        dtol = tol * cscale
        degenerate = 0
        since_refactor = 0
        for _ in range(budget):
            if since_refactor >= REFACTOR_EVERY:
                binv = np.linalg.inv(a_full[:, basis])
                nb = ~is_basic
                xf[basis] = binv @ (b - a_full[:, nb] @ xf[nb])
                since_refactor = 0
            y = cost[basis] @ binv
            d = cost - y @ a_full
            at_lo = xf <= lo
            at_hi = xf >= hi
            movable = hi > lo
            cand = ~is_basic & movable & ((at_lo & (d < -dtol)) | (at_hi & (d > dtol)))
            # free-floating nonbasic values cannot occur: nonbasics sit at a bound
            if not np.any(cand):
                return y
            idx = np.nonzero(cand)[0]
            j = int(idx[0]) if degenerate >= DEGENERATE_RUN else int(idx[np.argmax(np.abs(d[idx]))])
            sigma = 1.0 if at_lo[j] else -1.0
            col = binv @ a_full[:, j]
            sc = sigma * col
            xb = xf[basis]
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.full(m, np.inf)
                dec = sc > tol
                inc = sc < -tol
                ratio[dec] = (xb[dec] - lo[basis][dec]) / sc[dec]
                ratio[inc] = (hi[basis][inc] - xb[inc]) / (-sc[inc])
            ratio = np.maximum(ratio, 0.0)
            theta_flip = hi[j] - lo[j]
            rmin = float(np.min(ratio)) if m else np.inf
            theta = min(theta_flip, rmin)
            if not np.isfinite(theta):
                raise UnboundedLP("unbounded direction in simplex")
            xf[basis] = xb - theta * sc
            xf[j] += sigma * theta
            total_iters += 1
            since_refactor += 1
            degenerate = degenerate + 1 if theta <= 1e-12 else 0
            if theta_flip <= rmin:
                xf[j] = hi[j] if sigma > 0 else lo[j]
                continue
            ties = np.nonzero(ratio <= rmin + 1e-14)[0]
            rr = int(ties[np.argmin(basis[ties])]) if degenerate >= DEGENERATE_RUN else \
                int(ties[np.argmax(np.abs(col[ties]))])
            leaving = basis[rr]
            xf[leaving] = lo[leaving] if sc[rr] > 0 else hi[leaving]
            piv = col[rr]
            binv[rr] /= piv
            others = np.arange(m) != rr
            binv[others] -= np.outer(col[others], binv[rr])
            is_basic[leaving] = False
            is_basic[j] = True
            basis[rr] = j
        raise SimplexCycling(f"iteration cap {max_iter} reached")

    cost1 = np.r_[np.zeros(n), np.ones(m)]
    run(cost1, max_iter)
    infeas = float(np.sum(xf[n:]))
    if infeas > 1e-8 * max(1.0, float(np.max(np.abs(b))) if m else 1.0):
        raise ValueError(f"LP infeasible (phase 1 residual {infeas:.3g})")
    # drive artificials out of the basis where a structural pivot exists
    for rr in range(m):
        if basis[rr] >= n:
            row = binv[rr] @ a_full[:, :n]
            row[np.isin(np.arange(n), basis)] = 0.0
            j = int(np.argmax(np.abs(row)))
            if abs(row[j]) > 1e-7:
                col = binv @ a_full[:, j]
                piv = col[rr]
                binv[rr] /= piv
                others = np.arange(m) != rr
                binv[others] -= np.outer(col[others], binv[rr])
                basis[rr] = j
    xf[n:] = 0.0
    hi[n:] = 0.0
    cost2 = np.r_[c, np.zeros(m)]
    y = run(cost2, max_iter - total_iters)
    xs = xf[:n].copy()
    return LPSolution(xs, y, float(c @ xs), total_iters, basis.copy())
