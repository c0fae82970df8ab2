"""Real trigonometric polynomials and interpolation.

    T(t) = a_0/2 + sum_{v=1..d} (a_v cos(v t) + b_v sin(v t))
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SingularSystem

COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """Trigonometric polynomial of formal degree ``len(a) - 1``.

    ``a`` holds a_0..a_d, ``b`` holds b_1..b_d.
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float)).copy()
        b = np.atleast_1d(np.asarray(self.b, dtype=float)).copy()
        if a.size == 0:
            a = np.zeros(1)
        if b.size != a.size - 1:
            raise ValueError(f"need len(b) == len(a) - 1, got {b.size} and {a.size}")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def zero(cls, degree: int = 0) -> "TrigPoly":
        return cls(np.zeros(degree + 1), np.zeros(degree))

    @classmethod
    def sine(cls, b) -> "TrigPoly":
        """Odd polynomial sum_v b_v sin(v t)."""
        b = np.asarray(b, dtype=float)
        return cls(np.zeros(b.size + 1), b)

    @classmethod
    def from_vector(cls, coef, degree: int) -> "TrigPoly":
        """Inverse of :meth:`to_vector`: [a_0, a_1, b_1, ..., a_d, b_d]."""
        coef = np.asarray(coef, dtype=float)
        if coef.size != 2 * degree + 1:
            raise ValueError("coefficient vector has the wrong length")
        return cls(np.r_[coef[0], coef[1::2]], coef[2::2])

    def to_vector(self) -> np.ndarray:
        out = np.empty(2 * self.degree + 1)
        out[0] = self.a[0]
        out[1::2] = self.a[1:]
        out[2::2] = self.b
        return out

    @property
    def degree(self) -> int:
        return self.a.size - 1

    @property
    def effective_degree(self) -> int:
        """Highest v with a nonzero coefficient (0 for constants)."""
        nz = np.nonzero((self.a[1:] != 0) | (self.b != 0))[0]
        return int(nz[-1]) + 1 if nz.size else 0

    @property
    def is_odd(self) -> bool:
        return not np.any(self.a)

    def padded(self, degree: int) -> "TrigPoly":
        if degree < self.degree:
            raise ValueError("cannot pad to a lower degree")
        extra = degree - self.degree
        return TrigPoly(np.r_[self.a, np.zeros(extra)], np.r_[self.b, np.zeros(extra)])

    def __call__(self, t):
        return eval_poly(self, t)

    def __neg__(self):
        return TrigPoly(-self.a, -self.b)

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        d = max(self.degree, other.degree)
        x, y = self.padded(d), other.padded(d)
        return TrigPoly(x.a + y.a, x.b + y.b)

    def __sub__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return _product(self, other)
        return TrigPoly(self.a * other, self.b * other)

    __rmul__ = __mul__

    def __repr__(self):
        return f"TrigPoly(a={self.a.tolist()}, b={self.b.tolist()})"


def _product(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    # product-to-sum on each pair of harmonics
    d = p.degree + q.degree
    a = np.zeros(d + 1)
    b = np.zeros(d + 1)  # b[0] unused
    pa = p.a.copy()
    qa = q.a.copy()
    pa[0] *= 0.5
    qa[0] *= 0.5
    pb = np.r_[0.0, p.b]
    qb = np.r_[0.0, q.b]
    # a[0] stores the constant term c, reported as a_0 = 2c
    for i in range(p.degree + 1):
        for j in range(q.degree + 1):
            s, dif = i + j, abs(i - j)
            sgn = 1.0 if i >= j else -1.0
            cc = pa[i] * qa[j]
            if cc:
                a[s] += 0.5 * cc
                a[dif] += 0.5 * cc
            ss = pb[i] * qb[j]
            if ss:
                a[dif] += 0.5 * ss
                a[s] -= 0.5 * ss
            sc = pb[i] * qa[j]  # sin(i t) cos(j t)
            if sc:
                b[s] += 0.5 * sc
                b[dif] += 0.5 * sgn * sc
            cs = pa[i] * qb[j]  # cos(i t) sin(j t)
            if cs:
                b[s] += 0.5 * cs
                b[dif] -= 0.5 * sgn * cs
    a[0] *= 2.0
    return TrigPoly(a, b[1:])


def eval_poly(p: TrigPoly, t):
    """Evaluate p at t (scalar or array)."""
    scalar = np.ndim(t) == 0
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.full(tt.shape, 0.5 * p.a[0])
    if p.degree:
        v = np.arange(1, p.degree + 1)
        ang = np.multiply.outer(tt, v)
        out = out + np.cos(ang) @ p.a[1:] + np.sin(ang) @ p.b
    return float(out[0]) if scalar else out


def _solve(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if mat.size == 0:
        return np.zeros(0)
    cond = np.linalg.cond(mat)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystem(f"collocation matrix condition number {cond:.3g} exceeds {COND_LIMIT:.0e}")
    return np.linalg.solve(mat, rhs)


def interpolate_odd(nodes, values) -> TrigPoly:
    """Odd polynomial sum_{v<n} b_v sin(v t) through n-1 nodes in (0, pi)."""
    nodes = np.asarray(nodes, dtype=float).reshape(-1)
    values = np.asarray(values, dtype=float).reshape(-1)
    if nodes.size != values.size:
        raise ValueError("nodes and values differ in length")
    if np.any(nodes <= 0.0) or np.any(nodes >= np.pi):
        raise ValueError("odd interpolation nodes must lie strictly inside (0, pi)")
    if np.unique(nodes).size != nodes.size:
        raise SingularSystem("interpolation nodes are not distinct")
    v = np.arange(1, nodes.size + 1)
    mat = np.sin(np.multiply.outer(nodes, v))
    return TrigPoly.sine(_solve(mat, values))


def design_matrix(t, degree: int) -> np.ndarray:
    """Columns [1/2, cos t, sin t, ..., cos dt, sin dt], matching :meth:`TrigPoly.to_vector`."""
    t = np.asarray(t, dtype=float).reshape(-1)
    out = np.empty((t.size, 2 * degree + 1))
    out[:, 0] = 0.5
    if degree:
        ang = np.multiply.outer(t, np.arange(1, degree + 1))
        out[:, 1::2] = np.cos(ang)
        out[:, 2::2] = np.sin(ang)
    return out


def interpolate_at_2nm1(nodes, values) -> TrigPoly:
    """Unique polynomial of degree n-1 through 2n-1 nodes distinct mod 2pi."""
    nodes = np.asarray(nodes, dtype=float).reshape(-1)
    values = np.asarray(values, dtype=float).reshape(-1)
    if nodes.size != values.size:
        raise ValueError("nodes and values differ in length")
    if nodes.size % 2 != 1:
        raise ValueError("need an odd number (2n-1) of nodes")
    wrapped = np.mod(nodes, 2 * np.pi)
    if np.unique(np.round(wrapped, 14)).size != nodes.size:
        raise SingularSystem("interpolation nodes are not distinct modulo 2pi")
    degree = (nodes.size - 1) // 2
    coef = _solve(design_matrix(nodes, degree), values)
    return TrigPoly.from_vector(coef, degree)
