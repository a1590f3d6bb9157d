"""Quadrature and series engines with error control.

Two double-exponential rules back every integral in the library: a tanh-sinh
transform for finite intervals (endpoint singularities allowed, endpoints never
evaluated) and an exp-sinh transform for semi-infinite ranges.  Both exist in a
"family" form that integrates a whole batch of integrands sharing one node set,
which is what makes nested kernel evaluations affordable.

Node generation walks outward from the centre of the transformed axis and stops
a side once its contributions are negligible, so integrands whose mass the
transform compresses into a narrow band are never probed in regions where they
would overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergence, NonFiniteIntegrand

__all__ = [
    "Tolerance",
    "QuadResult",
    "SeriesResult",
    "DEFAULT_TOL",
    "integrate_finite",
    "integrate_semi_infinite",
    "tanh_sinh_family",
    "exp_sinh_family",
    "sum_series",
    "finite_difference",
]


@dataclass(frozen=True)
class Tolerance:
    """Accuracy request: relative target, absolute floor, evaluation cap."""

    rel: float = 1e-10
    abs: float = 1e-14
    max_evals: int = 100_000

    def __post_init__(self):
        if not (0.0 < self.rel < 1.0):
            raise DomainError(f"rel must lie in (0,1), got {self.rel}")
        if self.abs < 0.0:
            raise DomainError(f"abs must be >= 0, got {self.abs}")
        if self.max_evals <= 0:
            raise DomainError(f"max_evals must be positive, got {self.max_evals}")

    def tightened(self, factor: float) -> "Tolerance":
        """Tolerance scaled down by ``factor`` (for inner nested evaluations)."""
        return Tolerance(
            rel=max(self.rel * factor, 1e-15),
            abs=max(self.abs * factor, 1e-300),
            max_evals=self.max_evals,
        )


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    converged: bool


DEFAULT_TOL = Tolerance()

# Base node spacing, maximum transformed abscissa, refinement depth.
_H0 = 0.5
_UMAX_TS = 6.0  # tanh-sinh: endpoint offsets stay representable down to ~1e-276
_UMAX_ES = 6.5  # exp-sinh: exp((pi/2)sinh u) stays inside double range
_MAX_LEVEL = 12
# A node is negligible when its weighted contribution falls below KAPPA times
# the running tolerance budget; two in a row terminate the side for the level.
_KAPPA = 1e-2
_CONSEC = 2
_CHUNK = 4


class _Side:
    """One outward walk along the transformed axis (sign carries direction)."""

    def __init__(self, start, step, umax, sign=1.0):
        self.next_u = start
        self.step = step
        self.umax = umax
        self.sign = sign
        self.done = start > umax + 1e-12

    def take(self, n):
        us = []
        while len(us) < n and self.next_u <= self.umax + 1e-12:
            us.append(self.sign * self.next_u)
            self.next_u += self.step
        if len(us) < n:
            self.done = True
        return us


def _level_sides(level, umax):
    h = _H0 / (1 << level)
    if level == 0:
        return [
            _Side(0.0, h, 0.0),          # centre node alone
            _Side(h, h, umax, +1.0),
            _Side(h, h, umax, -1.0),
        ]
    # refinement adds the odd multiples of the new spacing
    return [_Side(h, 2 * h, umax, +1.0), _Side(h, 2 * h, umax, -1.0)]


def _check_finite(g, u):
    if not np.all(np.isfinite(g)):
        raise NonFiniteIntegrand(
            f"integrand returned a non-finite value near transformed node u={u:.6g}"
        )


def _sweep_level(geval, sides, h, base, tol, extents, level):
    """Sum Jacobian-weighted integrand values over one level's new nodes.

    ``base`` carries V_prev/2 so the negligibility threshold tracks the scale
    of the integral as it grows.  ``extents`` maps side sign to the largest
    |u| that has ever contributed: integrands whose mass the transform puts
    away from u = 0 have a dead valley at the centre, so truncation is only
    allowed once a side has shown support (level 0) or beyond the support
    established by coarser levels (refinements).  Returns (sum, evals, base).
    """
    total = np.zeros_like(base)
    evals = 0
    for side in sides:
        consec = 0
        armed = level > 0
        extent0 = extents.get(side.sign, 0.0)
        while not side.done and consec < _CONSEC:
            us = side.take(_CHUNK)
            if not us:
                break
            g = np.atleast_2d(np.asarray(geval(np.asarray(us)), dtype=float))
            if total.shape != (g.shape[0],):
                total = np.zeros(g.shape[0]) + total
                base = np.zeros(g.shape[0]) + base
            evals += len(us)
            for j, u in enumerate(us):
                gj = g[:, j]
                scale = np.abs(base + h * total)
                thr = _KAPPA * (tol.abs + tol.rel * scale)
                if np.all(h * np.abs(gj) <= thr):
                    inside_support = level > 0 and abs(u) <= extent0
                    if armed and not inside_support:
                        consec += 1
                else:
                    _check_finite(gj, u)
                    consec = 0
                    armed = True
                    if abs(u) > extents.get(side.sign, 0.0):
                        extents[side.sign] = abs(u)
                total = total + gj
                if consec >= _CONSEC:
                    side.done = True
                    break
    return total, evals, base


def _de_levels(make_geval, umax, tol):
    """Level-doubling driver shared by both transforms."""
    evals = 0
    value = None
    err = None
    extents = {1.0: 0.0, -1.0: 0.0}
    for level in range(_MAX_LEVEL + 1):
        h = _H0 / (1 << level)
        base = np.zeros(1) if value is None else value / 2.0
        got, n, base = _sweep_level(
            make_geval(level), _level_sides(level, umax), h, base, tol, extents, level
        )
        evals += n
        new_value = base + h * got
        if value is not None:
            err = np.abs(new_value - value)
            value = new_value
            if level >= 2 and np.all(err <= np.maximum(tol.abs, tol.rel * np.abs(value))):
                eps_floor = 8.0 * np.finfo(float).eps * np.abs(value)
                return value, np.maximum(err, eps_floor), evals
        else:
            value = new_value
        if evals >= tol.max_evals:
            break
    worst = float(np.max(err)) if err is not None else math.inf
    raise NonConvergence(
        f"integral estimate still moving by {worst:.3g} after {evals} evaluations"
    )


def tanh_sinh_family(f, a, b, tol=DEFAULT_TOL):
    """Integrate a family of integrands over (a, b).

    ``f(x, dlo, dhi)`` receives the nodes plus their distances to each endpoint
    computed directly from the transform (never by subtraction from x), and
    returns an array of shape (K, m) or (m,).  Returns (values (K,), error
    estimates (K,), evaluations).
    """
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise DomainError(f"need finite a < b, got a={a}, b={b}")
    width = b - a

    def make_geval(level):
        def geval(us):
            au = np.abs(us)
            y = 0.5 * math.pi * np.sinh(au)
            e2 = np.exp(-2.0 * y)
            sigma = e2 / (1.0 + e2)  # node's distance to its near endpoint, /width
            w = 0.5 * width * 0.5 * math.pi * np.cosh(au) * 4.0 * e2 / (1.0 + e2) ** 2
            near = width * sigma
            far = width - near
            dlo = np.where(us < 0, near, far)
            dhi = np.where(us < 0, far, near)
            x = np.where(us < 0, a + near, b - near)
            with np.errstate(all="ignore"):
                vals = np.atleast_2d(np.asarray(f(x, dlo, dhi), dtype=float))
                return vals * w[None, :]

        return geval

    return _de_levels(make_geval, _UMAX_TS, tol)


def exp_sinh_family(f, a, tol=DEFAULT_TOL):
    """Integrate a family over (a, inf); ``f(x, dlo)`` with dlo = x - a exact."""
    if not math.isfinite(a):
        raise DomainError(f"lower limit must be finite, got {a}")

    def make_geval(level):
        def geval(us):
            y = 0.5 * math.pi * np.sinh(us)
            d = np.exp(y)
            w = d * 0.5 * math.pi * np.cosh(us)
            with np.errstate(all="ignore"):
                vals = np.atleast_2d(np.asarray(f(a + d, d), dtype=float))
                return vals * w[None, :]

        return geval

    return _de_levels(make_geval, _UMAX_ES, tol)


def _scalar_family(f):
    """Adapt a plain real->real integrand to the (K, m) family protocol."""

    def fv(x, *rest):
        try:
            y = np.asarray(f(x), dtype=float)
        except Exception:
            y = None
        if y is not None and y.shape == x.shape:
            return y[None, :]
        if y is not None and y.ndim == 0:
            return np.full((1, x.size), float(y))
        return np.array([[float(f(xi)) for xi in x]])

    return fv


def integrate_finite(f, a, b, tol=DEFAULT_TOL) -> QuadResult:
    """Integral of f over (a, b); endpoint values are never requested."""
    vals, errs, evals = tanh_sinh_family(_scalar_family(f), a, b, tol)
    return QuadResult(float(vals[0]), float(errs[0]), evals)


def integrate_semi_infinite(f, a=0.0, tol=DEFAULT_TOL) -> QuadResult:
    """Integral of f over (a, inf); f must decay fast enough at infinity."""
    if a < 0.0:
        raise DomainError(f"lower limit must be >= 0, got {a}")
    vals, errs, evals = exp_sinh_family(_scalar_family(f), a, tol)
    return QuadResult(float(vals[0]), float(errs[0]), evals)


def sum_series(term, tol=DEFAULT_TOL, max_terms=10_000, strict=True) -> SeriesResult:
    """Sum term(0) + term(1) + ... with compensated accumulation.

    Stops once |term(n)| <= tol.abs + tol.rel*|partial sum| for three
    consecutive n (guards alternating series against false convergence).
    """
    s = 0.0
    comp = 0.0
    consec = 0
    for n in range(max_terms):
        t = float(term(n))
        y = t - comp
        tot = s + y
        comp = (tot - s) - y
        s = tot
        if abs(t) <= tol.abs + tol.rel * abs(s):
            consec += 1
            if consec >= 3:
                return SeriesResult(s, n + 1, True)
        else:
            consec = 0
    if strict:
        raise NonConvergence(f"series not converged after {max_terms} terms")
    return SeriesResult(s, max_terms, False)


def finite_difference(f, x, order=1, h=None) -> float:
    """Richardson-extrapolated central difference of first or second order."""
    if h is None:
        h = max(1e-5, 1e-5 * abs(x))
    if order == 1:
        coarse = (f(x + h) - f(x - h)) / (2.0 * h)
        fine = (f(x + h / 2) - f(x - h / 2)) / h
        return (4.0 * fine - coarse) / 3.0
    if order == 2:
        fx = f(x)
        coarse = (f(x + h) - 2.0 * fx + f(x - h)) / h**2
        fine = (f(x + h / 2) - 2.0 * fx + f(x - h / 2)) / (h / 2) ** 2
        return (4.0 * fine - coarse) / 3.0
    raise DomainError(f"order must be 1 or 2, got {order}")
