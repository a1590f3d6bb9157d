"""Slow independent evaluation paths used only by tests and audits.

The quadrature here is composite Gauss-Legendre over panels graded
geometrically toward the endpoints, refined by deepening the grading and
doubling the central panels, with Aitken extrapolation across refinements.
It shares no code with the double-exponential engines in ``numerics`` (this
module must not import from there), so agreement between the two is a real
cross-check rather than a tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OracleDisagreement

__all__ = ["OracleConfig", "oracle_integrate", "oracle_sum"]

_GL_ORDER = 32
_GRADE_RATIO = 0.25
_BASE_DEPTH = 12


@dataclass(frozen=True)
class OracleConfig:
    panels: int = 64
    refine_limit: int = 8
    target_rel: float = 1e-11

    def __post_init__(self):
        if self.panels < 64:
            raise DomainError(f"panels must be >= 64, got {self.panels}")
        if self.refine_limit < 1:
            raise DomainError("refine_limit must be positive")
        if self.target_rel > 1e-10:
            raise DomainError(f"target_rel must be <= 1e-10, got {self.target_rel}")


DEFAULT_ORACLE = OracleConfig()

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)


def _vectorise(f):
    def fv(x):
        try:
            y = np.asarray(f(x), dtype=float)
        except Exception:
            y = None
        if y is not None and y.shape == x.shape:
            return y
        return np.array([float(f(xi)) for xi in x])

    return fv


def _panel_sum(fv, edges):
    lo = edges[:-1]
    hi = edges[1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    xs = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    with np.errstate(all="ignore"):
        vals = fv(xs.ravel()).reshape(xs.shape)
    if not np.all(np.isfinite(vals)):
        raise OracleDisagreement("integrand returned non-finite values at oracle nodes")
    per_panel = (vals * _GL_WEIGHTS[None, :]).sum(axis=1) * half
    return math.fsum(per_panel.tolist())


def _graded_edges(lo, hi, depth, inward):
    """Edges of a geometric stack covering [lo, hi], graded toward lo or hi."""
    width = hi - lo
    fracs = [_GRADE_RATIO**j for j in range(depth, 0, -1)]
    if inward == "lo":
        pts = [lo] + [lo + width * f for f in fracs] + [hi]
    else:
        pts = [lo] + [hi - width * f for f in reversed(fracs)] + [hi]
    return pts


def _finite_edges(a, b, depth, central):
    width = b - a
    left = _graded_edges(a, a + 0.25 * width, depth, "lo")
    right = _graded_edges(b - 0.25 * width, b, depth, "hi")
    inner = np.linspace(a + 0.25 * width, b - 0.25 * width, central + 1).tolist()
    return np.asarray(left[:-1] + inner + right[1:], dtype=float)


def _semi_infinite_value(fv, a, depth, central, tiny):
    head = _panel_sum(fv, _finite_edges(a, a + 1.0, depth, central))
    total = head
    lo = a + 1.0
    step = 1.0
    quiet = 0
    for _ in range(2200):
        hi = lo + step
        part = _panel_sum(fv, np.linspace(lo, hi, 3))
        total += part
        if abs(part) <= tiny * max(abs(total), 1e-300):
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
        lo = hi
        step *= 2.0
    raise OracleDisagreement("semi-infinite tail failed to become negligible")


def _aitken(seq):
    i2, i1, i0 = seq[-3], seq[-2], seq[-1]
    d1 = i1 - i2
    d2 = i0 - i1
    denom = d2 - d1
    if denom == 0.0 or abs(d2) >= abs(d1):
        return i0
    return i0 - d2 * d2 / denom


def oracle_integrate(f, a, b, cfg: OracleConfig = DEFAULT_ORACLE) -> float:
    """High-accuracy reference integral of f over (a, b), b may be math.inf.

    Raises OracleDisagreement when successive refinements refuse to settle to
    cfg.target_rel.
    """
    if not math.isfinite(a):
        raise DomainError("lower limit must be finite")
    if b is not math.inf and not (math.isfinite(b) and b > a):
        raise DomainError(f"need b > a or b = inf, got b={b}")
    fv = _vectorise(f)
    central0 = max(16, cfg.panels - 2 * (_BASE_DEPTH + 1))
    raw = []
    extrapolated = []
    for i in range(cfg.refine_limit + 2):
        depth = _BASE_DEPTH + 2 * i
        central = central0 * (1 << i)
        if b is math.inf:
            val = _semi_infinite_value(fv, a, depth, central, cfg.target_rel * 1e-3)
        else:
            val = _panel_sum(fv, _finite_edges(a, b, depth, central))
        raw.append(val)
        if len(raw) >= 3:
            extrapolated.append(_aitken(raw))
        if len(extrapolated) >= 2:
            j0, j1 = extrapolated[-2], extrapolated[-1]
            if abs(j1 - j0) <= cfg.target_rel * max(abs(j1), 1e-300):
                return j1
    raise OracleDisagreement(
        f"refinement stalled: last estimates {raw[-2]:.17g}, {raw[-1]:.17g}"
    )


def oracle_sum(term, n_max: int) -> float:
    """Compensated sum of term(0) ... term(n_max), exactly n_max+1 terms."""
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    pieces = []
    chunk = 65536
    lo = 0
    vectorised = True
    while lo <= n_max:
        hi = min(lo + chunk - 1, n_max)
        ns = np.arange(lo, hi + 1)
        got = None
        if vectorised:
            try:
                cand = np.asarray(term(ns), dtype=float)
                if cand.shape == ns.shape:
                    got = cand
                else:
                    vectorised = False
            except Exception:
                vectorised = False
        if got is None:
            got = np.array([float(term(int(n))) for n in ns])
        pieces.append(math.fsum(got.tolist()))
        lo = hi + 1
    return math.fsum(pieces)
