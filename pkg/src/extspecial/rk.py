"""The extended Bessel kernel: geometric-weighted Macdonald-type integral.

Two independent evaluation paths are provided.  The integral path evaluates
the defining semi-infinite integral directly (vectorised over the argument,
since every higher-level integrand needs kernel values along its own node
set).  The series path expands in Macdonald functions, whose decay makes it
converge even at the lambda = +-1 endpoints.

Order-sign convention: ``rk_integral`` takes the order exactly as it appears
in the kernel's signature R(z, alpha, q, lambda).  The Macdonald expansion
computes the kernel at order -alpha from K_alpha values, so the higher
modules, which all need order -(mu+1/2), call the integral path with
alpha = -(mu+1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import macdonald_k_block
from .errors import DomainError
from .numerics import (
    DEFAULT_TOL,
    QuadResult,
    SeriesResult,
    Tolerance,
    exp_sinh_family,
    sum_series,
)

__all__ = ["RkArgs", "rk_values_array", "rk_integral", "rk_series", "rk_asymptotic_large"]

_CHUNK = 2048
_SERIES_BLOCK = 64


@dataclass(frozen=True)
class RkArgs:
    z: float
    alpha: float
    q: float
    lam: float

    def __post_init__(self):
        if self.z <= 0.0:
            raise DomainError(f"kernel argument must be positive, got z={self.z}")
        if not (0.0 < self.q <= 1.0):
            raise DomainError(f"q must lie in (0,1], got {self.q}")
        if abs(self.lam) > 1.0:
            raise DomainError(f"|lambda| must be <= 1, got {self.lam}")


def _geometric_factor(t: np.ndarray, lam: float) -> np.ndarray:
    # 1 - lam*exp(-t) written to stay accurate for lam near 1 and small t
    return (1.0 - lam) - lam * np.expm1(-t)


def _rk_chunk(zs: np.ndarray, alpha: float, q: float, lam: float, tol: Tolerance):
    quarter_sq = 0.25 * zs * zs

    def integrand(t, dlo):
        logt = np.log(t)
        geom = _geometric_factor(t, lam)
        return (
            np.exp(-(alpha + 1.0) * logt[None, :] - q * t[None, :]
                   - quarter_sq[:, None] / t[None, :])
            / geom[None, :]
        )

    vals, errs, evals = exp_sinh_family(integrand, 0.0, tol)
    with np.errstate(under="ignore"):
        pref = 0.5 * np.exp(alpha * np.log(0.5 * zs))
    return pref * vals, pref * errs, evals


def rk_values_array(zs, alpha: float, q: float, lam: float,
                    tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Kernel values R(z_i, alpha, q, lambda) for an array of arguments."""
    zs = np.asarray(zs, dtype=float)
    if np.any(zs <= 0.0):
        raise DomainError("kernel argument must be positive")
    if not (0.0 < q <= 1.0) or abs(lam) > 1.0:
        raise DomainError(f"invalid kernel parameters q={q}, lambda={lam}")
    out = np.empty_like(zs)
    flat = zs.ravel()
    res = out.ravel()
    for lo in range(0, flat.size, _CHUNK):
        hi = min(lo + _CHUNK, flat.size)
        res[lo:hi] = _rk_chunk(flat[lo:hi], alpha, q, lam, tol)[0]
    return out


def rk_integral(args: RkArgs, tol: Tolerance = DEFAULT_TOL) -> QuadResult:
    """Kernel by direct quadrature of its defining integral."""
    vals, errs, evals = _rk_chunk(
        np.array([args.z]), args.alpha, args.q, args.lam, tol
    )
    return QuadResult(float(vals[0]), float(abs(errs[0])), evals)


def rk_series(z: float, alpha: float, q: float, lam: float,
              tol: Tolerance = DEFAULT_TOL) -> SeriesResult:
    """Kernel at order -alpha via its Macdonald-function expansion.

    Terms are lam^n K_alpha(z sqrt(q+n)) / (q+n)^(alpha/2); Macdonald values
    are produced in blocks sharing one quadrature grid.
    """
    RkArgs(z, alpha, q, lam)  # validate the shared constraints
    blocks: dict[int, np.ndarray] = {}
    inner = tol.tightened(0.1)

    def kval(n: int) -> float:
        b = n // _SERIES_BLOCK
        if b not in blocks:
            ns = np.arange(b * _SERIES_BLOCK, (b + 1) * _SERIES_BLOCK)
            blocks[b] = macdonald_k_block(alpha, z * np.sqrt(q + ns), inner)
        return float(blocks[b][n % _SERIES_BLOCK])

    def term(n: int) -> float:
        lam_pow = lam**n
        if lam_pow == 0.0:
            return 0.0
        return lam_pow * kval(n) * (q + n) ** (-alpha / 2.0)

    return sum_series(term, tol)


def rk_asymptotic_large(z: float, alpha: float, q: float) -> float:
    """Leading large-argument behaviour of the kernel at order -alpha."""
    if z <= 0.0 or q <= 0.0:
        raise DomainError("need z > 0 and q > 0")
    return math.sqrt(math.pi / (2.0 * z)) * math.exp(-z * math.sqrt(q)) / q ** (
        alpha / 2.0 + 0.25
    )
