"""Classical special functions the extended family is built from.

Gamma is a Lanczos approximation (g=7, 9 coefficients) so it can be checked
against the quadrature oracle rather than against itself.  The Macdonald
function is evaluated from its defining semi-infinite integral, not from a
library lookup, which keeps the extended-kernel reduction checks meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergence, PoleError
from .numerics import DEFAULT_TOL, Tolerance, exp_sinh_family, sum_series

__all__ = [
    "LerchArgs",
    "gamma_fn",
    "beta_classical",
    "pochhammer",
    "macdonald_k",
    "macdonald_k_block",
    "lerch_phi",
    "hyp0f2",
    "gauss_2f1",
]

_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def gamma_fn(x: float) -> float:
    """Euler gamma on the real axis (Lanczos, reflection below 1/2)."""
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    log_gamma = 0.5 * math.log(2.0 * math.pi) + (z + 0.5) * math.log(t) - t + math.log(acc)
    if log_gamma > 709.0:
        return math.inf
    return math.exp(log_gamma)


def beta_classical(x: float, y: float) -> float:
    """Euler beta for positive arguments."""
    if x <= 0.0 or y <= 0.0:
        raise DomainError(f"beta requires x, y > 0, got ({x}, {y})")
    return gamma_fn(x) * gamma_fn(y) / gamma_fn(x + y)


def pochhammer(a: float, n: int) -> float:
    """Rising factorial a(a+1)...(a+n-1); empty product is 1."""
    if n < 0 or n != int(n):
        raise DomainError(f"pochhammer needs integer n >= 0, got {n}")
    out = 1.0
    for k in range(int(n)):
        out *= a + k
    return out


def macdonald_k_block(alpha: float, zs, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Macdonald function at several arguments sharing one quadrature grid."""
    zs = np.asarray(zs, dtype=float)
    if np.any(zs <= 0.0):
        raise DomainError("macdonald_k requires z > 0")
    quarter_sq = 0.25 * zs * zs

    def integrand(t, dlo):
        logt = np.log(t)
        return np.exp(-(alpha + 1.0) * logt[None, :] - t[None, :]
                      - quarter_sq[:, None] / t[None, :])

    vals, _, _ = exp_sinh_family(integrand, 0.0, tol)
    with np.errstate(under="ignore"):
        return 0.5 * np.exp(alpha * np.log(0.5 * zs)) * vals


def macdonald_k(alpha: float, z: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Modified Bessel function of the third kind, from its integral form."""
    return float(macdonald_k_block(alpha, [z], tol)[0])


@dataclass(frozen=True)
class LerchArgs:
    lam: float
    s: float
    q: float

    def __post_init__(self):
        if not (0.0 < self.q <= 1.0):
            raise DomainError(f"q must lie in (0,1], got {self.q}")
        if abs(self.lam) > 1.0:
            raise DomainError(f"|lambda| must be <= 1, got {self.lam}")


# Bernoulli numbers B_2, B_4, ..., B_16 for the Euler-Maclaurin tail.
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
)
_EM_CUT = 40


def _em_tail_coeffs(s: float):
    coeffs = []
    rising = s  # (s)_{2j-1} built incrementally
    for j, b2j in enumerate(_BERNOULLI, start=1):
        coeffs.append(b2j / math.factorial(2 * j) * rising)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return coeffs


def _hurwitz_em(s: float, a: float) -> float:
    """Hurwitz zeta via Euler-Maclaurin; valid for s > 1 (series sense)."""
    head = math.fsum((a + n) ** -s for n in range(_EM_CUT))
    x = a + _EM_CUT
    tail = x ** (1.0 - s) / (s - 1.0) + 0.5 * x**-s
    for j, c in enumerate(_em_tail_coeffs(s), start=1):
        tail += c * x ** (-s - 2 * j + 1)
    return head + tail


def _hurwitz_em_diff(s: float, a1: float, a2: float) -> float:
    """zeta(s,a1) - zeta(s,a2) by one Euler-Maclaurin pass; valid for s > 0.

    The individually-divergent (s-1)-pole terms cancel; they are combined via
    expm1 so the formula passes smoothly through s = 1.
    """
    head = math.fsum((a1 + n) ** -s - (a2 + n) ** -s for n in range(_EM_CUT))
    x1 = a1 + _EM_CUT
    x2 = a2 + _EM_CUT
    if s == 1.0:
        pole = math.log(x2 / x1)
    else:
        pole = (math.expm1((1.0 - s) * math.log(x1))
                - math.expm1((1.0 - s) * math.log(x2))) / (s - 1.0)
    tail = pole + 0.5 * (x1**-s - x2**-s)
    for j, c in enumerate(_em_tail_coeffs(s), start=1):
        tail += c * (x1 ** (-s - 2 * j + 1) - x2 ** (-s - 2 * j + 1))
    return head + tail


def lerch_phi(args: LerchArgs, tol: Tolerance = DEFAULT_TOL) -> float:
    """Lerch transcendent  sum_n lam^n / (q+n)^s.

    Interior lam sums directly; the lam = 1 endpoint goes through
    Euler-Maclaurin (needs s > 1) and lam = -1 through an even/odd split into
    a difference of Euler-Maclaurin evaluations (needs s > 0).
    """
    lam, s, q = args.lam, args.s, args.q
    if lam == 1.0:
        if s <= 1.0:
            raise NonConvergence(f"Lerch sum diverges at lambda=1 with s={s}")
        return _hurwitz_em(s, q)
    if lam == -1.0:
        if s <= 0.0:
            raise NonConvergence(f"alternating Lerch sum diverges for s={s}")
        return 2.0**-s * _hurwitz_em_diff(s, q / 2.0, (q + 1.0) / 2.0)

    def term(n):
        return lam**n * (q + n) ** -s

    return sum_series(term, tol).value


def hyp0f2(b1: float, b2: float, x: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Generalized hypergeometric 0F2(-; b1, b2; x); entire in x."""
    if _is_nonpositive_integer(b1) or _is_nonpositive_integer(b2):
        raise DomainError(f"0F2 parameters must avoid non-positive integers: {b1}, {b2}")
    state = {"term": 1.0}

    def term(n):
        if n > 0:
            state["term"] *= x / ((b1 + n - 1.0) * (b2 + n - 1.0) * n)
        return state["term"]

    return sum_series(term, tol).value


def hyp0f2_array(b1: float, b2: float, xs: np.ndarray, max_terms: int = 600) -> np.ndarray:
    """Vectorised 0F2 over an argument array.

    Terms follow the series recurrence to machine-precision stagnation.  For
    very large |x| (beyond ~(max_terms/3)^3) the partial sums grow without
    settling; the huge values are returned as-is, which is the behaviour the
    kernel-divergence audit relies on.
    """
    if _is_nonpositive_integer(b1) or _is_nonpositive_integer(b2):
        raise DomainError(f"0F2 parameters must avoid non-positive integers: {b1}, {b2}")
    xs = np.asarray(xs, dtype=float)
    total = np.ones_like(xs)
    term = np.ones_like(xs)
    with np.errstate(all="ignore"):
        for n in range(1, max_terms):
            term = term * xs / ((b1 + n - 1.0) * (b2 + n - 1.0) * n)
            total = total + term
            if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
                break
    return total


def gauss_2f1(a: float, b: float, c: float, z: float,
              tol: Tolerance = DEFAULT_TOL) -> float:
    """Gauss hypergeometric series, restricted to |z| < 1."""
    if _is_nonpositive_integer(c):
        raise DomainError(f"2F1 lower parameter must avoid non-positive integers: {c}")
    if abs(z) >= 1.0:
        raise DomainError(f"2F1 series needs |z| < 1, got {z}")
    state = {"term": 1.0}

    def term(n):
        if n > 0:
            state["term"] *= (a + n - 1.0) * (b + n - 1.0) * z / ((c + n - 1.0) * n)
        return state["term"]

    return sum_series(term, tol).value
