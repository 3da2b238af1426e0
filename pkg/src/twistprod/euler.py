"""Local Euler factors as power series in X = p^(-s).

A local factor is the coefficient vector (c_0, ..., c_K) with c_k = a(p^k).
This module provides the power-series logarithm with its growth estimate,
rational reconstruction N(X)/D(X) by Hankel solve plus validation, the
degree-(m-1) companion polynomial W used by the twist identities, polynomial
divisibility, and the reciprocal-root (Ramanujan) check.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np

from . import _domain as dom
from ._domain import PrecisionMode
from .errors import (
    InvariantViolation,
    NonUnitConstantTerm,
    NoRationalFit,
    TruncationTooShort,
    WrongShape,
    ZeroPolynomial,
)
from .numth import require_prime

# Roots closer than this (relative) are considered shared when testing
# numerator/denominator coprimality.
ROOT_CLUSTER_TOL = 1e-8
# Pivots below this (relative to the largest matrix entry) make the Hankel
# system count as singular; the search then escalates to the next degrees.
HANKEL_SINGULAR_TOL = 1e-10
DEFAULT_DIVIDES_TOL = 1e-8
RAMANUJAN_SLACK = 1e-9
THETA_CAP = 0.5


@dataclass(frozen=True)
class LocalFactor:
    """Power series sum_k c_k X^k attached to a prime."""

    prime: int
    coeffs: np.ndarray  # c_0 .. c_K
    precision_mode: PrecisionMode = PrecisionMode.DOUBLE

    def __post_init__(self):
        require_prime(self.prime)
        arr = dom.coeff_array(self.coeffs, self.precision_mode)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        if len(arr) == 0:
            raise InvariantViolation("local factor needs at least the constant term")

    @property
    def depth(self) -> int:
        return len(self.coeffs) - 1

    def c(self, k: int):
        return self.coeffs[k]


@dataclass(frozen=True)
class LogLocalReport:
    """Logarithm coefficients b(p^k) and the empirical growth exponent.

    theta_estimate = max(0, max_{k>=2} log|b_k| / (k log p)); k = 1 is
    excluded because a vanishing b(p) would give -infinity.
    """

    prime: int
    b_coeffs: np.ndarray  # b_1 .. b_K
    theta_estimate: float
    roundtrip_error: float


@dataclass(frozen=True)
class RationalLocalFactor:
    """Normalized rational form N(X)/D(X) with N(0) = D(0) = 1."""

    prime: int
    numerator: np.ndarray
    denominator: np.ndarray
    fit_order: int

    def numerator_degree(self) -> int:
        return poly_degree(self.numerator)

    def denominator_degree(self) -> int:
        return poly_degree(self.denominator)


@dataclass(frozen=True)
class WPolynomial:
    """Degree-(m-1) polynomial combining the a(p^l):

    coefficient of X^l is a(p^l) for l <= m-2 and (p/(p-1)) a(p^(m-1))
    at l = m-1.  For m = 1 only the weighted top term remains.
    """

    prime: int
    m: int
    coeffs: np.ndarray


@dataclass(frozen=True)
class DivisionReport:
    divides: bool
    remainder_norm: float
    degree_ok: bool


# ---------------------------------------------------------------------------
# polynomial helpers (coefficients ascending, numpy arrays)

def poly_trim(c: np.ndarray, tol: float = 0.0) -> np.ndarray:
    mags = np.array([float(abs(v)) for v in c], dtype=float)
    nz = np.flatnonzero(mags > tol)
    if len(nz) == 0:
        return c[:1] * 0
    return c[: nz[-1] + 1]


def poly_degree(c, tol: float = 1e-12) -> int:
    mags = [float(abs(v)) for v in c]
    scale = max(mags) if mags else 0.0
    deg = 0
    for i, m in enumerate(mags):
        if m > tol * (1.0 + scale):
            deg = i
    return deg


def poly_mul(a: np.ndarray, b: np.ndarray, trunc: int | None = None) -> np.ndarray:
    n = len(a) + len(b) - 1
    if trunc is not None:
        n = min(n, trunc)
    out = np.zeros(n, dtype=object if a.dtype == object or b.dtype == object else np.complex128)
    if out.dtype == object:
        out[:] = mpmath.mpc(0)
    for i, ai in enumerate(a):
        if i >= n:
            break
        hi = min(len(b), n - i)
        out[i : i + hi] += ai * b[:hi]
    return out


def poly_divmod(num: np.ndarray, den: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    den = poly_trim(np.asarray(den, dtype=np.complex128), 0.0)
    if len(den) == 1 and den[0] == 0:
        raise ZeroPolynomial("division by zero polynomial")
    rem = np.asarray(num, dtype=np.complex128).copy()
    dd = len(den) - 1
    lead = den[-1]
    if len(rem) - 1 < dd:
        return np.zeros(1, dtype=np.complex128), rem
    quot = np.zeros(len(rem) - dd, dtype=np.complex128)
    for k in range(len(rem) - 1, dd - 1, -1):
        q = rem[k] / lead
        quot[k - dd] = q
        if q != 0:
            rem[k - dd : k + 1] -= q * den
    return quot, rem[:dd] if dd > 0 else rem[:1] * 0


def poly_roots(c: np.ndarray) -> np.ndarray:
    c = poly_trim(np.asarray(c, dtype=np.complex128), 0.0)
    if len(c) <= 1:
        return np.array([], dtype=np.complex128)
    return np.roots(c[::-1])


def _share_root(a: np.ndarray, b: np.ndarray, tol: float = ROOT_CLUSTER_TOL) -> bool:
    ra, rb = poly_roots(a), poly_roots(b)
    for x in ra:
        for y in rb:
            if abs(x - y) <= tol * (1.0 + max(abs(x), abs(y))):
                return True
    return False


# ---------------------------------------------------------------------------
# power-series kernels (shared by both precision modes)

def series_inverse(c: np.ndarray, depth: int, mode: PrecisionMode) -> np.ndarray:
    """Multiplicative inverse of a power series with c_0 = 1."""
    inv = dom.zeros(depth + 1, mode)
    with dom.workprec(mode):
        inv[0] = 1 / c[0]
        for k in range(1, depth + 1):
            s = dom.scalar(0, mode)
            for i in range(1, min(k, len(c) - 1) + 1):
                s = s + c[i] * inv[k - i]
            inv[k] = -s / c[0]
    return inv


def _series_log(c: np.ndarray, mode: PrecisionMode) -> np.ndarray:
    """b_1..b_K with exp(sum b_k X^k) = series, assuming c_0 = 1."""
    depth = len(c) - 1
    b = dom.zeros(depth, mode)
    with dom.workprec(mode):
        for k in range(1, depth + 1):
            s = c[k] * k
            for j in range(1, k):
                s = s - b[j - 1] * j * c[k - j]
            b[k - 1] = s / k
    return b


def _series_exp(b: np.ndarray, mode: PrecisionMode) -> np.ndarray:
    """exp of a series with zero constant term; b holds b_1..b_K."""
    depth = len(b)
    e = dom.zeros(depth + 1, mode)
    with dom.workprec(mode):
        e[0] = dom.scalar(1, mode)
        for k in range(1, depth + 1):
            s = dom.scalar(0, mode)
            for j in range(1, k + 1):
                s = s + b[j - 1] * j * e[k - j]
            e[k] = s / k
    return e


# ---------------------------------------------------------------------------
# operations

def log_local(L: LocalFactor, tol: float | None = None) -> LogLocalReport:
    """Power-series logarithm of the local factor, with growth diagnostic."""
    mode = L.precision_mode
    base = tol if tol is not None else dom.base_tolerance(mode)
    unit_tol = max(base, 1e-9) if mode is PrecisionMode.DOUBLE else 1e-9
    if float(abs(L.coeffs[0] - 1)) > unit_tol:
        raise NonUnitConstantTerm(
            f"constant term {L.coeffs[0]} is not 1 (tolerance {unit_tol:g})"
        )
    b = _series_log(L.coeffs, mode)
    # empirical theta: smallest exponent t with |b_k| <= p^(t k), k >= 2
    logp = math.log(L.prime)
    theta = 0.0
    for k in range(2, len(b) + 1):
        mag = float(abs(b[k - 1]))
        if mag > 0.0:
            theta = max(theta, math.log(mag) / (k * logp))
    rebuilt = _series_exp(b, mode)
    scale = 1.0 + dom.max_abs(L.coeffs, mode)
    err = dom.max_abs(rebuilt - L.coeffs, mode)
    if err > max(base * scale, 1e-9 * scale if mode is PrecisionMode.DOUBLE else 0):
        raise InvariantViolation(
            f"log/exp round trip off by {err:g} at p={L.prime}"
        )
    b.setflags(write=False)
    return LogLocalReport(
        prime=L.prime, b_coeffs=b, theta_estimate=theta, roundtrip_error=err
    )


def theta_ok(report: LogLocalReport, theta_cap: float = THETA_CAP) -> bool:
    return report.theta_estimate < theta_cap


def _solve_pivoted(M: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
    """Gaussian elimination with partial pivoting.

    Returns None when a pivot falls below the singularity threshold
    (relative to the largest initial entry), signalling escalation.
    """
    M = M.astype(np.complex128, copy=True)
    rhs = rhs.astype(np.complex128, copy=True)
    n = M.shape[0]
    scale = max(float(np.abs(M).max(initial=0.0)), float(np.abs(rhs).max(initial=0.0)), 1.0)
    for col in range(n):
        piv = col + int(np.argmax(np.abs(M[col:, col])))
        if abs(M[piv, col]) <= HANKEL_SINGULAR_TOL * scale:
            return None
        if piv != col:
            M[[col, piv]] = M[[piv, col]]
            rhs[[col, piv]] = rhs[[piv, col]]
        for row in range(col + 1, n):
            f = M[row, col] / M[col, col]
            if f != 0:
                M[row, col:] -= f * M[col, col:]
                rhs[row] -= f * rhs[col]
    x = np.zeros(n, dtype=np.complex128)
    for col in range(n - 1, -1, -1):
        x[col] = (rhs[col] - M[col, col + 1 :] @ x[col + 1 :]) / M[col, col]
    return x


def rational_reconstruct(
    L: LocalFactor,
    max_num_deg: int,
    max_den_deg: int,
    tol: float | None = None,
) -> RationalLocalFactor:
    """Minimal-degree rational fit N(X)/D(X) to the local power series.

    The search runs over increasing denominator degree, then increasing
    numerator degree; a candidate passes only if the fit holds through all
    available coefficients (the slack beyond the interpolation order acts
    as validation), so the depth must exceed the caps by at least 2.
    """
    K = L.depth
    if K < max_num_deg + max_den_deg + 2:
        raise TruncationTooShort(
            f"depth {K} < {max_num_deg}+{max_den_deg}+2; not enough validation slack"
        )
    mode = L.precision_mode
    c = np.asarray(
        [complex(v) for v in L.coeffs], dtype=np.complex128
    )  # the solve always runs in double; validation reuses the native mode
    base = tol if tol is not None else dom.base_tolerance(PrecisionMode.DOUBLE)
    scale = 1.0 + float(np.abs(c).max())

    def coeff(k: int) -> complex:
        return c[k] if 0 <= k <= K else 0.0

    for dd in range(0, max_den_deg + 1):
        for nn in range(0, max_num_deg + 1):
            if dd == 0:
                den = np.array([1.0 + 0j])
            else:
                M = np.empty((dd, dd), dtype=np.complex128)
                rhs = np.empty(dd, dtype=np.complex128)
                for i in range(dd):
                    k = nn + 1 + i
                    rhs[i] = -coeff(k)
                    for j in range(1, dd + 1):
                        M[i, j - 1] = coeff(k - j)
                sol = _solve_pivoted(M, rhs)
                if sol is None:
                    continue
                den = np.concatenate(([1.0 + 0j], sol))
            prod = poly_mul(den, c, trunc=K + 1)
            if len(prod) < K + 1:
                prod = np.concatenate([prod, np.zeros(K + 1 - len(prod), dtype=prod.dtype)])
            resid = float(np.abs(prod[nn + 1 :]).max(initial=0.0))
            if resid > base * scale:
                continue
            num = prod[: nn + 1].copy()
            num = poly_trim(num, base * scale)
            den = poly_trim(den, base * scale)
            if _share_root(num, den):
                continue  # a reduced pair must already have validated
            num.setflags(write=False)
            den.setflags(write=False)
            return RationalLocalFactor(
                prime=L.prime, numerator=num, denominator=den, fit_order=K
            )
    raise NoRationalFit(
        f"no rational function of degrees <= ({max_num_deg},{max_den_deg}) "
        f"matches the series at p={L.prime} to order {K}"
    )


def w_polynomial(L: LocalFactor, m: int) -> WPolynomial:
    """Companion polynomial of the depth-m twist decomposition."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    if L.depth < m - 1:
        raise TruncationTooShort(f"need a(p^k) up to k={m - 1}, have depth {L.depth}")
    mode = L.precision_mode
    p = L.prime
    coeffs = dom.zeros(m, mode)
    with dom.workprec(mode):
        for ell in range(0, m - 1):
            coeffs[ell] = L.coeffs[ell]
        top = dom.scalar(p, mode) / dom.scalar(p - 1, mode)
        coeffs[m - 1] = top * L.coeffs[m - 1]
    coeffs.setflags(write=False)
    return WPolynomial(prime=p, m=m, coeffs=coeffs)


def divides(
    numerator: Sequence[complex] | np.ndarray,
    W: WPolynomial,
    tol: float = DEFAULT_DIVIDES_TOL,
) -> DivisionReport:
    """Does the numerator polynomial divide W (within tolerance)?

    Also flags whether deg(numerator) <= m - 1, the degree bound the
    reconstruction is expected to obey.
    """
    num = np.asarray([complex(v) for v in numerator], dtype=np.complex128)
    if float(np.abs(num).max(initial=0.0)) <= tol:
        raise ZeroPolynomial("numerator is (numerically) zero")
    w = np.asarray([complex(v) for v in W.coeffs], dtype=np.complex128)
    _, rem = poly_divmod(w, num)
    rnorm = float(np.abs(rem).max(initial=0.0))
    return DivisionReport(
        divides=rnorm <= tol,
        remainder_norm=rnorm,
        degree_ok=poly_degree(num) <= W.m - 1,
    )


def quadratic_roots_check(
    R: RationalLocalFactor, tol: float = 1e-9
) -> tuple[complex, complex, bool]:
    """Reciprocal roots (alpha, beta) of a degree-<=2 denominator.

    Requires the polynomial-inverse shape: numerator identically 1.  A
    degree-1 denominator is accepted with beta = 0.  ramanujan_ok means
    both magnitudes are <= 1 + 1e-9.
    """
    num = np.asarray([complex(v) for v in R.numerator], dtype=np.complex128)
    if poly_degree(num) > 0 or abs(num[0] - 1) > tol:
        raise WrongShape("numerator is not identically 1")
    den = np.asarray([complex(v) for v in R.denominator], dtype=np.complex128)
    deg = poly_degree(den)
    if deg > 2:
        raise WrongShape(f"denominator degree {deg} > 2")
    if deg == 0:
        alpha, beta = 0.0 + 0j, 0.0 + 0j
    elif deg == 1:
        alpha, beta = -den[1], 0.0 + 0j
    else:
        # D(X) = (1 - aX)(1 - bX): a, b are the roots of z^2 + d1 z + d2
        roots = np.roots([1.0, den[1], den[2]])
        alpha, beta = complex(roots[0]), complex(roots[1])
    ok = abs(alpha) <= 1.0 + RAMANUJAN_SLACK and abs(beta) <= 1.0 + RAMANUJAN_SLACK
    return complex(alpha), complex(beta), ok
