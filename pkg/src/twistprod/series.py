"""Truncated ordinary Dirichlet series with arithmetic.

A :class:`CoeffSeries` stores the coefficients a(1..N) of a Dirichlet
series in one of two complex coefficient domains (double / extended).
All operations are pure functions returning new immutable values, so
values can be shared freely across threads.

The Dirichlet product (a*b)(n) = sum_{d|n} a(d) b(n/d) only ever reads
indices <= n, so truncation introduces no edge effects below min(N_A, N_B).
Every derived series still carries a ``valid_horizon`` recording how far
its coefficients faithfully represent the underlying infinite object.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _domain as dom
from ._domain import PrecisionMode
from .errors import (
    DomainError,
    InvariantViolation,
    NonUnitLeadingCoeff,
    PrecisionModeMismatch,
    TruncationTooShort,
)
from .euler import LocalFactor
from .numth import require_prime

DEFAULT_TRUNCATION = 10_000
INVERT_LEADING_THRESHOLD = 1e-8


def identity_tolerance(mode: PrecisionMode, scale_mag: float, base: float | None = None) -> float:
    """Effective tolerance for coefficientwise identity checks."""
    b = base if base is not None else dom.base_tolerance(mode)
    return b * (1.0 + scale_mag)


@dataclass(frozen=True)
class CoeffSeries:
    """Coefficients a(1..N); index 0 of ``coeffs`` holds a(1)."""

    coeffs: np.ndarray
    precision_mode: PrecisionMode = PrecisionMode.DOUBLE
    valid_horizon: int = 0  # 0 in the constructor means "full truncation"

    def __post_init__(self):
        arr = self.coeffs
        if len(arr) < 1:
            raise InvariantViolation("series needs truncation N >= 1")
        if not dom.all_finite(arr, self.precision_mode):
            raise InvariantViolation("series contains non-finite coefficients")
        horizon = self.valid_horizon if self.valid_horizon else len(arr)
        if not 1 <= horizon <= len(arr):
            raise InvariantViolation("valid_horizon outside [1, N]")
        object.__setattr__(self, "valid_horizon", horizon)

    @classmethod
    def from_values(
        cls,
        values,
        precision_mode: PrecisionMode | str = PrecisionMode.DOUBLE,
        valid_horizon: int | None = None,
    ) -> "CoeffSeries":
        """Public constructor; rejects identically vanishing input."""
        mode = PrecisionMode.coerce(precision_mode)
        arr = dom.coeff_array(values, mode)
        if dom.max_abs(arr, mode) == 0.0:
            raise InvariantViolation("identically vanishing coefficient sequence")
        arr.setflags(write=False)
        return cls(arr, mode, valid_horizon or 0)

    @classmethod
    def _raw(cls, arr: np.ndarray, mode: PrecisionMode, horizon: int) -> "CoeffSeries":
        """Internal constructor for operation results (zero series allowed)."""
        arr.setflags(write=False)
        return cls(arr, mode, horizon)

    @property
    def truncation(self) -> int:
        return len(self.coeffs)

    def a(self, n: int):
        """Coefficient a(n); zero beyond the truncation."""
        if n < 1:
            raise DomainError("coefficients are indexed from n = 1")
        if n > len(self.coeffs):
            return dom.scalar(0, self.precision_mode)
        return self.coeffs[n - 1]

    def max_abs(self) -> float:
        return dom.max_abs(self.coeffs, self.precision_mode)


class EvalResult(NamedTuple):
    value: complex
    tail_bound: float


class SplitReport(NamedTuple):
    """Outcome of the multiplicative-splitting test at a prime."""

    prime: int
    holds: bool
    worst_index: int
    worst_deviation: float
    tolerance: float


def ones(N: int, mode: PrecisionMode | str = PrecisionMode.DOUBLE) -> CoeffSeries:
    """a(n) = 1 for all n (zeta coefficients)."""
    mode = PrecisionMode.coerce(mode)
    arr = dom.zeros(N, mode)
    arr[:] = dom.scalar(1, mode)
    return CoeffSeries._raw(arr, mode, N)


def delta(N: int, mode: PrecisionMode | str = PrecisionMode.DOUBLE) -> CoeffSeries:
    """Unit of Dirichlet convolution: 1 at n = 1, else 0."""
    mode = PrecisionMode.coerce(mode)
    arr = dom.zeros(N, mode)
    arr[0] = dom.scalar(1, mode)
    return CoeffSeries._raw(arr, mode, N)


def _check_modes(A: CoeffSeries, B: CoeffSeries):
    if A.precision_mode is not B.precision_mode:
        raise PrecisionModeMismatch(
            f"{A.precision_mode.value} vs {B.precision_mode.value}"
        )


def dirichlet_convolve_arrays(a: np.ndarray, b: np.ndarray, n: int, mode: PrecisionMode) -> np.ndarray:
    """Core convolution kernel on raw coefficient arrays (length >= n)."""
    out = dom.zeros(n, mode)
    with dom.workprec(mode):
        for d in np.flatnonzero(a[:n]):
            d = int(d) + 1
            out[d - 1 :: d] += a[d - 1] * b[: n // d]
    return out


def convolve(A: CoeffSeries, B: CoeffSeries) -> CoeffSeries:
    """Dirichlet product; truncation is min(N_A, N_B)."""
    _check_modes(A, B)
    n = min(A.truncation, B.truncation)
    out = dirichlet_convolve_arrays(A.coeffs, B.coeffs, n, A.precision_mode)
    horizon = min(A.valid_horizon, B.valid_horizon, n)
    return CoeffSeries._raw(out, A.precision_mode, horizon)


def invert(A: CoeffSeries, threshold: float = INVERT_LEADING_THRESHOLD) -> CoeffSeries:
    """Dirichlet-convolution inverse: convolve(A, invert(A)) = delta.

    b(1) = 1/a(1), b(n) = -(1/a(1)) sum_{d|n, d<n} b(d) a(n/d).
    """
    mode = A.precision_mode
    n = A.truncation
    a1 = A.coeffs[0]
    if float(abs(a1)) < threshold:
        raise NonUnitLeadingCoeff(
            f"|a(1)| = {float(abs(a1)):.3g} below threshold {threshold:g}"
        )
    b = dom.zeros(n, mode)
    acc = dom.zeros(n, mode)  # acc[m] = sum over proper divisors found so far
    with dom.workprec(mode):
        inv_a1 = dom.scalar(1, mode) / a1
        for d in range(1, n + 1):
            bd = inv_a1 if d == 1 else -acc[d - 1] * inv_a1
            b[d - 1] = bd
            if 2 * d <= n and bd != 0:
                acc[2 * d - 1 :: d] += bd * A.coeffs[1 : n // d]
    horizon = min(A.valid_horizon, n)
    return CoeffSeries._raw(b, mode, horizon)


def shift_by_prime_power(A: CoeffSeries, p: int, ell: int) -> CoeffSeries:
    """Multiplication by p^(-ell*s): coefficient a(n/p^ell) when p^ell | n."""
    require_prime(p)
    if ell < 0:
        raise DomainError("shift exponent must be nonnegative")
    if ell == 0:
        return A
    n = A.truncation
    q = p**ell
    out = dom.zeros(n, A.precision_mode)
    if q <= n:
        out[q - 1 :: q] = A.coeffs[: n // q]
    horizon = min(n, q * A.valid_horizon)
    return CoeffSeries._raw(out, A.precision_mode, horizon)


def add(A: CoeffSeries, B: CoeffSeries) -> CoeffSeries:
    _check_modes(A, B)
    n = min(A.truncation, B.truncation)
    with dom.workprec(A.precision_mode):
        out = A.coeffs[:n] + B.coeffs[:n]
    return CoeffSeries._raw(out, A.precision_mode, min(A.valid_horizon, B.valid_horizon, n))


def scale(A: CoeffSeries, factor) -> CoeffSeries:
    mode = A.precision_mode
    with dom.workprec(mode):
        out = A.coeffs * dom.scalar(factor, mode)
    return CoeffSeries._raw(out, mode, A.valid_horizon)


def evaluate(A: CoeffSeries, s: complex) -> EvalResult:
    """Truncated value sum_{n<=N} a(n) n^(-s) with a crude tail bound.

    Only defined in the half-plane of absolute convergence Re(s) > 1;
    the bound is max|a(n)| * N^(1-sigma) / (sigma-1).
    """
    s = complex(s)
    sigma = s.real
    if sigma <= 1.0:
        raise DomainError(f"evaluate needs Re(s) > 1, got {sigma}")
    N = A.truncation
    mode = A.precision_mode
    if mode is PrecisionMode.DOUBLE:
        ns = np.arange(1, N + 1, dtype=np.float64)
        value = complex(np.sum(A.coeffs * np.exp(-s * np.log(ns))))
    else:
        import mpmath

        with dom.workprec(mode):
            ms = mpmath.mpc(s)
            total = mpmath.mpc(0)
            for i in range(N):
                total += A.coeffs[i] * mpmath.power(i + 1, -ms)
            value = total
    tail = A.max_abs() * N ** (1.0 - sigma) / (sigma - 1.0)
    return EvalResult(value=value, tail_bound=float(tail))


def extract_local(A: CoeffSeries, p: int) -> LocalFactor:
    """Local factor at p: power-series coefficients c_k = a(p^k)."""
    require_prime(p)
    N = A.truncation
    K = 0
    q = p
    while q <= N:
        K += 1
        q *= p
    if K < 2:
        raise TruncationTooShort(
            f"floor(log_{p} {N}) = {K} < 2: too few p-power coefficients"
        )
    vals = [A.a(1)] + [A.a(p**k) for k in range(1, K + 1)]
    return LocalFactor(prime=p, coeffs=dom.coeff_array(vals, A.precision_mode),
                       precision_mode=A.precision_mode)


def split_check(A: CoeffSeries, p: int, tol: float | None = None) -> SplitReport:
    """Does the series split at p: a(1) = 1 and a(p^l k) = a(p^l) a(k) for p∤k?

    Failure is reported, not raised; the report records the worst index.
    """
    require_prime(p)
    mode = A.precision_mode
    N = A.truncation
    tol_val = tol if tol is not None else identity_tolerance(mode, A.max_abs())
    worst_dev = float(abs(A.coeffs[0] - 1))
    worst_idx = 1
    if mode is PrecisionMode.DOUBLE:
        coeffs = A.coeffs
        pl = p
        ell = 1
        while pl <= N:
            apl = coeffs[pl - 1]
            k = np.arange(1, N // pl + 1, dtype=np.int64)
            k = k[k % p != 0]
            if len(k):
                dev = np.abs(coeffs[pl * k - 1] - apl * coeffs[k - 1])
                j = int(np.argmax(dev))
                if dev[j] > worst_dev:
                    worst_dev = float(dev[j])
                    worst_idx = int(pl * k[j])
            pl *= p
            ell += 1
    else:
        with dom.workprec(mode):
            pl = p
            while pl <= N:
                apl = A.coeffs[pl - 1]
                for k in range(1, N // pl + 1):
                    if k % p == 0:
                        continue
                    d = float(abs(A.coeffs[pl * k - 1] - apl * A.coeffs[k - 1]))
                    if d > worst_dev:
                        worst_dev, worst_idx = d, pl * k
                pl *= p
    return SplitReport(
        prime=p,
        holds=worst_dev <= tol_val,
        worst_index=worst_idx,
        worst_deviation=worst_dev,
        tolerance=tol_val,
    )


def growth_probe(A: CoeffSeries, exponent: float = 0.1, bound: float = 10.0):
    """Sanity diagnostic |a(n)| <= bound * n^exponent (not an axiom check).

    Returns (ok, worst_ratio, worst_index) where ratio = |a(n)| / n^exponent.
    """
    mags = dom.abs_array(A.coeffs, A.precision_mode)
    ratios = mags / np.arange(1, A.truncation + 1, dtype=np.float64) ** exponent
    j = int(np.argmax(ratios))
    return bool(ratios[j] <= bound), float(ratios[j]), j + 1
