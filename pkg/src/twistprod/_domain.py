"""Coefficient-domain backends for the two precision modes.

``double`` stores coefficients as numpy complex128; ``extended`` stores
them as mpmath ``mpc`` objects inside object-dtype numpy arrays, so the
same vectorised slice arithmetic works for both (object arrays dispatch
elementwise to mpmath operators).  All extended-mode arithmetic runs at
:data:`EXTENDED_DPS` decimal digits.
"""
from __future__ import annotations

import contextlib
import enum

import mpmath
import numpy as np

# Working precision of the extended lane.  The extended identity tolerance
# scales with 1e-25, so 40 digits leaves ~15 digits of headroom.
EXTENDED_DPS = 40

# Base factors of the identity tolerance: effective tolerance is
# base * (1 + max coefficient magnitude involved).
BASE_TOLERANCE = {"double": 1e-10, "extended": 1e-25}


class PrecisionMode(enum.Enum):
    DOUBLE = "double"
    EXTENDED = "extended"

    @classmethod
    def coerce(cls, value) -> "PrecisionMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown precision mode: {value!r}") from None


def base_tolerance(mode: PrecisionMode) -> float:
    return BASE_TOLERANCE[mode.value]


def workprec(mode: PrecisionMode):
    """Context manager pinning mpmath precision for extended-mode arithmetic."""
    if mode is PrecisionMode.EXTENDED:
        return mpmath.workdps(EXTENDED_DPS)
    return contextlib.nullcontext()


def zeros(n: int, mode: PrecisionMode) -> np.ndarray:
    if mode is PrecisionMode.DOUBLE:
        return np.zeros(n, dtype=np.complex128)
    out = np.empty(n, dtype=object)
    out[:] = mpmath.mpc(0)
    return out


def coeff_array(values, mode: PrecisionMode) -> np.ndarray:
    """Copy arbitrary complex input into the backend representation."""
    if mode is PrecisionMode.DOUBLE:
        return np.asarray(values, dtype=np.complex128).copy()
    with workprec(mode):
        out = np.empty(len(values), dtype=object)
        for i, v in enumerate(values):
            out[i] = v if isinstance(v, mpmath.mpc) else mpmath.mpc(v)
    return out


def scalar(value, mode: PrecisionMode):
    if mode is PrecisionMode.DOUBLE:
        return complex(value)
    with workprec(mode):
        return value if isinstance(value, mpmath.mpc) else mpmath.mpc(value)


def all_finite(arr: np.ndarray, mode: PrecisionMode) -> bool:
    if mode is PrecisionMode.DOUBLE:
        return bool(np.all(np.isfinite(arr)))
    return all(mpmath.isfinite(v) for v in arr)


def abs_array(arr: np.ndarray, mode: PrecisionMode) -> np.ndarray:
    """Magnitudes as float64 (sufficient for tolerance bookkeeping)."""
    if mode is PrecisionMode.DOUBLE:
        return np.abs(arr)
    return np.array([float(abs(v)) for v in arr], dtype=np.float64)


def max_abs(arr: np.ndarray, mode: PrecisionMode) -> float:
    if len(arr) == 0:
        return 0.0
    return float(abs_array(arr, mode).max())


def root_of_unity_table(den: int, mode: PrecisionMode) -> np.ndarray:
    """Table t with t[k] = exp(2*pi*i*k/den) for k = 0..den-1."""
    if mode is PrecisionMode.DOUBLE:
        return np.exp(2j * np.pi * np.arange(den) / den)
    with workprec(mode):
        out = np.empty(den, dtype=object)
        for k in range(den):
            # expjpi(x) = exp(i*pi*x), evaluated accurately for rational x
            out[k] = mpmath.expjpi(mpmath.mpf(2 * k) / den)
    return out


def exp_unit(num: int, den: int, mode: PrecisionMode):
    """exp(2*pi*i*num/den), with exact integer phase reduction."""
    k = num % den
    if mode is PrecisionMode.DOUBLE:
        return complex(np.exp(2j * np.pi * k / den))
    with workprec(mode):
        return mpmath.expjpi(mpmath.mpf(2 * k) / den)


def to_complex(value) -> complex:
    return complex(value)
