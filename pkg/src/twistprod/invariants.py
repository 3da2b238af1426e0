"""Functional-equation data and the derived invariants.

A gamma factor Q^s prod_j Gamma(lambda_j s + mu_j) with |omega| = 1
determines degree, conductor, root number and the xi-invariant through
closed formulas; everything here is elementary arithmetic on the
(Q, lambda_j, mu_j, omega) data.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, InvariantViolation, NotCoprime
from .numth import gcd

NATURAL_CONDUCTOR_GATE = 1e-6


@dataclass(frozen=True)
class GammaFactor:
    """Data (Q, (lambda_j, mu_j)_j, omega, pole order at s = 1)."""

    scale: float  # Q > 0
    factors: tuple[tuple[float, complex], ...]
    omega: complex = 1.0 + 0j
    pole_order: int = 0

    def __post_init__(self):
        if not self.scale > 0:
            raise InvariantViolation("Q must be positive")
        factors = tuple((float(lam), complex(mu)) for lam, mu in self.factors)
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "omega", complex(self.omega))
        for lam, mu in factors:
            if not lam > 0:
                raise InvariantViolation("every lambda_j must be positive")
            if mu.real < 0:
                raise InvariantViolation("every Re(mu_j) must be >= 0")
        if abs(abs(self.omega) - 1.0) > 1e-12:
            raise InvariantViolation("|omega| must equal 1")
        if self.pole_order < 0:
            raise InvariantViolation("pole order must be nonnegative")


@dataclass(frozen=True)
class SelbergInvariants:
    degree: float  # d = 2 sum lambda_j
    conductor: float  # q = (2 pi)^d Q^2 prod lambda_j^(2 lambda_j)
    root_number: complex  # omega * prod lambda_j^(-2i Im mu_j)
    xi: complex  # 2 sum (mu_j - 1/2) = eta + i d theta
    eta: float
    theta: float
    omega_star: complex
    tau: float  # max_j |Im mu_j / lambda_j|
    pole_order: int

    def __post_init__(self):
        recomposed = complex(self.eta, self.degree * self.theta)
        if abs(recomposed - self.xi) > 1e-12 * (1.0 + abs(self.xi)):
            raise InvariantViolation("xi != eta + i*degree*theta")


def invariants(gamma: GammaFactor) -> SelbergInvariants:
    """Degree, conductor, root number, xi/eta/theta, omega*, tau."""
    lams = [lam for lam, _ in gamma.factors]
    mus = [mu for _, mu in gamma.factors]
    degree = 2.0 * sum(lams)
    conductor = (2.0 * math.pi) ** degree * gamma.scale**2
    for lam in lams:
        conductor *= lam ** (2.0 * lam)
    root = complex(gamma.omega)
    for lam, mu in gamma.factors:
        root *= complex(lam) ** complex(0.0, -2.0 * mu.imag)
    xi = 2.0 * sum((mu - 0.5 for mu in mus), start=0j)
    eta = xi.real
    theta = xi.imag / degree if degree != 0 else 0.0
    omega_star = (
        root
        * cmath.exp(-1j * math.pi * (eta + 1.0) / 2.0)
        * complex(conductor / (2.0 * math.pi) ** 2) ** complex(0.0, theta / 2.0)
    )
    tau = max((abs(mu.imag / lam) for lam, mu in gamma.factors), default=0.0)
    return SelbergInvariants(
        degree=degree,
        conductor=conductor,
        root_number=root,
        xi=xi,
        eta=eta,
        theta=theta,
        omega_star=omega_star,
        tau=tau,
        pole_order=gamma.pole_order,
    )


def mult_order(p: int, q: int) -> int:
    """Least m >= 1 with p^m = 1 (mod q); m = 1 for q = 1 by convention."""
    if q < 1:
        raise DomainError("modulus must be a positive integer")
    if q == 1:
        return 1
    if gcd(p, q) != 1:
        raise NotCoprime(f"{p} divides the modulus {q}")
    m = 1
    x = p % q
    while x != 1:
        x = (x * p) % q
        m += 1
    return m


def conductor_is_natural(inv: SelbergInvariants, gate: float = NATURAL_CONDUCTOR_GATE) -> bool:
    """Gate for theorem-conclusion checks: conductor rounds to an integer >= 1."""
    q = inv.conductor
    return abs(q - round(q)) <= gate and round(q) >= 1


def rounded_conductor(inv: SelbergInvariants) -> int:
    if not conductor_is_natural(inv):
        raise DomainError(f"conductor {inv.conductor} is not a natural number")
    return int(round(inv.conductor))


def expected_twist_conductor(q: int, p: int, degree: float) -> int:
    """Conductor a degree-preserving prime twist is expected to have: q * p^degree.

    Optional diagnostic; verifying it needs the twist's own gamma data,
    which ingested coefficient data generally lacks.
    """
    return int(round(q * p**degree))
