"""Dirichlet characters of prime-power modulus, the additive-to-multiplicative
basis change, and the two twist operations.

Characters are represented by an exact integer log table: for every residue
r coprime to the modulus we store an integer k_r with chi(r) =
exp(2*pi*i*k_r/e), where e divides the unit-group exponent.  Value tables in
either precision mode are derived from the exact logs, so extended-mode
twists lose nothing to the character values themselves.

Group structure used for construction:
  * odd p:      (Z/p^r)* is cyclic; generated by a primitive root picked to
                stay primitive for every power of p.
  * p = 2:      trivial for r = 1, cyclic({-1}) for r = 2, and
                {+-1} x <5> for r >= 3.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _domain as dom
from ._domain import PrecisionMode
from .errors import DomainError, ModulusTooLarge, ZeroDenominator
from .numth import euler_phi, gcd, require_prime
from .series import CoeffSeries

MODULUS_BOUND = 10**6


# ---------------------------------------------------------------------------
# unit-group structure

def _primitive_root_mod_p(p: int) -> int:
    phi = p - 1
    fac = []
    m = phi
    q = 2
    while q * q <= m:
        if m % q == 0:
            fac.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        fac.append(m)
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in fac):
            return g
    raise RuntimeError(f"no primitive root found mod {p}")


def _primitive_root_prime_power(p: int) -> int:
    """Primitive root mod p that remains primitive mod every p^r (odd p)."""
    g = _primitive_root_mod_p(p)
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class _UnitGroup:
    """Discrete-log data for (Z/p^r)*."""

    p: int
    r: int
    modulus: int
    orders: tuple[int, ...]  # cyclic factor orders, matching exponent tuples
    # log[r] = exponent vector of residue r packed as a tuple; -1 rows mark
    # non-coprime residues.  Stored as a (modulus, len(orders)) int array.
    logs: np.ndarray

    @property
    def phi(self) -> int:
        return int(np.prod(self.orders)) if self.orders else 1


def _unit_group(p: int, r: int) -> _UnitGroup:
    q = p**r
    if p == 2:
        if r == 1:
            logs = -np.ones((2, 1), dtype=np.int64)
            logs[1, 0] = 0
            return _UnitGroup(p, r, 2, (1,), logs)
        if r == 2:
            logs = -np.ones((4, 1), dtype=np.int64)
            logs[1, 0] = 0
            logs[3, 0] = 1
            return _UnitGroup(p, r, 4, (2,), logs)
        half = 2 ** (r - 2)
        logs = -np.ones((q, 2), dtype=np.int64)
        x = 1
        for b in range(half):
            logs[x % q] = (0, b)
            logs[(-x) % q] = (1, b)
            x = (x * 5) % q
        return _UnitGroup(p, r, q, (2, half), logs)
    g = _primitive_root_prime_power(p)
    phi = euler_phi(q)
    logs = -np.ones((q, 1), dtype=np.int64)
    x = 1
    for j in range(phi):
        logs[x, 0] = j
        x = (x * g) % q
    return _UnitGroup(p, r, q, (phi,), logs)


# ---------------------------------------------------------------------------
# characters

@dataclass(frozen=True)
class DirichletCharacter:
    """Character of (Z/p^r)* given by exact integer logs over denominator e."""

    modulus: int
    conductor: int
    is_principal: bool
    is_primitive: bool
    exponents: tuple[int, ...]  # exponent vector wrt the canonical generators
    log_num: np.ndarray  # k_r per residue, -1 where chi vanishes
    log_den: int

    def __eq__(self, other):
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.exponents == other.exponents
        )

    def __hash__(self):
        return hash((self.modulus, self.exponents))

    @cached_property
    def values(self) -> np.ndarray:
        """Value table over residues 0..modulus-1 (complex128)."""
        return self._value_table(PrecisionMode.DOUBLE)

    def _value_table(self, mode: PrecisionMode) -> np.ndarray:
        table = dom.root_of_unity_table(self.log_den, mode)
        out = dom.zeros(self.modulus, mode)
        for res in range(self.modulus):
            k = self.log_num[res]
            if k >= 0:
                out[res] = table[k]
        out.setflags(write=False)
        return out

    def value_table(self, mode: PrecisionMode) -> np.ndarray:
        if mode is PrecisionMode.DOUBLE:
            return self.values
        cache = self.__dict__.setdefault("_ext_values", None)
        if cache is None:
            cache = self._value_table(mode)
            self.__dict__["_ext_values"] = cache
        return cache

    def __call__(self, n: int) -> complex:
        return complex(self.values[n % self.modulus])

    def value(self, n: int, mode: PrecisionMode = PrecisionMode.DOUBLE):
        return self.value_table(mode)[n % self.modulus]

    def conjugate(self) -> "DirichletCharacter":
        neg = np.where(self.log_num >= 0, (-self.log_num) % self.log_den, -1)
        exps = tuple((-e) % o for e, o in zip(self.exponents, _orders_of(self.modulus)))
        return DirichletCharacter(
            modulus=self.modulus,
            conductor=self.conductor,
            is_principal=self.is_principal,
            is_primitive=self.is_primitive,
            exponents=exps,
            log_num=neg,
            log_den=self.log_den,
        )


def _orders_of(modulus: int) -> tuple[int, ...]:
    if modulus == 1:
        return (1,)
    p = 2 if modulus % 2 == 0 else None
    if p is None:
        for q in range(3, modulus + 1, 2):
            if modulus % q == 0:
                p = q
                break
    r = 0
    m = modulus
    while m % p == 0:
        m //= p
        r += 1
    return _unit_group(p, r).orders


def principal_character(modulus: int = 1) -> DirichletCharacter:
    """The constant-one character mod 1."""
    logs = np.zeros(1, dtype=np.int64)
    return DirichletCharacter(
        modulus=1,
        conductor=1,
        is_principal=True,
        is_primitive=True,
        exponents=(0,),
        log_num=logs,
        log_den=1,
    )


def _build_character(group: _UnitGroup, exps: tuple[int, ...]) -> DirichletCharacter:
    p, r, q = group.p, group.r, group.modulus
    # common denominator for the log table
    if p == 2 and r >= 3:
        den = 2 ** (r - 1)
        weights = (den // 2, den // 2 ** (r - 2))
    else:
        den = group.orders[0]
        weights = (1,)
    log_num = -np.ones(q, dtype=np.int64)
    for res in range(q):
        vec = group.logs[res]
        if vec[0] < 0:
            continue
        k = 0
        for e, w, v in zip(exps, weights, vec):
            k += e * w * int(v)
        log_num[res] = k % den
    # conductor: least p^c such that chi is trivial on every coprime
    # residue congruent to 1 (mod p^c)
    conductor = q
    for c in range(0, r + 1):
        pc = p**c
        trivial = True
        for res in range(1, q, pc):
            if res % p == 0:
                continue
            if log_num[res] != 0:
                trivial = False
                break
        if trivial:
            conductor = pc
            break
    return DirichletCharacter(
        modulus=q,
        conductor=conductor,
        is_principal=conductor == 1,
        is_primitive=conductor == q,
        exponents=exps,
        log_num=log_num,
        log_den=den,
    )


def enumerate_characters(p: int, r: int) -> list[DirichletCharacter]:
    """All phi(p^r) characters mod p^r, principal first, in lexicographic
    order of their generator-exponent vectors (deterministic)."""
    require_prime(p)
    if r < 1:
        raise DomainError("exponent r must be >= 1")
    if p**r > MODULUS_BOUND:
        raise ModulusTooLarge(f"{p}^{r} exceeds bound {MODULUS_BOUND}")
    group = _unit_group(p, r)
    chars: list[DirichletCharacter] = []
    if len(group.orders) == 1:
        for t in range(group.orders[0]):
            chars.append(_build_character(group, (t,)))
    else:
        for eps in range(group.orders[0]):
            for t in range(group.orders[1]):
                chars.append(_build_character(group, (eps, t)))
    return chars


def primitive_inducer(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character of modulus conductor(chi) agreeing with chi
    on residues coprime to the original modulus."""
    if chi.is_primitive:
        return chi
    if chi.conductor == 1:
        return principal_character()
    q = chi.modulus
    f = chi.conductor
    p = 2 if q % 2 == 0 else min(d for d in range(3, q + 1, 2) if q % d == 0)
    c = 0
    m = f
    while m % p == 0:
        m //= p
        c += 1
    group = _unit_group(p, c)
    # read off the exponent vector from chi's values at the conductor-level
    # generators (any coprime lift mod q works since chi factors through f)
    target = _build_character(group, tuple(0 for _ in group.orders))
    exps = []
    if p == 2 and c >= 3:
        gens = [(q - 1) % q, 5]  # -1 and 5 generate; lifts are coprime to 2
        orders = group.orders
    elif p == 2 and c == 2:
        gens = [3]
        orders = group.orders
    else:
        gens = [_primitive_root_prime_power(p)]
        orders = group.orders
    for g, order in zip(gens, orders):
        # chi(g) = e(k/den); exponent in the conductor-level group satisfies
        # e(exp/order) = chi(g)
        k = int(chi.log_num[g % q])
        num = k * order
        if num % chi.log_den != 0:
            raise DomainError("character does not factor through its conductor")
        exps.append((num // chi.log_den) % order)
    return _build_character(group, tuple(exps))


# ---------------------------------------------------------------------------
# additive basis (Fourier coefficients of n -> e(-n/p^r) on the unit group)

@dataclass(frozen=True)
class AdditiveTwistBasis:
    """Coefficients c(chi, p^r) with e(-n/p^r) = sum_chi c(chi) chi(n)
    for all n coprime to p^r."""

    modulus: int
    characters: tuple[DirichletCharacter, ...]
    coefficients: tuple
    precision_mode: PrecisionMode = PrecisionMode.DOUBLE

    def coefficient(self, chi: DirichletCharacter):
        for c, coeff in zip(self.characters, self.coefficients):
            if c == chi:
                return coeff
        raise KeyError("character not in basis")

    def principal_coefficient(self):
        for c, coeff in zip(self.characters, self.coefficients):
            if c.is_principal:
                return coeff
        raise KeyError("no principal character present")

    def items(self):
        return zip(self.characters, self.coefficients)

    def reconstruct(self, n: int):
        """sum_chi c(chi) chi(n) -- equals e(-n/p^r) for coprime n."""
        mode = self.precision_mode
        with dom.workprec(mode):
            total = dom.scalar(0, mode)
            for chi, coeff in self.items():
                total = total + coeff * chi.value(n, mode)
        return total


def additive_basis(
    p: int, r: int, mode: PrecisionMode | str = PrecisionMode.DOUBLE
) -> AdditiveTwistBasis:
    """Orthogonality averages c(chi) = (1/phi) sum_n e(-n/p^r) conj(chi(n))."""
    mode = PrecisionMode.coerce(mode)
    chars = enumerate_characters(p, r)
    q = p**r
    phi = euler_phi(q)
    coprime = [n for n in range(1, q + 1) if n % p != 0] if q > 1 else [1]
    if mode is PrecisionMode.DOUBLE:
        e_vals = np.exp(-2j * np.pi * np.array(coprime) / q)
        coeffs = []
        for chi in chars:
            tab = chi.values
            coeffs.append(complex(np.sum(e_vals * np.conj(tab[np.array(coprime) % q])) / phi))
    else:
        import mpmath

        with dom.workprec(mode):
            coeffs = []
            e_vals = [dom.exp_unit(-n, q, mode) for n in coprime]
            for chi in chars:
                total = mpmath.mpc(0)
                for ev, n in zip(e_vals, coprime):
                    total += ev * mpmath.conj(chi.value(n, mode))
                coeffs.append(total / phi)
    return AdditiveTwistBasis(
        modulus=q,
        characters=tuple(chars),
        coefficients=tuple(coeffs),
        precision_mode=mode,
    )


# ---------------------------------------------------------------------------
# twists

def twist(A: CoeffSeries, chi: DirichletCharacter) -> CoeffSeries:
    """Coefficientwise twist a(n) -> a(n) chi(n); truncation preserved."""
    mode = A.precision_mode
    N = A.truncation
    q = chi.modulus
    tab = chi.value_table(mode)
    if mode is PrecisionMode.DOUBLE:
        mult = tab[np.arange(1, N + 1, dtype=np.int64) % q]
        out = A.coeffs * mult
    else:
        out = dom.zeros(N, mode)
        with dom.workprec(mode):
            for n in range(1, N + 1):
                out[n - 1] = A.coeffs[n - 1] * tab[n % q]
    return CoeffSeries._raw(out, mode, A.valid_horizon)


def linear_twist(A: CoeffSeries, num: int, den: int) -> CoeffSeries:
    """Coefficientwise twist a(n) -> a(n) e(-n num/den); truncation preserved.

    The fraction is reduced internally; a negative denominator moves its
    sign to the numerator.
    """
    if den == 0:
        raise ZeroDenominator("linear twist with denominator 0")
    if den < 0:
        num, den = -num, -den
    g = gcd(abs(num), den) or 1
    num, den = num // g, den // g
    num %= den  # e(-n num/den) only depends on num mod den
    mode = A.precision_mode
    N = A.truncation
    table = dom.root_of_unity_table(den, mode)  # table[k] = e(k/den)
    if mode is PrecisionMode.DOUBLE:
        ks = (-(np.arange(1, N + 1, dtype=np.int64) * num)) % den
        out = A.coeffs * table[ks]
    else:
        out = dom.zeros(N, mode)
        with dom.workprec(mode):
            for n in range(1, N + 1):
                out[n - 1] = A.coeffs[n - 1] * table[(-(n * num)) % den]
    return CoeffSeries._raw(out, mode, A.valid_horizon)
