"""Kronecker symbol, the character chi_60 and character-weighted indefinite theta sums.

Weights take values in ``{0, 1, i, -1, -i}``.  A nonzero unit is carried as a
phase ``k`` in Z/4 standing for ``i^k``, so products are additions mod 4 and
realness of a term is the phase being even.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterator, Optional, Set, Tuple

from .series import TruncSeries, from_monomials

__all__ = [
    "kronecker",
    "chi60",
    "chi60_phase",
    "ThetaSpec",
    "ThetaSpecError",
    "theta_terms",
    "eval_theta",
    "lattice_points",
    "lattice_set",
    "WEIGHT_FACTORS",
    "THETA_SPECS",
    "theta_spec",
    "char_chi1_printed",
]

Phase = Optional[int]  # None for a zero value, else k meaning i^k

_UNIT_VALUE = {0: 1, 1: 1j, 2: -1, 3: -1j}


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol ``(a/n)`` for all integers, ``(0/0)`` excluded."""
    if a == 0 and n == 0:
        raise ValueError("kronecker(0, 0) is undefined")
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    twos = (n & -n).bit_length() - 1
    if twos:
        if a % 2 == 0:
            return 0
        n >>= twos
        if twos % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


_CHI60_PHASE: Dict[int, int] = {}
for _k, _residues in enumerate(((1, 11, 19, 29), (7, 13, 17, 23), (31, 41, 49, 59), (37, 43, 47, 53))):
    for _r in _residues:
        _CHI60_PHASE[_r] = _k


def chi60_phase(m: int) -> Phase:
    """``chi_60(m)`` as a Z/4 phase, or None when ``gcd(m, 60) > 1``."""
    return _CHI60_PHASE.get(m % 60)


def chi60(m: int) -> complex:
    """``chi_60(m)`` in ``{0, 1, -1, 1j, -1j}``."""
    k = chi60_phase(m)
    return 0 if k is None else _UNIT_VALUE[k]


def _sign_phase(v: int) -> Phase:
    return 0 if v >= 0 else 2


def _int_phase(v: int) -> Phase:
    return None if v == 0 else (0 if v > 0 else 2)


# named weight factors; each maps (a, b) to a phase
WEIGHT_FACTORS: Dict[str, Callable[[int, int], Phase]] = {
    "sgn(a)": lambda a, b: _sign_phase(a),
    "sgn(b)": lambda a, b: _sign_phase(b),
    "(-1)^a": lambda a, b: 0 if a % 2 == 0 else 2,
    "(12/a)": lambda a, b: _int_phase(kronecker(12, a)),
    "(12/b)": lambda a, b: _int_phase(kronecker(12, b)),
    "(b/7)": lambda a, b: _int_phase(kronecker(b, 7)),
    "(-3/(a^2-b^2))": lambda a, b: _int_phase(kronecker(-3, a * a - b * b)),
    "chi60(b)": lambda a, b: chi60_phase(b),
}

Congruence = Tuple[int, FrozenSet[int]]  # (modulus, allowed residues)


class ThetaSpecError(AssertionError):
    """An enumerated term broke a spec invariant (non-integral exponent, complex weight...)."""


def _cong(modulus: int, *residues: int) -> Congruence:
    return modulus, frozenset(r % modulus for r in residues)


@dataclass(frozen=True)
class ThetaSpec:
    """``prefactor * sum weight(a, b) q^{(A a^2 - B b^2)/D + shift}``.

    Summation is over ``r |b| < p |a|`` with every congruence in
    ``a_conds``, ``b_conds`` and ``sum_conds`` (the latter on ``a + b``).
    Residues use the least nonnegative representative.
    """

    name: str
    form_a: int
    form_b: int
    denom: int
    shift: Fraction
    a_conds: Tuple[Congruence, ...]
    b_conds: Tuple[Congruence, ...]
    cone: Tuple[int, int]  # (p, r)
    weight: Tuple[str, ...]
    prefactor: int = 0  # phase of the leading unit
    sum_conds: Tuple[Congruence, ...] = ()

    def __post_init__(self):
        for f in self.weight:
            if f not in WEIGHT_FACTORS:
                raise ValueError(f"unknown weight factor {f!r}")

    @property
    def kappa(self) -> Fraction:
        """Inside the cone ``A a^2 - B b^2 > kappa a^2``."""
        p, r = self.cone
        return self.form_a - Fraction(self.form_b * p * p, r * r)

    def a_bound(self, order: int) -> int:
        """Largest ``|a|`` with ``kappa a^2 / D + shift <= N``."""
        room = (order - self.shift) * self.denom / self.kappa
        return math.isqrt(math.floor(room)) if room > 0 else 0

    def in_cone(self, a: int, b: int) -> bool:
        p, r = self.cone
        return r * abs(b) < p * abs(a)

    def phase(self, a: int, b: int) -> Phase:
        total = self.prefactor
        for f in self.weight:
            k = WEIGHT_FACTORS[f](a, b)
            if k is None:
                return None
            total += k
        return total % 4

    def exponent(self, a: int, b: int) -> Fraction:
        return Fraction(self.form_a * a * a - self.form_b * b * b, self.denom) + self.shift


def _admits(conds: Tuple[Congruence, ...], v: int) -> bool:
    return all(v % m in rs for m, rs in conds)


def _progression(conds: Tuple[Congruence, ...], lo: int, hi: int) -> Iterator[int]:
    """Integers in ``[lo, hi]`` meeting every congruence."""
    modulus = math.lcm(*(m for m, _ in conds)) if conds else 1
    residues = [r for r in range(modulus) if _admits(conds, r)]
    base = lo - lo % modulus
    for start in range(base, hi + 1, modulus):
        for r in residues:
            v = start + r
            if lo <= v <= hi:
                yield v


def lattice_points(spec: ThetaSpec, order: int) -> Iterator[Tuple[int, int]]:
    """All ``(a, b)`` in the cone meeting the congruences with exponent ``<= order``.

    Points whose weight vanishes are included.
    """
    amax = spec.a_bound(order)
    _assert_beyond(spec, amax, order)
    p, r = spec.cone
    for a in _progression(spec.a_conds, -amax, amax):
        bmax = (p * abs(a) - 1) // r if a else -1
        for b in _progression(spec.b_conds, -bmax, bmax):
            if spec.sum_conds and not _admits(spec.sum_conds, a + b):
                continue
            if spec.exponent(a, b) <= order:
                yield a, b


def _assert_beyond(spec: ThetaSpec, amax: int, order: int) -> None:
    # every cone point with |a| > amax has exponent > kappa a^2 / D + shift > N
    edge = spec.kappa * (amax + 1) ** 2 / spec.denom + spec.shift
    if edge <= order:
        raise ThetaSpecError(f"{spec.name}: a-bound {amax} does not clear q^{order}")


def theta_terms(spec: ThetaSpec, order: int) -> Iterator[Tuple[int, int]]:
    """Yield ``(exponent, +-1)`` for each lattice point with nonzero weight.

    Each term is checked for an integral, nonnegative exponent and a real
    value before it is yielded.
    """
    for a, b in lattice_points(spec, order):
        k = spec.phase(a, b)
        if k is None:
            continue
        if k % 2:
            raise ThetaSpecError(f"{spec.name}: term at a={a}, b={b} has value {_UNIT_VALUE[k]}")
        e = spec.exponent(a, b)
        if e.denominator != 1:
            raise ThetaSpecError(f"{spec.name}: exponent {e} at a={a}, b={b} is not an integer")
        if e < 0:
            raise ThetaSpecError(f"{spec.name}: exponent {e} at a={a}, b={b} is negative")
        yield int(e), 1 if k == 0 else -1


def eval_theta(spec: ThetaSpec, order: int) -> TruncSeries:
    return from_monomials(theta_terms(spec, order), order)


def _fifth(name, shift, b_conds, prefactor=0) -> ThetaSpec:
    return ThetaSpec(
        name, 5, 1, 120, shift, (_cong(6, 1),), b_conds, (5, 3), ("sgn(b)", "(12/a)", "chi60(b)"), prefactor
    )


def _seventh(name, shift, b_residues, prefactor=0) -> ThetaSpec:
    return ThetaSpec(
        name,
        7,
        1,
        168,
        shift,
        (_cong(6, 1),),
        (_cong(42, *b_residues),),
        (7, 3),
        ("sgn(b)", "(12/a)", "(12/b)", "(b/7)"),
        prefactor,
    )


def _zagier(name, shift, a_residue) -> ThetaSpec:
    return ThetaSpec(
        name,
        1,
        5,
        120,
        shift,
        (_cong(5, a_residue),),
        (),
        (1, 5),
        ("(-1)^a", "sgn(a)", "(-3/(a^2-b^2))"),
        0,
        (_cong(4, 2),),
    )


THETA_SPECS: Dict[str, ThetaSpec] = {
    # (q)_inf (2 - chi0)
    "zagier_chi0": _zagier("zagier_chi0", Fraction(-1, 30), 2),
    # (q)_inf chi1
    "zagier_chi1": _zagier("zagier_chi1", Fraction(-19, 30), 4),
    "char_chi0": _fifth("char_chi0", Fraction(-1, 30), (_cong(30, 1, 11),)),
    # b = 1 mod 6 and b = +-2 mod 5, i.e. b = 7, 13 mod 30
    "char_chi1": _fifth("char_chi1", Fraction(-19, 30), (_cong(30, 7, 13),), prefactor=1),
    "char_F0": _seventh("char_F0", Fraction(-1, 28), (1, 13)),
    "char_F1": _seventh("char_F1", Fraction(3, 28), (5, 19), prefactor=2),
    "char_F2": _seventh("char_F2", Fraction(-9, 28), (11, 17), prefactor=2),
}


def char_chi1_printed() -> ThetaSpec:
    """``char_chi1`` with the congruences as displayed: ``b = 1 (6)``, ``b = +-2 (5)``."""
    s = THETA_SPECS["char_chi1"]
    return ThetaSpec(
        "char_chi1_printed",
        s.form_a,
        s.form_b,
        s.denom,
        s.shift,
        s.a_conds,
        (_cong(6, 1), _cong(5, 2, -2)),
        s.cone,
        s.weight,
        s.prefactor,
    )


def theta_spec(name: str) -> ThetaSpec:
    try:
        return THETA_SPECS[name]
    except KeyError:
        raise KeyError(f"unknown theta spec {name!r}") from None


def lattice_set(spec: ThetaSpec, order: int) -> Set[Tuple[int, int]]:
    return set(lattice_points(spec, order))
