"""Hecke-Rogers double sums for chi0, chi1 and the seventh order F_j.

Every sum has the shape::

    sum_{j >= j_start} sum_{lo(j) <= 3m <= hi(j)}
        sgn(m) (-1)^{m+j+parity} q^{j(3j+s)/2 - m(c m + d)/2 - e} * tail(j, m)

with ``sgn(0) = +1``.  The five identities are tables of
:class:`DoubleSumSpec` evaluated by one kernel.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

from .series import TruncSeries, add, from_monomials

__all__ = [
    "Tail",
    "ONE_MINUS_Q_2J1",
    "ONE_PLUS_QJ",
    "ONE_PLUS_QJ_ONE_MINUS_Q6M1",
    "DoubleSumSpec",
    "NegativeExponentError",
    "sgn",
    "j_limit",
    "double_sum_terms",
    "eval_double_sum",
    "HECKE_SPECS",
    "hecke_series",
    "chi0_hecke",
    "chi1_hecke",
    "f0_hecke",
    "f1_hecke",
    "f2_hecke",
]


class NegativeExponentError(AssertionError):
    """A lattice point produced a monomial with a negative exponent."""


# a tail is a list of monomials (coeff, j_coeff, m_coeff, const): coeff * q^{a j + b m + c}
Tail = Tuple[Tuple[int, int, int, int], ...]

ONE_MINUS_Q_2J1: Tail = ((1, 0, 0, 0), (-1, 2, 0, 1))
ONE_PLUS_QJ: Tail = ((1, 0, 0, 0), (1, 1, 0, 0))
ONE_PLUS_QJ_ONE_MINUS_Q6M1: Tail = (
    (1, 0, 0, 0),
    (1, 1, 0, 0),
    (-1, 0, 6, 1),
    (-1, 1, 6, 1),
)


def sgn(m: int) -> int:
    return 1 if m >= 0 else -1


@dataclass(frozen=True)
class DoubleSumSpec:
    """One double sum; exponent ``j(3j + j_lin)/2 - m(m_quad m + m_lin)/2 - const``.

    The summation range is ``-j + lo_offset <= 3m <= j + hi_offset``.
    """

    name: str
    j_start: int
    j_lin: int
    m_quad: int
    m_lin: int
    const: int
    lo_offset: int
    hi_offset: int
    tail: Tail
    parity: int = 1

    def exponent(self, j: int, m: int) -> int:
        twice = j * (3 * j + self.j_lin) - m * (self.m_quad * m + self.m_lin) - 2 * self.const
        if twice % 2:
            raise AssertionError(f"{self.name}: odd doubled exponent at j={j}, m={m}")
        return twice // 2

    def sign(self, j: int, m: int) -> int:
        return sgn(m) * (-1 if (m + j + self.parity) % 2 else 1)

    def m_range(self, j: int) -> range:
        lo, hi = -j + self.lo_offset, j + self.hi_offset
        # bounds are stated on 3m; convert once
        return range(-((-lo) // 3), hi // 3 + 1)

    def lower_bound(self, j: int) -> Fraction:
        """A lower bound on every monomial exponent at this ``j``.

        The exponent plus any tail offset is concave in real ``m``, so its
        minimum over ``lo/3 <= m <= hi/3`` sits at an endpoint.
        """
        return min(self._candidate(j, end, t) for end in (0, 1) for t in self.tail)

    def _candidate(self, j: int, end: int, t) -> Fraction:
        m = Fraction(-j + self.lo_offset if end == 0 else j + self.hi_offset, 3)
        base = Fraction(j * (3 * j + self.j_lin), 2) - m * (self.m_quad * m + self.m_lin) / 2 - self.const
        return base + t[1] * j + t[2] * m + t[3]

    def candidate_bounds(self, j: int) -> List[Fraction]:
        return [self._candidate(j, end, t) for end in (0, 1) for t in self.tail]


def j_limit(spec: DoubleSumSpec, order: int) -> int:
    """Last ``j`` that can contribute at ``order``.

    Starts from ``ceil(sqrt(3N)) + 4`` and certifies it: every endpoint
    quadratic must already exceed ``N`` and be increasing there, so no
    larger ``j`` can reach ``q^N``.  If the certificate fails the bound is
    raised until it holds.
    """
    j = max(math.isqrt(3 * order) + (0 if math.isqrt(3 * order) ** 2 == 3 * order else 1) + 4, spec.j_start)
    while not _certified(spec, j, order):
        j += 1
    return j


def _certified(spec: DoubleSumSpec, j: int, order: int) -> bool:
    now, nxt = spec.candidate_bounds(j), spec.candidate_bounds(j + 1)
    return all(a > order and b >= a for a, b in zip(now, nxt))


def double_sum_terms(spec: DoubleSumSpec, order: int) -> Iterator[Tuple[int, int]]:
    """Yield ``(exponent, coefficient)`` monomials with exponent ``<= order``.

    Every enumerated monomial, including those beyond ``order``, is checked
    for a nonnegative exponent.
    """
    jmax = j_limit(spec, order)
    for j in range(spec.j_start, jmax + 1):
        for m in spec.m_range(j):
            e = spec.exponent(j, m)
            s = spec.sign(j, m)
            for coeff, a, b, c in spec.tail:
                exp = e + a * j + b * m + c
                if exp < 0:
                    raise NegativeExponentError(f"{spec.name}: exponent {exp} at j={j}, m={m}")
                if exp <= order:
                    yield exp, s * coeff
    for j in (jmax, jmax + 1):
        for m in spec.m_range(j):
            e = spec.exponent(j, m)
            if min(e + a * j + b * m + c for _, a, b, c in spec.tail) <= order:
                raise AssertionError(f"{spec.name}: j={j} still reaches q^{order}")


def eval_double_sum(spec: DoubleSumSpec, order: int) -> TruncSeries:
    return from_monomials(double_sum_terms(spec, order), order)


def term_multiset(specs, order: int) -> Counter:
    """Multiset of ``(exponent, coefficient)`` monomials over several specs."""
    return Counter(t for spec in specs for t in double_sum_terms(spec, order))


def _spec(name, j_start, j_lin, m_quad, m_lin, const, lo, hi, tail) -> DoubleSumSpec:
    return DoubleSumSpec(name, j_start, j_lin, m_quad, m_lin, const, lo, hi, tail)


HECKE_SPECS: Dict[str, Tuple[DoubleSumSpec, ...]] = {
    # (q)_inf (chi0 - 2)
    "chi01a": (
        _spec("chi01a[1]", 0, 1, 15, 1, 0, 0, 0, ONE_MINUS_Q_2J1),
        _spec("chi01a[2]", 1, 1, 15, 11, 1, -1, -1, ONE_MINUS_Q_2J1),
    ),
    # (q)_inf chi1
    "chi01b": (
        _spec("chi01b[1]", 1, -1, 15, 7, 1, 0, -1, ONE_PLUS_QJ),
        _spec("chi01b[2]", 1, -1, 15, 13, 2, -1, -2, ONE_PLUS_QJ),
    ),
    "F0id": (_spec("F0id", 1, -1, 21, 13, 1, 0, -1, ONE_PLUS_QJ_ONE_MINUS_Q6M1),),
    "F1id": (
        _spec("F1id[1]", 1, -1, 21, 5, 0, 0, -1, ONE_PLUS_QJ),
        _spec("F1id[2]", 2, -1, 21, 19, 2, -1, -2, ONE_PLUS_QJ),
    ),
    "F2id": (
        _spec("F2id[1]", 1, -1, 21, 11, 1, 0, -1, ONE_PLUS_QJ),
        _spec("F2id[2]", 2, -1, 21, 17, 2, -1, -2, ONE_PLUS_QJ),
    ),
}


def hecke_series(identity: str, order: int) -> TruncSeries:
    specs = HECKE_SPECS[identity]
    out = eval_double_sum(specs[0], order)
    for spec in specs[1:]:
        out = add(out, eval_double_sum(spec, order))
    return out


def chi0_hecke(order: int) -> TruncSeries:
    """Right side of the chi0 identity; equals ``(q)_inf (chi0 - 2)``."""
    return hecke_series("chi01a", order)


def chi1_hecke(order: int) -> TruncSeries:
    return hecke_series("chi01b", order)


def f0_hecke(order: int) -> TruncSeries:
    return hecke_series("F0id", order)


def f1_hecke(order: int) -> TruncSeries:
    return hecke_series("F1id", order)


def f2_hecke(order: int) -> TruncSeries:
    return hecke_series("F2id", order)


def perturbed(spec: DoubleSumSpec, **changes) -> DoubleSumSpec:
    """Copy of ``spec`` with fields replaced; used for negative controls."""
    return replace(spec, name=spec.name + "*", **changes)
