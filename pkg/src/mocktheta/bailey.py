"""Bailey pairs, the conjugate pair (delta_n, gamma_n) and the Bailey transform.

All pairs are relative to ``(a, q) = (q, q)``, so ``u_n = 1/(q)_n`` and
``v_n = 1/(q^2; q)_n``.  ``alpha_n`` is stored monomial by monomial exactly
as printed for each residue class ``n = 3m - 1, 3m, 3m + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from .qkernel import PochSpec, eta, inverse_pochhammer, normalized, pochhammer
from .report import FAIL, PASS, Stopwatch, VerificationReport, compare, locate
from .series import (
    CoefficientOverflowError,
    TruncSeries,
    _add_arrays,
    _divb,
    _mulb,
    div_binomial,
    from_monomials,
    mul,
    mul_binomial,
    resized,
    shift,
    sub,
)

__all__ = [
    "BaileyPair",
    "SLATER_PAIRS",
    "slater_pair",
    "bailey_lhs",
    "verify_bailey_pair",
    "bailey_cleared",
    "corrupted",
    "delta",
    "gamma_closed",
    "gamma_defsum",
    "gamma_heine",
    "verify_conjugate_pair",
    "TransformResult",
    "transform_sums",
    "bailey_transform_check",
    "chain_check",
    "andrews_ex10_sides",
    "andrews_ex10_check",
]

def _shift_add(acc: np.ndarray, src: np.ndarray, e: int, sign: int = 1) -> np.ndarray:
    """``acc + sign * q^e * src`` on arrays of equal length."""
    n = len(acc)
    if e >= n:
        return acc
    piece = np.zeros(n, dtype=src.dtype)
    piece[e:] = src[: n - e]
    return _add_arrays(acc, piece, sign)


# (sign, quad, lin, const): sign * q^{quad m^2 + lin m + const}
Monomial = Tuple[int, int, int, int]


@dataclass(frozen=True)
class BaileyPair:
    """A Bailey pair relative to (q, q).

    ``beta_n = q^{beta_lead(n)} (1 - q)^{beta_one_minus_q} / (q^{beta_start}; q)_{2n}``.
    """

    name: str
    minus_one: Tuple[Monomial, ...]  # n = 3m - 1, m >= 1
    zero: Tuple[Monomial, ...]  # n = 3m, m >= 0
    plus_one: Tuple[Monomial, ...]  # n = 3m + 1, m >= 0
    beta_lead: Callable[[int], int]
    beta_start: int
    beta_one_minus_q: int = 0
    flipped: FrozenSet[int] = frozenset()  # indices whose alpha is negated (negative controls)

    def alpha(self, n: int) -> List[Tuple[int, int]]:
        """``alpha_n`` as ``(exponent, coefficient)`` pairs."""
        r = (n + 1) % 3  # 0, 1, 2 for n = 3m - 1, 3m, 3m + 1
        m = (n + 1 - r) // 3
        branch = (self.minus_one, self.zero, self.plus_one)[r]
        if n in self.flipped:
            branch = tuple((-s, a, b, c) for s, a, b, c in branch)
        out = []
        for sign, a, b, c in branch:
            e = a * m * m + b * m + c
            if e < 0:
                raise AssertionError(f"{self.name}: alpha_{n} has exponent {e}")
            out.append((e, sign))
        return out

    def alpha_series(self, n: int, order: int) -> TruncSeries:
        return from_monomials(self.alpha(n), order)

    def alpha_valuation(self, n: int) -> Optional[int]:
        terms = self.alpha(n)
        return min(e for e, _ in terms) if terms else None

    def beta(self, n: int, order: int) -> TruncSeries:
        out = inverse_pochhammer(PochSpec(self.beta_start, 2 * n), order)
        for _ in range(self.beta_one_minus_q):
            out = mul_binomial(out, 1)
        return shift(out, self.beta_lead(n))


def _pair(name, minus_one, zero, plus_one, lead, start, omq=0) -> BaileyPair:
    return BaileyPair(name, tuple(minus_one), tuple(zero), tuple(plus_one), lead, start, omq)


SLATER_PAIRS: Dict[str, BaileyPair] = {
    "A4": _pair(
        "A4",
        [(1, 6, -4, 0)],
        [(1, 6, 4, 0)],
        [(-1, 6, 8, 2), (-1, 6, 4, 0)],
        lambda n: n,
        2,
    ),
    "A2": _pair(
        "A2",
        [(1, 6, -1, 0)],
        [(1, 6, 1, 0)],
        [(-1, 6, 5, 1), (-1, 6, 7, 2)],
        lambda n: 0,
        2,
    ),
    "A7star": _pair(
        "A7star",
        [(1, 3, 2, 0), (-1, 3, -4, 1)],
        [(1, 3, -2, 0), (-1, 3, 4, 1)],
        [],
        lambda n: n * n - n,
        1,
        1,
    ),
    "A8": _pair(
        "A8",
        [(1, 3, -2, 0)],
        [(1, 3, 2, 0)],
        [(-1, 3, 4, 1), (-1, 3, 2, 0)],
        lambda n: n * n + n,
        2,
    ),
    "A6": _pair(
        "A6",
        [(1, 3, 1, 0)],
        [(1, 3, -1, 0)],
        [(-1, 3, 1, 0), (-1, 3, 5, 2)],
        lambda n: n * n,
        2,
    ),
}


def slater_pair(name: str) -> BaileyPair:
    try:
        return SLATER_PAIRS[name]
    except KeyError:
        raise KeyError(f"unknown Bailey pair {name!r}; expected one of {sorted(SLATER_PAIRS)}") from None


def corrupted(pair: BaileyPair, n: int) -> BaileyPair:
    """``pair`` with the sign of ``alpha_n`` flipped; every other term is unchanged."""
    return replace(pair, name=pair.name + "*", flipped=pair.flipped | {n})


def bailey_lhs(pair: BaileyPair, n: int, order: int) -> TruncSeries:
    """``sum_{r=0}^{n} alpha_r / ((q)_{n-r} (q^2; q)_{n+r})``.

    The weight ``w_r = 1/((q)_{n-r} (q^2;q)_{n+r})`` starts as ``u_n v_n``
    and moves along ``r`` via ``w_{r+1} = w_r (1 - q^{n-r}) / (1 - q^{n+r+2})``.
    """
    weight = inverse_pochhammer(PochSpec(1, n), order).array
    for k in range(2, n + 2):
        weight = _divb(weight, k)
    acc = np.zeros(order + 1, dtype=np.int64)
    for r in range(n + 1):
        for e, c in pair.alpha(r):
            acc = _shift_add(acc, weight, e, c)
        if r < n:
            weight = _mulb(weight, n - r)
            weight = _divb(weight, n + r + 2)
    return TruncSeries._wrap(acc)


def bailey_cleared(pair: BaileyPair, n: int, order: int) -> Tuple[TruncSeries, TruncSeries]:
    """Both sides of the Bailey relation at ``n`` multiplied by ``(q)_n (q^2; q)_{2n}``.

    The weights become the polynomials
    ``P_r = (q^{n-r+1}; q)_r (q^{n+r+2}; q)_{n-r}``, so no term grows past
    the size of a bounded product, while the truncated ``1/(q)_{n-r}``
    factors of the direct sum can exceed 128 bits at large ``N``.  The
    multiplier is a unit, so the two sides agree exactly when the direct
    ones do, and the first differing exponent is the same.
    """
    weight = pochhammer(PochSpec(n + 2, n), order).array
    acc = np.zeros(order + 1, dtype=np.int64)
    for r in range(n + 1):
        for e, c in pair.alpha(r):
            acc = _shift_add(acc, weight, e, c)
        if r < n:
            weight = _divb(_mulb(weight, n - r), n + r + 2)
    rhs = mul(pochhammer(PochSpec(1, n), order), pochhammer(PochSpec(2, 2 * n), order)).array
    for k in range(pair.beta_start, pair.beta_start + 2 * n):
        rhs = _divb(rhs, k)
    for _ in range(pair.beta_one_minus_q):
        rhs = _mulb(rhs, 1)
    return TruncSeries._wrap(acc), shift(TruncSeries._wrap(rhs), pair.beta_lead(n))


DIRECT, CLEARED, AUTO = "direct", "cleared", "auto"


def verify_bailey_pair(pair: BaileyPair, n_max: int, order: int, method: str = AUTO) -> VerificationReport:
    """Check ``beta_n`` against the defining sum for every ``n <= n_max``.

    ``direct`` evaluates the sum of ``alpha_r u_{n-r} v_{n+r}`` as written;
    ``cleared`` uses :func:`bailey_cleared`; ``auto`` runs the direct sum and
    switches to the cleared form from the first ``n`` whose direct
    evaluation overflows.
    """
    if method not in (DIRECT, CLEARED, AUTO):
        raise ValueError(f"unknown method {method!r}")
    clock = Stopwatch()
    switched: Optional[int] = None
    for n in range(n_max + 1):
        if method == CLEARED or switched is not None:
            lhs, rhs = bailey_cleared(pair, n, order)
        else:
            try:
                lhs, rhs = bailey_lhs(pair, n, order), pair.beta(n, order)
            except CoefficientOverflowError:
                if method == DIRECT:
                    raise
                switched = n
                lhs, rhs = bailey_cleared(pair, n, order)
        miss = locate(lhs, rhs, index=n)
        if miss is not None:
            break
    notes = f"n_max={n_max}"
    if method == CLEARED:
        notes += "; denominators cleared"
    elif switched is not None:
        notes += f"; denominators cleared from n={switched} (direct weights pass 128 bits)"
    return VerificationReport(f"bailey:{pair.name}", order, FAIL if miss else PASS, miss, clock.ms, notes)


# ---------------------------------------------------------------------------
# conjugate pair


def delta(n: int, order: int) -> TruncSeries:
    """``q^n (q)_n (q)_inf / (1 - q)``."""
    out = div_binomial(eta(order), 1)
    for k in range(1, n + 1):
        out = mul_binomial(out, k)
    return shift(out, n)


def gamma_closed(n: int, order: int) -> TruncSeries:
    """``sum_{j > n} (-1)^{j+n+1} q^{j(3j-1)/2 - 3n(n+1)/2 - 1} (1 + q^j)``."""
    terms = []
    j = n + 1
    while True:
        e = j * (3 * j - 1) // 2 - 3 * n * (n + 1) // 2 - 1
        if e > order:
            break
        s = 1 if (j + n + 1) % 2 == 0 else -1
        terms += [(e, s), (e + j, s)]
        j += 1
    return from_monomials(terms, order)


def gamma_defsum(n: int, order: int) -> TruncSeries:
    """``sum_{r >= n} delta_r / ((q)_{r-n} (q^2; q)_{r+n})`` from the definition.

    With ``t_r`` the r-th term (valuation ``r``), ``gamma_n = t_n H`` where
    ``H = sum_{r >= n} t_r / t_n`` is nested backward using
    ``t_r / t_{r-1} = q (1 - q^r) / ((1 - q^{r-n}) (1 - q^{r+n+1}))``.
    ``H`` is only needed to ``q^{order - n}``.
    """
    width = order - n
    if width < 0:
        return TruncSeries.zero(order)
    nest = np.zeros(width + 1, dtype=np.int64)
    nest[0] = 1
    for r in range(order, n, -1):
        inner = np.zeros(width + 1, dtype=nest.dtype)
        inner[1:] = nest[:width]
        inner = _divb(_divb(_mulb(inner, r), r - n), r + n + 1)
        nest = _add_arrays(inner, _unit(width + 1))
    head = mul(delta(n, order), inverse_pochhammer(PochSpec(2, 2 * n), order))
    return mul(head, resized(TruncSeries._wrap(nest), order))


def _unit(length: int) -> np.ndarray:
    one = np.zeros(length, dtype=np.int64)
    one[0] = 1
    return one


def gamma_heine(n: int, order: int) -> TruncSeries:
    """``q^n sum_{j >= 0} (q^{n+1}; q)_j q^{(n+1) j}``."""
    acc = np.zeros(order + 1, dtype=np.int64)
    run = TruncSeries.one(order).array
    j = 0
    while (n + 1) * j + n <= order:
        e = (n + 1) * j + n
        acc = _shift_add(acc, run, e)
        run = _mulb(run, n + 1 + j)
        j += 1
    return TruncSeries._wrap(acc)


def verify_conjugate_pair(n_max: int, order: int) -> VerificationReport:
    """Three-way agreement of the gamma evaluators for ``n <= n_max``."""
    clock = Stopwatch()
    for n in range(n_max + 1):
        closed = gamma_closed(n, order)
        for other in (gamma_defsum(n, order), gamma_heine(n, order)):
            miss = locate(closed, other, index=n)
            if miss is not None:
                return VerificationReport("conjpair", order, FAIL, miss, clock.ms, f"n_max={n_max}")
    return VerificationReport("conjpair", order, PASS, None, clock.ms, f"n_max={n_max}")


# ---------------------------------------------------------------------------
# Bailey transform


@dataclass(frozen=True)
class TransformResult:
    alpha_gamma: TruncSeries  # sum alpha_n gamma_n
    beta_delta: TruncSeries  # sum beta_n delta_n
    alpha_terms: int
    beta_terms: int


def _alpha_gamma_sum(pair: BaileyPair, order: int) -> Tuple[TruncSeries, int]:
    """``sum_n alpha_n gamma_n``; gamma_n has valuation n."""

    def val(n: int) -> float:
        v = pair.alpha_valuation(n)
        return float("inf") if v is None else v + n

    terms: Dict[int, int] = {}
    n = 0
    while not all(val(n + i) > order for i in range(3)):
        g = gamma_closed(n, order)
        for e, c in pair.alpha(n):
            for k, gk in g.nonzero_terms():
                if e + k <= order:
                    terms[e + k] = terms.get(e + k, 0) + c * gk
        n += 1
    # one more full residue cycle must also stay beyond q^order
    if not all(val(n + i) > order for i in range(3, 6)):
        raise AssertionError(f"{pair.name}: alpha_n gamma_n valuations not increasing at n={n}")
    return from_monomials(terms.items(), order), n


def _beta_delta_sum(pair: BaileyPair, order: int) -> Tuple[TruncSeries, int]:
    """``sum_n beta_n delta_n``.

    ``beta_n delta_n = D q^{lead(n) + n} (1 - q)^f R_n`` with the common factor
    ``D = (q)_inf / (1 - q)`` and ``R_n = (q)_n / (q^s; q)_{2n}``, updated as
    ``R_{n+1} = R_n (1 - q^{n+1}) / ((1 - q^{s+2n}) (1 - q^{s+2n+1}))``.
    """
    s = pair.beta_start
    acc = np.zeros(order + 1, dtype=np.int64)
    run = TruncSeries.one(order).array
    n = 0
    while pair.beta_lead(n) + n <= order:
        e = pair.beta_lead(n) + n
        acc = _shift_add(acc, run, e)
        run = _mulb(run, n + 1)
        run = _divb(run, s + 2 * n)
        run = _divb(run, s + 2 * n + 1)
        n += 1
    if pair.beta_lead(n + 1) + n + 1 <= order:
        raise AssertionError(f"{pair.name}: beta_n delta_n valuations not increasing at n={n}")
    total = TruncSeries._wrap(acc)
    for _ in range(pair.beta_one_minus_q):
        total = mul_binomial(total, 1)
    return mul(div_binomial(eta(order), 1), total), n


def transform_sums(pair: BaileyPair, order: int) -> TransformResult:
    ag, na = _alpha_gamma_sum(pair, order)
    bd, nb = _beta_delta_sum(pair, order)
    return TransformResult(ag, bd, na, nb)


def bailey_transform_check(pair: BaileyPair, order: int) -> VerificationReport:
    """``sum alpha_n gamma_n == sum beta_n delta_n`` exactly."""
    clock = Stopwatch()
    res = transform_sums(pair, order)
    return compare(
        f"transform:{pair.name}",
        res.alpha_gamma,
        res.beta_delta,
        clock,
        f"alpha terms={res.alpha_terms}, beta terms={res.beta_terms}",
    )


def _chain_target(name: str, order: int) -> Tuple[TruncSeries, int, str]:
    """Normalized series each pair's transform should produce, and the power of q in front."""
    if name == "A4":
        # (q)_inf (chi0 - 1) = (q)_inf - C0
        return sub(eta(order), normalized("C0", order)), 1, "(q)_inf (chi0 - 1) = q * sum"
    if name == "A2":
        return normalized("C1", order), 0, "(q)_inf chi1 = sum"
    if name == "A7star":
        return normalized("f0", order), 0, "(q)_inf F0 = sum"
    if name == "A8":
        return normalized("f1", order), 1, "(q)_inf F1 = q * sum"
    if name == "A6":
        return normalized("f2", order), 0, "(q)_inf F2 = sum"
    raise KeyError(name)


def chain_check(pair: BaileyPair, order: int) -> VerificationReport:
    """Both transform sums equal the pair's target mock theta series.

    For A8 the unshifted reading ``(q)_inf F1 = sum beta_n delta_n`` is
    tried as well, and the note records which one balances.
    """
    clock = Stopwatch()
    res = transform_sums(pair, order)
    target, power, label = _chain_target(pair.name, order)
    notes = [label]
    miss = locate(res.alpha_gamma, res.beta_delta)
    if miss is None:
        miss = locate(target, shift(res.beta_delta, power))
    if pair.name == "A8":
        alt = locate(target, res.beta_delta)
        notes.append(
            "unshifted (q)_inf F1 = sum does not balance"
            + (f" (first mismatch at q^{alt.exponent})" if alt else "; it balances too")
        )
    return VerificationReport(
        f"transform:{pair.name}", order, PASS if miss is None else FAIL, miss, clock.ms, "; ".join(notes)
    )


# ---------------------------------------------------------------------------
# Andrews, Ex. 10 with x = q^k


def andrews_ex10_sides(k: int, order: int) -> Tuple[TruncSeries, TruncSeries]:
    """Both sides of the Ex. 10 identity specialised at ``x = q^k``.

    Left: ``sum_j (q^{k+1}; q)_j q^{(k+1)(j+1)}``.
    Right: ``sum_{m >= 1} (-1)^{m-1} q^{m(3m-1)/2 + k(3m-2)} (1 + q^{k+m})``.
    """
    acc = np.zeros(order + 1, dtype=np.int64)
    run = TruncSeries.one(order).array
    j = 0
    while (k + 1) * (j + 1) <= order:
        e = (k + 1) * (j + 1)
        acc = _shift_add(acc, run, e)
        run = _mulb(run, k + 1 + j)
        j += 1
    left = TruncSeries._wrap(acc)
    terms = []
    m = 1
    while m * (3 * m - 1) // 2 + k * (3 * m - 2) <= order:
        e = m * (3 * m - 1) // 2 + k * (3 * m - 2)
        s = 1 if (m - 1) % 2 == 0 else -1
        terms += [(e, s), (e + k + m, s)]
        m += 1
    return left, from_monomials(terms, order)


def andrews_ex10_check(k_max: int, order: int) -> VerificationReport:
    clock = Stopwatch()
    for k in range(k_max + 1):
        left, right = andrews_ex10_sides(k, order)
        miss = locate(left, right, index=k)
        if miss is not None:
            return VerificationReport("andrews-ex10", order, FAIL, miss, clock.ms, f"k_max={k_max}")
    return VerificationReport("andrews-ex10", order, PASS, None, clock.ms, f"k_max={k_max}")
