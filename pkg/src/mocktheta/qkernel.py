"""q-Pochhammer products and the Eulerian series of the five mock theta functions.

Each function has two Eulerian forms.  The first,
``sum_n q^{lead(n)} / (q^{start(n)}; q)_{count(n)}``, is evaluated forward:
the running denominator is updated from ``n`` to ``n + 1`` by multiplying
out the factors that leave its range and dividing by the ones that enter.
The second, ``sum_n q^{lead(n)} (q)_n / (q)_{depth(n)}``, is evaluated
backward by nesting consecutive term ratios.  The two paths share no
intermediate series.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from .series import (
    TruncSeries,
    _add_arrays,
    _divb,
    _mulb,
    from_monomials,
    mul,
    resized,
    scale,
    sub,
)

__all__ = [
    "INFINITE",
    "PochSpec",
    "pochhammer",
    "inverse_pochhammer",
    "euler_product_pentagonal",
    "eta",
    "EulerianForm",
    "SecondForm",
    "FIRST_FORMS",
    "SECOND_FORMS",
    "eulerian_sum",
    "second_form_sum",
    "chi0",
    "chi1",
    "F0",
    "F1",
    "F2",
    "chi0_second",
    "chi1_second",
    "F0_second",
    "F1_second",
    "F2_second",
    "MOCK_IDS",
    "NORMALIZED_IDS",
    "mock_series",
    "normalized",
    "normalized_by_product",
    "clear_cache",
]

INFINITE = None


@dataclass(frozen=True)
class PochSpec:
    """``(q^start; q)_count``; ``count=INFINITE`` for the infinite product."""

    start: int
    count: Optional[int] = INFINITE

    def __post_init__(self):
        if self.start < 1:
            raise ValueError(f"start must be >= 1, got {self.start}")
        if self.count is not None and self.count < 0:
            raise ValueError(f"count must be >= 0, got {self.count}")

    def exponents(self, order: int) -> range:
        """Factor exponents ``k`` with ``k <= order`` (others are 1 mod q^(N+1))."""
        stop = order + 1 if self.count is None else min(order + 1, self.start + self.count)
        return range(self.start, max(stop, self.start))


def pochhammer(spec: PochSpec, order: int) -> TruncSeries:
    arr = TruncSeries.one(order).array
    for k in spec.exponents(order):
        arr = _mulb(arr, k)
    return TruncSeries._wrap(arr)


def inverse_pochhammer(spec: PochSpec, order: int) -> TruncSeries:
    """``1 / (q^s; q)_n`` by successive division, without forming the product."""
    arr = TruncSeries.one(order).array
    for k in spec.exponents(order):
        arr = _divb(arr, k)
    return TruncSeries._wrap(arr)


def euler_product_pentagonal(order: int) -> TruncSeries:
    """``sum_{n in Z} (-1)^n q^{n(3n-1)/2}`` truncated at ``order``."""
    terms = [(0, 1)]
    n = 1
    while n * (3 * n - 1) // 2 <= order:
        sign = -1 if n % 2 else 1
        terms.append((n * (3 * n - 1) // 2, sign))
        terms.append((n * (3 * n + 1) // 2, sign))
        n += 1
    return from_monomials(terms, order)


class _OrderCache:
    """Per-key cache that serves any order up to the largest one computed."""

    def __init__(self):
        self._lock = threading.Lock()
        self._store: Dict[str, TruncSeries] = {}

    def get(self, key: str, order: int, compute: Callable[[int], TruncSeries]) -> TruncSeries:
        with self._lock:
            hit = self._store.get(key)
        if hit is not None and hit.order >= order:
            return hit if hit.order == order else resized(hit, order)
        value = compute(order)
        with self._lock:
            prev = self._store.get(key)
            if prev is None or prev.order < value.order:
                self._store[key] = value
        return value

    def clear(self) -> None:
        with self._lock:
            self._store.clear()


_cache = _OrderCache()


def eta(order: int) -> TruncSeries:
    """``(q; q)_infinity`` as a product."""
    return _cache.get("eta", order, lambda n: pochhammer(PochSpec(1), n))


# ---------------------------------------------------------------------------
# Eulerian forms


@dataclass(frozen=True)
class EulerianForm:
    """``sum_{n >= n_start} q^{lead(n)} / (q^{start(n)}; q)_{count(n)}``."""

    name: str
    n_start: int
    lead: Callable[[int], int]
    start: Callable[[int], int]
    count: Callable[[int], int]

    def factor_range(self, n: int) -> range:
        s = self.start(n)
        return range(s, s + self.count(n))


@dataclass(frozen=True)
class SecondForm:
    """``sum_{n >= 0} q^{lead(n)} (q)_n / (q)_{depth(n)}``."""

    name: str
    lead: Callable[[int], int]
    depth: Callable[[int], int]


FIRST_FORMS: Dict[str, EulerianForm] = {
    "chi0": EulerianForm("chi0", 0, lambda n: n, lambda n: n + 1, lambda n: n),
    "chi1": EulerianForm("chi1", 0, lambda n: n, lambda n: n + 1, lambda n: n + 1),
    "F0": EulerianForm("F0", 0, lambda n: n * n, lambda n: n + 1, lambda n: n),
    # sum starts at n = 1; (q^0; q)_0 is never formed
    "F1": EulerianForm("F1", 1, lambda n: n * n, lambda n: n, lambda n: n),
    "F2": EulerianForm("F2", 0, lambda n: n * n + n, lambda n: n + 1, lambda n: n + 1),
}

SECOND_FORMS: Dict[str, SecondForm] = {
    "chi0": SecondForm("chi0", lambda n: n, lambda n: 2 * n),
    "chi1": SecondForm("chi1", lambda n: n, lambda n: 2 * n + 1),
    "F0": SecondForm("F0", lambda n: n * n, lambda n: 2 * n),
    # F1 = q * sum q^{n^2+2n} (q)_n / (q)_{2n+1}
    "F1": SecondForm("F1", lambda n: n * n + 2 * n + 1, lambda n: 2 * n + 1),
    "F2": SecondForm("F2", lambda n: n * n + n, lambda n: 2 * n + 1),
}


def eulerian_sum(form: EulerianForm, order: int, seed: Optional[TruncSeries] = None) -> TruncSeries:
    """Evaluate ``seed * sum_n term_n`` from the first Eulerian form.

    ``seed`` (default 1) multiplies every term before truncation, so
    ``seed=eta(N)`` yields ``(q)_inf * F`` without materialising ``F``,
    whose own coefficients may exceed the 128-bit range.
    """
    if seed is None:
        seed = TruncSeries.one(order)
    elif seed.order != order:
        raise ValueError("seed order must match the requested order")
    acc = TruncSeries.zero(order).array
    n = form.n_start
    lead = form.lead(n)
    run = seed.array
    for k in form.factor_range(n):
        if k <= order - lead:
            run = _divb(run, k)
    while lead <= order:
        width = order - lead
        run = run[: width + 1]
        acc = _add_arrays(acc, np.concatenate([np.zeros(lead, dtype=run.dtype), run]))
        nxt = form.lead(n + 1)
        if nxt <= lead:
            raise AssertionError(f"{form.name}: leading exponents not increasing at n={n}")
        old, new = form.factor_range(n), form.factor_range(n + 1)
        keep = max(order - nxt, -1)
        run = run[: keep + 1]
        if keep >= 0:
            for k in _range_minus(old, new, keep):
                run = _mulb(run, k)
            for k in _range_minus(new, old, keep):
                run = _divb(run, k)
        n, lead = n + 1, nxt
    # the first omitted term and everything after it sit beyond q^order
    if form.lead(n) <= order or form.lead(n + 1) <= form.lead(n):
        raise AssertionError(f"{form.name}: truncation at n={n} is not safe")
    return TruncSeries._wrap(acc)


def _range_minus(a: range, b: range, cap: int) -> list:
    """Elements of ``a`` not in ``b`` and ``<= cap`` (unit-step ranges)."""
    hi = min(a.stop, cap + 1)
    left = range(a.start, min(hi, b.start))
    right = range(max(a.start, b.stop), hi)
    return [*left, *right]


def second_form_sum(form: SecondForm, order: int) -> TruncSeries:
    """Evaluate the second Eulerian form by backward nesting.

    With ``t_n = q^{lead(n)} (q)_n / (q)_{depth(n)}`` the sum is
    ``t_0 (1 + r_1 (1 + r_2 (1 + ...)))`` where ``r_n = t_n / t_{n-1}``
    is ``q^{lead(n) - lead(n-1)} (1 - q^n) / prod (1 - q^k)`` over
    ``depth(n-1) < k <= depth(n)``.
    """
    last = 0
    while form.lead(last + 1) <= order:
        last += 1
    if form.lead(0) > order:
        return TruncSeries.zero(order)
    nest = TruncSeries.one(order - form.lead(last)).array
    for n in range(last, 0, -1):
        width = order - form.lead(n - 1)
        gap = form.lead(n) - form.lead(n - 1)
        inner = np.zeros(width + 1, dtype=nest.dtype)
        inner[gap:] = nest[: width + 1 - gap]
        inner = _mulb(inner, n)
        for k in range(form.depth(n - 1) + 1, form.depth(n) + 1):
            inner = _divb(inner, k)
        nest = _add_arrays(inner, TruncSeries.one(width).array)
    for k in range(1, form.depth(0) + 1):
        nest = _divb(nest, k)
    lead0 = form.lead(0)
    out = np.zeros(order + 1, dtype=nest.dtype)
    out[lead0:] = nest[: order + 1 - lead0]
    return TruncSeries._wrap(out)


def _first(name: str) -> Callable[[int], TruncSeries]:
    def evaluate(order: int) -> TruncSeries:
        return _cache.get(name, order, lambda n: eulerian_sum(FIRST_FORMS[name], n))

    evaluate.__name__ = name
    evaluate.__doc__ = f"{name} from its first Eulerian form, truncated at ``order``."
    return evaluate


def _second(name: str) -> Callable[[int], TruncSeries]:
    def evaluate(order: int) -> TruncSeries:
        return second_form_sum(SECOND_FORMS[name], order)

    evaluate.__name__ = f"{name}_second"
    evaluate.__doc__ = f"{name} from its second Eulerian form, truncated at ``order``."
    return evaluate


chi0 = _first("chi0")
chi1 = _first("chi1")
F0 = _first("F0")
F1 = _first("F1")
F2 = _first("F2")

chi0_second = _second("chi0")
chi1_second = _second("chi1")
F0_second = _second("F0")
F1_second = _second("F1")
F2_second = _second("F2")

MOCK_IDS = ("chi0", "chi1", "F0", "F1", "F2")
NORMALIZED_IDS = ("C0", "C1", "f0", "f1", "f2")

_MOCK = {"chi0": chi0, "chi1": chi1, "F0": F0, "F1": F1, "F2": F2}


def mock_series(name: str, order: int) -> TruncSeries:
    try:
        return _MOCK[name](order)
    except KeyError:
        raise KeyError(f"unknown mock theta function {name!r}") from None


def _normalized_uncached(fid: str, order: int) -> TruncSeries:
    e = eta(order)
    if fid == "C0":
        # (q)_inf (2 - chi0)
        return sub(scale(e, 2), eulerian_sum(FIRST_FORMS["chi0"], order, seed=e))
    source = {"C1": "chi1", "f0": "F0", "f1": "F1", "f2": "F2"}[fid]
    return eulerian_sum(FIRST_FORMS[source], order, seed=e)


def normalized(fid: str, order: int) -> TruncSeries:
    """``(q)_inf (2 - chi0)``, ``(q)_inf chi1`` or ``(q)_inf F_j``.

    The factor ``(q)_inf`` is distributed into each Eulerian term, which
    keeps every intermediate coefficient small even where ``chi0`` itself
    would overflow.
    """
    if fid not in NORMALIZED_IDS:
        raise KeyError(f"unknown normalized series {fid!r}; expected one of {NORMALIZED_IDS}")
    return _cache.get(f"norm:{fid}", order, lambda n: _normalized_uncached(fid, n))


def normalized_by_product(fid: str, order: int) -> TruncSeries:
    """Same series as :func:`normalized`, formed as an explicit product."""
    e = eta(order)
    if fid == "C0":
        return mul(e, sub(scale(TruncSeries.one(order), 2), chi0(order)))
    source = {"C1": chi1, "f0": F0, "f1": F1, "f2": F2}[fid]
    return mul(e, source(order))


def clear_cache() -> None:
    _cache.clear()
