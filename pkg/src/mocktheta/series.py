"""Exact truncated power series over the integers.

A :class:`TruncSeries` of order ``N`` holds the coefficients of
``q^0 .. q^N``.  Coefficients behave like checked signed 128-bit
integers: any result coefficient outside ``[-2**127, 2**127 - 1]``
raises :class:`CoefficientOverflowError` instead of wrapping.

Storage is a read-only numpy array, ``int64`` whenever every
coefficient fits and ``object`` (Python ints) otherwise.  Kernels take
the ``int64`` path only when an a-priori bound proves the result cannot
leave the ``int64`` range.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Tuple

import numpy as np

__all__ = [
    "COEFF_MAX",
    "COEFF_MIN",
    "CoefficientOverflowError",
    "OrderMismatchError",
    "NotInvertibleError",
    "TruncSeries",
    "from_monomials",
    "add",
    "sub",
    "scale",
    "shift",
    "mul",
    "invert",
    "resized",
    "eq_upto",
    "first_mismatch",
    "mul_binomial",
    "div_binomial",
    "format_dump",
    "parse_dump",
]

COEFF_MAX = 2**127 - 1
COEFF_MIN = -(2**127)

_I64_SAFE = 2**63 - 1

# below this many nonzeros in one factor, mul uses shift-and-add
_SPARSE_FRACTION = 8


class CoefficientOverflowError(OverflowError):
    """A result coefficient left the signed 128-bit range."""


class OrderMismatchError(ValueError):
    """Binary operation on series of different truncation orders."""


class NotInvertibleError(ValueError):
    """Constant term is not a unit (+1 or -1)."""


def _absmax(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(x)) for x in arr)
    return int(np.abs(arr).max())


def _abssum(arr: np.ndarray) -> int:
    if arr.dtype == object:
        return sum(abs(int(x)) for x in arr)
    # int64 sum of abs may itself overflow; go through Python ints if large
    m = _absmax(arr)
    if m * arr.size <= _I64_SAFE:
        return int(np.abs(arr).sum())
    return sum(abs(int(x)) for x in arr)


def _finish(arr: np.ndarray) -> np.ndarray:
    """Range-check ``arr`` and narrow it to int64 when possible."""
    if arr.dtype != object:
        return arr
    hi = lo = 0
    for x in arr:
        if x > hi:
            hi = x
        elif x < lo:
            lo = x
    if hi > COEFF_MAX or lo < COEFF_MIN:
        raise CoefficientOverflowError(
            f"coefficient outside signed 128-bit range (max bits {max(hi, -lo).bit_length()})"
        )
    if hi <= _I64_SAFE and lo >= -_I64_SAFE:
        return arr.astype(np.int64)
    return arr


def _to_object(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return arr
    out = np.empty(arr.shape, dtype=object)
    out[:] = [int(x) for x in arr]
    return out


class TruncSeries:
    """Immutable power series ``sum c[k] q^k`` known modulo ``q^(N+1)``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[int]):
        vals = [int(c) for c in coeffs]
        if not vals:
            raise ValueError("a truncated series needs at least one coefficient")
        arr = np.empty(len(vals), dtype=object)
        arr[:] = vals
        self._c = _freeze(_finish(arr))

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "TruncSeries":
        # trusted constructor: arr already range-checked
        obj = cls.__new__(cls)
        obj._c = _freeze(arr)
        return obj

    @classmethod
    def zero(cls, order: int) -> "TruncSeries":
        _check_order(order)
        return cls._wrap(np.zeros(order + 1, dtype=np.int64))

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls.monomial(0, 1, order)

    @classmethod
    def monomial(cls, exponent: int, coeff: int, order: int) -> "TruncSeries":
        return from_monomials([(exponent, coeff)], order)

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in self._c)

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the coefficient array."""
        return self._c

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self) -> Iterator[int]:
        return (int(x) for x in self._c)

    def __getitem__(self, k: int) -> int:
        if not 0 <= k <= self.order:
            raise IndexError(f"exponent {k} outside 0..{self.order}")
        return int(self._c[k])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and bool(np.array_equal(self._c, other._c))

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self):
            if c == 0:
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            text = "0"
        else:
            text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            for sign, body in terms[1:]:
                text += f" {sign} {body}"
        return f"TruncSeries({text} + O(q^{self.order + 1}))"

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        return add(self, other)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return sub(self, other)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return mul(self, other)
        if isinstance(other, (int, np.integer)):
            return scale(self, int(other))
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self) -> "TruncSeries":
        return scale(self, -1)

    def valuation(self) -> Optional[int]:
        """Least exponent with a nonzero coefficient, or None for zero."""
        nz = np.flatnonzero(self._c)
        return int(nz[0]) if nz.size else None

    def nonzero_terms(self) -> Iterator[Tuple[int, int]]:
        for k in np.flatnonzero(self._c):
            yield int(k), int(self._c[k])


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def _check_order(order: int) -> None:
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")


def _same_order(a: TruncSeries, b: TruncSeries) -> None:
    if a.order != b.order:
        raise OrderMismatchError(f"orders differ: {a.order} vs {b.order}")


def from_monomials(terms: Iterable[Tuple[int, int]], order: int) -> TruncSeries:
    """Sum of ``c q^e`` over ``terms``; exponents above ``order`` are dropped."""
    _check_order(order)
    acc = [0] * (order + 1)
    for e, c in terms:
        if e < 0:
            raise ValueError(f"negative exponent {e}")
        if e <= order:
            acc[e] += int(c)
    return TruncSeries(acc)


def add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    _same_order(a, b)
    return TruncSeries._wrap(_add_arrays(a._c, b._c))


def sub(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    _same_order(a, b)
    return TruncSeries._wrap(_add_arrays(a._c, b._c, sign=-1))


def _add_arrays(x: np.ndarray, y: np.ndarray, sign: int = 1) -> np.ndarray:
    if x.dtype != object and y.dtype != object and _absmax(x) + _absmax(y) <= _I64_SAFE:
        return x + y if sign > 0 else x - y
    x, y = _to_object(x), _to_object(y)
    return _finish(x + y if sign > 0 else x - y)


def scale(a: TruncSeries, c: int) -> TruncSeries:
    c = int(c)
    arr = a._c
    if arr.dtype != object and _absmax(arr) * abs(c) <= _I64_SAFE:
        return TruncSeries._wrap(arr * c)
    return TruncSeries._wrap(_finish(_to_object(arr) * c))


def shift(a: TruncSeries, k: int) -> TruncSeries:
    """Multiply by ``q^k``; coefficients pushed past the order are lost."""
    if k < 0:
        raise ValueError("shift amount must be nonnegative")
    out = np.zeros_like(a._c)
    if k <= a.order:
        out[k:] = a._c[: len(a._c) - k]
    return TruncSeries._wrap(out)


def resized(a: TruncSeries, order: int) -> TruncSeries:
    """Truncate to, or zero-extend to, ``order``."""
    _check_order(order)
    if order <= a.order:
        return TruncSeries._wrap(a._c[: order + 1].copy())
    out = np.zeros(order + 1, dtype=a._c.dtype)
    out[: len(a._c)] = a._c
    return TruncSeries._wrap(out)


def mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Truncated product: ``c[k] = sum_{i+j=k} a[i] b[j]`` for ``k <= N``."""
    _same_order(a, b)
    return TruncSeries._wrap(_mul_arrays(a._c, b._c))


def _mul_arrays(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = len(x)
    nzx, nzy = np.flatnonzero(x), np.flatnonzero(y)
    if nzx.size > nzy.size:
        x, y, nzx, nzy = y, x, nzy, nzx
    if nzx.size * _SPARSE_FRACTION <= n:
        # shift-and-add over the sparse factor's nonzero terms
        bound = _abssum(x) * _absmax(y)
        if x.dtype != object and y.dtype != object and bound <= _I64_SAFE:
            out = np.zeros(n, dtype=np.int64)
            src = y
        else:
            out = np.zeros(n, dtype=object)
            src = _to_object(y)
        for i in nzx:
            c = int(x[i])
            out[i:] += c * src[: n - i]
        return _finish(out)
    bound = _absmax(x) * _absmax(y) * min(nzx.size, nzy.size)
    if x.dtype != object and y.dtype != object and bound <= _I64_SAFE:
        return np.convolve(x, y)[:n]
    return _finish(np.convolve(_to_object(x), _to_object(y))[:n])


def invert(a: TruncSeries) -> TruncSeries:
    """Multiplicative inverse modulo ``q^(N+1)``; needs ``a[0] = +-1``."""
    a0 = a[0]
    if a0 not in (1, -1):
        raise NotInvertibleError(f"constant term {a0} is not a unit")
    n = len(a)
    src = [int(x) for x in a._c]
    nz = [i for i in range(1, n) if src[i]]
    out = [0] * n
    out[0] = a0
    for k in range(1, n):
        s = 0
        for i in nz:
            if i > k:
                break
            s += src[i] * out[k - i]
        v = -a0 * s
        if v > COEFF_MAX or v < COEFF_MIN:
            raise CoefficientOverflowError(f"inverse coefficient at q^{k} overflows")
        out[k] = v
    return TruncSeries(out)


def eq_upto(a: TruncSeries, b: TruncSeries, m: int) -> bool:
    if m > min(a.order, b.order):
        raise ValueError(f"cannot compare to order {m}: series known to {min(a.order, b.order)}")
    return bool(np.array_equal(a._c[: m + 1], b._c[: m + 1]))


def first_mismatch(a: TruncSeries, b: TruncSeries, m: Optional[int] = None) -> Optional[int]:
    """Least exponent ``k <= m`` with ``a[k] != b[k]``, else None."""
    if m is None:
        m = min(a.order, b.order)
    elif m > min(a.order, b.order):
        raise ValueError(f"cannot compare to order {m}")
    diff = np.flatnonzero(a._c[: m + 1] != b._c[: m + 1])
    return int(diff[0]) if diff.size else None


# ---------------------------------------------------------------------------
# binomial kernels: multiply by (1 +- q^k), divide by (1 - q^k)


def mul_binomial(a: TruncSeries, k: int, sign: int = -1) -> TruncSeries:
    """Multiply by ``1 + sign * q^k``."""
    return TruncSeries._wrap(_mulb(a._c, k, sign))


def div_binomial(a: TruncSeries, k: int) -> TruncSeries:
    """Divide by ``1 - q^k`` (``k >= 1``)."""
    return TruncSeries._wrap(_divb(a._c, k))


def _mulb(arr: np.ndarray, k: int, sign: int = -1) -> np.ndarray:
    if k <= 0:
        raise ValueError("binomial exponent must be positive")
    n = len(arr)
    if k >= n:
        return arr
    if arr.dtype != object and 2 * _absmax(arr) <= _I64_SAFE:
        out = arr.copy()
    else:
        out = _to_object(arr).copy()
    if sign < 0:
        out[k:] -= arr[: n - k]
    else:
        out[k:] += arr[: n - k]
    return _finish(out)


def _divb(arr: np.ndarray, k: int) -> np.ndarray:
    if k <= 0:
        raise ValueError("binomial exponent must be positive")
    n = len(arr)
    if k >= n:
        return arr
    rows = -(-n // k)
    if arr.dtype != object:
        buf = np.zeros(rows * k, dtype=np.int64)
        buf[:n] = arr
        grid = buf.reshape(rows, k)
        if _cumsum_fits_int64(grid):
            # c[i] = a[i] + c[i-k]: a running sum down each residue class mod k
            return np.ascontiguousarray(np.cumsum(grid, axis=0).reshape(-1)[:n])
    buf = np.zeros(rows * k, dtype=object)
    buf[:n] = _to_object(arr)
    out = np.cumsum(buf.reshape(rows, k), axis=0).reshape(-1)[:n]
    return _finish(np.ascontiguousarray(out))


def _cumsum_fits_int64(grid: np.ndarray) -> bool:
    # int64 wraparound is exact mod 2^64, so only the partial sums themselves
    # must be in range; bound them in float64 with a rounding-error allowance
    approx = np.cumsum(grid.astype(np.float64), axis=0)
    err = grid.shape[0] * 2.0**-50 * float(np.abs(grid).astype(np.float64).sum()) + 1.0
    return float(np.abs(approx).max()) + err < 2.0**62


# ---------------------------------------------------------------------------
# coefficient dump: one "n<TAB>c_n" line per exponent


def format_dump(a: TruncSeries) -> str:
    return "".join(f"{k}\t{c}\n" for k, c in enumerate(a))


def parse_dump(text: str) -> TruncSeries:
    coeffs = []
    for lineno, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        k, c = line.split("\t")
        if int(k) != len(coeffs):
            raise ValueError(f"line {lineno + 1}: expected exponent {len(coeffs)}, got {k}")
        coeffs.append(int(c))
    return TruncSeries(coeffs)
