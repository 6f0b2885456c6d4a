"""Coefficient relations and vanishing statements for C0, C1 and f0, f1, f2.

``C0, C1`` are the coefficients of ``(q)_inf (2 - chi0)`` and ``(q)_inf chi1``;
``f_j`` those of ``(q)_inf F_j``.  Indices below zero read as 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .qkernel import NORMALIZED_IDS, normalized
from .report import Stopwatch

__all__ = [
    "is_prime",
    "nu_p",
    "epsilon_p",
    "InsufficientOrderError",
    "CoeffStream",
    "Instance",
    "RelationReport",
    "chirels_order",
    "check_chirels",
    "mock7_class",
    "mock7_statements",
    "mock7rels_order",
    "check_mock7rels",
    "f25_order",
    "check_f25",
    "f25_agrees_with_mock7",
]


def is_prime(n: int) -> bool:
    """Trial division; the primes here are tiny."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def nu_p(p: int, n: int) -> int:
    """Exponent of ``p`` in ``n``."""
    if n == 0:
        raise ValueError("nu_p(0) is undefined")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def epsilon_p(p: int) -> int:
    if p % 10 == 3:
        return -1
    if p % 10 == 7:
        return 1
    raise ValueError(f"epsilon_p needs p = 3 or 7 mod 10, got {p}")


class InsufficientOrderError(IndexError):
    """A coefficient past the computed order was requested."""


class CoeffStream:
    """Coefficients of one normalized series, computed once to a fixed order."""

    def __init__(self, fid: str, order: int):
        if fid not in NORMALIZED_IDS:
            raise KeyError(f"unknown coefficient stream {fid!r}")
        self.fid = fid
        self.order = order
        self._coeffs = normalized(fid, order).coeffs

    def __call__(self, n: int) -> int:
        if n < 0:
            return 0
        if n > self.order:
            raise InsufficientOrderError(f"{self.fid}({n}) is past the computed order {self.order}")
        return self._coeffs[n]


@dataclass(frozen=True)
class Instance:
    """One checked equation ``lhs_fn(lhs_index) = sign * rhs_fn(rhs_index)``."""

    statement: str
    n: int
    lhs_fn: str
    lhs_index: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass
class RelationReport:
    relation_id: str
    prime: Optional[int]
    n_range: Tuple[int, int]
    required_order: int
    instances: List[Instance] = field(default_factory=list)
    vanishing_checked: int = 0
    elapsed_ms: float = 0.0
    notes: str = ""

    @property
    def counterexamples(self) -> List[Instance]:
        return [i for i in self.instances if not i.holds]

    @property
    def status(self) -> str:
        return "pass" if not self.counterexamples else "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "relation_id": self.relation_id,
            "prime": self.prime,
            "n_range": list(self.n_range),
            "status": self.status,
            "counterexamples": [
                {"statement": c.statement, "n": c.n, "lhs": c.lhs, "rhs": c.rhs} for c in self.counterexamples
            ],
            "checked": len(self.instances),
            "vanishing_checked": self.vanishing_checked,
            "required_order": self.required_order,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "notes": self.notes,
        }

    def line(self) -> str:
        p = f" p={self.prime}" if self.prime is not None else ""
        text = (
            f"{self.relation_id}{p} n={self.n_range[0]}..{self.n_range[1]} N={self.required_order}"
            f" {self.status} ({len(self.instances)} equations, {self.vanishing_checked} vanishing)"
        )
        bad = self.counterexamples
        if bad:
            c = bad[0]
            text += f"  first counterexample: {c.statement} at n={c.n}: {c.lhs} != {c.rhs}"
        return text


def _progression_check(
    out: List[Instance],
    label: str,
    lhs_fn: str,
    lhs: CoeffStream,
    scale: int,
    offset: int,
    sign: int,
    rhs: CoeffStream,
    rhs_shift: int,
    n_max: int,
) -> None:
    for n in range(n_max + 1):
        k = scale * n + offset
        out.append(Instance(label, n, lhs_fn, k, lhs(k), sign * rhs(n + rhs_shift)))


def _vanishing_check(
    out: List[Instance], label: str, fn: str, stream: CoeffStream, p: int, mult: int, add: int, upto: int
) -> int:
    """Record ``fn(n) = 0`` for ``n <= upto`` with ``nu_p(mult n + add) = 1``."""
    hits = 0
    for n in range(upto + 1):
        v = mult * n + add
        if v and nu_p(p, v) == 1:
            out.append(Instance(label, n, fn, n, stream(n), 0))
            hits += 1
    return hits


def _exact_div(num: int, den: int, what: str) -> int:
    if num % den:
        raise ValueError(f"offset {what} = {num}/{den} is not an integer")
    return num // den


# ---------------------------------------------------------------------------
# fifth order


def _check_chirels_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p <= 5 or p % 10 not in (3, 7):
        raise ValueError(f"{p} must be a prime > 5 congruent to 3 or 7 mod 10")


def _chirels_offsets(p: int) -> Tuple[int, int]:
    return _exact_div(19 * p * p - 1, 30, "(19p^2-1)/30"), _exact_div(p * p - 19, 30, "(p^2-19)/30")


def chirels_order(p: int, n_max: int, vanish_to: int = 1500) -> int:
    _check_chirels_prime(p)
    o0, o1 = _chirels_offsets(p)
    return max(p * p * n_max + max(o0, o1), vanish_to, n_max)


def check_chirels(p: int, n_max: int, vanish_to: int = 1500) -> RelationReport:
    """The two vanishing statements and two progressions for C0 and C1 at the prime ``p``."""
    clock = Stopwatch()
    order = chirels_order(p, n_max, vanish_to)
    o0, o1 = _chirels_offsets(p)
    eps = epsilon_p(p)
    c0, c1 = CoeffStream("C0", order), CoeffStream("C1", order)
    out: List[Instance] = []
    v = _vanishing_check(out, "C0(n)=0 if nu_p(30n+1)=1", "C0", c0, p, 30, 1, vanish_to)
    v += _vanishing_check(out, "C1(n)=0 if nu_p(30n+19)=1", "C1", c1, p, 30, 19, vanish_to)
    _progression_check(out, f"C0(p^2 n+{o0}) = {-eps:+d} C1(n)", "C0", c0, p * p, o0, -eps, c1, 0, n_max)
    _progression_check(out, f"C1(p^2 n+{o1}) = {eps:+d} C0(n)", "C1", c1, p * p, o1, eps, c0, 0, n_max)
    return RelationReport("chirels", p, (0, n_max), order, out, v, clock.ms, f"epsilon_p={eps}")


# ---------------------------------------------------------------------------
# seventh order

# For each class: (lhs, offset numerator (a, b) meaning (a p^2 + b)/28, rhs, rhs shift, sign for upper case)
_MOCK7_TABLE: Dict[int, Tuple[Tuple[str, int, int, str, int, int], ...]] = {
    5: (("f0", 9, -1, "f2", 0, 1), ("f1", 1, 3, "f0", 0, 1), ("f2", 25, -9, "f1", 1, -1)),
    11: (("f0", 25, -1, "f1", 1, -1), ("f1", 9, 3, "f2", 0, 1), ("f2", 1, -9, "f0", 0, -1)),
    13: (("f0", 1, -1, "f0", 0, -1), ("f1", 25, 3, "f1", 1, -1), ("f2", 9, -9, "f2", 0, -1)),
}

MOCK7_NOTE = "primes only: the statement's 'any odd' is read as 'any odd prime'"


def mock7_class(p: int) -> Tuple[int, int]:
    """``(c, s)`` with ``p = s c (mod 28)``, ``c`` in {5, 11, 13}, ``s = +-1``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    r = p % 28
    for c in (5, 11, 13):
        if r == c:
            return c, 1
        if r == 28 - c:
            return c, -1
    raise ValueError(f"{p} is not = +-5, +-11, +-13 mod 28 (7 is a residue mod {p})")


def mock7_statements(p: int) -> List[Tuple[str, str, int, str, int, int]]:
    """``(label, lhs, offset, rhs, rhs_shift, sign)`` for the three progressions at ``p``."""
    c, s = mock7_class(p)
    out = []
    for lhs, a, b, rhs, shift, sign in _MOCK7_TABLE[c]:
        offset = _exact_div(a * p * p + b, 28, f"({a}p^2{b:+d})/28")
        sg = sign * s
        arg = "n+1" if shift else "n"
        out.append((f"{lhs}(p^2 n+{offset}) = {sg:+d} {rhs}({arg})", lhs, offset, rhs, shift, sg))
    return out


def mock7rels_order(p: int, n_max: int) -> int:
    return max(max(p * p * n_max + st[2] for st in mock7_statements(p)), n_max + 1)


def check_mock7rels(p: int, n_max: int, vanish_to: Optional[int] = None) -> RelationReport:
    """Vanishing for f0, f1, f2 and the three progressions selected by ``p mod 28``.

    The vanishing sweep covers the whole computed stream unless ``vanish_to``
    is given.
    """
    clock = Stopwatch()
    order = mock7rels_order(p, n_max)
    if vanish_to is None:
        vanish_to = order
    order = max(order, vanish_to)
    streams = {fid: CoeffStream(fid, order) for fid in ("f0", "f1", "f2")}
    out: List[Instance] = []
    v = _vanishing_check(out, "f0(n)=0 if nu_p(28n+1)=1", "f0", streams["f0"], p, 28, 1, vanish_to)
    v += _vanishing_check(out, "f1(n)=0 if nu_p(28n-3)=1", "f1", streams["f1"], p, 28, -3, vanish_to)
    v += _vanishing_check(out, "f2(n)=0 if nu_p(28n+9)=1", "f2", streams["f2"], p, 28, 9, vanish_to)
    for label, lhs, offset, rhs, shift, sign in mock7_statements(p):
        _progression_check(out, label, lhs, streams[lhs], p * p, offset, sign, streams[rhs], shift, n_max)
    c, s = mock7_class(p)
    note = f"p = {'+' if s > 0 else '-'}{c} mod 28; {MOCK7_NOTE}"
    return RelationReport("mock7", p, (0, n_max), order, out, v, clock.ms, note)


def f25_order(n_max: int) -> int:
    return 25 * n_max + 22


def check_f25(n_max: int) -> RelationReport:
    """``f0(25n+8) = f2(n)``, ``f1(25n+1) = f0(n)``, ``f2(25n-3) = -f1(n)`` for ``0 <= n <= n_max``."""
    clock = Stopwatch()
    order = f25_order(n_max)
    f = {fid: CoeffStream(fid, order) for fid in ("f0", "f1", "f2")}
    out: List[Instance] = [Instance("f1(0) = 0", 0, "f1", 0, f["f1"](0), 0)]
    _progression_check(out, "f0(25n+8) = f2(n)", "f0", f["f0"], 25, 8, 1, f["f2"], 0, n_max)
    _progression_check(out, "f1(25n+1) = f0(n)", "f1", f["f1"], 25, 1, 1, f["f0"], 0, n_max)
    _progression_check(out, "f2(25n-3) = -f1(n)", "f2", f["f2"], 25, -3, -1, f["f1"], 0, n_max)
    return RelationReport("f25", 5, (0, n_max), order, out, 0, clock.ms, "f2(-3) read as 0")


def f25_agrees_with_mock7(n_max: int) -> Tuple[bool, int]:
    """Compare ``check_f25(n_max)`` with the progressions of ``check_mock7rels(5, n_max)``.

    Equations are matched by their left side ``f_j(k)``; both reports must
    have the same status and identical values on every shared equation.
    Returns ``(agree, shared)``.
    """
    a = check_f25(n_max)
    b = check_mock7rels(5, n_max)
    key = lambda i: (i.lhs_fn, i.lhs_index)  # noqa: E731
    left = {key(i): (i.lhs, i.rhs) for i in a.instances if i.lhs_index >= 0 and "nu_p" not in i.statement}
    right = {key(i): (i.lhs, i.rhs) for i in b.instances if "nu_p" not in i.statement}
    shared = left.keys() & right.keys()
    same = all(left[k] == right[k] for k in shared)
    return same and a.status == b.status, len(shared)
