import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import pinv, pmul
from mocktheta.series import (
    COEFF_MAX,
    COEFF_MIN,
    CoefficientOverflowError,
    NotInvertibleError,
    OrderMismatchError,
    TruncSeries,
    add,
    div_binomial,
    eq_upto,
    first_mismatch,
    format_dump,
    from_monomials,
    invert,
    mul,
    mul_binomial,
    parse_dump,
    resized,
    scale,
    shift,
    sub,
)


def S(*coeffs):
    return TruncSeries(coeffs)


def series_of(order, lo=-50, hi=50):
    return st.lists(st.integers(lo, hi), min_size=order + 1, max_size=order + 1).map(TruncSeries)


@st.composite
def same_order(draw, k=2, max_order=24, lo=-50, hi=50):
    n = draw(st.integers(0, max_order))
    return [draw(series_of(n, lo, hi)) for _ in range(k)]


class TestConstruction:
    def test_constant(self):
        assert from_monomials([(0, 1)], 3).coeffs == (1, 0, 0, 0)

    def test_accumulates_duplicates(self):
        assert from_monomials([(1, -1), (1, -1)], 2).coeffs == (0, -2, 0)

    def test_drops_past_order(self):
        assert from_monomials([(5, 1), (12, -1)], 7).coeffs == (0, 0, 0, 0, 0, 1, 0, 0)

    def test_negative_exponent_rejected(self):
        with pytest.raises(ValueError):
            from_monomials([(-1, 1)], 3)

    def test_length_is_order_plus_one(self):
        for n in (0, 1, 17):
            assert len(TruncSeries.zero(n)) == n + 1
            assert TruncSeries.zero(n).order == n

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            TruncSeries([])

    def test_immutable(self):
        a = S(1, 2, 3)
        with pytest.raises(ValueError):
            a.array[0] = 5

    def test_getitem_bounds(self):
        a = S(1, 2)
        assert a[1] == 2
        with pytest.raises(IndexError):
            a[2]

    def test_repr(self):
        assert repr(S(1, 1, 0, -2)) == "TruncSeries(1 + q - 2q^3 + O(q^4))"
        assert repr(TruncSeries.zero(1)) == "TruncSeries(0 + O(q^2))"

    def test_big_coefficients_use_python_ints(self):
        a = S(2**100, -(2**100))
        assert a.array.dtype == object
        assert a[0] == 2**100

    def test_out_of_range_construction(self):
        with pytest.raises(CoefficientOverflowError):
            S(COEFF_MAX + 1)
        with pytest.raises(CoefficientOverflowError):
            S(COEFF_MIN - 1)
        assert S(COEFF_MIN)[0] == COEFF_MIN


class TestLinear:
    def test_add(self):
        assert add(S(1, 1, 0), S(1, -1, 0)) == S(2, 0, 0)

    def test_shift(self):
        assert shift(S(1, 1), 1) == S(0, 1)

    def test_shift_past_order(self):
        assert shift(S(1, 1), 5) == S(0, 0)

    def test_scale(self):
        assert scale(S(1, 1, 1), -1) == S(-1, -1, -1)

    def test_order_mismatch(self):
        with pytest.raises(OrderMismatchError):
            add(S(1), S(1, 0))
        with pytest.raises(OrderMismatchError):
            mul(S(1), S(1, 0))

    def test_resized(self):
        assert resized(S(1, 2, 3), 1) == S(1, 2)
        assert resized(S(1, 2), 3) == S(1, 2, 0, 0)

    def test_add_overflow(self):
        with pytest.raises(CoefficientOverflowError):
            add(S(COEFF_MAX), S(1))

    def test_scale_overflow(self):
        with pytest.raises(CoefficientOverflowError):
            scale(S(2**126), 2)
        assert scale(S(2**126), -2)[0] == COEFF_MIN

    def test_int64_boundary_promotes(self):
        big = 2**62
        assert add(S(big), S(big))[0] == 2**63
        assert sub(S(-big), S(big))[0] == -(2**63)


class TestMul:
    def test_telescoping(self):
        assert mul(S(1, -1, 0, 0), S(1, 1, 1, 1)) == S(1, 0, 0, 0)

    def test_direct(self):
        assert mul(S(1, -1, 0, 0), S(1, 0, -1, 0)) == S(1, -1, -1, 1)

    def test_operator_forms(self):
        a = S(1, 2, 3)
        assert a * 2 == scale(a, 2) == 2 * a
        assert a * a == mul(a, a)
        assert -a == scale(a, -1)

    def test_dense_matches_oracle(self):
        rng = np.random.default_rng(7)
        for n in (5, 40, 300):
            x = [int(v) for v in rng.integers(-1000, 1000, n + 1)]
            y = [int(v) for v in rng.integers(-1000, 1000, n + 1)]
            assert mul(TruncSeries(x), TruncSeries(y)).coeffs == tuple(pmul(x, y, n))

    def test_sparse_matches_oracle(self):
        n = 200
        x = [0] * (n + 1)
        x[0], x[17], x[150] = 1, -3, 5
        y = list(range(n + 1))
        assert mul(TruncSeries(x), TruncSeries(y)).coeffs == tuple(pmul(x, y, n))

    def test_large_coefficients_exact(self):
        n = 6
        x = [2**60 + i for i in range(n + 1)]
        y = [3**30 - i for i in range(n + 1)]
        assert mul(TruncSeries(x), TruncSeries(y)).coeffs == tuple(pmul(x, y, n))

    def test_overflow_raises(self):
        a = S(2**64, 2**64)
        with pytest.raises(CoefficientOverflowError):
            mul(a, a)

    def test_sparse_overflow_raises(self):
        a = from_monomials([(0, 2**64)], 40)
        b = TruncSeries([2**64] * 41)
        with pytest.raises(CoefficientOverflowError):
            mul(a, b)


class TestInvert:
    def test_geometric(self):
        assert invert(S(1, -1, 0, 0)) == S(1, 1, 1, 1)

    def test_identity(self):
        assert invert(S(1)) == S(1)

    def test_parts_at_most_two(self):
        # 1/((1-q)(1-q^2)): partitions into parts <= 2
        assert invert(S(1, -1, -1, 1, 0)) == S(1, 1, 2, 2, 3)

    def test_negative_unit(self):
        a = S(-1, 3, 2)
        assert mul(a, invert(a)) == S(1, 0, 0)

    def test_non_unit(self):
        with pytest.raises(NotInvertibleError):
            invert(S(2, 1))
        with pytest.raises(NotInvertibleError):
            invert(S(0, 1))

    def test_matches_oracle(self):
        rng = np.random.default_rng(3)
        x = [1] + [int(v) for v in rng.integers(-3, 4, 60)]
        assert invert(TruncSeries(x)).coeffs == tuple(pinv(x, 60))

    def test_two_sided_at_200(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            x = [int(rng.choice([1, -1]))] + [0] * 200
            for k in rng.choice(np.arange(1, 201), 12, replace=False):
                x[int(k)] = int(rng.choice([1, -1]))
            a = TruncSeries(x)
            assert mul(a, invert(a)) == TruncSeries.one(200)
            assert mul(invert(a), a) == TruncSeries.one(200)

    def test_overflow(self):
        with pytest.raises(CoefficientOverflowError):
            invert(S(1, -(2**100), 0, 0))


class TestBinomialKernels:
    def test_mul_binomial(self):
        assert mul_binomial(S(1, 1, 1), 1) == S(1, 0, 0)
        assert mul_binomial(S(1, 0, 0), 2, sign=1) == S(1, 0, 1)

    def test_div_binomial_is_inverse(self):
        rng = np.random.default_rng(5)
        a = TruncSeries([int(v) for v in rng.integers(-9, 9, 101)])
        for k in (1, 2, 7, 100, 150):
            assert mul_binomial(div_binomial(a, k), k) == a
            assert div_binomial(mul_binomial(a, k), k) == a

    def test_div_matches_mul_by_inverse(self):
        a = TruncSeries(range(30))
        for k in (1, 3, 29):
            binom = from_monomials([(0, 1), (k, -1)], 29)
            assert div_binomial(a, k) == mul(a, invert(binom))

    def test_div_large_values(self):
        a = TruncSeries([2**61] * 50)
        expect = [2**61 * (k + 1) for k in range(50)]
        assert div_binomial(a, 1).coeffs == tuple(expect)

    def test_div_overflow(self):
        a = TruncSeries([2**126] * 4)
        with pytest.raises(CoefficientOverflowError):
            div_binomial(a, 1)

    def test_bad_exponent(self):
        with pytest.raises(ValueError):
            div_binomial(S(1, 1), 0)


class TestComparison:
    def test_eq_upto(self):
        assert eq_upto(S(1, 1, 0), S(1, 1, 5), 1)
        assert not eq_upto(S(1, 1, 0), S(1, 1, 5), 2)

    def test_first_mismatch(self):
        assert first_mismatch(S(1, 1, 0), S(1, 1, 5)) == 2
        assert first_mismatch(S(0, 0), S(0, 0)) is None
        assert eq_upto(S(0, 0), S(0, 0), 1)

    def test_comparison_past_order(self):
        with pytest.raises(ValueError):
            eq_upto(S(1, 1), S(1, 1, 1), 2)


class TestDump:
    def test_round_trip(self):
        a = S(1, -2, 0, 2**90)
        text = format_dump(a)
        assert text == f"0\t1\n1\t-2\n2\t0\n3\t{2**90}\n"
        assert parse_dump(text) == a

    def test_out_of_sequence(self):
        with pytest.raises(ValueError):
            parse_dump("0\t1\n2\t3\n")


class TestRingAxioms:
    @settings(max_examples=60, deadline=None)
    @given(same_order(3))
    def test_commutative_associative(self, abc):
        a, b, c = abc
        assert mul(a, b) == mul(b, a)
        assert mul(mul(a, b), c) == mul(a, mul(b, c))

    @settings(max_examples=60, deadline=None)
    @given(same_order(3))
    def test_distributive(self, abc):
        a, b, c = abc
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))

    @settings(max_examples=60, deadline=None)
    @given(same_order(2, lo=-(2**66), hi=2**66))
    def test_big_entries_match_oracle_or_raise(self, ab):
        a, b = ab
        expect = pmul(list(a), list(b), a.order)
        if all(COEFF_MIN <= v <= COEFF_MAX for v in expect):
            assert mul(a, b).coeffs == tuple(expect)
        else:
            with pytest.raises(CoefficientOverflowError):
                mul(a, b)

    @settings(max_examples=60, deadline=None)
    @given(same_order(2), st.integers(0, 12), st.integers(0, 12))
    def test_shift_product(self, ab, k, j):
        a, b = ab
        if k + j <= a.order:
            assert mul(shift(a, k), shift(b, j)) == shift(mul(a, b), k + j)

    @settings(max_examples=60, deadline=None)
    @given(same_order(1), st.sampled_from([1, -1]))
    def test_invert_two_sided_or_raise(self, a, unit):
        (a,) = a
        a = TruncSeries([unit] + list(a)[1:])
        expect = pinv(list(a), a.order)
        if all(COEFF_MIN <= v <= COEFF_MAX for v in expect):
            assert invert(a).coeffs == tuple(expect)
            assert mul(a, invert(a)) == TruncSeries.one(a.order)
        else:
            with pytest.raises(CoefficientOverflowError):
                invert(a)
