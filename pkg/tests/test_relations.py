import pytest

import oracles
from mocktheta import relations
from mocktheta.qkernel import normalized
from mocktheta.relations import (
    CoeffStream,
    InsufficientOrderError,
    check_chirels,
    check_f25,
    check_mock7rels,
    chirels_order,
    epsilon_p,
    f25_agrees_with_mock7,
    is_prime,
    mock7_class,
    mock7_statements,
    mock7rels_order,
    nu_p,
)
from mocktheta.series import TruncSeries


def largest_nmax(p, limit=4000):
    """Largest n with p^2 n + offset <= limit for every progression at p."""
    worst = max(st[2] for st in mock7_statements(p))
    return (limit - worst) // (p * p)


class TestHelpers:
    def test_nu_p(self):
        assert nu_p(7, 49) == 2
        assert nu_p(7, 361) == 0
        assert nu_p(5, 250) == 3
        assert nu_p(3, -18) == 2

    def test_nu_p_zero(self):
        with pytest.raises(ValueError):
            nu_p(7, 0)

    def test_epsilon(self):
        assert epsilon_p(13) == -1
        assert epsilon_p(7) == 1
        assert epsilon_p(17) == 1
        assert epsilon_p(23) == -1
        with pytest.raises(ValueError):
            epsilon_p(11)

    def test_is_prime_small(self):
        want = [n for n in range(200) if n > 1 and all(n % d for d in range(2, n))]
        assert [n for n in range(200) if is_prime(n)] == want

    def test_stream_negative_reads_zero(self):
        s = CoeffStream("f2", 20)
        assert s(-3) == 0 and s(0) == 1

    def test_stream_refuses_past_order(self):
        s = CoeffStream("f0", 20)
        with pytest.raises(InsufficientOrderError):
            s(21)

    def test_stream_unknown(self):
        with pytest.raises(KeyError):
            CoeffStream("chi0", 5)


class TestChirels:
    def test_offsets(self):
        r = check_chirels(7, 1, vanish_to=10)
        labels = {i.statement for i in r.instances}
        assert any("C0(p^2 n+31)" in s for s in labels)
        assert any("C1(p^2 n+1)" in s for s in labels)
        r = check_chirels(13, 0, vanish_to=10)
        assert any("C0(p^2 n+107)" in i.statement for i in r.instances)

    def test_literal_small_case(self):
        # p = 7, n = 0: C0(31) = -C1(0) and C1(1) = C0(0), straight from the oracle
        c0, c1 = oracles.normalized("C0", 40), oracles.normalized("C1", 40)
        assert c0[31] == -c1[0]
        assert c1[1] == c0[0]
        assert check_chirels(7, 0, vanish_to=40).passed

    def test_vanishing_against_oracle(self):
        c0 = oracles.normalized("C0", 60)
        for n in range(61):
            v = 30 * n + 1
            if nu_p(7, v) == 1:
                assert c0[n] == 0

    def test_vanishing_count(self):
        r = check_chirels(7, 0, vanish_to=100)
        want = sum(1 for n in range(101) if nu_p(7, 30 * n + 1) == 1)
        want += sum(1 for n in range(101) if nu_p(7, 30 * n + 19) == 1)
        assert r.vanishing_checked == want

    @pytest.mark.parametrize("p", [7, 13, 17, 23])
    def test_acceptance_primes(self, p):
        r = check_chirels(p, 15, vanish_to=1500)
        assert r.passed, r.line()
        assert r.required_order == chirels_order(p, 15)

    @pytest.mark.parametrize("p", [9, 11, 2, 5, 1])
    def test_invalid(self, p):
        with pytest.raises(ValueError):
            check_chirels(p, 1)

    def test_not_prime_message(self):
        with pytest.raises(ValueError, match="9 is not prime"):
            check_chirels(9, 1)


class TestMock7:
    def test_classes(self):
        assert mock7_class(5) == (5, 1)
        assert mock7_class(23) == (5, -1)
        assert mock7_class(11) == (11, 1)
        assert mock7_class(17) == (11, -1)
        assert mock7_class(13) == (13, 1)

    def test_not_covered(self):
        with pytest.raises(ValueError):
            mock7_class(3)
        with pytest.raises(ValueError, match="not prime"):
            mock7_class(25)

    def test_f2_offset_at_11(self):
        st = {s[1]: s for s in mock7_statements(11)}
        assert st["f2"][2] == 4 and st["f2"][3] == "f0" and st["f2"][5] == -1

    def test_p5_matches_f25(self):
        st = {s[1]: s[2:] for s in mock7_statements(5)}
        assert st["f0"] == (8, "f2", 0, 1)
        assert st["f1"] == (1, "f0", 0, 1)
        assert st["f2"] == (22, "f1", 1, -1)

    def test_lower_signs_at_23(self):
        up = [s[5] for s in mock7_statements(5)]
        down = [s[5] for s in mock7_statements(23)]
        assert down == [-s for s in up]

    @pytest.mark.parametrize("p", [5, 11, 13, 17, 23])
    def test_acceptance_primes(self, p):
        n = largest_nmax(p)
        assert mock7rels_order(p, n) <= 4000
        r = check_mock7rels(p, n)
        assert r.passed, r.line()
        assert r.vanishing_checked > 0
        assert "odd prime" in r.notes

    def test_oracle_small(self):
        f = {k: oracles.normalized(k, 60) for k in ("f0", "f1", "f2")}
        # p = 5, n = 0, 1, 2
        for n in range(3):
            assert f["f0"][25 * n + 8] == f["f2"][n]
            assert f["f1"][25 * n + 1] == f["f0"][n]
        assert f["f2"][22] == -f["f1"][1]


class TestF25:
    def test_passes(self):
        r = check_f25(60)
        assert r.passed and r.required_order == 1522

    def test_edge_term(self):
        r = check_f25(0)
        edge = [i for i in r.instances if i.lhs_fn == "f2" and i.n == 0]
        assert edge[0].lhs == 0 == edge[0].rhs

    def test_agrees_with_mock7(self):
        same, shared = f25_agrees_with_mock7(60)
        assert same and shared > 150

    def test_injected_counterexample(self, monkeypatch):
        def tampered(fid, order):
            s = normalized(fid, order)
            if fid != "f0":
                return s
            c = list(s)
            c[33] += 1  # f0(25*1 + 8)
            return TruncSeries(c)

        monkeypatch.setattr(relations, "normalized", tampered)
        r = check_f25(5)
        assert not r.passed
        bad = r.counterexamples[0]
        assert bad.lhs_fn == "f0" and bad.n == 1
        assert "first counterexample" in r.line()
        d = r.to_dict()
        assert d["status"] == "fail" and d["counterexamples"][0]["n"] == 1


class TestReport:
    def test_dict_keys(self):
        d = check_f25(3).to_dict()
        assert set(d) == {
            "relation_id",
            "prime",
            "n_range",
            "status",
            "counterexamples",
            "checked",
            "vanishing_checked",
            "required_order",
            "elapsed_ms",
            "notes",
        }
        assert d["n_range"] == [0, 3]
