"""The thirteen acceptance criteria, one test each.

Every test prints ``criterion k: PASS`` or ``criterion k: FAIL (...)`` to the
terminal (outside pytest's capture) before asserting.
"""

import json
import subprocess
import sys
import time

import pytest

from mocktheta import bailey, characters, heckerogers, qkernel, relations
from mocktheta.cli import VERIFIERS
from mocktheta.report import FAIL, PASS, Stopwatch, compare
from mocktheta.series import first_mismatch

GOLDEN = {
    "chi0": (1, 1, 1, 2, 1, 3, 2, 3),
    "chi1": (1, 2, 2, 3, 3, 4, 4, 6),
    "F0": (1, 1, 0, 1, 1, 1, 0, 2, 1, 2),
    "F1": (0, 1, 1, 1, 2, 1, 2, 2, 2),
    "F2": (1, 1, 2, 1, 2, 2, 3, 2),
}


@pytest.fixture
def verdict(capsys):
    def emit(k, failures):
        with capsys.disabled():
            if failures:
                print(f"\ncriterion {k}: FAIL ({'; '.join(failures)})")
            else:
                print(f"\ncriterion {k}: PASS")
        assert not failures

    return emit


def test_criterion_01_golden(verdict):
    t = time.perf_counter()
    bad = [n for n, want in GOLDEN.items() if qkernel.mock_series(n, len(want) - 1).coeffs != want]
    dt = time.perf_counter() - t
    if dt >= 1:
        bad.append(f"{dt:.2f}s")
    verdict(1, bad)


def test_criterion_02_pentagonal(verdict):
    t = time.perf_counter()
    ok = qkernel.euler_product_pentagonal(2000) == qkernel.pochhammer(qkernel.PochSpec(1), 2000)
    dt = time.perf_counter() - t
    verdict(2, ([] if ok else ["series differ"]) + ([f"{dt:.2f}s"] if dt >= 1 else []))


def test_criterion_03_dual_forms(verdict):
    pairs = {
        "chi0": (qkernel.chi0, qkernel.chi0_second),
        "chi1": (qkernel.chi1, qkernel.chi1_second),
        "F0": (qkernel.F0, qkernel.F0_second),
        "F1": (qkernel.F1, qkernel.F1_second),
        "F2": (qkernel.F2, qkernel.F2_second),
    }
    bad = [f"{n} at q^{first_mismatch(a(1000), b(1000))}" for n, (a, b) in pairs.items() if a(1000) != b(1000)]
    verdict(3, bad)


def test_criterion_04_chi01(verdict):
    bad = []
    t = time.perf_counter()
    r = VERIFIERS["chi01b"](2000)
    if r.status != PASS or time.perf_counter() - t >= 10:
        bad.append(f"chi01b {r.status}")
    t = time.perf_counter()
    r = VERIFIERS["chi01a"](2000)
    if r.status not in (PASS, "sign-flipped-pass") or "orientation" not in r.notes or time.perf_counter() - t >= 10:
        bad.append(f"chi01a {r.status}")
    verdict(4, bad)


def test_criterion_05_seventh_order_double_sums(verdict):
    bad = []
    for name, target in (("F0id", "f0"), ("F1id", "f1"), ("F2id", "f2")):
        if heckerogers.hecke_series(name, 2000) != qkernel.normalized(target, 2000):
            bad.append(name)
    verdict(5, bad)


def test_criterion_06_bailey_pairs(verdict):
    bad = []
    for name in ("A2", "A4", "A6", "A8", "A7star"):
        r = bailey.verify_bailey_pair(bailey.slater_pair(name), 40, 400)
        if r.status != PASS:
            bad.append(r.line())
    a7 = bailey.slater_pair("A7star")
    if any(a7.alpha(n) for n in range(1, 400, 3)):
        bad.append("A7star alpha nonzero on 3m+1")
    verdict(6, bad)


def test_criterion_07_conjugate_pair(verdict):
    bad = []
    for n in range(31):
        g = bailey.gamma_closed(n, 600)
        if not g == bailey.gamma_defsum(n, 600) == bailey.gamma_heine(n, 600):
            bad.append(f"n={n}")
    verdict(7, bad)


def test_criterion_08_transform_chains(verdict):
    bad = []
    for name in sorted(bailey.SLATER_PAIRS):
        pair = bailey.slater_pair(name)
        for r in (bailey.bailey_transform_check(pair, 800), bailey.chain_check(pair, 800)):
            if r.status != PASS:
                bad.append(r.line())
    verdict(8, bad)


def test_criterion_09_andrews_ex10(verdict):
    r = bailey.andrews_ex10_check(10, 500)
    verdict(9, [] if r.status == PASS else [r.line()])


def test_criterion_10_character_forms(verdict):
    targets = {
        "char_chi0": "C0",
        "char_chi1": "C1",
        "char_F0": "f0",
        "char_F1": "f1",
        "char_F2": "f2",
        "zagier_chi0": "C0",
        "zagier_chi1": "C1",
    }
    bad = []
    for name, target in targets.items():
        try:
            got = characters.eval_theta(characters.theta_spec(name), 2000)  # asserts per term
        except characters.ThetaSpecError as exc:
            bad.append(f"{name}: {exc}")
            continue
        if got != qkernel.normalized(target, 2000):
            bad.append(name)
    verdict(10, bad)


def test_criterion_11_relations(verdict):
    bad = []
    r = relations.check_f25(60)
    if not r.passed or r.required_order != 1522:
        bad.append(r.line())
    for p in (7, 13, 17, 23):
        r = relations.check_chirels(p, 15, vanish_to=1500)
        if not r.passed:
            bad.append(r.line())
    for p in (5, 11, 13, 17, 23):
        worst = max(st[2] for st in relations.mock7_statements(p))
        n_max = (4000 - worst) // (p * p)
        r = relations.check_mock7rels(p, n_max)
        if not r.passed or p * p * n_max + worst > 4000:
            bad.append(r.line())
    same, shared = relations.f25_agrees_with_mock7(60)
    if not same or not shared:
        bad.append("mock7 at p=5 differs from f25")
    verdict(11, bad)


def test_criterion_12_negative_controls(verdict):
    bad = []
    r = bailey.verify_bailey_pair(bailey.corrupted(bailey.slater_pair("A4"), 3), 40, 400)
    if r.status != FAIL or r.first_mismatch is None:
        bad.append("corrupted alpha not caught")
    elif (r.first_mismatch.index, r.first_mismatch.exponent) != (3, 10):
        bad.append(f"corrupted alpha located at {r.first_mismatch}")

    specs = heckerogers.HECKE_SPECS["chi01b"]
    tampered = (heckerogers.perturbed(specs[0], m_lin=9),) + specs[1:]
    total = heckerogers.eval_double_sum(tampered[0], 400) + heckerogers.eval_double_sum(tampered[1], 400)
    r = compare("chi01b-perturbed", total, qkernel.normalized("C1", 400), Stopwatch())
    if r.status != FAIL or r.first_mismatch is None:
        bad.append("perturbed exponent not caught")
    elif r.first_mismatch.lhs == r.first_mismatch.rhs:
        bad.append("mismatch record is inconsistent")
    verdict(12, bad)


def test_criterion_13_end_to_end(verdict, tmp_path):
    path = tmp_path / "all.json"
    t = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "mocktheta", "verify", "all", "--terms", "1000", "--json", str(path)],
        capture_output=True,
        text=True,
        timeout=300,
    )
    dt = time.perf_counter() - t
    bad = []
    if proc.returncode != 0:
        bad.append(f"exit {proc.returncode}: {proc.stderr.strip() or proc.stdout.strip()}")
    if dt >= 60:
        bad.append(f"{dt:.1f}s")
    if proc.returncode == 0:
        data = json.loads(path.read_text())
        if len(data) < 20 or any(d["status"] == FAIL for d in data):
            bad.append("report set incomplete")
    verdict(13, bad)
