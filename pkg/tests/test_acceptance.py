"""One test per acceptance criterion; each records a PASS/FAIL line that is
printed in the terminal summary."""

import subprocess
import sys
import time

from conftest import ACCEPTANCE_LINES
from displays import FIRST_SECOND, THIRD_FOURTH, singular_display
from sbo import operators as O
from sbo import singular as S
from sbo import verify as V
from sbo.dsl import parse_op


def _record(number, title, ok, seconds, limit=None, detail=""):
    in_time = limit is None or seconds < limit
    status = "PASS" if ok and in_time else "FAIL"
    budget = " (limit %ds)" % limit if limit else ""
    line = "%s  criterion %2d  %-34s %7.2fs%s %s" % (status, number, title, seconds, budget, detail)
    ACCEPTANCE_LINES.append(line.rstrip())
    print(line)
    assert ok, detail
    assert in_time, "took %.1fs, limit %ds" % (seconds, limit)


def _suites(names, n_max, order_max):
    t0 = time.perf_counter()
    reports = [V.run_suite(name, n_max, order_max) for name in names]
    failed = [f for r in reports for f in r.failures]
    cases = sum(len(r.results) for r in reports)
    detail = "%d cases, %d failed" % (cases, len(failed))
    if failed:
        detail += "; first: %s %s" % (failed[0].name, failed[0].params)
    return not failed and cases > 0, time.perf_counter() - t0, detail, reports


def test_criterion_01_coefficients():
    ok, sec, detail, reports = _suites(["coeffs"], 6, 6)
    _record(1, "coefficient identities", ok, sec, 5, detail)


def _display_mismatches():
    bad = []
    for (t, N), texts in FIRST_SECOND.items():
        for n in range(2, 6):
            for p in (range(0, n) if t == 1 else range(1, n + 1)):
                for text, pres in zip(texts, ("normal", "geometric")):
                    e = parse_op(text, {"n": n, "p": p, "N": N}, source="ambient")
                    if not V.op_equal(e, O.family(t, n, p, N))[0]:
                        bad.append((t, N, n, p, pres))
                    if not V.op_equal(O.family(t, n, p, N, pres), O.family(t, n, p, N))[0]:
                        bad.append((t, N, n, p, pres, "builder"))
    for (t, N), text in THIRD_FOURTH.items():
        for n in range(2, 6):
            p = 0 if t == 3 else n
            e = parse_op(text, {"n": n, "p": p, "N": N}, source="ambient")
            for pres in ("normal", "geometric"):
                if not V.op_equal(e, O.family(t, n, p, N, pres))[0]:
                    bad.append((t, N, n, p, pres))
    for t in (1, 2):
        for k in range(4):
            for n in range(2, 6):
                for p in (range(0, n) if t == 1 else range(1, n + 1)):
                    shown, built = singular_display(t, n, p, k), S.build(t, n, p, k)
                    for lam0 in (3, -7, 11):
                        if S.proportional(shown.at(lam0), built.at(lam0)) != 1:
                            bad.append(("vector", t, k, n, p, lam0))
    return bad


def test_criterion_02_low_order_displays():
    t0 = time.perf_counter()
    bad = _display_mismatches()
    _record(2, "low order displays", not bad, time.perf_counter() - t0, 5,
            "%d mismatches%s" % (len(bad), (": %s" % (bad[:3],)) if bad else ""))


def test_criterion_03_presentations():
    ok, sec, detail, reports = _suites(["presentation"], 5, 5)
    _record(3, "presentation equivalence", ok, sec, 60, detail)


def test_criterion_04_equivariance():
    ok, sec, detail, reports = _suites(["equivariance"], 5, 3)
    perturbed = [r for r in reports[0].results if r.info.get("expected_failure")]
    ok = ok and len(perturbed) > 0 and all(r.counterexample for r in perturbed)
    _record(4, "equivariance", ok, sec, 120, detail + ", %d perturbed caught" % len(perturbed))


def test_criterion_05_singular_vectors():
    ok, sec, detail, reports = _suites(["singular"], 5, 4)
    _record(5, "singular vectors", ok, sec, 120, detail)


def test_criterion_06_hodge():
    ok, sec, detail, reports = _suites(["hodge"], 5, 5)
    _record(6, "Hodge conjugation", ok, sec, None, detail)


def test_criterion_07_factorizations():
    ok, sec, detail, reports = _suites(["main-fact", "supp-fact"], 5, 5)
    _record(7, "factorization identities", ok, sec, None, detail)


def test_criterion_08_gauge_and_q():
    ok, sec, detail, reports = _suites(["gauge-q"], 7, 5)
    _record(8, "gauge companion and Q", ok, sec, None, detail)


def test_criterion_09_kkp():
    ok, sec, detail, reports = _suites(["kkp"], 2, 5)
    _record(9, "n = 2 Gegenbauer comparison", ok, sec, None, detail)


def test_criterion_10_curved():
    ok, sec, detail, reports = _suites(["curved"], 5, 1)
    _record(10, "flat curved-family consistency", ok, sec, None, detail)


def test_criterion_11_full_check():
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "sbo.cli", "check", "--suite", "all",
                           "--n-max", "5", "--order-max", "4"], capture_output=True, text=True)
    sec = time.perf_counter() - t0
    last = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-300:]
    _record(11, "sbo check --suite all", proc.returncode == 0, sec, 600,
            "exit %d; %s" % (proc.returncode, last))
