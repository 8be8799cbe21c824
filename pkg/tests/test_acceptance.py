"""Acceptance gate: one test (and one printed verdict line) per criterion.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion
lines; the whole gate shares a single full suite run.
"""

import json
import time
from pathlib import Path

import pytest

from eqprox.cli import main
from eqprox.suite import run_suite

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="module")
def full_report():
    t0 = time.time()
    report = run_suite(max_n=5, seed=0, max_group=6)
    elapsed = time.time() - t0
    return report, elapsed


def _criterion(report, name, number, title, min_checked=1):
    res = next(r for r in report.results if r.name == name)
    ok = res.ok and res.checked >= min_checked
    print(f"ACCEPTANCE {number} {title}: {'PASS' if ok else 'FAIL'} "
          f"({res.checked} checks)")
    assert res.checked >= min_checked, f"family too small: {res.checked}"
    assert res.ok, res.line()


def test_criterion_01_nu_equality(full_report):
    report, elapsed = full_report
    _criterion(report, "tgprox", 1, "translate-nearness equals derived "
                                    "proximity on the exhaustive family",
               min_checked=1000)
    assert elapsed < 300, f"family run took {elapsed:.0f}s, budget 300s"


def test_criterion_02_betag_consistency(full_report):
    report, _ = full_report
    _criterion(report, "betag", 2, "maximal group proximity equals "
                                   "translate-nearness over the diagonal basis",
               min_checked=100)


def test_criterion_03_derived_basis_claims(full_report):
    report, _ = full_report
    _criterion(report, "ugclaims", 3, "derived basis is valid, bounded, "
                                      "saturation-preserving, equivalent "
                                      "under the hypotheses",
               min_checked=1000)


def test_criterion_04_proximity_axiom_suite(full_report):
    report, _ = full_report
    _criterion(report, "axioms", 4, "induced proximities pass P1-P5, P6 "
                                    "matches the diagonal criterion, "
                                    "P5 and P5' agree",
               min_checked=1100)


def test_criterion_05_far_translate_upgrade(full_report):
    report, _ = full_report
    _criterion(report, "semigr", 5, "every far pair has far (not merely "
                                    "disjoint) translates at some level",
               min_checked=1000)


def test_criterion_06_rationals_model():
    t0 = time.time()
    report = run_suite(seed=0, filters=["rationals"])
    elapsed = time.time() - t0
    _criterion(report, "rationals", 6, "orbit counts, bonding maps, farness "
                                       "fixtures, saturation monotonicity, "
                                       "endpoint completeness",
               min_checked=1300)
    assert elapsed < 120, f"rationals run took {elapsed:.0f}s, budget 120s"


def test_criterion_07_convex_saturation_witness(full_report):
    report, _ = full_report
    res = next(r for r in report.results if r.name == "ordcomp")
    ok = res.ok and res.checked == 500
    print(f"ACCEPTANCE 7 witness chain found for every convex containment: "
          f"{'PASS' if ok else 'FAIL'} ({res.checked} checks)")
    assert res.checked == 500
    assert res.ok, res.line()


def test_criterion_08_metric_formula(full_report):
    report, _ = full_report
    _criterion(report, "metric", 8, "metric translate-distance proximity "
                                    "equals the derived-basis proximity",
               min_checked=1000)


def test_criterion_09_maximality(full_report):
    report, _ = full_report
    _criterion(report, "maximality", 9, "every enumerated invariant "
                                        "compatible proximity below the base "
                                        "is below the translate-nearness one",
               min_checked=1000)


def test_criterion_10_worst_case_pseudometrics(full_report):
    report, _ = full_report
    _criterion(report, "sigma", 10, "worst-case pseudometric conclusions "
                                    "hold where their hypotheses hold",
               min_checked=100)


def _run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_criterion_11_cli_contract(capsys, tmp_path):
    ok = True

    # Determinism: byte-identical reports under a fixed seed.
    code1, out1, _ = _run_cli(capsys, "suite", "--max-n", "2", "--seed", "3",
                              "--filter", "tgprox,betag", "--json")
    code2, out2, _ = _run_cli(capsys, "suite", "--max-n", "2", "--seed", "3",
                              "--filter", "tgprox,betag", "--json")
    ok &= code1 == 0 and code2 == 0 and out1 == out2

    # Exit-code semantics: 0 pass, 1 math failure, 2 input error, 3 cap.
    code_ok, _, _ = _run_cli(capsys, "validate",
                             str(FIXTURES / "z3_rotation.json"))
    code_math, _, _ = _run_cli(capsys, "validate",
                               str(FIXTURES / "bad_basis.json"))
    code_input, _, _ = _run_cli(capsys, "rat", "far", "(0,1", "{1}")
    big = {"carrier": [str(i) for i in range(13)]}
    big_path = tmp_path / "big.json"
    big_path.write_text(json.dumps(big), encoding="utf-8")
    code_cap, _, _ = _run_cli(capsys, "validate", str(big_path))
    ok &= (code_ok, code_math, code_input, code_cap) == (0, 1, 2, 3)

    # Negative controls: three mutated fixtures, each caught with a
    # concrete counterexample.
    caught = 0
    code, _, err = _run_cli(capsys, "validate", str(FIXTURES / "bad_table.json"))
    caught += code == 2 and "triple" in err
    code, _, err = _run_cli(capsys, "validate", str(FIXTURES / "bad_chain.json"))
    caught += code == 2 and "levels" in err
    code, out, _ = _run_cli(capsys, "validate", str(FIXTURES / "bad_basis.json"))
    caught += code == 1 and "counterexample" in out
    ok &= caught == 3

    # An injected defect must fail the suite with a counterexample.
    code, out, _ = _run_cli(capsys, "suite", "--max-n", "2",
                            "--filter", "tgprox", "--inject", "bracket")
    ok &= code == 1 and "first counterexample" in out

    print(f"ACCEPTANCE 11 CLI determinism, exit codes, negative controls: "
          f"{'PASS' if ok else 'FAIL'}")
    assert ok
