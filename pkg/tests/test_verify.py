import json

from pudq.pumodel import PUParams
from pudq.verify import CHECKS, VerifyOptions, run_checks


def test_default_suite_passes():
    checks, report = run_checks(PUParams(4, 1, 1))
    assert [c.name for c in checks] == list(CHECKS)
    assert report["passed"], report["failed"]
    assert report["J1_J2"] == "0"
    assert abs(report["calibration"] - 1) < 1e-9
    json.dumps(report)


def test_equal_frequency_report_is_candid():
    _, report = run_checks(PUParams(4, 1, 1), ["equal_frequency_map"])
    d = report["checks"][0]["detail"]
    assert d["map"] == "complex"
    assert d["printed_map_symplectic"] and not d["printed_map_reaches_target"]


def test_wrong_energy_hook_fails():
    _, report = run_checks(PUParams(2, 1, 1), ["star_genvalue", "radial_equation"], VerifyOptions(n_max=1, wrong_energy=True))
    assert report["failed"] == ["star_genvalue"]
    assert not report["passed"]


def test_hbar_other_than_one_skips_closed_form_checks():
    checks, report = run_checks(PUParams(2, 1, 2), ["schrodinger", "star_genvalue"], VerifyOptions(n_max=1))
    assert checks[0].skipped and report["passed"]


def test_report_is_deterministic():
    names = ["star_genvalue", "charge_brackets", "canonical_map", "appendix_identities"]
    a = run_checks(PUParams(2, 1, 1), names, VerifyOptions(n_max=1))[1]
    b = run_checks(PUParams(2, 1, 1), names, VerifyOptions(n_max=1))[1]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
