import copy
from fractions import Fraction

import pytest

from qsskit.certcheck import (
    admissible_rows,
    check_certificate,
    check_farkas,
    check_infeasibility_certificate,
    check_sample,
    check_shadow_certificate,
)
from qsskit.codebook import gamma5_structure, threshold_structure
from qsskit.entropy_lp import build_qss_lp


def row(terms, sense, rhs):
    return {"terms": [{"subset": s, "coef": str(c)} for s, c in terms], "sense": sense, "rhs": str(rhs)}


def test_check_farkas_by_hand():
    r1 = row([([1], 1)], ">=", 1)
    r2 = row([([1], 1)], "<=", 0)
    # -1 * (x >= 1) + 1 * (x <= 0): 0 <= -1
    assert check_farkas([r1, r2], [-1, 1])[0]
    assert not check_farkas([r1, r2], [1, -1])[0]
    assert not check_farkas([r1, r2], [-1, 2])[0]
    assert not check_farkas([r1, r2], [0, 0])[0]


def infeasible_cert(reports):
    return next(c for c in reports[6].certificates().values() if c["kind"] == "lp_infeasible")


def test_every_certificate_checks(reports):
    for key in (3, 4, 5, 6, "7h"):
        for ident, cert in reports[key].certificates().items():
            ok, msg = check_certificate(cert)
            assert ok, (ident, msg)


def test_tampered_multiplier_rejected(reports):
    cert = copy.deepcopy(infeasible_cert(reports))
    assert check_infeasibility_certificate(cert)[0]
    entry = cert["farkas"][0]
    entry["multiplier"] = str(Fraction(entry["multiplier"]) * 2)
    assert not check_infeasibility_certificate(cert)[0]


def test_dropped_row_rejected(reports):
    cert = copy.deepcopy(infeasible_cert(reports))
    cert["farkas"].pop()
    assert not check_certificate(cert)[0]


def test_foreign_row_rejected(reports):
    cert = copy.deepcopy(infeasible_cert(reports))
    # a row that no QSS LP contains: S(r) <= 1/2
    cert["farkas"].append({"index": -1, "multiplier": "1", "constraint": row([([0], 1)], "<=", "1/2")})
    assert not check_certificate(cert)[0]


def test_swapped_structure_rejected(reports):
    """Recovery rows of one structure are secrecy rows of another."""
    original = infeasible_cert(reports)
    rejected = 0
    for other in reports[6].results:
        sj = other.structure.to_json()
        if sj == original["structure"]:
            continue
        cert = copy.deepcopy(original)
        cert["structure"] = sj
        rejected += not check_certificate(cert)[0]
    assert rejected > 0


def test_sample_check(reports):
    realized = next(c for c in reports[5].certificates().values() if c["kind"] == "realized")
    assert check_sample(realized)[0]
    bad = copy.deepcopy(realized)
    bad["sample"][1]["value"] = "7"
    assert not check_sample(bad)[0]
    short = copy.deepcopy(realized)
    short["sample"].pop()
    assert not check_sample(short)[0]


def test_shadow_certificate(reports):
    cert = next(c for c in reports[5].certificates().values() if c["kind"] == "shadow")
    assert cert["structure"] == gamma5_structure().to_json()
    assert check_shadow_certificate(cert)[0]
    wrong_b = copy.deepcopy(cert)
    wrong_b["form"]["b"] = "1/2"
    assert not check_shadow_certificate(wrong_b)[0]
    closed = copy.deepcopy(cert)
    closed["pattern"]["bounds"]["x"] = "[1/8, 1]"
    assert not check_shadow_certificate(closed)[0]
    other_t = copy.deepcopy(cert)
    other_t["t"] = []
    assert not check_shadow_certificate(other_t)[0]


def test_ame_and_combinatorial_certificates():
    cert = {"kind": "ame_table", "structure": threshold_structure(7, 4).to_json()}
    assert check_certificate(cert)[0]
    assert not check_certificate({"kind": "ame_table", "structure": threshold_structure(5, 3).to_json()})[0]
    assert not check_certificate({"kind": "ame_table", "structure": gamma5_structure().to_json()})[0]
    bad = {"n_players": 4, "minimal_authorized": [[1, 2], [3, 4]]}
    assert check_certificate({"kind": "combinatorial", "structure": bad})[0]
    assert not check_certificate({"kind": "combinatorial", "structure": gamma5_structure().to_json()})[0]
    assert not check_certificate({"kind": "mystery"})[0]


def test_admissible_rows_contain_the_solver_rows():
    for a in (threshold_structure(5, 3), gamma5_structure()):
        keys = admissible_rows(a.n_players, a.as_lists())
        from qsskit.certcheck import _parse_row, _row_key

        for c in build_qss_lp(a).constraints:
            assert _row_key(*_parse_row(c.to_json())) in keys
        for c in build_qss_lp(a, "full").constraints:
            assert _row_key(*_parse_row(c.to_json())) in keys
