import json

import pytest

from qsskit.access import AccessStructure, canonical_form, homogeneity, is_combinatorially_valid, permute
from qsskit.codebook import fano_structure, gamma5_structure, threshold_structure
from qsskit.classify import (
    ELIMINATED,
    REALIZED,
    brute_force_structures,
    classify_structure,
    count_antichains,
    enumerate_structures,
    lemma_r7_audit,
)
from qsskit.errors import BadN
from qsskit.uniformity import is_k_uniform


def test_dedekind_numbers():
    assert [count_antichains(n) for n in range(5)] == [2, 3, 6, 20, 168]


def test_enumeration_matches_brute_force():
    for n in (3, 4, 5):
        assert enumerate_structures(n) == brute_force_structures(n)


def test_enumeration_counts():
    assert len(enumerate_structures(3)) == 1
    assert len(enumerate_structures(4)) == 1
    assert len(enumerate_structures(6)) == 23
    seven = enumerate_structures(7, homogeneous_only=True)
    assert len(seven) == 3
    assert canonical_form(fano_structure()) in seven
    assert canonical_form(threshold_structure(7, 4)) in seven


def test_enumeration_is_canonical_and_valid():
    for n in (5, 6):
        found = enumerate_structures(n)
        assert len(set(found)) == len(found)
        for a in found:
            assert a == canonical_form(a)
            assert is_combinatorially_valid(a)


def test_homogeneous_subset_of_full():
    full = enumerate_structures(6)
    homog = enumerate_structures(6, homogeneous_only=True)
    assert set(homog) == {a for a in full if homogeneity(a) is not None}


def test_five_player_counterexample_to_smaller_sizes():
    # a 4-set is needed on 5 players, so sizes must run up to n - 1
    a = AccessStructure.from_players(5, [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3, 4, 5)])
    assert is_combinatorially_valid(a)
    assert canonical_form(a) in enumerate_structures(5)


def test_bad_n():
    for n in (2, 8):
        with pytest.raises(BadN):
            enumerate_structures(n)
    with pytest.raises(BadN):
        enumerate_structures(7)
    with pytest.raises(BadN):
        brute_force_structures(6)


def test_classify_single_structures():
    r = classify_structure(threshold_structure(5, 3))
    assert r.verdict == REALIZED and r.state == "five-qubit"
    r = classify_structure(gamma5_structure())
    assert r.verdict == ELIMINATED and r.filter == "F5"
    r = classify_structure(threshold_structure(3, 2))
    assert r.verdict == ELIMINATED and r.filter == "F2"
    r = classify_structure(AccessStructure.from_players(4, [(1, 2), (3, 4)]))
    assert r.verdict == ELIMINATED and r.filter == "F1"


def test_realization_of_relabeled_fano():
    sigma = (3, 1, 2, 7, 5, 6, 4)
    r = classify_structure(permute(fano_structure(), sigma))
    assert r.verdict == REALIZED and r.state == "steane"


def test_reports(reports):
    for key in (3, 4, 6):
        counts = reports[key].counts()
        assert counts[REALIZED] == 0 and counts["UNDECIDED"] == 0
    five = reports[5]
    assert [r.structure for r in five.realized()] == [canonical_form(threshold_structure(5, 3))]
    assert five.counts()["F5"] == 1
    seven = reports["7h"]
    assert [r.structure for r in seven.realized()] == [canonical_form(fano_structure())]
    assert not seven.undecided()


def test_lemma_r7_audit(reports):
    assert lemma_r7_audit(reports["7h"])
    assert not lemma_r7_audit([AccessStructure.from_players(7, [(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6),
                                                                 (2, 5, 7), (3, 4, 7), (3, 5, 6), (1, 2, 4)])])


def test_three_homogeneous_survivor_gives_three_uniform_state(reports, steane_state):
    for r in reports["7h"].survivors:
        if homogeneity(r.structure) == 3:
            assert r.state == "steane"
            assert is_k_uniform(steane_state, 3)


def test_report_files_deterministic(reports, tmp_path):
    rep = reports[5]
    p1 = rep.write(tmp_path / "a")
    p2 = rep.write(tmp_path / "b")
    assert p1.read_text() == p2.read_text()
    data = json.loads(p1.read_text())
    assert set(data) == {"n_players", "homogeneous_only", "full_n7", "enumerated", "counts", "survivors", "structures"}
    for entry in data["structures"]:
        if entry["certificate"]:
            assert (tmp_path / "a" / entry["certificate"]).exists()
    assert (tmp_path / "a" / "timing.json").exists()
