"""Enumeration of candidate access structures and the elimination pipeline.

Filters run in a fixed order and stop at the first elimination:

    F1  combinatorial validity
    F2  AME table (a k-threshold scheme on 2k-1 players needs AME(2k, 2))
    F3  entropy LP infeasibility, with a Farkas certificate
    F4  n = 7, 3-homogeneous: pair coverage, at least 7 lines, two-shared-players
    F5  shadow inequality on the purity pattern forced by the entropy LP
    F6  realization by a built-in state that passes verification

Every structure ends REALIZED, ELIMINATED or UNDECIDED.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from qsskit import codebook
from qsskit.access import (
    AccessStructure,
    canonical_form,
    homogeneity,
    is_combinatorially_valid,
    lemma_x2_filter,
    pair_coverage,
    permute,
    players_of,
    satisfies_no_cloning,
    thresholdness,
)
from qsskit.bits import members, player_mask, popcount
from qsskit.errors import BadN, LPTimeout
from qsskit.entropy_lp import build_qss_lp, forced_uniformity_pattern, lp_feasible
from qsskit.qssverify import build_qss_state, verify_scheme
from qsskit.qstate import permute_qubits
from qsskit.uniformity import shadow_scan

LP_TIMEOUT = 60.0

REALIZED = "REALIZED"
ELIMINATED = "ELIMINATED"
UNDECIDED = "UNDECIDED"


# ------------------------------------------------------------------ enumeration


def _sorted_canonical(found) -> list[AccessStructure]:
    return sorted({canonical_form(a) for a in found}, key=lambda a: (len(a.minimal_sets), a.minimal_sets))


def _search(n: int, sizes) -> list[AccessStructure]:
    """Depth-first search over candidate sets in (size, mask) order.

    Authorization is tracked as a bitset over share subsets (bit ``m >> 1``
    for player mask ``m``), so the pruning tests are single bit lookups:
    a candidate above a chosen set is never minimal; a candidate whose
    complement is already authorized cannot be authorized; a candidate left
    out stays unauthorized, so its complement must become authorized before
    the complement's fate is sealed.
    """
    u = (1 << n) - 1
    cands = sorted((m for m in range(2, 1 << (n + 1), 2) if popcount(m) in sizes), key=lambda m: (popcount(m), m))
    pos = {m >> 1: i for i, m in enumerate(cands)}
    up = [0] * (1 << n)
    for s in range(1 << n):
        bits = 0
        for t in range(1 << n):
            if t & s == s:
                bits |= 1 << t
        up[s] = bits
    # position after which the authorization of subset s can no longer change
    sealed = [max((pos[t] for t in range(1 << n) if t & s == t and t in pos), default=-1) for s in range(1 << n)]
    everything = (1 << (1 << n)) - 1
    width = 1 << n
    out = []

    def valid(auth: int, chosen: list[int]) -> bool:
        rev = int(format(auth, f"0{width}b")[::-1], 2)
        if auth ^ rev != everything:
            return False
        cover = 0
        for c in chosen:
            cover |= c
        return cover == u

    def rec(i: int, auth: int, chosen: list[int]) -> None:
        if i == len(cands):
            if valid(auth, chosen):
                out.append(AccessStructure(n, tuple(c << 1 for c in chosen)))
            return
        c = cands[i] >> 1
        if auth >> c & 1:
            rec(i + 1, auth, chosen)
            return
        comp = u ^ c
        if not auth >> comp & 1:
            chosen.append(c)
            rec(i + 1, auth | up[c], chosen)
            chosen.pop()
        if sealed[comp] < i and not auth >> comp & 1:
            return
        rec(i + 1, auth, chosen)

    for ell in sorted(sizes):
        first = (1 << ell) - 1  # players 1..ell
        if first << 1 not in cands:
            continue
        rec(pos[first] + 1, up[first], [first])
    return out


def enumerate_structures(n: int, homogeneous_only: bool = False, allow_full_n7: bool = False) -> list[AccessStructure]:
    """All valid minimal access structures on ``n`` players up to relabeling.

    Members range over sizes 2..n-1 (a singleton is authorized only in the
    one-set structure, which violates no-redundancy for n >= 2).  The search
    fixes the first chosen set to {1..ell}; canonical deduplication makes the
    result independent of that choice.
    """
    if not 3 <= n <= 7:
        raise BadN(f"enumeration supports 3 <= n <= 7, got {n}")
    if n == 7 and not homogeneous_only and not allow_full_n7:
        raise BadN("non-homogeneous enumeration for n = 7 needs allow_full_n7")
    found = []
    if homogeneous_only:
        for k in range(2, n):
            found.extend(_search(n, {k}))
    else:
        found.extend(_search(n, set(range(2, n))))
    return _sorted_canonical(found)


def brute_force_structures(n: int) -> list[AccessStructure]:
    """Oracle: every antichain of nonempty player sets, filtered for validity."""
    if not 1 <= n <= 5:
        raise BadN("brute force is limited to n <= 5")
    universe = player_mask(n)
    subsets = [m for m in range(2, universe + 1, 2)]
    found = []

    def rec(i: int, chosen: list[int]) -> None:
        if i == len(subsets):
            if chosen:
                a = AccessStructure(n, tuple(chosen))
                if is_combinatorially_valid(a):
                    found.append(a)
            return
        s = subsets[i]
        rec(i + 1, chosen)
        if all(s & c != c and s & c != s for c in chosen):
            chosen.append(s)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return _sorted_canonical(found)


def count_antichains(n: int) -> int:
    """Number of antichains of subsets of an n-set (Dedekind numbers), by brute force."""
    subsets = list(range(1 << n))
    count = 0

    def rec(i: int, chosen: list[int]) -> None:
        nonlocal count
        if i == len(subsets):
            count += 1
            return
        s = subsets[i]
        rec(i + 1, chosen)
        if all(s & c != c and s & c != s for c in chosen):
            chosen.append(s)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return count


# --------------------------------------------------------------------- pipeline


@dataclass
class Step:
    filter: str
    outcome: str  # "pass", "eliminate", "skip", "undecided", "realize"
    detail: str

    def to_json(self) -> dict:
        return {"filter": self.filter, "outcome": self.outcome, "detail": self.detail}


@dataclass
class StructureResult:
    structure: AccessStructure
    verdict: str
    filter: str | None
    reasons: list[Step]
    certificate: dict | None = None
    state: str | None = None

    def to_json(self, ident: str) -> dict:
        return {
            "id": ident,
            "minimal_authorized": self.structure.as_lists(),
            "verdict": self.verdict,
            "filter": self.filter,
            "state": self.state,
            "certificate": f"certificates/{ident}.json" if self.certificate else None,
            "reasons": [s.to_json() for s in self.reasons],
        }


def _witness_invalid(a: AccessStructure) -> str:
    if not satisfies_no_cloning(a):
        for m in range(0, a.universe + 1, 2):
            if a.is_authorized(m) == a.is_authorized(a.universe ^ m):
                return f"no-cloning fails on {players_of(m)} and its complement"
    covered = 0
    for s in a.minimal_sets:
        covered |= s
    return f"players {players_of(a.universe & ~covered)} appear in no minimal set"


def _relabeling(source: AccessStructure, target: AccessStructure):
    """Permutation ``sigma`` (1-indexed images) with permute(source, sigma) == target."""
    if source.n_players != target.n_players or len(source.minimal_sets) != len(target.minimal_sets):
        return None
    n = source.n_players
    for perm in itertools.permutations(range(1, n + 1)):
        if permute(source, perm) == target:
            return perm
    return None


def _builtin_states():
    return [
        ("five-qubit", codebook.threshold_structure(5, 3), codebook.five_qubit_encoding),
        ("steane", codebook.fano_structure(), codebook.steane_encoding),
    ]


def _sample_json(result) -> list:
    return result.to_json()["sample"]


def classify_structure(a: AccessStructure, timeout: float = LP_TIMEOUT) -> StructureResult:
    n = a.n_players
    steps: list[Step] = []
    sj = a.to_json()

    def done(verdict, filt, cert=None, state=None):
        return StructureResult(a, verdict, filt, steps, cert, state)

    # F1
    if not is_combinatorially_valid(a):
        steps.append(Step("F1", "eliminate", _witness_invalid(a)))
        return done(ELIMINATED, "F1", {"kind": "combinatorial", "structure": sj, "detail": steps[-1].detail})
    steps.append(Step("F1", "pass", "antichain, no-cloning and no-redundancy hold"))

    # F2
    k = thresholdness(a)
    if k is not None and n == 2 * k - 1:
        status = codebook.ame_exists(n + 1)
        if status == codebook.AmeStatus.NOT_EXISTS:
            steps.append(Step("F2", "eliminate", f"{k}-threshold on {n} players needs AME({n + 1},2), which does not exist"))
            cert = {"kind": "ame_table", "structure": sj, "threshold_k": k, "ame_qubits": n + 1, "status": status.value}
            return done(ELIMINATED, "F2", cert)
        steps.append(Step("F2", "pass", f"AME({n + 1},2) exists"))
    else:
        steps.append(Step("F2", "skip", "not a k-threshold structure on 2k-1 players"))

    # F3
    lp = build_qss_lp(a)
    try:
        res = lp_feasible(lp, timeout=timeout)
    except LPTimeout:
        steps.append(Step("F3", "undecided", f"LP exceeded {timeout:g} s"))
        return done(UNDECIDED, "F3")
    if not res.feasible:
        steps.append(Step("F3", "eliminate", f"entropy LP infeasible, Farkas combination of {len(res.farkas)} rows"))
        cert = {"kind": "lp_infeasible", "structure": sj, "counts": lp.counts(), **res.to_json(lp)}
        return done(ELIMINATED, "F3", cert)
    steps.append(Step("F3", "pass", "entropy LP feasible"))
    sample = _sample_json(res)

    # F4
    if n == 7 and homogeneity(a) == 3:
        uncovered = [p for p, c in pair_coverage(a).items() if c == 0]
        r = len(a.minimal_sets)
        x2 = lemma_x2_filter(a)
        if uncovered or r < 7 or not x2:
            if uncovered:
                why = f"pair {list(uncovered[0])} lies in no minimal set"
            elif r < 7:
                why = f"only {r} minimal sets, at least 7 are needed"
            else:
                why = f"minimal sets {x2.witness[0]} and {x2.witness[1]} violate the two-shared-players condition"
            steps.append(Step("F4", "eliminate", why))
            return done(ELIMINATED, "F4", {"kind": "combinatorial", "structure": sj, "detail": why, "sample": sample})
        steps.append(Step("F4", "pass", f"all pairs covered, {r} minimal sets, two-shared-players condition holds"))
    else:
        steps.append(Step("F4", "skip", "only for 3-homogeneous structures on 7 players"))

    # F5
    try:
        pattern = forced_uniformity_pattern(a, lp, timeout=timeout)
    except LPTimeout:
        steps.append(Step("F5", "undecided", f"forced-pattern LP exceeded {timeout:g} s"))
        return done(UNDECIDED, "F5", {"kind": "lp_feasible", "structure": sj, "sample": sample})
    form = shadow_scan(pattern)
    if form is not None:
        steps.append(Step("F5", "eliminate", f"shadow sum for T={members(form.t)} is {form.to_json()['a']}*x + {form.const}, negative on the forced interval"))
        cert = {
            "kind": "shadow",
            "structure": sj,
            "pattern": pattern.to_json(),
            "t": members(form.t),
            "form": form.to_json(),
            "sample": sample,
        }
        return done(ELIMINATED, "F5", cert)
    steps.append(Step("F5", "pass", "no shadow inequality is violated by the forced pattern"))

    # F6
    for name, struct, make in _builtin_states():
        sigma = _relabeling(struct, a)
        if sigma is None:
            continue
        state = permute_qubits(build_qss_state(make()), [0, *sigma])
        report = verify_scheme(state, a)
        if report.passed:
            steps.append(Step("F6", "realize", f"{name} state relabeled by {list(sigma)} verifies on all {len(report.records)} subsets"))
            cert = {
                "kind": "realized",
                "structure": sj,
                "state": name,
                "relabeling": list(sigma),
                "max_deviation": report.max_deviation,
                "sample": sample,
            }
            return done(REALIZED, "F6", cert, name)
        steps.append(Step("F6", "skip", f"{name} state fails verification (max deviation {report.max_deviation:.3g})"))
    steps.append(Step("F6", "undecided", "survives every filter and no built-in state realizes it"))
    return done(UNDECIDED, None, {"kind": "lp_feasible", "structure": sj, "sample": sample})


FILTERS = ("F1", "F2", "F3", "F4", "F5", "F6")


@dataclass
class ClassificationReport:
    n_players: int
    homogeneous_only: bool
    full_n7: bool
    results: list[StructureResult]
    timing: dict = field(default_factory=dict)

    def ident(self, i: int) -> str:
        return f"n{self.n_players}_{i:03d}"

    @property
    def survivors(self) -> list[StructureResult]:
        return [r for r in self.results if r.verdict != ELIMINATED]

    def realized(self) -> list[StructureResult]:
        return [r for r in self.results if r.verdict == REALIZED]

    def undecided(self) -> list[StructureResult]:
        return [r for r in self.results if r.verdict == UNDECIDED]

    def counts(self) -> dict[str, int]:
        out = {f: 0 for f in FILTERS}
        out.update({REALIZED: 0, UNDECIDED: 0})
        for r in self.results:
            if r.verdict == ELIMINATED:
                out[r.filter] += 1
            else:
                out[r.verdict] += 1
        return out

    def to_json(self) -> dict:
        entries = [r.to_json(self.ident(i)) for i, r in enumerate(self.results)]
        return {
            "n_players": self.n_players,
            "homogeneous_only": self.homogeneous_only,
            "full_n7": self.full_n7,
            "enumerated": len(self.results),
            "counts": self.counts(),
            "survivors": [e["id"] for e, r in zip(entries, self.results) if r.verdict != ELIMINATED],
            "structures": entries,
        }

    def certificates(self) -> dict[str, dict]:
        return {self.ident(i): r.certificate for i, r in enumerate(self.results) if r.certificate}

    def write(self, out_dir) -> Path:
        out = Path(out_dir)
        (out / "certificates").mkdir(parents=True, exist_ok=True)
        _dump(out / "report.json", self.to_json())
        for ident, cert in self.certificates().items():
            _dump(out / "certificates" / f"{ident}.json", cert)
        _dump(out / "timing.json", self.timing)
        return out / "report.json"


def _dump(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=1, sort_keys=False) + "\n", encoding="utf-8")


def run_pipeline(structures, n: int, homogeneous_only: bool = False, full_n7: bool = False,
                 timeout: float = LP_TIMEOUT) -> ClassificationReport:
    start = time.perf_counter()
    results = []
    per = {}
    for i, a in enumerate(structures):
        t0 = time.perf_counter()
        r = classify_structure(a, timeout=timeout)
        if full_n7 and n == 7 and homogeneity(a) is None and r.verdict != ELIMINATED:
            r.verdict = UNDECIDED
            r.reasons.append(Step("scope", "undecided", "OUT OF SCOPE: non-homogeneous 7-player survivor"))
        results.append(r)
        per[f"n{n}_{i:03d}"] = round(time.perf_counter() - t0, 4)
    report = ClassificationReport(n, homogeneous_only, full_n7, results)
    report.timing = {"pipeline_s": round(time.perf_counter() - start, 4), "per_structure_s": per}
    return report


def classify(n: int, homogeneous_only: bool = False, full_n7: bool = False,
             timeout: float = LP_TIMEOUT) -> ClassificationReport:
    """Enumerate and classify every candidate structure on ``n`` players."""
    t0 = time.perf_counter()
    structures = enumerate_structures(n, homogeneous_only, allow_full_n7=full_n7)
    t1 = time.perf_counter()
    report = run_pipeline(structures, n, homogeneous_only, full_n7, timeout)
    report.timing = {"enumeration_s": round(t1 - t0, 4), **report.timing,
                     "wall_time_s": round(time.perf_counter() - t0, 4)}
    return report


def lemma_r7_audit(report_or_structures) -> bool:
    """Surviving 3-homogeneous 7-player structures have 7 lines covering each pair once."""
    if isinstance(report_or_structures, ClassificationReport):
        structures = [r.structure for r in report_or_structures.survivors]
    else:
        structures = list(report_or_structures)
    for a in structures:
        if a.n_players != 7 or homogeneity(a) != 3:
            continue
        if len(a.minimal_sets) != 7 or any(c != 1 for c in pair_coverage(a).values()):
            return False
    return True
