"""Stand-alone re-verification of LP and shadow certificates.

Everything here works on the JSON forms only and deliberately avoids the
LP builder and solver: the admissible constraint rows are regenerated from
the access structure with a separate, exhaustive construction, and all
arithmetic is redone with exact rationals.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from functools import lru_cache


def _mask(subset) -> int:
    m = 0
    for q in subset:
        m |= 1 << q
    return m


def _bits(m: int) -> int:
    return bin(m).count("1")


def _row_key(terms: dict[int, Fraction], sense: str, rhs: Fraction):
    return (tuple(sorted((m, c) for m, c in terms.items() if c)), sense, rhs)


def _parse_row(row: dict):
    terms: dict[int, Fraction] = {}
    for t in row["terms"]:
        m = _mask(t["subset"])
        terms[m] = terms.get(m, Fraction(0)) + Fraction(t["coef"])
    return terms, row["sense"], Fraction(row["rhs"])


def admissible_rows(n_players: int, minimal_authorized) -> frozenset:
    """Keys of every row a QSS entropy LP for this structure may contain.

    Non-equality rows are written over representatives min(X, X^c) with
    the empty and full sets dropped; purity equalities are kept verbatim.
    """
    return _admissible(n_players, tuple(sorted(_mask(s) for s in minimal_authorized)))


@lru_cache(maxsize=64)
def _admissible(n_players: int, mins: tuple[int, ...]) -> frozenset:
    nq = n_players + 1
    full = (1 << nq) - 1

    def rep(m):
        return min(m, full ^ m)

    def canon_row(coeffs, sense, rhs):
        acc: dict[int, Fraction] = {}
        for m, c in coeffs:
            m = rep(m)
            if m:
                acc[m] = acc.get(m, Fraction(0)) + c
        return _row_key(acc, sense, Fraction(rhs))

    keys = set()
    keys.add(_row_key({0: Fraction(1)}, "==", Fraction(0)))
    keys.add(_row_key({full: Fraction(1)}, "==", Fraction(0)))
    for x in range(1, full):
        y = full ^ x
        keys.add(_row_key({x: Fraction(1), y: Fraction(-1)}, "==", Fraction(0)))
        keys.add(_row_key({y: Fraction(1), x: Fraction(-1)}, "==", Fraction(0)))
    for q in range(nq):
        keys.add(canon_row([(1 << q, 1)], ">=", 0))
        keys.add(canon_row([(1 << q, 1)], "<=", 1))
    one = Fraction(1)
    for a in range(1, full + 1):
        for b in range(1, full + 1):
            if a & b:
                # strong subadditivity on overlapping pairs
                keys.add(canon_row([(a, one), (b, one), (a | b, -one), (a & b, -one)], ">=", 0))
            else:
                keys.add(canon_row([(a, one), (b, one), (a | b, -one)], ">=", 0))
                keys.add(canon_row([(a | b, one), (a, -one), (b, one)], ">=", 0))
    for share in range(2, full + 1, 2):
        auth = any(share & s == s for s in mins)
        keys.add(canon_row([(1, one), (share, one), (share | 1, -one)], "==", 2 if auth else 0))
    return frozenset(keys)


def check_farkas(rows: list[dict], multipliers: list) -> tuple[bool, str]:
    """Exact check that the multipliers combine ``rows`` into ``0 <= negative``.

    Convention: multipliers are >= 0 on "<=" rows, <= 0 on ">=" rows and free
    on "==" rows; the combination of left-hand sides must vanish and the
    combination of right-hand sides must be negative.
    """
    combo: dict[int, Fraction] = {}
    rhs = Fraction(0)
    for row, y in zip(rows, multipliers):
        y = Fraction(y)
        terms, sense, b = _parse_row(row)
        if sense == "<=" and y < 0:
            return False, f"negative multiplier on a <= row: {row}"
        if sense == ">=" and y > 0:
            return False, f"positive multiplier on a >= row: {row}"
        if sense not in ("<=", ">=", "=="):
            return False, f"unknown sense {sense!r}"
        for m, c in terms.items():
            combo[m] = combo.get(m, Fraction(0)) + y * c
        rhs += y * b
    left = {m: c for m, c in combo.items() if c}
    if left:
        return False, f"left-hand side does not cancel on {len(left)} variables"
    if rhs >= 0:
        return False, f"right-hand side combination is {rhs}, not negative"
    return True, f"0 <= {rhs}"


def check_infeasibility_certificate(cert: dict) -> tuple[bool, str]:
    """Validate an INFEASIBLE LP certificate with embedded constraint rows."""
    structure = cert["structure"]
    admissible = admissible_rows(structure["n_players"], structure["minimal_authorized"])
    rows = []
    ys = []
    for entry in cert["farkas"]:
        row = entry["constraint"]
        key = _row_key(*_parse_row(row))
        if key not in admissible:
            return False, f"row {row} is not an admissible constraint for this structure"
        rows.append(row)
        ys.append(Fraction(entry["multiplier"]))
    return check_farkas(rows, ys)


def check_sample(cert: dict) -> tuple[bool, str]:
    """Substitute a FEASIBLE sample into every admissible row, exactly."""
    structure = cert["structure"]
    n = structure["n_players"]
    full = (1 << (n + 1)) - 1
    value: dict[int, Fraction] = {}
    for entry in cert["sample"]:
        value[_mask(entry["subset"])] = Fraction(entry["value"])
    if len(value) != full + 1:
        return False, f"sample assigns {len(value)} of {full + 1} variables"
    for terms, sense, rhs in admissible_rows(n, structure["minimal_authorized"]):
        lhs = sum((c * value[m] for m, c in terms), Fraction(0))
        ok = {"<=": lhs <= rhs, ">=": lhs >= rhs, "==": lhs == rhs}[sense]
        if not ok:
            return False, f"violated: {terms} {sense} {rhs} (lhs {lhs})"
    return True, "all admissible rows hold"


def check_shadow_certificate(cert: dict) -> tuple[bool, str]:
    """Recompute s_T from the purity pattern and confirm it is negative on the box."""
    pattern = cert["pattern"]
    nq = pattern["n_qubits"]
    full = (1 << nq) - 1
    t = _mask(cert["t"])
    fixed = {_mask(r["subset"]): Fraction(r["purity"]) for r in pattern["fixed"]}
    unknown = {_mask(r["subset"]): r["symbol"] for r in pattern["unknown"]}
    coef: dict[str, Fraction] = {}
    const = Fraction(0)
    for s in range(full + 1):
        sign = -1 if _bits(s & t) % 2 else 1
        if s in (0, full):
            const += sign
            continue
        for m in (s, full ^ s):
            if m in fixed:
                const += sign * fixed[m]
                break
            if m in unknown:
                coef[unknown[m]] = coef.get(unknown[m], Fraction(0)) + sign
                break
        else:
            return False, f"pattern has no purity for {s:#x}"
    sup = const
    attained = True
    for name, c in coef.items():
        if not c:
            continue
        lo, hi, lo_open, hi_open = _parse_interval(pattern["bounds"][name])
        if c > 0:
            sup += c * hi
            attained = attained and not hi_open
        else:
            sup += c * lo
            attained = attained and not lo_open
    form = cert["form"]
    claimed_b = Fraction(form["b"])
    if claimed_b != const:
        return False, f"constant term is {const}, certificate says {claimed_b}"
    if sup < 0 or (sup == 0 and not attained):
        return True, f"supremum {sup} over the interval"
    return False, f"supremum {sup} is not negative"


def _parse_interval(text: str):
    lo_open = text[0] == "("
    hi_open = text[-1] == ")"
    lo, hi = text[1:-1].split(",")
    return Fraction(lo.strip()), Fraction(hi.strip()), lo_open, hi_open


def check_combinatorial(cert: dict) -> tuple[bool, str]:
    """Re-derive a purely combinatorial elimination from the minimal sets."""
    structure = cert["structure"]
    n = structure["n_players"]
    mins = [_mask(s) for s in structure["minimal_authorized"]]
    players = (1 << (n + 1)) - 2

    def auth(m):
        return any(m & s == s for s in mins)

    for m in range(0, players + 1, 2):
        if auth(m) == auth(players ^ m):
            return True, f"no-cloning fails at mask {m:#x}"
    covered = 0
    for s in mins:
        covered |= s
    if covered != players:
        return True, "some player lies in no minimal set"
    if n != 7 or any(_bits(s) != 3 for s in mins):
        return False, "structure is combinatorially valid"
    for i in range(1, 8):
        for j in range(i + 1, 8):
            pair = (1 << i) | (1 << j)
            if not any(s & pair == pair for s in mins):
                return True, f"pair {i},{j} is uncovered"
    if len(mins) < 7:
        return True, f"{len(mins)} lines cannot cover all 21 pairs"
    lines = set(mins)
    for a in mins:
        for b in mins:
            if a >= b or _bits(a & b) != 2:
                continue
            found = False
            for k3 in range(1, 8):
                c = (a ^ b) | (1 << k3)
                if (a | b) >> k3 & 1 or c not in lines:
                    continue
                union = a | b | c
                if all(_bits(s & union) >= 2 for s in mins):
                    found = True
            if not found:
                return True, f"lines {a:#x} and {b:#x} have no completing line"
    return False, "no combinatorial obstruction found"


# qubit counts with no AME state of local dimension 2 (a known result, not recomputed)
NO_AME_QUBITS = frozenset({4, 7, 8})


def check_ame_table(cert: dict) -> tuple[bool, str]:
    """The structure must be k-threshold on 2k-1 players and AME(2k,2) must not exist."""
    structure = cert["structure"]
    n = structure["n_players"]
    sets = {frozenset(s) for s in structure["minimal_authorized"]}
    if n % 2 == 0:
        return False, "threshold elimination needs an odd number of players"
    k = (n + 1) // 2
    want = {frozenset(c) for c in combinations(range(1, n + 1), k)}
    if sets != want:
        return False, f"structure is not the {k}-threshold structure on {n} players"
    if n + 1 not in NO_AME_QUBITS:
        return False, f"an AME state on {n + 1} qubits exists"
    return True, f"AME({n + 1},2) does not exist"


def check_certificate(cert: dict) -> tuple[bool, str]:
    """Dispatch on the certificate kind written by the classifier."""
    kind = cert.get("kind")
    if kind == "lp_infeasible":
        return check_infeasibility_certificate(cert)
    if kind == "shadow":
        ok, msg = check_shadow_certificate(cert)
        if ok and "sample" in cert:
            ok2, msg2 = check_sample(cert)
            return ok2, f"{msg}; {msg2}"
        return ok, msg
    if kind in ("lp_feasible", "realized"):
        return check_sample(cert)
    if kind == "combinatorial":
        return check_combinatorial(cert)
    if kind == "ame_table":
        return check_ame_table(cert)
    return False, f"unknown certificate kind {kind!r}"
