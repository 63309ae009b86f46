"""Exact linear feasibility over entropy vectors of a pure QSS state.

Variables are ``S(X)`` for every subset ``X`` of the ``n+1`` qubits (mask
index, reference qubit = bit 0), in bits.  Constraints are the inequalities
valid for every quantum state plus the recoverability/secrecy equalities of
an access structure.  Every answer is exact: a rational sample point or a
Farkas certificate.

Solving strategy: the equalities are eliminated by exact Gauss-Jordan
substitution, leaving ``G z <= h`` over the free coordinates ``z``.  Both
feasibility and extrema are then solved through the LP dual, whose row count
is the (small) number of free coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from qsskit.access import AccessStructure, is_combinatorially_valid, players_of
from qsskit.bits import REFERENCE, full_mask, members, popcount, submasks
from qsskit.errors import InfeasibleLP, InvalidStructure, TooLarge
from qsskit.simplex import solve_standard

MAX_LP_PLAYERS = 7
ZERO = Fraction(0)
ONE = Fraction(1)

TAGS = ("PURITY", "CAP", "SUBADD", "ARAKI_LIEB", "SSA", "REC", "SEC")


@dataclass(frozen=True)
class Constraint:
    terms: tuple[tuple[int, Fraction], ...]
    sense: str  # "<=", ">=" or "=="
    rhs: Fraction
    tag: str

    def key(self):
        return (self.terms, self.sense, self.rhs)

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "terms": [{"subset": members(m), "coef": str(c)} for m, c in self.terms],
            "sense": self.sense,
            "rhs": str(self.rhs),
        }

    @classmethod
    def from_json(cls, data: dict) -> Constraint:
        terms = tuple(sorted((sum(1 << q for q in t["subset"]), Fraction(t["coef"])) for t in data["terms"]))
        return cls(terms, data["sense"], Fraction(data["rhs"]), data["tag"])


@dataclass
class EntropyLP:
    n_players: int
    constraints: list[Constraint]
    family: str = "elemental"
    _reduced: object = field(default=None, repr=False, compare=False)

    @property
    def n_qubits(self) -> int:
        return self.n_players + 1

    @property
    def n_variables(self) -> int:
        return 1 << self.n_qubits

    def counts(self) -> dict[str, int]:
        out = {t: 0 for t in TAGS}
        for c in self.constraints:
            out[c.tag] = out.get(c.tag, 0) + 1
        return out

    def to_json(self) -> dict:
        return {
            "n_players": self.n_players,
            "n_variables": self.n_variables,
            "family": self.family,
            "counts": self.counts(),
            "constraints": [c.to_json() for c in self.constraints],
        }


@dataclass
class FeasibilityResult:
    status: str  # "FEASIBLE" or "INFEASIBLE"
    sample: dict[int, Fraction] | None = None
    farkas: dict[int, Fraction] | None = None

    @property
    def feasible(self) -> bool:
        return self.status == "FEASIBLE"

    def to_json(self, lp: EntropyLP | None = None) -> dict:
        out = {"status": self.status}
        if self.sample is not None:
            out["sample"] = [{"subset": members(m), "value": str(v)} for m, v in sorted(self.sample.items())]
        if self.farkas is not None:
            rows = []
            for idx, y in sorted(self.farkas.items()):
                row = {"index": idx, "multiplier": str(y)}
                if lp is not None:
                    row["constraint"] = lp.constraints[idx].to_json()
                rows.append(row)
            out["farkas"] = rows
        return out


class _Builder:
    def __init__(self, n_qubits: int):
        self.full = full_mask(n_qubits)
        self.rows: list[Constraint] = []
        self.seen: set = set()

    def canon(self, m: int) -> int:
        return min(m, self.full ^ m)

    def add(self, coeffs, sense, rhs, tag, canonical=True):
        acc: dict[int, Fraction] = {}
        for m, c in coeffs:
            if canonical:
                m = self.canon(m)
                if m == 0:
                    continue  # S(empty) = S(full) = 0
            acc[m] = acc.get(m, ZERO) + Fraction(c)
        terms = tuple(sorted((m, c) for m, c in acc.items() if c))
        rhs = Fraction(rhs)
        if not terms and {"<=": 0 <= rhs, ">=": 0 >= rhs, "==": rhs == 0}[sense]:
            return
        row = Constraint(terms, sense, rhs, tag)
        if row.key() in self.seen:
            return
        self.seen.add(row.key())
        self.rows.append(row)


def build_qss_lp(a: AccessStructure, family: str = "elemental") -> EntropyLP:
    """Entropy LP for a hypothetical pure QSS state realising ``a``.

    ``family="full"`` instantiates subadditivity and Araki-Lieb over all
    disjoint pairs and strong subadditivity over all overlapping pairs.
    ``family="elemental"`` uses only the elemental strong-subadditivity
    instances ``S(iK)+S(jK) >= S(ijK)+S(K)``, which generate all of those
    rows once ``S(X) = S(X^c)`` is imposed; the feasible region is identical
    and the LP is an order of magnitude smaller.
    """
    n = a.n_players
    if n > MAX_LP_PLAYERS:
        raise TooLarge(f"entropy LP supports n <= {MAX_LP_PLAYERS} players")
    if not is_combinatorially_valid(a):
        raise InvalidStructure("access structure violates no-cloning or no-redundancy")
    if family not in ("elemental", "full"):
        raise ValueError(f"unknown constraint family {family!r}")
    nq = n + 1
    full = full_mask(nq)
    b = _Builder(nq)

    b.add([(0, 1)], "==", 0, "PURITY", canonical=False)
    for m in range(1, full + 1):
        c = full ^ m
        if m < c:
            b.add([(m, 1), (c, -1)], "==", 0, "PURITY", canonical=False)
    b.add([(full, 1)], "==", 0, "PURITY", canonical=False)

    for q in range(nq):
        b.add([(1 << q, 1)], ">=", 0, "CAP")
        b.add([(1 << q, 1)], "<=", 1, "CAP")

    if family == "elemental":
        for i, j in itertools.combinations(range(nq), 2):
            rest = full & ~((1 << i) | (1 << j))
            for k in submasks(rest):
                tag = "SUBADD" if k == 0 else "SSA"
                b.add([(k | 1 << i, 1), (k | 1 << j, 1), (k | 1 << i | 1 << j, -1), (k, -1)], ">=", 0, tag)
    else:
        nonempty = range(1, full + 1)
        for x in nonempty:
            for y in nonempty:
                if y <= x:
                    continue
                if x & y == 0:
                    b.add([(x, 1), (y, 1), (x | y, -1)], ">=", 0, "SUBADD")
                    b.add([(x | y, 1), (x, -1), (y, 1)], ">=", 0, "ARAKI_LIEB")
                    b.add([(x | y, 1), (y, -1), (x, 1)], ">=", 0, "ARAKI_LIEB")
                elif x & y != x and x & y != y:
                    b.add([(x, 1), (y, 1), (x | y, -1), (x & y, -1)], ">=", 0, "SSA")

    for share in range(2, full + 1, 2):
        if a.is_authorized(share):
            b.add([(REFERENCE, 1), (share, 1), (share | REFERENCE, -1)], "==", 2, "REC")
        else:
            b.add([(REFERENCE, 1), (share, 1), (share | REFERENCE, -1)], "==", 0, "SEC")
    return EntropyLP(n, b.rows, family)


# ---------------------------------------------------------------- reduction


@dataclass
class _Reduced:
    free: list[int]  # free variable masks, ascending
    pivots: dict[int, tuple[dict[int, Fraction], Fraction, dict[int, Fraction]]]
    rows: list[tuple[dict[int, Fraction], Fraction, int, Fraction]]  # (g, h, constraint idx, sign)
    conflict: tuple | None  # immediate infeasibility certificate


def _reduce(lp: EntropyLP) -> _Reduced:
    if lp._reduced is not None:
        return lp._reduced
    # pivot var -> (coeffs over free vars, rhs, origin combination of equalities)
    # meaning  x_v + sum coeffs[u] x_u = rhs
    pivots: dict[int, tuple[dict, Fraction, dict]] = {}
    occurs: dict[int, set[int]] = {}
    conflict = None

    def substitute(coeffs, rhs, origin):
        for v in [v for v in coeffs if v in pivots]:
            f = coeffs.pop(v)
            pc, pr, po = pivots[v]
            for u, c in pc.items():
                nv = coeffs.get(u, ZERO) - f * c
                if nv:
                    coeffs[u] = nv
                else:
                    coeffs.pop(u, None)
            rhs -= f * pr
            for k, c in po.items():
                nv = origin.get(k, ZERO) - f * c
                if nv:
                    origin[k] = nv
                else:
                    origin.pop(k, None)
        return rhs

    for idx, con in enumerate(lp.constraints):
        if con.sense != "==":
            continue
        coeffs = {m: c for m, c in con.terms}
        origin = {idx: ONE}
        rhs = substitute(coeffs, con.rhs, origin)
        if not coeffs:
            if rhs != 0 and conflict is None:
                # sum origin * (a.x - b) = 0 - (-rhs): scale so that sum y b < 0
                scale = -ONE if rhs > 0 else ONE
                conflict = ({k: scale * c for k, c in origin.items()}, None)
            continue
        v = max(coeffs)
        f = coeffs.pop(v)
        coeffs = {u: c / f for u, c in coeffs.items()}
        rhs = rhs / f
        origin = {k: c / f for k, c in origin.items()}
        # Gauss-Jordan: eliminate v from existing pivot rows
        for w in list(occurs.get(v, ())):
            pc, pr, po = pivots[w]
            g = pc.pop(v)
            for u, c in coeffs.items():
                nv = pc.get(u, ZERO) - g * c
                if nv:
                    pc[u] = nv
                else:
                    pc.pop(u, None)
                    occurs.get(u, set()).discard(w)
                if nv:
                    occurs.setdefault(u, set()).add(w)
            pr -= g * rhs
            for k, c in origin.items():
                nv = po.get(k, ZERO) - g * c
                if nv:
                    po[k] = nv
                else:
                    po.pop(k, None)
            pivots[w] = (pc, pr, po)
        occurs.pop(v, None)
        pivots[v] = (coeffs, rhs, origin)
        for u in coeffs:
            occurs.setdefault(u, set()).add(v)

    free = sorted(m for m in range(lp.n_variables) if m not in pivots)
    rows = []
    seen = set()
    for idx, con in enumerate(lp.constraints):
        if con.sense == "==":
            continue
        sign = ONE if con.sense == "<=" else -ONE
        g: dict[int, Fraction] = {}
        h = sign * con.rhs
        for m, c in con.terms:
            c = sign * c
            if m in pivots:
                pc, pr, _ = pivots[m]
                h -= c * pr
                for u, cu in pc.items():
                    g[u] = g.get(u, ZERO) - c * cu
            else:
                g[m] = g.get(m, ZERO) + c
        g = {u: c for u, c in g.items() if c}
        if not g:
            if h < 0 and conflict is None:
                conflict = (None, (idx, sign))
            continue
        key = (tuple(sorted(g.items())), h)
        if key in seen:
            continue
        seen.add(key)
        rows.append((g, h, idx, sign))
    lp._reduced = _Reduced(free, pivots, rows, conflict)
    return lp._reduced


def _expand(red: _Reduced, z: dict[int, Fraction]) -> dict[int, Fraction]:
    x = {}
    for m in red.free:
        x[m] = z.get(m, ZERO)
    for v, (pc, pr, _) in red.pivots.items():
        x[v] = pr - sum((c * x[u] for u, c in pc.items()), ZERO)
    return x


def _farkas_from_inequalities(lp: EntropyLP, red: _Reduced, ineq: dict[int, Fraction]) -> dict[int, Fraction]:
    """Complete inequality multipliers with equality multipliers so sum y a = 0."""
    beta: dict[int, Fraction] = {}
    for idx, y in ineq.items():
        for m, c in lp.constraints[idx].terms:
            if m in red.pivots:
                beta[m] = beta.get(m, ZERO) + y * c
    out = dict(ineq)
    for v, bv in beta.items():
        if not bv:
            continue
        for k, o in red.pivots[v][2].items():
            out[k] = out.get(k, ZERO) - bv * o
    return {k: v for k, v in sorted(out.items()) if v}


def lp_feasible(lp: EntropyLP, timeout: float | None = None) -> FeasibilityResult:
    red = _reduce(lp)
    if red.conflict is not None:
        eq_combo, ineq_row = red.conflict
        if eq_combo is not None:
            return FeasibilityResult("INFEASIBLE", farkas=dict(sorted(eq_combo.items())))
        idx, sign = ineq_row
        return FeasibilityResult("INFEASIBLE", farkas=_farkas_from_inequalities(lp, red, {idx: sign}))
    if not red.rows:
        return FeasibilityResult("FEASIBLE", sample=_expand(red, {}))
    pos = {m: i for i, m in enumerate(red.free)}
    d = len(red.free)
    # dual of  max t  s.t.  g.z + t <= h,  t <= 1
    columns = []
    cost = []
    for g, h, _, _ in red.rows:
        col = {pos[u]: c for u, c in g.items()}
        col[d] = ONE
        columns.append(col)
        cost.append(h)
    columns.append({d: ONE})
    cost.append(ONE)
    res = solve_standard(columns, [ZERO] * d + [ONE], cost, timeout=timeout)
    if res.status != "optimal":
        raise RuntimeError(f"dual feasibility LP ended {res.status}")
    if res.value < 0:
        ineq = {}
        for r, y in enumerate(res.y[:-1]):
            if y:
                _, _, idx, sign = red.rows[r]
                ineq[idx] = ineq.get(idx, ZERO) + sign * y
        return FeasibilityResult("INFEASIBLE", farkas=_farkas_from_inequalities(lp, red, ineq))
    z = {m: res.duals[pos[m]] for m in red.free}
    return FeasibilityResult("FEASIBLE", sample=_expand(red, z))


@dataclass
class Extremum:
    value: Fraction
    point: dict[int, Fraction]


def _objective_dict(lp: EntropyLP, objective) -> dict[int, Fraction]:
    if isinstance(objective, int):
        return {objective: ONE}
    if isinstance(objective, dict):
        return {m: Fraction(c) for m, c in objective.items()}
    return {m: Fraction(c) for m, c in objective}


def lp_extremum_certified(lp: EntropyLP, objective, direction: str = "max",
                          timeout: float | None = None) -> Extremum:
    """Exact optimum of a linear form of entropies over the LP polytope."""
    if direction not in ("min", "max"):
        raise ValueError("direction must be 'min' or 'max'")
    red = _reduce(lp)
    if red.conflict is not None:
        raise InfeasibleLP("LP is infeasible")
    obj = _objective_dict(lp, objective)
    sgn = ONE if direction == "max" else -ONE
    c_free: dict[int, Fraction] = {}
    const = ZERO
    for m, c in obj.items():
        c = sgn * c
        if m in red.pivots:
            pc, pr, _ = red.pivots[m]
            const += c * pr
            for u, cu in pc.items():
                c_free[u] = c_free.get(u, ZERO) - c * cu
        else:
            c_free[m] = c_free.get(m, ZERO) + c
    pos = {m: i for i, m in enumerate(red.free)}
    d = len(red.free)
    b = [ZERO] * d
    for u, c in c_free.items():
        b[pos[u]] += c
    if not any(b):
        point = lp_feasible(lp, timeout=timeout)
        if not point.feasible:
            raise InfeasibleLP("LP is infeasible")
        return Extremum(sgn * const, point.sample)
    columns = [{pos[u]: c for u, c in g.items()} for g, _, _, _ in red.rows]
    cost = [h for _, h, _, _ in red.rows]
    res = solve_standard(columns, b, cost, timeout=timeout)
    if res.status == "unbounded":
        raise InfeasibleLP("LP is infeasible")
    if res.status != "optimal":
        raise RuntimeError("objective is unbounded over the LP")
    z = {m: res.duals[pos[m]] for m in red.free}
    return Extremum(sgn * (res.value + const), _expand(red, z))


def lp_extremum(lp: EntropyLP, objective, direction: str = "max", timeout: float | None = None) -> Fraction:
    return lp_extremum_certified(lp, objective, direction, timeout).value


def entropy_range(lp: EntropyLP, objective, timeout: float | None = None) -> tuple[Fraction, Fraction]:
    return (lp_extremum(lp, objective, "min", timeout), lp_extremum(lp, objective, "max", timeout))


def reduced_expression(lp: EntropyLP, mask: int) -> tuple[dict[int, Fraction], Fraction]:
    """``S(mask)`` as ``const + sum coeffs[u] S(u)`` over free coordinates."""
    red = _reduce(lp)
    if mask in red.pivots:
        pc, pr, _ = red.pivots[mask]
        return {u: -c for u, c in pc.items()}, pr
    return {mask: ONE}, ZERO


# ---------------------------------------------------------- derived facts


def forced_uniformity_pattern(a: AccessStructure, lp: EntropyLP | None = None, timeout: float | None = None):
    """Purity pattern of the ``n+1``-qubit state forced by the entropy LP.

    ``S(X) = |X|`` forced gives purity ``2^-|X|``; otherwise the purity is a
    symbol in ``(2^-|X|, 1]`` when the LP caps ``S(X)`` below ``|X|`` and in
    ``[2^-|X|, 1]`` when it merely fails to force the maximum.
    """
    from qsskit.uniformity import Interval, PurityPattern

    lp = lp or build_qss_lp(a)
    if not lp_feasible(lp, timeout=timeout).feasible:
        raise InfeasibleLP("no entropy vector satisfies the QSS constraints")
    nq = lp.n_qubits
    full = full_mask(nq)
    fixed: dict[int, Fraction] = {}
    pending: list[tuple[int, bool]] = []
    for m in range(1, full):
        k = popcount(m)
        if k > nq // 2 or (2 * k == nq and m > full ^ m):
            continue
        coeffs, const = reduced_expression(lp, lp_canon(lp, m))
        if not coeffs:
            if const == k:
                fixed[m] = Fraction(1, 2 ** k)
            else:
                pending.append((m, True))
            continue
        if lp_extremum(lp, m, "min", timeout) == k:
            fixed[m] = Fraction(1, 2 ** k)
        else:
            pending.append((m, lp_extremum(lp, m, "max", timeout) < k))
    unknown: dict[int, str] = {}
    bounds: dict[str, Interval] = {}
    names = ["x"] if len(pending) == 1 else [f"x{i + 1}" for i in range(len(pending))]
    for (m, strict), name in zip(pending, names):
        k = popcount(m)
        unknown[m] = name
        bounds[name] = Interval(Fraction(1, 2 ** k), ONE, lo_open=strict, hi_open=False)
    for m in list(fixed):
        if 2 * popcount(m) == nq:
            fixed[full ^ m] = fixed[m]
    for m in list(unknown):
        if 2 * popcount(m) == nq:
            unknown[full ^ m] = unknown[m]
    return PurityPattern(nq, fixed, unknown, bounds)


def lp_canon(lp: EntropyLP, m: int) -> int:
    full = full_mask(lp.n_qubits)
    return min(m, full ^ m)


@dataclass
class AuditRecord:
    lemma: str
    instance: dict
    minimum: Fraction
    maximum: Fraction | None
    holds: bool

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "instance": self.instance,
            "min": str(self.minimum),
            "max": None if self.maximum is None else str(self.maximum),
            "holds": self.holds,
        }


def lemma_two_bound(lp: EntropyLP, a_mask: int, b_mask: int) -> Fraction:
    """min of S(A)+S(B)-S(A|B)-S(A&B) over the LP."""
    obj: dict[int, Fraction] = {}
    for m, c in ((a_mask, 1), (b_mask, 1), (a_mask | b_mask, -1), (a_mask & b_mask, -1)):
        if m == 0:
            continue
        obj[m] = obj.get(m, ZERO) + c
    return lp_extremum(lp, obj, "min")


def derived_lemma_audit(a: AccessStructure, lp: EntropyLP | None = None,
                        lemmas=("single", "entropy", "two")) -> list[AuditRecord]:
    """Check that the LP alone forces the standard QSS entropy lemmas on ``a``.

    single:  A, B unauthorized with A|B authorized  =>  S(A), S(B) >= 1.
    entropy: B unauthorized, B+{i} authorized, X <= B  =>  S(iX) = S(i)+S(X).
    two:     A, B authorized, A&B unauthorized  =>  SSA gap >= 2.
    """
    lp = lp or build_qss_lp(a)
    if not lp_feasible(lp).feasible:
        raise InfeasibleLP("audit needs a feasible LP")
    u = a.universe
    shares = [m for m in range(2, u + 1, 2)]
    auth = {m: a.is_authorized(m) for m in shares}
    records: list[AuditRecord] = []
    if "single" in lemmas:
        targets = set()
        for x, y in itertools.combinations_with_replacement(shares, 2):
            if not auth[x] and not auth[y] and auth[x | y]:
                targets.update((x, y))
        for x in sorted(targets):
            lo = lp_extremum(lp, x, "min")
            records.append(AuditRecord("single", {"A": players_of(x)}, lo, None, lo >= 1))
    if "entropy" in lemmas:
        done = set()
        for bset in shares:
            if auth[bset]:
                continue
            for i in members(u & ~bset):
                if not auth[bset | 1 << i]:
                    continue
                for x in submasks(bset):
                    if x == 0 or (i, x) in done:
                        continue
                    done.add((i, x))
                    obj = {x | 1 << i: ONE, 1 << i: -ONE, x: -ONE}
                    lo, hi = entropy_range(lp, obj)
                    records.append(AuditRecord("entropy", {"i": i, "X": players_of(x)}, lo, hi, lo == hi == 0))
    if "two" in lemmas:
        for x, y in itertools.combinations(shares, 2):
            if auth[x] and auth[y] and not (x & y and auth[x & y]):
                lo = lemma_two_bound(lp, x, y)
                records.append(AuditRecord("two", {"A": players_of(x), "B": players_of(y)}, lo, None, lo >= 2))
    return records
