"""k-uniformity, AME certification and the shadow inequality.

The shadow sum of an ``N``-qubit state for ``T`` is

    s_T = sum over all S of (-1)^|S & T| Tr(rho_S^2),

with ``Tr(rho_empty^2) = Tr(rho_full^2) = 1``.  It is nonnegative for every
state, so a purity pattern whose shadow sum is forced negative cannot be
realized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from qsskit.bits import full_mask, mask_of, members, popcount, submasks
from qsskit.errors import FormatError, IncompletePattern, KOutOfRange
from qsskit.qstate import MIXED_TOL, PureState, subset_purity

ZERO = Fraction(0)
SHADOW_FLOOR = -1e-7  # numerical slack for s_T >= 0 on computed states


def _masks_of_size(n_qubits: int, k: int) -> list[int]:
    return [m for m in range(1 << n_qubits) if popcount(m) == k]


@dataclass(frozen=True)
class UniformityCheck:
    uniform: bool
    witness: tuple[int, float] | None = None  # (subset mask, purity)

    def __bool__(self):
        return self.uniform


def is_k_uniform(state: PureState, k: int, tol: float = MIXED_TOL) -> UniformityCheck:
    """Every k-qubit reduction has purity 2^-k within ``tol`` (default 1e-9)."""
    n = state.n_qubits
    if not 1 <= k <= n // 2:
        raise KOutOfRange(f"k must be in [1, {n // 2}] for {n} qubits, got {k}")
    target = 2.0 ** -k
    for m in _masks_of_size(n, k):
        p = subset_purity(state, m)
        if abs(p - target) > tol:
            return UniformityCheck(False, (m, p))
    return UniformityCheck(True)


@dataclass(frozen=True)
class UniformityCertificate:
    k_max: int
    witness: tuple[int, float] | None  # failing subset at size k_max + 1

    def to_json(self) -> dict:
        out = {"k_max": self.k_max}
        if self.witness is not None:
            out["witness"] = {"subset": members(self.witness[0]), "purity": self.witness[1]}
        return out


def max_uniformity(state: PureState, tol: float = MIXED_TOL) -> UniformityCertificate:
    n = state.n_qubits
    if n < 2:
        raise KOutOfRange("uniformity needs at least two qubits")
    for k in range(1, n // 2 + 1):
        check = is_k_uniform(state, k, tol)
        if not check:
            return UniformityCertificate(k - 1, check.witness)
    return UniformityCertificate(n // 2, None)


def is_ame(state: PureState) -> bool:
    return max_uniformity(state).k_max == state.n_qubits // 2


def purity_profile(state: PureState) -> np.ndarray:
    """Tr(rho_S^2) for every mask S, with 1 at the empty and full sets."""
    return np.array([subset_purity(state, m) for m in range(1 << state.n_qubits)])


def shadow_sum(state: PureState, t: int) -> float:
    if t & ~state.full or t < 0:
        raise ValueError(f"T mask {t:#x} exceeds {state.n_qubits} qubits")
    total = 0.0
    for s in range(1 << state.n_qubits):
        p = subset_purity(state, s)
        total += -p if popcount(s & t) % 2 else p
    return total


def shadow_sums(state: PureState) -> np.ndarray:
    """All s_T at once: the Walsh-Hadamard transform of the purity profile."""
    v = purity_profile(state)
    h = 1
    while h < v.size:
        v = v.reshape(-1, 2, h)
        v = np.stack([v[:, 0] + v[:, 1], v[:, 0] - v[:, 1]], axis=1)
        h *= 2
    return v.reshape(-1)


def shadow_holds(values, floor: float = SHADOW_FLOOR) -> bool:
    return bool(min(values) >= floor)


# ------------------------------------------------------------ symbolic purities


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi or (self.lo == self.hi and (self.lo_open or self.hi_open)):
            raise ValueError(f"empty interval {self}")

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        above = x > self.lo if self.lo_open else x >= self.lo
        below = x < self.hi if self.hi_open else x <= self.hi
        return above and below

    @classmethod
    def parse(cls, text: str) -> Interval:
        """Inverse of ``str``: ``(1/8, 1]`` and the like."""
        text = text.strip()
        if len(text) < 5 or text[0] not in "([" or text[-1] not in ")]" or "," not in text:
            raise ValueError(f"bad interval {text!r}")
        lo, hi = text[1:-1].split(",")
        return cls(Fraction(lo.strip()), Fraction(hi.strip()), text[0] == "(", text[-1] == ")")

    def __str__(self):
        return f"{'(' if self.lo_open else '['}{self.lo}, {self.hi}{')' if self.hi_open else ']'}"


@dataclass(frozen=True)
class PurityPattern:
    """Purities of the subsets of an ``n_qubits`` pure state, some of them symbolic.

    ``fixed`` maps masks to exact purities, ``unknown`` maps masks to symbol
    names, and ``bounds`` gives the interval of each symbol.  Subsets larger
    than half the system take the purity of their complement.
    """

    n_qubits: int
    fixed: dict[int, Fraction]
    unknown: dict[int, str] = field(default_factory=dict)
    bounds: dict[str, Interval] = field(default_factory=dict)

    def purity_of(self, mask: int) -> tuple[dict[str, Fraction], Fraction]:
        """Purity of ``mask`` as (symbol coefficients, constant)."""
        full = full_mask(self.n_qubits)
        if mask == 0 or mask == full:
            return {}, Fraction(1)
        for m in (mask, full ^ mask):
            if m in self.fixed:
                return {}, Fraction(self.fixed[m])
            if m in self.unknown:
                return {self.unknown[m]: Fraction(1)}, ZERO
        raise IncompletePattern(f"no purity for subset {members(mask)}")

    def check_complete(self) -> None:
        full = full_mask(self.n_qubits)
        for m in range(1, full):
            if 2 * popcount(m) <= self.n_qubits:
                self.purity_of(m)
                if m in self.fixed and m in self.unknown:
                    raise IncompletePattern(f"subset {members(m)} is both fixed and symbolic")
        for name in set(self.unknown.values()):
            if name not in self.bounds:
                raise IncompletePattern(f"symbol {name} has no interval")

    def substitute(self, name: str, value) -> PurityPattern:
        fixed = dict(self.fixed)
        unknown = {}
        for m, s in self.unknown.items():
            if s == name:
                fixed[m] = Fraction(value)
            else:
                unknown[m] = s
        bounds = {s: b for s, b in self.bounds.items() if s != name}
        return PurityPattern(self.n_qubits, fixed, unknown, bounds)

    def to_json(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "fixed": [{"subset": members(m), "purity": str(p)} for m, p in sorted(self.fixed.items())],
            "unknown": [{"subset": members(m), "symbol": s} for m, s in sorted(self.unknown.items())],
            "bounds": {s: str(b) for s, b in sorted(self.bounds.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> PurityPattern:
        try:
            n = int(data["n_qubits"])
            fixed = {mask_of(r["subset"]): Fraction(r["purity"]) for r in data.get("fixed", [])}
            unknown = {mask_of(r["subset"]): str(r["symbol"]) for r in data.get("unknown", [])}
            bounds = {s: Interval.parse(text) for s, text in data.get("bounds", {}).items()}
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad purity pattern: {exc}") from exc
        return cls(n, fixed, unknown, bounds)


def mixed_pattern(n_qubits: int, symbolic=(), bounds: Interval | None = None, symbol: str = "x") -> PurityPattern:
    """Every subset of at most half the qubits maximally mixed except ``symbolic``.

    The masks in ``symbolic`` (and their complements) share one purity
    ``symbol`` ranging over ``bounds``.
    """
    full = full_mask(n_qubits)
    sym = set(symbolic) | {full ^ m for m in symbolic}
    fixed = {}
    unknown = {}
    for m in range(1, full):
        k = popcount(m)
        if 2 * k > n_qubits:
            continue
        if m in sym:
            unknown[m] = symbol
        else:
            fixed[m] = Fraction(1, 2 ** k)
    return PurityPattern(n_qubits, fixed, unknown, {symbol: bounds} if unknown else {})


VIOLATED = "VIOLATED"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ShadowForm:
    t: int
    coeffs: dict[str, Fraction]
    const: Fraction
    verdict: str

    def to_json(self) -> dict:
        if len(self.coeffs) <= 1:
            a = str(next(iter(self.coeffs.values()), ZERO))
        else:
            a = {s: str(c) for s, c in sorted(self.coeffs.items())}
        return {"a": a, "b": str(self.const), "verdict": self.verdict}


def _supremum(coeffs: dict[str, Fraction], const: Fraction, bounds: dict[str, Interval]) -> tuple[Fraction, bool]:
    """Supremum of the affine form over the box and whether it is attained."""
    sup = const
    attained = True
    for s, c in coeffs.items():
        iv = bounds[s]
        if c > 0:
            sup += c * iv.hi
            attained &= not iv.hi_open
        elif c < 0:
            sup += c * iv.lo
            attained &= not iv.lo_open
    return sup, attained


def shadow_obstruction(pattern: PurityPattern, t: int) -> ShadowForm:
    """Exact s_T as an affine form in the pattern's symbols, with its verdict.

    VIOLATED means the form is negative at every admissible value of the
    symbols, so no state has this purity pattern.
    """
    pattern.check_complete()
    full = full_mask(pattern.n_qubits)
    if t & ~full or t < 0:
        raise ValueError(f"T mask {t:#x} exceeds {pattern.n_qubits} qubits")
    coeffs: dict[str, Fraction] = {}
    const = ZERO
    for s in submasks(full):
        sign = -1 if popcount(s & t) % 2 else 1
        sc, sv = pattern.purity_of(s)
        const += sign * sv
        for name, c in sc.items():
            coeffs[name] = coeffs.get(name, ZERO) + sign * c
    coeffs = {s: c for s, c in coeffs.items() if c}
    sup, attained = _supremum(coeffs, const, pattern.bounds)
    verdict = VIOLATED if sup < 0 or (sup == 0 and not attained) else INCONCLUSIVE
    return ShadowForm(t, coeffs, const, verdict)


def shadow_scan(pattern: PurityPattern) -> ShadowForm | None:
    """First T (ascending mask) whose shadow form is VIOLATED, if any."""
    for t in range(1 << pattern.n_qubits):
        form = shadow_obstruction(pattern, t)
        if form.verdict == VIOLATED:
            return form
    return None
