"""QSS states from encoding pairs, and the recoverability/secrecy checks.

A share subset ``A`` is authorized when ``I(R:A) = 2`` bits and unauthorized
when ``I(R:A) = 0``; anything in between means the state is not a QSS state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from qsskit.access import (
    AccessStructure,
    is_combinatorially_valid,
    players_of,
    satisfies_no_cloning,
    satisfies_no_redundancy,
)
from qsskit.bits import REFERENCE, popcount, submasks
from qsskit.errors import (
    InvalidStructure,
    NotAQSSState,
    NotNormalized,
    NotOrthogonal,
    SizeMismatch,
)
from qsskit.qstate import NORM_TOL, PureState, subset_entropy

DEFAULT_TOL = 1e-7
AUTHORIZED = "authorized"
UNAUTHORIZED = "unauthorized"


@dataclass(frozen=True)
class EncodingPair:
    """Images of ``|0>`` and ``|1>`` under the share map."""

    n_players: int
    image0: PureState
    image1: PureState

    def __post_init__(self):
        for img in (self.image0, self.image1):
            if img.n_qubits != self.n_players:
                raise NotNormalized(f"image has {img.n_qubits} qubits, expected {self.n_players}")
            norm = float(np.vdot(img.amplitudes, img.amplitudes).real)
            if abs(norm - 1) > NORM_TOL:
                raise NotNormalized(f"image squared norm {norm!r}")
        ip = abs(np.vdot(self.image0.amplitudes, self.image1.amplitudes))
        if ip > NORM_TOL:
            raise NotOrthogonal(f"|<image0|image1>| = {ip!r}")


def build_qss_state(enc: EncodingPair) -> PureState:
    """(|0>|img0> + |1>|img1>)/sqrt(2) with the reference as qubit 0."""
    amps = np.concatenate([enc.image0.amplitudes, enc.image1.amplitudes]) / math.sqrt(2)
    return PureState(enc.n_players + 1, amps)


def entropy_profile(state: PureState) -> dict[int, float]:
    """S(A) for every nonempty proper subset, computing each complementary pair once."""
    full = state.full
    half = (state.n_qubits + 1) // 2
    out: dict[int, float] = {}
    for m in submasks(full):
        if m == 0 or m == full or m in out:
            continue
        if popcount(m) <= half:
            s = subset_entropy(state, m)
            out[m] = s
            out[full ^ m] = s
    return out


def _reference_information(state: PureState, profile: dict[int, float] | None = None) -> dict[int, float]:
    """I(R:A) in bits for each nonempty share subset A."""
    if profile is None:
        profile = entropy_profile(state)
    s_r = profile[REFERENCE]
    shares = state.full ^ REFERENCE
    out = {}
    for a in submasks(shares):
        if a == 0:
            continue
        s_ra = 0.0 if a == shares else profile[a | REFERENCE]
        out[a] = s_r + profile[a] - s_ra
    return out


@dataclass(frozen=True)
class SubsetRecord:
    subset: int
    mutual_information_bits: float
    expected: str
    passed: bool

    def to_json(self) -> dict:
        return {
            "subset": players_of(self.subset),
            "mutual_information_bits": self.mutual_information_bits,
            "expected": self.expected,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class VerificationReport:
    records: tuple[SubsetRecord, ...]
    passed: bool = field(init=False)
    max_deviation: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", all(r.passed for r in self.records))
        dev = 0.0
        for r in self.records:
            target = 2.0 if r.expected == AUTHORIZED else 0.0
            dev = max(dev, abs(r.mutual_information_bits - target))
        object.__setattr__(self, "max_deviation", dev)

    def failures(self) -> list[SubsetRecord]:
        return [r for r in self.records if not r.passed]

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "max_deviation": self.max_deviation,
            "records": [r.to_json() for r in self.records],
        }


def verify_scheme(state: PureState, a: AccessStructure, tol: float = DEFAULT_TOL) -> VerificationReport:
    if state.n_qubits != a.n_players + 1:
        raise SizeMismatch(f"state has {state.n_qubits} qubits, structure needs {a.n_players + 1}")
    if not is_combinatorially_valid(a):
        raise InvalidStructure("access structure violates no-cloning or no-redundancy")
    records = []
    for sub, mi in sorted(_reference_information(state).items()):
        auth = a.is_authorized(sub)
        target = 2.0 if auth else 0.0
        records.append(SubsetRecord(sub, mi, AUTHORIZED if auth else UNAUTHORIZED, abs(mi - target) <= tol))
    return VerificationReport(tuple(records))


def derive_access(state: PureState, tol: float = DEFAULT_TOL) -> AccessStructure:
    """Read the access structure off a QSS state, or explain why it is not one."""
    n = state.n_qubits - 1
    if n < 1:
        raise NotAQSSState("a QSS state needs at least one share", None, None)
    info = _reference_information(state)
    authorized = set()
    for sub, mi in sorted(info.items()):
        if abs(mi - 2) <= tol:
            authorized.add(sub)
        elif abs(mi) > tol:
            raise NotAQSSState(f"I(R:{players_of(sub)}) = {mi:.12g} is in neither band", players_of(sub), mi)
    shares = state.full ^ REFERENCE
    for sub in authorized:
        for sup in submasks(shares):
            if sup & sub == sub and sup not in authorized:
                raise NotAQSSState(
                    f"{players_of(sub)} is authorized but its superset {players_of(sup)} is not",
                    players_of(sup), info[sup],
                )
    if shares not in authorized:
        raise NotAQSSState("the full share set is unauthorized, violating no-cloning", players_of(shares), info[shares])
    minimal = tuple(s for s in authorized if not any(t != s and s & t == t for t in authorized))
    a = AccessStructure(n, minimal)
    if not satisfies_no_cloning(a):
        bad = next(m for m in submasks(shares) if a.is_authorized(m) == a.is_authorized(shares ^ m))
        raise NotAQSSState(f"no-cloning fails at {players_of(bad)}", players_of(bad), info.get(bad, 0.0))
    if not satisfies_no_redundancy(a):
        covered = 0
        for s in minimal:
            covered |= s
        idle = players_of(shares & ~covered)
        raise NotAQSSState(f"players {idle} appear in no minimal authorized set", idle, None)
    return a
