"""Access structures over players ``1..n`` stored as bitmasks.

Players are bits ``1..n``; bit 0 is reserved for the reference qubit so the
same masks index subsystems of a QSS state directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from qsskit.bits import masks_of_size, members, player_mask, popcount, submasks
from qsskit.errors import (
    CapacityError,
    FormatError,
    NotAntichain,
    NotThreeHomogeneous,
    PreconditionNotMet,
)

MAX_PLAYERS = 12
MAX_CANONICAL_PLAYERS = 8


@dataclass(frozen=True)
class AccessStructure:
    n_players: int
    minimal_sets: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n_players <= MAX_PLAYERS:
            raise CapacityError(f"n_players must be in [1, {MAX_PLAYERS}], got {self.n_players}")
        universe = player_mask(self.n_players)
        sets = tuple(sorted(set(self.minimal_sets)))
        for s in sets:
            if s == 0:
                raise FormatError("minimal authorized sets must be nonempty")
            if s & ~universe:
                raise FormatError(f"set {players_of(s)} names players outside 1..{self.n_players}")
        for a, b in itertools.combinations(sets, 2):
            if a & b == a or a & b == b:
                raise NotAntichain(players_of(a), players_of(b))
        object.__setattr__(self, "minimal_sets", sets)

    @classmethod
    def from_players(cls, n_players: int, sets) -> AccessStructure:
        return cls(n_players, tuple(sum(1 << p for p in s) for s in sets))

    @property
    def universe(self) -> int:
        return player_mask(self.n_players)

    def is_authorized(self, mask: int) -> bool:
        return any(mask & s == s for s in self.minimal_sets)

    def as_lists(self) -> list[list[int]]:
        return [players_of(s) for s in self.minimal_sets]

    def to_json(self) -> dict:
        return {"n_players": self.n_players, "minimal_authorized": self.as_lists()}

    @classmethod
    def from_json(cls, data: dict) -> AccessStructure:
        try:
            n = int(data["n_players"])
            sets = data["minimal_authorized"]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"access file needs n_players and minimal_authorized: {exc}") from exc
        if not isinstance(sets, list) or not all(isinstance(s, list) for s in sets):
            raise FormatError("minimal_authorized must be a list of player lists")
        masks = []
        for s in sets:
            if len(set(s)) != len(s) or not all(isinstance(p, int) and 1 <= p <= n for p in s):
                raise FormatError(f"bad player list {s} for n_players={n}")
            masks.append(sum(1 << p for p in s))
        if len(set(masks)) != len(masks):
            raise FormatError("duplicate minimal authorized set")
        return cls(n, tuple(masks))


def players_of(mask: int) -> list[int]:
    return members(mask)


def monotone_closure(a: AccessStructure) -> frozenset[int]:
    """Every authorized player set (supersets of minimal sets); never contains 0."""
    return frozenset(m for m in submasks(a.universe) if a.is_authorized(m))


def _authorized_table(a: AccessStructure) -> dict[int, bool]:
    return {m: a.is_authorized(m) for m in submasks(a.universe)}


def satisfies_no_cloning(a: AccessStructure) -> bool:
    auth = _authorized_table(a)
    u = a.universe
    return all(auth[m] != auth[u ^ m] for m in auth)


def satisfies_no_redundancy(a: AccessStructure) -> bool:
    covered = 0
    for s in a.minimal_sets:
        covered |= s
    return covered == a.universe


def is_combinatorially_valid(a: AccessStructure) -> bool:
    # the antichain property is enforced at construction
    return satisfies_no_cloning(a) and satisfies_no_redundancy(a)


@dataclass(frozen=True)
class EllBound:
    ell: int
    upper: int
    holds: bool


def ell_min(a: AccessStructure) -> EllBound:
    """Smallest minimal-set size with the check ``2 <= ell <= floor((n+1)/2)``."""
    ell = min(popcount(s) for s in a.minimal_sets)
    upper = (a.n_players + 1) // 2
    return EllBound(ell, upper, 2 <= ell <= upper)


def homogeneity(a: AccessStructure) -> int | None:
    sizes = {popcount(s) for s in a.minimal_sets}
    return sizes.pop() if len(sizes) == 1 else None


def thresholdness(a: AccessStructure) -> int | None:
    k = homogeneity(a)
    if k is None:
        return None
    if set(a.minimal_sets) == set(masks_of_size(a.universe, k)):
        return k
    return None


def threshold_forcing_check(a: AccessStructure) -> bool:
    """For odd n with ell = (n+1)/2 the structure must be the (n+1)/2-threshold one."""
    n = a.n_players
    if n % 2 == 0 or ell_min(a).ell != (n + 1) // 2:
        raise PreconditionNotMet("needs odd n and ell_min = (n+1)/2")
    return thresholdness(a) == (n + 1) // 2


@dataclass(frozen=True)
class FilterResult:
    passed: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.passed


def lemma_x2_filter(a: AccessStructure) -> FilterResult:
    """Check the two-shared-players condition on a 3-homogeneous structure.

    Whenever two minimal sets ``{i,j,k1}`` and ``{i,j,k2}`` share a pair there
    must be a minimal set ``{k1,k2,k3}`` with ``k3`` outside both such that
    every minimal set meets the union of the three in at least two players.
    The first violating pair of minimal sets is returned as witness.
    """
    if homogeneity(a) != 3 or a.n_players < 5:
        raise NotThreeHomogeneous("lemma_x2_filter needs a 3-homogeneous structure with n >= 5")
    lines = a.minimal_sets
    line_set = set(lines)
    for a1, a2 in itertools.combinations(lines, 2):
        if popcount(a1 & a2) != 2:
            continue
        k12 = a1 ^ a2
        u12 = a1 | a2
        ok = False
        for k3 in members(a.universe & ~u12):
            a3 = k12 | (1 << k3)
            if a3 not in line_set:
                continue
            union = u12 | a3
            if all(popcount(b & union) >= 2 for b in lines):
                ok = True
                break
        if not ok:
            return FilterResult(False, (players_of(a1), players_of(a2)))
    return FilterResult(True)


def pair_coverage(a: AccessStructure) -> dict[tuple[int, int], int]:
    counts = {}
    for i, j in itertools.combinations(range(1, a.n_players + 1), 2):
        pair = (1 << i) | (1 << j)
        counts[(i, j)] = sum(1 for s in a.minimal_sets if s & pair == pair)
    return counts


def all_pairs_covered(a: AccessStructure) -> bool:
    return all(pair_coverage(a).values())


def permute(a: AccessStructure, sigma) -> AccessStructure:
    """Relabel players: player ``p`` becomes ``sigma[p - 1]`` (1-indexed images)."""
    out = []
    for s in a.minimal_sets:
        out.append(sum(1 << sigma[p - 1] for p in players_of(s)))
    return AccessStructure(a.n_players, tuple(out))


@lru_cache(maxsize=None)
def _perm_table(n: int) -> np.ndarray:
    """table[m, p] = image of player-mask m (bits 0..n-1) under permutation p."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    bits = (np.arange(1 << n)[:, None] >> np.arange(n)[None, :]) & 1
    return bits @ (1 << perms).T


def canonical_form(a: AccessStructure) -> AccessStructure:
    """Lexicographically least sorted mask list over all n! relabelings."""
    n = a.n_players
    if n > MAX_CANONICAL_PLAYERS:
        raise CapacityError(f"canonical_form supports n <= {MAX_CANONICAL_PLAYERS}")
    table = _perm_table(n)
    sets = np.array([s >> 1 for s in a.minimal_sets], dtype=np.int64)
    images = np.sort(table[sets].T, axis=1)
    best = images[np.lexsort(images.T[::-1])[0]]
    return AccessStructure(n, tuple(int(s) << 1 for s in best))
