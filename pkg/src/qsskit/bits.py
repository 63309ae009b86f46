"""Bitmask helpers.

Qubit ``i`` of a system is bit ``i`` of a mask.  In QSS states the reference
qubit is bit 0 and player ``p`` (1-indexed) is bit ``p``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator

REFERENCE = 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def full_mask(n_qubits: int) -> int:
    return (1 << n_qubits) - 1


def player_mask(n_players: int) -> int:
    """Mask of all players ``1..n`` (reference bit excluded)."""
    return full_mask(n_players) << 1


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` including 0 and ``mask``, ascending."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def masks_of_size(universe: int, k: int) -> list[int]:
    return [m for m in submasks(universe) if popcount(m) == k]
