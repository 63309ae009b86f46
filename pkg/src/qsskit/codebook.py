"""Built-in exact data: the five-qubit and Steane codes with their structures and the AME table."""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from itertools import combinations

import numpy as np

from qsskit.access import AccessStructure
from qsskit.errors import BadParams
from qsskit.qssverify import EncodingPair
from qsskit.qstate import PureState


class AmeStatus(str, Enum):
    EXISTS = "EXISTS"
    NOT_EXISTS = "NOT_EXISTS"


# qubit AME(n, 2) existence, n = number of qubits
AME_TABLE = {
    2: AmeStatus.EXISTS,
    3: AmeStatus.EXISTS,
    4: AmeStatus.NOT_EXISTS,
    5: AmeStatus.EXISTS,
    6: AmeStatus.EXISTS,
    7: AmeStatus.NOT_EXISTS,
    8: AmeStatus.NOT_EXISTS,
}


def ame_exists(n_qubits: int) -> AmeStatus | None:
    return AME_TABLE.get(n_qubits)


# (sign, basis label); every amplitude is sign * 1/4
FIVE_QUBIT_ZERO = (
    (+1, "00000"), (+1, "10010"), (+1, "01001"), (+1, "10100"),
    (+1, "01010"), (-1, "11011"), (-1, "00110"), (-1, "11000"),
    (-1, "11101"), (-1, "00011"), (-1, "11110"), (-1, "01111"),
    (-1, "10001"), (-1, "01100"), (-1, "10111"), (+1, "00101"),
)
FIVE_QUBIT_ONE = (
    (+1, "11111"), (+1, "01101"), (+1, "10110"), (+1, "01011"),
    (+1, "10101"), (-1, "00100"), (-1, "11001"), (-1, "00111"),
    (-1, "00010"), (-1, "11100"), (-1, "00001"), (-1, "10000"),
    (-1, "01110"), (-1, "10011"), (-1, "01000"), (+1, "11010"),
)
FIVE_QUBIT_SCALE = Fraction(1, 4)

# every amplitude is +1/(2*sqrt(2)); these are the two halves of the 8-qubit
# QSS state whose minimal authorized sets are exactly FANO_LINES
STEANE_ZERO = (
    "0000000", "0001111", "0110011", "0111100",
    "1010101", "1011010", "1100110", "1101001",
)
STEANE_ONE = (
    "0010110", "0011001", "0100101", "0101010",
    "1000011", "1001100", "1110000", "1111111",
)

# the same code written with a different ordering of the seven qubits;
# STEANE_RELABEL[i] is the position in these strings of qubit i above
STEANE_ALT_ZERO = (
    "0000000", "1000111", "0101011", "0011110",
    "1101100", "1011001", "0110101", "1110010",
)
STEANE_ALT_ONE = (
    "1111111", "0111000", "1010100", "1100001",
    "0010011", "0100110", "1001010", "0001101",
)
STEANE_RELABEL = (0, 1, 6, 2, 4, 3, 5)

FANO_LINES = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))


def _state(n: int, terms) -> PureState:
    amps = np.zeros(2 ** n, dtype=complex)
    for coef, label in terms:
        amps[int(label, 2)] += coef
    return PureState(n, amps)


def five_qubit_encoding() -> EncodingPair:
    s = float(FIVE_QUBIT_SCALE)
    return EncodingPair(
        5,
        _state(5, [(sign * s, lab) for sign, lab in FIVE_QUBIT_ZERO]),
        _state(5, [(sign * s, lab) for sign, lab in FIVE_QUBIT_ONE]),
    )


def steane_encoding() -> EncodingPair:
    s = 1 / (2 * math.sqrt(2))
    return EncodingPair(
        7,
        _state(7, [(s, lab) for lab in STEANE_ZERO]),
        _state(7, [(s, lab) for lab in STEANE_ONE]),
    )


def fano_structure() -> AccessStructure:
    return AccessStructure.from_players(7, FANO_LINES)


def threshold_structure(n: int, k: int) -> AccessStructure:
    if not 1 <= k <= n:
        raise BadParams(f"threshold needs 1 <= k <= n, got n={n}, k={k}")
    return AccessStructure.from_players(n, combinations(range(1, n + 1), k))


def gamma5_structure() -> AccessStructure:
    """The non-homogeneous 5-player candidate with a single pair {1,2}."""
    return AccessStructure.from_players(
        5, [(1, 2), (1, 3, 4), (1, 3, 5), (1, 4, 5), (2, 3, 4), (2, 3, 5), (2, 4, 5)]
    )


def builtin(name: str) -> dict[str, dict]:
    """JSON documents for a built-in name, keyed by suggested file name.

    ``five-qubit`` and ``steane`` give the QSS state and its access
    structure; ``fano`` and ``threshold:<n>:<k>`` give a structure only.
    """
    from qsskit.qssverify import build_qss_state

    if name == "five-qubit":
        return {
            "five_qubit_qss.json": build_qss_state(five_qubit_encoding()).to_json(),
            "threshold_5_3.json": threshold_structure(5, 3).to_json(),
        }
    if name == "steane":
        return {
            "steane_qss.json": build_qss_state(steane_encoding()).to_json(),
            "fano.json": fano_structure().to_json(),
        }
    if name == "fano":
        return {"fano.json": fano_structure().to_json()}
    parts = name.split(":")
    if len(parts) == 3 and parts[0] == "threshold":
        try:
            n, k = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise BadParams(f"bad threshold name {name!r}") from exc
        return {f"threshold_{n}_{k}.json": threshold_structure(n, k).to_json()}
    raise BadParams(f"unknown built-in {name!r}")
