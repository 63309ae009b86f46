"""Dense pure states of a few qubits and their reduced density matrices.

Basis index ``i`` of a state of ``n`` qubits is the big-endian bit string of
qubit labels, qubit 0 being the most significant position.  Subsets of
qubits are bitmasks with bit ``q`` standing for qubit ``q``.  Entropies are
in bits.
"""

from __future__ import annotations

import math

import numpy as np

from qsskit.bits import full_mask, members, popcount
from qsskit.errors import (
    CapacityError,
    EmptySubset,
    FormatError,
    FullSubset,
    NotHermitian,
    NotNormalized,
    OverlappingSubsets,
)

MAX_QUBITS = 12
NORM_TOL = 1e-9
HERMITIAN_TOL = 1e-9
MIXED_TOL = 1e-9
EIGEN_FLOOR = 1e-12

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


class PureState:
    """Normalized amplitude vector over ``2**n_qubits`` basis states."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes):
        if not 1 <= n_qubits <= MAX_QUBITS:
            raise CapacityError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != 1 << n_qubits:
            raise FormatError(f"expected {1 << n_qubits} amplitudes, got {amps.shape[0]}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1) > NORM_TOL:
            raise NotNormalized(f"squared norm is {norm!r}")
        amps.setflags(write=False)
        self.n_qubits = n_qubits
        self.amplitudes = amps

    def __repr__(self):
        return f"PureState(n_qubits={self.n_qubits})"

    @property
    def full(self) -> int:
        return full_mask(self.n_qubits)

    def to_json(self, floor: float = 1e-15) -> dict:
        rows = []
        for i, amp in enumerate(self.amplitudes):
            if abs(amp) > floor:
                rows.append({"basis": format(i, f"0{self.n_qubits}b"), "re": float(amp.real), "im": float(amp.imag)})
        return {"n_qubits": self.n_qubits, "amplitudes": rows}

    @classmethod
    def from_json(cls, data: dict) -> PureState:
        try:
            n = int(data["n_qubits"])
            rows = data["amplitudes"]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"state file needs n_qubits and amplitudes: {exc}") from exc
        if not 1 <= n <= MAX_QUBITS:
            raise CapacityError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n}")
        amps = np.zeros(1 << n, dtype=complex)
        seen = set()
        for row in rows:
            try:
                label = row["basis"]
                re = float(row.get("re", 0.0))
                im = float(row.get("im", 0.0))
            except (KeyError, TypeError, ValueError, AttributeError) as exc:
                raise FormatError(f"bad amplitude entry {row!r}") from exc
            if not isinstance(label, str) or len(label) != n or set(label) - {"0", "1"}:
                raise FormatError(f"basis label {label!r} is not a {n}-bit string")
            if label in seen:
                raise FormatError(f"duplicate basis string {label}")
            seen.add(label)
            amps[int(label, 2)] = complex(re, im)
        return cls(n, amps)


def overlap(a: PureState, b: PureState) -> float:
    """``|<a|b>|``; equal to 1 exactly when the states agree up to global phase."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("states act on different numbers of qubits")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))


def same_state(a: PureState, b: PureState, tol: float = 1e-8) -> bool:
    return abs(overlap(a, b) - 1) <= tol


class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix of power-of-two size."""

    __slots__ = ("entries",)

    def __init__(self, entries, check_psd: bool = True):
        m = np.asarray(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise FormatError("density matrix must be square")
        dim = m.shape[0]
        if dim < 1 or dim & (dim - 1):
            raise FormatError(f"dimension {dim} is not a power of two")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise NotHermitian("matrix is not Hermitian")
        if abs(np.trace(m).real - 1) > NORM_TOL:
            raise NotNormalized(f"trace is {np.trace(m).real!r}")
        if check_psd and np.linalg.eigvalsh(m).min() < -NORM_TOL:
            raise FormatError("matrix has a negative eigenvalue")
        m.setflags(write=False)
        self.entries = m

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def density_of(state: PureState) -> DensityMatrix:
    psi = state.amplitudes
    return DensityMatrix(np.outer(psi, psi.conj()), check_psd=False)


def _check_subset(state: PureState, mask: int) -> None:
    if mask & ~state.full or mask < 0:
        raise ValueError(f"subset mask {mask:#x} exceeds {state.n_qubits} qubits")
    if mask == 0:
        raise EmptySubset("subset is empty")
    if mask == state.full:
        raise FullSubset("subset is the whole system")


def _split(state: PureState, keep: int) -> np.ndarray:
    """Amplitudes as a matrix with rows indexed by ``keep`` qubits (ascending)."""
    n = state.n_qubits
    kept = members(keep)
    rest = [q for q in range(n) if not keep >> q & 1]
    psi = state.amplitudes.reshape([2] * n).transpose(kept + rest)
    return psi.reshape(1 << len(kept), -1)


def reduced_density(state: PureState, keep: int) -> DensityMatrix:
    """Partial trace onto the qubits of ``keep``, kept qubits in ascending order."""
    _check_subset(state, keep)
    m = _split(state, keep)
    return DensityMatrix(m @ m.conj().T, check_psd=False)


def _entries(dm) -> np.ndarray:
    return dm.entries if isinstance(dm, DensityMatrix) else np.asarray(dm, dtype=complex)


def jacobi_eigenvalues(matrix, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot entry, then applies
    the real symmetric Schur rotation that annihilates it.
    """
    a = np.array(matrix, dtype=complex)
    if np.max(np.abs(a - a.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise NotHermitian("matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                ph = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1 + tau * tau))
                c = 1 / math.sqrt(1 + t * t)
                s = t * c
                sph = s * ph.conjugate()
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - sph * colq
                a[:, q] = s * colp + c * ph.conjugate() * colq
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - s * ph * rowq
                a[q, :] = s * rowp + c * ph * rowq
                a[p, q] = a[q, p] = 0
    return np.diag(a).real.copy()


def eigenvalues_hermitian(dm) -> list[float]:
    """Real eigenvalues, descending, clamped into [0, 1] when within 1e-9 of it."""
    vals = jacobi_eigenvalues(_entries(dm))
    out = []
    for v in sorted(vals, reverse=True):
        v = float(v)
        if -NORM_TOL <= v < 0:
            v = 0.0
        elif 1 < v <= 1 + NORM_TOL:
            v = 1.0
        out.append(v)
    return out


def von_neumann_entropy(dm) -> float:
    s = 0.0
    for lam in eigenvalues_hermitian(dm):
        if lam > EIGEN_FLOOR:
            s -= lam * math.log2(lam)
    return max(s, 0.0)


def purity(dm) -> float:
    m = _entries(dm)
    return float(np.sum(np.abs(m) ** 2))


def is_maximally_mixed(dm) -> bool:
    return abs(purity(dm) - 1 / _entries(dm).shape[0]) <= MIXED_TOL


def _smaller_side(state: PureState, mask: int) -> np.ndarray:
    """Gram matrix on the smaller of ``mask`` and its complement (same spectrum)."""
    comp = state.full ^ mask
    keep = mask if popcount(mask) <= popcount(comp) else comp
    m = _split(state, keep)
    return m @ m.conj().T


def subset_entropy(state: PureState, mask: int) -> float:
    _check_subset(state, mask)
    return von_neumann_entropy(_smaller_side(state, mask))


def subset_purity(state: PureState, mask: int) -> float:
    """Tr(rho_A^2), with the conventions Tr(rho_empty^2) = Tr(rho_full^2) = 1."""
    if mask == 0 or mask == state.full:
        return 1.0
    _check_subset(state, mask)
    return purity(_smaller_side(state, mask))


def mutual_information(state: PureState, a: int, b: int) -> float:
    """I(A:B) in bits; A and B may together cover the whole (pure) system."""
    if a & b:
        raise OverlappingSubsets("subsets overlap")
    _check_subset(state, a)
    _check_subset(state, b)
    joint = 0.0 if a | b == state.full else subset_entropy(state, a | b)
    return subset_entropy(state, a) + subset_entropy(state, b) - joint


def permute_qubits(state: PureState, perm) -> PureState:
    """Relabel qubits: old qubit ``q`` becomes qubit ``perm[q]``."""
    n = state.n_qubits
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm!r} is not a permutation of range({n})")
    inv = [0] * n
    for q, p in enumerate(perm):
        inv[p] = q
    psi = state.amplitudes.reshape([2] * n).transpose(inv)
    return PureState(n, psi.reshape(-1))
