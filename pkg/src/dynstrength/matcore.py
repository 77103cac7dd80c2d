"""Dense complex linear algebra, standard gates, random ensembles, and entropy primitives.

Matrices are plain ``numpy.ndarray`` objects with dtype complex128, stored
row-major.  Everything here is a pure function of its arguments; random
ensembles take an explicit seed and never touch global RNG state.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import schur

__all__ = [
    "ATOL_UNITARY",
    "RELATIVE_RANK_TOL",
    "Partition",
    "PureState",
    "DensityMatrix",
    "GateSpec",
    "I2",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "PAULIS",
    "kron",
    "dagger",
    "is_unitary",
    "require_unitary",
    "partial_trace",
    "svd",
    "eig_unitary",
    "shannon_entropy",
    "von_neumann_entropy",
    "haar_unitary",
    "haar_state",
    "gate",
    "parse_gate_spec",
    "default_partition",
    "matrix_to_json",
    "matrix_from_json",
    "save_matrix",
    "load_matrix",
]

# Singular values below RELATIVE_RANK_TOL * s_max count as zero: six orders
# below the O(1) coefficients of interest, far above double-precision noise.
RELATIVE_RANK_TOL = 1e-8
ATOL_UNITARY = 1e-8

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True)
class Partition:
    """Bipartite split of a Hilbert space into factors of dimension dA and dB."""

    dA: int
    dB: int

    def __post_init__(self):
        if self.dA < 1 or self.dB < 1:
            raise ValueError("partition dimensions must be positive")

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    def check(self, m: np.ndarray) -> None:
        if m.shape != (self.dim, self.dim):
            raise ValueError(
                f"matrix shape {m.shape} does not match partition {self.dA}x{self.dB}"
            )


@dataclass
class PureState:
    """Normalized state vector over an ordered list of subsystems."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != math.prod(self.dims):
            raise ValueError("amplitude count does not match subsystem dimensions")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator over subsystems."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        self.matrix = np.asarray(self.matrix, dtype=complex)
        d = math.prod(self.dims)
        if self.matrix.shape != (d, d):
            raise ValueError("density matrix shape does not match dims")
        if np.abs(self.matrix - self.matrix.conj().T).max() > 1e-10:
            raise ValueError("density matrix not Hermitian")
        if abs(np.trace(self.matrix).real - 1.0) > 1e-10:
            raise ValueError("density matrix trace is not 1")
        if np.linalg.eigvalsh(self.matrix).min() < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")


_GATE_NAMES = ("cnot", "swap", "toffoli", "up", "qft", "haar", "file")


@dataclass(frozen=True)
class GateSpec:
    """Named gate with parameters, parsed from strings like ``up:0.3`` or ``haar:4,7``."""

    name: str
    params: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.name not in _GATE_NAMES:
            raise ValueError(f"unknown gate name {self.name!r}; known: {_GATE_NAMES}")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker (tensor) product."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def is_unitary(m: np.ndarray, atol: float = ATOL_UNITARY) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return np.abs(m.conj().T @ m - np.eye(m.shape[0])).max() <= atol


def require_unitary(m: np.ndarray, atol: float = ATOL_UNITARY, what: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if not is_unitary(m, atol):
        raise ValueError(f"{what} is not unitary within {atol}")
    return m


def partial_trace(rho: DensityMatrix, keep: tuple[int, ...] | list[int]) -> DensityMatrix:
    """Trace out all subsystems not listed in ``keep``."""
    keep = tuple(sorted(set(int(k) for k in keep)))
    n = len(rho.dims)
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValueError(f"invalid subsystem indices {keep} for {n} subsystems")
    if len(keep) == n:
        raise ValueError("keep must be a strict subset of subsystems")
    dims = rho.dims
    t = rho.matrix.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # contract each traced row index with its column partner, highest first so
    # the remaining axis numbers stay valid
    for i in sorted(traced, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + (t.ndim // 2))
    d_keep = math.prod(dims[k] for k in keep)
    return DensityMatrix(tuple(dims[k] for k in keep), t.reshape(d_keep, d_keep))


def svd(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular value decomposition m = U diag(s) Vh with s sorted descending.

    Convergence failures surface as LinAlgError; they signal numerical
    pathology and are never swallowed.
    """
    u, s, vh = np.linalg.svd(np.asarray(m, dtype=complex))
    return u, s, vh


def eig_unitary(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (unit modulus) and orthonormal eigenvectors of a unitary.

    Uses the complex Schur form, which is diagonal for normal matrices and
    yields orthonormal eigenvectors even inside degenerate eigenspaces.
    Results are ordered by eigenvalue phase in (-pi, pi].
    """
    u = require_unitary(u)
    t, z = schur(u, output="complex")
    lam = np.diag(t).copy()
    # fold phases into (-pi, pi]: angle() returns [-pi, pi], remap -pi -> pi
    phases = np.angle(lam)
    phases[phases <= -np.pi + 1e-15] = np.pi
    order = np.argsort(phases, kind="stable")
    lam = lam[order]
    vecs = z[:, order]
    lam = lam / np.abs(lam)
    return lam, vecs


def shannon_entropy(p: np.ndarray) -> float:
    """Shannon entropy in bits of a probability vector, with 0 log 0 = 0.

    Entries may carry numerical noise: values above -1e-12 are clamped to
    zero and the vector is renormalized before evaluating.
    """
    p = np.asarray(p, dtype=float)
    if p.min() < -1e-12:
        raise ValueError(f"negative probability {p.min():.3e} beyond tolerance")
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total}, not 1")
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits of a density matrix's eigenvalue spectrum."""
    ev = np.linalg.eigvalsh(rho.matrix)
    ev = np.clip(ev, 0.0, None)
    ev = ev / ev.sum()
    nz = ev[ev > 0]
    return float(-(nz * np.log2(nz)).sum())


def haar_unitary(d: int, seed) -> np.ndarray:
    """Haar-distributed d x d unitary, deterministic for a fixed seed.

    Ginibre matrix followed by QR, with the phases of R's diagonal folded
    into Q so the distribution is exactly Haar.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    diag = np.diag(r)
    return q * (diag / np.abs(diag)).conj()


def haar_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random unit vector in C^d."""
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def _qft_matrix(n_qubits: int) -> np.ndarray:
    n = 2**n_qubits
    idx = np.arange(n)
    return np.exp(2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)


def _toffoli_matrix(target: int) -> np.ndarray:
    """Doubly-controlled NOT on three qubits; the non-target qubits control."""
    if target not in (0, 1, 2):
        raise ValueError("toffoli target must be a qubit index in {0, 1, 2}")
    m = np.zeros((8, 8), dtype=complex)
    controls = [q for q in range(3) if q != target]
    for basis in range(8):
        bits = [(basis >> (2 - q)) & 1 for q in range(3)]
        if all(bits[c] for c in controls):
            bits[target] ^= 1
        out = sum(b << (2 - q) for q, b in enumerate(bits))
        m[out, basis] = 1.0
    return m


_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def gate(spec: GateSpec) -> np.ndarray:
    """Build the unitary named by a GateSpec."""
    name, params = spec.name, spec.params
    if name == "cnot":
        return _CNOT.copy()
    if name == "swap":
        return _SWAP.copy()
    if name == "toffoli":
        target = int(params[0]) if params else 2
        return _toffoli_matrix(target)
    if name == "up":
        if not params:
            raise ValueError("up gate requires a parameter p")
        p = float(params[0])
        if not 0.0 <= p <= 1.0:
            raise ValueError("up parameter p must lie in [0, 1]")
        xx = kron(PAULI_X, PAULI_X)
        zz = kron(PAULI_Z, PAULI_Z)
        eye = np.eye(4, dtype=complex)
        return (np.sqrt(1 - p) * eye + 1j * np.sqrt(p) * xx) @ (
            np.sqrt(1 - p) * eye + 1j * np.sqrt(p) * zz
        )
    if name == "qft":
        if not params:
            raise ValueError("qft gate requires a qubit count")
        l = int(params[0])
        if l < 1:
            raise ValueError("qft requires at least one qubit")
        return _qft_matrix(l)
    if name == "haar":
        if len(params) < 1:
            raise ValueError("haar gate requires dimension (and optional seed)")
        d = int(params[0])
        seed = int(params[1]) if len(params) > 1 else 0
        return haar_unitary(d, seed)
    if name == "file":
        if not params:
            raise ValueError("file gate requires a path")
        return load_matrix(str(params[0]))
    raise ValueError(f"unknown gate {name!r}")


def parse_gate_spec(text: str) -> GateSpec:
    """Parse ``name`` or ``name:param1,param2`` (e.g. "up:0.3", "haar:4,12345")."""
    text = text.strip()
    if ":" in text:
        name, _, rest = text.partition(":")
        name = name.strip()
        if name == "file":
            params = (rest,)
        else:
            params = tuple(_parse_number(tok) for tok in rest.split(",") if tok.strip())
    else:
        name, params = text, ()
    return GateSpec(name, params)


def _parse_number(tok: str):
    tok = tok.strip()
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def default_partition(dim: int) -> Partition:
    """Most balanced split dA x dB = dim with dA <= dB."""
    best = None
    for dA in range(1, int(math.isqrt(dim)) + 1):
        if dim % dA == 0:
            best = Partition(dA, dim // dA)
    if best is None:
        raise ValueError(f"cannot split dimension {dim}")
    return best


# --- matrix file format: {"rows": N, "cols": M, "entries": [[re, im], ...]} ---


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "entries": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise ValueError("entry count does not equal rows*cols")
    flat = np.array([complex(re, im) for re, im in entries])
    if not np.isfinite(flat.view(float)).all():
        raise ValueError("matrix entries must be finite")
    return flat.reshape(rows, cols)


def save_matrix(path: str, m: np.ndarray) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json(m), fh)


def load_matrix(path: str) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))
