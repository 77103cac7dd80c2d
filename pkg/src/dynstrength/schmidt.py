"""Operator-Schmidt decomposition and the strengths it induces.

Any operator Q on a bipartite space factors as Q = sum_l s_l A_l (x) B_l
with s_l >= 0 and {A_l}, {B_l} orthonormal in the Hilbert-Schmidt inner
product.  The coefficients are the singular values of the reshuffled matrix

    R[(j,k), (j',k')] = Q[(j,j'), (k,k')]

where j, k index the first factor and j', k' the second.  Worked 4x4
example (dA = dB = 2): row index of Q is 2j + j', column is 2k + k'; the
reshuffle sends entry Q[2j+j', 2k+k'] to R[2j+k, 2j'+k'], so for
Q = |0><0| (x) M the first row-block of R holds M flattened row-major and
the SVD returns the product factors exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import (
    RELATIVE_RANK_TOL,
    Partition,
    is_unitary,
    kron,
    shannon_entropy,
    svd,
)

__all__ = [
    "SchmidtDecomposition",
    "reshuffle",
    "operator_schmidt",
    "schmidt_coefficients",
    "schmidt_number",
    "k_har",
    "k_sch",
    "linear_entropy",
    "operator_concurrence",
    "qft_schmidt_reference",
]


@dataclass
class SchmidtDecomposition:
    """Coefficients and HS-orthonormal operator bases for a bipartite cut."""

    partition: Partition
    coefficients: np.ndarray
    left_ops: list[np.ndarray]
    right_ops: list[np.ndarray]

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((self.partition.dim, self.partition.dim), dtype=complex)
        for s, a, b in zip(self.coefficients, self.left_ops, self.right_ops):
            out += s * kron(a, b)
        return out


def reshuffle(q: np.ndarray, part: Partition) -> np.ndarray:
    """Rearrange a (dA dB) x (dA dB) matrix so products A (x) B become rank-1."""
    part.check(q)
    dA, dB = part.dA, part.dB
    t = np.asarray(q, dtype=complex).reshape(dA, dB, dA, dB)
    return t.transpose(0, 2, 1, 3).reshape(dA * dA, dB * dB)


def operator_schmidt(q: np.ndarray, part: Partition) -> SchmidtDecomposition:
    """Full operator-Schmidt decomposition via SVD of the reshuffled matrix."""
    u, s, vh = svd(reshuffle(q, part))
    dA, dB = part.dA, part.dB
    left = [u[:, l].reshape(dA, dA) for l in range(len(s))]
    right = [vh[l, :].reshape(dB, dB) for l in range(len(s))]
    return SchmidtDecomposition(part, s, left, right)


def schmidt_coefficients(q: np.ndarray, part: Partition) -> np.ndarray:
    """Schmidt coefficients only (descending), skipping the basis reshape."""
    return np.linalg.svd(reshuffle(q, part), compute_uv=False)


def schmidt_number(q: np.ndarray, part: Partition, rtol: float = RELATIVE_RANK_TOL) -> int:
    """Count of Schmidt coefficients above rtol * s_max."""
    s = schmidt_coefficients(q, part)
    if s[0] == 0.0:
        return 0
    return int((s > rtol * s[0]).sum())


def k_har(q: np.ndarray, part: Partition, rtol: float = RELATIVE_RANK_TOL) -> float:
    """Hartley strength: log2 of the Schmidt number."""
    n = schmidt_number(q, part, rtol)
    if n == 0:
        raise ValueError("Hartley strength undefined for the zero operator")
    return float(np.log2(n))


def k_sch(q: np.ndarray, part: Partition) -> float:
    """Schmidt strength: Shannon entropy of the normalized squared coefficients."""
    s = schmidt_coefficients(q, part)
    total = (s**2).sum()
    if total <= 0.0:
        raise ValueError("Schmidt strength undefined for the zero operator")
    return shannon_entropy(s**2 / total)


def linear_entropy(u: np.ndarray, part: Partition) -> float:
    """Operator linear entropy 1 - sum_l s_l^4 / (dA dB)^2 of a unitary."""
    if not is_unitary(u):
        raise ValueError("linear_entropy requires a unitary input")
    s = schmidt_coefficients(u, part)
    return float(1.0 - (s**4).sum() / (part.dim**2))


def operator_concurrence(u: np.ndarray, part: Partition) -> float:
    """Concurrence 2 s1 s2 / (dA dB) of a Schmidt-number-2 unitary."""
    s = schmidt_coefficients(u, part)
    n = int((s > RELATIVE_RANK_TOL * s[0]).sum()) if s[0] > 0 else 0
    if n != 2:
        raise ValueError(f"operator concurrence requires Schmidt number 2, got {n}")
    return float(2.0 * s[0] * s[1] / part.dim)


def qft_schmidt_reference(m: int, n: int) -> tuple[int, float]:
    """Closed-form Schmidt spectrum of the Fourier transform on m + n qubits.

    For the cut m:n with m <= n the spectrum is 2^(2m) equal coefficients
    sqrt(2^(n-m)).  The m > n case is not validated here and is rejected.
    """
    if m < 1 or n < 1:
        raise ValueError("qubit counts must be positive")
    if m > n:
        raise ValueError("closed form only validated for m <= n")
    if m + n > 12:
        raise ValueError("m + n above supported size")
    return 2 ** (2 * m), float(np.sqrt(2 ** (n - m)))
