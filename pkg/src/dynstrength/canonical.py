"""Two-qubit canonical decomposition and the Schmidt-class machinery on top of it.

Every two-qubit unitary factors as

    U = exp(i phi) (A1 (x) B1) exp[i(tx XX + ty YY + tz ZZ)] (A2 (x) B2)

with one-qubit unitaries A1, B1, A2, B2 and angles in (-pi/4, pi/4].  The
algorithm conjugates U into the magic (phase-adjusted Bell) basis, where
product unitaries become real orthogonal and the interaction part becomes
diagonal with eigenvalue phases H @ (phi, tx, ty, tz) for a fixed 4x4 sign
matrix H.  Diagonalizing W^T W with a real orthogonal eigenbasis then
recovers both the angles and the local factors.

The angle triple is unique only up to Weyl-chamber symmetries (component
permutations, paired sign flips, pi/2 shifts absorbed into the locals).
``canonical_decompose`` returns the representative with
|tx| >= |ty| >= |tz|, tx, ty >= 0, all components in (-pi/4, pi/4], and
tz >= 0 whenever tx sits on the pi/4 boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import I2, PAULI_X, PAULI_Y, PAULI_Z, kron, require_unitary

__all__ = [
    "H_SIGNS",
    "MAGIC_BASIS",
    "CanonicalDecomposition",
    "canonical_form",
    "canonical_coefficients",
    "canonical_decompose",
    "schmidt_class",
    "schmidt2_normal_form",
]

# Sign pattern of sigma_k (x) sigma_k expectation values over the magic basis;
# column 0 is the identity component, columns 1..3 are XX, YY, ZZ.
H_SIGNS = np.array(
    [[1, 1, -1, 1], [1, 1, 1, -1], [1, -1, -1, -1], [1, -1, 1, 1]], dtype=float
)

MAGIC_BASIS = (
    np.array(
        [[1, 0, 0, 1j], [0, 1j, 1, 0], [0, 1j, -1, 0], [1, 0, 0, -1j]],
        dtype=complex,
    )
    / np.sqrt(2)
)

_SIGMA = (PAULI_X, PAULI_Y, PAULI_Z)
# Hermitian one-qubit unitaries whose conjugation swaps two Pauli axes
_AXIS_SWAP = {
    (0, 1): (PAULI_X + PAULI_Y) / np.sqrt(2),
    (1, 2): (PAULI_Y + PAULI_Z) / np.sqrt(2),
    (0, 2): (PAULI_X + PAULI_Z) / np.sqrt(2),
}

RECONSTRUCTION_TOL = 1e-8


@dataclass
class CanonicalDecomposition:
    theta: np.ndarray
    post_local: tuple[np.ndarray, np.ndarray]  # (A1, B1), applied after the core
    pre_local: tuple[np.ndarray, np.ndarray]  # (A2, B2), applied before the core
    global_phase: float

    def reconstruct(self) -> np.ndarray:
        a1, b1 = self.post_local
        a2, b2 = self.pre_local
        core = canonical_form(self.theta)
        return np.exp(1j * self.global_phase) * kron(a1, b1) @ core @ kron(a2, b2)


def canonical_form(theta) -> np.ndarray:
    """exp[i(tx XX + ty YY + tz ZZ)] written out in the Pauli product basis."""
    tx, ty, tz = (float(t) for t in theta)
    cx, cy, cz = np.cos(tx), np.cos(ty), np.cos(tz)
    sx, sy, sz = np.sin(tx), np.sin(ty), np.sin(tz)
    return (
        (cx * cy * cz + 1j * sx * sy * sz) * kron(I2, I2)
        + (cx * sy * sz + 1j * sx * cy * cz) * kron(PAULI_X, PAULI_X)
        + (sx * cy * sz + 1j * cx * sy * cz) * kron(PAULI_Y, PAULI_Y)
        + (sx * sy * cz + 1j * cx * cy * sz) * kron(PAULI_Z, PAULI_Z)
    )


def canonical_coefficients(theta) -> np.ndarray:
    """Magnitudes of the II, XX, YY, ZZ components of the canonical form.

    These equal the operator-Schmidt coefficients divided by 2.
    """
    tx, ty, tz = (float(t) for t in theta)
    cx, cy, cz = np.cos(tx), np.cos(ty), np.cos(tz)
    sx, sy, sz = np.sin(tx), np.sin(ty), np.sin(tz)
    return np.array(
        [
            abs(cx * cy * cz + 1j * sx * sy * sz),
            abs(cx * sy * sz + 1j * sx * cy * cz),
            abs(sx * cy * sz + 1j * cx * sy * cz),
            abs(sx * sy * cz + 1j * cx * cy * sz),
        ]
    )


def _sym_orth_eig(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Real orthogonal Q and phases mu with S = Q diag(mu) Q^T.

    S is unitary symmetric, so its real and imaginary parts are commuting
    real symmetric matrices; diagonalize the real part, then the imaginary
    part within each degenerate block.
    """
    a, b = s.real, s.imag
    w, q = np.linalg.eigh(a)
    i, n = 0, len(w)
    while i < n:
        j = i + 1
        while j < n and w[j] - w[i] < 1e-7:
            j += 1
        if j - i > 1:
            block = q[:, i:j]
            _, qb = np.linalg.eigh(block.T @ b @ block)
            q[:, i:j] = block @ qb
        i = j
    mu = np.diag(q.T @ s @ q)
    return q, mu


def _kron_factor(m: np.ndarray) -> tuple[complex, np.ndarray, np.ndarray]:
    """Split a 4x4 product unitary into g * (A (x) B) with A, B unitary."""
    r, c = np.unravel_index(np.argmax(np.abs(m)), m.shape)
    i0, k0 = divmod(r, 2)
    j0, l0 = divmod(c, 2)
    b = m[2 * i0 : 2 * i0 + 2, 2 * j0 : 2 * j0 + 2].copy()
    a = m[np.ix_([k0, 2 + k0], [l0, 2 + l0])].copy()
    a /= np.sqrt(abs(np.linalg.det(a)))
    b /= np.sqrt(abs(np.linalg.det(b)))
    g = m[r, c] / (a[i0, j0] * b[k0, l0])
    return g, a, b


class _DecompositionState:
    """Mutable (phase, A1, B1, theta, A2, B2) under Weyl-chamber moves."""

    def __init__(self, phase, a1, b1, theta, a2, b2):
        self.phase = float(phase)
        self.a1, self.b1 = np.array(a1), np.array(b1)
        self.theta = np.array(theta, dtype=float)
        self.a2, self.b2 = np.array(a2), np.array(b2)

    def shift(self, k: int, n: int) -> None:
        # exp[i(t + n pi/2) P] = (i P)^n exp(i t P) for P = sigma_k (x) sigma_k
        self.theta[k] += n * np.pi / 2
        if n % 2:
            self.a1 = self.a1 @ _SIGMA[k]
            self.b1 = self.b1 @ _SIGMA[k]
        self.phase -= n * np.pi / 2

    def negate(self, j: int, k: int) -> None:
        # conjugation by sigma_l (x) I flips the sign of the two other axes
        l = 3 - j - k
        self.theta[j] = -self.theta[j]
        self.theta[k] = -self.theta[k]
        self.a1 = self.a1 @ _SIGMA[l]
        self.a2 = _SIGMA[l] @ self.a2

    def swap(self, j: int, k: int) -> None:
        c = _AXIS_SWAP[(min(j, k), max(j, k))]
        self.theta[[j, k]] = self.theta[[k, j]]
        self.a1 = self.a1 @ c
        self.b1 = self.b1 @ c
        self.a2 = c @ self.a2
        self.b2 = c @ self.b2


def _canonicalize(state: _DecompositionState) -> _DecompositionState:
    eps = 1e-12
    quarter = np.pi / 4
    for _ in range(32):
        changed = False
        for k in range(3):
            n = int(np.ceil((state.theta[k] - quarter) / (np.pi / 2) - eps))
            if n != 0:
                state.shift(k, -n)
                changed = True
        for i, j in ((0, 1), (1, 2), (0, 1)):
            if abs(state.theta[i]) < abs(state.theta[j]) - eps:
                state.swap(i, j)
                changed = True
        tx, ty, _ = state.theta
        if tx < -eps and ty < -eps:
            state.negate(0, 1)
            changed = True
        elif tx < -eps:
            state.negate(0, 2)
            changed = True
        elif ty < -eps:
            state.negate(1, 2)
            changed = True
        # at the tx = pi/4 boundary the sign of tz is a residual symmetry
        if state.theta[0] > quarter - 1e-9 and state.theta[2] < -eps:
            state.negate(0, 2)
            changed = True
        if not changed:
            return state
    raise RuntimeError("Weyl-chamber canonicalization did not converge")


def canonical_decompose(u: np.ndarray) -> CanonicalDecomposition:
    """Canonical decomposition of a two-qubit unitary.

    Raises if the input is not unitary or if the reconstruction misses the
    input by more than 1e-8, which would indicate a branch or degeneracy
    bug rather than a recoverable condition.
    """
    u = require_unitary(u, what="canonical_decompose input")
    if u.shape != (4, 4):
        raise ValueError("canonical_decompose expects a 4x4 matrix")

    w = MAGIC_BASIS.conj().T @ u @ MAGIC_BASIS
    q, mu = _sym_orth_eig(w.T @ w)
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    psi = np.angle(mu) / 2.0
    left = w @ q @ np.diag(np.exp(-1j * psi))
    if np.linalg.det(left).real < 0:
        psi[0] += np.pi
        left = w @ q @ np.diag(np.exp(-1j * psi))

    sol = H_SIGNS.T @ psi / 4.0
    phi, theta = sol[0], sol[1:]
    g1, a1, b1 = _kron_factor(MAGIC_BASIS @ left @ MAGIC_BASIS.conj().T)
    g2, a2, b2 = _kron_factor(MAGIC_BASIS @ q.T @ MAGIC_BASIS.conj().T)
    phase = phi + np.angle(g1) + np.angle(g2)

    state = _canonicalize(_DecompositionState(phase, a1, b1, theta, a2, b2))
    result = CanonicalDecomposition(
        theta=state.theta,
        post_local=(state.a1, state.b1),
        pre_local=(state.a2, state.b2),
        global_phase=float(np.mod(state.phase + np.pi, 2 * np.pi) - np.pi),
    )
    err = np.abs(result.reconstruct() - u).max()
    if err > RECONSTRUCTION_TOL:
        raise RuntimeError(
            f"canonical decomposition failed to reconstruct input (error {err:.3e})"
        )
    return result


def schmidt_class(u: np.ndarray, rtol: float = 1e-7) -> int:
    """Schmidt number of a two-qubit unitary, computed from canonical-form
    coefficients (robust near degeneracies) and asserted to be 1, 2, or 4."""
    dec = canonical_decompose(u)
    coeff = canonical_coefficients(dec.theta)
    n = int((coeff > rtol * coeff.max()).sum())
    if n == 3:
        raise RuntimeError(
            "Schmidt class 3 detected for a two-qubit unitary; "
            "this indicates a tolerance misconfiguration"
        )
    return n


def schmidt2_normal_form(u: np.ndarray) -> float:
    """Weight p such that u is locally equivalent to sqrt(1-p) II + i sqrt(p) XX.

    Defined for Schmidt-class-2 unitaries only; p is canonicalized to [0, 1/2]
    using the p <-> 1-p symmetry.
    """
    dec = canonical_decompose(u)
    coeff = canonical_coefficients(dec.theta)
    n = int((coeff > 1e-7 * coeff.max()).sum())
    if n != 2:
        raise ValueError(f"schmidt2_normal_form requires Schmidt class 2, got {n}")
    nz = np.sort(coeff)[2:]
    p = float(min(nz[0] ** 2, nz[1] ** 2))
    return p
