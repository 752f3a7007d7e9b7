"""Dense linear algebra for one- and two-qubit gates.

All matrices are plain complex numpy arrays.  Two-qubit matrices use the
binary product basis |00>, |01>, |10>, |11| with qubit 1 as the left
tensor factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NegativeDuration, NotSpecialUnitary, NotUnitary

#: Frobenius tolerance for structural checks (unitarity, determinants).
TOL_UNITARY = 1e-10
#: Tolerance for end-to-end gate equivalence checks.
TOL_EQUIV = 1e-9

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
AXIS_NAMES = ("x", "y", "z")

for _m in (I2, I4, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.setflags(write=False)


def unitarity_defect(u) -> float:
    """Frobenius norm of U†U - I."""
    u = np.asarray(u, dtype=complex)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


def ensure_unitary(u, tol: float = TOL_UNITARY) -> np.ndarray:
    """Return ``u`` as a complex array, raising NotUnitary when it is not."""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary(f"expected a square matrix, got shape {u.shape}")
    defect = unitarity_defect(u)
    if not np.isfinite(defect) or defect > tol:
        raise NotUnitary(f"unitarity defect {defect:.3e} exceeds {tol:.1e}")
    return u


def kron(a, b) -> np.ndarray:
    """Tensor product with qubit 1 on the left."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def pauli_rotation(phase_angle: float, flip_angle: float) -> np.ndarray:
    """One-qubit rotation about the transverse axis (cos φ, sin φ, 0).

    Returns cos(θ/2) I - i sin(θ/2) (cos φ σx + sin φ σy), the hard-pulse
    propagator for a resonant pulse of rf phase φ and flip angle θ.
    """
    c = np.cos(flip_angle / 2.0)
    s = np.sin(flip_angle / 2.0)
    return np.array(
        [
            [c, -1j * s * np.exp(-1j * phase_angle)],
            [-1j * s * np.exp(1j * phase_angle), c],
        ]
    )


def coupling_evolution(tau: float, j_hz: float) -> np.ndarray:
    """Free evolution under the scalar coupling for ``tau`` seconds.

    Diagonal in the product basis: the |b1 b2> entry is
    exp(-i (2 pi J tau / 4) (-1)^(b1 xor b2)).
    """
    if not np.isfinite(tau) or tau < 0.0:
        raise NegativeDuration(f"evolution time must be >= 0, got {tau!r}")
    if not np.isfinite(j_hz) or j_hz <= 0.0:
        raise ValueError(f"coupling frequency must be positive, got {j_hz!r}")
    phi = np.pi * j_hz * tau / 2.0
    e_same = np.exp(-1j * phi)   # |00>, |11>
    e_diff = np.exp(1j * phi)    # |01>, |10>
    return np.diag([e_same, e_diff, e_diff, e_same])


@dataclass(frozen=True)
class SpecialUnitary4:
    """A 4x4 matrix with determinant 1 plus the phase removed to get there."""

    matrix: np.ndarray
    extracted_phase: float

    def __post_init__(self):
        m = ensure_unitary(self.matrix)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def original(self) -> np.ndarray:
        """The input this projection came from."""
        return np.exp(1j * self.extracted_phase) * self.matrix


def project_su4(u) -> SpecialUnitary4:
    """Strip the global phase that makes det(u) = 1.

    The extracted phase is the principal fourth-root phase of det(u),
    with argument in (-pi/4, pi/4].  Residual quarter-turn ambiguity is
    absorbed later by coordinate canonicalization.
    """
    u = ensure_unitary(u)
    if u.shape != (4, 4):
        raise NotUnitary(f"expected a 4x4 matrix, got shape {u.shape}")
    phase = np.angle(np.linalg.det(u)) / 4.0
    return SpecialUnitary4(np.exp(-1j * phase) * u, float(phase))


def ensure_special(u, tol: float = TOL_UNITARY) -> np.ndarray:
    """Like ensure_unitary but also requires det(u) = 1."""
    if isinstance(u, SpecialUnitary4):
        return u.matrix
    u = ensure_unitary(u)
    det = np.linalg.det(u)
    if abs(det - 1.0) > 1e2 * tol:
        raise NotSpecialUnitary(f"determinant {det:.12g} is not 1")
    return u


def phase_distance(u, v) -> float:
    """Global-phase-invariant distance between two 4x4 unitaries.

    min over phi of ||u - exp(i phi) v||_F, which a trace computation
    shows equals sqrt(8 - 2 |tr(u† v)|).  The norm is evaluated at the
    optimal phi = arg tr(u† v) instead of through that closed form:
    near zero the closed form cancels catastrophically (equal inputs
    would float to ~1e-8), while the residual norm stays exact.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    overlap = np.trace(u.conj().T @ v)
    rotation = np.conj(overlap) / abs(overlap) if abs(overlap) > 1e-300 else 1.0
    return float(np.linalg.norm(u - rotation * v))
