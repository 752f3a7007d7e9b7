"""Hard-pulse execution, equivalence certification, and stick-spectrum readout.

Pulse programs are executed step by step as exact unitaries: rotations
are instantaneous one-qubit exponentials and intervals are the diagonal
coupling evolution.  Readout follows the usual spin-doublet picture: a
pi/2 pulse tips the observed qubit into the transverse plane and the
partner qubit's state selects which of the two doublet lines carries
the signal, with the sign giving the observed qubit's state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kak import CartanCoordinates, canonical_coordinates
from .pulses import HamiltonianParams, Idle, PulseSequence, Rot
from .su4 import (
    I2,
    I4,
    SIGMA_X,
    coupling_evolution,
    ensure_unitary,
    kron,
    pauli_rotation,
    phase_distance,
)
from .warp import BASIS_LABELS


@dataclass(frozen=True)
class StateVector4:
    """A normalized two-qubit state in the binary basis order."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(4).copy()
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state norm is {norm!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def probability(self, label: str) -> float:
        return float(abs(self.amplitudes[BASIS_LABELS.index(label)]) ** 2)

    def dominant_label(self) -> str:
        return BASIS_LABELS[int(np.argmax(np.abs(self.amplitudes)))]


def basis_state(label: str) -> StateVector4:
    """The computational basis ket named by its two bits."""
    if label not in BASIS_LABELS:
        raise ValueError(f"unknown basis label {label!r}")
    amps = np.zeros(4, dtype=complex)
    amps[BASIS_LABELS.index(label)] = 1.0
    return StateVector4(amps)


def apply(u, psi) -> StateVector4:
    """Act with a unitary on a state, renormalizing the float residue."""
    mat = ensure_unitary(u)
    amps = np.asarray(psi.amplitudes if isinstance(psi, StateVector4) else psi, dtype=complex)
    out = mat @ amps
    return StateVector4(out / np.linalg.norm(out))


# ---------------------------------------------------------------------------
# program execution


def _rotation_unitary(rot: Rot) -> np.ndarray:
    gate = pauli_rotation(rot.phase_angle, rot.flip_angle)
    return kron(gate, I2) if rot.qubit == 1 else kron(I2, gate)


def step_unitary(step, j_hz: float) -> np.ndarray:
    """The exact unitary of a single program step."""
    if isinstance(step, Idle):
        return coupling_evolution(step.seconds, j_hz)
    u = I4
    for rot in step:
        u = _rotation_unitary(rot) @ u
    return u


def simulate_sequence(seq: PulseSequence, params: HamiltonianParams | None = None) -> np.ndarray:
    """Ordered product of the step unitaries; the first step acts first.

    By default the coupling frequency stored with the sequence is used;
    passing params executes the same program on a different spin pair.
    """
    j_hz = seq.j_hz if params is None else params.j_coupling
    u = I4
    for step in seq.steps:
        u = step_unitary(step, j_hz) @ u
    return u


# ---------------------------------------------------------------------------
# equivalence certification


@dataclass(frozen=True)
class EquivalenceReport:
    """How close two gates are, globally and as local-equivalence classes."""

    phase_distance: float
    same_local_class: bool
    coord_delta: float
    coords_u: CartanCoordinates
    coords_v: CartanCoordinates


def equivalence_report(u, v, class_tol: float = 1e-8) -> EquivalenceReport:
    """Compare two gates up to global phase and up to one-qubit dressing."""
    u = ensure_unitary(u)
    v = ensure_unitary(v)
    cu = canonical_coordinates(u)
    cv = canonical_coordinates(v)
    delta = max(abs(a - b) for a, b in zip(cu, cv))
    return EquivalenceReport(phase_distance(u, v), delta <= class_tol, delta, cu, cv)


# ---------------------------------------------------------------------------
# readout


@dataclass(frozen=True)
class ReadoutConfig:
    """Which qubit is observed and where its doublet lines sit (ppm)."""

    observed_qubit: int = 2
    partner_zero_ppm: float = 79.20
    partner_one_ppm: float = 77.49

    def __post_init__(self):
        if self.observed_qubit not in (1, 2):
            raise ValueError(f"observed qubit must be 1 or 2, got {self.observed_qubit!r}")
        if self.partner_zero_ppm == self.partner_one_ppm:
            raise ValueError("the two line positions must differ")

    @property
    def line_positions(self) -> dict[int, float]:
        """Partner-qubit bit -> position of the line it selects."""
        return {0: self.partner_zero_ppm, 1: self.partner_one_ppm}


@dataclass(frozen=True)
class SpectralLine:
    position_ppm: float
    amplitude: float


@dataclass(frozen=True)
class StickSpectrum:
    """At most one line per partner state, signed by the observed qubit."""

    lines: tuple[SpectralLine, ...]

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        if len(self.lines) > 2:
            raise ValueError("a two-spin doublet has at most two lines")
        for line in self.lines:
            if abs(line.amplitude) > 1.0 + 1e-9:
                raise ValueError(f"amplitude out of range: {line.amplitude!r}")


def predict_spectrum(psi, config: ReadoutConfig | None = None) -> StickSpectrum:
    """Stick spectrum after a pi/2 read pulse about y on the observed qubit.

    For each partner-qubit basis state the line amplitude is the real
    transverse magnetization of the observed qubit within that subspace,
    so a basis ket gives a single line whose position encodes the
    partner bit and whose sign encodes the observed bit (|0> positive).
    """
    cfg = config if config is not None else ReadoutConfig()
    state = psi if isinstance(psi, StateVector4) else StateVector4(psi)
    read = pauli_rotation(math.pi / 2.0, math.pi / 2.0)
    if cfg.observed_qubit == 2:
        tipped = kron(I2, read) @ state.amplitudes
    else:
        tipped = kron(read, I2) @ state.amplitudes
    lines = []
    for bit in (0, 1):
        projector = np.zeros((2, 2), dtype=complex)
        projector[bit, bit] = 1.0
        if cfg.observed_qubit == 2:
            observable = kron(projector, SIGMA_X)
        else:
            observable = kron(SIGMA_X, projector)
        amplitude = float(np.real(np.vdot(tipped, observable @ tipped)))
        if abs(amplitude) > 1e-12:
            lines.append(SpectralLine(cfg.line_positions[bit], amplitude))
    return StickSpectrum(tuple(lines))


def serialize_spectrum(spectrum: StickSpectrum) -> str:
    """Two columns: position in ppm and signed amplitude."""
    lines = ["# ppm amplitude"]
    for line in spectrum.lines:
        lines.append(f"{line.position_ppm:.6g} {line.amplitude:+.12g}")
    return "\n".join(lines) + "\n"
