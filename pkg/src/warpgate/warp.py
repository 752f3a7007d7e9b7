"""Basis-permutation gates that shorten coupling time.

Premultiplying a target gate by a classical basis permutation W changes
its interaction coordinates, and some permutations halve the time spent
under the scalar coupling.  The permutation is undone in software by
relabeling the measured basis states, never by extra pulses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import NonCanonicalCoordinates
from .kak import CartanCoordinates, cartan_decompose, is_canonical
from .su4 import project_su4

BASIS_LABELS = ("00", "01", "10", "11")

#: Idle times agree to this many seconds before two gates count as tied.
TIE_SECONDS = 1e-12


def snap_quarter(x: float, tol: float = 1e-12) -> float:
    """Round to an exact multiple of 1/4 when within tol.

    Coordinates that are multiples of pi/2 correspond to quarter-unit
    coupling times; snapping keeps those durations exact rationals.
    """
    q = round(4.0 * x) / 4.0
    return q if abs(x - q) <= tol else x


@dataclass(frozen=True)
class Duration:
    """A coupling interval in seconds plus its dimensionless J-multiple."""

    seconds: float
    j_units: float

    @classmethod
    def from_j_units(cls, j_units: float, j_hz: float) -> "Duration":
        return cls(j_units / j_hz, j_units)


def coupling_time(coords, j_hz: float) -> Duration:
    """Minimal time under the coupling for canonical coordinates.

    Each axis needs |alpha| / (2 pi J) seconds of free evolution; the
    three contributions add because the axis terms commute.
    """
    if not is_canonical(coords):
        raise NonCanonicalCoordinates(f"{tuple(coords)} is outside the canonical chamber")
    if j_hz <= 0.0:
        raise ValueError(f"coupling frequency must be positive, got {j_hz!r}")
    j_units = 0.0
    for alpha in coords:
        j_units += snap_quarter(abs(alpha) / (2.0 * np.pi))
    return Duration.from_j_units(j_units, j_hz)


@dataclass(frozen=True)
class WarpGate:
    """A classical basis permutation with its action on the basis labels."""

    name: str
    matrix: np.ndarray
    basis_map: tuple[int, int, int, int]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def maps(self) -> dict[str, str]:
        """Input label -> output label."""
        return {BASIS_LABELS[i]: BASIS_LABELS[self.basis_map[i]] for i in range(4)}


def _permutation_matrix(perm) -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    for src, dst in enumerate(perm):
        m[dst, src] = 1.0
    return m


def _gate(name, perm) -> WarpGate:
    return WarpGate(name, _permutation_matrix(perm), tuple(perm))


# The six catalog entries: identity, the two controlled-NOTs, the swap,
# and the two cyclic permutations obtained by composing the
# controlled-NOTs in either order.
_CATALOG = (
    _gate("W0", (0, 1, 2, 3)),
    _gate("W1", (0, 1, 3, 2)),   # flip qubit 2 when qubit 1 is set
    _gate("W2", (0, 3, 2, 1)),   # flip qubit 1 when qubit 2 is set
    _gate("W3", (0, 2, 1, 3)),   # exchange the qubits
    _gate("W4", (0, 2, 3, 1)),   # cycle 01 -> 10 -> 11 -> 01
    _gate("W5", (0, 3, 1, 2)),   # the inverse cycle, equal to W4 squared
)


def warp_catalog() -> tuple[WarpGate, ...]:
    """The six basis permutations searched by default."""
    return _CATALOG


def full_permutation_catalog() -> tuple[WarpGate, ...]:
    """All 24 basis permutations.

    Beyond the six catalog entries the remaining 18 differ from one of
    them only by one-qubit flips, so they never improve the coupling
    time; this exists to let that be checked numerically.
    """
    named = {g.basis_map: g.name for g in _CATALOG}
    gates = []
    for idx, perm in enumerate(itertools.permutations(range(4))):
        name = named.get(perm, f"P{idx:02d}")
        gates.append(_gate(name, perm))
    return tuple(gates)


def decode_output(gate: WarpGate, observed: str) -> str:
    """Undo a permutation in software: the label that maps to ``observed``."""
    if observed not in BASIS_LABELS:
        raise ValueError(f"unknown basis label {observed!r}")
    target = BASIS_LABELS.index(observed)
    src = gate.basis_map.index(target)
    return BASIS_LABELS[src]


@dataclass(frozen=True)
class WarpSearchRecord:
    gate: WarpGate
    coords: CartanCoordinates
    duration: Duration


@dataclass(frozen=True)
class WarpSearchResult:
    records: tuple[WarpSearchRecord, ...]
    minimizers: tuple[str, ...]
    selected: str

    def record(self, name: str) -> WarpSearchRecord:
        for rec in self.records:
            if rec.gate.name == name:
                return rec
        raise KeyError(name)


def warp_search(u, j_hz: float, catalog=None, select: str | None = None) -> WarpSearchResult:
    """Sweep a catalog of permutations and rank W·u by coupling time.

    Ties within TIE_SECONDS are all reported as minimizers; the selected
    entry is the lowest-index minimizer unless ``select`` names another
    one explicitly.
    """
    gates = warp_catalog() if catalog is None else tuple(catalog)
    u = np.asarray(u, dtype=complex)
    records = []
    for gate in gates:
        coords = cartan_decompose(project_su4(gate.matrix @ u).matrix).coords
        records.append(WarpSearchRecord(gate, coords, coupling_time(coords, j_hz)))
    best = min(rec.duration.seconds for rec in records)
    minimizers = tuple(
        rec.gate.name for rec in records if rec.duration.seconds - best <= TIE_SECONDS
    )
    selected = minimizers[0]
    if select is not None:
        if select not in minimizers:
            raise ValueError(f"{select!r} is not among the minimizers {minimizers}")
        selected = select
    return WarpSearchResult(tuple(records), minimizers, selected)
