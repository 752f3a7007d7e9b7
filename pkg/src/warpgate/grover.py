"""Single-iteration two-qubit Grover search gates.

For a two-qubit database one oracle call plus the inversion-about-mean
step already pivots the uniform superposition onto the marked ket, so
the whole search collapses to a single 4x4 gate per target.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

# H x H with the tensor product evaluated exactly: every entry is +-1/2,
# which keeps the assembled gate entries exact signed integers.
_HH = 0.5 * np.array(
    [
        [1.0, 1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ],
    dtype=complex,
)
_HH.setflags(write=False)


class TargetFile(NamedTuple):
    """Marked database entry |ij> for the search."""

    i: int
    j: int

    @property
    def index(self) -> int:
        return 2 * self.i + self.j

    @property
    def label(self) -> str:
        return f"{self.i}{self.j}"


def grover_gate(target) -> np.ndarray:
    """Complete search gate -(2|s><s| - I)(I - 2|t><t|)(H x H).

    |s> is the uniform superposition, |t> the marked ket.  Acting on
    |00> the gate yields the marked ket up to phase.
    """
    try:
        target = TargetFile(*(int(bit) for bit in target))
    except (TypeError, ValueError):
        raise ValueError(f"target must be two bits, got {target!r}") from None
    if target.i not in (0, 1) or target.j not in (0, 1):
        raise ValueError(f"target bits must be 0 or 1, got {target}")
    s = _HH[:, 0]
    diffusion = 2.0 * np.outer(s, s.conj()) - np.eye(4)
    oracle = np.eye(4, dtype=complex)
    oracle[target.index, target.index] = -1.0
    return -diffusion @ oracle @ _HH


def all_targets() -> tuple[TargetFile, ...]:
    return tuple(TargetFile(i, j) for i in (0, 1) for j in (0, 1))
