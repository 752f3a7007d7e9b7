"""Cartan decomposition of two-qubit gates through the Bell basis.

Any SU(4) matrix factors as k2 · h · k1 where k1, k2 are tensor products
of one-qubit gates and h = exp(i sum_j (alpha_j / 4) sigma_j x sigma_j)
commutes with everything of its own kind.  In the Bell basis the local
factors become real orthogonal and h becomes diagonal, so the whole
factorization reduces to simultaneously diagonalizing the real and
imaginary parts of one complex symmetric matrix.

Coordinates (alpha_x, alpha_y, alpha_z) are reported in a canonical
chamber so that locally equivalent gates always get the same triple.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import FactorizationFailure, NotLocal
from .su4 import (
    I2,
    PAULIS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    ensure_special,
    kron,
    phase_distance,
)

#: Bell-basis change of frame.  Columns are the Bell states
#: (|00>+|11>)/sqrt2, i(|01>+|10>)/sqrt2, (|01>-|10>)/sqrt2, i(|00>-|11>)/sqrt2.
MAGIC_Q = np.array(
    [
        [1.0, 0.0, 0.0, 1.0j],
        [0.0, 1.0j, 1.0, 0.0],
        [0.0, 1.0j, -1.0, 0.0],
        [1.0, 0.0, 0.0, -1.0j],
    ]
) / np.sqrt(2.0)
MAGIC_Q.setflags(write=False)

_TWO_PI = 2.0 * math.pi


def to_magic(u) -> np.ndarray:
    """Conjugate a 4x4 matrix into the Bell basis: Q† u Q."""
    return MAGIC_Q.conj().T @ np.asarray(u, dtype=complex) @ MAGIC_Q


def from_magic(u) -> np.ndarray:
    """Inverse of to_magic: Q u Q†."""
    return MAGIC_Q @ np.asarray(u, dtype=complex) @ MAGIC_Q.conj().T


class MagicSpectrum(NamedTuple):
    """Half-phases of the Bell-frame invariant spectrum, descending, zero sum."""

    theta0: float
    theta1: float
    theta2: float
    theta3: float


class CartanCoordinates(NamedTuple):
    """Interaction content (alpha_x, alpha_y, alpha_z) of a two-qubit gate."""

    alpha_x: float
    alpha_y: float
    alpha_z: float


def is_canonical(c, tol: float = 1e-12) -> bool:
    """True when c lies in the canonical chamber.

    alpha_x >= alpha_y >= |alpha_z|, alpha_x and alpha_y in [0, pi],
    alpha_z in (-pi, pi]; only the z entry may be negative.
    """
    ax, ay, az = c
    return bool(
        -tol <= ay <= ax <= math.pi + tol
        and -math.pi - tol <= az <= math.pi + tol
        and abs(az) <= ay + tol
    )


@dataclass(frozen=True)
class LocalGatePair:
    """One-qubit gates a (qubit 1) and b (qubit 2) with a shared phase.

    The factored 4x4 matrix is exp(i phase) (a x b); a and b are stored
    with determinant 1.
    """

    a: np.ndarray
    b: np.ndarray
    phase: float = 0.0

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def matrix(self) -> np.ndarray:
        return np.exp(1j * self.phase) * kron(self.a, self.b)


@dataclass(frozen=True)
class KakDecomposition:
    """U = exp(i global_phase) · k2 · h(coords) · k1."""

    k1: LocalGatePair
    coords: CartanCoordinates
    k2: LocalGatePair
    global_phase: float

    def reconstruct(self) -> np.ndarray:
        return (
            np.exp(1j * self.global_phase)
            * self.k2.matrix()
            @ cartan_matrix(self.coords)
            @ self.k1.matrix()
        )


def cartan_matrix(c) -> np.ndarray:
    """exp(i sum_j (alpha_j / 4) sigma_j x sigma_j), in closed form.

    The Bell states are joint eigenvectors of the sigma_j x sigma_j, so
    the exponential is a Bell-frame diagonal with phases fixed by the
    eigenvalue pattern (+,+,-,-), (-,+,-,+), (+,-,-,+).
    """
    ax, ay, az = c
    betas = np.array(
        [
            (ax - ay + az) / 4.0,
            (ax + ay - az) / 4.0,
            -(ax + ay + az) / 4.0,
            (-ax + ay + az) / 4.0,
        ]
    )
    return from_magic(np.diag(np.exp(1j * betas)))


def theta_to_alpha(spectrum) -> CartanCoordinates:
    """Interaction angles from the Bell-frame half-phases."""
    t0, t1, t2, t3 = spectrum
    total = t0 + t1 + t2 + t3
    if abs(total) > 1e-9:
        raise ValueError(f"half-phases must sum to zero, got {total:.3e}")
    return CartanCoordinates(2.0 * (t0 + t1), 2.0 * (t1 + t3), 2.0 * (t0 + t3))


# ---------------------------------------------------------------------------
# simultaneous diagonalization of the Bell-frame Gram matrix


def _cluster_edges(values: np.ndarray, tol: float):
    """End indices of runs of near-equal entries in a sorted 1-d array."""
    edges = []
    start = 0
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > tol:
            edges.append(i)
    edges.append(len(values))
    return edges


def _joint_eigenbasis(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Real orthogonal V diagonalizing two commuting real symmetric matrices.

    A random mixing weight almost always separates the joint spectrum; on
    collision (within 1e-7) fall back to diagonalizing ``a`` and then ``b``
    restricted to each degenerate eigenspace of ``a``.
    """
    rng = np.random.default_rng(0x2B5EED)
    for _ in range(8):
        lam = rng.uniform(0.3, 3.0)
        w, v = np.linalg.eigh(a + lam * b)
        if np.min(np.diff(w)) > 1e-7:
            return v
    w, v = np.linalg.eigh(a)
    start = 0
    for end in _cluster_edges(w, 1e-7):
        if end - start > 1:
            block = v[:, start:end]
            _, bv = np.linalg.eigh(block.T @ b @ block)
            v[:, start:end] = block @ bv
        start = end
    return v


def _magic_thetas_and_frame(m: np.ndarray):
    """Half-phases (descending, zero sum) and the SO(4) frame rows for m.

    m must be the complex symmetric unitary U_B^T U_B.  Returns (thetas,
    o1) with m = o1.T diag(exp(2 i thetas)) o1 and det(o1) = +1.
    """
    m = (m + m.T) / 2.0
    a, b = m.real.copy(), m.imag.copy()
    v = _joint_eigenbasis(a, b)
    check = v.T @ m @ v
    diag = np.diag(check).copy()
    if np.linalg.norm(check - np.diag(diag)) > 1e-8:
        raise FactorizationFailure("joint diagonalization residual too large")
    thetas = np.angle(diag) / 2.0          # in (-pi/2, pi/2]
    rows = np.ascontiguousarray(v.T)

    def sort_desc(th, rw):
        order = np.argsort(-th, kind="stable")
        return th[order], rw[order]

    thetas, rows = sort_desc(thetas, rows)
    # Square roots leave the total defined only mod pi; steer it to zero.
    # A boundary eigenphase (at +-pi) always surfaces as the extremal
    # half-phase, so correcting the extremes keeps the choice stable.
    n = int(round(thetas.sum() / math.pi))
    while n > 0:
        thetas[0] -= math.pi
        thetas, rows = sort_desc(thetas, rows)
        n -= 1
    while n < 0:
        thetas[-1] += math.pi
        thetas, rows = sort_desc(thetas, rows)
        n += 1
    thetas[3] = -(thetas[0] + thetas[1] + thetas[2])
    if np.linalg.det(rows) < 0:
        rows[3] = -rows[3]
    return thetas, rows


def magic_spectrum(u) -> MagicSpectrum:
    """Invariant Bell-frame half-phases of a determinant-1 gate."""
    mat = ensure_special(u)
    ub = to_magic(mat)
    thetas, _ = _magic_thetas_and_frame(ub.T @ ub)
    return MagicSpectrum(*(float(t) for t in thetas))


# ---------------------------------------------------------------------------
# tensor-product factorization of local gates


def _su2_normalize(m: np.ndarray):
    """Scale a 2x2 invertible matrix to determinant 1; returns (su2, phase)."""
    root = np.sqrt(np.linalg.det(m).astype(complex))
    return m / root, float(np.angle(root))


def kron_factorize(k, tol_local: float = 1e-8) -> LocalGatePair:
    """Split k = exp(i phase) (a x b) into determinant-1 one-qubit factors.

    The largest 2x2 block of k fixes b up to scale; the a entries are the
    Frobenius overlaps of each block with it.  Raises NotLocal when the
    reconstruction misses by more than tol_local.
    """
    k = np.asarray(k, dtype=complex)
    if k.shape != (4, 4):
        raise NotLocal(f"expected a 4x4 matrix, got shape {k.shape}")
    blocks = [[k[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] for j in (0, 1)] for i in (0, 1)]
    norms = [[np.linalg.norm(blocks[i][j]) for j in (0, 1)] for i in (0, 1)]
    i0, j0 = max(((i, j) for i in (0, 1) for j in (0, 1)), key=lambda t: norms[t[0]][t[1]])
    b_raw = blocks[i0][j0]
    scale = np.vdot(b_raw, b_raw)
    if abs(scale) < 1e-12:
        raise NotLocal("matrix has no dominant tensor block")
    a_raw = np.array(
        [[np.vdot(b_raw, blocks[i][j]) / scale for j in (0, 1)] for i in (0, 1)]
    )
    if abs(np.linalg.det(a_raw)) < 1e-12 or abs(np.linalg.det(b_raw)) < 1e-12:
        raise NotLocal("tensor factors are singular")
    a, pa = _su2_normalize(a_raw)
    b, pb = _su2_normalize(b_raw)
    overlap = np.vdot(kron(a, b), k) / 4.0
    phase = float(np.angle(overlap))
    pair = LocalGatePair(a, b, phase)
    if phase_distance(pair.matrix(), k) > tol_local:
        raise NotLocal("matrix is not a tensor product of one-qubit gates")
    return pair


def _pair_product(left: LocalGatePair, right: LocalGatePair) -> LocalGatePair:
    """(left.a x left.b)(right.a x right.b) with phases added."""
    return LocalGatePair(left.a @ right.a, left.b @ right.b, left.phase + right.phase)


# ---------------------------------------------------------------------------
# Weyl-chamber canonicalization


def _wrap_to_half_open(a: float) -> tuple[float, int]:
    """Shift a into (-pi, pi] by a multiple of 2 pi; returns (value, n).

    The quotient rounds at the boundaries (a near an odd multiple of pi
    can overshoot by one ulp), so the result is nudged back in range.
    """
    n = math.ceil((a - math.pi) / _TWO_PI)
    value = a - _TWO_PI * n
    if value > math.pi:
        value -= _TWO_PI
        n += 1
    elif value <= -math.pi:
        value += _TWO_PI
        n -= 1
    return value, n


def _build_perm_conjugators():
    """One-qubit conjugators realizing each axis permutation on sigma_j x sigma_j."""
    t_xy = (SIGMA_X + SIGMA_Y) / math.sqrt(2.0)
    t_xz = (SIGMA_X + SIGMA_Z) / math.sqrt(2.0)
    t_yz = (SIGMA_Y + SIGMA_Z) / math.sqrt(2.0)
    candidates = (I2, t_xy, t_xz, t_yz, t_xy @ t_xz, t_xy @ t_yz)
    table = {}
    for perm in itertools.permutations(range(3)):
        for cand in candidates:
            ok = all(
                min(
                    np.linalg.norm(cand @ PAULIS[j] @ cand.conj().T - s * PAULIS[perm[j]])
                    for s in (1.0, -1.0)
                )
                < 1e-12
                for j in range(3)
            )
            if ok:
                table[perm] = cand
                break
        else:  # pragma: no cover - the candidate set covers S3
            raise AssertionError("missing permutation conjugator")
    return table


_PERM_CONJUGATORS = _build_perm_conjugators()

#: Even sign patterns, realizable by conjugation with a Pauli on qubit 1.
_EVEN_SIGNS = ((1, 1, 1), (-1, -1, 1), (-1, 1, -1), (1, -1, -1))


class _MoveTracker:
    """Accumulates h(start) = exp(i phase) (La x Lb) h(cur) (Ra x Rb)."""

    def __init__(self, coords):
        self.cur = [float(c) for c in coords]
        self.phase = 0.0
        self.la, self.lb = I2.copy(), I2.copy()
        self.ra, self.rb = I2.copy(), I2.copy()

    def shift(self, axis: int, n: int):
        """cur[axis] -= 2 pi n, compensated by (i sigma x sigma)^n on the right."""
        if n == 0:
            return
        self.cur[axis] -= _TWO_PI * n
        quarter = n % 4
        if quarter in (1, 3):
            pauli = PAULIS[axis]
            self.ra = pauli @ self.ra
            self.rb = pauli @ self.rb
            self.phase += math.pi / 2.0 if quarter == 1 else -math.pi / 2.0
        elif quarter == 2:
            self.phase += math.pi

    def flip_pair(self, j: int, k: int):
        """Negate axes j and k by conjugating with the third Pauli on qubit 1."""
        pauli = PAULIS[3 - j - k]
        self.cur[j] = -self.cur[j]
        self.cur[k] = -self.cur[k]
        self.la = self.la @ pauli
        self.ra = pauli @ self.ra

    def permute(self, perm):
        """Move the value on axis j to axis perm[j] via a two-sided conjugation."""
        if tuple(perm) == (0, 1, 2):
            return
        cand = _PERM_CONJUGATORS[tuple(perm)]
        nxt = [0.0, 0.0, 0.0]
        for j in range(3):
            nxt[perm[j]] = self.cur[j]
        self.cur = nxt
        inv = cand.conj().T
        self.la = self.la @ inv
        self.lb = self.lb @ inv
        self.ra = cand @ self.ra
        self.rb = cand @ self.rb


def weyl_canonicalize(coords):
    """Reduce coordinates to the canonical chamber with explicit compensation.

    Returns (canonical, pair_in, pair_out, phase) such that

        h(coords) = exp(i phase) · pair_in.matrix() · h(canonical) · pair_out.matrix().

    The orbit moves are per-axis 2 pi shifts, simultaneous sign flips of
    two axes, and axis permutations, all of which cost only one-qubit
    gates and a global phase.  Among orbit points minimizing
    |alpha_x| + |alpha_y| + |alpha_z| the lexicographically largest is
    returned.
    """
    tracker = _MoveTracker(coords)
    for axis in range(3):
        _, n = _wrap_to_half_open(tracker.cur[axis])
        tracker.shift(axis, n)
    reduced = list(tracker.cur)

    candidates = []
    for perm in itertools.permutations(range(3)):
        permuted = [0.0, 0.0, 0.0]
        for j in range(3):
            permuted[perm[j]] = reduced[j]
        for signs in _EVEN_SIGNS:
            flipped = [s * v for s, v in zip(signs, permuted)]
            # a flip can land exactly on -pi; one more 2 pi shift fixes it
            rewrapped = tuple(v + _TWO_PI if v == -math.pi else v + 0.0 for v in flipped)
            if is_canonical(rewrapped, tol=0.0):
                candidates.append((rewrapped, perm, signs))
    if not candidates:  # pragma: no cover - the orbit always meets the chamber
        raise FactorizationFailure(f"no canonical representative for {coords}")
    best, perm, signs = max(candidates, key=lambda item: item[0])

    tracker.permute(perm)
    flips = [j for j in range(3) if signs[j] < 0]
    if flips:
        tracker.flip_pair(flips[0], flips[1])
    for axis in range(3):
        if tracker.cur[axis] == -math.pi:
            tracker.shift(axis, -1)
    tracker.cur = [v + 0.0 for v in tracker.cur]  # clear negative zeros
    if tuple(tracker.cur) != tuple(best):  # pragma: no cover - moves mirror the scan
        raise FactorizationFailure("canonicalization drifted from selected orbit point")

    a_in, p_in = _su2_normalize(tracker.la)
    b_in, q_in = _su2_normalize(tracker.lb)
    a_out, p_out = _su2_normalize(tracker.ra)
    b_out, q_out = _su2_normalize(tracker.rb)
    pair_in = LocalGatePair(a_in, b_in, p_in + q_in)
    pair_out = LocalGatePair(a_out, b_out, p_out + q_out)
    return CartanCoordinates(*tracker.cur), pair_in, pair_out, tracker.phase


# ---------------------------------------------------------------------------
# the full decomposition


def cartan_decompose(u) -> KakDecomposition:
    """Factor a determinant-1 two-qubit gate as exp(i phi) k2 h k1.

    In the Bell frame U_B = O2 D O1 with O1, O2 in SO(4) and D the
    diagonal of half-phases; conjugating back gives the one-qubit pairs
    and the interaction coordinates, which are then canonicalized with
    the compensating local gates folded into k1 and k2.
    """
    mat = ensure_special(u)
    ub = to_magic(mat)
    thetas, o1 = _magic_thetas_and_frame(ub.T @ ub)
    o2 = ub @ o1.T @ np.diag(np.exp(-1j * thetas))
    if np.abs(o2.imag).max() > 1e-6:
        raise FactorizationFailure("second orthogonal frame has a complex residue")
    o2 = o2.real

    pair1 = kron_factorize(from_magic(o1))
    pair2 = kron_factorize(from_magic(o2))
    raw = theta_to_alpha(MagicSpectrum(*thetas))
    canonical, pair_in, pair_out, move_phase = weyl_canonicalize(raw)

    k1 = LocalGatePair(pair_out.a @ pair1.a, pair_out.b @ pair1.b, 0.0)
    k2 = LocalGatePair(pair2.a @ pair_in.a, pair2.b @ pair_in.b, 0.0)
    phase = pair1.phase + pair2.phase + pair_in.phase + pair_out.phase + move_phase
    phase = math.remainder(phase, _TWO_PI)
    return KakDecomposition(k1, canonical, k2, float(phase))


def canonical_coordinates(u) -> CartanCoordinates:
    """Canonical interaction coordinates of an arbitrary 4x4 unitary."""
    from .su4 import project_su4

    return cartan_decompose(project_su4(u).matrix).coords
