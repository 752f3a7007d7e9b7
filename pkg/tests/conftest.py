"""Seeded random-gate helpers shared across the test modules."""

import numpy as np

from warpgate import kron, project_su4


def haar_unitary(rng, n: int) -> np.ndarray:
    # QR of a complex Gaussian, with the R diagonal's phases folded back
    # into Q, samples the Haar measure.
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_su2(rng) -> np.ndarray:
    u = haar_unitary(rng, 2)
    return u / np.sqrt(np.linalg.det(u).astype(complex))


def rand_local(rng) -> np.ndarray:
    return kron(rand_su2(rng), rand_su2(rng))


def rand_su4(rng) -> np.ndarray:
    return project_su4(haar_unitary(rng, 4)).matrix
