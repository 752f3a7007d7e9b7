"""Bell-frame factorization: magic basis, chamber moves, full splits."""

import math

import numpy as np
import pytest

from conftest import rand_local, rand_su2, rand_su4
from brute import minimal_class_j_units
from warpgate import (
    I2,
    PAULIS,
    CartanCoordinates,
    NotLocal,
    NotSpecialUnitary,
    canonical_coordinates,
    cartan_decompose,
    cartan_matrix,
    from_magic,
    grover_gate,
    is_canonical,
    kron,
    kron_factorize,
    magic_spectrum,
    phase_distance,
    project_su4,
    theta_to_alpha,
    to_magic,
    unitarity_defect,
    weyl_canonicalize,
)
from warpgate.kak import MAGIC_Q

CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def test_magic_basis_is_unitary_and_invertible():
    assert unitarity_defect(MAGIC_Q) < 1e-15
    rng = np.random.default_rng(201)
    u = rand_su4(rng)
    assert np.allclose(from_magic(to_magic(u)), u, atol=1e-13)


def test_local_gates_are_real_orthogonal_in_magic_basis():
    rng = np.random.default_rng(202)
    for _ in range(40):
        o = to_magic(rand_local(rng))
        assert np.max(np.abs(o.imag)) < 1e-12
        assert np.allclose(o.real @ o.real.T, np.eye(4), atol=1e-12)
        assert abs(np.linalg.det(o.real) - 1.0) < 1e-10


def test_algebra_split_witness():
    # one-qubit generators map to real antisymmetric matrices,
    # interaction generators to symmetric pure-imaginary ones
    for sigma in PAULIS:
        for gen in (kron(sigma, I2), kron(I2, sigma)):
            img = to_magic(0.5j * gen)
            assert np.max(np.abs(img.imag)) < 1e-12
            assert np.max(np.abs(img.real + img.real.T)) < 1e-12
    for a in PAULIS:
        for b in PAULIS:
            img = to_magic(0.5j * kron(a, b))
            assert np.max(np.abs(img.real)) < 1e-12
            assert np.max(np.abs(img.imag - img.imag.T)) < 1e-12


def test_cartan_matrix_matches_commuting_exponentials():
    rng = np.random.default_rng(203)
    for _ in range(30):
        alpha = rng.uniform(-2 * math.pi, 2 * math.pi, size=3)
        direct = np.eye(4, dtype=complex)
        for a, sigma in zip(alpha, PAULIS):
            pair = kron(sigma, sigma)
            direct = direct @ (
                math.cos(a / 4.0) * np.eye(4) + 1j * math.sin(a / 4.0) * pair
            )
        assert np.allclose(cartan_matrix(alpha), direct, atol=1e-12)


def test_cartan_matrix_is_bell_diagonal():
    diag = to_magic(cartan_matrix((0.7, -0.3, 1.1)))
    off = diag - np.diag(np.diag(diag))
    assert np.max(np.abs(off)) < 1e-12


def test_magic_spectrum_of_search_gate():
    phases = magic_spectrum(project_su4(grover_gate("10")).matrix)
    expected = (math.pi / 2, 0.0, 0.0, -math.pi / 2)
    assert np.allclose(phases, expected, atol=1e-9)
    assert abs(sum(phases)) < 1e-9


def test_theta_to_alpha_linear_map():
    c = theta_to_alpha((0.5, 0.2, -0.3, -0.4))
    assert np.allclose(c, (1.4, -0.4, 0.2), atol=1e-12)
    with pytest.raises(ValueError):
        theta_to_alpha((0.5, 0.2, -0.3, 0.0))


def test_is_canonical_cases():
    assert is_canonical((math.pi, math.pi, 0.0))
    assert is_canonical((math.pi, math.pi, math.pi))
    assert is_canonical((1.0, 0.5, -0.5))
    assert not is_canonical((0.5, 1.0, 0.0))  # unsorted
    assert not is_canonical((1.0, -0.5, 0.0))  # negative y
    assert not is_canonical((1.0, 0.5, 0.8))  # |z| above y
    assert not is_canonical((math.pi + 0.2, 0.0, 0.0))


def test_weyl_canonicalize_tracks_compensators():
    rng = np.random.default_rng(204)
    for _ in range(60):
        coords = rng.uniform(-7.0, 7.0, size=3)
        canon, pair_in, pair_out, phase = weyl_canonicalize(coords)
        assert is_canonical(canon)
        rebuilt = (
            np.exp(1j * phase)
            * pair_in.matrix()
            @ cartan_matrix(canon)
            @ pair_out.matrix()
        )
        assert phase_distance(rebuilt, cartan_matrix(coords)) < 1e-12
        assert np.allclose(rebuilt, cartan_matrix(coords), atol=1e-12)


def test_weyl_canonicalize_boundary_regression():
    # one ulp below pi with the opposite sign on y used to fall outside
    # every candidate because the 2 pi wrap overshot the chamber
    a = math.pi - 4.5e-16
    canon, *_ = weyl_canonicalize((a, -a, 0.0))
    assert is_canonical(canon)
    assert np.allclose(canon, (math.pi, math.pi, 0.0), atol=1e-12)


def test_canonical_coordinates_fixed_point():
    rng = np.random.default_rng(205)
    for _ in range(40):
        canon, *_ = weyl_canonicalize(rng.uniform(-7.0, 7.0, size=3))
        again = canonical_coordinates(cartan_matrix(canon))
        assert np.allclose(again, canon, atol=1e-9)


def test_cartan_decompose_reconstructs():
    rng = np.random.default_rng(206)
    for _ in range(150):
        u = rand_su4(rng)
        d = cartan_decompose(u)
        assert is_canonical(d.coords)
        assert phase_distance(d.reconstruct(), u) < 1e-9
        assert np.allclose(d.reconstruct(), u, atol=1e-8)
        for pair in (d.k1, d.k2):
            assert abs(np.linalg.det(pair.a) - 1.0) < 1e-10
            assert abs(np.linalg.det(pair.b) - 1.0) < 1e-10


def test_cartan_decompose_requires_special_unitary():
    with pytest.raises(NotSpecialUnitary):
        cartan_decompose(CNOT)  # det is -1


def test_known_gate_classes():
    assert np.allclose(
        canonical_coordinates(CNOT), (math.pi, 0.0, 0.0), atol=1e-9
    )
    assert np.allclose(
        canonical_coordinates(SWAP), (math.pi, math.pi, math.pi), atol=1e-9
    )
    assert np.allclose(canonical_coordinates(np.eye(4)), (0.0, 0.0, 0.0), atol=1e-9)
    assert np.allclose(
        canonical_coordinates(grover_gate("10")), (math.pi, math.pi, 0.0), atol=1e-9
    )


def test_coordinates_invariant_under_local_dressing():
    rng = np.random.default_rng(207)
    for _ in range(40):
        u = rand_su4(rng)
        base = np.asarray(canonical_coordinates(u))
        dressed = rand_local(rng) @ u @ rand_local(rng)
        assert np.max(np.abs(base - np.asarray(canonical_coordinates(dressed)))) < 1e-9


def test_kron_factorize_roundtrip_and_rejection():
    rng = np.random.default_rng(208)
    for _ in range(40):
        phase = rng.uniform(-math.pi, math.pi)
        target = np.exp(1j * phase) * rand_local(rng)
        pair = kron_factorize(target)
        assert phase_distance(pair.matrix(), target) < 1e-10
        assert np.allclose(pair.matrix(), target, atol=1e-8)
    for entangler in (CNOT, SWAP):
        with pytest.raises(NotLocal):
            kron_factorize(entangler)


def test_decomposition_agrees_with_brute_oracle():
    rng = np.random.default_rng(209)
    for _ in range(15):
        u = rand_su4(rng)
        coords = canonical_coordinates(u)
        achieved = sum(abs(c) for c in coords) / (2.0 * math.pi)
        assert minimal_class_j_units(u) <= achieved + 1e-8
