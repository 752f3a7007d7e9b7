"""Pulse programs: synthesis, fragments, the compiler, text round trips."""

import math

import numpy as np
import pytest

from conftest import rand_su2, rand_su4
from warpgate import (
    PAULIS,
    HamiltonianParams,
    Idle,
    OutOfRangeAlpha,
    PulseSequence,
    Rot,
    cartan_decompose,
    compile_sequence,
    conjugate_coupling,
    emit_table,
    euler_xyx,
    grover_gate,
    inplane_pair,
    kron,
    parse_sequence,
    pauli_rotation,
    phase_distance,
    serialize_sequence,
    simulate_sequence,
    warp_catalog,
)
from warpgate.pulses import format_angle

J = 215.5
PARAMS = HamiltonianParams()


def product_of(rots):
    # rotations in list order are left-to-right matrix factors
    m = np.eye(2, dtype=complex)
    for r in rots:
        m = m @ pauli_rotation(r.phase_angle, r.flip_angle)
    return m


def dist2(u, v):
    overlap = np.trace(u.conj().T @ v)
    rot = np.conj(overlap) / abs(overlap) if abs(overlap) > 1e-300 else 1.0
    return float(np.linalg.norm(u - rot * v))


def test_step_validation():
    with pytest.raises(ValueError):
        Rot(3, 0.0, 1.0)
    with pytest.raises(ValueError):
        Rot(1, 0.0, 2.0 * math.pi)
    with pytest.raises(ValueError):
        Idle(0.0, 0.0)
    with pytest.raises(ValueError):
        PulseSequence(((Rot(1, 0.0, 1.0), Rot(1, 0.1, 1.0)),), J)
    with pytest.raises(ValueError):
        HamiltonianParams(j_coupling=0.0)


def test_sequence_accounting():
    seq = PulseSequence(
        (
            (Rot(1, 0.0, 1.0), Rot(2, 0.0, 1.0)),
            Idle.from_j_units(0.5, J),
            (Rot(2, 1.0, 0.5),),
        ),
        J,
    )
    assert seq.pulse_count == 3
    assert len(seq.idles) == 1
    assert seq.coupling_time.j_units == 0.5
    assert seq.coupling_time.seconds == 0.5 / J
    assert len(list(seq.rotations())) == 3


def test_euler_xyx_reproduces_random_gates():
    rng = np.random.default_rng(401)
    for _ in range(200):
        u = rand_su2(rng)
        rots = euler_xyx(u)
        assert len(rots) <= 3
        assert all(r.phase_angle in (0.0, math.pi / 2) for r in rots)
        assert dist2(product_of(rots), u) < 1e-10


def test_euler_xyx_degenerate_cases():
    assert euler_xyx(np.eye(2)) == []
    assert euler_xyx(-np.eye(2)) == []
    # a pure y rotation collapses to its middle factor
    single = euler_xyx(pauli_rotation(math.pi / 2, 1.1))
    assert len(single) == 1 and abs(single[0].flip_angle - 1.1) < 1e-12
    # a pure x rotation collapses to a single outer factor
    outer = euler_xyx(pauli_rotation(0.0, 1.1))
    assert len(outer) == 1 and outer[0].phase_angle == 0.0
    assert dist2(product_of(outer), pauli_rotation(0.0, 1.1)) < 1e-12


def test_inplane_pair_reproduces_random_gates():
    rng = np.random.default_rng(402)
    for _ in range(300):
        u = rand_su2(rng)
        rots = inplane_pair(u)
        assert len(rots) <= 2
        assert dist2(product_of(rots), u) < 1e-10


def test_inplane_pair_special_families():
    assert inplane_pair(np.eye(2)) == []
    assert inplane_pair(-1j * PAULIS[0]) == [Rot(1, 0.0, math.pi)]
    # one in-plane rotation comes back as a single pulse
    single = inplane_pair(pauli_rotation(2.2, -0.9))
    assert len(single) == 1
    # a diagonal gate needs two pi flips
    diag = np.diag([np.exp(0.7j), np.exp(-0.7j)])
    rots = inplane_pair(diag)
    assert [abs(r.flip_angle) for r in rots] == [math.pi, math.pi]
    assert dist2(product_of(rots), diag) < 1e-12


def test_conjugate_coupling_realizes_axis_fragments():
    # reference built from the commuting closed form, not the compiler
    for axis_index, axis in enumerate("xyz"):
        sigma = PAULIS[axis_index]
        pair = kron(sigma, sigma)
        for alpha in (math.pi, -math.pi, 1.3, -0.7, math.pi / 2):
            target = math.cos(alpha / 4.0) * np.eye(4) + 1j * math.sin(
                alpha / 4.0
            ) * pair
            seq = conjugate_coupling(axis, alpha, J)
            assert phase_distance(simulate_sequence(seq), target) < 1e-12
            assert seq.coupling_time.j_units == abs(alpha) / (2.0 * math.pi) or (
                seq.coupling_time.j_units == 0.25 and abs(alpha) == math.pi / 2
            )


def test_conjugate_coupling_duration_is_exact_for_quarters():
    assert conjugate_coupling("x", math.pi, J).coupling_time.j_units == 0.5
    assert conjugate_coupling("z", -math.pi / 2, J).coupling_time.j_units == 0.25


def test_conjugate_coupling_rejects_bad_input():
    with pytest.raises(OutOfRangeAlpha):
        conjugate_coupling("x", 0.0, J)
    with pytest.raises(OutOfRangeAlpha):
        conjugate_coupling("x", 3.5, J)
    with pytest.raises(ValueError):
        conjugate_coupling("q", 1.0, J)


def test_negative_z_fragment_needs_no_pulses():
    seq = conjugate_coupling("z", -math.pi, J)
    assert seq.pulse_count == 0
    assert len(seq.idles) == 1


def test_compile_search_gate_fixtures():
    u10 = grover_gate("10")
    w4 = next(g for g in warp_catalog() if g.name == "W4").matrix
    seq_u = compile_sequence(cartan_decompose(u10), PARAMS)
    seq_w = compile_sequence(cartan_decompose(w4 @ u10), PARAMS)
    assert phase_distance(simulate_sequence(seq_u), u10) < 1e-9
    assert phase_distance(simulate_sequence(seq_w), w4 @ u10) < 1e-9
    assert [i.j_units for i in seq_u.idles] == [0.5, 0.5]
    assert [i.j_units for i in seq_w.idles] == [0.5]
    assert seq_w.pulse_count < seq_u.pulse_count


def test_compile_identity_is_empty():
    seq = compile_sequence(cartan_decompose(np.eye(4)), PARAMS)
    assert seq.steps == ()


def test_compile_random_roundtrip():
    rng = np.random.default_rng(403)
    for _ in range(60):
        u = rand_su4(rng)
        seq = compile_sequence(cartan_decompose(u), PARAMS)
        assert phase_distance(simulate_sequence(seq), u) < 1e-9
        # between idles each qubit carries at most two pulses
        run = {1: 0, 2: 0}
        for step in seq.steps:
            if isinstance(step, Idle):
                run = {1: 0, 2: 0}
                continue
            for rot in step:
                run[rot.qubit] += 1
                assert run[rot.qubit] <= 2


def test_serialize_parse_roundtrip():
    rng = np.random.default_rng(404)
    for _ in range(10):
        seq = compile_sequence(cartan_decompose(rand_su4(rng)), PARAMS)
        back = parse_sequence(serialize_sequence(seq))
        assert back.j_hz == seq.j_hz
        assert back.target_description == seq.target_description
        assert len(back.steps) == len(seq.steps)
        for mine, theirs in zip(seq.steps, back.steps):
            if isinstance(mine, Idle):
                assert isinstance(theirs, Idle)
                # seconds is the stored quantity; j_units is re-derived
                assert theirs.seconds == mine.seconds
                assert theirs.j_units == pytest.approx(mine.j_units, abs=1e-12)
            else:
                assert theirs == mine


def test_parse_sequence_error_reporting():
    good = "format 1\nj_hz 215.5\nrot 0 1 0.0 1.0\n"
    parse_sequence(good)
    with pytest.raises(ValueError, match="format"):
        parse_sequence("format 9\nj_hz 215.5\n")
    with pytest.raises(ValueError, match="line 3"):
        parse_sequence("format 1\nj_hz 215.5\nrot 0 1 nonsense 1.0\n")
    with pytest.raises(ValueError, match="j_hz"):
        parse_sequence("format 1\nrot 0 1 0.0 1.0\n")


def test_format_angle_pi_fractions():
    assert format_angle(math.pi) == "pi"
    assert format_angle(-math.pi / 2) == "-pi/2"
    assert format_angle(3 * math.pi / 4) == "3pi/4"
    assert format_angle(0.0) == "0"
    assert format_angle(1.23).startswith("1.23")


def test_emit_table_layout():
    seq = compile_sequence(cartan_decompose(grover_gate("10")), PARAMS)
    text = emit_table(seq)
    lines = text.splitlines()
    assert lines[0].startswith("#")
    assert lines[1].startswith("1:")
    assert lines[2].startswith("2:")
    assert text.count("(1/2J)") >= 2
    assert "coupling time: (1/J)" in lines[3]
