"""Compilation of gate factorizations into hard-pulse programs.

A program is a sequence of steps; each step is either a free-evolution
interval under the scalar coupling or a set of simultaneous transverse
rotations, at most one per qubit.  Pulses are treated as instantaneous
(rf amplitudes far above J), so all coupling time is spent in the
intervals.  The first step of a sequence is applied first, i.e. it is
the rightmost factor of the resulting matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import OutOfRangeAlpha
from .kak import KakDecomposition, LocalGatePair
from .su4 import pauli_rotation
from .warp import Duration, snap_quarter

_TWO_PI = 2.0 * math.pi

SERIAL_FORMAT = 1


@dataclass(frozen=True)
class HamiltonianParams:
    """Spin-pair constants: coupling in Hz, rf amplitudes in rad/s.

    The rf amplitudes are bookkeeping only; the compiler and simulator
    work in the hard-pulse limit where they drop out.
    """

    j_coupling: float = 215.5
    rf_amplitude_1: float = 2.0 * math.pi * 25e3
    rf_amplitude_2: float = 2.0 * math.pi * 25e3

    def __post_init__(self):
        if self.j_coupling <= 0.0:
            raise ValueError(f"coupling must be positive, got {self.j_coupling!r}")


@dataclass(frozen=True)
class Rot:
    """Instantaneous rotation of one qubit about (cos φ, sin φ, 0)."""

    qubit: int
    phase_angle: float
    flip_angle: float

    def __post_init__(self):
        if self.qubit not in (1, 2):
            raise ValueError(f"qubit must be 1 or 2, got {self.qubit!r}")
        if not abs(self.flip_angle) < _TWO_PI:
            raise ValueError(f"flip angle must lie in (-2pi, 2pi), got {self.flip_angle!r}")


@dataclass(frozen=True)
class Idle:
    """Free evolution under the coupling for a positive interval."""

    seconds: float
    j_units: float

    def __post_init__(self):
        if not self.seconds > 0.0:
            raise ValueError(f"idle interval must be positive, got {self.seconds!r}")

    @classmethod
    def from_j_units(cls, j_units: float, j_hz: float) -> "Idle":
        return cls(j_units / j_hz, j_units)


def _check_step(step):
    if isinstance(step, Idle):
        return step
    step = tuple(step)
    qubits = [rot.qubit for rot in step]
    if not step or len(set(qubits)) != len(qubits):
        raise ValueError("a pulse step needs 1..2 rotations on distinct qubits")
    return step


@dataclass(frozen=True)
class PulseSequence:
    """An executable program plus the coupling frequency it was built for."""

    steps: tuple
    j_hz: float
    target_description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(_check_step(s) for s in self.steps))

    @property
    def pulse_count(self) -> int:
        return sum(len(s) for s in self.steps if not isinstance(s, Idle))

    @property
    def idles(self) -> tuple[Idle, ...]:
        return tuple(s for s in self.steps if isinstance(s, Idle))

    @property
    def coupling_time(self) -> Duration:
        total = sum(idle.j_units for idle in self.idles)
        return Duration.from_j_units(total, self.j_hz)

    def rotations(self):
        for step in self.steps:
            if not isinstance(step, Idle):
                yield from step


# ---------------------------------------------------------------------------
# one-qubit synthesis


def euler_xyx(u, qubit: int = 1) -> list[Rot]:
    """Write a one-qubit gate as R_x(a) R_y(b) R_x(c), up to global phase.

    The returned rotations are in left-to-right matrix order: their
    product taken in list order equals u up to phase.  Zero-angle
    factors are dropped, so the list has at most three entries.
    """
    u = np.asarray(u, dtype=complex)
    det = np.linalg.det(u)
    u = u / np.sqrt(det.astype(complex))
    # With s = (a+c)/2, d = (a-c)/2 the product has entries
    #   M00 = cos(b/2) cos s - i sin(b/2) sin d
    #   M01 = -sin(b/2) cos d - i cos(b/2) sin s
    r_cos = math.hypot(u[0, 0].real, u[0, 1].imag)
    r_sin = math.hypot(u[0, 1].real, u[0, 0].imag)
    half_b = math.atan2(r_sin, r_cos)
    s = math.atan2(-u[0, 1].imag, u[0, 0].real) if r_cos > 1e-15 else 0.0
    d = math.atan2(-u[0, 0].imag, -u[0, 1].real) if r_sin > 1e-15 else 0.0
    if half_b < 1e-12:
        # pure x rotation: both outer factors share the axis
        angles = [(0.0, 2.0 * s)]
    else:
        angles = [(0.0, s + d), (math.pi / 2.0, 2.0 * half_b), (0.0, s - d)]
    rots = []
    for phase_angle, flip in angles:
        flip = _wrap_flip(flip)
        if flip is not None:
            rots.append(Rot(qubit, phase_angle, flip))
    return rots


def _wrap_flip(theta: float):
    """Shortest flip equal to theta up to global phase, or None for a no-op.

    Flip angles act projectively (a 2 pi flip is the scalar -1), so wrap
    modulo 2 pi into (-pi, pi] and drop zeros.
    """
    theta = math.remainder(theta, _TWO_PI)
    if theta <= -math.pi + 1e-15:
        theta = math.pi
    if abs(theta) < 1e-12:
        return None
    return theta


def inplane_pair(u, qubit: int = 1) -> list[Rot]:
    """Write a one-qubit gate as at most two in-plane rotations.

    Returns rotations in left-to-right matrix order whose product equals
    u up to global phase.  With alpha = u00 and beta = u01 of the
    determinant-normalized gate, a product R(phi1, t1) R(phi2, t2) has
    alpha = c1 c2 - s1 s2 e^{-i(phi1-phi2)}, so the axis separation is
    chosen to satisfy sin^2(t) = |alpha|^2 sin^2(arg alpha + t), which
    always has a solution; the flip angles and phases then follow in
    closed form.  Gates with real alpha are single rotations; diagonal
    gates become two pi flips.
    """
    u = np.asarray(u, dtype=complex)
    u = u / np.sqrt(np.linalg.det(u).astype(complex))
    alpha, beta = complex(u[0, 0]), complex(u[0, 1])

    def emit(entries):
        rots = []
        for phase_angle, flip in entries:
            flip = _wrap_flip(flip)
            if flip is not None:
                rots.append(Rot(qubit, float(math.remainder(phase_angle, _TWO_PI)), flip))
        return rots

    if abs(beta) < 1e-12 and abs(alpha.imag) < 1e-12:
        return []
    if abs(alpha.imag) < 1e-12:
        # real alpha is exactly the single in-plane rotation case
        theta = 2.0 * math.atan2(abs(beta), alpha.real)
        return emit([(-np.angle(1j * beta), theta)])
    if abs(beta) < 1e-12:
        # diagonal gate: two pi flips about axes separated by the z angle
        psi = float(np.angle(alpha))
        return emit([(-psi, math.pi), (0.0, math.pi)])

    psi, r = float(np.angle(alpha)), abs(alpha)
    if alpha.imag > 0:
        t = math.atan2(r * math.sin(psi), 1.0 - r * math.cos(psi))
    else:
        t = math.atan2(-r * math.sin(psi), 1.0 + r * math.cos(psi))
    delta = 2.0 * t
    a = alpha.imag / math.sin(delta)
    b = alpha.real + a * math.cos(delta)
    p = math.acos(min(1.0, max(-1.0, a + b)))
    q = math.acos(min(1.0, max(-1.0, b - a)))
    x, y = (q + p) / 2.0, (q - p) / 2.0
    w = math.cos(x) * math.sin(y) + math.sin(x) * math.cos(y) * np.exp(-1j * delta)
    phi2 = float(np.angle(w) - np.angle(1j * beta))
    return emit([(phi2 + delta, 2.0 * x), (phi2, 2.0 * y)])


# ---------------------------------------------------------------------------
# coupling fragments

# Conjugators turning the z-axis coupling into the x or y axis: the pulse
# pair before the interval is Rot(q, phase, flip) on both qubits and the
# pair after it is the same pulse inverted.  A quarter turn about y
# carries z onto the x axis; a quarter turn about x carries z onto y.
_CONJ_PHASE = {"x": math.pi / 2.0, "y": 0.0, "z": 0.0}
_CONJ_FLIP = {"x": -math.pi / 2.0, "y": math.pi / 2.0}


def conjugate_coupling(axis: str, alpha: float, j_hz: float) -> PulseSequence:
    """Fragment simulating exp(i (alpha/4) sigma_axis x sigma_axis).

    Free evolution supplies exp(-i (|alpha|/4) sigma_z x sigma_z); when
    the exponent must be positive the interval is sandwiched between pi
    pulses on qubit 1 (refocusing flips the effective coupling sign),
    and a pulse pair conjugates the z axis into x or y.  The refocusing
    pulses share their axis with the conjugator pair so the merge pass
    absorbs them.  |alpha| must be in (0, pi].
    """
    if axis not in ("x", "y", "z"):
        raise ValueError(f"axis must be x, y or z, got {axis!r}")
    if not 0.0 < abs(alpha) <= math.pi + 1e-12:
        raise OutOfRangeAlpha(f"coupling angle must be in (0, pi], got {alpha!r}")
    j_units = snap_quarter(abs(alpha) / _TWO_PI)
    interval = Idle.from_j_units(j_units, j_hz)
    before, after = [], []
    if axis != "z":
        phase_angle, flip = _CONJ_PHASE[axis], _CONJ_FLIP[axis]
        before.append(tuple(Rot(q, phase_angle, flip) for q in (1, 2)))
        after.append(tuple(Rot(q, phase_angle, -flip) for q in (1, 2)))
    if alpha > 0.0:
        refocus = (Rot(1, _CONJ_PHASE[axis], math.pi),)
        before.append(refocus)
        after.insert(0, refocus)
    steps = _peephole([*before, interval, *after])
    return PulseSequence(tuple(steps), j_hz, f"coupling {axis} {alpha:.6g}")


# ---------------------------------------------------------------------------
# the compiler


def _local_steps(pair: LocalGatePair) -> list:
    """Steps realizing a x b, pairing the two qubits' pulses in time."""
    line1 = list(reversed(inplane_pair(pair.a, qubit=1)))
    line2 = list(reversed(inplane_pair(pair.b, qubit=2)))
    steps = []
    for i in range(max(len(line1), len(line2))):
        step = tuple(line[i] for line in (line1, line2) if i < len(line))
        if step:
            steps.append(step)
    return steps


def compile_sequence(d: KakDecomposition, p: HamiltonianParams) -> PulseSequence:
    """Turn a gate factorization into a hard-pulse program.

    Emits k1, one coupling fragment per nonzero coordinate, then k2,
    and finally merges adjacent coaxial rotations on the same qubit.
    The result reproduces the decomposed gate up to global phase.
    """
    steps = []
    steps += _local_steps(d.k1)
    for axis_index, axis in enumerate("xyz"):
        alpha = d.coords[axis_index]
        if snap_quarter(abs(alpha) / _TWO_PI) == 0.0:
            continue
        steps += conjugate_coupling(axis, alpha, p.j_coupling).steps
    steps += _local_steps(d.k2)
    coords = tuple(float(c) for c in d.coords)
    return PulseSequence(
        tuple(_peephole(steps)),
        p.j_coupling,
        f"coords ({coords[0]:.6g}, {coords[1]:.6g}, {coords[2]:.6g})",
    )


def _coaxial_sum(first: Rot, second: Rot):
    """Combined flip angle when second follows first about the same axis."""
    delta = math.remainder(second.phase_angle - first.phase_angle, _TWO_PI)
    if abs(delta) < 1e-9:
        return first.flip_angle + second.flip_angle
    if abs(abs(delta) - math.pi) < 1e-9:
        return first.flip_angle - second.flip_angle
    return None


def _merge_stream(stream: list[Rot]) -> list[Rot]:
    merged: list[Rot] = []
    for rot in stream:
        cur = rot
        while merged and cur is not None:
            total = _coaxial_sum(merged[-1], cur)
            if total is None:
                break
            prev = merged.pop()
            wrapped = _wrap_flip(total)
            cur = None if wrapped is None else Rot(prev.qubit, prev.phase_angle, wrapped)
        if cur is not None:
            merged.append(cur)
    return merged


def _resynthesize(stream: list[Rot], qubit: int) -> list[Rot]:
    """Shortest replacement for a pulse run, equal up to global phase.

    Multiplies the run into one gate (later pulses on the left) and
    rewrites it with inplane_pair, keeping the original when it is
    already as short.
    """
    if len(stream) <= 2:
        return stream
    product = np.eye(2, dtype=complex)
    for rot in stream:
        product = pauli_rotation(rot.phase_angle, rot.flip_angle) @ product
    rewritten = list(reversed(inplane_pair(product, qubit=qubit)))
    return rewritten if len(rewritten) < len(stream) else stream


def _peephole(steps):
    """Merge same-axis neighbors per qubit; pulses never cross an interval."""
    out = []
    streams = {1: [], 2: []}

    def flush():
        lines = {q: _resynthesize(_merge_stream(rots), q) for q, rots in streams.items()}
        for i in range(max(len(lines[1]), len(lines[2]))):
            step = tuple(lines[q][i] for q in (1, 2) if i < len(lines[q]))
            if step:
                out.append(step)
        streams[1], streams[2] = [], []

    for step in steps:
        if isinstance(step, Idle):
            flush()
            out.append(step)
        else:
            for rot in step:
                streams[rot.qubit].append(rot)
    flush()
    return out


# ---------------------------------------------------------------------------
# rendering and serialization


def format_angle(value: float) -> str:
    """Angles as exact multiples of pi when they are one, else decimal."""
    for den in (1, 2, 3, 4, 6, 8, 12):
        num = round(value * den / math.pi)
        if abs(value - num * math.pi / den) < 1e-9:
            if num == 0:
                return "0"
            sign = "-" if num < 0 else ""
            num = abs(num)
            head = "pi" if num == 1 else f"{num}pi"
            return f"{sign}{head}" if den == 1 else f"{sign}{head}/{den}"
    return f"{value:.10g}"


def _format_j_interval(idle: Idle) -> str:
    frac = Fraction(idle.j_units).limit_denominator(64)
    if abs(float(frac) - idle.j_units) < 1e-12 and frac.denominator <= 16:
        num, den = frac.numerator, frac.denominator
        if den == 1:
            return f"({num}/J)" if num != 1 else "(1/J)"
        return f"({num}/{den}J)"
    return f"({idle.seconds:.6g} s)"


def _pulse_name(rot: Rot) -> str:
    phase, flip = rot.phase_angle, rot.flip_angle
    if flip < 0.0:
        phase, flip = phase + math.pi, -flip
    phase = phase % _TWO_PI
    if abs(flip - math.pi / 2.0) < 1e-9:
        for target, name in ((0.0, "X"), (math.pi, "Xm"), (math.pi / 2.0, "Y"), (3.0 * math.pi / 2.0, "Ym")):
            if abs(phase - target) < 1e-9 or abs(phase - target - _TWO_PI) < 1e-9:
                return name
    display_phase = math.remainder(phase, _TWO_PI)
    if abs(flip - math.pi) < 1e-9:
        return f"Pi({format_angle(display_phase)})"
    return f"R({format_angle(display_phase)},{format_angle(flip)})"


def emit_table(seq: PulseSequence) -> str:
    """Two-row rendering, one column per step, intervals shown on both rows."""
    columns = []
    for step in seq.steps:
        if isinstance(step, Idle):
            label = _format_j_interval(step)
            columns.append((label, label))
        else:
            names = {rot.qubit: _pulse_name(rot) for rot in step}
            columns.append((names.get(1, ""), names.get(2, "")))
    widths = [max(len(top), len(bottom)) for top, bottom in columns]
    row1 = "  ".join(top.ljust(w) for (top, _), w in zip(columns, widths)).rstrip()
    row2 = "  ".join(bottom.ljust(w) for (_, bottom), w in zip(columns, widths)).rstrip()
    total = seq.coupling_time
    lines = []
    if seq.target_description:
        lines.append(f"# {seq.target_description}")
    lines.append(f"1: {row1}")
    lines.append(f"2: {row2}")
    lines.append(f"coupling time: {_format_j_interval(Idle(total.seconds, total.j_units)) if total.seconds > 0 else '(0)'}"
                 f" = {total.seconds:.6g} s, pulses: {seq.pulse_count}")
    return "\n".join(lines)


def serialize_sequence(seq: PulseSequence) -> str:
    """Versioned structured text, one record per rotation or interval.

    Records carry their step index so simultaneous rotations stay
    grouped:  ``rot <step> <qubit> <phase_angle> <flip_angle>`` and
    ``idle <step> <seconds>``.
    """
    lines = [
        f"format {SERIAL_FORMAT}",
        f"j_hz {seq.j_hz!r}",
    ]
    if seq.target_description:
        lines.append(f"target {seq.target_description}")
    for index, step in enumerate(seq.steps):
        if isinstance(step, Idle):
            lines.append(f"idle {index} {step.seconds!r}")
        else:
            for rot in step:
                lines.append(f"rot {index} {rot.qubit} {rot.phase_angle!r} {rot.flip_angle!r}")
    return "\n".join(lines) + "\n"


def parse_sequence(text: str) -> PulseSequence:
    """Inverse of serialize_sequence."""
    j_hz = None
    target = ""
    records: dict[int, list] = {}
    kinds: dict[int, str] = {}
    version_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0]
        try:
            if kind == "format":
                version_seen = True
                if int(fields[1]) != SERIAL_FORMAT:
                    raise ValueError(f"unsupported format {fields[1]}")
            elif kind == "j_hz":
                j_hz = float(fields[1])
            elif kind == "target":
                target = line.split(None, 1)[1]
            elif kind == "rot":
                index = int(fields[1])
                rot = Rot(int(fields[2]), float(fields[3]), float(fields[4]))
                records.setdefault(index, []).append(rot)
                kinds.setdefault(index, "rot")
            elif kind == "idle":
                index = int(fields[1])
                records.setdefault(index, []).append(float(fields[2]))
                kinds.setdefault(index, "idle")
            else:
                raise ValueError(f"unknown record kind {kind!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    if not version_seen:
        raise ValueError("missing format header")
    if j_hz is None:
        raise ValueError("missing j_hz header")
    steps = []
    for index in sorted(records):
        if kinds[index] == "idle":
            if len(records[index]) != 1:
                raise ValueError(f"step {index}: an interval must be a single record")
            seconds = records[index][0]
            steps.append(Idle(seconds, snap_quarter(seconds * j_hz)))
        else:
            steps.append(tuple(records[index]))
    return PulseSequence(tuple(steps), j_hz, target)
