"""Command-line interface: decompose, warp, compile, simulate.

Matrix sources are builtin names ("grover:10", "warp:W4", "identity"),
a path to a matrix file (4 lines of 4 whitespace-separated complex
entries like "0.5-0.5i", '#' comments allowed), or a '*'-joined product
of those, multiplied left to right as written.

Exit codes: 0 ok, 2 parse failure, 3 invalid input, 4 verification.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from fractions import Fraction
from functools import reduce
from pathlib import Path

import numpy as np

from .errors import NotSpecialUnitary, NotUnitary
from .grover import TargetFile, grover_gate
from .kak import cartan_decompose
from .pulses import (
    HamiltonianParams,
    compile_sequence,
    emit_table,
    format_angle,
    parse_sequence,
    serialize_sequence,
)
from .simulator import (
    apply,
    basis_state,
    predict_spectrum,
    serialize_spectrum,
    simulate_sequence,
)
from .su4 import I4, phase_distance, project_su4, unitarity_defect
from .warp import (
    BASIS_LABELS,
    Duration,
    coupling_time,
    decode_output,
    full_permutation_catalog,
    warp_catalog,
    warp_search,
)

#: Inputs farther than this from any unitary are rejected; closer ones
#: are projected onto the nearest unitary so text-file precision loss
#: does not poison downstream tolerances.
INGEST_DEFECT_LIMIT = 1e-6

DEFAULT_J_HZ = 215.5
DEFAULT_TOLERANCE = 1e-9


class SourceParseError(Exception):
    """Unreadable matrix source or program file (exit code 2)."""


class VerificationFailure(Exception):
    """Compiled program missed its target beyond tolerance (exit code 4)."""


# ---------------------------------------------------------------------------
# ingestion


def _parse_complex(token: str) -> complex:
    try:
        return complex(token.replace("i", "j"))
    except ValueError as exc:
        raise SourceParseError(f"bad complex entry {token!r}") from exc


def _matrix_from_file(path: str) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SourceParseError(f"cannot read matrix source {path!r}: {exc}") from exc
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rows.append([_parse_complex(tok) for tok in line.split()])
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise SourceParseError(f"{path!r} must hold a 4x4 matrix")
    return np.array(rows, dtype=complex)


def _warp_gate_by_name(name: str):
    for gate in full_permutation_catalog():
        if gate.name == name:
            return gate
    raise SourceParseError(f"unknown warp gate {name!r}")


def _builtin_matrix(token: str):
    if token == "identity":
        return I4
    if token.startswith("grover:"):
        bits = token.split(":", 1)[1]
        if len(bits) != 2 or any(b not in "01" for b in bits):
            raise SourceParseError(f"grover target must be two bits, got {bits!r}")
        return grover_gate(TargetFile(int(bits[0]), int(bits[1])))
    if token.startswith("warp:"):
        return _warp_gate_by_name(token.split(":", 1)[1]).matrix
    return None


def _nearest_unitary(m: np.ndarray) -> np.ndarray:
    w, _, vh = np.linalg.svd(m)
    return w @ vh


def resolve_matrix(source: str) -> np.ndarray:
    """Evaluate a matrix source to a unitary 4x4 array."""
    factors = []
    for token in source.split("*"):
        token = token.strip()
        if not token:
            raise SourceParseError(f"empty factor in matrix source {source!r}")
        builtin = _builtin_matrix(token)
        factors.append(builtin if builtin is not None else _matrix_from_file(token))
    matrix = reduce(lambda a, b: a @ b, factors)
    defect = unitarity_defect(matrix)
    if defect > INGEST_DEFECT_LIMIT:
        raise NotUnitary(f"input is not unitary (defect {defect:.3e})")
    if defect > 1e-12:
        matrix = _nearest_unitary(matrix)
    return matrix


# ---------------------------------------------------------------------------
# shared rendering


def _fmt_complex(z: complex, precision: int = 10) -> str:
    re, im = z.real + 0.0, z.imag + 0.0
    return f"{re:.{precision}g}{im:+.{precision}g}i"


def _fmt_matrix_rows(m: np.ndarray, precision: int = 10) -> list[str]:
    return [" ".join(_fmt_complex(z, precision) for z in row) for row in np.asarray(m)]


def _fmt_coords(coords) -> str:
    return "(" + ", ".join(format_angle(c) for c in coords) + ")"


def _fmt_duration(d: Duration) -> str:
    frac = Fraction(d.j_units).limit_denominator(64)
    if abs(float(frac) - d.j_units) < 1e-12 and frac.denominator <= 16:
        if frac == 0:
            label = "0"
        elif frac.denominator == 1:
            label = f"{frac.numerator}/J"
        else:
            label = f"{frac.numerator}/{frac.denominator}J"
    else:
        label = f"{d.j_units:.6g}/J"
    return f"{label} ({d.seconds:.6g} s)"


def _fmt_map(gate) -> str:
    return " ".join(f"{src}>{dst}" for src, dst in gate.maps().items())


# ---------------------------------------------------------------------------
# warp-flag plumbing shared by decompose and compile


def _apply_warp(matrix: np.ndarray, args) -> tuple[np.ndarray, object]:
    """Premultiply the requested warp gate; returns (matrix, gate or None)."""
    choice = getattr(args, "warp", "none")
    if choice == "none":
        return matrix, None
    catalog = full_permutation_catalog() if args.catalog == "all24" else warp_catalog()
    if choice == "auto":
        result = warp_search(matrix, args.j_hz, catalog=catalog)
        gate = result.record(result.selected).gate
    else:
        gate = _warp_gate_by_name(choice)
    return gate.matrix @ matrix, gate


# ---------------------------------------------------------------------------
# subcommands


def cmd_decompose(args) -> int:
    matrix = resolve_matrix(args.source)
    matrix, gate = _apply_warp(matrix, args)
    special = project_su4(matrix)
    d = cartan_decompose(special.matrix)
    duration = coupling_time(d.coords, args.j_hz)
    phase = math.remainder(d.global_phase + special.extracted_phase, 2.0 * math.pi)

    out = []
    if args.output in (None, "table"):
        out.append(f"source: {args.source}")
        if gate is not None:
            out.append(f"warp: {gate.name} ({_fmt_map(gate)})")
        out.append(f"canonical coordinates: {_fmt_coords(d.coords)}")
        out.append(f"coupling time: {_fmt_duration(duration)}")
        out.append(f"global phase: {format_angle(phase)}")
        for tag, pair in (("k1", d.k1), ("k2", d.k2)):
            rows_a = _fmt_matrix_rows(pair.a)
            rows_b = _fmt_matrix_rows(pair.b)
            out.append(f"local {tag} qubit1: [{rows_a[0]} ; {rows_a[1]}]")
            out.append(f"local {tag} qubit2: [{rows_b[0]} ; {rows_b[1]}]")
    else:
        out.append("format 1")
        out.append(f"source {args.source}")
        if gate is not None:
            out.append(f"warp {gate.name}")
        for name, value in zip(("alpha_x", "alpha_y", "alpha_z"), d.coords):
            out.append(f"{name} {value!r}")
        out.append(f"global_phase {phase!r}")
        out.append(f"coupling_j_units {duration.j_units!r}")
        out.append(f"coupling_seconds {duration.seconds!r}")
        for tag, pair in (("k1", d.k1), ("k2", d.k2)):
            for qubit, m in ((1, pair.a), (2, pair.b)):
                flat = " ".join(_fmt_complex(z, 17) for z in np.asarray(m).reshape(4))
                out.append(f"{tag}_qubit{qubit} {flat}")
            out.append(f"{tag}_phase {pair.phase!r}")
    print("\n".join(out))
    return 0


def cmd_warp(args) -> int:
    matrix = resolve_matrix(args.source)
    catalog = full_permutation_catalog() if args.catalog == "all24" else warp_catalog()
    result = warp_search(matrix, args.j_hz, catalog=catalog)

    out = []
    if args.output in (None, "table"):
        out.append(f"source: {args.source}")
        width = max(len(r.gate.name) for r in result.records)
        for rec in result.records:
            star = "*" if rec.gate.name in result.minimizers else " "
            out.append(
                f"{star} {rec.gate.name:<{width}}  {_fmt_coords(rec.coords):<18}"
                f"  {_fmt_duration(rec.duration):<22}  {_fmt_map(rec.gate)}"
            )
        out.append("minimizers: " + " ".join(result.minimizers))
        if args.tie_break == "lowest-index":
            out.append(f"selected: {result.selected}")
    else:
        out.append("format 1")
        out.append(f"source {args.source}")
        for rec in result.records:
            flag = 1 if rec.gate.name in result.minimizers else 0
            coords = " ".join(repr(c) for c in rec.coords)
            out.append(
                f"gate {rec.gate.name} coords {coords} j_units {rec.duration.j_units!r}"
                f" seconds {rec.duration.seconds!r} minimizer {flag}"
            )
        out.append("minimizers " + " ".join(result.minimizers))
        if args.tie_break == "lowest-index":
            out.append(f"selected {result.selected}")
    print("\n".join(out))
    return 0


def cmd_compile(args) -> int:
    matrix = resolve_matrix(args.source)
    matrix, gate = _apply_warp(matrix, args)
    d = cartan_decompose(project_su4(matrix).matrix)
    params = HamiltonianParams(j_coupling=args.j_hz)
    description = args.source if gate is None else f"{gate.name}*{args.source}"
    seq = replace(compile_sequence(d, params), target_description=description)

    blocks = []
    if args.output in (None, "table"):
        header = [f"# compiled: {description}"]
        if gate is not None:
            header.append(f"# warp {gate.name} output map: {_fmt_map(gate)}")
        blocks.append("\n".join(header + [emit_table(seq)]))
    if args.output in (None, "structured"):
        blocks.append(serialize_sequence(seq).rstrip("\n"))
    print("\n\n".join(blocks))

    if args.out:
        Path(args.out).write_text(serialize_sequence(seq))

    if args.verify:
        achieved = simulate_sequence(seq, params)
        distance = phase_distance(achieved, matrix)
        print(f"verify: phase_distance {distance:.3e} (tolerance {args.tolerance:g})")
        if distance > args.tolerance:
            raise VerificationFailure(
                f"compiled program misses target by {distance:.3e} > {args.tolerance:g}"
            )
    return 0


def cmd_simulate(args) -> int:
    try:
        text = Path(args.program).read_text()
    except OSError as exc:
        raise SourceParseError(f"cannot read program {args.program!r}: {exc}") from exc
    try:
        seq = parse_sequence(text)
    except ValueError as exc:
        raise SourceParseError(f"bad program file: {exc}") from exc
    params = HamiltonianParams(j_coupling=args.j_hz) if args.j_hz is not None else None
    unitary = simulate_sequence(seq, params)

    if args.initial is None:
        print("# unitary")
        print("\n".join(_fmt_matrix_rows(unitary)))
        return 0
    state = apply(unitary, basis_state(args.initial))
    print(f"initial: {args.initial}")
    print("state:")
    for label, amp in zip(BASIS_LABELS, state.amplitudes):
        print(f"  {label}: {_fmt_complex(complex(amp))}")
    dominant = state.dominant_label()
    print(f"dominant: {dominant} (probability {state.probability(dominant):.6g})")
    if args.decode is not None:
        gate = _warp_gate_by_name(args.decode)
        print(f"decoded: {decode_output(gate, dominant)}")
    if args.spectrum:
        print("spectrum:")
        print(serialize_spectrum(predict_spectrum(state)), end="")
    return 0


# ---------------------------------------------------------------------------
# parser and entry point


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return value


def _add_common(sub, tolerance: bool = False):
    sub.add_argument("--j-hz", type=_positive_float, default=DEFAULT_J_HZ,
                     help=f"scalar coupling in Hz (default {DEFAULT_J_HZ})")
    if tolerance:
        sub.add_argument("--tolerance", type=_positive_float, default=DEFAULT_TOLERANCE,
                         help=f"verification tolerance (default {DEFAULT_TOLERANCE:g})")


def _add_warp_flags(sub):
    sub.add_argument("--warp", default="none",
                     choices=["W0", "W1", "W2", "W3", "W4", "W5", "auto", "none"],
                     help="premultiply this permutation, or pick the fastest (auto)")
    sub.add_argument("--catalog", default="six", choices=["six", "all24"],
                     help="search the six representatives or all 24 permutations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="warpgate",
        description="Two-qubit gate compiler: time-optimal interaction "
                    "decomposition, permutation warp search, hard-pulse programs.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("decompose", help="canonical coordinates and local factors")
    p.add_argument("source", help="matrix source (builtin, file, or '*'-product)")
    _add_warp_flags(p)
    p.add_argument("--output", choices=["table", "structured"], default=None)
    _add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = commands.add_parser("warp", help="rank permutation gates by coupling time")
    p.add_argument("source")
    p.add_argument("--catalog", default="six", choices=["six", "all24"])
    p.add_argument("--tie-break", default="lowest-index",
                   choices=["lowest-index", "report-all"], dest="tie_break")
    p.add_argument("--output", choices=["table", "structured"], default=None)
    _add_common(p)
    p.set_defaults(func=cmd_warp)

    p = commands.add_parser("compile", help="emit a hard-pulse program")
    p.add_argument("source")
    _add_warp_flags(p)
    p.add_argument("--verify", action="store_true",
                   help="simulate the program and check it hits the target")
    p.add_argument("--out", default=None, help="also write the structured program here")
    p.add_argument("--output", choices=["table", "structured"], default=None,
                   help="emit only one of the two formats")
    _add_common(p, tolerance=True)
    p.set_defaults(func=cmd_compile)

    p = commands.add_parser("simulate", help="execute a structured program file")
    p.add_argument("program", help="path to a structured program document")
    p.add_argument("--initial", choices=list(BASIS_LABELS), default=None,
                   help="apply the program to this basis ket")
    p.add_argument("--spectrum", action="store_true",
                   help="predict the readout stick spectrum (needs --initial)")
    p.add_argument("--decode", default=None,
                   choices=["W0", "W1", "W2", "W3", "W4", "W5"],
                   help="undo this warp permutation on the dominant ket")
    p.add_argument("--j-hz", type=_positive_float, default=None,
                   help="override the coupling stored in the program")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "spectrum", False) and args.initial is None:
        parser.error("--spectrum requires --initial")
    if getattr(args, "decode", None) is not None and getattr(args, "initial", None) is None:
        parser.error("--decode requires --initial")
    try:
        return args.func(args)
    except SourceParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotUnitary, NotSpecialUnitary) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except VerificationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
