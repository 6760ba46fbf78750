"""Command-line front end for running and analyzing distillation experiments.

Subcommands
-----------
iterate      run an iteration schedule on an input state, one table row per
             (double) step
threshold    bisect the convergence boundary of an input family
verify       evaluate the numeric condition systems on a unitary
first-order  extract the first-order response of a round along a direction

Input families are written as ``ghz``, ``white:<eps>``,
``coherent:<eps>[:i,j,...]`` (default extra components 1,6),
``custom:<path>:<eps>`` and ``mix:<w_ghz>:<w_id>`` for
w_ghz * rho_ghz + w_id * I.

Matrix files are plain text, one row per line, entries written as ``a+bi``
and separated by whitespace.  Tables are CSV (default) or JSON with
identical field names; numbers carry 17 significant digits so the tables
round-trip losslessly.  If the environment variable ``GHZDIST_OUTPUT_DIR``
is set, relative output paths are placed under it.

Exit codes: 0 success (all requested conditions pass for ``verify``),
1 requested conditions failed, 2 configuration error, 3 domain error
(zero success probability or a non-positive state).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, qmat, states, unitaries
from .protocol import (
    InvalidInput,
    NoiseParams,
    Single,
    ZeroSuccessProbability,
    alternating_schedule,
    run_schedule,
    uniform_schedule,
)
from .states import NonPositiveState, NoiseSpec

OUTPUT_DIR_ENV = "GHZDIST_OUTPUT_DIR"

ITERATE_FIELDS = ("step", "fidelity", "success_prob", "min_inputs", "expected_inputs")


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def parse_complex_token(token: str) -> complex:
    try:
        return complex(token.replace("i", "j"))
    except ValueError as exc:
        raise ValueError(f"cannot parse complex entry {token!r}") from exc


def parse_matrix_text(text: str) -> np.ndarray:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        rows.append([parse_complex_token(tok) for tok in line.split()])
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("matrix file rows have inconsistent lengths")
    return np.array(rows, dtype=np.complex128)


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def format_matrix(m: np.ndarray) -> str:
    return "\n".join(" ".join(format_complex(z) for z in row) for row in m)


def _resolve_output(path_str: str | None):
    if path_str is None:
        return None
    path = Path(path_str)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _emit_table(rows: list[dict], fields: tuple[str, ...], fmt: str, output) -> None:
    if fmt == "json":
        text = json.dumps(
            [{k: (_fmt(r[k]) if isinstance(r[k], float) else r[k]) for k in fields} for r in rows],
            indent=2,
        ) + "\n"
    else:
        lines = [",".join(fields)]
        lines += [",".join(_fmt(r[k]) for k in fields) for r in rows]
        text = "\n".join(lines) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def parse_unitary_token(token: str) -> unitaries.TwoQubitUnitary:
    if token == "u1":
        return unitaries.u1()
    if token == "u2":
        return unitaries.u2()
    if token == "u3":
        return unitaries.u3(0)
    if token.startswith("u3:"):
        return unitaries.u3(int(token.split(":", 1)[1]))
    raise ValueError(f"unknown unitary {token!r} (expected u1, u2 or u3:N)")


def parse_input_family(spec_str: str) -> np.ndarray:
    parts = spec_str.split(":")
    kind = parts[0]
    if kind == "ghz" and len(parts) == 1:
        return states.ghz_density()
    if kind == "white" and len(parts) == 2:
        return states.white_noise_input(float(parts[1]))
    if kind == "coherent" and len(parts) in (2, 3):
        eps = float(parts[1])
        components = states.DEFAULT_COHERENT_COMPONENTS
        if len(parts) == 3:
            components = tuple((int(tok), 1.0) for tok in parts[2].split(","))
        return states.coherent_input(eps, components)
    if kind == "custom" and len(parts) == 3:
        m = parse_matrix_text(Path(parts[1]).read_text())
        return states.perturbed_input(NoiseSpec.custom(float(parts[2]), m))
    if kind == "mix" and len(parts) == 3:
        w_ghz, w_id = float(parts[1]), float(parts[2])
        rho = w_ghz * states.ghz_density() + w_id * np.eye(8)
        if abs(rho.trace().real - 1.0) > 1e-9:
            raise ValueError(
                f"mix weights give trace {rho.trace().real:.6g}, need w_ghz + 8 w_id = 1"
            )
        return rho
    raise ValueError(f"cannot parse input family {spec_str!r}")


def _build_schedule(args):
    if args.schedule == "single":
        if args.unitary is None:
            raise ValueError("--schedule single requires --unitary")
        return Single(parse_unitary_token(args.unitary))
    if args.schedule == "alternating":
        return alternating_schedule()
    return uniform_schedule(args.u3_n)


def cmd_iterate(args) -> int:
    schedule = _build_schedule(args)
    rho0 = parse_input_family(args.input)
    noise = NoiseParams(p_m=args.pm, p_g=args.pg)
    records = run_schedule(rho0, schedule, args.steps, noise)
    rows = []
    if args.record_odd and not isinstance(schedule, Single):
        expected = 1.0
        elementary = 0
        for rec in records:
            fidelities = (rec.intermediate_fidelity, rec.fidelity)
            for phase, p in enumerate(rec.elementary_probabilities):
                elementary += 1
                expected *= 2.0 / p
                rows.append(
                    {
                        "step": elementary,
                        "fidelity": fidelities[phase],
                        "success_prob": p,
                        "min_inputs": 2**elementary,
                        "expected_inputs": expected,
                    }
                )
    else:
        for rec in records:
            rows.append(
                {
                    "step": rec.step,
                    "fidelity": rec.fidelity,
                    "success_prob": rec.success_probability,
                    "min_inputs": rec.cumulative_min_inputs,
                    "expected_inputs": rec.cumulative_expected_inputs,
                }
            )
    _emit_table(rows, ITERATE_FIELDS, args.format, _resolve_output(args.output))
    return 0


_FAMILY_DEFAULTS = {
    # family -> (lo, hi, resolution)
    "coherent": (0.1, 0.6, 0.005),
    "white": (0.3, 0.95, 0.005),
    "pm": (0.01, 0.3, 0.0025),
}


def cmd_threshold(args) -> int:
    if args.family not in _FAMILY_DEFAULTS:
        raise ValueError(f"unknown family {args.family!r}")
    lo_d, hi_d, res_d = _FAMILY_DEFAULTS[args.family]
    lo = args.lo if args.lo is not None else lo_d
    hi = args.hi if args.hi is not None else hi_d
    resolution = args.resolution if args.resolution is not None else res_d
    schedule = _build_schedule(args)
    noise = NoiseParams(p_m=args.pm, p_g=args.pg)
    if args.family == "coherent":
        family = analysis.coherent_family
    elif args.family == "white":
        family = analysis.white_family
    else:
        family = analysis.measurement_error_family(parse_input_family(args.input))
    result = analysis.threshold_bisect(
        family,
        lo,
        hi,
        resolution,
        schedule=schedule,
        noise=noise,
        family_name=args.family,
    )
    rows = [
        {
            "family": result.family,
            "threshold": result.threshold,
            "bracket_lo": result.bracket[0],
            "bracket_hi": result.bracket[1],
            "rule": result.rule,
        }
    ]
    _emit_table(
        rows,
        ("family", "threshold", "bracket_lo", "bracket_hi", "rule"),
        args.format,
        _resolve_output(args.output),
    )
    return 0


_CONDITION_SETS = ("all", "unitarity", "fixed-point", "coherent")


def cmd_verify(args) -> int:
    if args.file:
        matrix = parse_matrix_text(Path(args.file).read_text())
        target = unitaries.TwoQubitUnitary(matrix, Path(args.file).name)
    else:
        target = parse_unitary_token(args.unitary)
    checks = []
    if args.conditions in ("all", "unitarity"):
        checks.append(("unitarity", unitaries.check_unitarity(target, args.tol)))
    if args.conditions in ("all", "fixed-point"):
        checks.append(("fixed-point", unitaries.check_fixed_point(target, args.tol)))
    if args.conditions in ("all", "coherent"):
        checks.append(
            ("coherent", unitaries.check_coherent_conditions(target, args.tol))
        )
    all_passed = True
    print(f"unitary: {target.label}")
    for set_name, report in checks:
        all_passed &= report.passed
        print(f"[{set_name}] {'PASS' if report.passed else 'FAIL'} (tol {report.tolerance:g})")
        for cond_name, resid in report.residuals:
            status = "ok" if resid < report.tolerance else "VIOLATED"
            print(f"  {cond_name:<20} {resid:.3e}  {status}")
    return 0 if all_passed else 1


def _direction_from_args(args) -> np.ndarray:
    if args.m_file:
        return parse_matrix_text(Path(args.m_file).read_text())
    if args.m == "white":
        return np.eye(8) / 8.0 - states.ghz_density()
    if args.m == "coherent":
        psi = np.zeros(8, dtype=np.complex128)
        psi[1] = psi[6] = 1.0 / np.sqrt(2.0)
        g = states.ghz()
        return np.outer(psi, g.conj()) + np.outer(g, psi.conj())
    if args.m.startswith("random:"):
        return states.random_traceless_hermitian(int(args.m.split(":", 1)[1]))
    raise ValueError(f"unknown direction {args.m!r}")


def cmd_first_order(args) -> int:
    target = parse_unitary_token(args.unitary)
    direction = _direction_from_args(args)
    response = analysis.first_order_response(target, direction, args.h)
    print(f"numeric response (h={args.h:g}):")
    print(format_matrix(response.matrix))
    if target.label == "u1":
        closed = analysis.closed_form_response_u1(direction)
        deviation = float(np.max(np.abs(response.matrix - closed)))
        print("closed form:")
        print(format_matrix(closed))
        print(f"max deviation: {deviation:.17g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghzdist",
        description="Iterated post-selection distillation of three-qubit GHZ states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_schedule_flags(p):
        p.add_argument(
            "--schedule",
            choices=("single", "alternating", "uniform"),
            default="alternating",
        )
        p.add_argument("--unitary", help="unitary for --schedule single (u1, u2, u3:N)")
        p.add_argument("--u3-n", type=int, default=0, help="N for the uniform schedule")

    def add_noise_flags(p):
        p.add_argument("--pm", type=float, default=0.0, help="readout flip probability")
        p.add_argument("--pg", type=float, default=0.0, help="depolarizing gate error")

    def add_output_flags(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", help="output path (stdout if omitted)")

    p_it = sub.add_parser("iterate", help="run an iteration schedule")
    add_schedule_flags(p_it)
    p_it.add_argument("--input", required=True, help="input family, e.g. white:0.4")
    p_it.add_argument("--steps", type=int, required=True)
    p_it.add_argument(
        "--record-odd",
        action="store_true",
        help="emit one row per elementary step of a double schedule",
    )
    add_noise_flags(p_it)
    add_output_flags(p_it)
    p_it.set_defaults(func=cmd_iterate)

    p_th = sub.add_parser("threshold", help="bisect a convergence threshold")
    p_th.add_argument("--family", required=True, choices=tuple(_FAMILY_DEFAULTS))
    p_th.add_argument("--lo", type=float)
    p_th.add_argument("--hi", type=float)
    p_th.add_argument("--resolution", type=float)
    p_th.add_argument(
        "--input",
        default="mix:0.8:0.025",
        help="fixed input state for the pm family",
    )
    add_schedule_flags(p_th)
    add_noise_flags(p_th)
    add_output_flags(p_th)
    p_th.set_defaults(func=cmd_threshold)

    p_ve = sub.add_parser("verify", help="evaluate condition systems on a unitary")
    p_ve.add_argument("unitary", nargs="?", help="u1, u2 or u3:N")
    p_ve.add_argument("--file", help="path to a 4x4 matrix file instead")
    p_ve.add_argument("--conditions", choices=_CONDITION_SETS, default="all")
    p_ve.add_argument("--tol", type=float, default=qmat.DEFAULT_TOL)
    p_ve.set_defaults(func=cmd_verify)

    p_fo = sub.add_parser("first-order", help="first-order response of one round")
    p_fo.add_argument("unitary", help="u1, u2 or u3:N")
    p_fo.add_argument(
        "--m",
        default="white",
        help="direction: white, coherent or random:SEED",
    )
    p_fo.add_argument("--m-file", help="path to an 8x8 direction matrix file")
    p_fo.add_argument("--h", type=float, default=analysis.DEFAULT_STEP)
    p_fo.set_defaults(func=cmd_first_order)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and not args.unitary and not args.file:
        print("verify needs a unitary name or --file", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (NonPositiveState, ZeroSuccessProbability) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InvalidInput, analysis.BracketInvalid, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
