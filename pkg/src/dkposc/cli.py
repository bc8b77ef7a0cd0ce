"""Command-line front end: ``dkposc {solve,sweep,wavefunction,oracle,verify}``.

Exit codes: 0 success, 2 no real root, 3 invalid input, 4 numeric failure
(including a failed verification).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from dkposc import oracle, spectrum, sweep
from dkposc.errors import DomainError, NoRealRootError, NumericError, OracleDisagreementError
from dkposc.params import PhysicsParams, QuantumNumbers

EXIT_OK, EXIT_NO_ROOT, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3, 4
CONFIG_KEYS = sweep.PHYSICS_KEYS + sweep.QUANTUM_KEYS


class InvalidInput(Exception):
    """Bad command-line or config input; maps to exit code 3."""


class NoRoot(Exception):
    """Nothing to report on the requested branch; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def fmt(x) -> str:
    """17 significant digits, empty for a missing value."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


# config ---------------------------------------------------------------------

def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidInput("config must be a JSON object")
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise InvalidInput(f"unknown config key(s): {', '.join(unknown)}; allowed: {', '.join(CONFIG_KEYS)}")
    for key, value in data.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InvalidInput(f"{key}: expected a number, got {value!r}")
    return data


def merged_values(args, base: dict | None = None) -> dict:
    values = dict(base or {})
    if args.config:
        values.update(load_config(args.config))
    for key in CONFIG_KEYS:
        value = getattr(args, f"p_{key}")
        if value is not None:
            values[key] = value
    return values


def build_inputs(values: dict) -> tuple[QuantumNumbers, PhysicsParams]:
    physics = {k: float(v) for k, v in values.items() if k in sweep.PHYSICS_KEYS}
    quantum = {k: v for k, v in values.items() if k in sweep.QUANTUM_KEYS}
    try:
        return QuantumNumbers(**quantum), PhysicsParams(**physics)
    except DomainError as exc:
        raise InvalidInput(str(exc)) from exc


# output -----------------------------------------------------------------------

class _Output:
    def __init__(self, target):
        self.target = target

    @property
    def to_stdout(self) -> bool:
        return self.target in (None, "-")

    def write(self, text: str):
        if self.to_stdout:
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            Path(self.target).write_text(text, encoding="utf-8", newline="\n")


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _companion(args, suffix, explicit=None):
    if explicit:
        return Path(explicit)
    if args.out in (None, "-"):
        raise InvalidInput(f"writing a {suffix} file needs --out <file> or an explicit path")
    return Path(args.out).with_suffix(suffix)


def gnuplot_script(csv_path: Path, x_column: int, y_column: int, xlabel: str, curves=None) -> str:
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{xlabel}'",
        "set ylabel 'E'",
    ]
    if curves:
        plots = [f"'{csv_path.name}' using (strcol(1) eq '{c}' ? ${x_column} : 1/0):{y_column} "
                 f"with linespoints title '{c}'" for c in curves]
        lines.append("plot " + ", \\\n     ".join(plots))
    else:
        lines.append(f"plot '{csv_path.name}' using {x_column}:{y_column} with linespoints notitle")
    return "\n".join(lines) + "\n"


# subcommands --------------------------------------------------------------------

def cmd_solve(args) -> int:
    qn, p = build_inputs(merged_values(args))
    report = spectrum.solve_energy(qn, p)
    roots = report.branch(args.branch)
    if not roots:
        raise NoRoot(f"no {args.branch}-energy root")
    out = []
    for root in roots:
        spec = spectrum.wavefunction_spec(root.E, qn, p, normalize=False)
        out.append({"E": root.E, "residual": root.residual, "branch": root.branch,
                    "iterations": root.iterations, "flagged": root.flagged,
                    "exponent": spec.exponent, "scale": spec.scale})
    doc = {
        "params": p.as_dict(),
        "quantum_numbers": {"n": qn.n, "m": qn.m},
        "branch": args.branch,
        "roots": out,
        "bracket_grid": {"window": list(report.bracket_grid["window"]),
                         "points": report.bracket_grid["points"],
                         "doublings": report.bracket_grid["doublings"]},
    }
    _Output(args.out).write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def parse_multi(text: str) -> tuple[str, list[float]]:
    key, sep, values = text.partition("=")
    key = key.strip()
    if not sep or key not in sweep.SWEEPABLE:
        raise InvalidInput(f"--multi must look like param=v1,v2,... with param in {', '.join(sweep.SWEEPABLE)}")
    try:
        numbers = [float(v) for v in values.split(",") if v.strip()]
    except ValueError as exc:
        raise InvalidInput(f"--multi values must be numbers: {values!r}") from exc
    if not numbers:
        raise InvalidInput("--multi needs at least one value")
    return key, numbers


def sweep_configs(args):
    """(curve label, SweepConfig) pairs for the requested sweep."""
    preset = sweep.FIGURE_PRESETS.get(args.preset) if args.preset else None
    if args.preset and preset is None:
        raise InvalidInput(f"unknown preset {args.preset!r}; choose from {', '.join(sweep.FIGURE_PRESETS)}")
    base = dict(preset["base"], n=1, m=1) if preset else {}
    values = merged_values(args, base)
    param = args.param or (preset["param"] if preset else None)
    start = args.start if args.start is not None else (preset["start"] if preset else None)
    stop = args.stop if args.stop is not None else (preset["stop"] if preset else None)
    if param is None or start is None or stop is None:
        raise InvalidInput("sweep needs --param, --from and --to (or --preset)")
    if args.multi:
        multi = parse_multi(args.multi)
    elif preset and args.multi is None:
        multi = preset["curves"]
    else:
        multi = None
    if multi and multi[0] == param:
        raise InvalidInput("--multi must vary a different parameter than --param")
    curves = [("", values)] if not multi else [
        (f"{multi[0]}={fmt(v)}", dict(values, **{multi[0]: v})) for v in multi[1]]
    configs = []
    for label, curve_values in curves:
        qn, p = build_inputs(curve_values)
        try:
            configs.append((label, sweep.SweepConfig(params=p, qn=qn, sweep_param=param, start=float(start),
                                                     stop=float(stop), steps=args.steps, branch=args.branch)))
        except DomainError as exc:
            raise InvalidInput(str(exc)) from exc
    return configs, bool(multi)


def cmd_sweep(args) -> int:
    configs, multi = sweep_configs(args)
    rows = []
    for label, config in configs:
        rows += sweep.run_sweep(config, curve=label).rows
    header = ["sweep_param", "value", "n", "m", "E", "residual", "reason"]
    table = [[r.sweep_param, fmt(r.value), r.n, r.m, fmt(r.E), fmt(r.residual), r.reason] for r in rows]
    if multi:
        header = ["curve"] + header
        table = [[r.curve] + line for r, line in zip(rows, table)]
    _Output(args.out).write(csv_text(header, table))
    param = configs[0][1].sweep_param
    if args.gnuplot:
        gp = _companion(args, ".gp")
        offset = 1 if multi else 0
        curves = [label for label, _ in configs] if multi else None
        gp.write_text(gnuplot_script(Path(args.out), 2 + offset, 5 + offset, param, curves),
                      encoding="utf-8", newline="\n")
    if args.plot is not None:
        from dkposc import plotting

        plotting.plot_sweep(rows, _companion(args, ".png", args.plot or None))
    if not any(r.E is not None for r in rows):
        raise NoRoot("no sweep point produced a root")
    return EXIT_OK


def _pick_root(qn, p, branch) -> spectrum.EnergyRoot:
    roots = spectrum.solve_energy(qn, p).branch("positive" if branch == "all" else branch)
    if not roots:
        raise NoRoot(f"no {branch}-energy root")
    return roots[0] if roots[0].E >= 0 else roots[-1]


def cmd_wavefunction(args) -> int:
    qn, p = build_inputs(merged_values(args))
    if args.r_count < 2:
        raise InvalidInput("--r-count must be at least 2")
    root = _pick_root(qn, p, args.branch)
    spec = spectrum.wavefunction_spec(root.E, qn, p)
    r_max = args.r_max
    if r_max is None:
        r_max = 4.0 * math.sqrt((2 * spec.n + spec.exponent + 2) / spec.scale)
    if not r_max > 0:
        raise InvalidInput("--r-max must be positive")
    r = np.linspace(0.0, r_max, args.r_count)
    phi1 = spectrum.wavefunction(r, spec)
    current = spectrum.charge_density(r, root.E, qn, p, phi1)
    table = [[fmt(a), fmt(b), fmt(c)] for a, b, c in zip(r, phi1, current)]
    _Output(args.out).write(csv_text(["r", "phi1", "J_t"], table))
    if args.plot is not None:
        from dkposc import plotting

        plotting.plot_wavefunction(r, phi1, current, _companion(args, ".png", args.plot or None),
                                   title=f"n={qn.n}, m={qn.m}, E={root.E:.6g}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    qn, p = build_inputs(merged_values(args))
    root = _pick_root(qn, p, args.branch)
    result = oracle.oracle_energy(qn, p, root.E, points=args.grid_points)
    doc = {
        "quantum_numbers": {"n": qn.n, "m": qn.m},
        "params": p.as_dict(),
        "E_closed": result.E_closed,
        "E_oracle": result.E_oracle,
        "relative_difference": result.relative_difference,
        "evaluations": len(result.lambda_history),
        "grid": {"r_min": result.grid_used.r_min, "r_max": result.grid_used.r_max,
                 "points": result.grid_used.points},
    }
    if args.json:
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = (f"E_closed={fmt(result.E_closed)} E_oracle={fmt(result.E_oracle)} "
                f"relative_difference={result.relative_difference:.3e}\n")
    _Output(args.out).write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from dkposc.verify import run_verify

    report = run_verify(args.level, seed=args.seed)
    text = json.dumps(report.to_dict(), indent=2) + "\n" if args.json else "\n".join(report.lines()) + "\n"
    _Output(args.out).write(text)
    return EXIT_OK if report.passed else EXIT_NUMERIC


# parser --------------------------------------------------------------------------

def _add_common(sub, branch_default="positive"):
    sub.add_argument("--config", help="JSON object with keys " + ", ".join(CONFIG_KEYS))
    sub.add_argument("--out", default="-", help="output file, '-' for stdout")
    sub.add_argument("--branch", choices=sweep.BRANCHES, default=branch_default)
    sub.add_argument("--json", action="store_true", help="JSON output where a text form exists")
    for key in sweep.PHYSICS_KEYS:
        sub.add_argument(f"--{key}", dest=f"p_{key}", type=float, metavar="X")
    for key in sweep.QUANTUM_KEYS:
        sub.add_argument(f"--{key}", dest=f"p_{key}", type=int, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dkposc", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = subs.add_parser("solve", help="real roots of the quantization condition (JSON)")
    _add_common(s)
    s.set_defaults(func=cmd_solve)

    s = subs.add_parser("sweep", help="energy along a parameter sweep (CSV)")
    _add_common(s)
    s.add_argument("--param", choices=sweep.SWEEPABLE)
    s.add_argument("--from", dest="start", type=float)
    s.add_argument("--to", dest="stop", type=float)
    s.add_argument("--steps", type=int, default=50)
    s.add_argument("--multi", help="extra curves, e.g. omega=0.5,1,1.5")
    s.add_argument("--preset", help="reference sweep: " + ", ".join(sweep.FIGURE_PRESETS))
    s.add_argument("--gnuplot", action="store_true", help="also write <out>.gp")
    s.add_argument("--plot", nargs="?", const="", default=None, metavar="PATH",
                   help="also render a PNG (default <out>.png)")
    s.set_defaults(func=cmd_sweep)

    s = subs.add_parser("wavefunction", help="tabulate phi1 and J_t (CSV)")
    _add_common(s)
    s.add_argument("--r-count", type=int, default=201)
    s.add_argument("--r-max", type=float)
    s.add_argument("--plot", nargs="?", const="", default=None, metavar="PATH")
    s.set_defaults(func=cmd_wavefunction)

    s = subs.add_parser("oracle", help="finite-difference cross-check of one root")
    _add_common(s)
    s.add_argument("--grid-points", type=int, default=oracle.DEFAULT_POINTS)
    s.set_defaults(func=cmd_oracle)

    s = subs.add_parser("verify", help="run the verification suite")
    s.add_argument("--level", choices=("quick", "full"), default="quick")
    s.add_argument("--seed", type=int, help="overrides DKP_SEED")
    s.add_argument("--out", default="-")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NoRoot, NoRealRootError) as exc:
        print(f"no root: {exc}", file=sys.stderr)
        return EXIT_NO_ROOT
    except (NumericError, OracleDisagreementError, ArithmeticError) as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
