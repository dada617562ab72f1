"""Command line front end: ``table``, ``sweep``, ``wavefunction`` and ``verify``.

Exit codes: 0 success, 1 usage error, 2 numerical or verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import replace
from decimal import Decimal, InvalidOperation
from typing import Dict, List, Optional, Sequence

from . import __version__
from .errors import DislocationQHOError
from .heun import full_wavefunction, normalization_constant, radial_wavefunction
from .params import DefectFrameParams, QuantumNumbers
from .spectrum import (
    MAX_CLOSED_FORM_ORDER,
    closed_form_energy,
    energy_from_frequency,
    solve_state,
    spectral_table,
    lines_by_state,
)
from .verify import DEFAULT_BETA_SWEEP, run_suite

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

TABLE_HEADER = ["beta", "n", "l", "k", "m", "omega_closed", "omega_exact", "rel_dev", "physical"]
SWEEP_HEADER = ["Omega", "beta", "n", "l", "k", "E_closed", "E_exact"]

# final defaults, applied after the optional config file
DEFAULTS = {
    "n": "1",
    "l": "2",
    "k": "1",
    "beta": "0.1",
    "m": "1",
    "Omega": "0",
    "format": "csv",
    "precision": "6",
    "rho_max": None,
    "points": "201",
    "normalize": False,
    "beta_sweep": ",".join(str(b) for b in DEFAULT_BETA_SWEEP),
    "tamper": "0",
    "out": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _number(text: str) -> Decimal:
    try:
        value = Decimal(text.strip())
    except InvalidOperation:
        raise UsageError(f"not a number: {text!r}")
    if not value.is_finite():
        raise UsageError(f"not a finite number: {text!r}")
    return value


def parse_values(spec, integer: bool = False) -> List:
    """``"a,b,c"`` lists or inclusive ``"start:stop:step"`` ranges; '.' decimals only."""
    if isinstance(spec, (int, float)):
        spec = str(spec)
    if isinstance(spec, (list, tuple)):
        spec = ",".join(str(v) for v in spec)
    spec = str(spec).strip()
    if not spec:
        raise UsageError("empty value list")
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must be start:stop:step, got {spec!r}")
        start, stop, step = (_number(x) for x in parts)
        if step <= 0:
            raise UsageError(f"range step must be positive, got {spec!r}")
        if stop < start:
            raise UsageError(f"empty range {spec!r}")
        count = int((stop - start) / step)
        values = [start + i * step for i in range(count + 1)]
    else:
        values = [_number(x) for x in spec.split(",")]
    if integer:
        if any(v != v.to_integral_value() for v in values):
            raise UsageError(f"expected integers, got {spec!r}")
        return [int(v) for v in values]
    return [float(v) for v in values]


def fmt(value, precision: str = "6") -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    if precision == "full":
        return repr(float(value))
    return f"{value:.{int(precision)}g}"


def _write(rows: List[List[str]], header: List[str], cfg: Dict) -> str:
    if cfg["format"] == "json":
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        text = buf.getvalue()
    return text


def _emit(text: str, cfg: Dict, command: str) -> None:
    out = cfg.get("out")
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)
    meta = {"version": __version__, "command": command, "config": cfg}
    with open(out + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def _template(cfg: Dict, beta: float, Omega: float = 0.0) -> DefectFrameParams:
    masses = parse_values(cfg["m"])
    if len(masses) != 1:
        raise UsageError("--m takes a single value")
    return DefectFrameParams(beta=beta, Omega=Omega, mass=masses[0])


def cmd_table(cfg: Dict) -> int:
    ns = parse_values(cfg["n"], integer=True)
    ls = parse_values(cfg["l"], integer=True)
    ks = parse_values(cfg["k"])
    betas = parse_values(cfg["beta"])
    Omegas = parse_values(cfg["Omega"])
    prec = cfg["precision"]
    template = _template(cfg, betas[0], Omegas[0])
    lines = spectral_table(ns, ls, ks, betas, template)

    rows, failed = [], False
    for closed, exact in lines_by_state(lines):
        ref = exact
        row = [fmt(ref.beta, prec), str(ref.n), str(ref.l), fmt(ref.k, prec), fmt(ref.mass, prec)]
        for line in (closed, exact):
            if line is None:
                row.append("")
            elif not line.ok:
                row.append(f"ERR:{line.error}")
                failed = True
            else:
                row.append(fmt(line.omega, prec))
        rel = exact.rel_dev if exact.ok else None
        row.append(fmt(rel, prec))
        physical = exact.physical if exact.ok else (closed.physical if closed is not None and closed.ok else False)
        row.append(fmt(bool(physical)))
        rows.append(row)
    _emit(_write(rows, TABLE_HEADER, cfg), cfg, "table")
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_sweep(cfg: Dict) -> int:
    ns = parse_values(cfg["n"], integer=True)
    ls = parse_values(cfg["l"], integer=True)
    ks = parse_values(cfg["k"])
    betas = parse_values(cfg["beta"])
    Omegas = parse_values(cfg["Omega"])
    prec = cfg["precision"]

    # frequencies do not depend on Omega: solve once per (beta, n, l, k)
    solved = {}
    template = _template(cfg, betas[0])
    lines = spectral_table(ns, ls, ks, betas, template)
    for closed, exact in lines_by_state(lines):
        solved[(exact.beta, exact.n, exact.l, exact.k)] = (closed, exact)

    rows, failed = [], False
    for Omega in Omegas:
        for beta in betas:
            p = replace(template, beta=beta, Omega=Omega)
            for n in ns:
                for l in ls:
                    for k in ks:
                        q = QuantumNumbers(n, l, k)
                        closed, exact = solved[(beta, n, l, k)]
                        row = [fmt(Omega, prec), fmt(beta, prec), str(n), str(l), fmt(k, prec)]
                        if closed is None:
                            row.append("")
                        elif not closed.ok:
                            row.append(f"ERR:{closed.error}")
                            failed = True
                        else:
                            try:
                                row.append(fmt(closed_form_energy(n, q, p), prec))
                            except DislocationQHOError as exc:
                                row.append(f"ERR:{exc.code}")
                                failed = True
                        if exact.ok:
                            row.append(fmt(energy_from_frequency(q, exact.omega, exact.A, p), prec))
                        else:
                            row.append(f"ERR:{exact.error}")
                            failed = True
                        rows.append(row)
    _emit(_write(rows, SWEEP_HEADER, cfg), cfg, "sweep")
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_wavefunction(cfg: Dict) -> int:
    singles = {}
    for key, integer in (("n", True), ("l", True), ("k", False), ("beta", False)):
        vals = parse_values(cfg[key], integer=integer)
        if len(vals) != 1:
            raise UsageError(f"wavefunction needs a single --{key}")
        singles[key] = vals[0]
    p = _template(cfg, singles["beta"])
    q = QuantumNumbers(singles["n"], singles["l"], singles["k"])
    prec = cfg["precision"]
    try:
        line, s = solve_state(q, p)
    except DislocationQHOError as exc:
        sys.stderr.write(f"{exc.code}: {exc}\n")
        return EXIT_NUMERIC

    points = parse_values(cfg["points"], integer=True)[0]
    if points < 2:
        raise UsageError("--points must be at least 2")
    if cfg["rho_max"] is None:
        rho_max = 10.0 / math.sqrt(p.mass * line.omega)
    else:
        rho_max = parse_values(cfg["rho_max"])[0]
        if rho_max <= 0:
            raise UsageError("--rho-max must be positive")
    norm = normalization_constant(s, p) if cfg["normalize"] else None

    header = ["rho", "G", "absPsi"] + (["G_normalized"] if norm is not None else [])
    rows = []
    for i in range(points):
        rho = rho_max * i / (points - 1)
        G = radial_wavefunction(s, rho, p)
        psi = full_wavefunction(s, rho, 0.0, 0.0, q, p)
        row = [fmt(rho, prec), fmt(G, prec), fmt(abs(psi), prec)]
        if norm is not None:
            row.append(fmt(norm * G, prec))
        rows.append(row)
    _emit(_write(rows, header, cfg), cfg, "wavefunction")
    return EXIT_OK


def cmd_verify(cfg: Dict) -> int:
    betas = parse_values(cfg["beta_sweep"])
    tamper = parse_values(cfg["tamper"])[0]
    report = run_suite(beta_sweep=betas, tamper=tamper)
    text = json.dumps(report, indent=2, default=float) + "\n"
    _emit(text, cfg, "verify")
    return EXIT_OK if report["passed"] else EXIT_NUMERIC


COMMANDS = {
    "table": cmd_table,
    "sweep": cmd_sweep,
    "wavefunction": cmd_wavefunction,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", help="radial orders, e.g. 1,2,3")
    common.add_argument("--l", help="angular integers; use --l=-2 for negatives")
    common.add_argument("--k", help="axial momenta")
    common.add_argument("--beta", help="dislocation parameters in (0, 1)")
    common.add_argument("--m", help="particle mass")
    common.add_argument("--Omega", help="frame angular velocity: list or start:stop:step")
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--precision", choices=["6", "full"], help="significant digits in output")
    common.add_argument("--config", help="JSON file mirroring these flags; flags win")

    parser = _Parser(
        prog="dislocation-qho",
        description="Oscillator spectrum around a screw dislocation in a rotating frame.",
        epilog="exit codes: 0 success, 1 usage error, 2 numerical or verification failure",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("table", parents=[common], help="frequencies by both methods")
    sub.add_parser("sweep", parents=[common], help="energies over an Omega grid")
    wf = sub.add_parser("wavefunction", parents=[common], help="sample G(rho) of an exact state")
    wf.add_argument("--rho-max", dest="rho_max")
    wf.add_argument("--points")
    wf.add_argument("--normalize", action="store_const", const=True, default=None)
    ver = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    ver.add_argument("--beta-sweep", dest="beta_sweep")
    ver.add_argument("--tamper", help="relative frequency perturbation (negative control)")
    return parser


def resolve_config(args: argparse.Namespace) -> Dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                from_file = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config!r}: {exc}")
        unknown = set(from_file) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(from_file)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    cfg["format"] = str(cfg["format"])
    cfg["precision"] = str(cfg["precision"])
    if cfg["format"] not in ("csv", "json") or cfg["precision"] not in ("6", "full"):
        raise UsageError("format must be csv|json and precision 6|full")
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        sys.stderr.write(f"dislocation-qho: error: {exc}\n")
        return EXIT_USAGE
    except DislocationQHOError as exc:
        # invalid physical parameters passed on the command line
        sys.stderr.write(f"dislocation-qho: {exc.code}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
