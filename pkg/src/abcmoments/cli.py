"""Command-line front end.

    abc-moments spectrum --n 0..2 --q 0..1 --k -1..1 --mu0 1/2
    abc-moments moments  --state 0,0,0 --mu0 0 --lambda -2..2
    abc-moments sweep    --state 0,0,0 --mu0 0:1:1/20 --lambda 1
    abc-moments verify   --grid default

Flags fall back to ABC_* environment variables (ABC_MU0, ABC_Z, ABC_MODE,
ABC_FORMAT, ABC_TOL, ABC_DIM, ABC_OUTPUT). Exit status: 0 on success, 1 if
any check fails, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from . import __version__, engine, theorems
from .errors import ABCError
from .model import QuantumState2D, QuantumState3D, energy
from .tables import MomentRow

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

MOMENT_HEADER = [
    "state_n", "state_q", "state_k", "mu0", "Z", "lambda",
    "engine_value", "oracle_value", "rel_err", "status",
]
SPECTRUM_HEADER = ["state_n", "state_q", "state_k", "mu0", "Z", "n_eff", "alpha", "energy"]
CHECK_HEADER = [
    "name", "state_n", "state_q", "state_k", "mu0", "Z",
    "lhs", "rhs", "abs_err", "rel_err", "tol", "pass", "detail",
]


class ConfigError(Exception):
    pass


# ----------------------------------------------------------------------------
# parsing


def parse_number(text: str, mode: str = "float"):
    """Decimal or p/q literal. Rational mode keeps only exactly representable values."""
    text = text.strip()
    try:
        if "/" in text:
            return Fraction(text)
        exact = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a number: {text!r}") from None
    if engine.normalize_mode(mode) == engine.EXACT:
        if Fraction(float(text)) != exact:
            raise ConfigError(
                f"{text} is not an exact binary fraction; give it as p/q in rational mode"
            )
        return exact
    if exact.denominator == 1:
        return int(exact)
    return float(text)


def parse_int_range(text: str) -> list:
    """'3', '0,2,5' or '-2..2' (inclusive)."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(t) for t in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad integer range: {text!r}") from None
    if not values:
        raise ConfigError(f"empty range: {text!r}")
    return values


def parse_grid(text: str, mode: str = "float") -> list:
    """Comma list, or start:stop:step with stop excluded."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid must be start:stop:step, got {text!r}")
        # grid arithmetic in Fractions so the nodes do not drift
        exact = engine.normalize_mode(mode) == engine.EXACT
        start, stop, step = (
            Fraction(parse_number(p, "rational") if exact or "/" in p else p) for p in parts
        )
        if step <= 0:
            raise ConfigError("grid step must be positive")
        count = math.ceil((stop - start) / step)
        values = [start + i * step for i in range(max(count, 0))]
        if engine.normalize_mode(mode) == engine.FLOAT:
            values = [float(v) for v in values]
    else:
        values = [parse_number(t, mode) for t in text.split(",")]
    if not values:
        raise ConfigError(f"empty grid: {text!r}")
    return values


def _env(name, default):
    return os.environ.get(f"ABC_{name}", default)


# ----------------------------------------------------------------------------
# formatting


def json_value(x):
    if x is None:
        return None
    if isinstance(x, (bool, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return x
    x = float(x)
    return x if math.isfinite(x) else None


def csv_value(x, digits):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    if isinstance(x, (Fraction, int)):
        return str(x)
    x = float(x)
    if not math.isfinite(x):
        return ""
    return repr(x) if digits >= 17 else format(x, f".{digits}g")


def _state_fields(state):
    if state is None:
        return {"state_n": None, "state_q": None, "state_k": None, "mu0": None, "Z": None}
    return {
        "state_n": state.n,
        "state_q": state.q if state.dim == 3 else None,
        "state_k": state.k,
        "mu0": state.mu0,
        "Z": state.Z,
    }


def moment_record(row: MomentRow, a0=None) -> dict:
    rec = _state_fields(row.state)
    rec.update(
        {
            "lambda": row.lam,
            "engine_value": row.engine_value,
            "oracle_value": row.oracle_value,
            "rel_err": row.rel_err,
            "status": row.status,
            "unit": f"(a0/Z)^{row.lam}",
        }
    )
    if a0 is not None:
        v = row.engine_value
        rec["physical_value"] = None if v is None else v * (a0 / row.state.Z) ** row.lam
    return rec


def check_record(rep: theorems.CheckReport) -> dict:
    rec = {"name": rep.name}
    rec.update(_state_fields(rep.state))
    rec.update(
        {
            "lhs": rep.lhs,
            "rhs": rep.rhs,
            "abs_err": rep.abs_err,
            "rel_err": rep.rel_err,
            "tol": rep.tol,
            "pass": rep.passed,
            "detail": rep.detail,
        }
    )
    return rec


def render(records, header, config, summary, fmt, digits) -> str:
    if fmt == "json":
        payload = {
            "config": {k: json_value(v) if not isinstance(v, (str, list)) else v
                       for k, v in config.items()},
            "rows": [{k: json_value(v) for k, v in r.items()} for r in records],
            "summary": {k: json_value(v) for k, v in summary.items()},
        }
        rows = ",\n".join(json.dumps(r, separators=(",", ":")) for r in payload["rows"])
        return (
            '{"config":' + json.dumps(payload["config"], separators=(",", ":"))
            + ',\n"rows":[\n' + rows + '\n],\n"summary":'
            + json.dumps(payload["summary"], separators=(",", ":")) + "}\n"
        )
    buf = io.StringIO()
    extra = [k for k in (records[0] if records else {}) if k not in header and k != "unit"]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header + extra)
    for r in records:
        writer.writerow([csv_value(r.get(k), digits) for k in header + extra])
    return buf.getvalue()


def _summary(records, ok):
    errs = [r["rel_err"] for r in records if r.get("rel_err") is not None and not math.isnan(r["rel_err"])]
    return {"pass": ok, "n_checks": len(records), "max_rel_err": max(errs, default=0.0)}


# ----------------------------------------------------------------------------
# commands


def _make_state(dim, idx, mu0, Z):
    if dim == "2d":
        if len(idx) != 2:
            raise ConfigError("2d states are given as n,k")
        return QuantumState2D(idx[0], idx[1], mu0, Z)
    if len(idx) != 3:
        raise ConfigError("3d states are given as n,q,k")
    return QuantumState3D(idx[0], idx[1], idx[2], mu0, Z)


def cmd_spectrum(args):
    mu0 = parse_number(args.mu0, args.mode)
    Z = parse_number(args.Z, args.mode)
    records = []
    qs = parse_int_range(args.q) if args.dim == "3d" else [None]
    for n in parse_int_range(args.n):
        for q in qs:
            for k in parse_int_range(args.k):
                idx = (n, k) if q is None else (n, q, k)
                st = _make_state(args.dim, idx, mu0, Z)
                if engine.normalize_mode(args.mode) == engine.EXACT:
                    st = st.exact()
                rec = _state_fields(st)
                alpha = st.alpha() if st.dim == 3 else st.alpha_tilde()
                rec.update({"n_eff": st.n_eff(), "alpha": alpha, "energy": energy(st)})
                records.append(rec)
    return records, SPECTRUM_HEADER, _summary(records, True), True


def _moment_rows(states, lams, args):
    with_oracle = args.oracle
    mode = engine.normalize_mode(args.mode)
    rows = []
    for st in states:
        for lam in lams:
            rows.append(theorems.evaluate_row(st, lam, mode, with_oracle, args.tol))
    return rows


def _moment_output(rows, args):
    a0 = parse_number(args.a0, "float") if args.a0 else None
    records = [moment_record(r, a0) for r in rows]
    ok = all(r.status not in ("fail", "oracle_mismatch", "divergent_engine_only") for r in rows)
    header = MOMENT_HEADER + (["physical_value"] if a0 is not None else [])
    return records, header, _summary(records, ok), ok


def cmd_moments(args):
    idx = parse_int_range(args.state)
    mu0 = parse_number(args.mu0, args.mode)
    Z = parse_number(args.Z, args.mode)
    state = _make_state(args.dim, idx, mu0, Z)
    rows = _moment_rows([state], parse_int_range(args.lam), args)
    return _moment_output(rows, args)


def cmd_sweep(args):
    idx = parse_int_range(args.state)
    Z = parse_number(args.Z, args.mode)
    grid = parse_grid(args.mu0, args.mode)
    template = _make_state(args.dim, idx, grid[0], Z)
    rows = []
    for lam in parse_int_range(args.lam):
        rows.extend(theorems.flux_sweep(template, grid, lam, args.mode, args.oracle, args.tol))
    return _moment_output(rows, args)


def cmd_verify(args):
    reports = theorems.verify_grid(args.grid, args.tol)
    ok = all(r.passed for r in reports)
    records = [check_record(r) for r in reports]
    summary = _summary(records, ok)
    if args.only_failures:
        records = [r for r in records if not r["pass"]]
    return records, CHECK_HEADER, summary, ok


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abc-moments",
        description="Radial moments and spectra of the Aharonov-Bohm-Coulomb system.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", choices=("3d", "2d"), default=_env("DIM", "3d"))
    common.add_argument("--mu0", default=_env("MU0", "0"), help="decimal or p/q")
    common.add_argument("--Z", default=_env("Z", "1"))
    common.add_argument("--mode", choices=("float", "rational"), default=_env("MODE", "float"))
    common.add_argument("--format", choices=("csv", "json"), default=_env("FORMAT", "json"))
    common.add_argument("--output", "-o", default=_env("OUTPUT", "-"))
    common.add_argument("--tol", type=float, default=float(_env("TOL", "1e-8")))
    common.add_argument("--csv-digits", type=int, default=17,
                        help="significant digits for CSV floats (17 = shortest round-trip)")

    p = sub.add_parser("spectrum", parents=[common], help="energies E(n, q, k)")
    p.add_argument("--n", default="0..2")
    p.add_argument("--q", default="0")
    p.add_argument("--k", default="0")
    p.set_defaults(func=cmd_spectrum)

    for name, func, help_ in (
        ("moments", cmd_moments, "<r^lambda> table for one state"),
        ("sweep", cmd_sweep, "<r^lambda> over a flux grid (start:stop:step or list)"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--state", required=True, help="n,q,k (3d) or n,k (2d)")
        p.add_argument("--lambda", dest="lam", default="-2..2")
        p.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=True,
                       help="compare against the explicit-wavefunction oracle")
        p.add_argument("--a0", default=None, help="add a physical_value column in these length units")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common], help="run the identity suite")
    p.add_argument("--grid", choices=sorted(theorems.GRIDS), default="default")
    p.add_argument("--only-failures", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


_VALUE_FLAGS = {"--lambda", "--k", "--state", "--mu0", "--n", "--q"}


def _glue_negative_values(argv):
    """Turn '--lambda -2..2' into '--lambda=-2..2' so argparse keeps the value."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        # --help exits 0; argparse usage errors exit 2
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if not args.tol > 0:
            raise ConfigError("tolerance must be positive")
        engine.normalize_mode(args.mode)
        records, header, summary, ok = args.func(args)
    except (ConfigError, ABCError, ValueError) as err:
        print(f"abc-moments: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    # the destination does not belong in the report: identical runs give identical bytes
    config = {k: v for k, v in vars(args).items() if k not in ("func", "output")}
    text = render(records, header, config, summary, args.format, args.csv_digits)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
