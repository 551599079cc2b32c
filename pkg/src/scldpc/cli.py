"""Command-line front end.

Every artifact carries the tool version and the fully resolved
configuration: JSON outputs under a ``meta`` key, CSV and matrix outputs as
``# key=value`` comment lines.  Exit codes: 0 success, 2 usage error,
3 infeasible or budget exhausted, 4 input/output failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from scldpc import __version__, bounds, construct, corpus, cycles, equiv, search, simulate
from scldpc.core import ParseError, SymbolicMatrix, format_matrix, profile, read_matrix

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("scldpc")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- argument helpers --------------------------------------------------------

def int_range(text: str) -> list[int]:
    """``"4"``, ``"2:10"`` (inclusive) or ``"3,5,9"``."""
    try:
        if "," in text:
            return [int(t) for t in text.split(",")]
        if ":" in text:
            lo, hi = (int(t) for t in text.split(":"))
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from None


def float_grid(text: str) -> list[float]:
    """``"1:0.5:5"`` (start:step:stop, inclusive) or ``"1,2,3.5"``."""
    try:
        if "," in text:
            return [float(t) for t in text.split(",")]
        if ":" in text:
            lo, step, hi = (float(t) for t in text.split(":"))
            if step <= 0:
                raise ValueError
            n = int(np.floor((hi - lo) / step + 1e-9)) + 1
            return [round(lo + k * step, 10) for k in range(max(n, 0))]
        return [float(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None


def weights(text: str):
    vals = int_range(text)
    return vals[0] if len(vals) == 1 and "," not in text else tuple(vals)


_DERIVED_KEYS = {"tool", "version", "command", "window_bits"}


def _config_value(raw) -> str | None:
    """Render an artifact value back into the flag syntax; ``None`` means unset."""
    if isinstance(raw, str):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError:
            return raw
    if raw is None:
        return None
    if isinstance(raw, list):
        return ",".join(str(v) for v in raw)
    return str(raw)


def read_config(path: str) -> dict[str, str]:
    """``key=value`` lines with ``#`` comments, or a previous artifact.

    Artifacts are recognized by their embedded metadata: a JSON ``meta.config``
    block, or ``# key=value`` header lines starting with ``# tool=scldpc``.
    Keys match long option names.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_IO) from None
    pairs = []
    if text.lstrip().startswith("{"):
        try:
            pairs = list(json.loads(text)["meta"]["config"].items())
        except (json.JSONDecodeError, KeyError, TypeError):
            raise CliError(f"{path}: JSON without a meta.config block", EXIT_USAGE) from None
    elif text.startswith("# tool=scldpc"):
        for line in text.splitlines():
            if not line.startswith("# "):
                break
            key, _, value = line[2:].partition("=")
            pairs.append((key.strip(), value.strip()))
    else:
        for n, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"{path}:{n}: expected key=value", EXIT_USAGE)
            key, value = (t.strip() for t in line.split("=", 1))
            pairs.append((key, value))
    out = {}
    for key, raw in pairs:
        value = _config_value(raw)
        if key not in _DERIVED_KEYS and value is not None:
            out[key.replace("-", "_")] = value
    return out


def load_matrix(path: str) -> SymbolicMatrix:
    if path.startswith("corpus:"):
        try:
            return corpus.load(path.split(":", 1)[1])
        except KeyError as exc:
            raise CliError(str(exc), EXIT_IO) from None
    try:
        return read_matrix(path)
    except ParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_IO) from None
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from None


def resolved(args: argparse.Namespace) -> dict:
    skip = {"func", "config", "verbose", "output", "command"}
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(vars(args).items()) if k not in skip}


def meta(args: argparse.Namespace) -> dict:
    return {"tool": "scldpc", "version": __version__, "command": args.command,
            "config": resolved(args), "seed": getattr(args, "seed", None)}


def comment_header(args: argparse.Namespace) -> str:
    lines = [f"tool=scldpc", f"version={__version__}", f"command={args.command}"]
    lines += [f"{k}={json.dumps(v)}" for k, v in resolved(args).items()]
    return "".join(f"# {line}\n" for line in lines)


def emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from None


def emit_json(obj: dict, args) -> None:
    emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", getattr(args, "output", None))


def emit_csv(rows: list[dict], fields: list[str], args) -> None:
    buf = io.StringIO()
    buf.write(comment_header(args))
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    emit(buf.getvalue(), getattr(args, "output", None))


# -- subcommands -------------------------------------------------------------

def cmd_girth(args) -> int:
    h = load_matrix(args.input)
    g = cycles.girth(h, args.cap, modulus=args.modulus)
    out = {"meta": meta(args), "profile": profile(h, g).to_dict(), "girth": g}
    if args.modulus is None and args.spectrum_max:
        out["spectrum"] = {str(k): v for k, v in cycles.cycle_spectrum(h, args.spectrum_max).items()}
    emit_json(out, args)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    h = load_matrix(args.input)
    spec = cycles.cycle_spectrum(h, args.max)
    emit_json({"meta": meta(args), "spectrum": {str(k): v for k, v in spec.items()}}, args)
    return EXIT_OK


def cmd_bounds(args) -> int:
    if args.table is not None:
        if args.table != "table":
            raise CliError(f"unknown bounds action {args.table!r}", EXIT_USAGE)
        a_values = args.a if args.a else list(range(3, 32))
        rows = bounds.table_rows(a_values, c=args.c, w=args.w if isinstance(args.w, int) else 3)
        emit_csv(rows, list(rows[0].keys()), args)
        return EXIT_OK
    if not args.a or args.family is None or args.girth is None:
        raise CliError("bounds needs --family, --a and --girth (or the 'table' action)", EXIT_USAGE)
    try:
        q = bounds.BoundQuery(args.family, args.a[0], args.c, args.w, args.girth)
        res = bounds.bound(q)
    except bounds.NoBoundError as exc:
        emit_json({"meta": meta(args), "error": str(exc)}, args)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    emit_json({"meta": meta(args), "bound": res.to_dict()}, args)
    return EXIT_OK


def cmd_construct(args) -> int:
    try:
        h = construct.construct(args.family, args.a, args.k)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    emit(comment_header(args) + format_matrix(h), args.output)
    return EXIT_OK


def _spec_from_args(args, a=None) -> search.SearchSpec:
    return search.SearchSpec(
        representation=args.repr, a=args.a if a is None else a, c=args.c, w=args.w, g=args.girth,
        lo=args.lo, hi=args.hi, node_limit=args.node_limit, time_limit=args.time_limit,
        mode=args.mode, seed=args.seed, restarts=args.restarts)


def _run_search(spec: search.SearchSpec) -> search.SearchOutcome:
    if spec.mode == "heuristic":
        return search.heuristic_min_mh(spec)
    if spec.representation == "binary":
        return search.exhaustive_min_Lh(spec)
    return search.exhaustive_min_mh(spec)


def cmd_search(args) -> int:
    try:
        spec = _spec_from_args(args)
        outcome = _run_search(spec)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    out = {"meta": meta(args), "outcome": outcome.to_dict()}
    if outcome.witness is not None:
        out["profile"] = profile(outcome.witness).to_dict()
        if args.witness:
            emit(comment_header(args) + format_matrix(outcome.witness), args.witness)
    emit_json(out, args)
    return EXIT_OK if outcome.status == "found" else EXIT_INFEASIBLE


def cmd_sweep(args) -> int:
    rows = []
    failed = False
    for a in args.a:
        try:
            spec = _spec_from_args(args, a)
            if args.repr == "binary":
                b = bounds.bound(bounds.BoundQuery("typez", a, args.c, args.w, args.girth)).value
            else:
                b = search._symbolic_lower(spec)
            outcome = _run_search(spec)
        except (ValueError, bounds.NoBoundError) as exc:
            rows.append({"a": a, "bound": "", "searched_min": "", "gap": "", "status": f"error: {exc}",
                         "nodes": 0})
            failed = True
            continue
        found = outcome.status == "found"
        failed = failed or not found
        rows.append({"a": a, "bound": b, "searched_min": outcome.value if found else "",
                     "gap": outcome.value - b if found else "", "status": outcome.status,
                     "nodes": outcome.nodes})
    emit_csv(rows, ["a", "bound", "searched_min", "gap", "status", "nodes"], args)
    return EXIT_INFEASIBLE if failed else EXIT_OK


def cmd_space(args) -> int:
    try:
        size = search.search_space_size(args.repr, args.a, args.c, w=args.w, m_h=args.mh, L_h=args.Lh,
                                        variant=args.variant)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    emit_json({"meta": meta(args), "space": size.to_dict()}, args)
    return EXIT_OK


def cmd_minmax(args) -> int:
    h = load_matrix(args.input)
    try:
        p = h.exponents()
        res = equiv.minmax_reduce(p, args.modulus, budget=args.budget, restarts=args.restarts,
                                  seed=args.seed, threads=args.threads, node_limit=args.node_limit)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    body = res.to_dict()
    body.pop("wall_ms")
    body["input_m_h"] = int(p.max())
    out = {"meta": meta(args), "result": body}
    if args.matrix_out:
        emit(comment_header(args) + format_matrix(SymbolicMatrix.from_exponents(res.matrix)), args.matrix_out)
    emit_json(out, args)
    return EXIT_OK


def cmd_simulate(args) -> int:
    h = load_matrix(args.input)
    window = None if args.window in (None, 0) else args.window
    try:
        spec = simulate.SimulationSpec(
            code=h, blocks=args.blocks, ebno_db=tuple(args.ebno), window=window, iterations=args.iters,
            reset=args.reset, min_errors=args.min_errors, max_frames=args.max_frames, seed=args.seed,
            workers=args.threads)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None

    def progress(pt):
        log.info("Eb/N0 %.2f dB: %d errors / %d bits", pt.ebno_db, pt.errors, pt.bits)

    points = simulate.monte_carlo_ber(spec, progress)
    rows = [{"ebno_db": pt.ebno_db, "bits": pt.bits, "errors": pt.errors, "ber": f"{pt.ber:.6e}",
             "frames": pt.frames, "wall_ms": round(pt.wall_ms, 1)} for pt in points]
    args.window_bits = spec.window_bits
    emit_csv(rows, ["ebno_db", "bits", "errors", "ber", "frames", "wall_ms"], args)
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def _search_flags(p: argparse.ArgumentParser, a_type=int) -> None:
    p.add_argument("--repr", choices=("binary", "symbolic"), default="symbolic",
                   help="search over H_s^T (binary, minimizes L_h) or exponent matrices (symbolic, minimizes m_h)")
    p.add_argument("--a", type=a_type, required=True, help="number of columns")
    p.add_argument("--c", type=int, required=True, help="number of rows (checks per block)")
    p.add_argument("--w", type=int, required=True, help="column weight")
    p.add_argument("--girth", type=int, required=True, help="girth target")
    p.add_argument("--mode", choices=("exhaustive", "heuristic"), default="exhaustive")
    p.add_argument("--lo", type=int, help="first value to scan (default: the lower bound)")
    p.add_argument("--hi", type=int, help="last value to scan")
    p.add_argument("--node-limit", type=int, help="abort after this many search nodes")
    p.add_argument("--time-limit", type=float, help="abort after this many seconds")
    p.add_argument("--restarts", type=int, default=50, help="random restarts per level (heuristic)")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scldpc", description=__doc__.splitlines()[0], allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"scldpc {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    parser.add_argument("--config", help="key=value file providing defaults for the subcommand's options")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for parallel stages")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("girth", help="profile, girth and cycle spectrum of a matrix")
    p.add_argument("-i", "--input", required=True, help="matrix file, or corpus:<name>")
    p.add_argument("--cap", type=int, default=12, help="largest cycle length examined")
    p.add_argument("--modulus", type=int, help="girth of the quasi-cyclic code with this circulant size")
    p.add_argument("--spectrum-max", type=int, default=8, help="longest cycle counted (0 to skip)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_girth)

    p = sub.add_parser("spectrum", help="cycle counts per length")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--max", type=int, default=10)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bounds", help="lower bound on m_h or L_h; 'bounds table' prints a CSV")
    p.add_argument("table", nargs="?", help="'table' for the CSV over a range of a")
    p.add_argument("--family", choices=bounds.FAMILIES)
    p.add_argument("--a", type=int_range, help="block length, or a range for the table")
    p.add_argument("--c", type=int, default=3)
    p.add_argument("--w", type=weights, default=3, help="column weight or comma-separated profile")
    p.add_argument("--girth", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", help="bound versus searched minimum over a range of a (CSV)")
    _search_flags(p, a_type=int_range)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("construct", help="emit an explicit girth-6 construction")
    p.add_argument("--family", choices=construct.FAMILIES, required=True)
    p.add_argument("--a", type=int, required=True, help="block length (trinomial part for 'mixed')")
    p.add_argument("--k", type=int, help="monomial parameter for 'mixed'")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="exhaustive or heuristic minimum-memory search")
    _search_flags(p)
    p.add_argument("-o", "--witness", help="write the witness matrix here")
    p.add_argument("--json", dest="output", help="write the outcome JSON here instead of stdout")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("space", help="search-space sizes after each symmetry reduction")
    p.add_argument("--repr", choices=("binary", "symbolic"), required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--w", type=int)
    p.add_argument("--Lh", type=int)
    p.add_argument("--mh", type=int)
    p.add_argument("--variant", choices=("printed", "corrected"), default="printed")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_space)

    p = sub.add_parser("minmax", help="Min-Max reduction of a monomial exponent matrix")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--modulus", type=int, required=True, help="circulant size p of the input")
    p.add_argument("--budget", choices=equiv.BUDGETS, default="exact")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--node-limit", type=int, help="offset vectors per multiplier in exact mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-m", "--matrix-out", help="write the reduced matrix here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_minmax)

    p = sub.add_parser("simulate", help="Monte Carlo BER over BPSK/AWGN (CSV)")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--ebno", type=float_grid, required=True, help="Eb/N0 grid in dB, start:step:stop")
    p.add_argument("--blocks", type=int, default=100, help="termination length T in blocks")
    p.add_argument("--window", type=int, help="window in blocks (omit or 0 for full BP)")
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--reset", type=int, default=0, help="reset messages every N slides (0 = never)")
    p.add_argument("--min-errors", type=int, default=100)
    p.add_argument("--max-frames", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    """Parse ``argv``; a ``--config`` file supplies subcommand defaults that flags override."""
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    command = next((t for t in rest if not t.startswith("-")), None)
    choices = parser._subparsers._group_actions[0].choices
    if not known.config or command not in choices:
        return parser.parse_args(argv)
    values = read_config(known.config)
    subparser = choices[command]
    by_dest = {a.dest: a for a in subparser._actions}
    defaults, defaults_top = {}, {}
    for key, raw in values.items():
        if key == "threads":
            defaults_top[key] = int(raw)
            continue
        if key not in by_dest:
            raise CliError(f"unknown config key {key!r} for {command}", EXIT_USAGE)
        action = by_dest[key]
        try:
            defaults[key] = action.type(raw) if action.type else raw
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise CliError(f"config key {key}: {exc}", EXIT_USAGE) from None
        action.required = False
    subparser.set_defaults(**defaults)
    parser.set_defaults(**defaults_top)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except CliError as exc:
        print(f"scldpc: {exc}", file=sys.stderr)
        return exc.code
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
