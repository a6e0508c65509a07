"""Command line front end.

Subcommands:
  run     execute a circuit, write a per-iteration trace and print a summary
  dump    write assembled operator matrices as JSON
  sample  measure the final state repeatedly and tabulate frequencies

Exit codes: 0 success, 2 bad configuration or input, 3 dense capacity
exceeded, 4 backend disagreement in --backend both mode.

Traces go to --output when given (summary to stdout), otherwise to stdout
(summary to stderr).  All floating point values are printed with 17
significant digits so they round-trip to the exact double.  Runs contain
no timestamps or environment state: identical configuration and seed
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import engine, fastgrover, linalg, operators
from .encoder import (
    MarkedSet,
    TruthTable,
    injective_extension,
    marked_set_from_table,
    permutation_operator,
    truth_table_from_json,
    truth_table_from_marked,
)
from .trace import SimulationTrace

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_MISMATCH = 4

SCHEMA_ID = "qgatesim-trace/1"
BACKEND_AGREE_ATOL = 1e-10


class ConfigError(ValueError):
    pass


class BackendMismatch(Exception):
    pass


def _fmt(x) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------- config


def _parse_marked(text: str, n: int | None) -> frozenset[str]:
    labels = frozenset(piece.strip() for piece in text.split(",") if piece.strip())
    if not labels:
        raise ConfigError("--marked is empty")
    widths = {len(x) for x in labels}
    if len(widths) != 1:
        raise ConfigError(f"--marked labels have mixed widths: {sorted(labels)}")
    if n is not None and widths != {n}:
        raise ConfigError(f"--marked labels are {widths.pop()}-bit but --n is {n}")
    return labels


def _load_table(path: str) -> TruthTable:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read table file {path}: {exc}") from exc
    try:
        return truth_table_from_json(text)
    except (ValueError, json.JSONDecodeError) as exc:
        raise ConfigError(f"bad truth table in {path}: {exc}") from exc


def _resolve_function(args) -> tuple[int, TruthTable | None, frozenset[str] | None]:
    """Combine --n / --marked / --table into (n, table, marked labels).

    The table is None when the oracle came from --marked alone; it is
    materialized later, behind the dense capacity check, so that large-n
    collapsed runs never enumerate 2^n rows.
    """
    if args.table is None and args.marked is None:
        raise ConfigError("need an oracle: pass --marked and/or --table")

    table = _load_table(args.table) if args.table is not None else None
    if table is not None and args.n is not None and args.n != table.n:
        raise ConfigError(f"--n {args.n} conflicts with table n = {table.n}")
    n = args.n if args.n is not None else (table.n if table is not None else None)

    inline = _parse_marked(args.marked, n) if args.marked is not None else None
    if n is None:
        n = len(next(iter(inline)))
    if n < 1:
        raise ConfigError("n must be >= 1")

    if table is not None and inline is not None:
        # both sources given: they must agree, never silently override
        if table.m != 1:
            raise ConfigError("--marked conflicts with a table whose m != 1")
        from_table = marked_set_from_table(table).elements
        if from_table != inline:
            raise ConfigError(
                f"--marked {sorted(inline)} conflicts with table marked set "
                f"{sorted(from_table)}"
            )

    if table is None:
        MarkedSet(n=n, elements=inline)  # validate labels without enumerating rows
        return n, None, inline
    if table.m != 1:
        raise ConfigError(f"circuits use a single ancilla; table has m = {table.m}")

    marked = frozenset(x for x, fx in table.rows.items() if fx == "1")
    return n, table, marked if marked else None


def _algorithm(args) -> operators.Algorithm:
    return operators.Algorithm(args.algorithm)


def _build_assembly(args, n, table, marked, iterations, max_dim) -> operators.GateAssembly:
    # capacity gate first: materializing a 2^n-row table for an
    # over-capacity n must fail fast, not enumerate
    linalg.check_capacity(2 ** (n + 1), max_dim)
    if table is None:
        table = truth_table_from_marked(MarkedSet(n=n, elements=marked))
    oracle = permutation_operator(injective_extension(table))
    return operators.assemble(_algorithm(args), n, oracle, iterations=iterations, max_dim=max_dim)


def _resolve_iterations(args, n, marked) -> int | str:
    req = args.iterations
    if req == "entropy-stop":
        return req
    if req == "optimal":
        if _algorithm(args) is operators.Algorithm.DEUTSCH_JOZSA:
            return 1
        if not marked or len(marked) >= 2**n:
            raise ConfigError("optimal iteration count needs a proper nonempty marked set")
        return engine.optimal_iterations(n, len(marked))
    try:
        k = int(req)
    except ValueError:
        raise ConfigError(
            f"--iterations must be an integer, 'optimal' or 'entropy-stop', got {req!r}"
        ) from None
    if k < 1:
        raise ConfigError(f"--iterations must be >= 1, got {k}")
    return k


# ------------------------------------------------------------- trace I/O


def _basis_labels(width: int) -> list[str]:
    return [format(i, f"0{width}b") for i in range(2**width)]


def _csv_text(trace: SimulationTrace, per_basis: bool) -> str:
    header = ["iteration", "p_marked", "entropy_bits"]
    if per_basis:
        header += [f"p_{b}" for b in _basis_labels(trace.n + trace.m)]
    lines = [",".join(header)]
    for rec in trace.records:
        row = [str(rec.iteration), _fmt(rec.p_marked), _fmt(rec.entropy_bits)]
        if per_basis:
            row += [_fmt(p) for p in rec.probabilities]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _json_text(
    trace: SimulationTrace,
    *,
    seed,
    requested,
    per_basis: bool,
    amplitudes: bool,
    summary: dict | None,
    extra_meta: dict | None = None,
) -> str:
    # built only on demand: 2^(n+m) labels are unreasonable for large n
    labels = _basis_labels(trace.n + trace.m) if (per_basis or amplitudes) else None
    meta = {
        "backend": trace.backend,
        "algorithm": trace.algorithm,
        "n": trace.n,
        "m": trace.m,
        "marked": sorted(trace.marked) if trace.marked is not None else None,
        "iterations": trace.iterations,
        "requested_iterations": str(requested),
        "seed": seed,
        "rng": engine.RNG_ALGORITHM,
    }
    meta.update(trace.metadata)
    if extra_meta:
        meta.update(extra_meta)
    records = []
    for rec in trace.records:
        row = {
            "iteration": rec.iteration,
            "p_marked": float(rec.p_marked),
            "entropy_bits": float(rec.entropy_bits),
        }
        if per_basis:
            row["probabilities"] = {labels[i]: float(p) for i, p in enumerate(rec.probabilities)}
        if amplitudes:
            row["amplitudes"] = {
                labels[i]: [float(a.real), float(a.imag)] for i, a in enumerate(rec.amplitudes)
            }
        records.append(row)
    doc = {"schema": SCHEMA_ID, "metadata": meta, "records": records}
    if summary is not None:
        doc["summary"] = summary
    return json.dumps(doc, indent=2) + "\n"


def _emit(text: str, output: str | None) -> bool:
    """Write the payload; returns True when the summary must go to stderr."""
    if output:
        Path(output).write_text(text, encoding="utf-8")
        return False
    sys.stdout.write(text)
    return True


def _print_summary(summary: dict, to_stderr: bool) -> None:
    stream = sys.stderr if to_stderr else sys.stdout
    print(" ".join(f"{k}={v}" for k, v in summary.items()), file=stream)


# ------------------------------------------------------------------ run


def _answer_bits(trace: SimulationTrace, record_index: int) -> str:
    rec = trace.records[record_index]
    n, m = trace.n, trace.m
    if rec.probabilities is not None:
        marginal = np.asarray(rec.probabilities).reshape(2**n, 2**m).sum(axis=1)
        return format(int(np.argmax(marginal)), f"0{n}b")
    if trace.marked:
        # all marked labels share one amplitude, all unmarked another
        M = len(trace.marked)
        p_each_marked = rec.p_marked / M
        unmarked = 2**n - M
        p_each_unmarked = (1.0 - rec.p_marked) / unmarked if unmarked else 0.0
        if p_each_marked >= p_each_unmarked:
            return min(trace.marked)
        return min(set(_basis_labels(n)) - set(trace.marked))
    return "unknown"


def _compare_backends(dense: SimulationTrace, collapsed: SimulationTrace) -> dict:
    by_iter = {rec.iteration: rec for rec in collapsed.records}
    dev_p = dev_s = 0.0
    worst = None
    for rec in dense.records:
        other = by_iter.get(rec.iteration)
        if other is None:
            continue
        dp = abs(rec.p_marked - other.p_marked)
        ds = abs(rec.entropy_bits - other.entropy_bits)
        if max(dp, ds) > max(dev_p, dev_s):
            worst = (rec.iteration, rec.p_marked, other.p_marked, rec.entropy_bits, other.entropy_bits)
        dev_p, dev_s = max(dev_p, dp), max(dev_s, ds)
    if max(dev_p, dev_s) > BACKEND_AGREE_ATOL:
        k, pd, pc, sd, sc = worst
        raise BackendMismatch(
            f"backends disagree beyond {BACKEND_AGREE_ATOL} at iteration {k}: "
            f"p_marked dense={_fmt(pd)} collapsed={_fmt(pc)}, "
            f"entropy_bits dense={_fmt(sd)} collapsed={_fmt(sc)}"
        )
    return {"max_dev_p_marked": _fmt(dev_p), "max_dev_entropy_bits": _fmt(dev_s)}


def cmd_run(args) -> int:
    n, table, marked = _resolve_function(args)
    algorithm = _algorithm(args)

    if args.backend in ("collapsed", "both"):
        if algorithm is not operators.Algorithm.GROVER:
            raise ConfigError("the collapsed backend only runs Grover searches")
        if not marked:
            raise ConfigError("the collapsed backend needs a nonempty marked set")
    if args.per_basis or args.amplitudes:
        if args.backend == "collapsed":
            raise ConfigError("per-basis and amplitude records need the dense backend")
        if n + 1 > engine.VECTOR_RECORD_MAX_QUBITS:
            raise ConfigError(
                f"per-basis and amplitude records are capped at "
                f"{engine.VECTOR_RECORD_MAX_QUBITS} total qubits"
            )
    if args.amplitudes and args.format != "json":
        raise ConfigError("--amplitudes requires --format json")

    requested = _resolve_iterations(args, n, marked)
    # tracked subspace: the marked labels for Grover, the all-zeros
    # register (the constant-f indicator) for Deutsch-Jozsa
    tracked = sorted(marked) if marked else None
    if algorithm is operators.Algorithm.DEUTSCH_JOZSA:
        tracked = ["0" * n]
    M = len(marked) if marked else 0

    dense_trace = collapsed_trace = None
    stop = None
    extra_meta: dict = {}

    if args.backend in ("dense", "both"):
        assembly = _build_assembly(
            args, n, table, marked, 1 if requested == "entropy-stop" else requested, args.dense_cap
        )
        if requested == "entropy-stop":
            dense_trace, stop = engine.run_entropy_stop(
                assembly,
                marked=tracked,
                window=args.window,
                max_iterations=args.max_iterations,
            )
        else:
            dense_trace = engine.run(assembly, requested, marked=tracked)

    if args.backend in ("collapsed", "both"):
        if args.backend == "both":
            k = dense_trace.iterations
            if k > fastgrover.MAX_FULL_RECORD_ITERATIONS:
                raise ConfigError("too many iterations for a both-mode comparison")
            collapsed_trace = fastgrover.collapsed_trace(
                n, M, k, record="all", marked_labels=tracked
            )
        elif requested == "entropy-stop":
            collapsed_trace, stop = fastgrover.collapsed_entropy_stop(
                n,
                M,
                window=args.window,
                max_iterations=args.max_iterations,
                marked_labels=tracked,
            )
        else:
            collapsed_trace = fastgrover.collapsed_trace(n, M, requested, marked_labels=tracked)

    if args.backend == "both":
        extra_meta = _compare_backends(dense_trace, collapsed_trace)
        extra_meta["backend"] = "both"

    trace = dense_trace if dense_trace is not None else collapsed_trace

    answer_at = stop if stop is not None else len(trace.records) - 1
    rec = trace.records[answer_at]
    summary = {"answer": _answer_bits(trace, answer_at)}
    if algorithm is operators.Algorithm.DEUTSCH_JOZSA:
        summary["decision"] = "constant" if rec.p_marked >= 0.5 else "balanced"
    summary["p_marked"] = _fmt(rec.p_marked)
    summary["iterations"] = rec.iteration
    summary["entropy_bits"] = _fmt(rec.entropy_bits)
    if requested == "entropy-stop":
        summary["stop_iteration"] = stop if stop is not None else "none"
    summary.update({k: v for k, v in extra_meta.items() if k != "backend"})

    if args.format == "csv":
        text = _csv_text(trace, args.per_basis)
    else:
        json_summary = dict(summary)
        json_summary["iterations"] = int(json_summary["iterations"])
        text = _json_text(
            trace,
            seed=args.seed,
            requested=requested,
            per_basis=args.per_basis,
            amplitudes=args.amplitudes,
            summary=json_summary,
            extra_meta=extra_meta,
        )
    to_stderr = _emit(text, args.output)
    _print_summary(summary, to_stderr)
    return EXIT_OK


# ----------------------------------------------------------------- dump


def _matrix_entries(mat: np.ndarray) -> dict:
    return {
        "dim": int(mat.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in mat],
    }


def cmd_dump(args) -> int:
    n, table, marked = _resolve_function(args)
    iterations = args.iterations
    if iterations is None and _algorithm(args) is operators.Algorithm.GROVER and not marked:
        iterations = 1
    assembly = _build_assembly(args, n, table, marked, iterations, args.dense_cap)

    builders = {
        "uf": lambda: assembly.entanglement_dense(args.dense_cap),
        "superposition": lambda: assembly.superposition,
        "interference": lambda: assembly.interference,
        "gate": lambda: assembly.gate(args.dense_cap),
        "diffusion": lambda: operators.diffusion(n, args.dense_cap),
    }
    wanted = list(builders) if args.operator == "all" else [args.operator]
    doc = {
        "n": n,
        "m": 1,
        "algorithm": args.algorithm,
        "iterations": assembly.h + 1,
        "operators": {name: _matrix_entries(builders[name]()) for name in wanted},
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_OK


# --------------------------------------------------------------- sample


def cmd_sample(args) -> int:
    n, table, marked = _resolve_function(args)
    requested = _resolve_iterations(args, n, marked)
    if requested == "entropy-stop":
        raise ConfigError("sample needs a concrete iteration count (integer or 'optimal')")

    assembly = _build_assembly(args, n, table, marked, requested, args.dense_cap)
    trace = engine.run(assembly, requested, record_vectors=True)
    state = trace.final.amplitudes
    counts = engine.sample_counts(state, args.shots, rng=args.seed)

    answers: dict[str, int] = {}
    ancilla = {"0": 0, "1": 0}
    for raw, c in counts.items():
        answers[raw[:n]] = answers.get(raw[:n], 0) + c
        ancilla[raw[n]] += c

    if args.format == "json":
        doc = {
            "n": n,
            "iterations": requested,
            "shots": args.shots,
            "seed": args.seed,
            "rng": engine.RNG_ALGORITHM,
            "answers": {
                bits: {"count": c, "frequency": c / args.shots}
                for bits, c in sorted(answers.items())
            },
            "ancilla": {
                bit: {"count": c, "frequency": c / args.shots}
                for bit, c in sorted(ancilla.items())
            },
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
        return EXIT_OK

    lines = ["kind,bits,count,frequency"]
    for bits, c in sorted(answers.items()):
        lines.append(f"answer,{bits},{c},{_fmt(c / args.shots)}")
    for bit, c in sorted(ancilla.items()):
        lines.append(f"ancilla,{bit},{c},{_fmt(c / args.shots)}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# ----------------------------------------------------------------- main


def _add_function_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=None, help="computational qubits")
    p.add_argument(
        "--marked",
        default=None,
        help="comma-separated marked labels, e.g. 011 or 011,101",
    )
    p.add_argument("--table", default=None, help="truth table JSON file")
    p.add_argument(
        "--algorithm",
        choices=["grover", "deutsch-jozsa"],
        default="grover",
    )
    p.add_argument(
        "--dense-cap",
        type=int,
        default=linalg.DEFAULT_MAX_DIM,
        help="largest dense dimension to allocate (default 2^14)",
    )
    p.add_argument("--output", default=None, help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgatesim",
        description="Gate-level simulation of quantum search circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a circuit and write its trace")
    _add_function_args(p_run)
    p_run.add_argument(
        "--iterations",
        default="optimal",
        help="integer, 'optimal' or 'entropy-stop' (default optimal)",
    )
    p_run.add_argument("--backend", choices=["dense", "collapsed", "both"], default="dense")
    p_run.add_argument("--seed", type=int, default=None, help="recorded in trace metadata")
    p_run.add_argument("--format", choices=["csv", "json"], default="csv")
    p_run.add_argument(
        "--per-basis", action="store_true", help="record per-basis probability columns"
    )
    p_run.add_argument(
        "--amplitudes", action="store_true", help="record amplitude vectors (JSON only)"
    )
    p_run.add_argument("--window", type=int, default=1, help="entropy-stop lookahead")
    p_run.add_argument(
        "--max-iterations", type=int, default=engine.DEFAULT_ENTROPY_STOP_CAP,
        help="entropy-stop iteration cap",
    )
    p_run.set_defaults(func=cmd_run)

    p_dump = sub.add_parser("dump", help="write operator matrices as JSON")
    _add_function_args(p_dump)
    p_dump.add_argument(
        "--operator",
        choices=["all", "uf", "superposition", "interference", "gate", "diffusion"],
        default="all",
    )
    p_dump.add_argument("--iterations", type=int, default=None, help="gate exponent override")
    p_dump.set_defaults(func=cmd_dump)

    p_sample = sub.add_parser("sample", help="sample measurements of the final state")
    _add_function_args(p_sample)
    p_sample.add_argument("--iterations", default="optimal")
    p_sample.add_argument("--shots", type=int, required=True)
    p_sample.add_argument("--seed", type=int, default=None)
    p_sample.add_argument("--format", choices=["csv", "json"], default="csv")
    p_sample.set_defaults(func=cmd_sample)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except linalg.CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except BackendMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
