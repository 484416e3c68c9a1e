"""Command line front end: CSV signals in, JSON decompositions out.

Four subcommands. `synth` writes one of the bundled generators to a signal
CSV, `decompose` runs the greedy decomposition and persists the step list
plus the per-term relative-error trace as JSON, `reconstruct` rebuilds a
partial sum from such a document, and `bench` times the engines.

JSON output is byte-deterministic for identical inputs: keys are emitted in
a fixed order and every float is serialized with 17 significant digits,
which round-trips double precision exactly.

The decompose default pins the first atom at a = 0 (the mean term), so the
error trace starts at 1.0 for zero-mean inputs and adaptive selection begins
at step 2; pass --no-dc-first for a fully greedy first step.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench, core, signals

__all__ = ["run_command", "main"]

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# deterministic JSON


def _emit(value, indent):
    pad = "  " * indent
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ",\n".join(
            "%s  %s: %s" % (pad, json.dumps(str(k)), _emit(v, indent + 1))
            for k, v in value.items())
        return "{\n%s\n%s}" % (inner, pad)
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return "[" + ", ".join(_emit(v, indent) for v in value) + "]"
        inner = ",\n".join("%s  %s" % (pad, _emit(v, indent + 1)) for v in value)
        return "[\n%s\n%s]" % (inner, pad)
    raise TypeError("cannot serialize %r" % type(value))


def dumps_document(doc):
    return _emit(doc, 0) + "\n"


# ---------------------------------------------------------------------------
# decomposition documents


def document_from_decomposition(d, errors, dc_first):
    steps = []
    for k, step in enumerate(d.steps, start=1):
        steps.append({
            "k": k,
            "a_radius": float(step.point.radius),
            "a_angle_index": int(step.point.angle_index),
            "a_re": float(step.point.value.real),
            "a_im": float(step.point.value.imag),
            "coeff_re": float(step.coefficient.real),
            "coeff_im": float(step.coefficient.imag),
            "residual_energy": float(step.residual_energy),
        })
    return {
        "schema_version": SCHEMA_VERSION,
        "n_samples": int(d.n_samples),
        "engine": d.engine,
        "dc_first": bool(dc_first),
        "grid": {
            "radii": [float(r) for r in d.grid.radii],
            "angular_count": int(d.grid.angular_count),
        },
        "steps": steps,
        "relative_errors": [float(e) for e in errors],
    }


def _require(doc, key, kind):
    if key not in doc:
        raise ValueError("document is missing %r" % key)
    value = doc[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ValueError("document field %r has the wrong type" % key)
    return value


def decomposition_from_document(doc):
    """Validate a parsed document and rebuild the Decomposition.

    Checks the invariants the file format promises: schema version, shape
    consistency, finite values, poles inside the disc, and a non-increasing
    residual-energy column.
    """
    if _require(doc, "schema_version", int) != SCHEMA_VERSION:
        raise ValueError("unsupported schema_version %r" % doc["schema_version"])
    n = _require(doc, "n_samples", int)
    engine = _require(doc, "engine", str)
    grid_doc = _require(doc, "grid", dict)
    grid = core.ParameterGrid(tuple(float(r) for r in _require(grid_doc, "radii", list)),
                              _require(grid_doc, "angular_count", int))
    if grid.angular_count != n:
        raise ValueError("grid angular_count %d does not match n_samples %d"
                         % (grid.angular_count, n))
    raw_steps = _require(doc, "steps", list)
    errors = [float(e) for e in _require(doc, "relative_errors", list)]
    if len(errors) != len(raw_steps):
        raise ValueError("relative_errors length %d does not match %d steps"
                         % (len(errors), len(raw_steps)))
    steps = []
    previous = None
    for i, raw in enumerate(raw_steps):
        if not isinstance(raw, dict):
            raise ValueError("step %d is not an object" % (i + 1,))
        if _require(raw, "k", int) != i + 1:
            raise ValueError("step %d has k=%r" % (i + 1, raw["k"]))
        numbers = [_require(raw, key, float) for key in
                   ("a_radius", "a_re", "a_im", "coeff_re", "coeff_im",
                    "residual_energy")]
        if not np.isfinite(numbers).all() or numbers[-1] < 0:
            raise ValueError("step %d has non-finite or negative entries" % (i + 1,))
        point = core.ParameterPoint(numbers[0], _require(raw, "a_angle_index", int),
                                    complex(numbers[1], numbers[2]))
        coeff = complex(numbers[3], numbers[4])
        residual = numbers[5]
        if previous is not None and residual > previous * (1 + 1e-9) + 1e-300:
            raise ValueError("residual_energy increases at step %d" % (i + 1,))
        previous = residual
        steps.append(core.DecompositionStep(point, coeff, residual))
    # Initial energy is not persisted; the prefix identity pins it whenever
    # at least one step exists, and reconstruction does not consume it.
    initial = abs(steps[0].coefficient) ** 2 + steps[0].residual_energy if steps else 0.0
    return core.Decomposition(tuple(steps), grid, n, initial, engine), errors


# ---------------------------------------------------------------------------
# argument parsing helpers


def _parse_radii(text):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("radius range must be START:STEP:END, got %r" % text)
        start, step, stop = (float(p) for p in parts)
        return core.radius_range(start, step, stop)
    return tuple(float(p) for p in text.split(","))


def _parse_int_list(text):
    return [int(p) for p in text.split(",")]


# ---------------------------------------------------------------------------
# subcommands


def _cmd_synth(args):
    spec = signals.SignalSpec(kind=args.kind, n_samples=args.samples,
                              seed=args.seed, degree=args.degree)
    g = spec.build()
    signals.save_signal_csv(args.output, g)
    extra = ""
    if args.kind == "random":
        extra = ", seed=%d, degree=%d" % (args.seed,
                                          args.degree if args.degree is not None
                                          else args.samples // 4)
    print("wrote %s: kind=%s, samples=%d%s" % (args.output, args.kind,
                                               args.samples, extra))
    return 0


def _cmd_decompose(args):
    g = signals.load_signal_csv(args.input)
    grid = core.ParameterGrid(_parse_radii(args.radii), g.shape[0])
    d = core.decompose(g, grid, max_terms=args.terms, threshold=args.threshold,
                       engine=args.engine, dc_first=args.dc_first,
                       parallel=args.parallel)
    errors = core.error_trace(d, g)
    doc = document_from_decomposition(d, errors, args.dc_first)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_document(doc))
    if errors:
        print("wrote %s: %d terms, final relative error %.6g"
              % (args.output, len(d.steps), errors[-1]))
    else:
        print("wrote %s: empty decomposition (zero-energy input)" % args.output)
    return 0


def _cmd_reconstruct(args):
    with open(args.input, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    d, errors = decomposition_from_document(doc)
    s = core.reconstruct(d, args.terms)
    signals.save_signal_csv(args.output, s)
    if args.emit_errors:
        lines = ["n,relative_error"]
        for i, e in enumerate(errors[:args.terms], start=1):
            lines.append("%d,%.17g" % (i, e))
        with open(args.emit_errors, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    print("wrote %s: partial sum over %d of %d terms"
          % (args.output, args.terms, len(d.steps)))
    return 0


def _cmd_bench(args):
    engines = [e.strip() for e in args.engines.split(",") if e.strip()]
    if args.parallel and "fft-parallel" not in engines:
        engines.append("fft-parallel")
    report = bench.run_benchmark(_parse_int_list(args.sizes), terms=args.terms,
                                 repeats=args.repeats, engines=engines)
    report.to_csv(args.output)
    summary = report.summary()
    summary_path = str(Path(args.output).with_suffix("")) + ".summary.json"
    with open(summary_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_document(summary))
    for engine, info in summary["engines"].items():
        slope = info["slope"]
        slope_text = "%.3f" % slope if slope is not None else "n/a"
        print("%s: slope=%s, medians=%s" % (
            engine, slope_text,
            " ".join("%s:%.4gs" % (n, t) for n, t in info["median_seconds"].items())))
    print("wrote %s and %s" % (args.output, summary_path))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fastafd",
        description="Greedy adaptive decomposition of sampled analytic signals.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a test signal CSV")
    p.add_argument("kind", choices=("f1", "f2", "random"))
    p.add_argument("--samples", type=int, required=True,
                   help="sample count, power of two >= 8")
    p.add_argument("--seed", type=int, default=0,
                   help="random stream seed (random kind only)")
    p.add_argument("--degree", type=int, default=None,
                   help="polynomial degree for the random kind (default N/4)")
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("decompose", help="run the greedy decomposition")
    p.add_argument("--input", required=True, help="signal CSV")
    p.add_argument("--terms", type=int, default=10)
    p.add_argument("--threshold", type=float, default=None,
                   help="stop once residual/initial energy falls this low")
    p.add_argument("--radii", default="0:0.1:0.8",
                   help="START:STEP:END range or comma list")
    p.add_argument("--engine", choices=("fft", "direct"), default="fft")
    p.add_argument("--output", required=True, help="decomposition JSON")
    p.add_argument("--parallel", action="store_true",
                   help="evaluate field rows in threads (AFD_THREADS caps workers)")
    p.add_argument("--dc-first", action=argparse.BooleanOptionalAction,
                   default=True,
                   help="pin the first atom at a=0 (the mean term)")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("reconstruct", help="rebuild a partial sum from JSON")
    p.add_argument("--input", required=True, help="decomposition JSON")
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--output", required=True, help="signal CSV for the partial sum")
    p.add_argument("--emit-errors", default=None,
                   help="also write the stored per-term relative errors as CSV")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("bench", help="time the engines across sizes")
    p.add_argument("--sizes", required=True, help="comma list of powers of two")
    p.add_argument("--terms", type=int, default=10)
    p.add_argument("--repeats", type=int, default=6)
    p.add_argument("--engines", default="fft,direct",
                   help="comma list from fft, direct, fft-parallel")
    p.add_argument("--parallel", action="store_true",
                   help="additionally time the threaded field path")
    p.add_argument("--output", required=True, help="timing rows CSV")
    p.set_defaults(func=_cmd_bench)
    return parser


def run_command(argv):
    """Parse argv and execute; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


def main(argv=None):
    return run_command(sys.argv[1:] if argv is None else list(argv))


if __name__ == "__main__":
    sys.exit(main())
