"""Wall-clock comparison of the two field engines across signal sizes.

Times full decompositions of the bundled rational test signal on the
standard radius grid, one warm-up per cell discarded, median over repeats
as the reported statistic. Absolute seconds are machine-specific and never
asserted anywhere; what the harness is for are the fitted log-log slopes
(quadratic growth of the direct engine against the near-linear transform
engine) and per-size ratios.

Runs are single-threaded with the default engines; the optional
"fft-parallel" engine label times the threaded field path instead.
"""

from __future__ import annotations

import platform
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import core, signals

__all__ = ["BenchRow", "BenchReport", "run_benchmark", "fit_scaling"]

CSV_HEADER = "engine,N,M,terms,repeat,seconds"

_ENGINE_CONFIGS = {
    "fft": {"engine": "fft"},
    "direct": {"engine": "direct"},
    "fft-parallel": {"engine": "fft", "parallel": True},
}


@dataclass(frozen=True)
class BenchRow:
    engine: str
    n_samples: int
    radius_count: int
    terms: int
    repeat_index: int
    wall_seconds: float


@dataclass
class BenchReport:
    rows: list
    environment: dict = field(default_factory=dict)

    def engines(self):
        seen = []
        for row in self.rows:
            if row.engine not in seen:
                seen.append(row.engine)
        return seen

    def medians(self, engine):
        """Median wall seconds per size for one engine, as {N: seconds}."""
        per_size = {}
        for row in self.rows:
            if row.engine == engine:
                per_size.setdefault(row.n_samples, []).append(row.wall_seconds)
        return {n: float(np.median(ts)) for n, ts in sorted(per_size.items())}

    def summary(self):
        """Medians and fitted slopes per engine, JSON-ready."""
        engines = {}
        for engine in self.engines():
            medians = self.medians(engine)
            try:
                slope = fit_scaling(self, engine)
            except ValueError:
                slope = None
            engines[engine] = {
                "median_seconds": {str(n): t for n, t in medians.items()},
                "slope": slope,
            }
        return {"environment": dict(self.environment), "engines": engines}

    def to_csv(self, path):
        lines = [CSV_HEADER]
        for row in self.rows:
            lines.append("%s,%d,%d,%d,%d,%.17g" % (
                row.engine, row.n_samples, row.radius_count, row.terms,
                row.repeat_index, row.wall_seconds))
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path):
        rows = []
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != CSV_HEADER:
                raise ValueError("bad benchmark header %r in %s" % (header, path))
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                engine, n, m, terms, repeat, seconds = line.split(",")
                rows.append(BenchRow(engine, int(n), int(m), int(terms),
                                     int(repeat), float(seconds)))
        return cls(rows)


def _cpu_model():
    try:
        with open("/proc/cpuinfo", "r", encoding="utf-8") as fh:
            for line in fh:
                if line.lower().startswith("model name"):
                    return line.split(":", 1)[1].strip()
    except OSError:
        pass
    return platform.processor() or platform.machine() or "unknown"


def _environment():
    return {
        "cpu": _cpu_model(),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "python": platform.python_version(),
        "numpy": np.__version__,
    }


def run_benchmark(sizes, radius_count=9, terms=10, repeats=6,
                  engines=("fft", "direct")):
    """Time decompose() for every (size, engine) cell.

    Parameters
    ----------
    sizes : iterable of int
        Signal lengths, powers of two >= 8.
    radius_count : int
        Grid radii, evenly spaced on [0, 0.8]; 9 reproduces the standard
        0, 0.1, ..., 0.8 layout.
    terms : int
        Decomposition steps per timed run.
    repeats : int
        Timed repetitions per cell (after one discarded warm-up).
    engines : iterable of str
        Any of "fft", "direct", "fft-parallel".

    Returns
    -------
    BenchReport
    """
    sizes = [int(n) for n in sizes]
    for n in sizes:
        if n < 8 or n & (n - 1):
            raise ValueError("benchmark size must be a power of two >= 8, got %d" % n)
    if not sizes:
        raise ValueError("need at least one size")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    if radius_count < 1:
        raise ValueError("radius_count must be >= 1")
    engines = list(engines)
    for engine in engines:
        if engine not in _ENGINE_CONFIGS:
            raise ValueError("unknown engine label %r" % (engine,))

    rows = []
    for n in sizes:
        g = signals.synth_f1(n)
        radii = np.linspace(0.0, 0.8, radius_count) if radius_count > 1 else [0.0]
        grid = core.ParameterGrid(tuple(radii), n)
        for engine in engines:
            kwargs = dict(_ENGINE_CONFIGS[engine])
            core.decompose(g, grid, max_terms=terms, dc_first=True, **kwargs)
            for repeat in range(repeats):
                start = time.perf_counter()
                core.decompose(g, grid, max_terms=terms, dc_first=True, **kwargs)
                elapsed = time.perf_counter() - start
                rows.append(BenchRow(engine, n, radius_count, terms, repeat,
                                     elapsed))
    return BenchReport(rows, _environment())


def fit_scaling(report, engine):
    """Least-squares slope of log(median seconds) against log(N).

    Needs at least three distinct sizes for the engine; the direct engine
    trends toward 2, the transform engine stays near 1 plus log-factor
    drift.
    """
    medians = report.medians(engine)
    if len(medians) < 3:
        raise ValueError("need >= 3 distinct sizes to fit a slope, have %d"
                         % len(medians))
    ns = np.array(sorted(medians))
    ts = np.array([medians[n] for n in ns])
    slope, _ = np.polyfit(np.log(ns), np.log(ts), 1)
    return float(slope)
