"""Seeded experiment harness.

Sweep one axis (signal strength or ambient dimension), repeat sampling and
matching, aggregate losses, overlay the sharp theoretical rate, and emit a
stable CSV. Parameters are redrawn identically for each axis value from
``param_seed`` -- the sampler's draw order guarantees that only the swept
quantity changes -- and noise comes from independent streams keyed by
(axis index, repetition), so results never depend on scheduling.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .evaluation import mismatch_loss
from .matching import BASIS_SOURCES, laps_match, naive_match
from .model import ModelParams, make_signal_sweep_params, sample_pair
from .rng import make_generator, stream_generator
from .theory import minimax_rate_exp, separation_profile

__all__ = ["CSV_HEADER", "METHODS", "AXES", "SweepSpec", "SweepCell",
           "SweepResult", "params_for_value", "run_sweep"]

CSV_HEADER = ("axis,value,method,mean_loss,log10_mean_loss,stderr,"
              "theory_rate,reps,seed_param,seed_noise,wall_ms")
METHODS = ("laps", "naive")
AXES = ("signal", "p")


@dataclass(frozen=True)
class SweepSpec:
    """One experiment: a fixed base configuration and one swept axis.

    For axis="signal" the values are signal strengths and ``p`` fixes the
    ambient dimension; for axis="p" the values are ambient dimensions and
    ``signal`` fixes the strength.
    """

    n: int
    r: int
    axis: str
    values: tuple
    repetitions: int
    param_seed: int
    noise_seed: int
    sigma_x: float
    sigma_y: float
    p: int | None = None
    signal: float | None = None
    methods: tuple = METHODS
    basis_source: str = "x"

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValueError("values must be non-empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("values must be strictly increasing")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.n < 1 or self.r < 1:
            raise ValueError("n and r must be >= 1")
        if self.sigma_x < 0 or self.sigma_y < 0:
            raise ValueError("noise levels must be non-negative")
        methods = tuple(self.methods)
        if not methods or any(m not in METHODS for m in methods):
            raise ValueError(f"methods must be a non-empty subset of {METHODS}")
        if self.basis_source not in BASIS_SOURCES:
            raise ValueError(f"basis_source must be one of {BASIS_SOURCES}")
        if self.axis == "signal":
            if self.p is None:
                raise ValueError("axis='signal' needs the base ambient dimension p")
            if self.signal is not None:
                raise ValueError("axis='signal' sweeps the signal value; do not also fix one")
            if any(v <= 0 for v in values):
                raise ValueError("signal values must be positive")
            if self.r > min(self.n, self.p):
                raise ValueError(f"infeasible shape: r={self.r} > min(n={self.n}, p={self.p})")
        else:
            if self.signal is None:
                raise ValueError("axis='p' needs a fixed signal strength")
            if self.p is not None:
                raise ValueError("axis='p' sweeps p; do not also fix one")
            if self.signal <= 0:
                raise ValueError("signal must be positive")
            if any(v != int(v) or v < 1 for v in values):
                raise ValueError("p values must be positive integers")
            smallest = int(min(values))
            if self.r > min(self.n, smallest):
                raise ValueError(f"infeasible shape: r={self.r} > min(n={self.n}, p={smallest})")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "methods", methods)


@dataclass(frozen=True)
class SweepCell:
    """Aggregates for one (axis value, method) pair; ``losses`` keeps the
    per-repetition values in repetition order."""

    axis: str
    value: float
    method: str
    mean_loss: float
    log10_mean_loss: float
    stderr: float
    theory_rate: float
    mean_wall_ms: float
    losses: tuple


def _fmt_value(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    cells: tuple

    def to_csv(self) -> str:
        """Stable CSV; every column except wall_ms is a pure function of the
        spec (wall_ms is measured and varies run to run)."""
        lines = [CSV_HEADER]
        for cell in self.cells:
            lines.append(",".join((
                cell.axis,
                _fmt_value(cell.value),
                cell.method,
                repr(cell.mean_loss),
                repr(cell.log10_mean_loss),
                repr(cell.stderr),
                repr(cell.theory_rate),
                str(self.spec.repetitions),
                str(self.spec.param_seed),
                str(self.spec.noise_seed),
                repr(cell.mean_wall_ms),
            )))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())


def params_for_value(spec: SweepSpec, value: float) -> ModelParams:
    """Model parameters at one axis value.

    A fresh generator from ``param_seed`` plus the sampler's draw order keep
    everything except the swept quantity bit-identical across axis values.
    """
    rng = make_generator(spec.param_seed)
    if spec.axis == "signal":
        return make_signal_sweep_params(rng, spec.n, spec.p, spec.r, float(value),
                                        spec.sigma_x, spec.sigma_y)
    return make_signal_sweep_params(rng, spec.n, int(value), spec.r, float(spec.signal),
                                    spec.sigma_x, spec.sigma_y)


def _one_repetition(spec: SweepSpec, params: ModelParams, axis_index: int, rep: int):
    rng = stream_generator(spec.noise_seed, axis_index, rep)
    pair = sample_pair(rng, params)
    out = {}
    for method in spec.methods:
        start = time.perf_counter()
        if method == "laps":
            pi, _ = laps_match(pair.x, pair.y, spec.r, spec.basis_source)
        else:
            pi = naive_match(pair.x, pair.y)
        wall = time.perf_counter() - start
        out[method] = (mismatch_loss(pi, params.pi_star), wall)
    return out


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Run the sweep. Results are identical for any ``threads`` >= 1."""
    if threads < 1:
        raise ValueError("threads must be >= 1")
    cells = []
    for axis_index, value in enumerate(spec.values):
        params = params_for_value(spec, value)
        sigma_max = max(spec.sigma_x, spec.sigma_y)
        if sigma_max > 0:
            theory = minimax_rate_exp(separation_profile(params.u, params.d, sigma_max))
        else:
            theory = 0.0  # noiseless limit: separations are infinite in noise units
        reps = spec.repetitions
        if threads == 1:
            results = [_one_repetition(spec, params, axis_index, rep) for rep in range(reps)]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(
                    lambda rep: _one_repetition(spec, params, axis_index, rep),
                    range(reps)))
        for method in spec.methods:
            losses = np.array([res[method][0] for res in results])
            walls = np.array([res[method][1] for res in results])
            mean_loss = float(losses.mean())  # numpy pairwise sum, repetition order
            log10_mean = math.log10(mean_loss) if mean_loss > 0 else float("-inf")
            stderr = float(losses.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
            cells.append(SweepCell(
                axis=spec.axis, value=float(value), method=method,
                mean_loss=mean_loss, log10_mean_loss=log10_mean, stderr=stderr,
                theory_rate=theory, mean_wall_ms=float(walls.mean() * 1000.0),
                losses=tuple(losses.tolist()),
            ))
    return SweepResult(spec=spec, cells=tuple(cells))
