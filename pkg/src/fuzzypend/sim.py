"""Closed-loop runs, peak-deviation metrics and controller comparison."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .controllers import Controller, resolve_controller
from .fis import format_float
from .plant import PlantParams, PlantState, StateLimits, check_limits, step

COLUMNS = ("t", "x", "x_dot", "theta", "theta_dot", "F_ctrl", "F_dist")
QUANTITIES = ("force", "theta", "theta_dot", "x", "x_dot")
_QUANTITY_COLUMN = {"force": "F_ctrl", "theta": "theta", "theta_dot": "theta_dot", "x": "x", "x_dot": "x_dot"}
UNITS = {"force": "N", "theta": "rad", "theta_dot": "rad/s", "x": "m", "x_dot": "m/s"}


class ConfigMismatch(ValueError):
    """Two runs cannot be compared because their experiments differ."""


# -- disturbance signals ---------------------------------------------------


@dataclass(frozen=True)
class Square:
    amplitude: float = 0.1
    period: float = 5.0
    phase: float = 0.0

    def __post_init__(self):
        if not (self.amplitude >= 0 and self.period > 0):
            raise ValueError("square signal needs amplitude >= 0 and period > 0")

    def __call__(self, t: float) -> float:
        return self.amplitude if (t - self.phase) % self.period < self.period / 2 else -self.amplitude


@dataclass(frozen=True)
class Sine:
    amplitude: float = 0.1
    frequency: float = 0.2
    phase: float = 0.0

    def __post_init__(self):
        if not (self.amplitude >= 0 and self.frequency > 0):
            raise ValueError("sine signal needs amplitude >= 0 and frequency > 0")

    def __call__(self, t: float) -> float:
        return self.amplitude * math.sin(2 * math.pi * self.frequency * t + self.phase)


@dataclass(frozen=True)
class Constant:
    value: float = 0.0

    def __call__(self, t: float) -> float:
        return self.value


@dataclass(frozen=True)
class Zero:
    def __call__(self, t: float) -> float:
        return 0.0


SignalSpec = Square | Sine | Constant | Zero


def signal_value(spec: SignalSpec, t: float) -> float:
    return float(spec(t))


def negated(spec: SignalSpec) -> SignalSpec:
    """The same waveform with opposite sign."""
    if isinstance(spec, Square):
        return Square(spec.amplitude, spec.period, spec.phase + spec.period / 2)
    if isinstance(spec, Sine):
        return Sine(spec.amplitude, spec.frequency, spec.phase + math.pi)
    if isinstance(spec, Constant):
        return Constant(-spec.value)
    return spec


def describe_signal(spec: SignalSpec) -> str:
    name = type(spec).__name__.lower()
    args = ", ".join(f"{k}={format_float(v)}" for k, v in asdict(spec).items())
    return f"{name}({args})"


# -- runs --------------------------------------------------------------------


@dataclass(frozen=True)
class SimConfig:
    controller: str = "mamdani"
    signal: SignalSpec = field(default_factory=Square)
    dt: float = 0.01
    duration: float = 10.0
    initial: PlantState = field(default_factory=PlantState)
    limits: StateLimits = field(default_factory=StateLimits)
    method: str = "rk4"
    params: PlantParams = field(default_factory=PlantParams)
    force_limit: float | None = None
    halt_on_violation: bool = False

    def __post_init__(self):
        if not 0 < self.dt < self.duration:
            raise ValueError(f"need 0 < dt < duration, got dt={self.dt}, duration={self.duration}")
        if self.force_limit is not None and not self.force_limit > 0:
            raise ValueError("force_limit must be > 0")

    @property
    def n_steps(self) -> int:
        return round(self.duration / self.dt)


@dataclass
class Trajectory:
    config: SimConfig
    data: np.ndarray  # rows of COLUMNS
    first_violation: tuple[float, tuple[str, ...]] | None = None

    def __len__(self) -> int:
        return self.data.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, COLUMNS.index(name)]

    @property
    def t(self) -> np.ndarray:
        return self.column("t")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(COLUMNS) + "\n")
        for row in self.data:
            buf.write(",".join(format_float(v) for v in row) + "\n")
        return buf.getvalue()

    def write_csv(self, path) -> None:
        Path(path).write_text(self.to_csv(), encoding="ascii", newline="\n")


def read_trajectory_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != COLUMNS:
            raise ValueError(f"{path}: expected header {','.join(COLUMNS)}")
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return np.array(rows, dtype=float)


def run_closed_loop(config: SimConfig, controller: Controller | None = None) -> Trajectory:
    """Simulate the plant under fuzzy control plus an additive disturbance force.

    The controller runs every step; controller and disturbance forces are held
    over the step. Limit violations are recorded, and only stop the run when
    ``halt_on_violation`` is set.
    """
    if controller is None:
        controller = resolve_controller(config.controller)
    n = config.n_steps
    data = np.zeros((n + 1, len(COLUMNS)))
    state = config.initial
    first_violation = None
    rows = n + 1
    for k in range(n + 1):
        t = round(k * config.dt, 12)
        f_ctrl = controller.force(state)
        if config.force_limit is not None:
            f_ctrl = min(max(f_ctrl, -config.force_limit), config.force_limit)
        f_dist = signal_value(config.signal, t)
        data[k] = (t, *state.as_tuple(), f_ctrl, f_dist)
        violated = check_limits(state, config.limits)
        if violated and first_violation is None:
            first_violation = (t, tuple(violated))
            if config.halt_on_violation:
                rows = k + 1
                break
        if k < n:
            state = step(state, f_ctrl + f_dist, t, config.dt, config.method, config.params)
    return Trajectory(config, data[:rows], first_violation)


# -- metrics -----------------------------------------------------------------


@dataclass(frozen=True)
class PeakMetric:
    quantity: str
    peak: float
    time: float
    side: str  # "positive" | "negative"

    def describe(self) -> str:
        return f"{self.quantity:<10} peak={format_float(self.peak)} {UNITS.get(self.quantity, '')} side={self.side} time={format_float(self.time)} s"


def peak_of(t: Sequence[float], values: Sequence[float], quantity: str) -> PeakMetric:
    """Largest magnitude; ties go to the earliest sample and zero counts as positive."""
    values = np.asarray(values, dtype=float)
    k = int(np.argmax(np.abs(values)))
    side = "negative" if values[k] < 0 else "positive"
    return PeakMetric(quantity, float(abs(values[k])), float(t[k]), side)


def extract_peaks(traj: Trajectory | np.ndarray) -> dict[str, PeakMetric]:
    data = traj.data if isinstance(traj, Trajectory) else np.asarray(traj)
    if data.shape[0] == 0:
        raise ValueError("empty trajectory")
    t = data[:, 0]
    return {q: peak_of(t, data[:, COLUMNS.index(_QUANTITY_COLUMN[q])], q) for q in QUANTITIES}


@dataclass(frozen=True)
class RunReport:
    label: str
    peaks: dict[str, PeakMetric]
    signal: SignalSpec | None = None
    dt: float | None = None
    duration: float | None = None

    @classmethod
    def from_trajectory(cls, label: str, traj: Trajectory) -> RunReport:
        cfg = traj.config
        return cls(label, extract_peaks(traj), cfg.signal, cfg.dt, cfg.duration)


@dataclass(frozen=True)
class ComparisonRow:
    quantity: str
    a: PeakMetric
    b: PeakMetric
    diff: float
    smaller: str  # label of the smaller peak, or "tie"


@dataclass(frozen=True)
class Comparison:
    label_a: str
    label_b: str
    rows: tuple[ComparisonRow, ...]
    winner: str  # smaller force peak, or "tie"

    def row(self, quantity: str) -> ComparisonRow:
        return next(r for r in self.rows if r.quantity == quantity)

    def to_text(self) -> str:
        header = ("quantity", f"peak[{self.label_a}]", f"peak[{self.label_b}]", "|diff|", "smaller")
        body = [
            (r.quantity, f"{r.a.peak:.6g} ({r.a.side[:3]} @ {r.a.time:g} s)",
             f"{r.b.peak:.6g} ({r.b.side[:3]} @ {r.b.time:g} s)", f"{r.diff:.6g}", r.smaller)
            for r in self.rows
        ]
        widths = [max(len(line[i]) for line in [header, *body]) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in [header, *body]]
        if self.winner == "tie":
            lines.append("winner: tie (equal force peaks)")
        else:
            lines.append(f"winner: {self.winner} (smaller force peak)")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        lines = ["quantity,peak_a,time_a,side_a,peak_b,time_b,side_b,diff"]
        for r in self.rows:
            lines.append(",".join([
                r.quantity, format_float(r.a.peak), format_float(r.a.time), r.a.side,
                format_float(r.b.peak), format_float(r.b.time), r.b.side, format_float(r.diff),
            ]))
        return "\n".join(lines) + "\n"


def compare(a: RunReport, b: RunReport) -> Comparison:
    """Per-quantity peak differences; the smaller force peak wins."""
    for attr in ("signal", "dt", "duration"):
        va, vb = getattr(a, attr), getattr(b, attr)
        if va != vb:
            raise ConfigMismatch(f"runs differ in {attr}: {va!r} vs {vb!r}")
    rows = []
    for q in QUANTITIES:
        pa, pb = a.peaks[q], b.peaks[q]
        if pa.peak < pb.peak:
            smaller = a.label
        elif pb.peak < pa.peak:
            smaller = b.label
        else:
            smaller = "tie"
        rows.append(ComparisonRow(q, pa, pb, abs(pa.peak - pb.peak), smaller))
    winner = rows[0].smaller
    return Comparison(a.label, b.label, tuple(rows), winner)
