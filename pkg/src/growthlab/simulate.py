"""Two-track scenario engine.

Runs a baseline economy (no research allocation, neutral technology) against
an identical economy diverting fixed factor fractions to research, and finds
the break-even period where the research track catches up.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, asdict
from typing import Sequence

from .model_core import ModelParams, output_dynamic, split_factor, technology_a3

TRAJECTORY_COLUMNS = ["t", "y_base", "y_rd", "effectiveness", "A_rd", "L_rd", "K_rd", "H"]


@dataclass(frozen=True)
class DriverRule:
    """Linear per-period driver: value(t) = initial + increment * (t - 1)."""

    initial: float
    increment: float

    def value(self, t: int) -> float:
        return self.initial + self.increment * (t - 1)


@dataclass(frozen=True)
class ScenarioConfig:
    periods: int
    drivers: dict[str, DriverRule]  # keys: P, L, K, H
    phi_labor: float
    phi_capital: float
    mode: str = "linear"
    params: ModelParams = field(default_factory=ModelParams)

    def __post_init__(self) -> None:
        if self.periods < 1:
            raise ValueError(f"periods must be >= 1, got {self.periods}")
        missing = {"P", "L", "K", "H"} - set(self.drivers)
        if missing:
            raise ValueError(f"missing driver rules: {sorted(missing)}")
        for name, phi in (("phi_labor", self.phi_labor), ("phi_capital", self.phi_capital)):
            if not 0.0 <= phi < 1.0:
                raise ValueError(f"{name} must be in [0, 1), got {phi}")
        if self.mode not in ("linear", "cobb-douglas"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class TrajectoryPoint:
    t: int
    y_base: float
    y_rd: float
    effectiveness: float
    A_rd: float
    L_rd: float  # production labor on the research track, after the split
    K_rd: float  # production capital on the research track, after the split
    H: float


# Sample-data preset: unit drivers growing one per period, human capital
# creeping up by 0.002 per period, 4% of capital and 0.025% of labor
# diverted to research. Reproduces the shipped 26-row golden trajectory.
PRESETS: dict[str, ScenarioConfig] = {
    "appendix7": ScenarioConfig(
        periods=69,
        drivers={
            "P": DriverRule(1.0, 1.0),
            "L": DriverRule(1.0, 1.0),
            "K": DriverRule(1.0, 1.0),
            "H": DriverRule(1.0, 0.002),
        },
        phi_labor=0.00025,
        phi_capital=0.04,
        mode="linear",
    )
}


def run_scenario(config: ScenarioConfig) -> list[TrajectoryPoint]:
    """Compute both tracks period by period. Deterministic given the config."""
    points = []
    for t in range(1, config.periods + 1):
        p = config.drivers["P"].value(t)
        labor = config.drivers["L"].value(t)
        capital = config.drivers["K"].value(t)
        h = config.drivers["H"].value(t)
        try:
            y_base = output_dynamic(
                0.0, labor, capital, h, 0.0, 0.0, config.params.alpha, config.mode
            )
            y_rd = output_dynamic(
                p, labor, capital, h,
                config.phi_labor, config.phi_capital,
                config.params.alpha, config.mode,
            )
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"period {t}: {exc}") from exc
        if y_base == 0.0:
            raise ValueError(f"period {t}: baseline output is zero")
        labor_split = split_factor(labor, config.phi_labor)
        capital_split = split_factor(capital, config.phi_capital)
        if config.mode == "linear":
            a_rd = 1.0 + p * labor_split.research * capital_split.research / labor
        else:
            a_rd = technology_a3(
                p, labor_split.research, capital_split.research, h, labor
            )
        points.append(
            TrajectoryPoint(
                t=t,
                y_base=y_base,
                y_rd=y_rd,
                effectiveness=y_rd / y_base,
                A_rd=a_rd,
                L_rd=labor_split.production,
                K_rd=capital_split.production,
                H=h,
            )
        )
    return points


def effectiveness_series(trajectory: Sequence[TrajectoryPoint]) -> list[tuple[int, float]]:
    if not trajectory:
        raise ValueError("trajectory is empty")
    return [(pt.t, pt.effectiveness) for pt in trajectory]


def find_breakeven(trajectory: Sequence[TrajectoryPoint]) -> int | None:
    """First period with effectiveness >= 1 after at least one deficit period.

    Returns None when the research track never falls behind or never recovers.
    """
    if not trajectory:
        raise ValueError("trajectory is empty")
    seen_deficit = False
    for pt in trajectory:
        if pt.effectiveness >= 1.0 and seen_deficit:
            return pt.t
        if pt.effectiveness < 1.0:
            seen_deficit = True
    return None


def export_trajectory(trajectory: Sequence[TrajectoryPoint], fmt: str = "csv") -> str:
    """Serialize a trajectory to CSV (with header) or a JSON array of objects."""
    if not trajectory:
        raise ValueError("trajectory is empty")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRAJECTORY_COLUMNS)
        for pt in trajectory:
            writer.writerow([getattr(pt, col) for col in TRAJECTORY_COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([asdict(pt) for pt in trajectory], indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")


def parse_trajectory_csv(content: str) -> list[TrajectoryPoint]:
    reader = csv.DictReader(io.StringIO(content))
    points = []
    for row in reader:
        points.append(
            TrajectoryPoint(
                t=int(row["t"]),
                **{col: float(row[col]) for col in TRAJECTORY_COLUMNS[1:]},
            )
        )
    return points


def scenario_from_dict(doc: dict) -> ScenarioConfig:
    """Build a config from a parsed scenario document.

    Expected keys: periods, drivers.{P,L,K,H}.{initial,increment}, phi_L,
    phi_K, mode, and optionally alpha/delta/g.
    """
    problems = []
    for key in ("periods", "drivers", "phi_L", "phi_K"):
        if key not in doc:
            problems.append(f"missing key {key!r}")
    drivers = {}
    for name in ("P", "L", "K", "H"):
        rule = doc.get("drivers", {}).get(name)
        if rule is None:
            problems.append(f"missing driver {name!r}")
            continue
        try:
            drivers[name] = DriverRule(float(rule["initial"]), float(rule["increment"]))
        except (KeyError, TypeError, ValueError) as exc:
            problems.append(f"driver {name!r}: {exc}")
    if problems:
        raise ValueError("invalid scenario config: " + "; ".join(problems))
    params = ModelParams(
        alpha=float(doc.get("alpha", 0.3333)),
        delta=float(doc.get("delta", 0.02)),
        g=float(doc.get("g", 0.03)),
    )
    return ScenarioConfig(
        periods=int(doc["periods"]),
        drivers=drivers,
        phi_labor=float(doc["phi_L"]),
        phi_capital=float(doc["phi_K"]),
        mode=doc.get("mode", "linear"),
        params=params,
    )


def load_scenario(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))
