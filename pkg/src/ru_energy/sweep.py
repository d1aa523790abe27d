"""Tx-power sweep engine.

Runs the scenario once per grid point, collects consumed energy, delivered
bits, and efficiency per point, and attaches finite-difference gradients
(central differences inside the grid, one-sided at the ends). Grid points
are independent, so the sweep can fan out to a process pool; aggregation is
an ordered reduce and serial and parallel runs produce identical rows.

Rows where an energy source ran dry carry a ``depleted`` flag: their
consumed energy saturates at capacity, so shape checks (monotonicity,
convexity, gradient signs) only make sense on non-depleted rows.
"""

from __future__ import annotations

import datetime
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import ru_energy
from ru_energy.energy_ledger import UndefinedEfficiencyError, energy_efficiency
from ru_energy.power_model import RuHardwareProfile, reference_profile
from ru_energy.scenario import ScenarioConfig, ScenarioResult, run_scenario

CSV_HEADER = "p_tx_dbm,consumed_j,total_bits,efficiency_kbit_per_j,dE_dp,deta_dp"


@dataclass(frozen=True)
class SweepSpec:
    """Grid definition plus the scenario and profile to evaluate it on."""

    p_tx_start_dbm: float = 20.0
    p_tx_end_dbm: float = 49.0
    step_db: float = 1.0
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    profile: RuHardwareProfile = field(default_factory=reference_profile)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.p_tx_start_dbm) and math.isfinite(self.p_tx_end_dbm)):
            raise ValueError("sweep endpoints must be finite")
        if self.p_tx_start_dbm > self.p_tx_end_dbm:
            raise ValueError(
                f"p_tx_start_dbm ({self.p_tx_start_dbm!r}) must not exceed "
                f"p_tx_end_dbm ({self.p_tx_end_dbm!r})"
            )
        if not self.step_db > 0.0:
            raise ValueError(f"step_db must be > 0, got {self.step_db!r}")


@dataclass(frozen=True)
class SweepRow:
    p_tx_dbm: float
    consumed_j: float
    total_bits: float
    efficiency_kbit_per_j: float | None
    dE_dp: float | None
    deta_dp: float | None
    depleted: bool


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    peak_efficiency_point: tuple[float, float]  # (p_tx_dbm, kbit/J)
    metadata: dict


def sweep_grid(spec: SweepSpec) -> list[float]:
    """Grid points start, start+step, ...; the end point is included when
    the span is a whole number of steps (up to float tolerance)."""
    eps = 1e-9 * max(1.0, abs(spec.p_tx_end_dbm))
    points = []
    k = 0
    while (p := spec.p_tx_start_dbm + k * spec.step_db) <= spec.p_tx_end_dbm + eps:
        points.append(p)
        k += 1
    return points


def finite_difference(points: list[tuple[float, float]]) -> list[float]:
    """Per-point derivative estimates on an irregular grid.

    Central differences (y[i+1] - y[i-1]) / (x[i+1] - x[i-1]) at interior
    points, one-sided differences at the two ends. Needs at least two
    points with strictly increasing x.
    """
    if len(points) < 2:
        raise ValueError("insufficient data: need at least 2 points")
    xs = [x for x, _ in points]
    ys = [y for _, y in points]
    for a, b in zip(xs, xs[1:]):
        if not b > a:
            raise ValueError(f"x values must be strictly increasing, got {a!r} then {b!r}")
    n = len(points)
    out = [(ys[1] - ys[0]) / (xs[1] - xs[0])]
    for i in range(1, n - 1):
        out.append((ys[i + 1] - ys[i - 1]) / (xs[i + 1] - xs[i - 1]))
    out.append((ys[-1] - ys[-2]) / (xs[-1] - xs[-2]))
    return out


def peak_efficiency(rows: list[SweepRow] | tuple[SweepRow, ...]) -> tuple[float, float]:
    """Highest-efficiency point; ties go to the lowest transmit power."""
    best: SweepRow | None = None
    for row in rows:
        if row.efficiency_kbit_per_j is None:
            continue
        if best is None or row.efficiency_kbit_per_j > best.efficiency_kbit_per_j:
            best = row
    if best is None:
        raise UndefinedEfficiencyError("no row has a defined efficiency")
    return (best.p_tx_dbm, best.efficiency_kbit_per_j)


def _evaluate_point(args: tuple[ScenarioConfig, RuHardwareProfile, float]) -> ScenarioResult:
    config, profile, p_tx_dbm = args
    return run_scenario(config, profile, p_tx_dbm)


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Evaluate the whole grid and assemble rows, gradients, and the peak.

    workers > 1 evaluates grid points in a process pool; the result is
    identical to a serial run. Any scenario error aborts the sweep naming
    the offending grid point.
    """
    points = sweep_grid(spec)
    tasks = [(spec.scenario, spec.profile, p) for p in points]

    scenario_results: list[ScenarioResult] = []
    if workers is not None and workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_evaluate_point, task) for task in tasks]
            for p, future in zip(points, futures):
                try:
                    scenario_results.append(future.result())
                except ValueError as exc:
                    raise ValueError(f"sweep aborted at grid point {p!r} dBm: {exc}") from exc
    else:
        for p, task in zip(points, tasks):
            try:
                scenario_results.append(_evaluate_point(task))
            except ValueError as exc:
                raise ValueError(f"sweep aborted at grid point {p!r} dBm: {exc}") from exc

    consumed = [r.total_consumed_j for r in scenario_results]
    bits = [r.total_bits for r in scenario_results]
    efficiencies = [
        energy_efficiency(b, e) if e > 0.0 else None for b, e in zip(bits, consumed)
    ]
    depleted_flags = [
        any(ev.event_type == "depleted" for ev in r.events) for r in scenario_results
    ]

    if len(points) >= 2:
        d_consumed = finite_difference(list(zip(points, consumed)))
        if all(eff is not None for eff in efficiencies):
            d_eff = finite_difference(list(zip(points, efficiencies)))
        else:
            d_eff = [None] * len(points)
    else:
        d_consumed = [None]
        d_eff = [None]

    rows = tuple(
        SweepRow(
            p_tx_dbm=p,
            consumed_j=e,
            total_bits=b,
            efficiency_kbit_per_j=eff,
            dE_dp=de,
            deta_dp=deta,
            depleted=flag,
        )
        for p, e, b, eff, de, deta, flag in zip(
            points, consumed, bits, efficiencies, d_consumed, d_eff, depleted_flags
        )
    )

    metadata = {
        "p_tx_start_dbm": spec.p_tx_start_dbm,
        "p_tx_end_dbm": spec.p_tx_end_dbm,
        "step_db": spec.step_db,
        "grid_points": len(points),
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "tool_version": ru_energy.__version__,
    }
    return SweepResult(
        rows=rows,
        peak_efficiency_point=peak_efficiency(rows),
        metadata=metadata,
    )


def _cell(value: float | None) -> str:
    return "" if value is None else repr(value)


def emit_tables(result: SweepResult, fmt: str) -> str:
    """Serialize the sweep: 'csv' for the plot-ready table, 'doc' for a
    structured YAML document. Floats use shortest round-trip formatting."""
    if fmt == "csv":
        lines = [CSV_HEADER]
        for row in result.rows:
            lines.append(
                ",".join(
                    [
                        repr(row.p_tx_dbm),
                        repr(row.consumed_j),
                        repr(row.total_bits),
                        _cell(row.efficiency_kbit_per_j),
                        _cell(row.dE_dp),
                        _cell(row.deta_dp),
                    ]
                )
            )
        return "\n".join(lines) + "\n"
    if fmt == "doc":
        import yaml

        doc = {
            "rows": [
                {
                    "p_tx_dbm": row.p_tx_dbm,
                    "consumed_j": row.consumed_j,
                    "total_bits": row.total_bits,
                    "efficiency_kbit_per_j": row.efficiency_kbit_per_j,
                    "dE_dp": row.dE_dp,
                    "deta_dp": row.deta_dp,
                    "depleted": row.depleted,
                }
                for row in result.rows
            ],
            "peak_efficiency_point": {
                "p_tx_dbm": result.peak_efficiency_point[0],
                "efficiency_kbit_per_j": result.peak_efficiency_point[1],
            },
            "metadata": result.metadata,
        }
        return yaml.safe_dump(doc, sort_keys=False)
    raise ValueError(f"unknown format {fmt!r}; supported formats: csv, doc")
