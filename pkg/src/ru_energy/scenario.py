"""Desk-scale two-cell scenario harness.

RU nodes sit on a line, each with a hardware profile, a power state, and a
finite energy source. UEs move between the cells at constant speed,
bouncing off the segment ends, and re-attach to the nearest RU at periodic
handover instants. Traffic is an on/off source per UE (peak rate times a
deterministic square wave); delivered bits are counted per serving RU.

There is no radio channel model: attachment is nearest-RU and delivered
bits do not depend on transmit power. Energy, by contrast, follows the
power model exactly: between events every rate is constant, so the run is
a time-ordered sweep over segments with exact integration, and results are
fully deterministic.

A sleeping RU delivers no traffic. A depleted RU stops drawing energy but
keeps serving traffic; the traffic abstraction is deliberately decoupled
from the energy ledger so delivered bits stay constant across a Tx-power
sweep.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace

from ru_energy.energy_ledger import DeviceEnergyModel, EnergySource
from ru_energy.power_model import (
    Active,
    RuHardwareProfile,
    RuState,
    Standby,
    ru_current,
)


class ScenarioError(ValueError):
    """Invalid scenario configuration."""


@dataclass(frozen=True)
class SleepWindow:
    """Standby window [start_s, end_s) for one RU."""

    ru_index: int
    start_s: float
    end_s: float


@dataclass(frozen=True)
class ScenarioConfig:
    """Two-cell scenario inputs; defaults reproduce the reference setup:
    30 s, 2 RUs 50 m apart, 4 UEs at 1.5 m/s, handover every 15 s, 10 Mbps
    peak on/off traffic, and a 100 kJ source per RU."""

    sim_time_s: float = 30.0
    enb_count: int = 2
    ue_count: int = 4
    ue_speed_mps: float = 1.5
    handover_interval_s: float = 15.0
    enb_spacing_m: float = 50.0
    traffic_peak_bps: float = 10_000_000.0
    traffic_duty_cycle: float = 0.5
    traffic_period_s: float = 1.0
    handover_gap_s: float = 0.0
    initial_energy_j: float = 100_000.0
    sleep_schedule: tuple[SleepWindow, ...] = ()

    def __post_init__(self) -> None:
        if not (self.sim_time_s > 0.0 and math.isfinite(self.sim_time_s)):
            raise ScenarioError(f"sim_time_s must be > 0, got {self.sim_time_s!r}")
        if self.enb_count < 1:
            raise ScenarioError(f"enb_count must be >= 1, got {self.enb_count!r}")
        if self.ue_count < 0:
            raise ScenarioError(f"ue_count must be >= 0, got {self.ue_count!r}")
        if self.ue_speed_mps < 0.0:
            raise ScenarioError(f"ue_speed_mps must be >= 0, got {self.ue_speed_mps!r}")
        if not self.handover_interval_s > 0.0:
            raise ScenarioError(
                f"handover_interval_s must be > 0, got {self.handover_interval_s!r}"
            )
        if not self.enb_spacing_m > 0.0:
            raise ScenarioError(f"enb_spacing_m must be > 0, got {self.enb_spacing_m!r}")
        if self.traffic_peak_bps < 0.0:
            raise ScenarioError(
                f"traffic_peak_bps must be >= 0, got {self.traffic_peak_bps!r}"
            )
        if not (0.0 < self.traffic_duty_cycle <= 1.0):
            raise ScenarioError(
                f"traffic_duty_cycle must be in (0, 1], got {self.traffic_duty_cycle!r}"
            )
        if not self.traffic_period_s > 0.0:
            raise ScenarioError(
                f"traffic_period_s must be > 0, got {self.traffic_period_s!r}"
            )
        if self.handover_gap_s < 0.0:
            raise ScenarioError(f"handover_gap_s must be >= 0, got {self.handover_gap_s!r}")
        if not self.initial_energy_j > 0.0:
            raise ScenarioError(
                f"initial_energy_j must be > 0, got {self.initial_energy_j!r}"
            )
        if not isinstance(self.sleep_schedule, tuple):
            object.__setattr__(self, "sleep_schedule", tuple(self.sleep_schedule))
        for w in self.sleep_schedule:
            if not (0 <= w.ru_index < self.enb_count):
                raise ScenarioError(f"sleep window names unknown RU {w.ru_index!r}")
            if not (0.0 <= w.start_s < w.end_s <= self.sim_time_s):
                raise ScenarioError(
                    f"sleep window [{w.start_s!r}, {w.end_s!r}] outside the run"
                )

    @property
    def span_m(self) -> float:
        """Length of the segment the UEs move on."""
        return (self.enb_count - 1) * self.enb_spacing_m


@dataclass(frozen=True)
class UeNode:
    index: int
    position_m: float
    velocity_mps: float
    serving_ru: int


@dataclass
class RuNode:
    """One RU instance inside a run: position, live state, energy ledger."""

    index: int
    position_m: float
    profile: RuHardwareProfile
    source: EnergySource
    model: DeviceEnergyModel
    state: RuState | None = None


@dataclass(frozen=True)
class StateSegment:
    start_s: float
    end_s: float
    state: RuState


@dataclass(frozen=True)
class HandoverEvent:
    time_s: float
    ue_index: int
    from_ru: int
    to_ru: int


@dataclass(frozen=True)
class SimEvent:
    """One event-log row: state change, handover, or source depletion."""

    time_s: float
    event_type: str
    ru_index: int | None
    ue_index: int | None
    detail: str


@dataclass(frozen=True)
class ScenarioResult:
    p_tx_dbm: float
    per_ru_consumed_j: tuple[float, ...]
    per_ru_delivered_bits: tuple[float, ...]
    total_consumed_j: float
    total_bits: float
    events: tuple[SimEvent, ...]

    def to_doc(self) -> dict:
        return {
            "p_tx_dbm": self.p_tx_dbm,
            "per_ru_consumed_j": list(self.per_ru_consumed_j),
            "per_ru_delivered_bits": list(self.per_ru_delivered_bits),
            "total_consumed_j": self.total_consumed_j,
            "total_bits": self.total_bits,
            "events": [
                {
                    "time_s": e.time_s,
                    "event_type": e.event_type,
                    "ru_index": e.ru_index,
                    "ue_index": e.ue_index,
                    "detail": e.detail,
                }
                for e in self.events
            ],
        }

    def events_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["time_s", "event_type", "ru_index", "ue_index", "detail"])
        for e in self.events:
            writer.writerow(
                [
                    repr(e.time_s),
                    e.event_type,
                    "" if e.ru_index is None else e.ru_index,
                    "" if e.ue_index is None else e.ue_index,
                    e.detail,
                ]
            )
        return buf.getvalue()


# --------------------------------------------------------------------------
# Mobility and attachment
# --------------------------------------------------------------------------

def step_mobility(ue: UeNode, dt_s: float, span_m: float) -> UeNode:
    """Advance a UE by dt_s seconds, reflecting at 0 and span_m.

    The motion folds onto a triangle wave of period 2 * span_m, so a single
    step handles any number of bounces.
    """
    if dt_s < 0.0:
        raise ValueError(f"dt_s must be >= 0, got {dt_s!r}")
    if dt_s == 0.0 or ue.velocity_mps == 0.0:
        return ue
    if span_m <= 0.0:
        # Single-cell layouts have no segment to move on.
        return replace(ue, position_m=0.0)
    v = ue.velocity_mps
    m = (ue.position_m + v * dt_s) % (2.0 * span_m)
    # Landing exactly on a boundary: the next motion points away from it.
    if m == 0.0:
        return replace(ue, position_m=0.0, velocity_mps=abs(v))
    if m == span_m:
        return replace(ue, position_m=span_m, velocity_mps=-abs(v))
    if m < span_m:
        return replace(ue, position_m=m, velocity_mps=v)
    return replace(ue, position_m=2.0 * span_m - m, velocity_mps=-v)


def nearest_ru_index(position_m: float, config: ScenarioConfig) -> int:
    """Index of the closest RU; ties resolve to the lowest index."""
    return min(
        range(config.enb_count),
        key=lambda r: (abs(position_m - r * config.enb_spacing_m), r),
    )


def initial_ue_nodes(config: ScenarioConfig) -> list[UeNode]:
    """Deterministic starting layout: UEs evenly spaced across the segment
    with alternating velocity signs, attached to their nearest RU."""
    span = config.span_m
    ues = []
    for i in range(config.ue_count):
        if config.ue_count == 1:
            position = span / 2.0
        else:
            position = i * span / (config.ue_count - 1)
        velocity = config.ue_speed_mps if i % 2 == 0 else -config.ue_speed_mps
        ues.append(
            UeNode(
                index=i,
                position_m=position,
                velocity_mps=velocity,
                serving_ru=nearest_ru_index(position, config),
            )
        )
    return ues


def handover_instants(config: ScenarioConfig) -> list[float]:
    """Multiples of the handover interval strictly inside (0, sim_time)."""
    eps = 1e-9 * max(1.0, config.sim_time_s)
    instants = []
    k = 1
    while (t := k * config.handover_interval_s) < config.sim_time_s - eps:
        instants.append(t)
        k += 1
    return instants


def schedule_handovers(config: ScenarioConfig) -> list[HandoverEvent]:
    """Re-attachment events: at every handover instant each UE moves to its
    nearest RU; only actual changes of serving RU are reported."""
    ues = initial_ue_nodes(config)
    events: list[HandoverEvent] = []
    prev_t = 0.0
    for t in handover_instants(config):
        ues = [step_mobility(ue, t - prev_t, config.span_m) for ue in ues]
        prev_t = t
        for i, ue in enumerate(ues):
            target = nearest_ru_index(ue.position_m, config)
            if target != ue.serving_ru:
                events.append(
                    HandoverEvent(
                        time_s=t, ue_index=ue.index, from_ru=ue.serving_ru, to_ru=target
                    )
                )
                ues[i] = replace(ue, serving_ru=target)
    return events


# --------------------------------------------------------------------------
# Sleep schedule
# --------------------------------------------------------------------------

def sleep_timeline(
    windows: list[tuple[float, float]], sim_time_s: float, p_tx_dbm: float
) -> tuple[StateSegment, ...]:
    """Active/Standby segments covering [0, sim_time] for one RU.

    Windows must lie inside the run and must not overlap.
    """
    for start, end in windows:
        if not (0.0 <= start < end <= sim_time_s):
            raise ScenarioError(f"sleep window [{start!r}, {end!r}] outside the run")
    ordered = sorted(windows)
    for (_, prev_end), (start, _) in zip(ordered, ordered[1:]):
        if start < prev_end:
            raise ScenarioError(f"overlapping sleep windows at t={start!r}")
    active = Active(p_tx_dbm)
    segments: list[StateSegment] = []
    cursor = 0.0
    for start, end in ordered:
        if start > cursor:
            segments.append(StateSegment(cursor, start, active))
        segments.append(StateSegment(start, end, Standby()))
        cursor = end
    if cursor < sim_time_s:
        segments.append(StateSegment(cursor, sim_time_s, active))
    return tuple(segments)


def apply_sleep_schedule(
    ru: RuNode,
    windows: list[tuple[float, float]],
    sim_time_s: float,
    p_tx_dbm: float,
) -> tuple[StateSegment, ...]:
    """Install the sleep schedule on an RU node.

    Builds the state timeline, puts the node into its t=0 state, and sets
    the ledger current accordingly. Later boundaries are applied by the run
    loop, one set_current per transition.
    """
    timeline = sleep_timeline(windows, sim_time_s, p_tx_dbm)
    ru.state = timeline[0].state
    ru.model.set_current(ru_current(ru.profile, ru.state))
    return timeline


def _state_at(timeline: tuple[StateSegment, ...], t: float) -> RuState:
    for seg in timeline:
        if seg.start_s <= t < seg.end_s:
            return seg.state
    return timeline[-1].state


# --------------------------------------------------------------------------
# Run loop
# --------------------------------------------------------------------------

def _traffic_edges(config: ScenarioConfig) -> set[float]:
    edges: set[float] = set()
    period = config.traffic_period_s
    on_s = config.traffic_duty_cycle * period
    k = 0
    while (t := k * period) < config.sim_time_s:
        edges.add(t)
        if t + on_s < config.sim_time_s:
            edges.add(t + on_s)
        k += 1
    return edges


def _traffic_on(config: ScenarioConfig, t: float) -> bool:
    period = config.traffic_period_s
    frac = t - math.floor(t / period) * period
    return frac < config.traffic_duty_cycle * period


def run_scenario(
    config: ScenarioConfig, profile: RuHardwareProfile, p_tx_dbm: float
) -> ScenarioResult:
    """Run the two-cell scenario at a fixed per-chain transmit power.

    Deterministic: identical inputs give identical results. Depletion of an
    RU's source is not an error; it is logged at its interpolated instant
    and the RU draws nothing afterwards.
    """
    active_probe = Active(p_tx_dbm)  # validates p_tx up front
    del active_probe

    rus: list[RuNode] = []
    for i in range(config.enb_count):
        source = EnergySource(config.initial_energy_j, profile.v_dc)
        rus.append(
            RuNode(
                index=i,
                position_m=i * config.enb_spacing_m,
                profile=profile,
                source=source,
                model=DeviceEnergyModel(source),
            )
        )

    windows_by_ru: dict[int, list[tuple[float, float]]] = {i: [] for i in range(config.enb_count)}
    for w in config.sleep_schedule:
        windows_by_ru[w.ru_index].append((w.start_s, w.end_s))

    events: list[SimEvent] = []
    timelines = []
    for ru in rus:
        timeline = apply_sleep_schedule(ru, windows_by_ru[ru.index], config.sim_time_s, p_tx_dbm)
        timelines.append(timeline)
        events.append(_state_event(0.0, ru))

    handovers = schedule_handovers(config)
    ho_by_time: dict[float, list[HandoverEvent]] = {}
    for h in handovers:
        ho_by_time.setdefault(h.time_s, []).append(h)

    breakpoints = {0.0, config.sim_time_s}
    breakpoints |= _traffic_edges(config)
    for seg in (s for timeline in timelines for s in timeline):
        breakpoints.add(seg.start_s)
    for h in handovers:
        breakpoints.add(h.time_s)
        if config.handover_gap_s > 0.0 and h.time_s + config.handover_gap_s < config.sim_time_s:
            breakpoints.add(h.time_s + config.handover_gap_s)
    times = sorted(breakpoints)

    serving = [ue.serving_ru for ue in initial_ue_nodes(config)]
    blocked_until = [0.0] * config.ue_count
    per_ru_bits = [0.0] * config.enb_count

    for t0, t1 in zip(times, times[1:]):
        if t1 <= t0:
            continue
        for h in ho_by_time.get(t0, ()):
            serving[h.ue_index] = h.to_ru
            if config.handover_gap_s > 0.0:
                blocked_until[h.ue_index] = t0 + config.handover_gap_s
            events.append(
                SimEvent(t0, "handover", h.to_ru, h.ue_index, f"from_ru={h.from_ru} to_ru={h.to_ru}")
            )

        mid = (t0 + t1) / 2.0
        standby_now = [isinstance(_state_at(tl, mid), Standby) for tl in timelines]
        for ru, timeline in zip(rus, timelines):
            state = _state_at(timeline, mid)
            if state != ru.state:
                ru.state = state
                ru.model.set_current(ru_current(profile, state))
                events.append(_state_event(t0, ru))

        dt = t1 - t0
        for ru in rus:
            report = ru.source.advance(dt)
            if report.depletion_time_s is not None:
                events.append(
                    SimEvent(
                        report.depletion_time_s, "depleted", ru.index, None,
                        "energy source depleted",
                    )
                )

        if config.traffic_peak_bps > 0.0 and _traffic_on(config, mid):
            for ue_index in range(config.ue_count):
                if mid < blocked_until[ue_index]:
                    continue
                ru_index = serving[ue_index]
                if standby_now[ru_index]:
                    continue
                per_ru_bits[ru_index] += config.traffic_peak_bps * dt

    per_ru_consumed = [ru.source.consumed_j for ru in rus]
    return ScenarioResult(
        p_tx_dbm=p_tx_dbm,
        per_ru_consumed_j=tuple(per_ru_consumed),
        per_ru_delivered_bits=tuple(per_ru_bits),
        total_consumed_j=sum(per_ru_consumed),
        total_bits=sum(per_ru_bits),
        events=tuple(events),
    )


def _state_event(t: float, ru: RuNode) -> SimEvent:
    name = "standby" if isinstance(ru.state, Standby) else "active"
    return SimEvent(
        t, "state_change", ru.index, None, f"{name} current_a={ru.model.current_a!r}"
    )
