"""Finite-capacity energy accounting for simulated devices.

An :class:`EnergySource` holds joules at a fixed DC voltage and is drained
by attached :class:`DeviceEnergyModel` instances, each drawing a set
current. Integration is exact over piecewise-constant currents: current
changes only via ``set_current``, so advancing the clock multiplies power
by elapsed time with no sampling error. An optional constant-rate
:class:`Harvester` replenishes the source, saturating at the initial
capacity.

When a step would overdraw the source, the depletion instant is found by
linear interpolation inside the step, remaining energy clamps to zero, and
attached devices draw nothing from then on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class UndefinedEfficiencyError(ValueError):
    """Raised when efficiency is requested for non-positive consumed energy."""


@dataclass(frozen=True)
class Harvester:
    """Constant-power replenishment source, watts. A deliberate stub;
    time-varying harvest profiles belong in a subclass or future extension."""

    harvest_power_w: float = 0.0

    def __post_init__(self) -> None:
        if not (self.harvest_power_w >= 0.0 and math.isfinite(self.harvest_power_w)):
            raise ValueError(
                f"harvest_power_w must be >= 0, got {self.harvest_power_w!r}"
            )


@dataclass(frozen=True)
class AdvanceReport:
    """What happened during one integration step."""

    dt_s: float
    load_j: float             # energy delivered to attached devices
    harvested_j: float        # harvester energy absorbed (after saturation)
    delta_j: float            # signed change applied to remaining_j
    remaining_j: float
    depleted: bool
    depletion_time_s: float | None = None  # absolute instant, if hit this step


class EnergySource:
    """Energy reservoir with an attached-device load and optional harvester."""

    def __init__(self, initial_j: float, voltage_v: float, harvester: Harvester | None = None):
        if not (initial_j >= 0.0 and math.isfinite(initial_j)):
            raise ValueError(f"initial_j must be >= 0, got {initial_j!r}")
        if not (voltage_v > 0.0 and math.isfinite(voltage_v)):
            raise ValueError(f"voltage_v must be > 0, got {voltage_v!r}")
        self.initial_j = initial_j
        self.remaining_j = initial_j
        self.voltage_v = voltage_v
        self.harvester = harvester
        self.time_s = 0.0
        self.depletion_time_s: float | None = None  # first depletion instant
        self._models: list[DeviceEnergyModel] = []

    @property
    def depleted(self) -> bool:
        return self.remaining_j == 0.0

    @property
    def consumed_j(self) -> float:
        """Net energy drawn so far: initial minus remaining."""
        return self.initial_j - self.remaining_j

    def attach(self, model: DeviceEnergyModel) -> None:
        if model.source is not self:
            raise ValueError("model is bound to a different source")
        self._models.append(model)

    def load_power_w(self) -> float:
        """Instantaneous device load; zero while the source is depleted."""
        if self.depleted:
            return 0.0
        return sum(self.voltage_v * m.current_a for m in self._models)

    def advance(self, dt_s: float) -> AdvanceReport:
        """Integrate consumption and harvesting over dt_s seconds.

        Remaining energy moves by (harvest - load) * dt, clamped to
        [0, initial_j]. If the load empties the source mid-step, the load
        is dropped for the rest of the step while harvesting continues.
        """
        if not (dt_s > 0.0 and math.isfinite(dt_s)):
            raise ValueError(f"dt_s must be > 0, got {dt_s!r}")

        p_load = self.load_power_w()
        p_harvest = self.harvester.harvest_power_w if self.harvester else 0.0
        net_w = p_load - p_harvest  # positive discharges
        start_j = self.remaining_j
        depletion_time: float | None = None

        if net_w > 0.0 and start_j <= net_w * dt_s:
            tau = start_j / net_w  # seconds into the step when the source empties
            depletion_time = self.time_s + tau
            load_j = p_load * tau
            harvested_j = p_harvest * tau
            refill_j = min(p_harvest * (dt_s - tau), self.initial_j)
            self.remaining_j = refill_j
            harvested_j += refill_j
            if self.depletion_time_s is None:
                self.depletion_time_s = depletion_time
        else:
            load_j = p_load * dt_s
            offered_j = p_harvest * dt_s
            new_remaining = start_j - net_w * dt_s
            if new_remaining > self.initial_j:
                harvested_j = offered_j - (new_remaining - self.initial_j)
                new_remaining = self.initial_j
            else:
                harvested_j = offered_j
            self.remaining_j = new_remaining

        self.time_s += dt_s
        return AdvanceReport(
            dt_s=dt_s,
            load_j=load_j,
            harvested_j=harvested_j,
            delta_j=self.remaining_j - start_j,
            remaining_j=self.remaining_j,
            depleted=self.depleted,
            depletion_time_s=depletion_time,
        )

    def snapshot(self) -> dict:
        """State snapshot with the documented flat keys."""
        return {
            "initial_j": self.initial_j,
            "remaining_j": self.remaining_j,
            "voltage_v": self.voltage_v,
            "depleted": self.depleted,
        }


class DeviceEnergyModel:
    """Constant-current drain bound to exactly one energy source."""

    def __init__(self, source: EnergySource, current_a: float = 0.0):
        self.source = source
        self.current_a = 0.0
        source.attach(self)
        self.set_current(current_a)

    def set_current(self, amps: float) -> None:
        """Change the draw; takes effect for all subsequent advances."""
        if not (amps >= 0.0 and math.isfinite(amps)):
            raise ValueError(f"current must be >= 0, got {amps!r}")
        self.current_a = amps


def energy_efficiency(total_bits: float, consumed_j: float) -> float:
    """Delivered bits per joule, in kilobits per joule.

    Zero bits over positive energy is a legitimate zero; non-positive
    consumed energy makes the ratio undefined and raises instead.
    """
    if total_bits < 0.0:
        raise ValueError(f"total_bits must be >= 0, got {total_bits!r}")
    if not consumed_j > 0.0:
        raise UndefinedEfficiencyError(
            f"efficiency undefined for consumed_j={consumed_j!r}"
        )
    return (total_bits / 1000.0) / consumed_j
