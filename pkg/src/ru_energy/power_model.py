"""Radio unit (RU) power and current model.

Pure, side-effect-free functions computing RU power draw from hardware
parameters: per-chain power amplifier consumption, fixed RF/baseband/mmWave
overheads, multiplicative supply and cooling loss factors, and a standby
mode. All power values are watts, currents amperes, voltages volts unless a
name says otherwise (``*_dbm``, ``*_db``). Transmit power is interpreted
per transceiver chain; total radiated power is ``n_trx * p_tx``.

Per-cell-class parameter presets (macro through mmWave small cell) are
built from the midpoints of published deployment ranges and can be checked
against those ranges with :func:`validate_profile_against_class`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class CellClass(Enum):
    """Deployment class of an RU, from wide-area macro down to femto."""

    MACRO = "macro"
    MICRO = "micro"
    PICO = "pico"
    FEMTO = "femto"
    MMWAVE_SMALL_CELL = "mmwave"


@dataclass(frozen=True)
class LossFactors:
    """Multiplicative loss fractions, each in [0, 1).

    delta_dc, delta_ms and delta_cool enter the active-power denominator as
    (1 - delta); delta_af is the antenna feeder loss applied inside the PA
    term. Store feeder loss as a linear fraction; convert a dB figure with
    :func:`db_loss_to_fraction`.
    """

    delta_dc: float = 0.0
    delta_ms: float = 0.0
    delta_cool: float = 0.0
    delta_af: float = 0.0

    def __post_init__(self) -> None:
        for name in ("delta_dc", "delta_ms", "delta_cool", "delta_af"):
            value = getattr(self, name)
            if not (0.0 <= value < 1.0) or not math.isfinite(value):
                raise ValueError(f"{name} must be in [0, 1), got {value!r}")

    @property
    def supply_divisor(self) -> float:
        """(1 - delta_dc)(1 - delta_ms)(1 - delta_cool); always in (0, 1]."""
        return (1.0 - self.delta_dc) * (1.0 - self.delta_ms) * (1.0 - self.delta_cool)


@dataclass(frozen=True)
class MmWaveBreakdown:
    """Component split of the mmWave processing overhead, in watts."""

    p_precoding: float
    p_routing: float
    p_calib: float

    def __post_init__(self) -> None:
        for name in ("p_precoding", "p_routing", "p_calib"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be a finite value >= 0, got {value!r}")

    @property
    def total_w(self) -> float:
        return self.p_precoding + self.p_routing + self.p_calib


@dataclass(frozen=True)
class RuHardwareProfile:
    """Hardware parameters of one RU.

    n_trx        number of transmit/receive chains
    eta_pa       power amplifier efficiency, in (0, 1]
    losses       supply/cooling/feeder loss fractions
    p_rf_w       RF transceiver consumption per chain, watts
    p_bb_w       baseband processing consumption per chain, watts
    p_mmwave_w   mmWave-specific processing per chain, watts (0 for sub-6 GHz)
    p_sleep_w    standby consumption per chain, watts; must stay below the
                 fixed active overhead p_rf_w + p_bb_w + p_mmwave_w
    v_dc         DC supply voltage, volts
    """

    cell_class: CellClass
    n_trx: int
    eta_pa: float
    losses: LossFactors
    p_rf_w: float
    p_bb_w: float
    p_mmwave_w: float
    p_sleep_w: float
    v_dc: float
    mmwave_breakdown: MmWaveBreakdown | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.cell_class, CellClass):
            raise ValueError(f"cell_class must be a CellClass, got {self.cell_class!r}")
        if not isinstance(self.n_trx, int) or self.n_trx < 1:
            raise ValueError(f"n_trx must be an integer >= 1, got {self.n_trx!r}")
        if not (0.0 < self.eta_pa <= 1.0):
            raise ValueError(f"eta_pa must be in (0, 1], got {self.eta_pa!r}")
        if not (self.v_dc > 0.0 and math.isfinite(self.v_dc)):
            raise ValueError(f"v_dc must be > 0, got {self.v_dc!r}")
        for name in ("p_rf_w", "p_bb_w", "p_mmwave_w", "p_sleep_w"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be a finite value >= 0, got {value!r}")
        overhead = self.p_rf_w + self.p_bb_w + self.p_mmwave_w
        # Sleep draw must stay below the fixed active overhead; the one
        # exception is the degenerate overhead-free profile with zero sleep.
        if not (self.p_sleep_w < overhead or self.p_sleep_w == overhead == 0.0):
            raise ValueError(
                f"p_sleep_w ({self.p_sleep_w!r}) must be below the fixed active "
                f"overhead p_rf_w + p_bb_w + p_mmwave_w ({overhead!r})"
            )
        if self.mmwave_breakdown is not None:
            total = self.mmwave_breakdown.total_w
            scale = max(abs(total), abs(self.p_mmwave_w), 1.0)
            if abs(total - self.p_mmwave_w) > 1e-12 * scale:
                raise ValueError(
                    f"p_mmwave_w ({self.p_mmwave_w!r}) does not match the "
                    f"breakdown sum ({total!r})"
                )


@dataclass(frozen=True)
class Active:
    """Transmitting state; carries the per-chain transmit power in dBm."""

    p_tx_dbm: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.p_tx_dbm):
            raise ValueError(f"p_tx_dbm must be finite, got {self.p_tx_dbm!r}")


@dataclass(frozen=True)
class Standby:
    """Sleep state: transmission chains disabled, minimal draw remains."""


RuState = Active | Standby

STANDBY = Standby()


# --------------------------------------------------------------------------
# Unit bridges
# --------------------------------------------------------------------------

def dbm_to_watts(p_dbm: float) -> float:
    """Convert a dBm power level to watts (30 dBm == 1 W)."""
    if not math.isfinite(p_dbm):
        raise ValueError(f"p_dbm must be finite, got {p_dbm!r}")
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_w: float) -> float:
    """Convert watts to dBm; requires p_w > 0."""
    if not (p_w > 0.0 and math.isfinite(p_w)):
        raise ValueError(f"p_w must be > 0, got {p_w!r}")
    return 10.0 * math.log10(p_w) + 30.0


def db_loss_to_fraction(loss_db: float) -> float:
    """Convert a loss stated in dB to the fraction of power lost, in [0, 1).

    3 dB of feeder loss means 10**(-0.3) of the power survives, so the lost
    fraction is 1 - 10**(-0.3) ~= 0.4988.
    """
    if not (loss_db >= 0.0 and math.isfinite(loss_db)):
        raise ValueError(f"loss_db must be >= 0, got {loss_db!r}")
    return 1.0 - 10.0 ** (-loss_db / 10.0)


def fraction_to_db_loss(fraction: float) -> float:
    """Inverse of :func:`db_loss_to_fraction`."""
    if not (0.0 <= fraction < 1.0):
        raise ValueError(f"fraction must be in [0, 1), got {fraction!r}")
    return -10.0 * math.log10(1.0 - fraction)


# --------------------------------------------------------------------------
# Power equations
# --------------------------------------------------------------------------

def pa_power(p_tx_w: float, eta_pa: float, delta_af: float = 0.0) -> float:
    """Power amplifier draw for one chain: p_tx / (eta_pa * (1 - delta_af)).

    The feeder term models cabling loss between amplifier and antenna;
    delta_af = 0 is the remote-radio-head case where the amplifier feeds
    the antenna directly.
    """
    if not (p_tx_w >= 0.0 and math.isfinite(p_tx_w)):
        raise ValueError(f"p_tx_w must be >= 0, got {p_tx_w!r}")
    if not (0.0 < eta_pa <= 1.0):
        raise ValueError(f"eta_pa must be in (0, 1], got {eta_pa!r}")
    if not (0.0 <= delta_af < 1.0):
        raise ValueError(f"delta_af must be in [0, 1), got {delta_af!r}")
    return p_tx_w / (eta_pa * (1.0 - delta_af))


def mmwave_overhead(breakdown: MmWaveBreakdown) -> float:
    """Total mmWave processing overhead: precoding + routing + calibration."""
    return breakdown.total_w


def fixed_overhead_p0(profile: RuHardwareProfile) -> float:
    """Fixed per-chain active overhead, independent of transmit power."""
    return profile.p_rf_w + profile.p_bb_w + profile.p_mmwave_w


def active_power(profile: RuHardwareProfile, p_tx_dbm: float) -> float:
    """Total RU draw in active mode at the given per-chain transmit power.

    n_trx * (P_PA + P0) / ((1 - delta_dc)(1 - delta_ms)(1 - delta_cool)),
    where P0 is the fixed overhead and P_PA the amplifier draw. Strictly
    increasing and strictly convex in p_tx_dbm.
    """
    p_pa = pa_power(dbm_to_watts(p_tx_dbm), profile.eta_pa, profile.losses.delta_af)
    return profile.n_trx * (p_pa + fixed_overhead_p0(profile)) / profile.losses.supply_divisor


def standby_power(profile: RuHardwareProfile) -> float:
    """Total RU draw in standby: n_trx * p_sleep_w."""
    return profile.n_trx * profile.p_sleep_w


def total_power(profile: RuHardwareProfile, state: RuState) -> float:
    """Dispatch on the RU state: active or standby draw in watts."""
    if isinstance(state, Active):
        return active_power(profile, state.p_tx_dbm)
    if isinstance(state, Standby):
        return standby_power(profile)
    raise TypeError(f"state must be Active or Standby, got {state!r}")


def ru_current(profile: RuHardwareProfile, state: RuState) -> float:
    """DC supply current in amperes: total power over the supply voltage."""
    return total_power(profile, state) / profile.v_dc


def peak_pa_output_dbm(p_tx_max_dbm: float, backoff_db: float) -> float:
    """Peak amplifier output: max transmit power plus the PAPR back-off margin."""
    if not (backoff_db >= 0.0 and math.isfinite(backoff_db)):
        raise ValueError(f"backoff_db must be >= 0, got {backoff_db!r}")
    return p_tx_max_dbm + backoff_db


# --------------------------------------------------------------------------
# Cell-class ranges and presets
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CellClassRanges:
    """Published min/max parameter envelope for one cell class.

    All entries are inclusive (min, max) pairs. Percentages are stored as
    fractions. Classes without mmWave hardware carry a (0, 0) mmWave range.
    """

    cell_class: CellClass
    p_tx_max_dbm: tuple[float, float]
    backoff_db: tuple[float, float]
    pa_peak_dbm: tuple[float, float]
    eta_pa: tuple[float, float]
    p_pa_w: tuple[float, float]
    p_rf_w: tuple[float, float]
    p_bb_w: tuple[float, float]
    p_mmwave_w: tuple[float, float]
    misc_overhead_frac: tuple[float, float]
    power_per_trx_w: tuple[float, float]
    n_antennas: tuple[int, int]
    n_trx: tuple[int, int]
    total_bs_power_kw: tuple[float, float]

    def __post_init__(self) -> None:
        for name in (
            "p_tx_max_dbm", "backoff_db", "pa_peak_dbm", "eta_pa", "p_pa_w",
            "p_rf_w", "p_bb_w", "p_mmwave_w", "misc_overhead_frac",
            "power_per_trx_w", "n_antennas", "n_trx", "total_bs_power_kw",
        ):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} range has min > max: ({lo!r}, {hi!r})")


_CLASS_RANGES: dict[CellClass, CellClassRanges] = {
    CellClass.MACRO: CellClassRanges(
        cell_class=CellClass.MACRO,
        p_tx_max_dbm=(43.0, 49.0),
        backoff_db=(9.0, 12.0),
        pa_peak_dbm=(58.0, 65.0),
        eta_pa=(0.25, 0.35),
        p_pa_w=(200.0, 400.0),
        p_rf_w=(30.0, 50.0),
        p_bb_w=(100.0, 200.0),
        p_mmwave_w=(0.0, 0.0),
        misc_overhead_frac=(0.10, 0.20),
        power_per_trx_w=(380.0, 750.0),
        n_antennas=(64, 256),
        n_trx=(16, 64),
        total_bs_power_kw=(6.0, 20.0),
    ),
    CellClass.MICRO: CellClassRanges(
        cell_class=CellClass.MICRO,
        p_tx_max_dbm=(38.0, 43.0),
        backoff_db=(9.0, 12.0),
        pa_peak_dbm=(50.0, 55.0),
        eta_pa=(0.30, 0.40),
        p_pa_w=(40.0, 100.0),
        p_rf_w=(20.0, 35.0),
        p_bb_w=(50.0, 100.0),
        p_mmwave_w=(0.0, 0.0),
        misc_overhead_frac=(0.10, 0.15),
        power_per_trx_w=(140.0, 295.0),
        n_antennas=(32, 128),
        n_trx=(8, 32),
        total_bs_power_kw=(1.0, 4.0),
    ),
    CellClass.PICO: CellClassRanges(
        cell_class=CellClass.PICO,
        p_tx_max_dbm=(30.0, 35.0),
        backoff_db=(8.0, 10.0),
        pa_peak_dbm=(38.0, 45.0),
        eta_pa=(0.35, 0.45),
        p_pa_w=(10.0, 30.0),
        p_rf_w=(8.0, 15.0),
        p_bb_w=(20.0, 40.0),
        p_mmwave_w=(0.0, 0.0),
        misc_overhead_frac=(0.08, 0.12),
        power_per_trx_w=(50.0, 105.0),
        n_antennas=(16, 64),
        n_trx=(4, 16),
        total_bs_power_kw=(0.2, 1.0),
    ),
    CellClass.FEMTO: CellClassRanges(
        cell_class=CellClass.FEMTO,
        p_tx_max_dbm=(20.0, 25.0),
        backoff_db=(6.0, 8.0),
        pa_peak_dbm=(26.0, 33.0),
        eta_pa=(0.40, 0.50),
        p_pa_w=(1.0, 5.0),
        p_rf_w=(2.0, 8.0),
        p_bb_w=(5.0, 15.0),
        p_mmwave_w=(0.0, 0.0),
        misc_overhead_frac=(0.05, 0.10),
        power_per_trx_w=(10.0, 30.0),
        n_antennas=(4, 16),
        n_trx=(2, 8),
        total_bs_power_kw=(0.02, 0.24),
    ),
    CellClass.MMWAVE_SMALL_CELL: CellClassRanges(
        cell_class=CellClass.MMWAVE_SMALL_CELL,
        p_tx_max_dbm=(20.0, 33.0),
        backoff_db=(8.0, 10.0),
        pa_peak_dbm=(30.0, 43.0),
        eta_pa=(0.25, 0.40),
        p_pa_w=(5.0, 25.0),
        p_rf_w=(10.0, 20.0),
        p_bb_w=(15.0, 50.0),
        p_mmwave_w=(20.0, 40.0),
        misc_overhead_frac=(0.10, 0.15),
        power_per_trx_w=(50.0, 135.0),
        n_antennas=(64, 256),
        n_trx=(16, 128),
        total_bs_power_kw=(1.0, 6.0),
    ),
}

# Typical loss fractions: DC-DC conversion 5-7% (midpoint used), mains
# supply 9%, active cooling 10% for macro sites and absent elsewhere.
_DELTA_DC_DEFAULT = 0.06
_DELTA_MS_DEFAULT = 0.09
_DELTA_COOL_MACRO = 0.10

DEFAULT_SUPPLY_VOLTAGE_V = 48.0

# Standby draw per chain defaults to 10% of the class's fixed overhead,
# keeping it an order of magnitude below active overhead as required.
_SLEEP_FRACTION_OF_P0 = 0.10

_MMWAVE_BREAKDOWN_DEFAULT = MmWaveBreakdown(p_precoding=15.0, p_routing=15.0, p_calib=10.0)


def class_ranges(cell_class: CellClass) -> CellClassRanges:
    """Published parameter envelope for the given cell class."""
    return _CLASS_RANGES[cell_class]


def _midpoint(bounds: tuple[float, float]) -> float:
    return (bounds[0] + bounds[1]) / 2.0


def builtin_profile(cell_class: CellClass, feeder_loss_db: float = 0.0) -> RuHardwareProfile:
    """Preset profile for a cell class, built from range midpoints.

    Integer fields round to the nearest integer. Feeder loss defaults to
    zero (remote radio head); pass feeder_loss_db=3.0 to model a classic
    3 dB antenna feeder run.
    """
    ranges = class_ranges(cell_class)
    is_mmwave = cell_class is CellClass.MMWAVE_SMALL_CELL
    breakdown = _MMWAVE_BREAKDOWN_DEFAULT if is_mmwave else None
    p_mmwave_w = breakdown.total_w if breakdown is not None else 0.0
    p_rf_w = _midpoint(ranges.p_rf_w)
    p_bb_w = _midpoint(ranges.p_bb_w)
    p0 = p_rf_w + p_bb_w + p_mmwave_w
    return RuHardwareProfile(
        cell_class=cell_class,
        n_trx=round(_midpoint(ranges.n_trx)),
        eta_pa=_midpoint(ranges.eta_pa),
        losses=LossFactors(
            delta_dc=_DELTA_DC_DEFAULT,
            delta_ms=_DELTA_MS_DEFAULT,
            delta_cool=_DELTA_COOL_MACRO if cell_class is CellClass.MACRO else 0.0,
            delta_af=db_loss_to_fraction(feeder_loss_db),
        ),
        p_rf_w=p_rf_w,
        p_bb_w=p_bb_w,
        p_mmwave_w=p_mmwave_w,
        p_sleep_w=_SLEEP_FRACTION_OF_P0 * p0,
        v_dc=DEFAULT_SUPPLY_VOLTAGE_V,
        mmwave_breakdown=breakdown,
    )


def reference_profile(feeder_loss_db: float = 0.0) -> RuHardwareProfile:
    """64-chain massive-MIMO profile used as the simulation default.

    Matches the worked digital-beamforming example: 30 W RF + 20 W baseband
    + 40 W mmWave overhead per chain (90 W fixed), 30% amplifier efficiency,
    6%/9%/10% supply losses, 9 W sleep draw per chain, 48 V supply.
    """
    return RuHardwareProfile(
        cell_class=CellClass.MMWAVE_SMALL_CELL,
        n_trx=64,
        eta_pa=0.30,
        losses=LossFactors(
            delta_dc=_DELTA_DC_DEFAULT,
            delta_ms=_DELTA_MS_DEFAULT,
            delta_cool=_DELTA_COOL_MACRO,
            delta_af=db_loss_to_fraction(feeder_loss_db),
        ),
        p_rf_w=30.0,
        p_bb_w=20.0,
        p_mmwave_w=40.0,
        p_sleep_w=9.0,
        v_dc=DEFAULT_SUPPLY_VOLTAGE_V,
        mmwave_breakdown=_MMWAVE_BREAKDOWN_DEFAULT,
    )


# --------------------------------------------------------------------------
# Range validation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RangeCheck:
    """Outcome of checking one profile field against its class range."""

    field: str
    status: str  # "pass" | "fail" | "unchecked" | "warning"
    value: float | None = None
    bounds: tuple[float, float] | None = None
    note: str = ""


@dataclass(frozen=True)
class ValidationReport:
    cell_class: CellClass
    checks: tuple[RangeCheck, ...] = field(default_factory=tuple)

    @property
    def failures(self) -> list[RangeCheck]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_profile_against_class(
    profile: RuHardwareProfile, ranges: CellClassRanges
) -> ValidationReport:
    """Check the profile's fields against the class envelope, inclusively.

    Fields with no published analogue (v_dc, p_sleep_w) are reported as
    unchecked. A warning entry is added when the class's stated peak-PA
    range is not reachable from its own max-power and back-off ranges; the
    warning never fails the report.
    """
    if profile.cell_class is not ranges.cell_class:
        raise ValueError(
            f"profile class {profile.cell_class.value!r} does not match "
            f"ranges class {ranges.cell_class.value!r}"
        )

    checks: list[RangeCheck] = []

    def check(name: str, value: float, bounds: tuple[float, float]) -> None:
        status = "pass" if bounds[0] <= value <= bounds[1] else "fail"
        checks.append(RangeCheck(field=name, status=status, value=value, bounds=bounds))

    check("n_trx", profile.n_trx, ranges.n_trx)
    check("eta_pa", profile.eta_pa, ranges.eta_pa)
    check("p_rf_w", profile.p_rf_w, ranges.p_rf_w)
    check("p_bb_w", profile.p_bb_w, ranges.p_bb_w)
    check("p_mmwave_w", profile.p_mmwave_w, ranges.p_mmwave_w)
    checks.append(RangeCheck(field="p_sleep_w", status="unchecked", value=profile.p_sleep_w))
    checks.append(RangeCheck(field="v_dc", status="unchecked", value=profile.v_dc))

    # Derived peak envelope from max power + back-off; flag classes whose
    # stated peak range cannot be reached by plain dB addition.
    derived = (
        peak_pa_output_dbm(ranges.p_tx_max_dbm[0], ranges.backoff_db[0]),
        peak_pa_output_dbm(ranges.p_tx_max_dbm[1], ranges.backoff_db[1]),
    )
    if ranges.pa_peak_dbm[0] < derived[0] or ranges.pa_peak_dbm[1] > derived[1]:
        checks.append(
            RangeCheck(
                field="pa_peak_dbm",
                status="warning",
                bounds=ranges.pa_peak_dbm,
                note=(
                    f"stated peak range {ranges.pa_peak_dbm} exceeds the envelope "
                    f"{derived} derived from p_tx_max + backoff"
                ),
            )
        )

    return ValidationReport(cell_class=profile.cell_class, checks=tuple(checks))
