"""RU energy toolkit: component-wise radio unit power and current model,
finite-capacity energy ledger, a two-cell scenario harness, and a Tx-power
sweep engine with finite-difference gradient analysis."""

from ru_energy.power_model import (
    Active,
    CellClass,
    CellClassRanges,
    LossFactors,
    MmWaveBreakdown,
    RuHardwareProfile,
    Standby,
    active_power,
    builtin_profile,
    class_ranges,
    db_loss_to_fraction,
    dbm_to_watts,
    fixed_overhead_p0,
    fraction_to_db_loss,
    mmwave_overhead,
    pa_power,
    peak_pa_output_dbm,
    reference_profile,
    ru_current,
    standby_power,
    total_power,
    validate_profile_against_class,
    watts_to_dbm,
)
from ru_energy.energy_ledger import (
    DeviceEnergyModel,
    EnergySource,
    Harvester,
    UndefinedEfficiencyError,
    energy_efficiency,
)
from ru_energy.scenario import (
    ScenarioConfig,
    ScenarioResult,
    SleepWindow,
    run_scenario,
    schedule_handovers,
    step_mobility,
)
from ru_energy.sweep import (
    SweepRow,
    SweepSpec,
    SweepResult,
    emit_tables,
    finite_difference,
    peak_efficiency,
    run_sweep,
)

__version__ = "0.1.0"
