"""Power model unit tests.

Expected numbers were hand-computed with a 50-digit calculator before the
implementation existed and are frozen here as literals.
"""

import math
from dataclasses import replace

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

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

REF = reference_profile()

# Frozen oracle values (mpmath, 50 digits).
FRACTION_3DB = 0.4988127663727277
PA_10W_ETA03 = 33.333333333333336
PA_10W_ETA03_3DB = 66.50874383229599
ACTIVE_REF_40DBM = 10252.946423159188
ACTIVE_REF_20DBM = 7509.590488313893
CURRENT_REF_40DBM = 213.6030504824831


def neutral_profile(**overrides):
    """Profile with every loss term switched off and zero overhead."""
    kwargs = dict(
        cell_class=CellClass.PICO,
        n_trx=1,
        eta_pa=1.0,
        losses=LossFactors(),
        p_rf_w=0.0,
        p_bb_w=0.0,
        p_mmwave_w=0.0,
        p_sleep_w=0.0,
        v_dc=48.0,
    )
    kwargs.update(overrides)
    return RuHardwareProfile(**kwargs)


# --------------------------------------------------------------------------
# dB bridges
# --------------------------------------------------------------------------

def test_dbm_to_watts_anchors():
    assert dbm_to_watts(30.0) == pytest.approx(1.0, rel=1e-12)
    assert dbm_to_watts(40.0) == pytest.approx(10.0, rel=1e-12)
    assert dbm_to_watts(20.0) == pytest.approx(0.1, rel=1e-12)


def test_dbm_to_watts_monotone_and_errors():
    assert dbm_to_watts(25.0) < dbm_to_watts(25.1)
    with pytest.raises(ValueError):
        dbm_to_watts(math.nan)
    with pytest.raises(ValueError):
        dbm_to_watts(math.inf)


def test_watts_to_dbm_inverse():
    assert watts_to_dbm(1.0) == pytest.approx(30.0, rel=1e-12)
    with pytest.raises(ValueError):
        watts_to_dbm(0.0)


def test_db_loss_to_fraction():
    assert db_loss_to_fraction(0.0) == 0.0
    assert db_loss_to_fraction(3.0) == pytest.approx(FRACTION_3DB, rel=1e-12)
    assert db_loss_to_fraction(10.0) == pytest.approx(0.9, rel=1e-12)
    with pytest.raises(ValueError):
        db_loss_to_fraction(-0.1)


@given(st.floats(0.0, 30.0))
def test_db_loss_round_trip(loss_db):
    assert fraction_to_db_loss(db_loss_to_fraction(loss_db)) == pytest.approx(
        loss_db, rel=1e-9, abs=1e-9
    )


# --------------------------------------------------------------------------
# PA and overhead terms
# --------------------------------------------------------------------------

def test_pa_power_examples():
    assert pa_power(0.0, 0.3, 0.5) == 0.0
    assert pa_power(10.0, 0.3, 0.0) == pytest.approx(PA_10W_ETA03, rel=1e-9)
    assert pa_power(10.0, 0.3, db_loss_to_fraction(3.0)) == pytest.approx(
        PA_10W_ETA03_3DB, rel=1e-9
    )


def test_pa_power_rejects_bad_arguments():
    with pytest.raises(ValueError):
        pa_power(1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        pa_power(1.0, 1.5, 0.0)
    with pytest.raises(ValueError):
        pa_power(1.0, 0.3, 1.0)
    with pytest.raises(ValueError):
        pa_power(-1.0, 0.3, 0.0)


def test_pa_power_never_below_radiated():
    assert pa_power(10.0, 1.0, 0.0) == pytest.approx(10.0)
    assert pa_power(10.0, 0.3, 0.2) >= 10.0


def test_mmwave_overhead():
    assert mmwave_overhead(MmWaveBreakdown(15.0, 15.0, 10.0)) == pytest.approx(40.0)
    assert mmwave_overhead(MmWaveBreakdown(0.0, 0.0, 0.0)) == 0.0
    assert mmwave_overhead(MmWaveBreakdown(20.0, 10.0, 5.0)) == pytest.approx(35.0)


def test_fixed_overhead():
    assert fixed_overhead_p0(REF) == pytest.approx(90.0)
    assert fixed_overhead_p0(neutral_profile()) == 0.0
    femto_like = neutral_profile(p_rf_w=10.0, p_bb_w=10.0, p_sleep_w=1.0)
    assert fixed_overhead_p0(femto_like) == pytest.approx(20.0)


# --------------------------------------------------------------------------
# Active / standby / total / current
# --------------------------------------------------------------------------

def test_active_power_neutral_case():
    # All loss terms switched off: draw equals radiated power.
    assert active_power(neutral_profile(), 30.0) == pytest.approx(1.0, rel=1e-12)


def test_active_power_reference_oracle():
    assert active_power(REF, 40.0) == pytest.approx(ACTIVE_REF_40DBM, rel=1e-9)
    assert active_power(REF, 20.0) == pytest.approx(ACTIVE_REF_20DBM, rel=1e-9)


def test_standby_power():
    assert standby_power(REF) == pytest.approx(576.0)
    assert standby_power(neutral_profile()) == 0.0
    p = neutral_profile(n_trx=16, p_rf_w=10.0, p_sleep_w=2.0)
    assert standby_power(p) == pytest.approx(32.0)


def test_total_power_dispatch():
    assert total_power(REF, Standby()) == standby_power(REF)
    assert total_power(REF, Active(40.0)) == pytest.approx(ACTIVE_REF_40DBM, rel=1e-9)
    assert total_power(REF, Standby()) < total_power(REF, Active(20.0))


def test_ru_current():
    flat = neutral_profile(p_rf_w=480.0, p_sleep_w=10.0)
    # 480 W of overhead at 48 V while idle at tiny Tx power.
    assert ru_current(replace(flat, p_sleep_w=0.0), Standby()) == 0.0
    assert ru_current(REF, Active(40.0)) == pytest.approx(CURRENT_REF_40DBM, rel=1e-9)
    assert standby_power(REF) / REF.v_dc == pytest.approx(12.0)
    assert ru_current(REF, Standby()) == pytest.approx(12.0)


def test_peak_pa_output():
    assert peak_pa_output_dbm(43.0, 9.0) == pytest.approx(52.0)
    assert peak_pa_output_dbm(20.0, 8.0) == pytest.approx(28.0)
    assert peak_pa_output_dbm(37.5, 0.0) == 37.5
    with pytest.raises(ValueError):
        peak_pa_output_dbm(43.0, -1.0)


# --------------------------------------------------------------------------
# Profile invariants
# --------------------------------------------------------------------------

def test_profile_rejects_sleep_above_overhead():
    with pytest.raises(ValueError, match="p_sleep_w"):
        neutral_profile(p_rf_w=5.0, p_sleep_w=5.0)


def test_profile_rejects_breakdown_mismatch():
    with pytest.raises(ValueError, match="breakdown"):
        neutral_profile(
            p_mmwave_w=39.0, mmwave_breakdown=MmWaveBreakdown(15.0, 15.0, 10.0)
        )


def test_profile_accepts_matching_breakdown():
    p = neutral_profile(p_mmwave_w=40.0, mmwave_breakdown=MmWaveBreakdown(15.0, 15.0, 10.0))
    assert fixed_overhead_p0(p) == 40.0


def test_profile_field_validation():
    with pytest.raises(ValueError):
        neutral_profile(n_trx=0)
    with pytest.raises(ValueError):
        neutral_profile(eta_pa=0.0)
    with pytest.raises(ValueError):
        neutral_profile(eta_pa=1.2)
    with pytest.raises(ValueError):
        neutral_profile(v_dc=0.0)
    with pytest.raises(ValueError):
        LossFactors(delta_dc=1.0)
    with pytest.raises(ValueError):
        Active(math.nan)


# --------------------------------------------------------------------------
# Presets and range validation
# --------------------------------------------------------------------------

def test_builtin_profile_midpoints():
    assert builtin_profile(CellClass.MMWAVE_SMALL_CELL).eta_pa == pytest.approx(0.325)
    assert builtin_profile(CellClass.MACRO).p_mmwave_w == 0.0
    assert builtin_profile(CellClass.FEMTO).n_trx == 5
    assert builtin_profile(CellClass.MACRO).n_trx == 40
    assert builtin_profile(CellClass.MACRO).losses.delta_cool == pytest.approx(0.10)
    assert builtin_profile(CellClass.PICO).losses.delta_cool == 0.0


def test_builtin_profile_feeder_flag():
    preset = builtin_profile(CellClass.MACRO, feeder_loss_db=3.0)
    assert preset.losses.delta_af == pytest.approx(FRACTION_3DB, rel=1e-12)
    assert builtin_profile(CellClass.MACRO).losses.delta_af == 0.0


@pytest.mark.parametrize("cell_class", list(CellClass))
def test_builtin_profiles_pass_own_validation(cell_class):
    report = validate_profile_against_class(
        builtin_profile(cell_class), class_ranges(cell_class)
    )
    assert report.ok, report.failures


def test_validation_flags_out_of_range_eta():
    bad = replace(builtin_profile(CellClass.MACRO), eta_pa=0.50)
    report = validate_profile_against_class(bad, class_ranges(CellClass.MACRO))
    assert not report.ok
    assert [c.field for c in report.failures] == ["eta_pa"]


def test_validation_inclusive_bounds():
    edge = replace(builtin_profile(CellClass.MACRO), n_trx=64)
    report = validate_profile_against_class(edge, class_ranges(CellClass.MACRO))
    assert report.ok


def test_validation_reports_unchecked_fields():
    report = validate_profile_against_class(
        builtin_profile(CellClass.MICRO), class_ranges(CellClass.MICRO)
    )
    unchecked = {c.field for c in report.checks if c.status == "unchecked"}
    assert unchecked == {"p_sleep_w", "v_dc"}


def test_validation_class_mismatch():
    with pytest.raises(ValueError, match="does not match"):
        validate_profile_against_class(
            builtin_profile(CellClass.MACRO), class_ranges(CellClass.PICO)
        )


def test_macro_peak_range_warning():
    # The stated macro peak envelope tops out above max power + back-off.
    report = validate_profile_against_class(
        builtin_profile(CellClass.MACRO), class_ranges(CellClass.MACRO)
    )
    warnings = [c for c in report.checks if c.status == "warning"]
    assert [c.field for c in warnings] == ["pa_peak_dbm"]
    assert report.ok  # a warning never fails the report

    for other in (CellClass.MICRO, CellClass.PICO, CellClass.FEMTO,
                  CellClass.MMWAVE_SMALL_CELL):
        rep = validate_profile_against_class(builtin_profile(other), class_ranges(other))
        assert not [c for c in rep.checks if c.status == "warning"]


def test_ranges_reject_inverted_bounds():
    with pytest.raises(ValueError):
        CellClassRanges(
            cell_class=CellClass.PICO,
            p_tx_max_dbm=(35.0, 30.0),
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
        )


# --------------------------------------------------------------------------
# Property tests
# --------------------------------------------------------------------------

deltas = st.one_of(st.just(0.0), st.floats(0.01, 0.5))


@st.composite
def profiles(draw):
    p_rf = draw(st.floats(0.1, 500.0))
    p_bb = draw(st.floats(0.0, 500.0))
    p_mm = draw(st.floats(0.0, 500.0))
    p0 = p_rf + p_bb + p_mm
    return RuHardwareProfile(
        cell_class=draw(st.sampled_from(list(CellClass))),
        n_trx=draw(st.integers(1, 256)),
        eta_pa=draw(st.floats(0.05, 1.0)),
        losses=LossFactors(
            delta_dc=draw(deltas),
            delta_ms=draw(deltas),
            delta_cool=draw(deltas),
            delta_af=draw(deltas),
        ),
        p_rf_w=p_rf,
        p_bb_w=p_bb,
        p_mmwave_w=p_mm,
        p_sleep_w=draw(st.floats(0.0, 0.99)) * p0,
        v_dc=draw(st.floats(1.0, 400.0)),
    )


@given(profiles(), st.floats(0.0, 50.0), st.floats(0.1, 10.0))
def test_active_power_strictly_increasing(profile, p1, step):
    assert active_power(profile, p1) < active_power(profile, p1 + step)


@given(profiles(), st.floats(0.0, 50.0), st.floats(0.5, 5.0))
def test_active_power_convex_in_dbm(profile, p1, step):
    y1 = active_power(profile, p1)
    y2 = active_power(profile, p1 + step)
    y3 = active_power(profile, p1 + 2.0 * step)
    assert y3 - 2.0 * y2 + y1 > 0.0


@given(profiles(), st.floats(0.0, 50.0))
def test_active_power_linear_in_n_trx(profile, p_tx):
    assume(profile.n_trx <= 128)
    doubled = replace(profile, n_trx=2 * profile.n_trx)
    assert active_power(doubled, p_tx) == 2.0 * active_power(profile, p_tx)


@given(profiles(), st.floats(-30.0, 55.0))
def test_standby_below_active(profile, p_tx):
    assert total_power(profile, Standby()) < total_power(profile, Active(p_tx))


@given(profiles(), st.floats(0.0, 50.0))
def test_loss_divisor_bound(profile, p_tx):
    p_pa = pa_power(dbm_to_watts(p_tx), profile.eta_pa, profile.losses.delta_af)
    bound = profile.n_trx * (p_pa + fixed_overhead_p0(profile))
    actual = active_power(profile, p_tx)
    if profile.losses.delta_dc == profile.losses.delta_ms == profile.losses.delta_cool == 0.0:
        assert actual == bound
    else:
        assert actual > bound


@given(profiles(), st.floats(-30.0, 55.0))
def test_current_times_voltage_is_power(profile, p_tx):
    for state in (Active(p_tx), Standby()):
        assert ru_current(profile, state) * profile.v_dc == pytest.approx(
            total_power(profile, state), rel=1e-12
        )
