"""Single charge/discharge steps against an independent ODE oracle.

The frozen constants below were produced by fine-step RK4 integration of
dv/dt = (v_in - v)/tau and dv/dt = -v/tau in a standalone script, not by
the closed forms under test.
"""
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ifcirc import RCParams, charge_step, discharge_step, time_constant
from conftest import capacitances, resistances, voltages

TEN_MS = RCParams(resistance=10e3, capacitance=1e-6)  # tau = 10 ms


def test_time_constant():
    assert time_constant(TEN_MS) == pytest.approx(0.01, rel=1e-12)
    assert TEN_MS.tau == time_constant(TEN_MS)


def test_charge_step_matches_ode_oracle():
    v = charge_step(0.5, TEN_MS, v_in=1.0, dt=0.01)
    assert v == pytest.approx(0.8160602794142788, rel=1e-10)


def test_discharge_step_matches_ode_oracle():
    v = discharge_step(0.8, TEN_MS, dt=0.005)
    assert v == pytest.approx(0.4852245277701068, rel=1e-10)


def test_one_tau_charge_reaches_63_percent():
    v = charge_step(0.0, TEN_MS, v_in=1.0, dt=0.01)
    assert v == pytest.approx(0.6321205588285577, rel=1e-10)


def test_one_tau_discharge_retains_37_percent():
    v = discharge_step(1.0, TEN_MS, dt=0.01)
    assert v == pytest.approx(0.3678794411714422, rel=1e-10)


def test_zero_duration_is_identity():
    assert charge_step(0.3, TEN_MS, 1.0, 0.0) == 0.3
    assert discharge_step(0.3, TEN_MS, 0.0) == 0.3


def test_invalid_params_rejected():
    with pytest.raises(ValueError):
        RCParams(resistance=-1.0, capacitance=1e-6)
    with pytest.raises(ValueError):
        RCParams(resistance=1e3, capacitance=0.0)
    with pytest.raises(ValueError):
        RCParams(resistance=math.inf, capacitance=1e-6)


def test_invalid_step_arguments_rejected():
    with pytest.raises(ValueError):
        charge_step(0.5, TEN_MS, 1.0, -0.01)
    with pytest.raises(ValueError):
        charge_step(1.5, TEN_MS, 1.0, 0.01)  # v0 above supply
    with pytest.raises(ValueError):
        charge_step(-0.1, TEN_MS, 1.0, 0.01)
    with pytest.raises(ValueError):
        discharge_step(0.5, TEN_MS, -1e-9)
    with pytest.raises(ValueError):
        discharge_step(-0.5, TEN_MS, 0.01)


@given(r=resistances, c=capacitances, v_in=voltages,
       frac=st.floats(0.0, 1.0), dt=st.floats(0.0, 1.0))
def test_charge_bounded_and_monotone(r, c, v_in, frac, dt):
    params = RCParams(r, c)
    v0 = frac * v_in
    v1 = charge_step(v0, params, v_in, dt)
    assert v0 <= v1 <= v_in
    # longer stimulation can only get closer to the supply
    v2 = charge_step(v0, params, v_in, dt + 0.01)
    assert v2 >= v1


@given(r=resistances, c=capacitances, v0=st.floats(0.0, 10.0), dt=st.floats(0.0, 1.0))
def test_discharge_bounded_and_monotone(r, c, v0, dt):
    params = RCParams(r, c)
    v1 = discharge_step(v0, params, dt)
    assert 0.0 <= v1 <= v0
    assert discharge_step(v0, params, dt + 0.01) <= v1


@given(r=resistances, c=capacitances, v_in=voltages,
       dt1=st.floats(1e-6, 0.1), dt2=st.floats(1e-6, 0.1))
def test_charge_semigroup(r, c, v_in, dt1, dt2):
    """Two consecutive steps equal one combined step (same tau, same v_in)."""
    params = RCParams(r, c)
    split = charge_step(charge_step(0.0, params, v_in, dt1), params, v_in, dt2)
    joint = charge_step(0.0, params, v_in, dt1 + dt2)
    assert math.isclose(split, joint, rel_tol=1e-12, abs_tol=1e-13 * v_in)


@given(r=resistances, c=capacitances, v0=voltages,
       dt1=st.floats(1e-6, 0.1), dt2=st.floats(1e-6, 0.1))
def test_discharge_semigroup(r, c, v0, dt1, dt2):
    params = RCParams(r, c)
    split = discharge_step(discharge_step(v0, params, dt1), params, dt2)
    joint = discharge_step(v0, params, dt1 + dt2)
    assert math.isclose(split, joint, rel_tol=1e-12, abs_tol=1e-13 * v0)
