"""Smoke tests for the compiled python module."""

import math

import pytest

import pulseforge as pf


def test_phase_parameterization():
    p = pf.PhaseParameterization("a", [-1.0])
    assert p.family == "a"
    assert p.phase(math.pi) == pytest.approx(2 * math.pi)
    assert p.phase_derivative(math.pi / 2) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        pf.PhaseParameterization("z", [])
    with pytest.raises(ValueError):
        p.phase(-1.0)


def test_schedule_and_synthesis():
    sched = pf.ThetaSchedule()
    assert sched.T == 1.0
    assert sched.t_max == 4.0
    assert sched.theta(0.0) == pytest.approx(math.pi / 2)

    pulse = pf.synthesize(pf.PhaseParameterization("rabi"), sched, 2001)
    assert len(pulse.time) == 2001
    assert pulse.area == pytest.approx(math.pi, abs=1e-6)
    assert min(pulse.omega) >= 0.0


def test_pulse_area_and_residuals():
    area = pf.pulse_area(pf.PhaseParameterization("a", [-1.0]))
    assert area / math.pi == pytest.approx(2.16, abs=0.01)
    det, ar = pf.condition_residuals(pf.PhaseParameterization("a", [-1.0]))
    assert abs(ar.real) < 1e-6
    assert abs(ar.imag) < 1e-10


def test_solve_reproduces_published_roots():
    rep = pf.solve("area", 3, "a")
    assert rep.coefficients[0] == pytest.approx(-1.0, abs=2e-3)
    assert rep.pulse_area / math.pi == pytest.approx(2.16, abs=0.01)
    assert 3 in rep.verified_orders


def test_propagate_and_scan():
    pulse = pf.synthesize(
        pf.PhaseParameterization("a", [-1.0]), pf.ThetaSchedule()
    )
    p2, infid = pf.propagate(pulse, alpha=0.0)
    assert p2 >= 1 - 1e-8
    rows = pf.scan(pulse, [-0.1, 0.0, 0.1], [0.0])
    assert len(rows) == 3
    assert rows[1][2] >= 1 - 1e-8

    rabi = pf.synthesize(
        pf.PhaseParameterization("rabi"), pf.ThetaSchedule(1.0, 5.0)
    )
    p2, _ = pf.propagate(rabi, alpha=0.5)
    assert p2 == pytest.approx(0.5, abs=1e-8)


def test_hierarchy_meridian():
    terms = pf.hierarchy(pf.PhaseParameterization("rabi"), max_order=4)
    assert terms[2] == pytest.approx(-math.pi**2 / 4, abs=1e-10)
    assert terms[3] == pytest.approx(0.0, abs=1e-11)
    assert terms[4] == pytest.approx(math.pi**4 / 48, abs=1e-9)


def test_csv_round_trip(tmp_path):
    pulse = pf.synthesize(
        pf.PhaseParameterization("a", [-1.0]), pf.ThetaSchedule()
    )
    path = str(tmp_path / "pulse.csv")
    pf.write_pulse_csv(path, pulse)
    back = pf.read_pulse_csv(path)
    p2, _ = pf.propagate(back)
    assert p2 >= 1 - 1e-8
