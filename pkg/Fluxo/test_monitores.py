import math

import numpy as np
import pytest

from Complexo.triangulacao import generate
from Fluxo.integrador import FlowConfig, FlowSample, FlowTrace, FlowStatus, integrate
from Fluxo.monitores import (decay_bound_check, energy_monotone_check, fit_rate, lower_bound_check,
                             max_vertex_curvature_check, stability_spectrum, upper_bound_check)
from Fluxo.solucionador import solve_regular
from Geometria.tetraedro import ALPHA_E, regular_solid_angle
from Utilidades.erros import HypothesisError, PreconditionError


def make_trace(radii_rows, times=None, s_rel=None, curvature_rows=None):
    radii_rows = [np.asarray(r, dtype=float) for r in radii_rows]
    times = times if times is not None else [0.1 * i for i in range(len(radii_rows))]
    s_rel = s_rel if s_rel is not None else [math.nan] * len(radii_rows)
    curvature_rows = curvature_rows if curvature_rows is not None else [np.zeros_like(r) for r in radii_rows]
    samples = [FlowSample(t=t, radii=r, curvature=np.asarray(k, dtype=float), s_rel=s, real_count=len(r),
                          virtual_count=0)
               for t, r, k, s in zip(times, radii_rows, curvature_rows, s_rel)]
    return FlowTrace(config=FlowConfig(), samples=samples, status=FlowStatus.T_MAX)


def test_fit_rate():
    t = np.linspace(0.0, 1.0, 11)
    assert fit_rate(t, 3.0 * np.exp(-2.0 * t)) == pytest.approx(2.0)
    assert math.isnan(fit_rate([0.0, 1.0], [1.0, -1.0]))
    assert math.isnan(fit_rate([0.5, 0.5], [1.0, 2.0]))


def test_decay_bound_on_pentachoron_flow():
    cfg = FlowConfig(dt=1e-3, t_max=0.3, monitor_energy=False, output_stride=20)
    trace = integrate(generate("pentachoron"), [0.6, 0.8, 1.0, 1.2, 1.4], cfg)
    report = decay_bound_check(trace, d_max=4)
    assert report.holds
    assert report.details["epsilon"] == pytest.approx(4.0 * math.pi - 4.0 * ALPHA_E)
    assert report.details["fitted_rate"] >= report.details["epsilon"]
    assert report.to_dict()["name"] == "decay_bound"


def test_decay_bound_flags_growth():
    report = decay_bound_check(make_trace([[1.0] * 5, [1.1] * 5]), d_max=4)
    assert not report.holds
    assert report.violations == [1]


def test_decay_bound_hypothesis():
    with pytest.raises(HypothesisError):
        decay_bound_check(make_trace([[1.0] * 5]), d_max=23)


def test_lower_bound_on_cyclic_flow(cyclic15, rng):
    cfg = FlowConfig(dt=1e-2, t_max=0.5, monitor_energy=False, output_stride=5)
    trace = integrate(cyclic15, rng.uniform(0.15, 0.3, 15), cfg)
    report = lower_bound_check(trace, d_min=24)
    assert report.holds
    assert report.details["C"] == pytest.approx(solve_regular(23))
    assert report.details["bound"] == report.details["C"]
    assert lower_bound_check(trace, d_min=24, degree=24).holds


def test_lower_bound_flags_drop():
    rows = [[0.5, 0.6], [0.3, 0.6], [0.01, 0.6]]
    report = lower_bound_check(make_trace(rows), d_min=23)
    assert report.violations == [2]
    assert report.details["min_r_min"] == 0.01


@pytest.mark.parametrize("d_min, degree", [(22, 23), (24, 25), (24, 22)])
def test_lower_bound_hypothesis(d_min, degree):
    with pytest.raises(HypothesisError):
        lower_bound_check(make_trace([[1.0, 1.0]]), d_min=d_min, degree=degree)


def test_upper_bound_check():
    c = generate("pentachoron")
    shrinking = make_trace([[0.5, 0.6, 0.7, 0.8, 2.0], [0.5, 0.6, 0.7, 0.8, 1.5]])
    report = upper_bound_check(shrinking, c)
    assert report.holds
    assert report.details["angle_limit"] == pytest.approx(math.pi / 2.0)
    assert report.details["guarded_samples"] == 2
    growing = make_trace([[0.5, 0.6, 0.7, 0.8, 1.5], [0.5, 0.6, 0.7, 0.8, 2.0]])
    report = upper_bound_check(growing, c)
    assert report.violations == [1]
    assert report.details["r_max_peak"] == 2.0


def test_energy_monotone_check():
    ok = make_trace([[1.0]] * 4, s_rel=[0.0, -1.0, math.nan, -0.5])
    assert energy_monotone_check(ok).holds
    bad = make_trace([[1.0]] * 3, s_rel=[0.0, -1.0, -0.5])
    report = energy_monotone_check(bad)
    assert report.violations == [2]
    assert report.details["max_increase"] == pytest.approx(0.5)
    assert energy_monotone_check(bad, slack=1.0).holds


def test_max_vertex_curvature_check():
    bound = 4.0 * math.pi - 4.0 * ALPHA_E
    rows = [[1.0, 2.0], [1.0, 2.0]]
    curvatures = [[0.0, bound + 1.0], [100.0, bound - 1.0]]
    report = max_vertex_curvature_check(make_trace(rows, curvature_rows=curvatures), d_max=4)
    assert report.violations == [1]
    assert report.details["bound"] == pytest.approx(bound)
    with pytest.raises(HypothesisError):
        max_vertex_curvature_check(make_trace(rows), d_max=30)


def test_stability_spectrum_at_regular_packing(cyclic15):
    t0 = solve_regular(24)
    report = stability_spectrum(cyclic15, [t0] * 15)
    assert report.stable
    assert report.symmetric_defect < 1e-12
    h = 1e-6
    slope = (regular_solid_angle(t0 + h) - regular_solid_angle(t0 - h)) / (2.0 * h)
    # o modo constante é o mais lento
    assert report.rate == pytest.approx(-24.0 * slope * math.sinh(t0), rel=1e-6)
    top = report.eigenvectors[:, -1]
    assert np.allclose(np.abs(top), 1.0 / math.sqrt(15.0), atol=1e-8)
    assert report.to_dict()["stable"] is True


def test_stability_spectrum_preconditions(cyclic15):
    with pytest.raises(PreconditionError):
        stability_spectrum(cyclic15, [0.5] * 15)
    with pytest.raises(PreconditionError):
        stability_spectrum(generate("pentachoron"), [0.05, 1.5, 2.0, 2.5, 3.0])
