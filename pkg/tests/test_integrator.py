import math

import numpy as np
import pytest

from aristotelian import conserved as cs
from aristotelian.errors import SeparationTooSmall, StepUnderflow
from aristotelian.integrator import IntegrationConfig, drift_report, integrate
from aristotelian.model import Couplings, ExtendedPoint

FULL = Couplings(1, 1, 1)


def test_two_body_closed_form():
    # (u - v)^2 = (u0 - v0)^2 + 4 c s when only c is nonzero
    traj = integrate("auxiliary", [1, 0, 5], Couplings(0, 0, 1), IntegrationConfig(0, 1))
    u, v, _ = traj.final.state
    assert traj.termination == "completed"
    assert abs((u - v) ** 2 - 5) <= 1e-9 * 5


def test_full_symmetric_drift():
    traj = integrate("auxiliary", [2, 1, 0], FULL, IntegrationConfig(0, 0.1))
    rep = drift_report(traj)
    assert rep["h1_abs_drift"] <= 1e-9
    assert rep["h2_rel_drift"] <= 1e-9
    assert rep["hfund_max_dirres"] <= 1e-12


def test_physical_integrals_conserved():
    p = Couplings(1, 2, 3, omega=1.0)
    traj = integrate("physical", [2, 1j, -1], p, IntegrationConfig(0, 1))
    rep = drift_report(traj)
    assert rep["h1_abs_drift"] <= 1e-9
    assert rep["h2_rel_drift"] <= 1e-9


def test_convergence_order():
    # two-body closed form: u - v = sqrt(1 + 4 s), u + v = 1
    r = math.sqrt(1 + 4 * 4.0)
    exact = np.array([(1 + r) / 2, (1 - r) / 2, 5])
    errs = []
    for h in (0.4, 0.2, 0.1, 0.05):
        y = integrate("auxiliary", [1, 0, 5], Couplings(0, 0, 1), IntegrationConfig(0, 4, fixed_step=h)).final.state
        errs.append(np.abs(y - exact).max())
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(3)]
    assert min(orders) >= 4


def test_collision_terminates_without_recording():
    cfg = IntegrationConfig(0, -0.5, sep_floor=1e-3)
    traj = integrate("auxiliary", [2, 1, 0], FULL, cfg)
    assert traj.termination == "collision"
    for s in traj.samples:
        d = s.state
        assert min(abs(d[0] - d[1]), abs(d[1] - d[2]), abs(d[0] - d[2])) > 1e-3


def test_initial_separation_error():
    with pytest.raises(SeparationTooSmall):
        integrate("auxiliary", [1, 1, 0], FULL, IntegrationConfig(0, 1))


def test_step_underflow_strict():
    cfg = IntegrationConfig(0, -0.5, sep_floor=1e-300, rtol=1e-14, atol=1e-300)
    traj = integrate("auxiliary", [2, 1, 0], FULL, cfg)
    # with the collision guard disabled, the step size collapses near s = -1/3
    assert traj.termination == "step-underflow"
    assert traj.final.t == pytest.approx(-1 / 3, abs=1e-9)
    with pytest.raises(StepUnderflow):
        integrate("auxiliary", [2, 1, 0], FULL, cfg, strict=True)


def test_config_validation():
    with pytest.raises(ValueError):
        IntegrationConfig(0, 1, rtol=-1)
    with pytest.raises(ValueError):
        integrate("other", [2, 1, 0], FULL, IntegrationConfig(0, 1))


def test_complex_time_direction():
    # integrating along s with direction i moves tau along the imaginary axis
    cfg = IntegrationConfig(0, 0.05, direction=1j)
    traj = integrate("auxiliary", [2, 1, 0], FULL, cfg)
    last = traj.final
    pt = ExtendedPoint(cfg.tau_at(last.t), last.state)
    assert abs(cs.h2_aux(pt, FULL) - traj.samples[0].h2) <= 1e-9 * abs(traj.samples[0].h2)
    assert traj.accepted == len(traj.samples) - 1
