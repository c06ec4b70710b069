import numpy as np
import pytest

from hybriddg.geometry import build_mesh
from hybriddg.meshmotion import MeshTopology, Static
from hybriddg.operators import build_sbp
from hybriddg.physics import GasModel, conserved
from hybriddg.timeint import RK_A, RK_B, RK_C, advance_step, compute_dt


def test_rk_coefficients_consistent():
    assert len(RK_A) == len(RK_B) == len(RK_C) == 5
    assert RK_A[0] == 0.0 and RK_C[0] == 0.0
    # first-order consistency: the b-weights telescope to 1
    b_sum = 0.0
    acc = 0.0
    for a, b in zip(RK_A, RK_B):
        acc = a * acc + 1.0
        b_sum += b * acc
    assert abs(b_sum - 1.0) < 1e-15


def test_rk_is_fourth_order():
    """Nonstiff nonlinear scalar ODE y' = y sin(t), y(0) = 1, with exact
    solution exp(1 - cos(t))."""
    def rhs(y, t):
        return y * np.sin(t)

    t_end = 2.0
    errs = []
    steps = (40, 80, 160)
    for n in steps:
        y = np.array([1.0])
        dt = t_end / n
        for i in range(n):
            y = advance_step(rhs, y, i * dt, dt)
        errs.append(abs(y[0] - np.exp(1.0 - np.cos(t_end))))
    orders = [np.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
    assert orders[-1] > 3.8
    assert min(orders) > 3.5


def test_advance_step_reuses_work_array():
    def rhs(y, t):
        return -y

    y0 = np.array([2.0, -1.0])
    work = np.full_like(y0, 123.0)
    y1 = advance_step(rhs, y0, 0.0, 0.1, work=work)
    y2 = advance_step(rhs, y0, 0.0, 0.1)
    assert np.array_equal(y1, y2)
    assert np.array_equal(y0, [2.0, -1.0])


def test_compute_dt_matches_uniform_cartesian_value():
    degree = 3
    sbp = build_sbp(degree)
    topo = MeshTopology(counts=(2, 2, 2), lo=(0.0, 0.0, 0.0),
                        hi=(2.0, 2.0, 2.0), periodic=(True, True, True))
    mesh = build_mesh(topo, Static(), sbp)
    gas = GasModel()
    geo = mesh.geometry(0.0)
    shape = geo.jdet.shape
    rho = np.ones(shape)
    v = np.zeros(shape + (3,))
    p = np.ones(shape)
    u = conserved(rho, v, p, gas)
    # unit cubes: J = 1/8, |Ja^k| = 1/4, gas at rest so lam_k = c / 4
    c = np.sqrt(gas.gamma)
    expected = 2.0 * 0.125 / ((2.0 * degree + 1.0) * 3.0 * c * 0.25)
    dt1 = compute_dt(u, geo, sbp, gas, 1.0)
    assert np.isclose(dt1, expected, rtol=1e-13)
    assert np.isclose(compute_dt(u, geo, sbp, gas, 0.4), 0.4 * dt1)
