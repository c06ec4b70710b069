import numpy as np
import pytest

from hybriddg import _kernels
from hybriddg.dg import NodalPrims
from hybriddg.fv import (fv_element_residual, reconstruct_interface_states,
                         subcell_interfaces)
from hybriddg.geometry import build_mesh
from hybriddg.meshmotion import MeshTopology, StandingWave
from hybriddg.operators import build_sbp
from hybriddg.physics import GasModel, conserved, entropy_quantities
from hybriddg.semidisc import Semidiscretization


@pytest.fixture(scope="module")
def gas():
    return GasModel()


@pytest.fixture(scope="module")
def mesh():
    topo = MeshTopology(counts=(3, 2, 2), lo=(0.0, 0.0, 0.0),
                        hi=(2.0, 2.0, 2.0), periodic=(True, True, True),
                        n_geo=2)
    motion = StandingWave(amplitude=0.08, frequency=1.3, lo=topo.lo,
                          lengths=topo.lengths)
    return build_mesh(topo, motion, build_sbp(3))


@pytest.fixture(scope="module")
def smooth_state(mesh, gas):
    geo = mesh.geometry(0.37)
    x = geo.x
    rho = 1.0 + 0.3 * np.sin(np.pi * x[..., 0]) * np.cos(np.pi * x[..., 1])
    v = 0.3 * np.stack([np.sin(np.pi * x[..., 1]),
                        np.cos(np.pi * x[..., 2]),
                        np.sin(np.pi * x[..., 0])], axis=-1)
    p = 1.0 + 0.2 * np.cos(np.pi * x[..., 2]) * np.sin(np.pi * x[..., 0])
    return conserved(rho, v, p, gas)


def test_subcell_widths_partition_reference_element():
    sbp = build_sbp(4)
    grid = subcell_interfaces(sbp)
    assert grid.interfaces[0] == -1.0
    assert grid.interfaces[-1] == 1.0
    assert np.all(np.diff(grid.interfaces) > 0.0)
    assert np.allclose(np.sum(grid.widths), 2.0)


def test_second_order_reconstruction_exact_for_linear_data():
    sbp = build_sbp(4)
    grid = subcell_interfaces(sbp)
    vals = (2.0 + 3.0 * sbp.nodes)[:, None] * np.array([[1.0, -2.0]])
    left, right = reconstruct_interface_states(vals, sbp.nodes, grid, 2)
    s = grid.interfaces[1:-1]
    exact = (2.0 + 3.0 * s)[:, None] * np.array([[1.0, -2.0]])
    assert np.allclose(left, exact, atol=1e-14)
    assert np.allclose(right, exact, atol=1e-14)


def test_minmod_flattens_extrema():
    sbp = build_sbp(3)
    grid = subcell_interfaces(sbp)
    # alternating data: every interior node is a local extremum, so the
    # limited slopes vanish and order 2 falls back to the cell values
    vals = np.array([1.0, -1.0, 1.0, -1.0])[:, None]
    left, right = reconstruct_interface_states(vals, sbp.nodes, grid, 2)
    assert np.array_equal(left[1:-1], vals[1:-2])
    assert np.array_equal(right[1:-1], vals[2:-1])


@pytest.mark.parametrize("order", [1, 2])
@pytest.mark.parametrize("flux", ["central", "rusanov"])
def test_pure_fv_free_stream(mesh, gas, order, flux):
    sd = Semidiscretization(mesh, gas, surface_flux=flux, fv_order=order)
    q0 = np.array([1.3, 1.3 * 0.2, -1.3 * 0.4, 1.3 * 0.1,
                   2.5 / 0.4 + 0.5 * 1.3 * 0.21])
    t = 0.37
    geo = mesh.geometry(t)
    y = sd.pack(np.broadcast_to(q0, geo.jdet.shape + (5,)).copy(), geo.jdet)
    dy = sd.rhs(y, t, 1.0)
    res = dy[..., :5] - q0 * dy[..., 5][..., None]
    assert np.max(np.abs(res)) < 1e-12


def test_first_order_central_fv_conserves_entropy(mesh, gas, smooth_state):
    sd = Semidiscretization(mesh, gas, surface_flux="central", fv_order=1)
    geo = mesh.geometry(0.37)
    y = sd.pack(smooth_state, geo.jdet)
    dy = sd.rhs(y, 0.37, 1.0)
    _, wvar, _ = entropy_quantities(smooth_state, gas)
    w = mesh.sbp.weights
    wt = w[:, None, None] * w[None, :, None] * w[None, None, :]
    rate = np.einsum("ijk,eijk->", wt,
                     np.sum(wvar * dy[..., :5], axis=-1)
                     - smooth_state[..., 0] * dy[..., 5])
    assert abs(rate) < 1e-12


def test_first_order_rusanov_fv_dissipates(mesh, gas, smooth_state):
    sd = Semidiscretization(mesh, gas, surface_flux="rusanov", fv_order=1)
    geo = mesh.geometry(0.37)
    y = sd.pack(smooth_state, geo.jdet)
    dy = sd.rhs(y, 0.37, 1.0)
    _, wvar, _ = entropy_quantities(smooth_state, gas)
    w = mesh.sbp.weights
    wt = w[:, None, None] * w[None, :, None] * w[None, None, :]
    rate = np.einsum("ijk,eijk->", wt,
                     np.sum(wvar * dy[..., :5], axis=-1)
                     - smooth_state[..., 0] * dy[..., 5])
    assert rate < 0.0


@pytest.mark.parametrize("order", [1, 2])
@pytest.mark.parametrize("flux", ["central", "rusanov"])
def test_pure_fv_conserves_totals(mesh, gas, smooth_state, order, flux):
    sd = Semidiscretization(mesh, gas, surface_flux=flux, fv_order=order)
    geo = mesh.geometry(0.37)
    y = sd.pack(smooth_state, geo.jdet)
    dy = sd.rhs(y, 0.37, 1.0)
    w = mesh.sbp.weights
    wt = w[:, None, None] * w[None, :, None] * w[None, None, :]
    tot = np.einsum("ijk,eijkc->c", wt, dy[..., :5])
    assert np.max(np.abs(tot)) < 1e-13


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not available")
@pytest.mark.parametrize("flux", ["central", "rusanov"])
def test_compiled_first_order_kernel_matches_reference(
        mesh, gas, smooth_state, flux):
    sd = Semidiscretization(mesh, gas, surface_flux=flux, fv_order=1)
    geo = mesh.geometry(0.37)
    prims = NodalPrims(smooth_state, gas)
    faces = sd._face_fluxes(smooth_state, geo, 0.37)
    rs_c, rg_c = fv_element_residual(prims, smooth_state, geo, mesh.sbp,
                                     gas, 1, flux, faces)
    _kernels.HAVE_NUMBA = False
    try:
        rs_r, rg_r = fv_element_residual(prims, smooth_state, geo,
                                         mesh.sbp, gas, 1, flux, faces)
    finally:
        _kernels.HAVE_NUMBA = True
    assert np.max(np.abs(rs_c - rs_r)) < 1e-12 * np.max(np.abs(rs_r))
    assert np.max(np.abs(rg_c - rg_r)) < 1e-13 * max(1.0,
                                                     np.max(np.abs(rg_r)))
