import numpy as np
import pytest

from hybriddg.blending import (BlendField, FixedBlend, IndicatorBlend,
                               IndicatorParams, RandomBlend, assign_alpha,
                               face_alpha, indicator_alpha, smooth_alpha)
from hybriddg.geometry import build_mesh
from hybriddg.meshmotion import MeshTopology, Static
from hybriddg.operators import build_sbp
from hybriddg.physics import GasModel, conserved


@pytest.fixture(scope="module")
def mesh():
    topo = MeshTopology(counts=(4, 2, 2), lo=(0.0, 0.0, 0.0),
                        hi=(2.0, 2.0, 2.0), periodic=(True, True, True))
    return build_mesh(topo, Static(), build_sbp(3))


def test_fixed_blend_range_checked():
    FixedBlend(0.0)
    FixedBlend(1.0)
    with pytest.raises(ValueError):
        FixedBlend(1.5)
    with pytest.raises(ValueError):
        FixedBlend(-0.1)


def test_face_alpha_is_pairwise_max():
    a = np.array([0.1, 0.7])
    b = np.array([0.4, 0.2])
    assert np.array_equal(face_alpha(a, b), [0.4, 0.7])


def test_assign_fixed_and_random(mesh):
    gas = GasModel()
    u = np.zeros((mesh.n_elements, 4, 4, 4, 5))
    bf = assign_alpha(FixedBlend(0.25), mesh, u, gas)
    assert isinstance(bf, BlendField)
    assert np.all(bf.alpha == 0.25)
    assert all(np.all(fa == 0.25) for fa in bf.alpha_faces)

    r1 = assign_alpha(RandomBlend(seed=9), mesh, u, gas)
    r2 = assign_alpha(RandomBlend(seed=9), mesh, u, gas)
    assert np.array_equal(r1.alpha, r2.alpha)
    assert np.all((r1.alpha >= 0.0) & (r1.alpha < 1.0))
    # face values are the max over the two neighbors
    a = r1.alpha.reshape(mesh.topology.counts)
    assert np.array_equal(r1.alpha_faces[0],
                          np.maximum(a, np.roll(a, -1, axis=0)))


def test_indicator_quiet_on_smooth_flagged_on_jump(mesh):
    gas = GasModel()
    geo = mesh.geometry(0.0)
    x = geo.x

    rho = 1.0 + 0.1 * np.sin(np.pi * x[..., 0])
    v = np.zeros(rho.shape + (3,))
    p = np.ones_like(rho)
    u = conserved(rho, v, p, gas)
    alpha_smooth = indicator_alpha(u, mesh.sbp, gas)
    assert np.max(alpha_smooth) < 0.1

    rho_jump = np.where(x[..., 0] > 0.77, 4.0, 1.0)
    p_jump = np.where(x[..., 0] > 0.77, 9.0, 1.0)
    u_jump = conserved(rho_jump, v, p_jump, gas)
    alpha_jump = indicator_alpha(u_jump, mesh.sbp, gas)
    params = IndicatorParams()
    assert np.max(alpha_jump) == params.alpha_max
    # only the elements containing the jump are flagged
    a = alpha_jump.reshape(mesh.topology.counts)
    assert np.all(a[2:] == 0.0)


def test_indicator_is_scale_invariant(mesh):
    gas = GasModel()
    geo = mesh.geometry(0.0)
    x = geo.x
    rho = np.where(x[..., 0] > 0.77, 4.0, 1.0)
    v = np.zeros(rho.shape + (3,))
    p = np.where(x[..., 0] > 0.77, 9.0, 1.0)
    u = conserved(rho, v, p, gas)
    u_scaled = conserved(1e6 * rho, v, 1e6 * p, gas)
    a1 = indicator_alpha(u, mesh.sbp, gas)
    a2 = indicator_alpha(u_scaled, mesh.sbp, gas)
    assert np.allclose(a1, a2, atol=1e-12)


def test_smooth_alpha_spreads_half_to_neighbors():
    counts = (5, 1, 1)
    alpha = np.zeros(5)
    alpha[2] = 0.8
    out = smooth_alpha(alpha, counts, (True, True, True))
    assert np.allclose(out, [0.0, 0.4, 0.8, 0.4, 0.0])
    # non-periodic axes do not wrap
    alpha = np.zeros(5)
    alpha[0] = 0.8
    out = smooth_alpha(alpha, counts, (False, True, True))
    assert np.allclose(out, [0.8, 0.4, 0.0, 0.0, 0.0])
    out = smooth_alpha(alpha, counts, (True, True, True))
    assert np.allclose(out, [0.8, 0.4, 0.0, 0.0, 0.4])


def test_unknown_mode_rejected(mesh):
    with pytest.raises(ValueError):
        assign_alpha(object(), mesh, None, GasModel())
