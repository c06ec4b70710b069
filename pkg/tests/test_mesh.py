import numpy as np
import pytest

from hybriddg.geometry import (InvertedElementError, _diff_axis, build_mesh,
                               face_geometry, subcell_face_geometry)
from hybriddg.meshmotion import (CornerSinusoid, MeshTopology, PistonChannel,
                                 StandingWave, Static, sample_motion)
from hybriddg.operators import build_sbp


def curved_mesh(degree=3, n_geo=2, counts=(3, 2, 2)):
    topo = MeshTopology(counts=counts, lo=(0.0, 0.0, 0.0),
                        hi=(2.0, 2.0, 2.0), periodic=(True, True, True),
                        n_geo=n_geo)
    motion = StandingWave(amplitude=0.07, frequency=1.3, lo=topo.lo,
                          lengths=topo.lengths)
    return build_mesh(topo, motion, build_sbp(degree))


def cartesian_mesh(degree=2, counts=(2, 2, 2)):
    topo = MeshTopology(counts=counts, lo=(0.0, 0.0, 0.0),
                        hi=(2.0, 2.0, 2.0), periodic=(True, True, True))
    return build_mesh(topo, Static(), build_sbp(degree))


def test_metric_identity_on_curved_moving_mesh():
    mesh = curved_mesh()
    geo = mesh.geometry(0.41)
    d = mesh.sbp.D
    for n in range(3):
        div = sum(_diff_axis(geo.ja[..., i, n], d, 1 + i) for i in range(3))
        assert np.max(np.abs(div)) < 1e-12


def test_jacobian_positive_and_inversion_detected():
    mesh = curved_mesh()
    assert np.all(mesh.geometry(0.7).jdet > 0.0)
    topo = mesh.topology
    bad = StandingWave(amplitude=3.0, frequency=np.pi / 2.0, lo=topo.lo,
                       lengths=topo.lengths)
    mesh_bad = build_mesh(topo, bad, mesh.sbp)  # fine at t = 0
    with pytest.raises(InvertedElementError) as exc:
        mesh_bad.geometry(1.0)
    assert exc.value.time == 1.0
    assert isinstance(exc.value.element, int)


def test_watertight_faces_periodic():
    mesh = curved_mesh(counts=(3, 3, 3))
    geo = mesh.geometry(0.37)
    counts = mesh.topology.counts
    p = mesh.sbp.degree + 1
    xg = geo.x.reshape(counts + (p, p, p, 3))
    for k in range(3):
        hi = np.take(xg, -1, axis=3 + k)
        lo = np.take(np.roll(xg, -1, axis=k), 0, axis=3 + k)
        # interior faces share lattice floats, hence are bit-identical
        idx = [slice(None)] * 3
        idx[k] = slice(None, -1)
        assert np.array_equal(hi[tuple(idx)], lo[tuple(idx)])
        # the wrap face differs by the domain period up to the round-off
        # of the periodic displacement shape
        period = np.zeros(3)
        period[k] = mesh.topology.lengths[k]
        idx[k] = -1
        assert np.allclose(hi[tuple(idx)], lo[tuple(idx)] + period,
                           atol=1e-14)


def test_subcell_metrics_telescope_and_pin():
    mesh = curved_mesh()
    geo = mesh.geometry(0.53)
    w = mesh.sbp.weights
    d = mesh.sbp.D
    for k in range(3):
        a = np.moveaxis(geo.ja[..., k, :], 1 + k, 1)
        da = np.moveaxis(_diff_axis(geo.ja[..., k, :], d, 1 + k), 1 + k, 1)
        sub = geo.ja_sub[k]
        assert np.array_equal(sub[:, 0], a[:, 0])
        assert np.array_equal(sub[:, -1], a[:, -1])
        diffs = np.diff(sub, axis=1)
        wshape = (1, w.size) + (1,) * (a.ndim - 2)
        target = da * w.reshape(wshape)
        # interior increments equal w_i (D Ja)_i; the last one absorbs
        # the (round-off sized) pinning defect
        assert np.max(np.abs(diffs[:, :-1] - target[:, :-1])) < 1e-13
        assert np.max(np.abs(diffs[:, -1] - target[:, -1])) < 1e-12


def test_subcell_metrics_are_lazy():
    mesh = curved_mesh()
    geo = mesh.geometry(0.1)
    assert geo._sub is None
    geo.ja_sub
    assert geo._sub is not None


def test_static_geometry_is_cached():
    mesh = cartesian_mesh()
    assert mesh.geometry(0.0) is mesh.geometry(3.0)


def test_face_geometry_cartesian():
    mesh = cartesian_mesh()
    geo = mesh.geometry(0.0)
    # elements are unit cubes, so dx/dxi = 1/2 and |Ja^k| = 1/4
    for k, e_k in enumerate(np.eye(3)):
        j_f, n, nu = face_geometry(geo, 0, k, 1)
        assert np.allclose(j_f, 0.25)
        assert np.allclose(n, e_k)
        assert np.all(nu == 0.0)
        j_f, n, nu = face_geometry(geo, 0, k, 0)
        assert np.allclose(n, -e_k)


def test_subcell_face_geometry_unit_normals():
    mesh = curved_mesh()
    geo = mesh.geometry(0.3)
    j_f, n, nu = subcell_face_geometry(geo, 1, 0, 2)
    assert np.allclose(np.sum(n * n, axis=-1), 1.0)
    assert np.all(j_f > 0.0)


@pytest.mark.parametrize("motion", [
    Static(),
    CornerSinusoid(amplitude=(0.05, 0.04, 0.03), frequency=2.0,
                   lo=(0.0, 0.0, 0.0), lengths=(2.0, 2.0, 2.0)),
    StandingWave(amplitude=0.08, frequency=1.7, lo=(0.0, 0.0, 0.0),
                 lengths=(2.0, 2.0, 2.0)),
    PistonChannel(piston_speed=2.0, piston_start=0.0, x_lo=-20.0, x_hi=50.0),
])
def test_motion_velocity_matches_displacement_rate(motion):
    rng = np.random.default_rng(3)
    if isinstance(motion, PistonChannel):
        r = np.column_stack([rng.uniform(-20.0, 50.0, 40),
                             rng.uniform(0.0, 2.0, 40),
                             rng.uniform(0.0, 2.0, 40)])
    else:
        r = rng.uniform(0.0, 2.0, (40, 3))
    t, eps = 0.63, 1e-6
    _, nu = sample_motion(motion, r, t)
    xp, _ = sample_motion(motion, r, t + eps)
    xm, _ = sample_motion(motion, r, t - eps)
    assert np.max(np.abs((xp - xm) / (2.0 * eps) - nu)) < 1e-8


def test_corner_sinusoid_periodic_wrap():
    motion = CornerSinusoid(amplitude=(0.05,) * 3, frequency=1.0,
                            lo=(0.0, 0.0, 0.0), lengths=(2.0, 2.0, 2.0),
                            wavenumbers=(2, 1, 1))
    r0 = np.array([[0.0, 0.3, 0.7]])
    r1 = np.array([[2.0, 0.3, 0.7]])
    x0, nu0 = sample_motion(motion, r0, 0.4)
    x1, nu1 = sample_motion(motion, r1, 0.4)
    assert np.allclose(x1 - x0, [2.0, 0.0, 0.0], atol=1e-14)
    assert np.allclose(nu0, nu1, atol=1e-14)


def test_piston_plane_follows_piston():
    motion = PistonChannel(piston_speed=2.0, piston_start=0.0,
                           x_lo=-20.0, x_hi=50.0)
    r = np.array([[0.0, 1.0, 1.0]])
    x, nu = sample_motion(motion, r, 3.0)
    assert np.isclose(x[0, 0], motion.piston_position(3.0))
    assert np.isclose(nu[0, 0], 2.0)
    # outer boundaries stay put
    ends = np.array([[-20.0, 0.0, 0.0], [50.0, 0.0, 0.0]])
    x, nu = sample_motion(motion, ends, 3.0)
    assert np.allclose(x[:, 0], [-20.0, 50.0])
    assert np.allclose(nu[:, 0], 0.0)


def test_geometry_degree_cannot_exceed_solution_degree():
    topo = MeshTopology(counts=(2, 2, 2), n_geo=3)
    with pytest.raises(ValueError):
        build_mesh(topo, Static(), build_sbp(2))
