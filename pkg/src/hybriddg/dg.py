"""High-order flux-differencing DGSEM volume and surface kernels with the
ALE two-point fluxes and the discrete geometric conservation law.

All kernels operate on the full element batch: states are shaped
(E, p, p, p, 5), the evolved Jacobian (E, p, p, p).  Residuals are
returned as time derivatives of (J u) and J (the mass matrix is already
divided out).
"""

import numpy as np

from . import _kernels
from .physics import (_ale_flux_contracted, _flux_dot, _PairMeans,
                      _means_from_states, primitives)


class NodalPrims:
    """Primitive/entropy quantities precomputed once per residual call.

    ``packed`` bundles (rho, v, beta, ln rho, ln beta, p, conserved) on
    one trailing axis in the layout the compiled kernels consume."""

    __slots__ = ("rho", "v", "p", "beta", "ln_rho", "ln_beta", "packed")

    def __init__(self, u, gas, time=None):
        self.rho, self.v, self.p = primitives(u, gas, time=time)
        self.beta = 0.5 * self.rho / self.p
        self.ln_rho = np.log(self.rho)
        self.ln_beta = np.log(self.beta)
        self.packed = None
        if _kernels.HAVE_NUMBA:
            pn = np.empty(self.rho.shape + (13,))
            pn[..., 0] = self.rho
            pn[..., 1:4] = self.v
            pn[..., 4] = self.beta
            pn[..., 5] = self.ln_rho
            pn[..., 6] = self.ln_beta
            pn[..., 7] = self.p
            pn[..., 8:13] = u
            self.packed = pn


def _mv(a, axis):
    return np.moveaxis(a, axis, 1)


def contravariant_two_point_flux(q_i, q_j, ja_i, ja_j, nu_i, nu_j, gas):
    """ALE contravariant two-point flux
    {{Ja}} . (f#(q_i, q_j) - {{nu}} q#(q_i, q_j)); symmetric, and for
    i = j reduces to the consistent contravariant ALE flux."""
    means = _means_from_states(q_i, q_j, gas)
    avec = 0.5 * (np.asarray(ja_i, dtype=float) + np.asarray(ja_j, dtype=float))
    nubar = 0.5 * (np.asarray(nu_i, dtype=float) + np.asarray(nu_j, dtype=float))
    g = np.sum(avec * nubar, axis=-1)
    return _ale_flux_contracted(means, avec, g, gas)


def gcl_two_point_flux(ja_i, ja_j, nu_i, nu_j):
    """GCL two-point flux nu# = {{Ja}} . {{nu}}."""
    avec = 0.5 * (np.asarray(ja_i, dtype=float) + np.asarray(ja_j, dtype=float))
    nubar = 0.5 * (np.asarray(nu_i, dtype=float) + np.asarray(nu_j, dtype=float))
    return np.sum(avec * nubar, axis=-1)


def consistent_contravariant_flux(prims, u, geo, k):
    """Nodal contravariant ALE flux Ja^k . f(u) - (Ja^k . nu) u."""
    ja = geo.ja[..., k, :]
    g = np.einsum("...i,...i->...", ja, geo.nu)
    return (_flux_dot(prims.rho, prims.v, prims.p, u[..., 4], ja)
            - g[..., None] * u)


def nodal_fluxes(prims, u, geo):
    """Per-direction nodal contravariant fluxes and GCL contractions,
    shared between the volume and surface kernels."""
    out = []
    for k in range(3):
        g = np.einsum("...i,...i->...", geo.ja[..., k, :], geo.nu)
        ftil = _flux_dot(prims.rho, prims.v, prims.p, u[..., 4],
                         geo.ja[..., k, :]) - g[..., None] * u
        out.append((ftil, g))
    return out


def dg_volume_residual(prims, u, geo, sbp, gas, nodal=None, compiled=True):
    """Flux-differencing volume terms of d(Ju)/dt and dJ/dt.

    Per node line in direction k: -(1/w_i) sum_j 2 Q_ij ftilde#(i, j) for
    the state and +(1/w_i) sum_j 2 Q_ij nu#(i, j) for the Jacobian.  The
    two-point fluxes are symmetric, so only the i < j pairs are
    evaluated; the diagonal contributes the consistent nodal flux.

    Uses the compiled kernel when numba is importable; the numpy
    path below is the reference (identical up to round-off).
    """
    if compiled and _kernels.HAVE_NUMBA and prims.packed is not None:
        qw = np.ascontiguousarray(2.0 * sbp.Q / sbp.weights[:, None])
        r_state = np.zeros_like(u)
        r_gcl = np.zeros(u.shape[:-1])
        _kernels.dg_volume(prims.packed, geo.ja, geo.nu,
                           qw, np.ascontiguousarray(qw.T),
                           gas.gamma - 1.0, r_state, r_gcl)
        return r_state, r_gcl

    p = sbp.degree + 1
    q2 = 2.0 * sbp.Q
    w = sbp.weights
    iu, ju = np.triu_indices(p, 1)
    # scatter matrix: row i collects 2 Q_ij (and 2 Q_ji in row j) per pair
    msc = np.zeros((p, iu.size))
    msc[iu, np.arange(iu.size)] = q2[iu, ju]
    msc[ju, np.arange(iu.size)] = q2[ju, iu]
    qdiag = np.diag(q2)
    if nodal is None:
        nodal = nodal_fluxes(prims, u, geo)

    r_state = np.zeros_like(u)
    r_gcl = np.zeros(u.shape[:-1])
    for k in range(3):
        axis = 1 + k
        rho = _mv(prims.rho, axis)
        v = _mv(prims.v, axis)
        beta = _mv(prims.beta, axis)
        lr = _mv(prims.ln_rho, axis)
        lb = _mv(prims.ln_beta, axis)
        nu = _mv(geo.nu, axis)
        ja = _mv(geo.ja[..., k, :], axis)

        means = _PairMeans(rho[:, iu], v[:, iu], beta[:, iu],
                           lr[:, iu], lb[:, iu],
                           rho[:, ju], v[:, ju], beta[:, ju],
                           lr[:, ju], lb[:, ju])
        avec = 0.5 * (ja[:, iu] + ja[:, ju])
        g = np.einsum("...i,...i->...", avec, 0.5 * (nu[:, iu] + nu[:, ju]))
        f = _ale_flux_contracted(means, avec, g, gas)

        rs = -np.einsum("im,em...->ei...", msc, f)
        rg = np.einsum("im,em...->ei...", msc, g)

        ftil = _mv(nodal[k][0], axis)
        g_nod = _mv(nodal[k][1], axis)
        wshape = (1, p) + (1,) * (rs.ndim - 2)
        rs -= qdiag.reshape(wshape) * ftil
        rg += qdiag.reshape(wshape[:-1]) * g_nod
        r_state += np.moveaxis(rs / w.reshape(wshape), 1, axis)
        r_gcl += np.moveaxis(rg / w.reshape(wshape[:-1]), 1, axis)
    return r_state, r_gcl


def _layer_flux(prims, u, geo, k, layer):
    """Consistent contravariant flux and GCL contraction on one boundary
    node layer (``layer`` 0 or -1 along direction k)."""
    ix = (slice(None),) * (1 + k) + (layer,)
    ul = u[ix]
    ja = geo.ja[ix][..., k, :]
    g = np.einsum("...i,...i->...", ja, geo.nu[ix])
    ftil = _flux_dot(prims.rho[ix], prims.v[ix], prims.p[ix],
                     ul[..., 4], ja) - g[..., None] * ul
    return ftil, g


def dg_surface_residual(prims, u, geo, sbp, gas, faces, nodal=None):
    """Surface coupling terms (boundary node layers only).

    ``faces[k]`` holds the +xi oriented face fluxes shared with the
    neighbors: (fl_state, fr_state, fl_gcl, fr_gcl), each already unique
    per face.  The DG correction subtracts the consistent contravariant
    flux at the boundary nodes; when ``nodal`` (precomputed volume nodal
    fluxes) is absent, only the boundary layers are evaluated.
    """
    w = sbp.weights
    r_state = np.zeros_like(u)
    r_gcl = np.zeros(u.shape[:-1])
    for k in range(3):
        axis = 1 + k
        fl, fr, fl_gcl, fr_gcl = faces[k]
        if nodal is None:
            ftil0, g0 = _layer_flux(prims, u, geo, k, 0)
            ftil1, g1 = _layer_flux(prims, u, geo, k, -1)
        else:
            ftil = _mv(nodal[k][0], axis)
            g_nod = _mv(nodal[k][1], axis)
            ftil0, ftil1 = ftil[:, 0], ftil[:, -1]
            g0, g1 = g_nod[:, 0], g_nod[:, -1]
        rs = _mv(r_state, axis)
        rg = _mv(r_gcl, axis)
        rs[:, 0] += (fl - ftil0) / w[0]
        rs[:, -1] -= (fr - ftil1) / w[-1]
        rg[:, 0] -= (fl_gcl - g0) / w[0]
        rg[:, -1] += (fr_gcl - g1) / w[-1]
    return r_state, r_gcl
