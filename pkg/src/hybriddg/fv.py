"""Low-order finite-volume companion operator on the Gauss-Lobatto
subcell grid, with first-order or minmod-reconstructed second-order
interface states, and its GCL counterpart.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .physics import (_ale_flux_contracted, _PairMeans, _rusanov_from_prims,
                      central_contracted, conserved, rusanov_contracted)


@dataclass(frozen=True)
class SubcellGrid:
    """1D subcell partition of [-1, 1]: widths are quadrature weights."""

    interfaces: np.ndarray  # (p + 1,), strictly increasing, ends at -/+1
    widths: np.ndarray      # (p,)


def subcell_interfaces(sbp):
    """Interface i+1/2 sits at -1 + sum_{j <= i} w_j."""
    w = sbp.weights
    s = np.empty(w.size + 1)
    s[0] = -1.0
    s[1:] = -1.0 + np.cumsum(w)
    s[-1] = 1.0
    return SubcellGrid(interfaces=s, widths=w.copy())


def _minmod(a, b):
    return 0.5 * (np.sign(a) + np.sign(b)) * np.minimum(np.abs(a), np.abs(b))


def reconstruct_interface_states(values, nodes, grid, order):
    """Interface states at the interior subcell interfaces.

    ``values``: (..., p, C) nodal data with the line axis second-to-last.
    Returns (left, right), each (..., p-1, C): the two one-sided states
    at interfaces 1..p-1.  Order 1 is piecewise constant; order 2 is
    piecewise linear with minmod-limited slopes on the nonuniform grid
    (one-sided slopes at the first/last subcell).
    """
    left = values[..., :-1, :]
    right = values[..., 1:, :]
    if order == 1:
        return left, right
    dx = np.diff(nodes)
    sl = np.diff(values, axis=-2) / dx[:, None]     # (..., p-1, C)
    slopes = np.empty_like(values)
    slopes[..., 0, :] = sl[..., 0, :]
    slopes[..., -1, :] = sl[..., -1, :]
    slopes[..., 1:-1, :] = _minmod(sl[..., :-1, :], sl[..., 1:, :])
    s = grid.interfaces[1:-1]
    off_l = (s - nodes[:-1])[:, None]
    off_r = (s - nodes[1:])[:, None]
    return (left + slopes[..., :-1, :] * off_l,
            right + slopes[..., 1:, :] * off_r)


def _interface_states(prims, axis, nodes, grid, order, gas):
    """Primitive-variable reconstruction along one direction, returned as
    conserved left/right states at the interior interfaces.  Invalid
    reconstructions (p <= 0 or rho <= 0) fall back to first order."""
    rho = np.moveaxis(prims.rho, axis, -1)
    p = np.moveaxis(prims.p, axis, -1)
    v = np.moveaxis(prims.v, axis - prims.v.ndim, -2)  # components last
    wvars = np.concatenate([rho[..., None], v, p[..., None]], axis=-1)
    wl, wr = reconstruct_interface_states(wvars, nodes, grid, order)
    if order == 2:
        w1l, _ = reconstruct_interface_states(wvars, nodes, grid, 1)
        _, w1r = reconstruct_interface_states(wvars, nodes, grid, 1)
        bad_l = (wl[..., 0] <= 0.0) | (wl[..., 4] <= 0.0)
        bad_r = (wr[..., 0] <= 0.0) | (wr[..., 4] <= 0.0)
        if np.any(bad_l):
            wl = np.where(bad_l[..., None], w1l, wl)
        if np.any(bad_r):
            wr = np.where(bad_r[..., None], w1r, wr)
    ql = conserved(wl[..., 0], wl[..., 1:4], wl[..., 4], gas)
    qr = conserved(wr[..., 0], wr[..., 1:4], wr[..., 4], gas)
    return ql, qr


def _first_order_fluxes(prims, u, axis, selector, gas, a_sub, g_sub):
    rho = np.moveaxis(prims.rho, axis, 1)
    v = np.moveaxis(prims.v, axis, 1)
    p = np.moveaxis(prims.p, axis, 1)
    if selector == "rusanov":
        uq = np.moveaxis(u, axis, 1)
        return _rusanov_from_prims(rho[:, :-1], v[:, :-1], p[:, :-1],
                                   uq[:, :-1], rho[:, 1:], v[:, 1:],
                                   p[:, 1:], uq[:, 1:], gas, a_sub, g_sub)
    beta = np.moveaxis(prims.beta, axis, 1)
    lr = np.moveaxis(prims.ln_rho, axis, 1)
    lb = np.moveaxis(prims.ln_beta, axis, 1)
    means = _PairMeans(rho[:, :-1], v[:, :-1], beta[:, :-1],
                       lr[:, :-1], lb[:, :-1],
                       rho[:, 1:], v[:, 1:], beta[:, 1:],
                       lr[:, 1:], lb[:, 1:])
    return _ale_flux_contracted(means, a_sub, g_sub, gas)


def fv_element_residual(prims, u, geo, sbp, gas, order, selector, faces):
    """FV subcell residual of d(Ju)/dt and dJ/dt.

    Interior interface fluxes use the telescoped subcell metrics; the
    outermost interfaces use the shared element-face fluxes in
    ``faces[k] = (fl_state, fr_state, fl_gcl, fr_gcl)``, which keeps the
    hybrid conservative across blended faces.
    """
    w = sbp.weights
    grid = subcell_interfaces(sbp)
    flux = rusanov_contracted if selector == "rusanov" else central_contracted
    r_state = np.zeros_like(u)
    r_gcl = np.zeros(u.shape[:-1])
    if order == 1 and _kernels.HAVE_NUMBA and prims.packed is not None:
        for k in range(3):
            fl, fr, fl_gcl, fr_gcl = faces[k]
            _kernels.fv1_direction(
                k, prims.packed, geo.ja_sub[k], geo.g_sub[k],
                fl, fr, fl_gcl, fr_gcl, w, gas.gamma - 1.0, gas.gamma,
                selector != "rusanov", r_state, r_gcl)
        return r_state, r_gcl
    for k in range(3):
        axis = 1 + k
        fl, fr, fl_gcl, fr_gcl = faces[k]
        # interior interface metrics (drop the outermost entries);
        # subcell metrics are stored with the line axis at position 1
        a_sub = geo.ja_sub[k][:, 1:-1]
        g_sub = geo.g_sub[k][:, 1:-1]
        if order == 1:
            # interface states are the adjacent node states; reuse the
            # precomputed nodal primitives
            f_int = _first_order_fluxes(prims, u, axis, selector, gas,
                                        a_sub, g_sub)
        else:
            ql, qr = _interface_states(prims, axis, sbp.nodes, grid,
                                       order, gas)
            # reconstruction helpers put the line axis second-to-last
            ql = np.moveaxis(ql, -2, 1)
            qr = np.moveaxis(qr, -2, 1)
            f_int = flux(ql, qr, gas, a_sub, g_sub)

        fs = np.concatenate([fl[:, None], f_int, fr[:, None]], axis=1)
        gs = np.concatenate([fl_gcl[:, None], g_sub, fr_gcl[:, None]], axis=1)
        wshape = (1, w.size) + (1,) * (fs.ndim - 3)
        rs = -np.diff(fs, axis=1) / w.reshape(wshape + (1,))
        rg = np.diff(gs, axis=1) / w.reshape(wshape)
        r_state += np.moveaxis(rs, 1, axis)
        r_gcl += np.moveaxis(rg, 1, axis)
    return r_state, r_gcl
