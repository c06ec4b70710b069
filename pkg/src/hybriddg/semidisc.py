"""Assembled semidiscretization: face coupling, boundary conditions and
the convex DG/FV blend.

The evolved state per node is (J*u, J): both the metric-scaled conserved
variables and the Jacobian determinant are advanced in time, the latter
by the discrete geometric conservation law, so a constant state stays
constant on moving meshes to round-off.

Each mesh face carries exactly one numerical flux, computed from the
boundary-node states of the two adjacent elements and the face metric of
the lower element (single-valued across conforming faces).  The same
flux closes both the DG surface term and the outermost FV subcell of
both neighbors, which makes the blended scheme conservative for any
per-element blending coefficients.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dg import (NodalPrims, dg_surface_residual, dg_volume_residual,
                 nodal_fluxes)
from .fv import fv_element_residual
from .physics import central_contracted, conserved, primitives, \
    rusanov_contracted


@dataclass(frozen=True)
class Wall:
    """Slip wall moving with the mesh: mirror the mesh-relative normal
    velocity, copy density and pressure."""


@dataclass(frozen=True)
class Dirichlet:
    """Prescribed exterior state; ``state(x, t)`` returns conserved
    variables at the face points."""

    state: object


@dataclass(frozen=True)
class InternalWall:
    """Moving slip wall on an interior element-boundary plane (reference
    coordinate ``plane`` along ``axis``); both sides see a wall."""

    axis: int
    plane: float


class Semidiscretization:
    """Right-hand side d/dt (J u, J) of the blended DGSEM/FV scheme.

    ``surface_flux``: 'rusanov' or 'central' (entropy conservative) for
    the element faces; ``fv_flux`` defaults to the same choice for the
    interior subcell interfaces.  ``boundary_conditions`` holds one entry
    per axis: 'periodic', or a (lo, hi) pair of Wall/Dirichlet.
    """

    def __init__(self, mesh, gas, surface_flux="rusanov", fv_flux=None,
                 fv_order=2, boundary_conditions=None, internal_walls=()):
        if surface_flux not in ("rusanov", "central"):
            raise ValueError(f"unknown surface flux {surface_flux!r}")
        self.mesh = mesh
        self.gas = gas
        self.surface_flux = surface_flux
        self.fv_flux = surface_flux if fv_flux is None else fv_flux
        if fv_order not in (1, 2):
            raise ValueError("fv_order must be 1 or 2")
        self.fv_order = fv_order
        topo = mesh.topology
        if boundary_conditions is None:
            boundary_conditions = tuple(
                "periodic" if per else (Wall(), Wall())
                for per in topo.periodic)
        for k, bc in enumerate(boundary_conditions):
            if (bc == "periodic") != bool(topo.periodic[k]):
                raise ValueError(
                    f"axis {k}: boundary condition does not match topology")
        self.bcs = tuple(boundary_conditions)
        # resolve internal wall planes to face layer indices
        self._internal = []
        for wall in internal_walls:
            k = wall.axis
            h = (topo.hi[k] - topo.lo[k]) / topo.counts[k]
            f = (wall.plane - topo.lo[k]) / h - 1.0
            fi = int(round(f))
            if abs(f - fi) > 1e-12 or not 0 <= fi < topo.counts[k] - 1:
                raise ValueError(
                    f"internal wall plane {wall.plane} is not an interior "
                    f"element boundary of axis {k}")
            self._internal.append((k, fi))

    # -- state packing -------------------------------------------------

    def pack(self, u, jdet):
        y = np.empty(u.shape[:-1] + (6,))
        y[..., :5] = u * jdet[..., None]
        y[..., 5] = jdet
        return y

    def unpack(self, y):
        jdet = y[..., 5]
        return y[..., :5] / jdet[..., None], jdet

    def initial_state(self, state_fn, t=0.0):
        """Pack pointwise conserved initial data ``state_fn(x) -> q``."""
        geo = self.mesh.geometry(t)
        return self.pack(state_fn(geo.x), geo.jdet)

    # -- face fluxes ---------------------------------------------------

    def _flux(self, which, q_l, q_r, avec, g):
        if which == "rusanov":
            return rusanov_contracted(q_l, q_r, self.gas, avec, g)
        return central_contracted(q_l, q_r, self.gas, avec, g)

    def _mirror(self, q, avec, nu_f):
        """Wall ghost state: reflect the mesh-relative normal velocity."""
        rho, v, p = primitives(q, self.gas)
        nhat = avec / np.sqrt(np.sum(avec * avec, axis=-1))[..., None]
        vn = np.sum((v - nu_f) * nhat, axis=-1)
        return conserved(rho, v - 2.0 * vn[..., None] * nhat, p, self.gas)

    def _face_fluxes(self, u, geo, t):
        """Unique per-face fluxes, returned per element and direction as
        (flux at -xi face, flux at +xi face, GCL ditto)."""
        counts = self.mesh.topology.counts
        p = self.mesh.sbp.degree + 1
        n_el = self.mesh.n_elements
        ug = u.reshape(counts + (p, p, p, 5))
        xg = geo.x.reshape(counts + (p, p, p, 3))
        nug = geo.nu.reshape(counts + (p, p, p, 3))
        faces = []
        for k in range(3):
            naxis = 3 + k
            jag = geo.ja[..., k, :].reshape(counts + (p, p, p, 3))
            # +xi face data of every element layer (the canonical face
            # metric is the lower element's)
            qa = np.take(ug, -1, axis=naxis)
            qb = np.take(np.roll(ug, -1, axis=k), 0, axis=naxis)
            avec = np.take(jag, -1, axis=naxis)
            nu_f = np.take(nug, -1, axis=naxis)
            g = np.sum(avec * nu_f, axis=-1)
            flux = self._flux(self.surface_flux, qa, qb, avec, g)

            fr, fr_g = flux, g
            fl = np.roll(flux, 1, axis=k)
            fl_g = np.roll(g, 1, axis=k)

            if self.bcs[k] != "periodic":
                bc_lo, bc_hi = self.bcs[k]
                # hi boundary: interior is the q_l side
                q_in = np.take(qa, -1, axis=k)
                a_hi = np.take(avec, -1, axis=k)
                nu_hi = np.take(nu_f, -1, axis=k)
                g_hi = np.take(g, -1, axis=k)
                x_hi = np.take(np.take(xg, -1, axis=naxis), -1, axis=k)
                ghost = self._ghost(bc_hi, q_in, a_hi, nu_hi, x_hi, t)
                fr = fr.copy()
                idx = [slice(None)] * 3
                idx[k] = -1
                fr[tuple(idx)] = self._flux(self.surface_flux, q_in, ghost,
                                            a_hi, g_hi)
                # lo boundary: interior is the q_r side, metric from the
                # first element's -xi face
                q_in = np.take(np.take(ug, 0, axis=naxis), 0, axis=k)
                a_lo = np.take(np.take(jag, 0, axis=naxis), 0, axis=k)
                nu_lo = np.take(np.take(nug, 0, axis=naxis), 0, axis=k)
                g_lo = np.sum(a_lo * nu_lo, axis=-1)
                x_lo = np.take(np.take(xg, 0, axis=naxis), 0, axis=k)
                ghost = self._ghost(bc_lo, q_in, a_lo, nu_lo, x_lo, t)
                fl = fl.copy()
                fl_g = fl_g.copy()
                idx[k] = 0
                fl[tuple(idx)] = self._flux(self.surface_flux, ghost, q_in,
                                            a_lo, g_lo)
                fl_g[tuple(idx)] = g_lo

            for (axis, fi) in self._internal:
                if axis != k:
                    continue
                idx = [slice(None)] * 3
                idx[k] = fi
                q_in = qa[tuple(idx)]
                a_w = avec[tuple(idx)]
                nu_w = nu_f[tuple(idx)]
                g_w = g[tuple(idx)]
                fr = fr.copy()
                fl = fl.copy()
                fr[tuple(idx)] = self._flux(
                    self.surface_flux, q_in,
                    self._mirror(q_in, a_w, nu_w), a_w, g_w)
                q_in = qb[tuple(idx)]
                idx[k] = fi + 1
                fl[tuple(idx)] = self._flux(
                    self.surface_flux, self._mirror(q_in, a_w, nu_w), q_in,
                    a_w, g_w)

            rest = fr.shape[3:]
            faces.append((fl.reshape((n_el,) + rest),
                          fr.reshape((n_el,) + rest),
                          fl_g.reshape((n_el,) + rest[:-1]),
                          fr_g.reshape((n_el,) + rest[:-1])))
        return faces

    def _ghost(self, bc, q_in, avec, nu_f, x_f, t):
        if isinstance(bc, Wall):
            return self._mirror(q_in, avec, nu_f)
        if isinstance(bc, Dirichlet):
            return np.broadcast_to(bc.state(x_f, t), q_in.shape)
        raise ValueError(f"unknown boundary condition {bc!r}")

    # -- assembled right-hand side --------------------------------------

    def rhs(self, y, t, alpha=None):
        """d/dt of the packed state (J u, J) at time ``t``.

        ``alpha`` is the per-element blending coefficient in [0, 1]
        (0 = pure DG, 1 = pure FV); None means pure DG.
        """
        geo = self.mesh.geometry(t)
        u, _ = self.unpack(y)
        prims = NodalPrims(u, self.gas, time=t)
        faces = self._face_fluxes(u, geo, t)

        if alpha is None:
            alpha = np.zeros(self.mesh.n_elements)
        else:
            alpha = np.broadcast_to(np.asarray(alpha, dtype=float),
                                    (self.mesh.n_elements,))
        need_dg = bool(np.any(alpha < 1.0))
        need_fv = bool(np.any(alpha > 0.0))

        r_state = np.zeros_like(u)
        r_gcl = np.zeros(u.shape[:-1])
        a_el = alpha.reshape((-1,) + (1,) * 3)
        if need_dg:
            # with the compiled volume kernel the full nodal fluxes are
            # never formed; the surface correction slices its own layers
            nodal = None if _kernels.HAVE_NUMBA \
                else nodal_fluxes(prims, u, geo)
            vs, vg = dg_volume_residual(prims, u, geo, self.mesh.sbp,
                                        self.gas, nodal=nodal)
            ss, sg = dg_surface_residual(prims, u, geo, self.mesh.sbp,
                                         self.gas, faces, nodal=nodal)
            r_state += (1.0 - a_el)[..., None] * (vs + ss)
            r_gcl += (1.0 - a_el) * (vg + sg)
        if need_fv:
            fs, fg = fv_element_residual(prims, u, geo, self.mesh.sbp,
                                         self.gas, self.fv_order,
                                         self.fv_flux, faces)
            r_state += a_el[..., None] * fs
            r_gcl += a_el * fg

        dy = np.empty_like(y)
        dy[..., :5] = r_state
        dy[..., 5] = r_gcl
        return dy
