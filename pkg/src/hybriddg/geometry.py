"""Moving curved-element geometry: mappings, curl-form metric terms,
face metrics and the telescoped subcell-interface metrics.

The mapping of each element is the degree-n_geo tensor-product
interpolant of analytically sampled positions on a shared global
Chebyshev-Lobatto lattice; mesh velocities are sampled at the same
unique global nodes, which makes them single-valued across faces by
construction.  Contravariant vectors are computed with the conservative
curl form so the discrete metric identities hold to round-off.
"""

import numpy as np

from .meshmotion import is_static, sample_motion
from .operators import chebyshev_lobatto, interpolation_matrix


class InvertedElementError(RuntimeError):
    def __init__(self, message, element=None, time=None):
        super().__init__(message)
        self.element = element
        self.time = time


def _diff_axis(a, d, axis):
    """Apply the 1D derivative matrix along one node axis."""
    sh = a.shape
    if axis == len(sh) - 1 or axis == -1:
        return a @ d.T
    lead = int(np.prod(sh[:axis]))
    trail = int(np.prod(sh[axis + 1:]))
    out = d @ np.ascontiguousarray(a).reshape(lead, sh[axis], trail)
    return out.reshape(sh)


def metric_terms(x, d):
    """Curl-form metric terms of a nodal mapping.

    ``x``: (..., p, p, p, 3) nodal positions on the tensor grid the
    derivative matrix ``d`` lives on.  Returns (jac, jdet, ja) with
    jac[..., n, k] = dx_n/dxi_k, jdet = det(jac) and ja[..., i, n] the
    i-th contravariant vector, computed as
    ja^i_n = 1/2 (curl_xi (x_m grad_xi x_l - x_l grad_xi x_m))_i
    for (n, m, l) cyclic, which satisfies sum_i D_i ja^i_n = 0 discretely.
    """
    nax = x.ndim - 4  # leading axes before the three node axes
    dx = np.stack([_diff_axis(x, d, nax + j) for j in range(3)], axis=-2)
    # dx[..., j, n] = d x_n / d xi_j
    jac = np.swapaxes(dx, -1, -2)  # [..., n, k]
    jdet = (jac[..., 0, 0] * (jac[..., 1, 1] * jac[..., 2, 2]
                              - jac[..., 1, 2] * jac[..., 2, 1])
            - jac[..., 0, 1] * (jac[..., 1, 0] * jac[..., 2, 2]
                                - jac[..., 1, 2] * jac[..., 2, 0])
            + jac[..., 0, 2] * (jac[..., 1, 0] * jac[..., 2, 1]
                                - jac[..., 1, 1] * jac[..., 2, 0]))
    ja = np.empty_like(jac)  # [..., i, n]
    for n in range(3):
        m, l = (n + 1) % 3, (n + 2) % 3
        v = x[..., m, None] * dx[..., :, l] - x[..., l, None] * dx[..., :, m]
        # v[..., j]; curl components need cross derivatives of v
        dv = np.stack([_diff_axis(v, d, nax + j) for j in range(3)], axis=-2)
        # dv[..., j, c] = d v_c / d xi_j
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            ja[..., i, n] = 0.5 * (dv[..., j, k] - dv[..., k, j])
    return jac, jdet, ja


class GeometryCache:
    """All geometric quantities of one evaluation time.

    The telescoped subcell-interface metrics (ja_sub, g_sub, nu_sub, each
    a per-direction tuple with the line axis at position 1) are computed
    on first access, so purely high-order evaluations never pay for them.
    """

    __slots__ = ("t", "x", "nu", "jac", "jdet", "ja", "_sub", "_subfn")

    def __init__(self, t, x, nu, jac, jdet, ja, subfn):
        self.t = t
        self.x = x           # (E, p, p, p, 3) node positions
        self.nu = nu         # (E, p, p, p, 3) mesh velocity
        self.jac = jac       # (E, p, p, p, 3, 3)
        self.jdet = jdet     # (E, p, p, p)
        self.ja = ja         # (E, p, p, p, 3, 3) contravariant vectors [i, n]
        self._subfn = subfn
        self._sub = None

    def _subcell(self):
        if self._sub is None:
            self._sub = self._subfn(self.ja, self.nu)
        return self._sub

    @property
    def ja_sub(self):
        return self._subcell()[0]

    @property
    def g_sub(self):
        return self._subcell()[1]

    @property
    def nu_sub(self):
        return self._subcell()[2]


class Mesh:
    """Structured conforming hex mesh with analytic motion.

    Geometry nodes live on a global per-axis Chebyshev-Lobatto lattice
    (shared floats across neighboring elements, hence watertight), are
    displaced analytically, interpolated to the Gauss-Lobatto solution
    grid, and differentiated with the solution-grid SBP operator.
    """

    def __init__(self, topology, motion, sbp):
        if topology.n_geo > sbp.degree:
            raise ValueError("geometry degree must not exceed solution degree")
        self.topology = topology
        self.motion = motion
        self.sbp = sbp
        self._static_cache = None

        g = topology.n_geo
        cl = chebyshev_lobatto(g)
        self._interp = interpolation_matrix(cl, sbp.nodes)  # (p, g+1)

        # global reference lattice, one float per shared node
        self._axis_coords = []
        for d in range(3):
            n = topology.counts[d]
            h = (topology.hi[d] - topology.lo[d]) / n
            coords = np.empty(n * g + 1)
            for i in range(n):
                coords[i * g:(i + 1) * g + 1] = \
                    topology.lo[d] + h * i + h * 0.5 * (cl + 1.0)
            coords[-1] = topology.hi[d]
            self._axis_coords.append(coords)
        # per-element gather indices along each axis
        self._gather = [np.arange(n)[:, None] * g + np.arange(g + 1)
                        for n in topology.counts]

    @property
    def n_elements(self):
        return self.topology.n_elements

    def reference_lattice(self):
        """Global geometry-node reference positions, (G1, G2, G3, 3)."""
        a, b, c = self._axis_coords
        r = np.empty((a.size, b.size, c.size, 3))
        r[..., 0] = a[:, None, None]
        r[..., 1] = b[None, :, None]
        r[..., 2] = c[None, None, :]
        return r

    def _gather_elements(self, field):
        """(G1, G2, G3, 3) lattice field -> (E, g+1, g+1, g+1, 3)."""
        i1, i2, i3 = self._gather
        out = field[i1[:, None, None, :, None, None],
                    i2[None, :, None, None, :, None],
                    i3[None, None, :, None, None, :]]
        return out.reshape((self.n_elements,) + out.shape[3:])

    def _to_solution_grid(self, a):
        """Interpolate (E, g+1, g+1, g+1, C) to the GL grid per direction."""
        t = self._interp
        for axis in (1, 2, 3):
            a = np.moveaxis(np.tensordot(t, np.moveaxis(a, axis, 0),
                                         axes=(1, 0)), 0, axis)
        return a

    def geometry(self, t):
        """Geometry snapshot at time ``t`` (cached for static motion)."""
        if self._static_cache is not None and is_static(self.motion):
            return self._static_cache
        r = self.reference_lattice()
        x_lat, nu_lat = sample_motion(self.motion, r, t)
        x = self._to_solution_grid(self._gather_elements(x_lat))
        nu = self._to_solution_grid(self._gather_elements(nu_lat))
        jac, jdet, ja = metric_terms(x, self.sbp.D)
        if np.any(jdet <= 0.0):
            e = int(np.argmax(np.any(jdet.reshape(jdet.shape[0], -1) <= 0.0,
                                     axis=1)))
            raise InvertedElementError(
                f"non-positive Jacobian in element {e} at t={t}",
                element=e, time=t)
        cache = GeometryCache(t=t, x=x, nu=nu, jac=jac, jdet=jdet, ja=ja,
                              subfn=self._subcell_metrics)
        if is_static(self.motion):
            self._static_cache = cache
        return cache

    def _subcell_metrics(self, ja, nu):
        """Telescoped subcell-interface contravariant vectors.

        Per line in direction k the interface value is
        (Ja)_{i+1/2} = Ja(xi = -1) + sum_{j <= i} w_j (D Ja)_j,
        so the FV flux differences telescope exactly to the DG metric
        divergence; the outermost interfaces coincide with the element
        face values (nodal, since GL nodes include the endpoints).

        Stored with the line axis moved to position 1 (the layout the FV
        kernel consumes): ja_sub[k] is (E, p+1, <other nodes>, 3).
        """
        w = self.sbp.weights
        d = self.sbp.D
        p = w.size
        ja_sub, g_sub, nu_sub = [], [], []
        for k in range(3):
            axis = 1 + k
            a = np.moveaxis(ja[..., k, :], axis, 1)   # (E, p, rest, 3)
            da = np.moveaxis(_diff_axis(ja[..., k, :], d, axis), axis, 1)
            wshape = (1, p) + (1,) * (a.ndim - 2)
            sub = np.empty(a.shape[:1] + (p + 1,) + a.shape[2:])
            np.cumsum(da * w.reshape(wshape), axis=1, out=sub[:, 1:])
            sub[:, 1:] += a[:, :1]
            sub[:, 0] = a[:, 0]
            # pin the outermost interface to the nodal face metric
            sub[:, -1] = a[:, -1]
            # interface mesh velocity: nodal average inside, nodal at faces
            num = np.moveaxis(nu, axis, 1)
            nsub = np.empty_like(sub)
            nsub[:, 0] = num[:, 0]
            nsub[:, -1] = num[:, -1]
            nsub[:, 1:-1] = 0.5 * (num[:, :-1] + num[:, 1:])
            ja_sub.append(sub)
            nu_sub.append(nsub)
            g_sub.append(np.einsum("...i,...i->...", sub, nsub))
        return tuple(ja_sub), tuple(g_sub), tuple(nu_sub)


def face_geometry(geo, element, direction, side):
    """Face metric data of one element face.

    ``side`` is 0 (xi_k = -1) or 1 (xi_k = +1).  Returns (j_f, n, nu)
    at the face quadrature points, with n the outward unit physical
    normal of that side.
    """
    axis = 1 + direction
    idx = -1 if side == 1 else 0
    a = np.take(geo.ja[element], [idx], axis=axis - 1)[..., direction, :]
    a = np.squeeze(a, axis=axis - 1)
    nu = np.squeeze(np.take(geo.nu[element], [idx], axis=axis - 1),
                    axis=axis - 1)
    j_f = np.sqrt(np.sum(a * a, axis=-1))
    if np.any(j_f == 0.0):
        raise InvertedElementError("degenerate face (J_f = 0)",
                                   element=element, time=geo.t)
    sign = 1.0 if side == 1 else -1.0
    n = sign * a / j_f[..., None]
    return j_f, n, nu


def subcell_face_geometry(geo, element, direction, interface):
    """Subcell-interface metric data: (j_f, n, nu) at interface
    ``interface`` in {0, ..., p} along ``direction`` (+xi oriented)."""
    a = geo.ja_sub[direction][element, interface]
    nu = geo.nu_sub[direction][element, interface]
    j_f = np.sqrt(np.sum(a * a, axis=-1))
    n = a / np.where(j_f == 0.0, 1.0, j_f)[..., None]
    return j_f, n, nu


def build_mesh(topology, motion, sbp):
    """Construct the mesh; initial elements must not be inverted."""
    mesh = Mesh(topology, motion, sbp)
    mesh.geometry(0.0)  # validates J > 0 at t = 0
    return mesh
