"""Optional compiled hot loops (numba).

The flux-differencing volume kernel and the first-order FV subcell
update dominate the runtime of every run; their numpy formulations
materialize all node pairs and are memory-bound.  The loop versions here
compute each pair once in registers and scatter it immediately.  Results
agree with the numpy twins in dg.py / fv.py up to summation round-off.

Both kernels consume the packed nodal field
    pn[..., 0] = rho, pn[..., 1:4] = v, pn[..., 4] = beta = rho/(2p),
    pn[..., 5] = ln rho, pn[..., 6] = ln beta, pn[..., 7] = p,
    pn[..., 8:13] = conserved state
built once per right-hand-side evaluation (NodalPrims.packed).

Importing this module never fails: without numba, HAVE_NUMBA is False
and callers keep the numpy path.
"""

import numpy as np

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func
        return wrap(args[0]) if args and callable(args[0]) else wrap


@njit(cache=True, inline="always")
def _log_mean(a, ln_a, b, ln_b):
    s = a + b
    f = (a - b) / s
    z = f * f
    # same series split as physics._log_mean_ln
    if z < 1e-4:
        return s / (2.0 * (1.0 + z * (1.0 / 3.0 + z * (1.0 / 5.0 + z / 7.0))))
    return (a - b) / (ln_a - ln_b)


@njit(cache=True)
def _dg_line(pn, ja, nu, qw, qwt, gm1, rs, rg):
    """One node line of the flux-differencing sum in one direction.

    qw[i, j] = 2 Q_ij / w_i and qwt[i, j] = 2 Q_ji / w_j; for j = i only
    the i side is accumulated.
    """
    p = pn.shape[0]
    for i in range(p):
        rho_i = pn[i, 0]
        vi0, vi1, vi2 = pn[i, 1], pn[i, 2], pn[i, 3]
        bet_i = pn[i, 4]
        lr_i = pn[i, 5]
        lb_i = pn[i, 6]
        v2_i = vi0 * vi0 + vi1 * vi1 + vi2 * vi2
        for j in range(i, p):
            qij = qw[i, j]
            qji = qwt[i, j]
            if qij == 0.0 and qji == 0.0:
                continue
            a0 = 0.5 * (ja[i, 0] + ja[j, 0])
            a1 = 0.5 * (ja[i, 1] + ja[j, 1])
            a2 = 0.5 * (ja[i, 2] + ja[j, 2])
            g = (a0 * 0.5 * (nu[i, 0] + nu[j, 0])
                 + a1 * 0.5 * (nu[i, 1] + nu[j, 1])
                 + a2 * 0.5 * (nu[i, 2] + nu[j, 2]))
            vb0 = 0.5 * (vi0 + pn[j, 1])
            vb1 = 0.5 * (vi1 + pn[j, 2])
            vb2 = 0.5 * (vi2 + pn[j, 3])
            rho_ln = _log_mean(rho_i, lr_i, pn[j, 0], pn[j, 5])
            beta_ln = _log_mean(bet_i, lb_i, pn[j, 4], pn[j, 6])
            p_bar = 0.5 * (rho_i + pn[j, 0]) / (bet_i + pn[j, 4])
            v2_bar = 0.5 * (v2_i + pn[j, 1] * pn[j, 1]
                            + pn[j, 2] * pn[j, 2] + pn[j, 3] * pn[j, 3])
            vv_bar = vb0 * vb0 + vb1 * vb1 + vb2 * vb2
            vg = vb0 * a0 + vb1 * a1 + vb2 * a2 - g
            f_rho = rho_ln * vg
            f0 = f_rho
            f1 = vb0 * f_rho + p_bar * a0
            f2 = vb1 * f_rho + p_bar * a1
            f3 = vb2 * f_rho + p_bar * a2
            f4 = (0.5 / (gm1 * beta_ln) - 0.5 * v2_bar + vv_bar) * f_rho \
                + p_bar * (vg + g)
            rs[i, 0] -= qij * f0
            rs[i, 1] -= qij * f1
            rs[i, 2] -= qij * f2
            rs[i, 3] -= qij * f3
            rs[i, 4] -= qij * f4
            rg[i] += qij * g
            if j > i:
                rs[j, 0] -= qji * f0
                rs[j, 1] -= qji * f1
                rs[j, 2] -= qji * f2
                rs[j, 3] -= qji * f3
                rs[j, 4] -= qji * f4
                rg[j] += qji * g


@njit(cache=True)
def dg_volume(pn, ja, nu, qw, qwt, gm1, rs, rg):
    """Flux-differencing volume terms; fills rs (E, p, p, p, 5) and
    rg (E, p, p, p) with the weighted residuals of all three directions."""
    n_el = pn.shape[0]
    p = pn.shape[1]
    for e in range(n_el):
        for b in range(p):
            for c in range(p):
                _dg_line(pn[e, :, b, c], ja[e, :, b, c, 0], nu[e, :, b, c],
                         qw, qwt, gm1, rs[e, :, b, c], rg[e, :, b, c])
                _dg_line(pn[e, b, :, c], ja[e, b, :, c, 1], nu[e, b, :, c],
                         qw, qwt, gm1, rs[e, b, :, c], rg[e, b, :, c])
                _dg_line(pn[e, b, c, :], ja[e, b, c, :, 2], nu[e, b, c, :],
                         qw, qwt, gm1, rs[e, b, c, :], rg[e, b, c, :])


@njit(cache=True)
def _fv1_line(pn, asub, gsub, fl0, fl1, fl2, fl3, fl4, fr0, fr1, fr2, fr3,
              fr4, flg, frg, w, gm1, gamma, central, rs, rg):
    """First-order FV flux differences along one subcell line.

    asub/gsub are the full (p+1) interface metrics of the line; the
    outermost interfaces use the shared face fluxes instead.
    """
    p = pn.shape[0]
    pf0, pf1, pf2, pf3, pf4 = fl0, fl1, fl2, fl3, fl4
    pg = flg
    for i in range(p):
        if i < p - 1:
            a0, a1, a2 = asub[i + 1, 0], asub[i + 1, 1], asub[i + 1, 2]
            g = gsub[i + 1]
            j = i + 1
            if central:
                vb0 = 0.5 * (pn[i, 1] + pn[j, 1])
                vb1 = 0.5 * (pn[i, 2] + pn[j, 2])
                vb2 = 0.5 * (pn[i, 3] + pn[j, 3])
                rho_ln = _log_mean(pn[i, 0], pn[i, 5], pn[j, 0], pn[j, 5])
                beta_ln = _log_mean(pn[i, 4], pn[i, 6], pn[j, 4], pn[j, 6])
                p_bar = 0.5 * (pn[i, 0] + pn[j, 0]) / (pn[i, 4] + pn[j, 4])
                v2_bar = 0.5 * (pn[i, 1] ** 2 + pn[i, 2] ** 2 + pn[i, 3] ** 2
                                + pn[j, 1] ** 2 + pn[j, 2] ** 2
                                + pn[j, 3] ** 2)
                vv_bar = vb0 * vb0 + vb1 * vb1 + vb2 * vb2
                vg = vb0 * a0 + vb1 * a1 + vb2 * a2 - g
                f_rho = rho_ln * vg
                f0 = f_rho
                f1 = vb0 * f_rho + p_bar * a0
                f2 = vb1 * f_rho + p_bar * a1
                f3 = vb2 * f_rho + p_bar * a2
                f4 = (0.5 / (gm1 * beta_ln) - 0.5 * v2_bar + vv_bar) * f_rho \
                    + p_bar * (vg + g)
            else:
                anorm = np.sqrt(a0 * a0 + a1 * a1 + a2 * a2)
                va_i = pn[i, 1] * a0 + pn[i, 2] * a1 + pn[i, 3] * a2
                va_j = pn[j, 1] * a0 + pn[j, 2] * a1 + pn[j, 3] * a2
                lam_i = abs(va_i - g) \
                    + np.sqrt(gamma * pn[i, 7] / pn[i, 0]) * anorm
                lam_j = abs(va_j - g) \
                    + np.sqrt(gamma * pn[j, 7] / pn[j, 0]) * anorm
                lam = max(lam_i, lam_j)
                f0 = 0.5 * (pn[i, 0] * va_i + pn[j, 0] * va_j
                            - g * (pn[i, 8] + pn[j, 8])
                            - lam * (pn[j, 8] - pn[i, 8]))
                f1 = 0.5 * (pn[i, 0] * pn[i, 1] * va_i
                            + pn[j, 0] * pn[j, 1] * va_j
                            + (pn[i, 7] + pn[j, 7]) * a0
                            - g * (pn[i, 9] + pn[j, 9])
                            - lam * (pn[j, 9] - pn[i, 9]))
                f2 = 0.5 * (pn[i, 0] * pn[i, 2] * va_i
                            + pn[j, 0] * pn[j, 2] * va_j
                            + (pn[i, 7] + pn[j, 7]) * a1
                            - g * (pn[i, 10] + pn[j, 10])
                            - lam * (pn[j, 10] - pn[i, 10]))
                f3 = 0.5 * (pn[i, 0] * pn[i, 3] * va_i
                            + pn[j, 0] * pn[j, 3] * va_j
                            + (pn[i, 7] + pn[j, 7]) * a2
                            - g * (pn[i, 11] + pn[j, 11])
                            - lam * (pn[j, 11] - pn[i, 11]))
                f4 = 0.5 * (va_i * (pn[i, 12] + pn[i, 7])
                            + va_j * (pn[j, 12] + pn[j, 7])
                            - g * (pn[i, 12] + pn[j, 12])
                            - lam * (pn[j, 12] - pn[i, 12]))
        else:
            f0, f1, f2, f3, f4 = fr0, fr1, fr2, fr3, fr4
            g = frg
        inv = 1.0 / w[i]
        rs[i, 0] -= (f0 - pf0) * inv
        rs[i, 1] -= (f1 - pf1) * inv
        rs[i, 2] -= (f2 - pf2) * inv
        rs[i, 3] -= (f3 - pf3) * inv
        rs[i, 4] -= (f4 - pf4) * inv
        rg[i] += (g - pg) * inv
        pf0, pf1, pf2, pf3, pf4 = f0, f1, f2, f3, f4
        pg = g


@njit(cache=True)
def fv1_direction(k, pn, asub, gsub, fl, fr, flg, frg, w, gm1, gamma,
                  central, rs, rg):
    """First-order FV residual contribution of one direction."""
    n_el = pn.shape[0]
    p = pn.shape[1]
    for e in range(n_el):
        for b in range(p):
            for c in range(p):
                if k == 0:
                    _fv1_line(pn[e, :, b, c], asub[e, :, b, c],
                              gsub[e, :, b, c],
                              fl[e, b, c, 0], fl[e, b, c, 1], fl[e, b, c, 2],
                              fl[e, b, c, 3], fl[e, b, c, 4],
                              fr[e, b, c, 0], fr[e, b, c, 1], fr[e, b, c, 2],
                              fr[e, b, c, 3], fr[e, b, c, 4],
                              flg[e, b, c], frg[e, b, c], w, gm1, gamma,
                              central, rs[e, :, b, c], rg[e, :, b, c])
                elif k == 1:
                    _fv1_line(pn[e, b, :, c], asub[e, :, b, c],
                              gsub[e, :, b, c],
                              fl[e, b, c, 0], fl[e, b, c, 1], fl[e, b, c, 2],
                              fl[e, b, c, 3], fl[e, b, c, 4],
                              fr[e, b, c, 0], fr[e, b, c, 1], fr[e, b, c, 2],
                              fr[e, b, c, 3], fr[e, b, c, 4],
                              flg[e, b, c], frg[e, b, c], w, gm1, gamma,
                              central, rs[e, b, :, c], rg[e, b, :, c])
                else:
                    _fv1_line(pn[e, b, c, :], asub[e, :, b, c],
                              gsub[e, :, b, c],
                              fl[e, b, c, 0], fl[e, b, c, 1], fl[e, b, c, 2],
                              fl[e, b, c, 3], fl[e, b, c, 4],
                              fr[e, b, c, 0], fr[e, b, c, 1], fr[e, b, c, 2],
                              fr[e, b, c, 3], fr[e, b, c, 4],
                              flg[e, b, c], frg[e, b, c], w, gm1, gamma,
                              central, rs[e, b, c, :], rg[e, b, c, :])
