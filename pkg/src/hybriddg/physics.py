"""Compressible Euler state algebra and pointwise flux functions.

Conserved vectors live on the last axis as (rho, rho*v1, rho*v2, rho*v3,
rho*e); every function broadcasts over arbitrary leading dimensions.
The entropy pair is S = -rho*s/(gamma-1) with s = ln(p * rho^-gamma),
entropy flux potential psi_k = rho*v_k.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GasModel:
    """Calorically perfect gas. gamma = 1.4 makes the quiescent piston
    state (rho, p) = (1, 5/7) have unit sound speed."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError("gamma must be > 1")


class StateInvalidError(RuntimeError):
    """Non-positive density or pressure; carries where it happened."""

    def __init__(self, message, element=None, node=None, time=None):
        super().__init__(message)
        self.element = element
        self.node = node
        self.time = time


def _check_positive(rho, p, time=None):
    bad = (rho <= 0.0) | (p <= 0.0) | ~np.isfinite(rho) | ~np.isfinite(p)
    if np.any(bad):
        idx = np.unravel_index(np.argmax(bad), np.shape(bad))
        element = idx[0] if len(idx) > 1 else None
        raise StateInvalidError(
            f"non-positive density/pressure at index {idx}"
            + (f", t={time}" if time is not None else ""),
            element=element, node=idx[1:] if len(idx) > 1 else idx, time=time)


def primitives(q, gas, check=True, time=None):
    """(rho, v, p) from conserved variables. Raises StateInvalidError on
    non-positive density or pressure when ``check`` is set."""
    q = np.asarray(q, dtype=float)
    rho = q[..., 0]
    v = q[..., 1:4] / rho[..., None]
    p = (gas.gamma - 1.0) * (q[..., 4]
                             - 0.5 * rho * np.einsum("...i,...i->...", v, v))
    if check:
        _check_positive(rho, p, time=time)
    return rho, v, p


def conserved(rho, v, p, gas):
    """Assemble the conserved vector from primitives."""
    rho = np.asarray(rho, dtype=float)
    v = np.asarray(v, dtype=float)
    p = np.asarray(p, dtype=float)
    q = np.empty(np.broadcast_shapes(rho.shape, p.shape, v.shape[:-1]) + (5,))
    q[..., 0] = rho
    q[..., 1:4] = rho[..., None] * v
    q[..., 4] = p / (gas.gamma - 1.0) + 0.5 * rho * np.sum(v * v, axis=-1)
    return q


def sound_speed(rho, p, gas):
    return np.sqrt(gas.gamma * p / rho)


def physical_flux(q, gas, direction):
    """Convective flux f_k, ``direction`` in {0, 1, 2}."""
    rho, v, p = primitives(q, gas)
    vk = v[..., direction]
    f = np.empty_like(np.asarray(q, dtype=float))
    f[..., 0] = rho * vk
    f[..., 1:4] = rho[..., None] * v * vk[..., None]
    f[..., 1 + direction] += p
    f[..., 4] = vk * (np.asarray(q)[..., 4] + p)
    return f


def entropy_quantities(q, gas):
    """Entropy S, entropy variables w = dS/dq, and flux potential psi."""
    rho, v, p = primitives(q, gas)
    g = gas.gamma
    s = np.log(p) - g * np.log(rho)
    S = -rho * s / (g - 1.0)
    w = np.empty_like(np.asarray(q, dtype=float))
    w[..., 0] = (g - s) / (g - 1.0) - 0.5 * rho * np.sum(v * v, axis=-1) / p
    w[..., 1:4] = rho[..., None] * v / p[..., None]
    w[..., 4] = -rho / p
    psi = rho[..., None] * v
    return S, w, psi


def log_mean(a, b):
    """Logarithmic mean (a-b)/(ln a - ln b), series-stabilized near a = b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a <= 0.0) or np.any(b <= 0.0):
        raise ValueError("log_mean requires positive arguments")
    return _log_mean_ln(a, np.log(a), b, np.log(b))


def _log_mean_ln(a, ln_a, b, ln_b):
    """Log mean with precomputed logarithms (hot path helper)."""
    apb = a + b
    f = (a - b) / apb
    z = f * f
    # truncated series of 2*artanh(f)/f; relative error < 1e-17 for z < 1e-4
    out = np.asarray(
        apb / (2.0 * (1.0 + z * (1.0 / 3.0 + z * (1.0 / 5.0 + z / 7.0)))))
    big = np.asarray(z >= 1e-4)
    if big.any():
        np.divide(np.asarray(a - b), np.asarray(ln_a - ln_b),
                  out=out, where=big)
    return out


class _PairMeans:
    """Shared two-point averages of the Chandrashekar flux family."""

    __slots__ = ("rho_ln", "beta_ln", "v_bar", "p_bar", "v2_bar", "vv_bar")

    def __init__(self, rho_a, v_a, beta_a, ln_rho_a, ln_beta_a,
                 rho_b, v_b, beta_b, ln_rho_b, ln_beta_b):
        self.rho_ln = _log_mean_ln(rho_a, ln_rho_a, rho_b, ln_rho_b)
        self.beta_ln = _log_mean_ln(beta_a, ln_beta_a, beta_b, ln_beta_b)
        self.v_bar = 0.5 * (v_a + v_b)
        self.p_bar = 0.5 * (rho_a + rho_b) / (beta_a + beta_b)
        self.v2_bar = 0.5 * (np.einsum("...i,...i->...", v_a, v_a)
                             + np.einsum("...i,...i->...", v_b, v_b))
        self.vv_bar = np.einsum("...i,...i->...", self.v_bar, self.v_bar)


def _means_from_states(q_a, q_b, gas):
    rho_a, v_a, p_a = primitives(q_a, gas, check=False)
    rho_b, v_b, p_b = primitives(q_b, gas, check=False)
    beta_a = 0.5 * rho_a / p_a
    beta_b = 0.5 * rho_b / p_b
    return _PairMeans(rho_a, v_a, beta_a, np.log(rho_a), np.log(beta_a),
                      rho_b, v_b, beta_b, np.log(rho_b), np.log(beta_b))


def _ec_flux_contracted(means, avec, gas):
    """CH entropy-conservative flux contracted with a metric vector.

    ``avec[..., n]`` is the direction vector; returns sum_n avec_n * f#_n.
    """
    va = np.sum(means.v_bar * avec, axis=-1)
    f_rho = means.rho_ln * va
    f = np.empty(f_rho.shape + (5,))
    f[..., 0] = f_rho
    f[..., 1:4] = means.v_bar * f_rho[..., None] + means.p_bar[..., None] * avec
    f[..., 4] = (0.5 / ((gas.gamma - 1.0) * means.beta_ln)
                 - 0.5 * means.v2_bar + means.vv_bar) * f_rho \
        + means.p_bar * va
    return f


def _state_function(means, gas):
    """ALE two-point state q#; satisfies (w_i - w_j) . q# = rho_i - rho_j,
    the jump of the entropy flux potential of the mesh-transport flux."""
    q = np.empty(means.rho_ln.shape + (5,))
    q[..., 0] = means.rho_ln
    q[..., 1:4] = means.rho_ln[..., None] * means.v_bar
    q[..., 4] = means.rho_ln * (0.5 / ((gas.gamma - 1.0) * means.beta_ln)
                                - 0.5 * means.v2_bar + means.vv_bar)
    return q


def _ale_flux_contracted(means, avec, g, gas):
    """Fused contravariant ALE two-point flux
    avec . f#(means) - g * q#(means); the shared structure of the EC flux
    and the state function makes this cheaper than the two-term form."""
    vg = np.einsum("...i,...i->...", means.v_bar, avec) - g
    f_rho = means.rho_ln * vg
    f = np.empty(f_rho.shape + (5,))
    f[..., 0] = f_rho
    f[..., 1:4] = means.v_bar * f_rho[..., None] + means.p_bar[..., None] * avec
    f[..., 4] = (0.5 / ((gas.gamma - 1.0) * means.beta_ln)
                 - 0.5 * means.v2_bar + means.vv_bar) * f_rho \
        + means.p_bar * (vg + g)
    return f


def ec_two_point_flux(q_a, q_b, gas, direction):
    """Entropy-conservative (Chandrashekar) two-point flux in one of the
    three Cartesian directions; symmetric, consistent, and satisfies the
    Tadmor condition (w_a - w_b) . f# = psi_a - psi_b."""
    means = _means_from_states(q_a, q_b, gas)
    avec = np.zeros(means.rho_ln.shape + (3,))
    avec[..., direction] = 1.0
    return _ec_flux_contracted(means, avec, gas)


def ale_state_function(q_a, q_b, gas):
    """Symmetric consistent two-point state for the ALE transport term."""
    return _state_function(_means_from_states(q_a, q_b, gas), gas)


def rusanov_contracted(q_l, q_r, gas, avec, g):
    """Rusanov flux contracted with a (non-unit) face metric vector.

    ``avec`` is J_f * n, ``g = avec . nu`` the metric-scaled mesh-normal
    velocity.  Equals J_f * rusanov_flux(..., n, nu_n) for n = avec/|avec|.
    """
    rho_l, v_l, p_l = primitives(q_l, gas, check=False)
    rho_r, v_r, p_r = primitives(q_r, gas, check=False)
    return _rusanov_from_prims(rho_l, v_l, p_l, np.asarray(q_l),
                               rho_r, v_r, p_r, np.asarray(q_r),
                               gas, avec, g)


def _rusanov_from_prims(rho_l, v_l, p_l, q_l, rho_r, v_r, p_r, q_r,
                        gas, avec, g):
    anorm = np.sqrt(np.einsum("...i,...i->...", avec, avec))
    lam_l = np.abs(np.einsum("...i,...i->...", v_l, avec) - g) \
        + sound_speed(rho_l, p_l, gas) * anorm
    lam_r = np.abs(np.einsum("...i,...i->...", v_r, avec) - g) \
        + sound_speed(rho_r, p_r, gas) * anorm
    lam = np.maximum(lam_l, lam_r)
    fl = _flux_dot(rho_l, v_l, p_l, q_l[..., 4], avec)
    fr = _flux_dot(rho_r, v_r, p_r, q_r[..., 4], avec)
    return (0.5 * (fl + fr) - 0.5 * g[..., None] * (q_l + q_r)
            - 0.5 * lam[..., None] * (q_r - q_l))


def _flux_dot(rho, v, p, rhoe, avec):
    """Physical flux contracted with a direction vector."""
    va = np.einsum("...i,...i->...", v, avec)
    f = np.empty(va.shape + (5,))
    f[..., 0] = rho * va
    f[..., 1:4] = rho[..., None] * v * va[..., None] + p[..., None] * avec
    f[..., 4] = va * (rhoe + p)
    return f


def central_contracted(q_l, q_r, gas, avec, g):
    """Non-dissipative EC surface flux: avec.f#(qL,qR) - g * q#(qL,qR)."""
    means = _means_from_states(q_l, q_r, gas)
    return _ale_flux_contracted(means, avec, np.asarray(g, dtype=float), gas)


def rusanov_flux(q_l, q_r, gas, n, nu_n):
    """ALE Rusanov flux through a face with unit normal ``n`` moving at
    normal velocity ``nu_n``."""
    n = np.asarray(n, dtype=float)
    nu_n = np.asarray(nu_n, dtype=float)
    return rusanov_contracted(np.asarray(q_l, dtype=float),
                              np.asarray(q_r, dtype=float), gas, n, nu_n)


def max_wave_speed(q, gas, nu, a):
    """|(v - nu) . a| + c |a| -- directional wave speed estimate used for
    the CFL time step."""
    rho, v, p = primitives(q, gas)
    a = np.asarray(a, dtype=float)
    rel = np.sum((v - nu) * a, axis=-1)
    return np.abs(rel) + sound_speed(rho, p, gas) * np.sqrt(np.sum(a * a, axis=-1))
