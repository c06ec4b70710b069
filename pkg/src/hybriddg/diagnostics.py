"""Run diagnostics: quadrature functionals, L2 errors, EOC slopes and the
normal-shock reference states for the piston benchmark."""

import math

import numpy as np

from .physics import entropy_quantities


def _quad_weights(sbp):
    w = sbp.weights
    return w[:, None, None] * w[None, :, None] * w[None, None, :]


def l2_error(u, ref, jdet, sbp):
    """Per-variable discrete L2 error
    sqrt(sum w J (u - ref)^2 / sum w J)."""
    wt = _quad_weights(sbp)
    num = np.einsum("ijk,eijkc->c", wt, jdet[..., None] * (u - ref) ** 2)
    den = np.einsum("ijk,eijk->", wt, jdet)
    return np.sqrt(num / den)


def conserved_totals(u, jdet, sbp):
    """Total mass, momentum and energy: sum w J u."""
    wt = _quad_weights(sbp)
    return np.einsum("ijk,eijkc->c", wt, jdet[..., None] * u)


def total_entropy(u, jdet, sbp, gas):
    """Total mathematical entropy sum w J S(u)."""
    S, _, _ = entropy_quantities(u, gas)
    return float(np.einsum("ijk,eijk->", _quad_weights(sbp), jdet * S))


def integral_entropy_error(times, entropies):
    """Delta_S(t) = S_total(t) - S_total(0) per sample."""
    entropies = np.asarray(entropies, dtype=float)
    if entropies.size == 0:
        return np.empty(0)
    return entropies - entropies[0]


def eoc(errors, widths):
    """EOC slopes between consecutive refinement levels.

    slope_k = ln(e_k / e_{k+1}) / ln(h_k / h_{k+1}); exact (zero) errors
    yield inf as an "exact" sentinel.
    """
    errors = np.asarray(errors, dtype=float)
    widths = np.asarray(widths, dtype=float)
    if errors.size != widths.size:
        raise ValueError("errors and widths must have equal length")
    slopes = []
    for k in range(errors.size - 1):
        if errors[k + 1] == 0.0:
            slopes.append(math.inf)
        else:
            slopes.append(math.log(errors[k] / errors[k + 1])
                          / math.log(widths[k] / widths[k + 1]))
    return np.asarray(slopes)


def normal_shock_from_piston(gas, c0, u_p):
    """Exact states of the shock driven by a piston of speed u_p into
    quiescent gas with sound speed c0 (density 1).

    Solves M_s - 1/M_s = u_p (gamma+1) / (2 c0) for the shock Mach
    number, then applies the Rankine-Hugoniot relations.  Returns a dict
    with shock speed and post-shock density/pressure/velocity.
    """
    g = gas.gamma
    b = u_p * (g + 1.0) / (2.0 * c0)
    ms = 0.5 * (b + math.sqrt(b * b + 4.0))
    rho1 = 1.0
    p1 = rho1 * c0 * c0 / g
    rho2 = rho1 * (g + 1.0) * ms * ms / ((g - 1.0) * ms * ms + 2.0)
    p2 = p1 * (2.0 * g * ms * ms - (g - 1.0)) / (g + 1.0)
    return {
        "mach": ms,
        "shock_speed": ms * c0,
        "rho_post": rho2,
        "p_post": p2,
        "v_post": u_p,
        "rho_pre": rho1,
        "p_pre": p1,
    }
