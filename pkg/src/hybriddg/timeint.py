"""Low-storage five-stage fourth-order Runge-Kutta time integration and
the CFL time step estimate."""

import numpy as np

from .physics import max_wave_speed

# Carpenter/Kennedy RK(5,4) 2N-storage coefficients
RK_A = (
    0.0,
    -567301805773.0 / 1357537059087.0,
    -2404267990393.0 / 2016746695238.0,
    -3550918686646.0 / 2091501179385.0,
    -1275806237668.0 / 842570457699.0,
)
RK_B = (
    1432997174477.0 / 9575080441755.0,
    5161836677717.0 / 13612068292357.0,
    1720146321549.0 / 2090206949498.0,
    3134564353537.0 / 4481467310338.0,
    2277821191437.0 / 14882151754819.0,
)
RK_C = (
    0.0,
    1432997174477.0 / 9575080441755.0,
    2526269341429.0 / 6820363962896.0,
    2006345519317.0 / 3224310063776.0,
    2802321613138.0 / 2924317926251.0,
)


def advance_step(rhs, y, t, dt, work=None):
    """One low-storage RK step; ``rhs(y, t)`` is evaluated five times.

    ``work`` is an optional scratch array of y's shape (reused across
    steps).  Returns the updated state (modified in place if ``work`` is
    supplied along with an owned ``y``).
    """
    if work is None:
        work = np.zeros_like(y)
    else:
        work[...] = 0.0
    y = np.array(y, copy=True)
    for a, b, c in zip(RK_A, RK_B, RK_C):
        work *= a
        work += dt * rhs(y, t + c * dt)
        y += b * work
    return y


def compute_dt(u, geo, sbp, gas, cfl):
    """CFL time step: cfl * min over nodes of 2 J / ((2N+1) sum_k lam_k)
    with the directional wave speeds lam_k = |(v - nu).Ja^k| + c |Ja^k|."""
    lam = sum(max_wave_speed(u, gas, geo.nu, geo.ja[..., k, :])
              for k in range(3))
    scale = 2.0 * geo.jdet / ((2.0 * sbp.degree + 1.0) * lam)
    return cfl * float(np.min(scale))
