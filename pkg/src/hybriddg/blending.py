"""Element-wise DG/FV blending coefficients.

Three modes: a fixed value, a seeded random field, and a modal-energy
troubled-cell indicator (threshold/sharpness defaults from the shock
capturing literature for Gauss-Lobatto DGSEM).
"""

from dataclasses import dataclass, field

import numpy as np

from .physics import primitives


@dataclass(frozen=True)
class FixedBlend:
    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError("fixed blending value must be in [0, 1]")


@dataclass(frozen=True)
class RandomBlend:
    seed: int
    low: float = 0.0
    high: float = 1.0


@dataclass(frozen=True)
class IndicatorParams:
    alpha_max: float = 0.5
    alpha_min: float = 1e-3
    # sharpness of the logistic ramp
    sharpness: float = float(np.log((1.0 - 1e-4) / 1e-4))

    def threshold(self, degree):
        return 0.5 * 10.0 ** (-1.8 * (degree + 1) ** 0.25)


@dataclass(frozen=True)
class IndicatorBlend:
    params: IndicatorParams = field(default_factory=IndicatorParams)


@dataclass
class BlendField:
    """Per-element alpha and per-face alpha (one array per direction,
    face f of direction k couples element layer f and f+1)."""

    alpha: np.ndarray
    alpha_faces: tuple
    mode: object


def face_alpha(alpha_l, alpha_r):
    """Unique face coefficient: max of the two adjacent element values."""
    return np.maximum(alpha_l, alpha_r)


def _modal_energy(coeffs, degree):
    """Relative energy in the highest (and second-highest) modes of a
    tensor-product modal coefficient block (..., p, p, p)."""
    p = degree + 1
    sq = coeffs * coeffs
    flat = sq.reshape(sq.shape[:-3] + (-1,))
    total = np.sum(flat, axis=-1)
    clip1 = np.sum(sq[..., :p - 1, :p - 1, :p - 1]
                   .reshape(sq.shape[:-3] + (-1,)), axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        e1 = np.where(total > 0.0, 1.0 - clip1 / np.maximum(total, 1e-300), 0.0)
        if degree >= 2:
            clip2 = np.sum(sq[..., :p - 2, :p - 2, :p - 2]
                           .reshape(sq.shape[:-3] + (-1,)), axis=-1)
            e2 = np.where(clip1 > 0.0,
                          1.0 - clip2 / np.maximum(clip1, 1e-300), 0.0)
            return np.maximum(e1, e2)
    return e1


def indicator_alpha(u, sbp, gas, params=IndicatorParams()):
    """Modal-energy indicator evaluated on the nodal rho*p product.

    Scale-invariant (energy ratios), mapped through a logistic threshold,
    clipped to [0, alpha_max] and zeroed below alpha_min.  Neighbor
    smoothing is a separate pass (see ``smooth_alpha``).
    """
    rho, _, p = primitives(u, gas)
    ind = rho * p
    vinv = sbp.inv_vandermonde
    coeffs = ind
    for axis in range(1, 4):
        coeffs = np.moveaxis(
            np.tensordot(vinv, np.moveaxis(coeffs, axis, 0), axes=(1, 0)),
            0, axis)
    energy = _modal_energy(coeffs, sbp.degree)
    t = params.threshold(sbp.degree)
    alpha = 1.0 / (1.0 + np.exp(-params.sharpness / t * (energy - t)))
    alpha = np.minimum(alpha, params.alpha_max)
    alpha[alpha < params.alpha_min] = 0.0
    return alpha


def smooth_alpha(alpha, counts, periodic):
    """One layer of neighbor-max diffusion: alpha_e >= alpha_nb / 2."""
    a = alpha.reshape(counts)
    out = a.copy()
    for axis in range(3):
        if counts[axis] == 1:
            continue
        for shift in (-1, 1):
            nb = np.roll(a, shift, axis=axis)
            if not periodic[axis]:
                # do not wrap across physical boundaries
                idx = [slice(None)] * 3
                idx[axis] = 0 if shift == 1 else -1
                nb[tuple(idx)] = 0.0
            out = np.maximum(out, 0.5 * nb)
    return out.reshape(alpha.shape)


def _face_alphas(alpha, counts, periodic):
    a = alpha.reshape(counts)
    faces = []
    for axis in range(3):
        faces.append(face_alpha(a, np.roll(a, -1, axis=axis)))
    return tuple(faces)


def assign_alpha(mode, mesh, u, gas, t=0.0, rng=None):
    """Evaluate the blend field for one time step (frozen per step)."""
    counts = mesh.topology.counts
    periodic = mesh.topology.periodic
    n = mesh.n_elements
    if isinstance(mode, FixedBlend):
        alpha = np.full(n, mode.value)
    elif isinstance(mode, RandomBlend):
        if rng is None:
            rng = np.random.default_rng(mode.seed)
        alpha = mode.low + (mode.high - mode.low) * rng.random(n)
    elif isinstance(mode, IndicatorBlend):
        alpha = indicator_alpha(u, mesh.sbp, gas, mode.params)
        alpha = smooth_alpha(alpha, counts, periodic)
        alpha = np.minimum(alpha, mode.params.alpha_max)
    else:
        raise ValueError(f"unknown blending mode {mode!r}")
    return BlendField(alpha=alpha,
                      alpha_faces=_face_alphas(alpha, counts, periodic),
                      mode=mode)
