"""Analytic time-dependent mesh motions and the structured hex topology.

Every motion maps a static reference position R (a point of the t = 0
mesh) to a physical position x(R, t) and the exact analytic mesh
velocity nu = dx/dt.  Velocities are never finite-differenced.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class MeshTopology:
    """Conforming structured hex topology on a box."""

    counts: tuple            # elements per axis (n1, n2, n3)
    lo: tuple = (-1.0, -1.0, -1.0)
    hi: tuple = (1.0, 1.0, 1.0)
    periodic: tuple = (True, True, True)
    n_geo: int = 1

    def __post_init__(self):
        if any(n < 1 for n in self.counts):
            raise ValueError("element counts must be >= 1")
        if self.n_geo < 1:
            raise ValueError("geometry degree must be >= 1")

    @property
    def n_elements(self):
        n1, n2, n3 = self.counts
        return n1 * n2 * n3

    @property
    def lengths(self):
        return tuple(h - l for l, h in zip(self.lo, self.hi))


@dataclass(frozen=True)
class Static:
    """No motion; x = R, nu = 0."""

    def displace(self, r, t):
        r = np.asarray(r, dtype=float)
        return r.copy(), np.zeros_like(r)


@dataclass(frozen=True)
class CornerSinusoid:
    """Sinusoidal-in-time displacement of the mesh corner lattice.

    Each coordinate is displaced by amplitude_d * sin(omega t) times a
    product of full-period sines over the box, so periodic topologies
    stay watertight.  Meant to be used with trilinear (n_geo = 1)
    geometry: only the element corners carry the motion.
    """

    amplitude: tuple
    frequency: float
    lo: tuple
    lengths: tuple
    wavenumbers: tuple = (1, 1, 1)

    def displace(self, r, t):
        r = np.asarray(r, dtype=float)
        shape = np.sin(2.0 * np.pi * self.wavenumbers[0]
                       * (r[..., 0] - self.lo[0]) / self.lengths[0])
        shape = shape * np.sin(2.0 * np.pi * self.wavenumbers[1]
                               * (r[..., 1] - self.lo[1]) / self.lengths[1])
        shape = shape * np.sin(2.0 * np.pi * self.wavenumbers[2]
                               * (r[..., 2] - self.lo[2]) / self.lengths[2])
        amp = np.asarray(self.amplitude, dtype=float)
        x = r + amp * np.sin(self.frequency * t) * shape[..., None]
        nu = (amp * self.frequency * np.cos(self.frequency * t)
              * shape[..., None]) * np.ones_like(r)
        return x, nu


@dataclass(frozen=True)
class StandingWave:
    """3D standing-wave deformation for curvilinear moving-mesh runs."""

    amplitude: float
    frequency: float
    lo: tuple
    lengths: tuple
    wavenumbers: tuple = (1, 1, 1)

    def displace(self, r, t):
        r = np.asarray(r, dtype=float)
        shape = np.ones(r.shape[:-1])
        for d in range(3):
            shape = shape * np.sin(2.0 * np.pi * self.wavenumbers[d]
                                   * (r[..., d] - self.lo[d]) / self.lengths[d])
        x = r + self.amplitude * np.sin(self.frequency * t) * shape[..., None]
        nu = (self.amplitude * self.frequency * np.cos(self.frequency * t)
              * shape[..., None]) * np.ones_like(r)
        return x, nu


@dataclass(frozen=True)
class PistonChannel:
    """Channel with an internal piston plane moving at constant speed.

    x-coordinates left of the piston start plane stretch linearly with
    the piston position x_p(t) = x_p0 + u_p t; coordinates to the right
    compress towards the fixed outer boundary.  y and z are static.
    """

    piston_speed: float
    piston_start: float
    x_lo: float
    x_hi: float

    def piston_position(self, t):
        return self.piston_start + self.piston_speed * t

    def displace(self, r, t):
        r = np.asarray(r, dtype=float)
        xp = self.piston_position(t)
        x = r.copy()
        nu = np.zeros_like(r)
        rx = r[..., 0]
        left = rx <= self.piston_start
        wl = (rx - self.x_lo) / (self.piston_start - self.x_lo)
        wr = (self.x_hi - rx) / (self.x_hi - self.piston_start)
        x[..., 0] = np.where(left,
                             self.x_lo + wl * (xp - self.x_lo),
                             self.x_hi - wr * (self.x_hi - xp))
        nu[..., 0] = np.where(left, wl, wr) * self.piston_speed
        return x, nu


def sample_motion(motion, r, t):
    """Physical position and analytic mesh velocity of reference points."""
    return motion.displace(r, t)


def is_static(motion):
    return isinstance(motion, Static)
