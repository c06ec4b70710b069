"""Case configurations: a flat sectioned key-value file format, the
benchmark library, and the initial/reference states of each case."""

import configparser
import io
from dataclasses import dataclass, replace

import numpy as np

from .blending import FixedBlend, IndicatorBlend, RandomBlend
from .meshmotion import (CornerSinusoid, MeshTopology, PistonChannel,
                         StandingWave, Static)
from .operators import MAX_DEGREE
from .physics import GasModel, conserved

KNOWN_TAGS = ("free_stream", "convergence", "tgv", "piston", "custom")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass
class CaseConfig:
    tag: str
    counts: tuple
    lo: tuple
    hi: tuple
    periodic: tuple
    n_geo: int
    degree: int
    motion: dict
    surface_flux: str
    fv_order: int
    blending: dict
    cfl: float
    t_end: float
    bcs: tuple = ("periodic", "periodic", "periodic")
    internal_walls: tuple = ()
    two_point_flux: str = "ch"
    gamma: float = 1.4
    n_outputs: int = 11
    seed: int = 0
    output_dir: str = "out"
    write_profiles: bool = False

    def validate(self):
        if self.tag not in KNOWN_TAGS:
            raise ConfigError(f"unknown case tag {self.tag!r}")
        if not 1 <= self.degree <= MAX_DEGREE:
            raise ConfigError(f"degree must be in [1, {MAX_DEGREE}]")
        if not 1 <= self.n_geo <= self.degree:
            raise ConfigError("n_geo must be in [1, degree]")
        if any(n < 1 for n in self.counts):
            raise ConfigError("element counts must be >= 1")
        if any(h <= l for l, h in zip(self.lo, self.hi)):
            raise ConfigError("domain extents must be positive")
        if self.surface_flux not in ("central", "rusanov"):
            raise ConfigError(f"unknown surface flux {self.surface_flux!r}")
        if self.two_point_flux != "ch":
            raise ConfigError(f"unknown two-point flux {self.two_point_flux!r}")
        if self.fv_order not in (1, 2):
            raise ConfigError("fv_order must be 1 or 2")
        if self.blending.get("mode") not in ("fixed", "random", "indicator"):
            raise ConfigError(f"unknown blending mode {self.blending!r}")
        if self.blending["mode"] == "fixed":
            v = float(self.blending.get("value", -1.0))
            if not 0.0 <= v <= 1.0:
                raise ConfigError("fixed blending value must be in [0, 1]")
        if not self.cfl > 0.0:
            raise ConfigError("cfl must be positive")
        if self.t_end < 0.0:
            raise ConfigError("t_end must be non-negative")
        if self.n_outputs < 2:
            raise ConfigError("n_outputs must be >= 2")
        if not self.gamma > 1.0:
            raise ConfigError("gamma must be > 1")
        for bc in self.bcs:
            if bc not in ("periodic", "wall", "dirichlet"):
                raise ConfigError(f"unknown boundary condition {bc!r}")
        for k, bc in enumerate(self.bcs):
            if (bc == "periodic") != bool(self.periodic[k]):
                raise ConfigError(
                    f"axis {k}: boundary condition {bc!r} conflicts with "
                    f"periodic={self.periodic[k]}")
        for axis, plane in self.internal_walls:
            if axis not in (0, 1, 2):
                raise ConfigError("internal wall axis must be 0, 1 or 2")
            if not self.lo[axis] < plane < self.hi[axis]:
                raise ConfigError("internal wall plane outside the domain")
        return self

    def topology(self):
        return MeshTopology(counts=tuple(self.counts), lo=tuple(self.lo),
                            hi=tuple(self.hi),
                            periodic=tuple(self.periodic), n_geo=self.n_geo)

    def gas(self):
        return GasModel(gamma=self.gamma)

    def build_motion(self):
        return build_motion(self.motion, self.topology())

    def build_blending(self):
        mode = self.blending["mode"]
        if mode == "fixed":
            return FixedBlend(float(self.blending["value"]))
        if mode == "random":
            high = float(self.blending.get("high", 1.0))
            return RandomBlend(seed=self.seed, high=high)
        return IndicatorBlend()


def build_motion(spec, topology):
    kind = spec["type"]
    if kind == "static":
        return Static()
    if kind == "corner_sinusoid":
        return CornerSinusoid(
            amplitude=tuple(spec["amplitude"]),
            frequency=float(spec["frequency"]),
            lo=topology.lo, lengths=topology.lengths,
            wavenumbers=tuple(spec.get("wavenumbers", (1, 1, 1))))
    if kind == "standing_wave":
        return StandingWave(
            amplitude=float(spec["amplitude"]),
            frequency=float(spec["frequency"]),
            lo=topology.lo, lengths=topology.lengths,
            wavenumbers=tuple(spec.get("wavenumbers", (1, 1, 1))))
    if kind == "piston":
        return PistonChannel(
            piston_speed=float(spec["speed"]),
            piston_start=float(spec["start"]),
            x_lo=topology.lo[0], x_hi=topology.hi[0])
    raise ConfigError(f"unknown motion type {kind!r}")


# -- serialization ------------------------------------------------------

def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (tuple, list, np.ndarray)):
        return " ".join(_fmt(x) for x in v)
    return str(v)


def _floats(s):
    return tuple(float(x) for x in s.split())


def _ints(s):
    return tuple(int(x) for x in s.split())


def _bools(s):
    return tuple(x.lower() in ("1", "true", "yes") for x in s.split())


def serialize_config(cfg):
    """Normalized flat key-value text of a configuration."""
    cp = configparser.ConfigParser()
    cp["case"] = {"tag": cfg.tag}
    cp["mesh"] = {
        "counts": _fmt(cfg.counts),
        "lo": _fmt(tuple(float(x) for x in cfg.lo)),
        "hi": _fmt(tuple(float(x) for x in cfg.hi)),
        "periodic": _fmt(tuple(bool(b) for b in cfg.periodic)),
        "n_geo": str(cfg.n_geo),
    }
    motion = {"type": cfg.motion["type"]}
    for key, val in sorted(cfg.motion.items()):
        if key != "type":
            motion[key] = _fmt(val)
    cp["motion"] = motion
    cp["discretization"] = {
        "degree": str(cfg.degree),
        "surface_flux": cfg.surface_flux,
        "two_point_flux": cfg.two_point_flux,
        "fv_order": str(cfg.fv_order),
        "gamma": _fmt(cfg.gamma),
    }
    blend = {"mode": cfg.blending["mode"]}
    for key, val in sorted(cfg.blending.items()):
        if key != "mode":
            blend[key] = _fmt(val)
    cp["blending"] = blend
    cp["boundaries"] = {
        "bcs": " ".join(cfg.bcs),
        "internal_walls": " ".join(
            f"{axis}:{_fmt(float(plane))}"
            for axis, plane in cfg.internal_walls),
    }
    cp["time"] = {"cfl": _fmt(cfg.cfl), "t_end": _fmt(cfg.t_end)}
    cp["output"] = {
        "n_outputs": str(cfg.n_outputs),
        "directory": cfg.output_dir,
        "write_profiles": _fmt(cfg.write_profiles),
    }
    cp["run"] = {"seed": str(cfg.seed)}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


_MOTION_FLOAT_KEYS = ("frequency", "speed", "start")


def _parse_motion(section):
    spec = {"type": section["type"]}
    for key in section:
        if key == "type":
            continue
        if key == "wavenumbers":
            spec[key] = _ints(section[key])
        elif key in _MOTION_FLOAT_KEYS:
            spec[key] = float(section[key])
        else:
            spec[key] = _floats(section[key])
            if len(spec[key]) == 1:
                spec[key] = spec[key][0]
    return spec


def parse_config(text):
    """Parse the key-value format; inverse of ``serialize_config``."""
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
        blend = {"mode": cp["blending"]["mode"]}
        for key in cp["blending"]:
            if key != "mode":
                blend[key] = float(cp["blending"][key])
        walls = []
        for item in cp["boundaries"].get("internal_walls", "").split():
            axis, plane = item.split(":")
            walls.append((int(axis), float(plane)))
        cfg = CaseConfig(
            tag=cp["case"]["tag"],
            counts=_ints(cp["mesh"]["counts"]),
            lo=_floats(cp["mesh"]["lo"]),
            hi=_floats(cp["mesh"]["hi"]),
            periodic=_bools(cp["mesh"]["periodic"]),
            n_geo=int(cp["mesh"]["n_geo"]),
            degree=int(cp["discretization"]["degree"]),
            motion=_parse_motion(cp["motion"]),
            surface_flux=cp["discretization"]["surface_flux"],
            two_point_flux=cp["discretization"].get("two_point_flux", "ch"),
            fv_order=int(cp["discretization"]["fv_order"]),
            gamma=float(cp["discretization"].get("gamma", 1.4)),
            blending=blend,
            cfl=float(cp["time"]["cfl"]),
            t_end=float(cp["time"]["t_end"]),
            bcs=tuple(cp["boundaries"]["bcs"].split()),
            internal_walls=tuple(walls),
            n_outputs=int(cp["output"]["n_outputs"]),
            output_dir=cp["output"]["directory"],
            write_profiles=cp["output"].get(
                "write_profiles", "false").lower() in ("1", "true", "yes"),
            seed=int(cp["run"]["seed"]),
        )
    except (KeyError, ValueError, configparser.Error) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed configuration: {exc}") from exc
    return cfg.validate()


def load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def replace_fields(cfg, **kwargs):
    """Copy a configuration with some fields overridden, revalidated."""
    return replace(cfg, **kwargs).validate()


# -- case library -------------------------------------------------------

def case_library(tag):
    """Benchmark configuration of a known case tag."""
    if tag == "free_stream":
        return CaseConfig(
            tag="free_stream",
            counts=(4, 4, 4), lo=(-1.0, -1.0, -1.0), hi=(1.0, 1.0, 1.0),
            periodic=(True, True, True), n_geo=1, degree=4,
            motion={"type": "corner_sinusoid",
                    "amplitude": (0.06, 0.06, 0.06),
                    "frequency": 2.0 * np.pi},
            surface_flux="rusanov", fv_order=1,
            blending={"mode": "random"},
            cfl=0.9, t_end=1.0, seed=2024,
        ).validate()
    if tag == "convergence":
        return CaseConfig(
            tag="convergence",
            counts=(4, 4, 4), lo=(-1.0, -1.0, -1.0), hi=(1.0, 1.0, 1.0),
            periodic=(True, True, True), n_geo=1, degree=4,
            motion={"type": "corner_sinusoid",
                    "amplitude": (0.04, 0.04, 0.04),
                    "frequency": 2.0 * np.pi},
            surface_flux="rusanov", fv_order=1,
            blending={"mode": "fixed", "value": 0.0},
            cfl=0.1, t_end=1.0, seed=0,
        ).validate()
    if tag == "tgv":
        return CaseConfig(
            tag="tgv",
            counts=(16, 16, 16), lo=(0.0, 0.0, 0.0),
            hi=(2.0 * np.pi,) * 3,
            periodic=(True, True, True), n_geo=2, degree=3,
            motion={"type": "standing_wave", "amplitude": 0.1,
                    "frequency": 1.0},
            surface_flux="central", fv_order=1,
            blending={"mode": "fixed", "value": 0.3},
            cfl=0.25, t_end=1.0, seed=0,
        ).validate()
    if tag == "piston":
        return CaseConfig(
            tag="piston",
            counts=(280, 1, 1), lo=(-20.0, 0.0, 0.0), hi=(50.0, 10.0, 10.0),
            periodic=(False, True, True), n_geo=1, degree=3,
            motion={"type": "piston", "speed": 2.0, "start": 0.0},
            surface_flux="rusanov", fv_order=2,
            blending={"mode": "indicator"},
            bcs=("dirichlet", "periodic", "periodic"),
            internal_walls=((0, 0.0),),
            cfl=0.7, t_end=11.0, seed=0, write_profiles=True,
        ).validate()
    raise ConfigError(f"no library entry for tag {tag!r}")


# -- initial and reference states ---------------------------------------

def free_stream_state(gas):
    """Uniform state of the free-stream test."""
    def state(x, t=0.0):
        shape = np.shape(x)[:-1]
        rho = np.ones(shape)
        v = np.full(shape + (3,), 0.3)
        p = np.full(shape, 17.857)
        return conserved(rho, v, p, gas)
    return state


def density_wave_state(gas):
    """Exact advected density wave: rho = 1 + 0.3 sin(pi (x+y+z - 0.9 t)),
    v = (0.3, 0.3, 0.3), constant pressure."""
    def state(x, t=0.0):
        phase = np.pi * (x[..., 0] + x[..., 1] + x[..., 2] - 0.9 * t)
        rho = 1.0 + 0.3 * np.sin(phase)
        v = np.full(np.shape(x), 0.3)
        p = np.ones(rho.shape)
        return conserved(rho, v, p, gas)
    return state


def taylor_green_state(gas, mach=0.1):
    """Inviscid Taylor-Green vortex at background Mach number ``mach``."""
    def state(x, t=0.0):
        x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
        rho = np.ones(x1.shape)
        v = np.stack([np.sin(x1) * np.cos(x2) * np.cos(x3),
                      -np.cos(x1) * np.sin(x2) * np.cos(x3),
                      np.zeros_like(x1)], axis=-1)
        p0 = 1.0 / (gas.gamma * mach * mach)
        p = p0 + (np.cos(2.0 * x1) + np.cos(2.0 * x2)) \
            * (np.cos(2.0 * x3) + 2.0) / 16.0
        return conserved(rho, v, p, gas)
    return state


def piston_quiescent_state(gas):
    """Gas at rest with unit density and unit sound speed."""
    def state(x, t=0.0):
        shape = np.shape(x)[:-1]
        rho = np.ones(shape)
        v = np.zeros(shape + (3,))
        p = np.full(shape, 1.0 / gas.gamma)
        return conserved(rho, v, p, gas)
    return state


def initial_state_for(cfg, gas):
    if cfg.tag == "free_stream":
        return free_stream_state(gas)
    if cfg.tag == "convergence":
        return density_wave_state(gas)
    if cfg.tag == "tgv":
        return taylor_green_state(gas)
    if cfg.tag == "piston":
        return piston_quiescent_state(gas)
    raise ConfigError(f"case {cfg.tag!r} has no built-in initial state")


def reference_state_for(cfg, gas):
    """Exact solution where one exists (None otherwise)."""
    if cfg.tag == "free_stream":
        return free_stream_state(gas)
    if cfg.tag == "convergence":
        return density_wave_state(gas)
    return None
