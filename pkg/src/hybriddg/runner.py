"""Run orchestration: build a case from its configuration, advance it in
time, collect diagnostics, and write the CSV outputs."""

import os
from dataclasses import dataclass, field

import numpy as np

from .blending import assign_alpha
from .cases import (initial_state_for, reference_state_for, serialize_config)
from .diagnostics import conserved_totals, l2_error, total_entropy
from .geometry import InvertedElementError, build_mesh
from .operators import build_sbp
from .physics import StateInvalidError, primitives
from .semidisc import Dirichlet, Semidiscretization, InternalWall, Wall
from .timeint import advance_step, compute_dt


class SolverAbort(RuntimeError):
    """Integration failed; carries time and element context."""

    def __init__(self, message, time=None, element=None):
        super().__init__(message)
        self.time = time
        self.element = element


DIAGNOSTICS_COLUMNS = (
    "time", "dt",
    "l2_rho", "l2_mom1", "l2_mom2", "l2_mom3", "l2_energy",
    "mass", "mom1", "mom2", "mom3", "energy",
    "entropy", "alpha_min", "alpha_max",
)


@dataclass
class DiagnosticsSeries:
    columns: tuple = DIAGNOSTICS_COLUMNS
    rows: list = field(default_factory=list)

    def append(self, **kwargs):
        self.rows.append(tuple(float(kwargs[c]) for c in self.columns))

    def column(self, name):
        i = self.columns.index(name)
        return np.asarray([r[i] for r in self.rows])


def _fmt17(x):
    return format(float(x), ".17g")


def write_csv(path, columns, rows):
    """Comma-separated, 17 significant digits, LF line endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt17(v) for v in row) + "\n")


@dataclass
class RunResult:
    config: object
    diagnostics: DiagnosticsSeries
    y: np.ndarray
    t: float
    mesh: object
    semidisc: object
    aborted: bool = False


def build_semidiscretization(cfg):
    gas = cfg.gas()
    sbp = build_sbp(cfg.degree)
    mesh = build_mesh(cfg.topology(), cfg.build_motion(), sbp)
    initial = initial_state_for(cfg, gas)
    bcs = []
    for k, bc in enumerate(cfg.bcs):
        if bc == "periodic":
            bcs.append("periodic")
        elif bc == "wall":
            bcs.append((Wall(), Wall()))
        else:
            bcs.append((Dirichlet(initial), Dirichlet(initial)))
    walls = tuple(InternalWall(axis, plane)
                  for axis, plane in cfg.internal_walls)
    sd = Semidiscretization(
        mesh, gas, surface_flux=cfg.surface_flux, fv_order=cfg.fv_order,
        boundary_conditions=tuple(bcs), internal_walls=walls)
    return sd, initial


def _profile_rows(sd, y, geo, alpha):
    """Line extraction along x through the first (y, z) node line."""
    u, _ = sd.unpack(y)
    rho, v, p = primitives(u, sd.gas, check=False)
    counts = sd.mesh.topology.counts
    pn = sd.mesh.sbp.degree + 1
    def line(a):
        a = a.reshape(counts + (pn,) * 3 + a.shape[4:])
        return a[:, 0, 0, :, 0, 0].reshape((-1,) + a.shape[6:])
    x = line(geo.x[..., 0])
    al = np.repeat(alpha.reshape(counts)[:, 0, 0], pn)
    rows = np.column_stack([x, line(rho), line(v[..., 0]), line(p), al])
    return rows[np.argsort(rows[:, 0], kind="stable")]


def run_case(cfg, output_dir=None):
    """Run one configured case; writes config.echo, diagnostics.csv and
    (optionally) profile_<t>.csv files.  Returns a RunResult."""
    cfg.validate()
    out = cfg.output_dir if output_dir is None else output_dir
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "config.echo"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write(serialize_config(cfg))

    sd, initial = build_semidiscretization(cfg)
    gas, mesh, sbp = sd.gas, sd.mesh, sd.mesh.sbp
    reference = reference_state_for(cfg, gas)
    blend_mode = cfg.build_blending()
    rng = np.random.default_rng(cfg.seed)

    geo = mesh.geometry(0.0)
    y = sd.pack(initial(geo.x, 0.0), geo.jdet)
    t = 0.0
    out_times = np.linspace(0.0, cfg.t_end, cfg.n_outputs)
    next_out = 0
    diag = DiagnosticsSeries()
    work = np.zeros_like(y)
    aborted = False
    abort_exc = None

    def sample(dt, alpha):
        nonlocal next_out
        u, jdet = sd.unpack(y)
        geo_now = mesh.geometry(t)
        if reference is not None:
            errs = l2_error(u, reference(geo_now.x, t), jdet, sbp)
        else:
            errs = np.full(5, np.nan)
        tot = conserved_totals(u, jdet, sbp)
        diag.append(
            time=t, dt=dt,
            l2_rho=errs[0], l2_mom1=errs[1], l2_mom2=errs[2],
            l2_mom3=errs[3], l2_energy=errs[4],
            mass=tot[0], mom1=tot[1], mom2=tot[2], mom3=tot[3],
            energy=tot[4], entropy=total_entropy(u, jdet, sbp, gas),
            alpha_min=np.min(alpha), alpha_max=np.max(alpha))
        if cfg.write_profiles:
            write_csv(os.path.join(out, f"profile_{t:g}.csv"),
                      ("x", "rho", "v1", "p", "alpha"),
                      _profile_rows(sd, y, geo_now, np.asarray(alpha)))
        next_out += 1

    alpha = assign_alpha(blend_mode, mesh, sd.unpack(y)[0], gas,
                         t=0.0, rng=rng).alpha
    sample(0.0, alpha)
    try:
        while t < cfg.t_end - 1e-12 * max(1.0, cfg.t_end):
            u, _ = sd.unpack(y)
            geo = mesh.geometry(t)
            alpha = assign_alpha(blend_mode, mesh, u, gas, t=t,
                                 rng=rng).alpha
            dt = compute_dt(u, geo, sbp, gas, cfg.cfl)
            # land exactly on the next output time and on t_end
            target = min(out_times[next_out], cfg.t_end)
            if t + dt >= target - 1e-12 * max(1.0, cfg.t_end):
                dt = target - t
            y = advance_step(lambda yy, tt: sd.rhs(yy, tt, alpha),
                             y, t, dt, work=work)
            t += dt
            if t >= out_times[next_out] - 1e-12 * max(1.0, cfg.t_end):
                sample(dt, alpha)
    except (StateInvalidError, InvertedElementError) as exc:
        aborted = True
        abort_exc = exc

    write_csv(os.path.join(out, "diagnostics.csv"),
              DIAGNOSTICS_COLUMNS, diag.rows)
    if aborted:
        raise SolverAbort(
            f"solver aborted at t={t}: {abort_exc}",
            time=getattr(abort_exc, "time", t) or t,
            element=getattr(abort_exc, "element", None))
    return RunResult(config=cfg, diagnostics=diag, y=y, t=t, mesh=mesh,
                     semidisc=sd)
