import os

import numpy as np
import pytest

from hybriddg.cases import (CaseConfig, ConfigError, case_library,
                            load_config, parse_config, replace_fields,
                            serialize_config)
from hybriddg.cli import EXIT_CONFIG, EXIT_OK, main
from hybriddg.diagnostics import (eoc, l2_error, normal_shock_from_piston)
from hybriddg.operators import build_sbp
from hybriddg.physics import GasModel
from hybriddg.runner import run_case, write_csv


@pytest.mark.parametrize("tag", ["free_stream", "convergence", "tgv",
                                 "piston"])
def test_config_round_trip(tag):
    cfg = case_library(tag)
    text = serialize_config(cfg)
    assert parse_config(text) == cfg
    # serialization is stable under a round trip
    assert serialize_config(parse_config(text)) == text


def test_replace_fields_revalidates():
    cfg = case_library("free_stream")
    cfg2 = replace_fields(cfg, degree=5)
    assert cfg2.degree == 5 and cfg.degree == 4
    with pytest.raises(ConfigError):
        replace_fields(cfg, cfl=-1.0)


@pytest.mark.parametrize("kwargs", [
    {"tag": "nonsense"},
    {"degree": 0},
    {"n_geo": 9},
    {"surface_flux": "roe"},
    {"fv_order": 3},
    {"blending": {"mode": "magic"}},
    {"blending": {"mode": "fixed", "value": 2.0}},
    {"t_end": -1.0},
    {"bcs": ("wall", "periodic", "periodic")},
    {"internal_walls": ((0, 99.0),)},
])
def test_config_validation_rejects(kwargs):
    cfg = case_library("free_stream")
    with pytest.raises(ConfigError):
        replace_fields(cfg, **kwargs)


def test_malformed_config_text():
    with pytest.raises(ConfigError):
        parse_config("[case]\ntag = free_stream\n")  # missing sections
    with pytest.raises(ConfigError):
        parse_config("not a config at all [")


def test_unknown_library_tag():
    with pytest.raises(ConfigError):
        case_library("unknown")


def test_eoc_arithmetic():
    slopes = eoc([1.0, 1.0 / 16.0], [1.0, 0.5])
    assert np.allclose(slopes, [4.0])
    assert eoc([1.0, 0.0], [1.0, 0.5])[0] == np.inf
    with pytest.raises(ValueError):
        eoc([1.0], [1.0, 0.5])


def test_normal_shock_oracle_values():
    """Piston at speed 2 into unit-density gas with unit sound speed."""
    oracle = normal_shock_from_piston(GasModel(), 1.0, 2.0)
    assert abs(oracle["shock_speed"] - 2.7621) < 1e-3
    assert abs(oracle["rho_post"] - 3.6245) < 1e-3
    assert abs(oracle["p_post"] - 6.2384) < 1e-3
    # Rankine-Hugoniot mass balance across the shock
    s = oracle["shock_speed"]
    assert np.isclose(oracle["rho_pre"] * s,
                      oracle["rho_post"] * (s - oracle["v_post"]))


def test_l2_error_of_constant_offset():
    sbp = build_sbp(3)
    p = sbp.degree + 1
    u = np.zeros((2, p, p, p, 5))
    ref = np.full_like(u, 0.25)
    jdet = np.full((2, p, p, p), 0.125)
    err = l2_error(u, ref, jdet, sbp)
    assert np.allclose(err, 0.25, rtol=1e-14)


def test_write_csv_format(tmp_path):
    path = tmp_path / "out.csv"
    write_csv(path, ("a", "b"), [(1.0 / 3.0, 2.0)])
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.decode() == "a,b\n0.33333333333333331,2\n"


def _tiny_config(output_dir):
    return replace_fields(case_library("free_stream"), counts=(2, 2, 2),
                          degree=2, t_end=0.05, n_outputs=2,
                          output_dir=str(output_dir), write_profiles=True)


def test_run_case_outputs_and_determinism(tmp_path):
    cfg = _tiny_config(tmp_path / "run1")
    res = run_case(cfg)
    assert res.t == pytest.approx(cfg.t_end)
    assert not res.aborted
    assert len(res.diagnostics.rows) == cfg.n_outputs
    out = tmp_path / "run1"
    assert (out / "config.echo").exists()
    assert (out / "diagnostics.csv").exists()
    profiles = sorted(out.glob("profile_*.csv"))
    assert len(profiles) == cfg.n_outputs
    # echoed configuration reproduces the run exactly
    assert parse_config((out / "config.echo").read_text()) == cfg

    run_case(cfg, output_dir=str(tmp_path / "run2"))
    b1 = (out / "diagnostics.csv").read_bytes()
    b2 = (tmp_path / "run2" / "diagnostics.csv").read_bytes()
    assert b1 == b2

    # free stream: errors against the exact constant stay at round-off
    errs = res.diagnostics.column("l2_rho")
    assert np.max(errs) < 1e-13


def test_diagnostics_columns_complete(tmp_path):
    cfg = _tiny_config(tmp_path)
    res = run_case(cfg)
    head = (tmp_path / "diagnostics.csv").read_text().splitlines()[0]
    assert head.split(",") == list(res.diagnostics.columns)
    assert res.diagnostics.column("time")[-1] == pytest.approx(cfg.t_end)
    assert np.all(res.diagnostics.column("alpha_max") <= 1.0)


def test_cli_run_and_verify(tmp_path, capsys):
    cfg = _tiny_config(tmp_path / "cli_out")
    cfg_path = tmp_path / "case.cfg"
    cfg_path.write_text(serialize_config(cfg))
    code = main(["run", "--config", str(cfg_path),
                 "--output-dir", str(tmp_path / "cli_out")])
    assert code == EXIT_OK
    assert (tmp_path / "cli_out" / "diagnostics.csv").exists()

    assert main(["run"]) == EXIT_CONFIG
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) \
        == EXIT_CONFIG

    code = main(["verify", "--suite", "operators"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "[PASS] operators" in out


def test_taylor_green_mach_number():
    from hybriddg.cases import taylor_green_state
    from hybriddg.physics import primitives, sound_speed

    gas = GasModel()
    n = 64
    g = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    x = np.stack(np.meshgrid(g, g, g, indexing="ij"), axis=-1)
    u = taylor_green_state(gas, mach=0.1)(x)
    rho, v, p = primitives(u, gas)
    mach = np.sqrt(np.sum(v * v, axis=-1)) / sound_speed(rho, p, gas)
    i = np.unravel_index(np.argmax(np.sum(v * v, axis=-1)), rho.shape)
    assert abs(mach[i] - 0.1) < 1e-12


def test_load_config_round_trip(tmp_path):
    cfg = case_library("piston")
    path = tmp_path / "piston.cfg"
    path.write_text(serialize_config(cfg))
    assert load_config(path) == cfg
