"""TOML config parsing, round-trips, hashing, and the run manifest."""

import json
import math

import numpy as np
import pytest

from merogrowth import (
    CoeffSpec,
    ConfigError,
    EquationSpec,
    ExperimentConfig,
    GridSpec,
    InitialSpec,
    ParameterSpec,
    RunManifest,
    build_case,
    canonical_hash,
    config_to_toml,
    parse_config,
)
from merogrowth.functions import eval_at

CUSTOM_TOML = """
[equation]
name = "mixed"
order = 2

[[equation.coefficient]]
kind = "rational"
num = [[1.0, 0.0], [0.0, 1.0]]
den = [[-1.5, 0.0], [1.0, 0.0]]

[[equation.coefficient]]
kind = "quotient"

[[equation.coefficient.terms]]
b = [1.0, 0.0]
poly = [[2.0, 0.0]]

[[equation.coefficient.terms]]
b = [0.0, 0.0]
poly = [[0.0, 0.0], [3.0, 0.0]]

[initial]
rho = 0.2
theta0 = 0.1
state = [[1.0, 0.0], [0.5, 0.0]]

[parameters]
eta = [0.1, 0.5]
C = 2.718281828459045
R_mode = "fixed"
R = 40.0

[grid]
min = 1.0
max = 8.0
points = 4
spacing = "linear"

[tolerances]
ode = 1e-9

[output]
dir = "scratch"
"""


@pytest.fixture()
def custom_cfg(tmp_path):
    p = tmp_path / "mixed.toml"
    p.write_text(CUSTOM_TOML)
    return parse_config(p)


def test_corpus_config_roundtrip(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text(
        '[equation]\nname = "e"\ncorpus = "euler"\n\n[initial]\nrho = 0.5\n'
        + '\n[grid]\nmin = 1.0\nmax = 2.0\npoints = 2\n'
    )
    cfg = parse_config(p)
    assert cfg.equation.corpus == "euler"
    q = tmp_path / "again.toml"
    q.write_text(config_to_toml(cfg))
    cfg2 = parse_config(q)
    assert cfg2.to_dict() == cfg.to_dict()


def test_custom_roundtrip_and_kinds(custom_cfg, tmp_path):
    cfg = custom_cfg
    assert [c.kind for c in cfg.equation.coefficients] == ["rational", "quotient"]
    q = tmp_path / "rt.toml"
    q.write_text(config_to_toml(cfg))
    assert parse_config(q).to_dict() == cfg.to_dict()


def test_named_and_product_kinds_roundtrip(tmp_path):
    p = tmp_path / "n.toml"
    p.write_text("""
[equation]
name = "n"
order = 2

[[equation.coefficient]]
kind = "named"
name = "exp"

[[equation.coefficient]]
kind = "product"
name = "exp"
num = [[0.0, 0.0], [1.0, 0.0]]
den = [[-1.0, 0.0], [1.0, 0.0]]

[initial]
rho = 0.1

[grid]
min = 1.0
max = 2.0
points = 2
""")
    cfg = parse_config(p)
    q = tmp_path / "n2.toml"
    q.write_text(config_to_toml(cfg))
    assert parse_config(q).to_dict() == cfg.to_dict()
    f0, f1 = [c.build(100.0, f"f{i}") for i, c in enumerate(cfg.equation.coefficients)]
    z = 0.5 + 0.25j
    assert eval_at(f0, z) == pytest.approx(np.exp(z), rel=1e-12)
    assert eval_at(f1, z) == pytest.approx(np.exp(z) * z / (z - 1.0), rel=1e-12)


def test_canonical_hash_stability(custom_cfg, tmp_path):
    h1 = canonical_hash(custom_cfg)
    p = tmp_path / "rehash.toml"
    p.write_text(config_to_toml(custom_cfg))
    assert canonical_hash(parse_config(p)) == h1
    assert len(h1) == 64 and set(h1) <= set("0123456789abcdef")
    # any parameter change moves the hash
    bumped = ExperimentConfig(
        equation=custom_cfg.equation,
        initial=custom_cfg.initial,
        parameters=custom_cfg.parameters,
        grid=GridSpec(1.0, 8.0, 5, "linear"),
        ode_tol=custom_cfg.ode_tol,
        output_dir=custom_cfg.output_dir,
    )
    assert canonical_hash(bumped) != h1


def test_grid_validation_and_values():
    with pytest.raises(ConfigError, match="empty grid"):
        GridSpec(1.0, 2.0, 0)
    with pytest.raises(ConfigError):
        GridSpec(5.0, 2.0, 3)
    with pytest.raises(ConfigError):
        GridSpec(1.0, 2.0, 1)
    assert GridSpec(3.0, 3.0, 1).build().radii == (3.0,)
    with pytest.raises(ConfigError):
        GridSpec(1.0, 2.0, 3, "cubic")
    log_r = GridSpec(2.0, 32.0, 5, "log").build().radii
    assert np.allclose(log_r, np.geomspace(2.0, 32.0, 5), rtol=1e-14)
    lin_r = GridSpec(1.0, 9.0, 5, "linear").build().radii
    assert np.allclose(lin_r, np.linspace(1.0, 9.0, 5), rtol=1e-14)


def test_config_error_paths(tmp_path):
    def parse_snippet(body):
        p = tmp_path / "bad.toml"
        p.write_text(body)
        return parse_config(p)

    with pytest.raises(ConfigError, match="equation"):
        parse_snippet('[initial]\nrho = 0.1\n')
    with pytest.raises(ConfigError, match="rho"):
        parse_snippet('[equation]\nname = "x"\ncorpus = "exp"\n[initial]\nrho = -1.0\n')
    with pytest.raises(ConfigError, match="eta"):
        parse_snippet(
            '[equation]\nname = "x"\ncorpus = "exp"\n[initial]\nrho = 0.1\n'
            '[parameters]\neta = []\n'
        )
    with pytest.raises(ConfigError, match="C"):
        parse_snippet(
            '[equation]\nname = "x"\ncorpus = "exp"\n[initial]\nrho = 0.1\n'
            '[parameters]\nC = 1.0\n'
        )
    with pytest.raises(ConfigError, match="R"):
        parse_snippet(
            '[equation]\nname = "x"\ncorpus = "exp"\n[initial]\nrho = 0.1\n'
            '[parameters]\nR_mode = "fixed"\n'
        )
    with pytest.raises(ConfigError, match="corpus"):
        parse_snippet('[equation]\nname = "x"\ncorpus = "cauchy"\n[initial]\nrho = 0.1\n')
    with pytest.raises(ConfigError):
        parse_snippet(
            '[equation]\nname = "x"\norder = 2\n\n[[equation.coefficient]]\n'
            'kind = "named"\nname = "exp"\n\n[initial]\nrho = 0.1\n'
        )  # order/coefficient count mismatch


def test_parameter_R_for():
    p = ParameterSpec()
    assert p.R_for(2.0) == pytest.approx(6.0 * math.e)
    pf = ParameterSpec(R_mode="fixed", R=40.0)
    assert pf.R_for(2.0) == 40.0


def test_build_case_corpus_vs_custom(custom_cfg, tmp_path):
    p = tmp_path / "c.toml"
    p.write_text('[equation]\nname = "h"\ncorpus = "harmonic"\n[initial]\nrho = 0.1\n'
                 '\n[grid]\nmin = 1.0\nmax = 2.0\npoints = 2\n')
    case = build_case(parse_config(p))
    assert case.order == 2 and case.name == "harmonic"
    assert case.solutions  # corpus cases keep exact solutions

    custom = build_case(custom_cfg)
    assert custom.order == 2
    assert custom.q_nu == (0, 0)  # den root at 1.5, not origin
    z = 2.0 + 0j
    # rational: (1 + i z)/(z - 3/2); quotient: 2 e^z + 3 z
    assert eval_at(custom.coefficients[0], z) == pytest.approx(
        (1 + 2j) / 0.5, rel=1e-12)
    assert eval_at(custom.coefficients[1], z) == pytest.approx(
        2.0 * math.exp(2.0) + 6.0, rel=1e-12)


def test_custom_initial_state(custom_cfg):
    assert custom_cfg.initial.state == (1.0 + 0j, 0.5 + 0j)


def test_manifest_validate_and_relative_paths(tmp_path):
    man = RunManifest(command="unit", config_hash="abc", version="0.1.0", seed=1)
    man.root = str(tmp_path)
    f = tmp_path / "sub" / "table.csv"
    f.parent.mkdir()
    f.write_text("x\n")
    man.add_file(f)
    man.add_task("tbl", "PASS")
    man.validate()
    d = man.to_json_dict()
    assert d["files"] == ["sub/table.csv"]
    out = tmp_path / "manifest.json"
    man.write(out)
    parsed = json.loads(out.read_text())
    assert parsed["files"] == ["sub/table.csv"]
    assert parsed["tasks"] == [{"name": "tbl", "status": "PASS"}]

    man.add_file(tmp_path / "ghost.csv")
    with pytest.raises(ConfigError, match="ghost"):
        man.validate()


def test_manifest_outside_root_kept_absolute(tmp_path):
    man = RunManifest(command="unit", config_hash="abc", version="0.1.0", seed=0)
    man.root = str(tmp_path / "out")
    other = tmp_path / "elsewhere.csv"
    other.write_text("x\n")
    man.add_file(other)
    assert man._file_names() == [str(other)]


def test_bundled_configs_parse():
    import pathlib

    cfg_dir = pathlib.Path(__file__).resolve().parents[1] / "configs"
    found = sorted(cfg_dir.glob("*.toml"))
    assert len(found) >= 6
    for p in found:
        cfg = parse_config(p)
        build_case(cfg)
        assert canonical_hash(cfg)
