"""Obstacle expression grammar and JSON config validation."""

import numpy as np
import pytest

from discenv.config import build_families, build_pair, parse_point, \
    validate_config
from discenv.errors import ConfigurationError
from discenv.expressions import compile_expression


# ---------------------------------------------------------------------------
# expression grammar
# ---------------------------------------------------------------------------

def test_basic_arithmetic_and_calls():
    fn = compile_expression("re(z1) + 2 * im(z2) - abs(z1)", 2)
    pts = np.array([[1.0 + 2.0j, 3.0 - 1.0j]])
    assert abs(fn(pts)[0] - (1.0 - 2.0 - np.sqrt(5.0))) <= 1e-12


def test_max_and_log():
    fn = compile_expression("max(log(abs(z1)), 0.0)", 1)
    pts = np.array([[0.5 + 0.0j], [2.0 + 0.0j]])
    out = fn(pts)
    assert abs(out[0]) <= 1e-12
    assert abs(out[1] - np.log(2.0)) <= 1e-12


def test_unary_minus():
    fn = compile_expression("-abs(z1)", 1)
    assert abs(fn(np.array([[3.0 + 4.0j]]))[0] + 5.0) <= 1e-12


@pytest.mark.parametrize("text", [
    "z1 / z2",                      # division not in the grammar
    "z1 ** 2",                      # no powers
    "__import__('os')",             # no scripting
    "foo(z1)",                      # unknown call
    "max(z1, z2, z1)",              # wrong arity
    "z3",                           # out of range for C^2
    "q1",                           # unknown name
    "'text'",                       # non-numeric constant
    "z1 if z2 else z1",             # no control flow
])
def test_rejected_expressions(text):
    with pytest.raises(ConfigurationError):
        compile_expression(text, 2)


# ---------------------------------------------------------------------------
# config validation
# ---------------------------------------------------------------------------

def minimal_config(**overrides):
    cfg = {"experiment": "t", "pair": {"variant": "planar_annulus"}}
    cfg.update(overrides)
    return cfg


def test_defaults_are_filled():
    cfg = validate_config(minimal_config())
    assert cfg["quadrature_m"] == 512
    assert cfg["seed"] == 0
    assert cfg["starts"] == 8


def test_unknown_top_level_key_rejected():
    with pytest.raises(ConfigurationError, match="unknown keys"):
        validate_config(minimal_config(bogus=1))


def test_unknown_pair_variant_rejected():
    with pytest.raises(ConfigurationError, match="variant"):
        validate_config(minimal_config(pair={"variant": "cube"}))


def test_unknown_family_kind_rejected():
    with pytest.raises(ConfigurationError, match="family kind"):
        validate_config(minimal_config(families=[{"kind": "spline"}]))


def test_obstacle_needs_exactly_one_source():
    with pytest.raises(ConfigurationError):
        validate_config(minimal_config(obstacle={}))
    with pytest.raises(ConfigurationError):
        validate_config(minimal_config(
            obstacle={"expr": "re(z1)", "builtin": "log_abs"}))


def test_partial_eps_range_checked():
    with pytest.raises(ConfigurationError):
        validate_config(minimal_config(partial_eps=[0.5, 1.5]))


def test_parse_point_shape():
    p = parse_point([[0.5, -0.25], [0.0, 1.0]], 2)
    assert np.array_equal(p, np.array([0.5 - 0.25j, 1.0j]))
    with pytest.raises(ConfigurationError):
        parse_point([[0.5, 0.0]], 2)
    with pytest.raises(ConfigurationError):
        parse_point([[0.5]], 1)


def test_build_pair_variants():
    w, x, phi, hp = build_pair(validate_config(minimal_config()))
    assert w.n == 1 and x.n == 1 and phi is None and hp is None
    cfg = validate_config(minimal_config(
        pair={"variant": "hartogs", "n": 2, "r": 0.25, "R": 1.0}))
    w, x, phi, hp = build_pair(cfg)
    assert hp is not None and hp.n == 2
    assert hp.radii(np.array([0.0j])) == (0.25, 1.0)
    cfg = validate_config(minimal_config(pair={"variant": "counterexample"}))
    w, x, phi, hp = build_pair(cfg)
    assert phi is not None and w.n == 2


def test_hartogs_radius_expressions():
    cfg = validate_config(minimal_config(
        pair={"variant": "hartogs", "n": 2, "r": 0.25,
              "R": "1.0 - 0.5 * abs(z1)"}))
    _, _, _, hp = build_pair(cfg)
    r, R = hp.radii(np.array([0.5 + 0.0j]))
    assert abs(R - 0.75) <= 1e-12


def test_build_families_from_config():
    cfg = validate_config(minimal_config(families=[
        {"kind": "constant"},
        {"kind": "blaschke", "zeros": 2, "s_range": [1.0, 2.0]},
        {"kind": "polynomial", "degree": 3},
    ]))
    fams = build_families(cfg, np.array([1.5 + 0.0j]))
    assert [f.name for f in fams] == ["constant", "blaschke", "polynomial"]
    with pytest.raises(ConfigurationError):
        build_families(validate_config(minimal_config()), np.array([0.0j]))
