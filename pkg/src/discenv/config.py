"""Experiment configuration: JSON schema validation and object construction.

Validation is strict: unknown keys anywhere in the document are rejected
before anything is run, so a failed run never leaves partial outputs.
"""

from __future__ import annotations

import json

import numpy as np

from .domains import (
    ball,
    counterexample_pair,
    planar_annulus_pair,
    shell_pair,
)
from .errors import ConfigurationError
from .expressions import compile_expression, obstacle_from_expression
from .families import (
    BlaschkeFamily,
    ConstantFamily,
    PolynomialFamily,
    ShellFamily,
    VerticalFamily,
)
from .hartogs import HartogsPair

BUILTIN_OBSTACLES = {
    "log_abs": "log(abs(z1))",
    "re_first": "re(z1)",
}

_TOP_KEYS = {
    "experiment", "pair", "obstacle", "points", "families", "quadrature_m",
    "seed", "starts", "budget", "penalty_weight", "oracle", "tolerances",
    "partial_eps", "homotopy", "cesaro", "output",
}


def _require(cond, path, message):
    if not cond:
        raise ConfigurationError(f"{path}: {message}")


def _check_keys(obj, allowed, path):
    _require(isinstance(obj, dict), path, "expected an object")
    unknown = set(obj) - set(allowed)
    _require(not unknown, path, f"unknown keys {sorted(unknown)}")


def load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
    return validate_config(raw)


def validate_config(raw):
    """Validate the raw document and fill defaults; returns the effective
    config dict (round-trippable through JSON)."""
    _check_keys(raw, _TOP_KEYS, "config")
    cfg = dict(raw)
    _require("experiment" in cfg and isinstance(cfg["experiment"], str),
             "config.experiment", "required string")
    _require("pair" in cfg, "config.pair", "required")
    _validate_pair(cfg["pair"])
    if "obstacle" in cfg:
        _validate_obstacle(cfg["obstacle"])
    cfg.setdefault("points", [])
    _require(isinstance(cfg["points"], list), "config.points", "expected list")
    cfg.setdefault("families", [])
    for i, fam in enumerate(cfg["families"]):
        _validate_family(fam, f"config.families[{i}]")
    cfg.setdefault("quadrature_m", 512)
    cfg.setdefault("seed", 0)
    cfg.setdefault("starts", 8)
    cfg.setdefault("budget", 400)
    cfg.setdefault("penalty_weight", 1e3)
    for key in ("quadrature_m", "seed", "starts", "budget"):
        _require(isinstance(cfg[key], int) and cfg[key] >= 0,
                 f"config.{key}", "expected nonnegative integer")
    if cfg.get("oracle") is not None:
        _validate_oracle(cfg["oracle"])
    if "tolerances" in cfg:
        _check_keys(cfg["tolerances"], {"gap"}, "config.tolerances")
    if "partial_eps" in cfg:
        _require(isinstance(cfg["partial_eps"], list)
                 and all(isinstance(e, (int, float)) and 0 < e < 1
                         for e in cfg["partial_eps"]),
                 "config.partial_eps", "expected list of values in (0,1)")
    if "homotopy" in cfg:
        _check_keys(cfg["homotopy"], {"z_prime", "s", "winding", "steps"},
                    "config.homotopy")
    if "cesaro" in cfg:
        _check_keys(cfg["cesaro"], {"m", "m_w", "j_values", "amplitude"},
                    "config.cesaro")
    return cfg


def _validate_pair(pair):
    _check_keys(pair, {"variant", "n", "delta", "tau", "rho_u", "eps_moll",
                       "base_radius", "r", "R"}, "config.pair")
    variant = pair.get("variant")
    _require(variant in {"planar_annulus", "shell", "hartogs",
                         "counterexample"},
             "config.pair.variant", f"unknown variant {variant!r}")
    if variant == "shell":
        _require(isinstance(pair.get("n", 2), int) and pair.get("n", 2) >= 2,
                 "config.pair.n", "shell needs integer n >= 2")
    if variant == "hartogs":
        _require(isinstance(pair.get("n", 2), int) and pair.get("n", 2) >= 2,
                 "config.pair.n", "hartogs needs integer n >= 2")
        for key in ("r", "R"):
            _require(isinstance(pair.get(key, 1.0), (int, float, str)),
                     f"config.pair.{key}",
                     "expected a number or expression over z1..")


def _validate_obstacle(obst):
    _check_keys(obst, {"expr", "builtin", "rotation_invariant",
                       "lower_bound", "upper_bound"}, "config.obstacle")
    _require(("expr" in obst) != ("builtin" in obst), "config.obstacle",
             "exactly one of 'expr' or 'builtin' required")
    if "builtin" in obst:
        _require(obst["builtin"] in BUILTIN_OBSTACLES, "config.obstacle.builtin",
                 f"unknown builtin {obst['builtin']!r}")


def _validate_family(fam, path):
    _check_keys(fam, {"kind", "degree", "winding", "zeros", "s_range",
                      "scale"}, path)
    _require(fam.get("kind") in {"constant", "polynomial", "vertical",
                                 "blaschke", "shell"},
             f"{path}.kind", f"unknown family kind {fam.get('kind')!r}")


def _validate_oracle(oracle):
    _check_keys(oracle, {"kind", "spacing", "bounds", "caps", "expr"},
                "config.oracle")
    _require(oracle.get("kind") in {"kiselman", "grid", "closed_form"},
             "config.oracle.kind", f"unknown oracle {oracle.get('kind')!r}")
    if oracle.get("kind") == "closed_form":
        _require(isinstance(oracle.get("expr"), str),
                 "config.oracle.expr", "closed_form oracle needs 'expr'")


# ---------------------------------------------------------------------------
# Construction from a validated config
# ---------------------------------------------------------------------------

def build_pair(cfg):
    """Returns (W, X, phi_or_None, hartogs_pair_or_None)."""
    pair = cfg["pair"]
    variant = pair["variant"]
    if variant == "planar_annulus":
        w, x = planar_annulus_pair()
        return w, x, None, None
    if variant == "shell":
        w, x = shell_pair(pair.get("n", 2))
        return w, x, None, None
    if variant == "counterexample":
        w, x, phi = counterexample_pair(
            delta=pair.get("delta", 0.3), tau=pair.get("tau", 0.05),
            rho_u=pair.get("rho_u", 0.05),
            eps_moll=pair.get("eps_moll", 0.01))
        return w, x, phi, None
    n = pair.get("n", 2)
    base = ball(pair.get("base_radius", 1.0), n - 1)
    hp = HartogsPair(base, _radius_fn(pair.get("r", 0.25), n - 1),
                     _radius_fn(pair.get("R", 1.0), n - 1))
    return hp.W, hp.X, None, hp


def _radius_fn(value, n_base):
    if isinstance(value, str):
        fn = compile_expression(value, n_base)
        return fn
    v = float(value)
    return lambda zp: np.full(np.asarray(zp).shape[:-1], v)


def build_obstacle(cfg, n):
    obst = cfg.get("obstacle")
    if obst is None:
        raise ConfigurationError("config.obstacle: required for this command")
    expr = obst.get("expr") or BUILTIN_OBSTACLES[obst["builtin"]]
    return obstacle_from_expression(
        expr, n,
        rotation_invariant_last=bool(obst.get("rotation_invariant", False)),
        lower_bound=obst.get("lower_bound", -np.inf),
        upper_bound=obst.get("upper_bound", np.inf))


def parse_point(entry, n, path="config.points"):
    _require(isinstance(entry, list) and len(entry) == n, path,
             f"point must list {n} coordinates as [re, im] pairs")
    coords = []
    for c in entry:
        _require(isinstance(c, list) and len(c) == 2, path,
                 "coordinate must be an [re, im] pair")
        coords.append(complex(c[0], c[1]))
    return np.asarray(coords, dtype=complex)


def build_families(cfg, centre, hartogs=None):
    fams = []
    for spec in cfg["families"]:
        kind = spec["kind"]
        if kind == "constant":
            fams.append(ConstantFamily(centre))
        elif kind == "polynomial":
            fams.append(PolynomialFamily(centre, degree=spec.get("degree", 4),
                                         scale=spec.get("scale", 0.4)))
        elif kind == "shell":
            fams.append(ShellFamily(centre))
        elif kind == "vertical":
            s_range = tuple(spec.get("s_range", (0.1, 1.0)))
            fams.append(VerticalFamily(centre, winding=spec.get("winding", 1),
                                       s_range=s_range))
        elif kind == "blaschke":
            s_range = tuple(spec.get("s_range", (1.0, 2.0)))
            fams.append(BlaschkeFamily(centre, n_zeros=spec.get("zeros", 1),
                                       s_range=s_range))
    if not fams:
        raise ConfigurationError("config.families: at least one family needed")
    return fams
