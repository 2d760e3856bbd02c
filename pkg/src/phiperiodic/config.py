"""Scenario configuration: JSON schema, defaults, and object construction."""
from __future__ import annotations

import copy
import json

import jsonschema
import numpy as np

from .action import PerturbCoeffs, SaddleProblem
from .errors import ConfigError, PhiPeriodicError
from .minimize import Options
from .potentials import KineticPotential, PerturbShape, TimePotential

_NUM = {"type": "number"}
_INT = {"type": "integer"}

SCHEMA = {
    "type": "object",
    "required": ["problem"],
    "properties": {
        "scenario": {"type": ["string", "null"]},
        "corollary": {"type": ["string", "null"]},
        "problem": {
            "type": "object",
            "required": ["n", "T", "L", "F_expr", "G_expr"],
            "properties": {
                "n": dict(_INT, minimum=1),
                "T": dict(_NUM, exclusiveMinimum=0),
                "L": dict(_NUM, exclusiveMinimum=0),
                "kinetic": {"oneOf": [
                    {"type": "string"},
                    {"type": "object", "required": ["kind"],
                     "properties": {"kind": {"type": "string"},
                                    "coeffs": {"type": "array", "items": _NUM},
                                    "scale": _NUM, "offset": _NUM}},
                ]},
                "F_expr": {"type": "string"},
                "G_expr": {"type": "string"},
                "gamma_expr": {"type": ["string", "null"]},
                "q": dict(_NUM, exclusiveMinimum=0),
                "r": {"type": ["number", "null"]},
                "N": dict(_INT, minimum=2),
                "M": dict(_INT, minimum=1),
            },
        },
        "family": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["free", "nonnegative", "box"]},
                "lower": {"type": ["number", "array", "null"]},
                "upper": {"type": ["number", "array", "null"]},
            },
        },
        "psi": {"type": ["number", "array"]},
        "optimizer": {"type": "object"},
        "saddle": {"type": "object"},
        "verify": {"type": "object"},
        "check": {"type": "object"},
        "seeds": {"type": "object", "properties": {"seed": _INT}},
    },
}

DEFAULTS = {
    "scenario": None,
    "corollary": None,
    "problem": {"kinetic": {"kind": "relativistic"}, "gamma_expr": None, "q": 2.0,
                "r": 0.0, "N": 64, "M": None},
    "family": {"kind": "free"},
    "psi": 0.0,
    "optimizer": Options().to_dict(),
    "saddle": {"max_iters": 30, "alpha0": None},
    "verify": {"N_list": [16, 32, 64, 128], "at": "psi"},
    "check": {"a1_radii": [10.0, 100.0, 1000.0], "class_A_samples": 200},
    "seeds": {"seed": 0},
}


def _path(parts):
    return "." + ".".join(str(p) for p in parts) if parts else "."


def validate(cfg):
    try:
        jsonschema.validate(cfg, SCHEMA)
    except jsonschema.ValidationError as exc:
        parts = list(exc.absolute_path)
        if exc.validator == "required":
            missing = [k for k in exc.validator_value if k not in exc.instance]
            parts.append(missing[0])
        raise ConfigError(_path(parts), exc.message) from None


def _fill(cfg, defaults):
    for key, value in defaults.items():
        if key not in cfg:
            cfg[key] = copy.deepcopy(value)
        elif isinstance(value, dict) and isinstance(cfg[key], dict):
            _fill(cfg[key], value)
    return cfg


def resolve_config(cfg):
    """Validate and fill defaults; preset names in ``scenario`` supply the base."""
    cfg = copy.deepcopy(cfg)
    if "config" in cfg and "command" in cfg:     # a report.json re-used as config
        cfg = copy.deepcopy(cfg["config"])
    name = cfg.get("scenario")
    if name:
        from .scenarios import preset_config, _merge
        try:
            base = preset_config(name)
        except KeyError:
            raise ConfigError(".scenario", f"unknown scenario {name!r}") from None
        cfg = _merge(base, cfg)
    validate(cfg)
    cfg = _fill(cfg, DEFAULTS)
    prob = cfg["problem"]
    if prob["M"] is None:
        prob["M"] = max(1, prob["N"] // 4)
    N, M = prob["N"], prob["M"]
    if N % M and M % N:
        raise ConfigError(".problem.M", f"M = {M} and N = {N} are not nested")
    kin = prob["kinetic"]
    if isinstance(kin, str):
        prob["kinetic"] = {"kind": kin}
    try:
        problem_from_config(cfg)
        psi_from_config(cfg)
    except ConfigError:
        raise
    except PhiPeriodicError as exc:
        raise ConfigError(".problem", str(exc)) from None
    return cfg


def load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(".", f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(".", f"invalid JSON: {exc}") from None
    return resolve_config(raw)


def kinetic_from_config(prob):
    k = prob["kinetic"]
    if isinstance(k, str):
        k = {"kind": k}
    return KineticPotential(float(prob["L"]), k.get("kind", "relativistic"),
                            tuple(k.get("coeffs", ())), float(k.get("scale", 1.0)),
                            float(k.get("offset", 0.0)))


def problem_from_config(cfg) -> SaddleProblem:
    prob = cfg["problem"]
    n = int(prob["n"])
    F = TimePotential(prob["F_expr"], n, prob.get("gamma_expr"))
    G = PerturbShape(prob["G_expr"], n)
    r = prob.get("r")
    return SaddleProblem(kinetic_from_config(prob), F, G, float(prob["T"]),
                         0.0 if r is None else float(r))


def family_from_config(cfg):
    from .saddle import PerturbFamily

    fam = cfg.get("family", {"kind": "free"})
    M = cfg["problem"]["M"]
    T = float(cfg["problem"]["T"])
    kind = fam.get("kind", "free")
    if kind == "free":
        return PerturbFamily.free(M, T)
    if kind == "nonnegative":
        return PerturbFamily.nonnegative(M, T)
    lo = fam.get("lower")
    hi = fam.get("upper")
    lo = -np.inf if lo is None else lo
    hi = np.inf if hi is None else hi
    return PerturbFamily.box(M, T, lo, hi)


def psi_from_config(cfg) -> PerturbCoeffs:
    M = cfg["problem"]["M"]
    raw = cfg.get("psi", 0.0)
    vals = np.full(M, float(raw)) if np.isscalar(raw) else np.asarray(raw, dtype=float)
    if vals.shape != (M,):
        raise ConfigError(".psi", f"expected a number or {M} values")
    return PerturbCoeffs(vals)


def options_from_config(cfg) -> Options:
    return Options.from_dict(cfg.get("optimizer"))
