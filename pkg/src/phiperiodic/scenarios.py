"""Built-in scenario configurations (JSON-shaped dicts)."""
import copy

_BASE = {
    "problem": {
        "n": 1, "T": 1.0, "L": 1.0,
        "kinetic": {"kind": "relativistic"},
        "F_expr": "(x1^2-1)^2", "G_expr": "x1", "gamma_expr": None,
        "q": 2.0, "r": 0.0, "N": 64, "M": 16,
    },
    "family": {"kind": "free"},
    "psi": 0.0,
}

_OVERRIDES = {
    "symmetric-double-well": {"corollary": "2-1"},
    "balanced-tilt": {"problem": {"F_expr": "(x1^2-1)^2+0.1*x1"}},
    "convex-well": {"problem": {"F_expr": "x1^2"}},
    "corollary-2-1": {"problem": {"F_expr": "(2+sin(2*pi*t))*(x1^2-1)^2"}, "corollary": "2-1"},
    "corollary-2-2": {
        "problem": {"F_expr": "x1^2 - x1^3 + 0.2*x1^4", "G_expr": "x1^2",
                    "gamma_expr": "1+0.5*cos(2*pi*t)", "r": None},
        "corollary": "2-2",
    },
    "corollary-2-3": {"problem": {"F_expr": "(x1^2-1)^2+0.1*x1", "r": None},
                      "corollary": "2-3"},
}

NAMES = tuple(_OVERRIDES)


def _merge(base, extra):
    out = copy.deepcopy(base)
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def preset_config(name):
    if name not in _OVERRIDES:
        raise KeyError(name)
    cfg = _merge(_BASE, _OVERRIDES[name])
    cfg["scenario"] = name
    cfg.setdefault("corollary", None)
    return cfg
