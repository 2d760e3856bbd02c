"""Command line: check hypotheses, solve, search for a saddle, verify residuals.

Exit codes: 0 success (or certificate found), 1 input error,
2 hypothesis check failed, 3 saddle search ended without a certificate.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .config import (family_from_config, options_from_config, problem_from_config,
                     psi_from_config, resolve_config)
from .errors import CheckFailed, ConfigError, PhiPeriodicError
from .hypotheses import check_a1, check_a2, corollary_checks
from .minimize import multi_start
from .potentials import check_class_A
from .report import ensure_dir, write_json, write_table, write_trace, write_trajectories
from .saddle import minimax_gap, saddle_search
from .verify import convergence_study, el_residual

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_NOTFOUND = 0, 1, 2, 3

logger = logging.getLogger("phiperiodic")


def build_parser():
    ap = argparse.ArgumentParser(prog="phiperiodic", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in [("check", "hypothesis checks"), ("solve", "multi-start minimization"),
                        ("saddle", "supergradient saddle search and minimax gap"),
                        ("verify", "Euler-Lagrange residuals and refinement study")]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="JSON scenario file (a report.json also works)")
        sp.add_argument("--scenario", help="built-in scenario name")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out-dir", default=".")
        sp.add_argument("--n-starts", type=int)
        sp.add_argument("--max-iters", type=int)
        sp.add_argument("-v", "--verbose", action="store_true")
    return ap


def _raw_config(args):
    if args.config:
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(".", f"cannot read {args.config}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(".", f"invalid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError(".", "top level must be an object")
        if "config" in raw and "command" in raw:
            raw = raw["config"]
    else:
        raw = {}
    if args.scenario:
        raw["scenario"] = args.scenario
    if not raw:
        raise ConfigError(".", "give --config or --scenario")
    if args.seed is not None:
        raw.setdefault("seeds", {})["seed"] = args.seed
    if args.n_starts is not None:
        raw.setdefault("optimizer", {})["n_starts"] = args.n_starts
    if args.max_iters is not None:
        raw.setdefault("saddle", {})["max_iters"] = args.max_iters
    return raw


def _level(cfg, p, N, seed):
    """Fix r from the corollary preset when the config leaves it open."""
    kind = cfg.get("corollary")
    checks = {}
    if kind:
        checks, r = corollary_checks(p, kind, N, seed)
        if cfg["problem"].get("r") is None:
            cfg["problem"]["r"] = r
            p = p.with_r(r)
    return p, checks


def _traj_rows(rep, limit=2):
    return [(f"cluster{i}", rep.representative(i).traj)
            for i in range(min(limit, len(rep.clusters)))]


def cmd_check(cfg, p, out):
    prob = cfg["problem"]
    N, seed = prob["N"], cfg["seeds"]["seed"]
    p, cor = _level(cfg, p, N, seed)
    res = {}
    res["class_A"] = check_class_A(p.kin, cfg["check"]["class_A_samples"], seed, p.n).to_dict()
    res["a1"] = check_a1(p, prob["q"], cfg["check"]["a1_radii"], N, seed=seed).to_dict()
    res["a2"] = check_a2(p, p.r, N, seed=seed).to_dict()
    Y = family_from_config(cfg)
    res["property_P"] = {"passed": Y.has_property_P, "family": Y.to_dict()}
    for k, v in cor.items():
        res[f"corollary.{k}"] = v
    failed = [k for k, v in res.items() if not v.get("passed", False)]
    out["results"] = res
    out["failed"] = failed
    out["status"] = "hypothesis failed" if failed else "ok"
    return EXIT_HYPOTHESIS if failed else EXIT_OK


def cmd_solve(cfg, p, out):
    N, seed = cfg["problem"]["N"], cfg["seeds"]["seed"]
    p, _ = _level(cfg, p, N, seed)
    psi = psi_from_config(cfg)
    rep = multi_start(p, psi.values, N, seed=seed, opts=options_from_config(cfg))
    out["results"] = {"psi": psi.values, "minima": rep.to_dict()}
    out["status"] = "certificate" if rep.certificate.present else "ok"
    write_trajectories(_traj_rows(rep), os.path.join(out["_dir"], "trajectories.csv"))
    return EXIT_OK


def cmd_saddle(cfg, p, out):
    N, seed = cfg["problem"]["N"], cfg["seeds"]["seed"]
    p, _ = _level(cfg, p, N, seed)
    Y = family_from_config(cfg)
    opts = options_from_config(cfg)
    sd = cfg["saddle"]
    res = saddle_search(p, Y, N, psi0=psi_from_config(cfg).values, max_iters=sd["max_iters"],
                        alpha0=sd["alpha0"], opts=opts, seed=seed)
    gap = minimax_gap(p, Y, N, opts=opts, seed=seed, saddle=res)
    out["results"] = {
        "status": res.status,
        "iterations": len(res.trace),
        "psi_hat": res.psi.values,
        "psi_hat_mean": float(np.mean(res.psi.values)),
        "best_m": res.best_m,
        "minima": res.report.to_dict(),
        "minimax_gap": gap.to_dict(),
        "trace": [{"iter": t["iter"], "m": t["m"], "certificate": t["certificate"]}
                  for t in res.trace],
    }
    out["status"] = res.status
    write_trace(res.trace, os.path.join(out["_dir"], "trace.csv"))
    write_trajectories(_traj_rows(res.report), os.path.join(out["_dir"], "trajectories.csv"))
    return EXIT_OK if res.found else EXIT_NOTFOUND


def cmd_verify(cfg, p, out):
    N, seed = cfg["problem"]["N"], cfg["seeds"]["seed"]
    p, _ = _level(cfg, p, N, seed)
    opts = options_from_config(cfg)
    psi = psi_from_config(cfg).values
    if cfg["verify"].get("at") == "saddle":
        sd = cfg["saddle"]
        psi = saddle_search(p, family_from_config(cfg), N, psi0=psi, max_iters=sd["max_iters"],
                            alpha0=sd["alpha0"], opts=opts, seed=seed).psi.values
    rep = multi_start(p, psi, N, seed=seed, opts=opts)
    r = el_residual(p, psi, rep.best.traj)
    rows = convergence_study(p, psi, cfg["verify"]["N_list"], opts, seed)
    out["results"] = {
        "psi": psi,
        "el_residual": {"max": r.max, "total_variation": r.total_variation, "N": N},
        "convergence": [{"N": x.N, "value": x.value, "residual": x.residual,
                         "total_variation": x.total_variation} for x in rows],
    }
    out["status"] = "ok"
    write_table([(x.N, x.value, x.residual) for x in rows], ["N", "value", "residual"],
                os.path.join(out["_dir"], "convergence.csv"))
    write_trajectories(_traj_rows(rep, 1), os.path.join(out["_dir"], "trajectories.csv"))
    return EXIT_OK


COMMANDS = {"check": cmd_check, "solve": cmd_solve, "saddle": cmd_saddle, "verify": cmd_verify}


def run(args):
    out_dir = ensure_dir(args.out_dir)
    out = {"command": args.command}
    try:
        cfg = resolve_config(_raw_config(args))
        p = problem_from_config(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        write_json({"command": args.command, "status": "input error",
                    "error": {"type": "ConfigError", "path": exc.path, "message": str(exc)}},
                   os.path.join(out_dir, "report.json"))
        return EXIT_INPUT
    out["_dir"] = out_dir
    try:
        code = COMMANDS[args.command](cfg, p, out)
    except CheckFailed as exc:
        out.update(status="hypothesis failed", failed=[exc.hypothesis])
        code = EXIT_HYPOTHESIS
    except PhiPeriodicError as exc:
        print(f"{args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        out.update(status="error", error={"type": type(exc).__name__, "message": str(exc)})
        code = EXIT_INPUT
    del out["_dir"]
    report = {"command": args.command, "exit_code": code, "status": out.pop("status", None)}
    report.update({k: v for k, v in out.items() if k != "command"})
    report["config"] = cfg
    write_json(report, os.path.join(out_dir, "report.json"))
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    code = run(args)
    print(f"{args.command}: exit {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
