"""Command-line front end.

Subcommands:

* ``region``   — sweep a parameterized auxiliary design over a grid and write
  the region bounds (plus optional 2-D projections) as CSV.
* ``figure``   — emit the data series of one standard comparison panel.
* ``simulate`` — run the finite-blocklength Monte Carlo simulator.
* ``check``    — run the cross-module invariant self-checks.

Every run writes a manifest recording command, config, outputs, seed and
tool version so emitted files can be reproduced exactly. Exit codes: 0 on
success, 1 on budget or invariant failure, 2 on usage or config errors.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys

import numpy as np

from . import __version__, binary_examples as bx, checks, figures
from .channels import AuxDesign, Gdmmac, channel_from_json
from .coding_sim import BudgetError, RateQuad, SimConfig, simulate
from .regions import DesignFamily, RateTriple, pareto_project, sweep

__all__ = ["main", "design_from_json", "DESIGN_FAMILIES"]

_DEFAULT_REGION_BUDGET = 1_000_000


def _two_layer_xor_split(alpha, alpha_p, alpha_pp, beta, beta_p) -> AuxDesign:
    params = bx.Example3Params(alpha, alpha_p, alpha_pp, beta, beta_p, 0.5, 0.5, 0.5)
    return bx.example3_design(params)


DESIGN_FAMILIES = {
    # S12 = X1 uniform, S23 = X2 uniform, the other auxiliaries constant.
    "uniform-direct": DesignFamily((), lambda: bx.example1_design()),
    # S12 = X1 ~ Bernoulli(alpha); X2 reached from uniform S23 via BSC(beta).
    "biased-direct": DesignFamily(("alpha", "beta"), bx.example2_design),
    # X1 = S12 xor S13 with biases (alpha, alpha_p); X2 via BSC(beta).
    "xor-split": DesignFamily(("alpha", "alpha_p", "beta"), bx.example3_pregen_design),
    # xor-split plus noisy-output T variables with crossovers (alpha_pp, beta_p).
    "xor-split-two-layer": DesignFamily(
        ("alpha", "alpha_p", "alpha_pp", "beta", "beta_p"), _two_layer_xor_split
    ),
}


def design_from_json(payload: dict) -> AuxDesign:
    """Build an AuxDesign from {"name", "params"} or explicit arrays."""
    if "name" in payload:
        name = payload["name"]
        if name not in DESIGN_FAMILIES:
            raise ValueError(
                f"unknown design family {name!r}; expected one of "
                f"{sorted(DESIGN_FAMILIES)}"
            )
        family = DESIGN_FAMILIES[name]
        params = payload.get("params", {})
        missing = [p for p in family.param_names if p not in params]
        if missing:
            raise ValueError(f"design family {name!r} missing params {missing}")
        return family.build(**{p: float(params[p]) for p in family.param_names})
    required = ("p_s12", "p_s13", "p_s21", "p_s23", "k_x1", "k_x2")
    missing = [key for key in required if key not in payload]
    if missing:
        raise ValueError(f"explicit design missing fields {missing}")
    optional = {
        key: np.asarray(payload[key], dtype=float)
        for key in ("k_t12", "k_t13", "k_t21", "k_t23")
        if key in payload
    }
    return AuxDesign(
        *(np.asarray(payload[key], dtype=float) for key in required), **optional
    )


def _load_config(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _require_field(payload: dict, name: str):
    if name not in payload:
        raise ValueError(f"config missing required field {name!r}")
    return payload[name]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_manifest(out_dir: str, command: str, config_path, outputs, seed) -> str:
    path = os.path.join(out_dir, f"{command}_manifest.json")
    manifest = {
        "command": command,
        "config": config_path,
        "outputs": sorted(os.path.basename(p) for p in outputs),
        "seed": seed,
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _write_sweep_csv(path: str, param_names, rows) -> None:
    columns = list(param_names) + [
        "bound_r12", "bound_r13", "bound_r23", "bound_r13_plus_r23", "feasible",
    ]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for params, ev in rows:
            values = [_fmt(params[p]) for p in param_names]
            values += [
                _fmt(ev.bound_r12), _fmt(ev.bound_r13), _fmt(ev.bound_r23),
                _fmt(ev.bound_r13_plus_r23), str(int(ev.feasible)),
            ]
            fh.write(",".join(values) + "\n")


def _parse_triple(text: str) -> tuple:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated values, got {text!r}")
    return tuple(parts)


def _grid_size(family: DesignFamily, grid: dict, grid_step) -> int:
    total = 1
    for name in family.param_names:
        spec = grid.get(name, grid_step)
        if spec is None:
            raise ValueError(f"grid missing parameter {name!r}")
        if np.isscalar(spec):
            lo, hi = family.range_of(name)
            total *= int(round((hi - lo) / float(spec))) + 1
        else:
            total *= len(list(spec))
    return total


def cmd_region(args) -> int:
    config = _load_config(args.config)
    os.makedirs(args.out, exist_ok=True)
    outputs = []
    if "figure" in config:
        figure_id = config["figure"]
        params = tuple(config["params"]) if "params" in config else None
        series = figures.figure_series(figure_id, params, args.grid_step)
        path = os.path.join(args.out, f"{figure_id}.csv")
        figures.write_figure_csv(path, series)
        outputs.append(path)
    if "family" in config:
        family_name = config["family"]
        if family_name not in DESIGN_FAMILIES:
            raise ValueError(
                f"unknown design family {family_name!r}; expected one of "
                f"{sorted(DESIGN_FAMILIES)}"
            )
        family = DESIGN_FAMILIES[family_name]
        channel = channel_from_json(json.dumps(_require_field(config, "channel")))
        grid = dict(config.get("grid", {}))
        for name in family.param_names:
            grid.setdefault(name, args.grid_step if args.grid_step else 0.01)
        budget = args.budget if args.budget else _DEFAULT_REGION_BUDGET
        size = _grid_size(family, grid, args.grid_step)
        if size > budget:
            raise BudgetError(f"grid size {size} exceeds budget {budget}")
        rows = sweep(channel, family, grid)
        path = os.path.join(args.out, "sweep.csv")
        _write_sweep_csv(path, family.param_names, rows)
        outputs.append(path)
        for projection in config.get("projections", []):
            ax, ay = projection["axes"]
            hull = bool(projection.get("convex_hull", False))
            triples = [ev for _, ev in rows if ev.feasible]
            points = pareto_project(
                [_as_triple(ev) for ev in triples], (ax, ay), convex_hull=hull
            )
            ppath = os.path.join(args.out, f"projection_{ax}_{ay}.csv")
            with open(ppath, "w", newline="") as fh:
                fh.write(f"{ax},{ay}\n")
                for x, y in points:
                    fh.write(f"{_fmt(x)},{_fmt(y)}\n")
            outputs.append(ppath)
    if not outputs:
        raise ValueError("config selects neither a figure nor a design family")
    outputs.append(_write_manifest(args.out, "region", args.config, outputs, args.seed))
    return 0


def _as_triple(ev) -> RateTriple:
    return RateTriple(ev.bound_r12, ev.bound_r13, ev.bound_r23)


def cmd_figure(args) -> int:
    if args.figure is None:
        raise ValueError("--figure is required")
    params = _parse_triple(args.params) if args.params else None
    series = figures.figure_series(args.figure, params, args.grid_step)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, f"{args.figure}.csv")
    figures.write_figure_csv(path, series)
    _write_manifest(args.out, "figure", args.config, [path], args.seed)
    return 0


def cmd_simulate(args) -> int:
    config = _load_config(args.config)
    channel = channel_from_json(json.dumps(_require_field(config, "channel")))
    design = design_from_json(_require_field(config, "design"))
    seed = args.seed if args.seed is not None else int(config.get("seed", 0))
    sim = SimConfig(
        channel=channel,
        design=design,
        n=int(_require_field(config, "n")),
        key_rates=RateQuad(**config.get("key_rates", {})),
        randomization_rates=RateQuad(**config.get("randomization_rates", {})),
        trials=int(_require_field(config, "trials")),
        seed=seed,
        epsilon_typ=float(config.get("epsilon_typ", 0.15)),
        **({"budget": int(args.budget)} if args.budget else
           {"budget": int(config["budget"])} if "budget" in config else {}),
    )
    report = simulate(sim)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "report.json")
    with open(path, "w") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    _write_manifest(args.out, "simulate", args.config, [path], seed)
    return 0


def cmd_check(args) -> int:
    results = checks.run_all()
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keyregion",
        description="Pairwise secret-key rate regions of a three-user "
        "generalized multiple-access channel: sweeps, figure data, "
        "Monte Carlo simulation and self-checks.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    specs = {
        "region": cmd_region,
        "figure": cmd_figure,
        "simulate": cmd_simulate,
        "check": cmd_check,
    }
    for name, handler in specs.items():
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to a JSON config file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="64-bit RNG seed")
        p.add_argument(
            "--grid-step", type=float, default=None, help="uniform grid step"
        )
        p.add_argument(
            "--budget", type=int, default=None, help="enumeration budget cap"
        )
        p.add_argument("--figure", help="figure id (fig6 | fig9a | fig9b | fig9c)")
        p.add_argument("--params", help="comma-separated crossover triple p1,p2,p3")
        p.set_defaults(handler=handler)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.handler in (cmd_region, cmd_simulate) and not args.config:
        print(f"{args.subcommand}: --config is required", file=sys.stderr)
        return 2
    try:
        return args.handler(args)
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
