"""Command-line front end.

Numeric output goes to ``--out`` (default stdout), diagnostics to stderr.
Exit status: 0 on success, 1 on data errors, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import os
import sys
from dataclasses import replace

import numpy as np

from . import bragg_williams as bw
from .closure import form_consistency_report, write_consistency_csv
from .dynamics import integrate
from .errors import ModelError
from .meanfield import association_eps, estimate_omega, read_series_csv
from .model import (
    SCENARIO_COLUMNS,
    PopulationState,
    SpeciesSet,
    bundled_constants,
    load_constants,
    load_scenario_table,
    bundled_scenarios,
    validate_params,
)
from .sweep import PRESETS, SweepSpec, preset, run_sweep

log = logging.getLogger("lvbragg")


def _float_list(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _l_range(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}") from None


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _load_inputs(args):
    if args.params:
        with open(args.params, encoding="utf-8") as fh:
            constants = load_constants(fh)
    else:
        constants = bundled_constants()
    if args.scenarios:
        with open(args.scenarios, encoding="utf-8") as fh:
            scenarios = load_scenario_table(fh, constants)
    else:
        scenarios = bundled_scenarios(constants)
    return constants, scenarios


def _scenario(scenarios, row):
    if not 1 <= row <= len(scenarios):
        raise ModelError(f"scenario row {row} out of range 1..{len(scenarios)}")
    return scenarios[row - 1]


def cmd_scenarios(args):
    _, scenarios = _load_inputs(args)
    with _output(args.out) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["scenario", *SCENARIO_COLUMNS, "prey_form", "predator_form"])
        for i, p in enumerate(scenarios, start=1):
            v = validate_params(p)
            writer.writerow(
                [i, *(f"{getattr(p, c):.12g}" for c in SCENARIO_COLUMNS),
                 "ok" if v.prey_form_ok else "singular", "ok" if v.predator_form_ok else "singular"]
            )
    return 0


def _apply_overrides(spec, args):
    changes = {}
    if args.L_range is not None:
        changes["l_range"] = args.L_range
    if args.gamma is not None:
        changes["gamma_values"] = args.gamma
    if args.nt is not None:
        changes["n_t_values"] = args.nt
    if getattr(args, "rows", None) is not None:
        changes["scenario_indices"] = args.rows
    if args.domain is not None:
        changes["domain"] = args.domain
    if getattr(args, "per_capita", False):
        changes["per_capita"] = True
    return replace(spec, **changes) if changes else spec


def cmd_sweep(args):
    _, scenarios = _load_inputs(args)
    if args.spec:
        with open(args.spec, encoding="utf-8") as fh:
            spec = SweepSpec.from_json(fh)
    else:
        spec = preset(args.preset or "fig1")
    spec = _apply_overrides(spec, args)
    with _output(args.out) as out:
        run_sweep(spec, scenarios, out, workers=args.workers)
    return 0


def cmd_psi(args):
    _, scenarios = _load_inputs(args)
    _scenario(scenarios, args.row)
    spec = SweepSpec(
        gamma_values=(args.gamma[0],) if args.gamma else (3,),
        n_t_values=(args.nt[0],) if args.nt else (4.1,),
        scenario_indices=(args.row,),
    )
    args.gamma = args.nt = None
    spec = _apply_overrides(spec, args)
    with _output(args.out) as out:
        result = run_sweep(spec, scenarios, out)
    return 1 if result.skipped else 0


def cmd_simulate(args):
    constants, scenarios = _load_inputs(args)
    if args.system:
        with open(args.system, encoding="utf-8") as fh:
            raw = json.load(fh)
        system = SpeciesSet(raw["eps"], raw["alpha"], raw["beta"], raw.get("kappa"))
        initial = args.initial
        labels = None
        two_role = False
    else:
        system = SpeciesSet.two_role(_scenario(scenarios, args.row))
        initial = args.initial or (constants.n_p, constants.n_d)
        two_role = True
    if initial is None:
        raise ModelError("--initial is required with --system")
    traj = integrate(system, np.array(initial), args.t_end, args.step)
    with _output(args.out) as out:
        if two_role:
            traj.write_csv(out, labels=["N_p", "N_d", "N_T"], with_total=True)
        else:
            traj.write_csv(out, labels=labels)
    return 0


def cmd_estimate(args):
    with open(args.input, encoding="utf-8") as fh:
        labels, traj = read_series_csv(fh)
    column = args.column or ("N_T" if "N_T" in labels else labels[0])
    if column not in labels:
        raise ModelError(f"column {column!r} not in series ({', '.join(labels)})")
    eps = args.eps
    if eps is None:
        if column != "N_T" or not {"N_p", "N_d"} <= set(labels):
            raise ModelError("--eps is required unless estimating N_T from a N_p,N_d,N_T series")
        constants, _ = _load_inputs(args)
        first = traj.states[0]
        eps = association_eps([constants.eps_p, constants.eps_d], [first[labels.index("N_p")], first[labels.index("N_d")]])
        log.info("using population-weighted association growth rate %.12g", eps)
    estimate = estimate_omega(traj.column(labels.index(column)), eps)
    with _output(args.out) as out:
        estimate.write_csv(out)
    log.info("mean omega_hat = %.12g", estimate.mean)
    return 0


# states for the form-consistency table: two predator densities times five prey densities
CONSISTENCY_STATES = tuple((n_p, n_d) for n_d in (0.5, 1.1) for n_p in (1.0, 2.0, 3.0, 4.0, 5.0))


def roots_report(scenarios, rows, out):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["scenario", "form", "a", "b", "c", "discriminant", "kind", "roots", "expected_complex", "agrees"])
    for row in rows:
        kind, form = bw.admissible_quadratic(_scenario(scenarios, row))
        report = bw.bw_roots(form)
        roots = ";".join(f"{r:.12g}" for r in report.roots)
        disc = "" if report.discriminant is None else f"{report.discriminant:.12g}"
        writer.writerow([row, kind, f"{form.a:.12g}", f"{form.b:.12g}", f"{form.c:.12g}", disc,
                         report.kind, roots, "true", str(report.is_complex).lower()])


def cmd_check(args):
    _, scenarios = _load_inputs(args)
    gamma = args.gamma[0] if args.gamma else 3
    with _output(args.out) as out:
        if args.kind == "forms":
            params = _scenario(scenarios, args.row or 2).replace(gamma=gamma)
            rows = [form_consistency_report(PopulationState(n_p, n_d), params) for n_p, n_d in CONSISTENCY_STATES]
            write_consistency_csv(rows, out)
        elif args.kind == "bw":
            params = _scenario(scenarios, args.row or 3).replace(gamma=gamma)
            n_t = args.nt[0] if args.nt else 4.1
            l_range = args.L_range or (-1.0, 1.0, 0.01)
            report = bw.bw_vs_substitution_check(params, bw.grid(*l_range), n_t)
            report.write_csv(out)
            if not report.agrees():
                log.warning("closed form and substitution disagree: max relative deviation %.3g", report.max_rel)
        else:
            rows = (args.row,) if args.row else (1, 5)
            roots_report([s.replace(gamma=gamma) for s in scenarios], rows, out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="lvbragg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", help="key = value constants file (default: bundled Serengeti constants)")
    common.add_argument("--scenarios", help="scenario table CSV (default: bundled table)")
    common.add_argument("--out", help="output file (default: stdout)")

    grid_opts = argparse.ArgumentParser(add_help=False)
    grid_opts.add_argument("--L-range", dest="L_range", type=_l_range, help="start:stop:step")
    grid_opts.add_argument("--gamma", type=_int_list, help="comma-separated coordination numbers")
    grid_opts.add_argument("--nt", type=_float_list, help="comma-separated total densities")
    grid_opts.add_argument("--domain", choices=(bw.THEORETICAL, bw.EXTENDED))

    p = sub.add_parser("scenarios", parents=[common], help="print the loaded scenario table")
    p.set_defaults(func=cmd_scenarios)

    p = sub.add_parser("psi", parents=[common, grid_opts], help="one psi(L) curve")
    p.add_argument("--row", type=int, default=3)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("sweep", parents=[common, grid_opts], help="parameter sweep")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=sorted(PRESETS))
    src.add_argument("--spec", help="JSON sweep specification")
    p.add_argument("--rows", type=_int_list, help="scenario rows (1-based)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--per-capita", action="store_true", help="add a psi/n_t column")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", parents=[common], help="integrate a Lotka-Volterra trajectory")
    p.add_argument("--system", help="JSON with eps, alpha, beta and optional kappa")
    p.add_argument("--row", type=int, default=3, help="scenario row for the two-role system")
    p.add_argument("--initial", type=_float_list)
    p.add_argument("--t-end", type=float, default=12.0)
    p.add_argument("--step", type=float, default=1e-3)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", parents=[common], help="estimate mean fields from a series")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--column")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("check", parents=[common, grid_opts], help="consistency and oracle reports")
    p.add_argument("--kind", choices=("forms", "bw", "roots"), default="bw")
    p.add_argument("--row", type=int)
    p.set_defaults(func=cmd_check)
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not logging.getLogger().handlers:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stdout = open(os.devnull, "w")
        return 0
    except (ModelError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


main = cli_main

if __name__ == "__main__":
    sys.exit(main())
