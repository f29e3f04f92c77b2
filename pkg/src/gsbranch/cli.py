"""Command line front end.

Every subcommand reads a JSON problem config, writes all of its artifacts
into one output directory, and prints a one-line summary.  Outputs are
deterministic for a fixed config and seed: JSON is written with sorted
keys, CSV floats use shortest round-trip formatting, and every random
draw is seeded.

Exit codes: 0 success, 1 a verification check failed, 2 bad usage or
config, 3 the solver failed to converge.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import (
    branch as branch_mod,
    homotopy as homotopy_mod,
    lspec,
    model,
    nehari,
    normalized as normalized_mod,
    rescale as rescale_mod,
    verify as verify_mod,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3


class SolverError(RuntimeError):
    pass


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_problem(args) -> model.ProblemSpec:
    if args.config is None:
        raise model.ConfigError(["--config is required for this command"])
    return model.problem_from_config_file(
        args.config, resolution=args.resolution, box=args.box
    )


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _parse_range(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise model.ConfigError([f"range {text!r} is not of the form a:b"])
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise model.ConfigError([f"range {text!r} has non-numeric endpoints"])
    return a, b


def _functionals_json(fun) -> dict:
    return {"S": fun.S, "G": fun.G, "F": fun.F, "Q": fun.Q, "Phi": fun.Phi}


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    problem = _load_problem(args)
    out = _out_dir(args)
    rep = nehari.ground_state(problem, args.lam, gradient_tol=args.tol)
    if not rep.converged:
        print("solver failed: " + "; ".join(rep.messages), file=sys.stderr)
        return EXIT_SOLVER
    model.save_field(rep.state, out / "state.gsbf")
    poh = verify_mod.pohozaev_residual(problem, rep.state, args.lam)
    _write_json(out / "summary.json", {
        "command": "solve",
        "lambda": args.lam,
        "functionals": _functionals_json(rep.functionals),
        "peak": rep.state.peak(),
        "residual": rep.residual,
        "nehari_residual": rep.nehari_res,
        "pohozaev_residual": poh,
        "iterations": {"descent": rep.descent_iters, "newton": rep.newton_iters},
        "checkpoint": "state.gsbf",
        "seed": args.seed,
    })
    print(f"solve: lam={args.lam} Q={rep.functionals.Q:.6g} "
          f"residual={rep.residual:.3e} -> {out}")
    return EXIT_OK


def _branch_to_json(record) -> dict:
    return {
        "events": record.events,
        "points": len(record.points),
        "reached_end": record.reached_end,
    }


def cmd_continue(args) -> int:
    problem = _load_problem(args)
    out = _out_dir(args)
    a, b = _parse_range(args.lambda_range)
    try:
        record = branch_mod.continue_branch(
            problem, a, b,
            target_points=args.points,
            morse_stride=args.morse_stride,
            kernel_band=args.kernel_band,
            checkpoint_dir=out,
            seed=args.seed,
        )
    except branch_mod.BranchError as exc:
        print(f"continuation failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    branch_mod.save_branch_csv(record.points, out / "branch.csv")
    summary = {"command": "continue", "lambda_range": [a, b], "seed": args.seed}
    summary.update(_branch_to_json(record))
    _write_json(out / "summary.json", summary)
    names = ",".join(ev["name"] for ev in record.events) or "none"
    print(f"continue: {len(record.points)} points, events: {names} -> {out}")
    return EXIT_OK


def _load_branch_states(problem, branch_dir: Path):
    """Branch points plus their checkpointed states, as a record."""
    points = branch_mod.load_branch_csv(branch_dir / "branch.csv")
    for pt in points:
        if pt.checkpoint != "-":
            pt.state = model.load_field(branch_dir / pt.checkpoint)
    record = branch_mod.BranchRecord(points=points)
    return record


def cmd_normalized(args) -> int:
    problem = _load_problem(args)
    out = _out_dir(args)
    record = None
    lam_range = None
    if args.branch is not None:
        record = _load_branch_states(problem, Path(args.branch))
    elif args.lambda_range is not None:
        lam_range = _parse_range(args.lambda_range)
    else:
        raise model.ConfigError(["normalized needs --branch or --lambda-range"])
    report = normalized_mod.solve_normalized(
        problem, args.rho, lam_range=lam_range, record=record,
        n_points=args.points, seed=args.seed,
    )
    sols = []
    for i, sol in enumerate(report.solutions):
        name = f"normalized_{i:02d}.gsbf"
        model.save_field(sol.state, out / name)
        sols.append({
            "lambda": sol.lam,
            "Q": sol.q,
            "dQdlambda": sol.dqdlam,
            "stability": sol.stability,
            "checkpoint": name,
        })
    _write_json(out / "summary.json", {
        "command": "normalized",
        "rho": args.rho,
        "solutions": sols,
        "messages": report.messages,
        "seed": args.seed,
    })
    print(f"normalized: rho={args.rho} -> {len(sols)} solution(s) -> {out}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    problem = _load_problem(args)
    out = _out_dir(args)
    state = model.load_field(args.checkpoint)
    rep = lspec.morse_and_kernel(
        problem, state, args.lam,
        sector=args.sector, count=args.count, seed=args.seed,
    )
    _write_json(out / "spectrum.json", {
        "command": "spectrum",
        "lambda": args.lam,
        "sector": args.sector,
        "eigenvalues": list(rep.eigenvalues),
        "morse": rep.morse,
        "kernel_dim": rep.kernel_dim,
        "band": rep.band,
        "nondegenerate": rep.nondegenerate,
        "marginal": rep.marginal,
        "converged": rep.converged,
        "seed": args.seed,
    })
    print(f"spectrum: morse={rep.morse} kernel={rep.kernel_dim} "
          f"low={rep.eigenvalues[0]:.6g} -> {out}")
    return EXIT_OK


def cmd_homotopy(args) -> int:
    problem = _load_problem(args)
    out = _out_dir(args)
    rep = homotopy_mod.run_homotopy(
        problem, args.kind, args.lam, nodes=args.nodes, seed=args.seed,
    )
    payload = {
        "command": "homotopy",
        "kind": args.kind,
        "lambda": args.lam,
        "endpoint_distance": rep.endpoint_distance,
        "messages": rep.messages,
        "nodes": [
            {
                "parameter": nd.parameter,
                "Q": nd.q,
                "level": nd.level,
                "coupling": nd.coupling,
                "morse": nd.morse,
                "nehari_residual": nd.nehari_res,
                "pohozaev_residual": nd.pohozaev_res,
            }
            for nd in rep.nodes
        ],
        "seed": args.seed,
    }
    if len(rep.nodes) < args.nodes:
        _write_json(out / "homotopy.json", payload)
        print("homotopy: path broke down; see homotopy.json", file=sys.stderr)
        return EXIT_SOLVER
    if args.probe_starts > 0:
        probe = homotopy_mod.uniqueness_probe(
            problem, args.lam, n_starts=args.probe_starts, seed=args.seed,
        )
        payload["probe"] = {
            "starts": args.probe_starts,
            "distinct": probe.count,
            "messages": probe.messages,
        }
    _write_json(out / "homotopy.json", payload)
    probe_txt = ""
    if args.probe_starts > 0:
        probe_txt = f", probe found {payload['probe']['distinct']} distinct"
    print(f"homotopy: {len(rep.nodes)} nodes, endpoint distance "
          f"{rep.endpoint_distance:.3e}{probe_txt} -> {out}")
    return EXIT_OK


def cmd_rescale(args) -> int:
    problem = _load_problem(args)
    out = _out_dir(args)
    branch_dir = Path(args.branch)
    record = _load_branch_states(problem, branch_dir)
    states = [(pt.lam, pt.state) for pt in record.points if pt.state is not None]
    if not states:
        raise model.ConfigError(["branch has no checkpointed states to rescale"])
    report = rescale_mod.convergence_report(problem, states, args.frame)
    for i, (lam, state) in enumerate(states):
        framed = rescale_mod.rescale_state(problem, state, lam, args.frame)
        model.save_field(framed, out / f"frame_{i:04d}.gsbf")
    _write_json(out / "convergence.json", {
        "command": "rescale",
        "frame": args.frame,
        "lambdas": list(report.lams),
        "distances": list(report.distances),
        "limit_mass": report.limit_mass,
        "seed": args.seed,
    })
    print(f"rescale: frame {args.frame}, end distance "
          f"{report.distance_at_extreme():.3e} -> {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    problem = _load_problem(args)
    out = _out_dir(args)
    branch_dir = Path(args.branch)
    points = branch_mod.load_branch_csv(branch_dir / "branch.csv")
    lams = [pt.lam for pt in points]
    qs = [pt.q for pt in points]
    phis = [pt.phi for pt in points]

    checks = []
    diffs = np.diff(lams)
    checks.append(verify_mod.CheckResult(
        name="monotone_lambda",
        passed=bool(len(points) < 2 or np.all(diffs > 0) or np.all(diffs < 0)),
        detail="branch parameter strictly monotone",
    ))

    worst_poh = max(pt.pohozaev_res for pt in points)
    checks.append(verify_mod.CheckResult(
        name="pohozaev_identity",
        passed=worst_poh <= args.pohozaev_tol,
        measured=worst_poh,
        tolerance=args.pohozaev_tol,
        detail="largest scaling-identity defect along the branch",
    ))

    recomputed = 0
    worst_recomputed = 0.0
    for pt in points:
        if pt.checkpoint == "-":
            continue
        state = model.load_field(branch_dir / pt.checkpoint)
        worst_recomputed = max(
            worst_recomputed,
            verify_mod.pohozaev_residual(problem, state, pt.lam),
        )
        recomputed += 1
    if recomputed:
        checks.append(verify_mod.CheckResult(
            name="pohozaev_recomputed",
            passed=worst_recomputed <= args.pohozaev_tol,
            measured=worst_recomputed,
            tolerance=args.pohozaev_tol,
            detail=f"recomputed from {recomputed} checkpoints",
        ))

    if len(points) >= 3:
        errs = verify_mod.mass_slope_consistency(lams, qs, phis)
        checks.append(verify_mod.CheckResult(
            name="action_mass_slope",
            passed=max(errs) <= args.slope_tol,
            measured=max(errs),
            tolerance=args.slope_tol,
            detail="dPhi/dlambda = -Q at interior points",
        ))

    env = verify_mod.envelope_check(problem, lams, qs, phis)
    checks.append(verify_mod.CheckResult(
        name="action_envelope",
        passed=env.ok,
        measured=max(env.ratios),
        expected=env.upper,
        detail=f"Phi/(-lam Q) within [{env.lower:.6g}, {env.upper:.6g}]",
    ))

    hyp = model.validate_exponents(problem)
    if hyp.curve_exponent is not None and len(points) >= 3:
        fit = verify_mod.scaling_fit(lams, qs)
        checks.append(verify_mod.CheckResult(
            name="mass_curve_exponent",
            passed=abs(fit.exponent - hyp.curve_exponent) <= args.exponent_tol,
            measured=fit.exponent,
            expected=hyp.curve_exponent,
            tolerance=args.exponent_tol,
            detail=f"log-log fit over {fit.points} points",
        ))

    payload = {
        "command": "verify",
        "checks": [c.to_json() for c in checks],
        "passed": all(c.passed for c in checks),
    }
    _write_json(out / "verify.json", payload)
    for c in checks:
        mark = "PASS" if c.passed else "FAIL"
        print(f"  [{mark}] {c.name}: {c.detail}")
    if not payload["passed"]:
        print("verify: FAILED", file=sys.stderr)
        return EXIT_CHECK_FAILED
    print(f"verify: all {len(checks)} checks passed -> {out}")
    return EXIT_OK


def cmd_report(args) -> int:
    out = _out_dir(args)
    merged = {}
    for path in sorted(out.rglob("*.json")):
        if path.name == "report.json":
            continue
        rel = str(path.relative_to(out))
        try:
            with open(path, "r", encoding="utf-8") as fh:
                merged[rel] = json.load(fh)
        except json.JSONDecodeError:
            merged[rel] = {"error": "unreadable"}
    _write_json(out / "report.json", {"command": "report", "artifacts": merged})
    print(f"report: merged {len(merged)} artifact(s) -> {out / 'report.json'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsbranch",
        description="Ground-state branches of nonlocal nonlinear scalar field "
                    "equations: solving, continuation, and verification.",
    )
    parser.add_argument("--config", help="JSON problem description")
    parser.add_argument("--out", default="gsbranch-out", help="output directory")
    parser.add_argument("--seed", type=int, default=0, help="random seed")
    parser.add_argument("--resolution", type=int, default=None,
                        help="override grid points per axis")
    parser.add_argument("--box", type=float, default=None,
                        help="override grid half width")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="single ground state at fixed lambda")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("continue", help="trace a branch over a lambda range")
    p.add_argument("--lambda-range", required=True, metavar="A:B")
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--morse-stride", type=int, default=1)
    p.add_argument("--kernel-band", type=float, default=None)
    p.set_defaults(fn=cmd_continue)

    p = sub.add_parser("normalized", help="states of prescribed mass")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--branch", default=None,
                   help="directory of a previous continue run")
    p.add_argument("--lambda-range", default=None, metavar="A:B")
    p.add_argument("--points", type=int, default=25)
    p.set_defaults(fn=cmd_normalized)

    p = sub.add_parser("spectrum", help="low spectrum of the linearization")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--sector", choices=("even", "full"), default="even")
    p.add_argument("--count", type=int, default=6)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("homotopy", help="deformation path and uniqueness probe")
    p.add_argument("--kind", choices=("weight", "potential"), required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--nodes", type=int, default=11)
    p.add_argument("--probe-starts", type=int, default=0)
    p.set_defaults(fn=cmd_homotopy)

    p = sub.add_parser("rescale", help="map a branch into a scaling frame")
    p.add_argument("--branch", required=True,
                   help="directory of a previous continue run")
    p.add_argument("--frame", choices=("w", "v"), required=True)
    p.set_defaults(fn=cmd_rescale)

    p = sub.add_parser("verify", help="identity checks on a finished branch")
    p.add_argument("--branch", required=True,
                   help="directory of a previous continue run")
    p.add_argument("--pohozaev-tol", type=float, default=1e-3)
    p.add_argument("--slope-tol", type=float, default=0.02)
    p.add_argument("--exponent-tol", type=float, default=0.1)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("report", help="merge JSON artifacts under --out")
    p.set_defaults(fn=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except model.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except nehari.AdmissibilityError as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
