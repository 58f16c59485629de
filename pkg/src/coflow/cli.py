"""Command-line surface tying the library together.

Subcommands:
  verify        exact identity suites at random rational parameter points
  flow          integrate one trajectory; writes CSV plus a JSON sidecar
  stability     spectral report at a critical point
  sphere-index  multiplicity table and the windowed index bound

Exit codes: 0 success, 1 verification failure, 2 input or usage error.
The environment variable COFLOW_SEED, when set, overrides --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from .coflow_dynamics import (
    MODIFIED,
    NORMALIZED,
    FlowConfig,
    FlowState,
    integrate,
)
from .g2_ansatz import identity_suite
from .invariant_forms import algebra_checks, random_params
from .sphere_spectrum import in_window, index_lower_bound, write_csv as write_sphere_csv
from .stability import (
    LABEL_PRINCIPAL,
    LABEL_RESCALED,
    classify,
    find_critical_points,
    state_direction,
    verify_psi_identities,
)

_FLAVOR_ALIASES = {
    "coflow": NORMALIZED,
    "normalized": NORMALIZED,
    NORMALIZED: NORMALIZED,
    "modified": MODIFIED,
    MODIFIED: MODIFIED,
}


def _flavor(sub: argparse.ArgumentParser, name: str) -> str:
    try:
        return _FLAVOR_ALIASES[name]
    except KeyError:
        sub.error(f"unknown flavor {name!r}; choose from {sorted(_FLAVOR_ALIASES)}")


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def _cmd_verify(args: argparse.Namespace) -> int:
    sub = args.subparser
    if args.trials < 1:
        sub.error("--trials must be at least 1")
    seed = args.seed
    env_seed = os.environ.get("COFLOW_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            sub.error(f"COFLOW_SEED must be an integer, got {env_seed!r}")

    rng = random.Random(seed)
    failures: dict[str, int] = {}
    order: list[str] = []
    first_failure: dict | None = None
    for trial in range(args.trials):
        for eps in (+1, -1):
            params = random_params(rng, eps)
            results = algebra_checks(params) + identity_suite(params)
            for check_id, ok in results:
                if check_id not in failures:
                    failures[check_id] = 0
                    order.append(check_id)
                if not ok:
                    failures[check_id] += 1
                    if first_failure is None:
                        first_failure = {
                            "id": check_id,
                            "trial": trial,
                            "params": {
                                "a": str(params.a),
                                "b": str(params.b),
                                "q": str(params.q),
                                "eps": params.eps,
                            },
                        }

    all_pass = first_failure is None
    report = {
        "seed": seed,
        "trials": args.trials,
        "checks": [
            {"id": cid, "status": "pass" if failures[cid] == 0 else "fail",
             "failures": failures[cid]}
            for cid in order
        ],
        "status": "pass" if all_pass else "fail",
    }
    if first_failure is not None:
        report["first_failure"] = first_failure
    _emit(report, args.out)
    return 0 if all_pass else 1


def _cmd_flow(args: argparse.Namespace) -> int:
    sub = args.subparser
    flavor = _flavor(sub, args.flavor)
    if args.perturb is None:
        for name in ("a0", "b0", "c0"):
            val = getattr(args, name)
            if val is None:
                sub.error(f"--{name} is required unless --perturb is given")
            if not val > 0:
                sub.error(f"--{name} must be positive, got {val}")
        initial = FlowState(0.0, args.a0, args.b0, args.c0)
        reference = None
    else:
        if any(getattr(args, n) is not None for n in ("a0", "b0", "c0")):
            sub.error("--perturb replaces --a0/--b0/--c0; do not pass both")
        if not args.delta > 0:
            sub.error("--delta must be positive")
        try:
            points = find_critical_points(flavor, args.kappa, args.gamma, args.eps)
        except ValueError as exc:
            sub.error(str(exc))
        point = next(p for p in points if p.label == LABEL_PRINCIPAL)
        report = classify(flavor, point, args.kappa, args.gamma, args.eps)
        if report.index < 1:
            sub.error("the selected critical point has no unstable direction")
        direction = state_direction(point, report.eigenpairs[0].vector)
        start = [point.state[i] + args.delta * direction[i] for i in range(3)]
        initial = FlowState(0.0, *start)
        reference = point.state

    config = FlowConfig(
        flavor=flavor, kappa=args.kappa, gamma=args.gamma, eps=args.eps,
        t_max=args.t_max, rtol=args.rtol, atol=args.atol,
        max_steps=args.max_steps, tol_conv=args.tol_conv,
        reference=reference, escape_radius=args.escape_radius,
    )
    traj = integrate(config, initial)
    traj.write_csv(args.out)
    sidecar = os.path.splitext(args.out)[0] + ".json"
    traj.write_sidecar(sidecar)
    print(json.dumps(traj.sidecar_dict(), indent=2))
    return 0


def _cmd_stability(args: argparse.Namespace) -> int:
    sub = args.subparser
    flavor = _flavor(sub, args.flavor)
    gamma = args.gamma
    if flavor == MODIFIED and not gamma > 2:
        sub.error("the modified flow needs gamma > 2")
    if flavor == NORMALIZED:
        if args.point == "rescaled":
            sub.error("the rescaled point exists only for the modified flavor")
        gamma = None
    label = LABEL_PRINCIPAL if args.point == "principal" else LABEL_RESCALED

    points = find_critical_points(flavor, args.kappa, gamma, args.eps)
    point = next(p for p in points if p.label == label)
    report = classify(flavor, point, args.kappa, gamma, args.eps)
    psi = verify_psi_identities(args.eps, Fraction(str(args.kappa)))
    _emit(report.to_json_dict(), args.out)
    if not psi.all_pass:
        print("psi identity sub-checks FAILED", file=sys.stderr)
        return 1
    return 0


def _cmd_sphere_index(args: argparse.Namespace) -> int:
    sub = args.subparser
    if args.l_min < 0:
        sub.error(f"--l-min must be non-negative, got {args.l_min}")
    if args.l_max < args.l_min:
        sub.error(f"empty level range [{args.l_min}, {args.l_max}]")
    if not args.gamma > 2:
        sub.error("the window requires gamma > 2")
    gamma = Fraction(str(args.gamma))
    total, records = index_lower_bound(args.l_min, args.l_max, gamma)
    if args.out:
        write_sphere_csv(args.out, records, gamma)
    else:
        print("l,eigenvalue,d,d0,d1,lower_bound,in_window(gamma)")
        for r in records:
            flag = str(in_window(r.l, gamma)).lower()
            print(f"{r.l},{r.eigenvalue},{r.d},{r.d0},{r.d1},{r.lower_bound},{flag}")
    print(total)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coflow",
        description="Exact invariant-form algebra, co-flow integration, "
                    "stability reports and sphere multiplicity counts.",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p_verify = subs.add_parser("verify", help="run the exact identity suites")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--trials", type=int, default=20)
    p_verify.add_argument("--out", default=None, help="also write the JSON report here")
    p_verify.set_defaults(handler=_cmd_verify, subparser=p_verify)

    p_flow = subs.add_parser("flow", help="integrate one trajectory")
    p_flow.add_argument("--flavor", default="coflow")
    p_flow.add_argument("--eps", type=int, choices=(1, -1), default=-1)
    p_flow.add_argument("--kappa", type=float, default=4.0)
    p_flow.add_argument("--gamma", type=float, default=3.0)
    p_flow.add_argument("--a0", type=float, default=None)
    p_flow.add_argument("--b0", type=float, default=None)
    p_flow.add_argument("--c0", type=float, default=None)
    p_flow.add_argument("--t-max", type=float, default=10.0)
    p_flow.add_argument("--rtol", type=float, default=1e-10)
    p_flow.add_argument("--atol", type=float, default=1e-12)
    p_flow.add_argument("--max-steps", type=int, default=100_000)
    p_flow.add_argument("--tol-conv", type=float, default=1e-8)
    p_flow.add_argument("--escape-radius", type=float, default=1e-1)
    p_flow.add_argument("--perturb", choices=("unstable",), default=None,
                        help="start at the principal critical point plus "
                             "delta along the unit unstable eigenvector")
    p_flow.add_argument("--delta", type=float, default=1e-3)
    p_flow.add_argument("--out", default="trajectory.csv")
    p_flow.set_defaults(handler=_cmd_flow, subparser=p_flow)

    p_stab = subs.add_parser("stability", help="spectral report at a critical point")
    p_stab.add_argument("--flavor", default="modified")
    p_stab.add_argument("--eps", type=int, choices=(1, -1), default=-1)
    p_stab.add_argument("--kappa", type=float, default=4.0)
    p_stab.add_argument("--gamma", type=float, default=3.0)
    p_stab.add_argument("--point", choices=("principal", "rescaled"), default="principal")
    p_stab.add_argument("--out", default=None, help="also write the JSON report here")
    p_stab.set_defaults(handler=_cmd_stability, subparser=p_stab)

    p_sphere = subs.add_parser("sphere-index", help="multiplicity table and index bound")
    p_sphere.add_argument("--l-min", type=int, required=True)
    p_sphere.add_argument("--l-max", type=int, required=True)
    p_sphere.add_argument("--gamma", type=float, default=3.0)
    p_sphere.add_argument("--out", default=None, help="write the CSV here instead of stdout")
    p_sphere.set_defaults(handler=_cmd_sphere_index, subparser=p_sphere)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
