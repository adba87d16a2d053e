"""Command-line front end.

Subcommands: ``state`` (construct covariance matrices), ``analyze``
(steering, RGS, key rates of one state), ``verify`` (Monte Carlo
property campaigns), ``sweep`` (figure data tables as CSV), and
``threshold`` (GHZ-network squeezing threshold).

Exit codes: 0 success, 1 property violation, 2 usage error, 3 domain
error.  All data goes to stdout or the ``--output`` file; the error
stream only ever carries single-line ``error: ...`` messages.  The
``STEERLAB_SEED`` environment variable overrides the default seed (42)
wherever a ``--seed`` flag is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import DomainError, UsageError
from .monogamy import fig1a_sweep, fig1b_sweep, rgs
from .qss import fig2_campaign, key_rate_report, threshold_squeezing_ghz
from .states import (
    OpticalNetworkParams,
    PureThreeModeParams,
    SamplerConfig,
    ghz_network,
    local_invariants,
    standard_form_pure,
    two_mode_squeezed,
    vacuum,
)
from .steering import gaussian_steering
from .symplectic import CovarianceMatrix, is_pure, partial_trace
from .verify import run_suite

SCHEMA = "steerlab/v1"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _default_seed() -> int:
    env = os.environ.get("STEERLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"STEERLAB_SEED must be an integer, got {env!r}")
    return 42


def _add_constructor_flags(parser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--vacuum", type=int, metavar="N", help="vacuum state of N modes")
    group.add_argument("--tmsv", type=float, metavar="R",
                       help="two-mode squeezed vacuum with squeezing parameter R")
    group.add_argument("--ghz-network", type=float, nargs=3, metavar=("R", "REFL", "REFL2"),
                       help="three-mode network state from squeezing r and reflectivities R, R'")
    group.add_argument("--standard-form", type=float, nargs=3, metavar=("A", "B", "C"),
                       help="pure three-mode state with local invariants (a, b, c)")


def _build_state(args) -> CovarianceMatrix:
    if args.vacuum is not None:
        return vacuum(args.vacuum)
    if args.tmsv is not None:
        return two_mode_squeezed(args.tmsv)
    if args.ghz_network is not None:
        r, refl, refl2 = args.ghz_network
        return ghz_network(OpticalNetworkParams(r=r, R=refl, R_prime=refl2))
    if args.standard_form is not None:
        return standard_form_pure(PureThreeModeParams(*args.standard_form))
    raise UsageError("no state given: use a constructor flag or --input FILE")


def _load_state(path: str) -> CovarianceMatrix:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read state file {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"state file {path} is not valid JSON: {exc}")
    return CovarianceMatrix.from_dict(data)


def _labels_to_modes(label: str, n_modes: int):
    modes = []
    for ch in label:
        idx = ord(ch.upper()) - ord("A")
        if not 0 <= idx < n_modes:
            raise UsageError(
                f"party label {ch!r} does not name a mode of a {n_modes}-mode state"
            )
        modes.append(idx)
    if not modes:
        raise UsageError("party label must name at least one mode")
    if len(set(modes)) != len(modes):
        raise UsageError(f"party label {label!r} repeats a mode")
    return tuple(sorted(modes))


def _emit(text: str, output) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, output) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", output)


def cmd_state(args) -> int:
    try:
        sigma = _build_state(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = {"schema": SCHEMA, **sigma.to_dict(), "pure": is_pure(sigma)}
    if sigma.n_modes == 3:
        payload["local_invariants"] = list(local_invariants(sigma))
    _emit_json(payload, args.output)
    return 0


def cmd_analyze(args) -> int:
    try:
        sigma = _load_state(args.input) if args.input else _build_state(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.steering:
            from_label, to_label = args.steering
            steering = _labels_to_modes(from_label, sigma.n_modes)
            steered = _labels_to_modes(to_label, sigma.n_modes)
            if set(steering) & set(steered):
                raise UsageError("steering and steered parties overlap")
            union = sorted(set(steering) | set(steered))
            if len(union) < sigma.n_modes:
                sigma = partial_trace(sigma, union)
                steering = tuple(union.index(m) for m in steering)
                steered = tuple(union.index(m) for m in steered)
            value = gaussian_steering(sigma, steering, steered)
            payload = {
                "schema": SCHEMA,
                "quantity": "steering",
                "steering_party": from_label.upper(),
                "steered_party": to_label.upper(),
                **value.to_dict(),
            }
        elif args.rgs:
            value = rgs(sigma)
            payload = {"schema": SCHEMA, "quantity": "rgs", **value.to_dict()}
        else:
            report = key_rate_report(sigma, key_quadrature=args.key_quadrature)
            payload = {"schema": SCHEMA, "quantity": "keyrate", **report.to_dict()}
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    _emit_json(payload, args.output)
    return 0


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        results = run_suite(args.suite, args.samples, seed, args.threads)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    lines = [r.summary_line() for r in results]
    failed = [r for r in results if not r.passed]
    for r in failed:
        dump = f"steerlab-violation-{r.name}.json"
        with open(dump, "w") as fh:
            json.dump({"schema": SCHEMA, "suite": r.name, **r.worst_case}, fh, indent=2)
        lines.append(f"violation details written to {dump}")
    lines.append("FAIL" if failed else "PASS")
    _emit("\n".join(lines) + "\n", args.output)
    return 1 if failed else 0


def cmd_sweep(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        if args.figure == "1a":
            table = fig1a_sweep(args.a, grid=args.grid, b_max=args.bmax, threads=args.threads)
        elif args.figure == "1b":
            table = fig1b_sweep(args.r, grid=args.grid, threads=args.threads)
        else:
            cfg = SamplerConfig(seed=seed, count=args.samples, a_max=args.amax)
            table = fig2_campaign(cfg, threads=args.threads)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(table.to_csv_text(), args.output)
    return 0


def cmd_threshold(args) -> int:
    result = threshold_squeezing_ghz()
    _emit(
        f"r_star = {result.r_star:.4f}\nsqueezing_db = {result.squeezing_db:.4f}\n",
        args.output,
    )
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="steerlab",
                     description="Gaussian steering, monogamy, and secret-sharing key rates")
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("state", parents=[], help="construct a state and print its CM as JSON")
    _add_constructor_flags(p_state)
    p_state.add_argument("--output", metavar="FILE", help="write JSON here instead of stdout")
    p_state.set_defaults(fn=cmd_state)

    p_an = sub.add_parser("analyze", help="compute steering, RGS, or key rates for one state")
    _add_constructor_flags(p_an)
    p_an.add_argument("--input", metavar="FILE", help="state JSON produced by `steerlab state`")
    action = p_an.add_mutually_exclusive_group(required=True)
    action.add_argument("--steering", nargs=2, metavar=("FROM", "TO"),
                        help="steering of party TO by party FROM (labels like A, B, BC)")
    action.add_argument("--rgs", action="store_true",
                        help="residual Gaussian steering (pure three-mode states)")
    action.add_argument("--keyrate", action="store_true",
                        help="full key-rate report (standard-form states)")
    p_an.add_argument("--key-quadrature", choices=("p", "x"), default="p",
                      help="key quadrature for --keyrate (default p)")
    p_an.add_argument("--output", metavar="FILE")
    p_an.set_defaults(fn=cmd_analyze)

    p_ver = sub.add_parser(
        "verify", help="run seeded property campaigns; exit 1 on any violation",
        epilog="suites: monogamy, exclusivity, logdet, ssa, rgs-consistency, qss-bounds, all",
    )
    p_ver.add_argument("--suite", required=True)
    p_ver.add_argument("--samples", type=int, default=10_000)
    p_ver.add_argument("--seed", type=int, default=None,
                       help="master seed (default: STEERLAB_SEED or 42)")
    p_ver.add_argument("--threads", type=int, default=1)
    p_ver.add_argument("--output", metavar="FILE")
    p_ver.set_defaults(fn=cmd_verify)

    p_sw = sub.add_parser(
        "sweep", help="emit figure data tables as CSV",
        epilog=(
            "columns: 1a -> b,c,rgs; 1b -> R,a,b,c,rgs; "
            "2 -> sample_index,a,b,c,rgs,k_raw,k_clamped,lower_bound,upper_bound,"
            "slack_lower,slack_upper,series"
        ),
    )
    p_sw.add_argument("--figure", required=True, choices=("1a", "1b", "2"))
    p_sw.add_argument("--a", type=float, default=2.0, help="fixed local invariant for figure 1a")
    p_sw.add_argument("--bmax", type=float, default=5.0, help="upper edge of the (b, c) grid")
    p_sw.add_argument("--r", type=float, default=0.345, help="squeezing parameter for figure 1b")
    p_sw.add_argument("--grid", type=int, default=200, help="grid resolution")
    p_sw.add_argument("--samples", type=int, default=100_000, help="sample count for figure 2")
    p_sw.add_argument("--amax", type=float, default=5.0, help="invariant range for figure 2")
    p_sw.add_argument("--seed", type=int, default=None,
                      help="master seed (default: STEERLAB_SEED or 42)")
    p_sw.add_argument("--threads", type=int, default=1)
    p_sw.add_argument("--output", metavar="FILE")
    p_sw.set_defaults(fn=cmd_sweep)

    p_th = sub.add_parser("threshold",
                          help="squeezing threshold for a positive GHZ-network key rate")
    p_th.add_argument("--output", metavar="FILE")
    p_th.set_defaults(fn=cmd_threshold)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
