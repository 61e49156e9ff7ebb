"""
Command-line entry point.

    python main.py tmin --ground -2 --ground 2 --omega 1
    python main.py tmin --in "1,0" --out "0.70710678,0.70710678"
    python main.py protocol --ground -2 --ground 2 --c 5 --epsilon 0.01 --corrected
    python main.py simulate --protocol p.json --ground -2 --ground 2
    python main.py sweep --gamma 2 --c-min 0.05 --c-max 20 --points 400
    python main.py verify --gamma 2 --c 5
    python main.py qsl --in "1,0" --out "0.6,0.8i"

Exit codes: 0 success, 1 domain error, 2 usage error, 3 verification failure.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from analytic import Regime, TminResult, qsl_times, tmin_constrained, tmin_optical, tmin_unconstrained
from config import (
    EXIT_DOMAIN,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY,
    SWEEP_C_MAX,
    SWEEP_C_MIN,
    SWEEP_GAMMA_OVER_OMEGA,
    SWEEP_POINTS,
)
from dynamics import integrate_protocol, propagate_protocol, protocol_frame
from errors import QocError
from oracle import sweep_fig1
from protocol import SWITCH_SHAPES, Protocol, apply_switching, build_optimal
from report_generator import ReportGenerator, sweep_frame
from states import Level, LzParams, QubitState, fidelity, lz_eigenstate, parse_state
from validate_reports import ResultValidator

logger = logging.getLogger("main")


class UsageError(Exception):
    """Bad flag combination or unparseable literal (exit 2)."""


class _EigenstateAction(argparse.Action):
    """Collects --ground / --excited in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        collected = list(getattr(namespace, self.dest, None) or [])
        collected.append((self.const, values))
        setattr(namespace, self.dest, collected)


@dataclass(frozen=True)
class RunConfig:
    """Validated command-line request."""

    command: str
    params: LzParams
    initial: Optional[QubitState]
    final: Optional[QubitState]
    fmt: str
    output: Optional[str]
    corrected: bool = False
    shape: str = "linear"
    optical: bool = False
    detuning: Optional[float] = None
    protocol_path: Optional[str] = None
    integrate: bool = False
    c_grid: Tuple[float, ...] = ()
    fleming_gamma: float = 0.0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", type=float, default=1.0, help="coupling omega (angular frequency)")
    common.add_argument("--gamma", type=float, default=None, help="asymmetry gamma (sweep: gamma/omega)")
    common.add_argument("--c", type=float, default=None, help="bound on |Gamma(t)|")
    common.add_argument("--omega-max", type=float, default=None, help="bound on |omega(t)| when omega is a control")
    common.add_argument("--epsilon", type=float, default=None, help="switching time of Gamma")
    common.add_argument("--corrected", action="store_true", help="use T_c - eps/2, T_off - eps")
    common.add_argument("--shape", choices=sorted(SWITCH_SHAPES), default="linear", help="ramp shape")
    common.add_argument("--ground", dest="eigen", action=_EigenstateAction, const=Level.GROUND,
                        type=float, metavar="G", help="ground state of H with gamma = G * omega")
    common.add_argument("--excited", dest="eigen", action=_EigenstateAction, const=Level.EXCITED,
                        type=float, metavar="G", help="excited state of H with gamma = G * omega")
    common.add_argument("--in", dest="state_in", default=None, metavar="AMPS", help='initial state "a+bi,c+di"')
    common.add_argument("--out", dest="state_out", default=None, metavar="AMPS", help='target state "a+bi,c+di"')
    common.add_argument("--optical", action="store_true", help="fixed detuning, unconstrained Rabi frequency")
    common.add_argument("--detuning", type=float, default=None, help="detuning for --optical (default --omega)")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default=None)
    common.add_argument("--output", default=None, help="write to this file instead of stdout")
    common.add_argument("--verbose", "-v", action="count", default=0)

    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Time-optimal Landau-Zener driving: minimal times, protocols, simulation, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("tmin", parents=[common], help="minimal time between two states")
    sub.add_parser("protocol", parents=[common], help="optimal protocol as JSON")

    p_sim = sub.add_parser("simulate", parents=[common], help="propagate a protocol file")
    p_sim.add_argument("--protocol", dest="protocol_path", required=True, help="protocol JSON file")
    p_sim.add_argument("--integrate", action="store_true", help="ODE integration instead of exact propagation")

    p_sweep = sub.add_parser("sweep", parents=[common], help="minimal time against c/omega")
    p_sweep.add_argument("--c-min", type=float, default=SWEEP_C_MIN)
    p_sweep.add_argument("--c-max", type=float, default=SWEEP_C_MAX)
    p_sweep.add_argument("--points", type=int, default=SWEEP_POINTS)
    p_sweep.add_argument("--c-values", default=None, help="comma-separated c/omega values")

    sub.add_parser("verify", parents=[common], help="oracle checks of the analytic results")

    p_qsl = sub.add_parser("qsl", parents=[common], help="minimal time vs speed-limit times")
    p_qsl.add_argument("--fleming-gamma", type=float, default=0.0,
                       help="gamma of the constant Hamiltonian used for the Fleming bound")
    return parser


def _parse_literal(flag: str, text: str) -> QubitState:
    try:
        return parse_state(text)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _resolve_states(args) -> Tuple[Optional[QubitState], Optional[QubitState], Optional[float]]:
    """
    States from --in/--out or from the eigenstate shorthand.

    Returns (initial, final, gamma implied by the shorthand).
    """
    eigen = getattr(args, "eigen", None) or []
    literal = args.state_in is not None or args.state_out is not None

    if eigen and literal:
        raise UsageError("--ground/--excited cannot be combined with --in/--out")

    if eigen:
        if len(eigen) != 2:
            raise UsageError("give exactly two of --ground/--excited (initial, then final)")
        states = [lz_eigenstate(ratio * args.omega, args.omega, level) for level, ratio in eigen]
        return states[0], states[1], abs(eigen[-1][1]) * args.omega

    if literal:
        if args.state_in is None or args.state_out is None:
            raise UsageError("--in and --out must be given together")
        return _parse_literal("--in", args.state_in), _parse_literal("--out", args.state_out), None

    return None, None, None


def make_config(args) -> RunConfig:
    initial, final, implied_gamma = _resolve_states(args)
    gamma = args.gamma if args.gamma is not None else implied_gamma
    if gamma is None:
        gamma = SWEEP_GAMMA_OVER_OMEGA * args.omega if args.command in ("sweep", "verify") else 0.0

    if args.command in ("tmin", "protocol", "simulate", "qsl") and initial is None:
        raise UsageError(f"{args.command} needs states: --in/--out or --ground/--excited twice")

    c_grid: Tuple[float, ...] = ()
    if args.command == "sweep":
        if args.c_values:
            try:
                c_grid = tuple(float(v) for v in args.c_values.split(","))
            except ValueError:
                raise UsageError(f"--c-values: cannot parse {args.c_values!r}") from None
        else:
            if args.points < 1:
                raise UsageError("--points must be >= 1")
            c_grid = tuple(float(v) for v in np.linspace(args.c_min, args.c_max, args.points))

    fmt = args.fmt or ("csv" if args.command == "sweep" else "json")
    return RunConfig(
        command=args.command,
        params=LzParams(gamma=gamma, omega=args.omega, c=args.c, omega_max=args.omega_max, epsilon=args.epsilon),
        initial=initial,
        final=final,
        fmt=fmt,
        output=args.output,
        corrected=args.corrected,
        shape=args.shape,
        optical=args.optical,
        detuning=args.detuning,
        protocol_path=getattr(args, "protocol_path", None),
        integrate=getattr(args, "integrate", False),
        c_grid=c_grid,
        fleming_gamma=getattr(args, "fleming_gamma", 0.0),
    )


# ============================================================
# COMMANDS
# ============================================================

def cmd_tmin(cfg: RunConfig) -> int:
    p = cfg.params
    if cfg.optical:
        detuning = cfg.detuning if cfg.detuning is not None else p.omega
        result = TminResult(t_min=tmin_optical(cfg.initial, cfg.final, detuning), regime=Regime.UNCONSTRAINED)
    elif p.c is not None:
        build_optimal(cfg.initial, cfg.final, p)  # rejects endpoints other than the LZ ground pair
        result = tmin_constrained(p.gamma, p.omega, p.c)
    else:
        result = tmin_unconstrained(cfg.initial, cfg.final, p.omega, p.omega_max)
    ReportGenerator(cfg.output, cfg.fmt).write_result(result.to_dict(), "Minimal time")
    return EXIT_OK


def cmd_protocol(cfg: RunConfig) -> int:
    p = cfg.params
    proto = build_optimal(cfg.initial, cfg.final, p)
    if p.epsilon:
        proto = apply_switching(proto, p.epsilon, cfg.corrected, cfg.shape)

    report = ReportGenerator(cfg.output, cfg.fmt)
    if cfg.fmt == "csv":
        t, gamma, omega = proto.gamma_profile()
        report.write_frame(pd.DataFrame({"t": t, "gamma": gamma, "omega": omega}), "Protocol profile")
        return EXIT_OK

    out = proto.to_dict()
    out["fidelity"] = fidelity(propagate_protocol(proto, cfg.initial), cfg.final)
    report.write_result(out, "Protocol")
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    try:
        with open(cfg.protocol_path, "r", encoding="utf-8") as fh:
            proto = Protocol.from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"--protocol: cannot read {cfg.protocol_path!r}: {exc.strerror}") from None

    report = ReportGenerator(cfg.output, cfg.fmt)
    if cfg.fmt == "csv":
        frame = protocol_frame(proto, cfg.initial)
        report.write_frame(frame, "Trajectory")
        return EXIT_OK

    if cfg.integrate:
        achieved = integrate_protocol(proto, cfg.initial)
    else:
        achieved = propagate_protocol(proto, cfg.initial)
    f = fidelity(achieved, cfg.final)
    report.write_result({
        "fidelity": f,
        "fidelity_squared": f * f,
        "duration": proto.total_duration,
        "method": "ode" if cfg.integrate else "exact",
    }, "Simulation")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    ratio = cfg.params.gamma / cfg.params.omega
    rows = sweep_fig1(ratio, cfg.c_grid)
    ReportGenerator(cfg.output, cfg.fmt).write_frame(sweep_frame(rows), "Sweep")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    p = cfg.params
    validator = ResultValidator(gamma=p.gamma, omega=p.omega, c=p.c, epsilon=p.epsilon)
    summary = validator.validate_all()
    ReportGenerator(cfg.output, cfg.fmt).write_frame(validator.to_frame(), "Verification table")
    return EXIT_OK if summary["failed"] == 0 else EXIT_VERIFY


def cmd_qsl(cfg: RunConfig) -> int:
    report = qsl_times(cfg.initial, cfg.final, cfg.params.omega, cfg.fleming_gamma)
    ReportGenerator(cfg.output, cfg.fmt).write_result(report.to_dict(), "Speed limits")
    return EXIT_OK


HANDLERS = {
    "tmin": cmd_tmin,
    "protocol": cmd_protocol,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "qsl": cmd_qsl,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    try:
        cfg = make_config(args)
        logger.info("Running %s (format %s)", cfg.command, cfg.fmt)
        return HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"❌ usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QocError as exc:
        print(f"❌ {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
