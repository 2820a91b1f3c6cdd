import argparse
import math
import sys

import numpy as np

from data.artifacts import ArtifactWriter, series_payload
from hydro.charts import ModuliPoint
from hydro.continuum import harmonic_profile, continuum_sweep
from hydro.field import HydroField
from hydro.pde import pde_integrate
from lattice.integrator import integrate
from lattice.state import Periodic, SemiInfinite, Window, random_state
from mirror.periods import CLOSED_FORM, CONTOUR, twisted_period_closed, twisted_period_contour
from simulation.metrics import compute_drift
from utils.config import dump_settings, load_settings
from utils.errors import AlcpError, ConfigError, exit_code_for
from utils.logger import get_logger, setup_logging
from verification.context import SuiteContext
from verification.report import exit_code, render, summary
from verification.suites import ALL_SCOPE, run_scope


# ---------------- CONFIG ----------------

VERIFY_SCOPES = ("all",) + ALL_SCOPE
CONTINUUM_MAX_RATIO = 0.6
CONTINUUM_MIN_ORDER = 0.7
PERIOD_ROUTE_TOL = 1e-6

EXIT_OK = 0
EXIT_CHECK_FAILED = 1

log = get_logger("main")


# ---------------- UTILS ----------------

def parse_flow(text: str) -> list:
    """'0,1' is the Ablowitz-Ladik flow, 'k,i' the flow of H(k)_i."""
    try:
        k, i = (int(part) for part in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"flow must look like 'k,i', got {text!r}") from e
    if not ((k, i) == (0, 1) or (k in (1, 2) and i >= 1)):
        raise argparse.ArgumentTypeError(f"no flow ({k}, {i}); use 0,1 or k,i with k in 1,2 and i >= 1")
    return [k, i]


def parse_epsilons(text: str) -> list:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"epsilons must be comma separated numbers, got {text!r}") from e


def common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="YAML or JSON settings file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    common.add_argument("--points", type=int, default=argparse.SUPPRESS, help="sample points per check")
    common.add_argument("--suite", default=argparse.SUPPRESS, help="run a single check by name")
    common.add_argument("--print-defaults", action="store_true", default=argparse.SUPPRESS,
                        help="print the merged settings as sorted JSON and exit")
    common.add_argument("--log-level", default=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = common_flags()
    parser = argparse.ArgumentParser(prog="alcp1", parents=[common],
                                     description="Ablowitz-Ladik lattice, its dispersionless limit and the "
                                                 "associated Frobenius structures")
    commands = parser.add_subparsers(dest="command")

    lattice = commands.add_parser("lattice", help="lattice runs and checks")
    lattice_cmds = lattice.add_subparsers(dest="action", required=True)
    evolve = lattice_cmds.add_parser("evolve", parents=[common], help="integrate a random lattice state")
    evolve.add_argument("--boundary", choices=("periodic", "window", "semi_infinite"), default=argparse.SUPPRESS)
    evolve.add_argument("--n", type=int, default=argparse.SUPPRESS)
    evolve.add_argument("--dt", type=float, default=argparse.SUPPRESS)
    evolve.add_argument("--t", type=float, default=argparse.SUPPRESS, help="final time")
    evolve.add_argument("--flow", type=parse_flow, default=argparse.SUPPRESS)
    evolve.add_argument("--amplitude", type=float, default=argparse.SUPPRESS)
    evolve.add_argument("--record-every", type=int, default=argparse.SUPPRESS)
    lattice_cmds.add_parser("verify", parents=[common], help="run the lattice checks")

    hydro = commands.add_parser("hydro", help="dispersionless runs")
    hydro_cmds = hydro.add_subparsers(dest="action", required=True)
    h_evolve = hydro_cmds.add_parser("evolve", parents=[common], help="method-of-lines run of a Lax flow")
    h_evolve.add_argument("--grid", type=int, default=argparse.SUPPRESS)
    h_evolve.add_argument("--t", type=float, default=argparse.SUPPRESS, help="final time")
    h_evolve.add_argument("--flow", type=parse_flow, default=argparse.SUPPRESS)
    h_evolve.add_argument("--cfl", type=float, default=argparse.SUPPRESS)
    compare = hydro_cmds.add_parser("compare", parents=[common], help="lattice against its long-wave limit")
    compare.add_argument("--epsilons", type=parse_epsilons, default=argparse.SUPPRESS)
    compare.add_argument("--t", type=float, default=argparse.SUPPRESS, help="slow time")

    verify = commands.add_parser("verify", parents=[common], help="run verification suites")
    verify.add_argument("scope", choices=VERIFY_SCOPES)

    commands.add_parser("periods", parents=[common], help="tabulate the twisted periods")
    return parser


def settings_overrides(args: argparse.Namespace) -> dict:
    """Command-line flags as a settings fragment."""
    flags = vars(args)
    out: dict = {}

    def put(section, key, flag):
        if flag in flags:
            out.setdefault(section, {})[key] = flags[flag]

    if "seed" in flags:
        out["seed"] = flags["seed"]
    if "out" in flags:
        out["out_dir"] = flags["out"]
    put("verify", "points", "points")
    put("verify", "suite", "suite")

    if args.command == "lattice":
        for key in ("boundary", "n", "dt", "flow", "amplitude"):
            put("lattice", key, key)
        put("lattice", "t_final", "t")
        put("lattice", "record_every", "record_every")
    elif args.command == "hydro":
        for key in ("grid", "flow", "cfl", "epsilons"):
            put("hydro", key, key)
        put("hydro", "compare_time" if args.action == "compare" else "t_final", "t")
    return out


def make_boundary(lat: dict):
    n = int(lat["n"])
    if lat["boundary"] == "periodic":
        return Periodic(n)
    if lat["boundary"] == "window":
        return Window(0, n, int(lat["buffer"]))
    return SemiInfinite(n)


def suite_context(cfg: dict) -> SuiteContext:
    return SuiteContext(seed=int(cfg["seed"]), points=int(cfg["verify"]["points"]), settings=cfg)


def print_block(title: str, items: dict):
    print(f"\n=== {title} ===")
    for k, v in items.items():
        print(f"{k}: {v}")


# ---------------- COMMANDS ----------------

def lattice_evolve(cfg: dict, writer: ArtifactWriter) -> int:
    lat = cfg["lattice"]
    rng = np.random.default_rng(cfg["seed"])
    state = random_state(rng, make_boundary(lat), float(lat["amplitude"]))
    conserved = [tuple(c) for c in lat.get("conserved") or []]

    def flush(partial):
        writer.trajectory(partial.snapshots, "trajectory_partial.csv")
        writer.json(series_payload(partial.times, partial.curves, compute_drift(partial.curves)),
                    "conservation_partial.json")

    result = integrate(state, lat["flow"], float(lat["t_final"]), float(lat["dt"]),
                       conserved=conserved, record_every=int(lat["record_every"]), flush=flush)
    drift = compute_drift(result.curves)
    trajectory = writer.trajectory(result.snapshots)
    writer.json(series_payload(result.times, result.curves, drift), "conservation.json")

    print_block("LATTICE RUN", {
        "boundary": lat["boundary"],
        "sites": state.size,
        "flow": tuple(lat["flow"]),
        "records": len(result.snapshots),
        "trajectory": trajectory,
    })
    print_block("CONSERVATION (max relative drift)",
                {name: f"{d['max_rel_drift']:.3e}" for name, d in sorted(drift.items())})
    return EXIT_OK


def hydro_evolve(cfg: dict, writer: ArtifactWriter) -> int:
    hyd = cfg["hydro"]
    prof = hyd["profile"]
    profile = harmonic_profile(prof["v0"], prof["w0"], prof["amplitude"], float(hyd["length"]))
    field0 = HydroField.from_profile(int(hyd["grid"]), profile.length, profile.v, profile.w,
                                     derivative=hyd["derivative"])
    writer.field(field0, "field_initial.csv")

    def flush(partial):
        writer.field(partial.final, "field_partial.csv")
        writer.json(series_payload(partial.times, partial.curves, compute_drift(partial.curves)),
                    "hydro_conservation_partial.json")

    result = pde_integrate(field0, hyd["flow"], float(hyd["t_final"]), cfl=float(hyd["cfl"]),
                           max_gradient=float(hyd["max_gradient"]), flush=flush)
    drift = compute_drift(result.curves)
    final = writer.field(result.final, "field_final.csv")
    writer.json(series_payload(result.times, result.curves, drift), "hydro_conservation.json")

    print_block("HYDRO RUN", {
        "grid": field0.size,
        "flow": tuple(hyd["flow"]),
        "t_final": result.final.time,
        "field": final,
    })
    print_block("CONSERVATION (max relative drift)",
                {name: f"{d['max_rel_drift']:.3e}" for name, d in sorted(drift.items())})
    return EXIT_OK


def hydro_compare(cfg: dict, writer: ArtifactWriter) -> int:
    hyd = cfg["hydro"]
    prof = hyd["profile"]
    profile = harmonic_profile(prof["v0"], prof["w0"], prof["amplitude"], float(hyd["length"]))
    reports = continuum_sweep(profile, hyd["epsilons"], float(hyd["compare_time"]),
                              lattice_dt=float(hyd["lattice_dt"]), grid=int(hyd["grid"]))
    path = writer.json([r.to_dict() for r in reports], "compare.json")

    ratios = [cur.sup_error / prev.sup_error for prev, cur in zip(reports, reports[1:])]
    orders = [r.order_estimate for r in reports if r.order_estimate is not None]
    passed = (all(r <= CONTINUUM_MAX_RATIO for r in ratios)
              and all(math.isfinite(o) and o >= CONTINUUM_MIN_ORDER for o in orders))

    print("\n=== CONTINUUM COMPARISON ===")
    for r in reports:
        order = "-" if r.order_estimate is None else f"{r.order_estimate:.3f}"
        print(f"eps={r.epsilon:.6g}: sup_error={r.sup_error:.3e} order={order}")
    print(f"\nReport: {path}")
    print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def run_checks(cfg: dict, writer: ArtifactWriter, scope: str, report_name: str) -> int:
    results = run_scope(scope, suite_context(cfg), cfg["verify"].get("suite", "all"))
    path = writer.text(render(results), report_name)

    print_block(f"VERIFY {scope.upper()}", summary(results))
    print(f"\nReport: {path}")
    # report first; a check that hit a numerical error still exits 3
    return exit_code(results)


def periods_table(cfg: dict, writer: ArtifactWriter) -> int:
    rows = []
    worst = 0.0
    for z in cfg["periods"]["z"]:
        for v, w in cfg["periods"]["points"]:
            pt = ModuliPoint.from_vw(v, w)
            closed = [twisted_period_closed(alpha, z, pt).value for alpha in (1, 2)]
            routes = [(CLOSED_FORM, closed)]
            gap = float("nan")
            if -1.0 < float(z) < 0.0:
                contour = [twisted_period_contour(alpha, z, pt).value for alpha in (1, 2)]
                gap = max(abs(c - q) for c, q in zip(closed, contour))
                worst = max(worst, max(abs(c - q) / max(1.0, abs(c)) for c, q in zip(closed, contour)))
                routes.append((CONTOUR, contour))
            for route, (p1, p2) in routes:
                rows.append({
                    "z": float(z), "v": float(v), "w": float(w),
                    "re_p1": p1.real, "im_p1": p1.imag, "re_p2": p2.real, "im_p2": p2.imag,
                    "route": route, "abs_route_gap": gap,
                })
    path = writer.period_table(rows)

    passed = worst <= PERIOD_ROUTE_TOL
    print_block("TWISTED PERIODS", {
        "rows": len(rows),
        "max_route_gap": f"{worst:.3e}",
        "table": path,
    })
    print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


# ---------------- MAIN ----------------

def dispatch(args: argparse.Namespace, cfg: dict) -> int:
    writer = ArtifactWriter(cfg["out_dir"])
    if args.command == "lattice":
        if args.action == "evolve":
            return lattice_evolve(cfg, writer)
        return run_checks(cfg, writer, "lattice", "lattice_report.json")
    if args.command == "hydro":
        if args.action == "evolve":
            return hydro_evolve(cfg, writer)
        return hydro_compare(cfg, writer)
    if args.command == "verify":
        return run_checks(cfg, writer, args.scope, f"verify_{args.scope}.json")
    return periods_table(cfg, writer)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(getattr(args, "log_level", None))

    try:
        cfg = load_settings(getattr(args, "config", None), settings_overrides(args))
        if getattr(args, "print_defaults", False):
            print(dump_settings(cfg))
            return EXIT_OK
        if args.command is None:
            raise ConfigError("no command given; see --help")
        return dispatch(args, cfg)
    except AlcpError as e:
        log.error("%s: %s", type(e).__name__, e)
        print(f"[ERROR] {type(e).__name__}: {e}", file=sys.stderr)
        return exit_code_for(e)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as e:
        log.exception("numerical failure")
        print(f"[ERROR] {type(e).__name__}: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
