"""
Command line front end: ``hqdisk <subcommand> [options]``.

Defaults come from the persisted configuration (config.settings); flags
override them for one run. Exit status is 0 when every asserted check passes,
1 when one fails and 2 when the run is rejected with an hqdisk error.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from colorama import Fore, Style, just_fix_windows_console

from config.settings import APP_NAME, APP_VERSION, load_config, save_config, setup_logging
from hqdisk import experiments
from hqdisk.errors import HQDiskError
from hqdisk.hilbert import PVConfig
from hqdisk.poisson import QuadratureConfig

logger = logging.getLogger(__name__)

# flag dest -> configuration key
OVERRIDES = {
    "nodes": "nodes",
    "rmax": "r_max",
    "eps": "eps",
    "pv_nodes": "pv_nodes",
    "kernel": "kernel",
    "mesh": "mesh",
    "angles": "angles",
    "nmax": "nmax",
    "trials": "trials",
    "seed": "seed",
    "out": "out",
    "format": "format",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--nodes', type=int, help='Poisson quadrature nodes (power of two)')
    common.add_argument('--rmax', type=float, help='Largest certified interior radius')
    common.add_argument('--eps', type=float, help='Principal-value exclusion half-width')
    common.add_argument('--pv-nodes', type=int, help='Principal-value quadrature nodes')
    common.add_argument('--kernel', choices=['tan', 't'], help='Hilbert kernel variant')
    common.add_argument('--mesh', type=int, help='Mesh for lift distances')
    common.add_argument('--angles', type=int, help='Angles per circle in dilatation sweeps')
    common.add_argument('--nmax', type=int, help='Largest n of the incompleteness sequence')
    common.add_argument('--trials', type=int, help='Random convex combinations to test')
    common.add_argument('--seed', type=int, help='Seed for the convexity trials')
    common.add_argument('--out', help='Output directory for reports and figures')
    common.add_argument('--format', choices=['csv', 'json', 'svg'], help='Report format')
    common.add_argument('--quiet', action='store_true', help='Only log warnings and errors')

    parser = argparse.ArgumentParser(prog=APP_NAME,
                                     description='Harmonic quasiconformal disk automorphisms: experiments')
    parser.add_argument('--version', action='version', version=f"{APP_NAME} {APP_VERSION}")
    sub = parser.add_subparsers(dest='command', required=True)

    render = sub.add_parser('render', parents=[common], help='Draw images of circles, rays and a grid')
    render.add_argument('--boundary', default='identity', help='Named lift, e.g. identity, phi_n:4, mobius:0.3')
    sub.add_parser('incompleteness', parents=[common], help='phi_n converging to the Cantor lift')
    sub.add_parser('example3', parents=[common], help='The flat-arc boundary map')
    sub.add_parser('convexity', parents=[common], help='Random convex combinations of members')
    sub.add_parser('hilbert-demo', parents=[common], help='Hilbert transformation sanity table')
    cantor = sub.add_parser('cantor-plot', parents=[common], help='Graphs of the Cantor approximants')
    cantor.add_argument('--n', type=int, nargs='+', default=[1, 2, 3, 15], help='Iteration indices to draw')
    verdict = sub.add_parser('verdict', parents=[common], help='Membership and dilatation for one lift')
    verdict.add_argument('--boundary', default='identity', help='Named lift')
    settings = sub.add_parser('config', parents=[common], help='Show or persist the configuration')
    settings.add_argument('--show', action='store_true', help='Print the effective configuration')
    settings.add_argument('--save', action='store_true', help='Store the effective configuration')
    return parser


def effective_config(args: argparse.Namespace, config: dict) -> dict:
    """Loaded configuration with command line overrides applied"""
    merged = dict(config)
    for dest, key in OVERRIDES.items():
        value = getattr(args, dest, None)
        if value is not None:
            merged[key] = value
    return merged


def print_summary(report: experiments.ExperimentReport) -> None:
    for check in report.checks:
        if check.passed:
            label, color = "PASS", Fore.GREEN
        elif check.required:
            label, color = "FAIL", Fore.RED
        else:
            label, color = "NOTE", Fore.YELLOW
        detail = f" ({check.detail})" if check.detail else ""
        print(f"{color}{label}{Style.RESET_ALL} {report.experiment}: {check.name}{detail}")


def run(args: argparse.Namespace, config: dict) -> int:
    if args.command == 'config':
        if args.save:
            if not save_config(config):
                return 1
            logger.info("Configuration saved")
        if args.show or not args.save:
            print(json.dumps(config, indent=2, sort_keys=True))
        return 0

    cfg = QuadratureConfig.from_config(config)
    pv = PVConfig.from_config(config)
    out = config["out"]

    if args.command == 'render':
        report = experiments.cmd_render(args.boundary, out, cfg)
    elif args.command == 'incompleteness':
        report = experiments.cmd_incompleteness(config["nmax"], cfg, pv, mesh=config["mesh"],
                                                angles=config["angles"])
    elif args.command == 'example3':
        report = experiments.cmd_example3(cfg, pv, angles=config["angles"])
    elif args.command == 'convexity':
        report = experiments.cmd_convexity(config["trials"], config["seed"], cfg, pv)
    elif args.command == 'hilbert-demo':
        report = experiments.cmd_hilbert_demo(pv)
    elif args.command == 'cantor-plot':
        report = experiments.cmd_cantor_plot(args.n, out)
    else:
        report = experiments.cmd_verdict(args.boundary, cfg, pv,
                                         radii=[r for r in config["radii"] if r <= cfg.r_max],
                                         angles=config["angles"])

    report.parameters = {"config": config, "run": report.parameters}
    fmt = config["format"] if config["format"] in ("csv", "json") else "json"
    report.write(out, fmt)
    print_summary(report)
    return 0 if report.passed else 1


def main(argv: Optional[List[str]] = None) -> int:
    """Main function to parse arguments and run one subcommand"""
    args = build_parser().parse_args(argv)
    setup_logging(APP_NAME, level=logging.WARNING if args.quiet else logging.INFO)
    just_fix_windows_console()

    config = effective_config(args, load_config())
    try:
        status = run(args, config)
    except HQDiskError as e:
        logger.error(f"{args.command} failed: {str(e)}")
        return 2
    except OSError as e:
        logger.error(f"Could not write output to {config.get('out')}: {str(e)}")
        return 2
    logger.info(f"{args.command} finished with status {status}")
    return status


if __name__ == "__main__":
    sys.exit(main())
