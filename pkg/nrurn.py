#!/usr/bin/env python
import argparse
import os
import sys

from nrurn import UrnExperiment
import nrurn.logo
import nrurn.io as io
from nrurn.errors import UrnError, ConfigError
from nrurn.regions import region_grid, REGION_FAMILIES


EPILOG = """
NRUrnPy simulates negatively reinforced balanced urn schemes with non-increasing weight functions.
It computes the stochastic approximation diagnostics of an urn (drift, Jacobian, stability, contraction,
scaling regime and limiting covariances) and verifies them by Monte Carlo.
"""


def add_common_arguments(parser):

    parser.add_argument("--no-logo",         dest="logo", default=True, action="store_false", help="Disable showing the NRUrn logo [default: %(default)s]")

    grp_cfg = parser.add_argument_group("Experiment")
    grp_cfg.add_argument("-c", "--config",   dest="config_file", required=True, help="Experiment configuration (JSON)")
    grp_cfg.add_argument("--seed",           dest="seed",        type=int, default=None, help="Override the base seed of the configuration")
    grp_cfg.add_argument("--replicas",       dest="replicas",    type=int, default=None, help="Override the number of replicas of the configuration")
    grp_cfg.add_argument("-t", "--threads",  dest="threads",     type=int, default=None, help="Number of worker processes for the ensemble")

    grp_out = parser.add_argument_group("Output Options")
    grp_out.add_argument("-o", "--out",      dest="out_dir",     default=None, help="Output directory [default: outputs.dir of the configuration or '.']")
    grp_out.add_argument("--emit",           dest="emit",        default=None, choices=['json', 'csv', 'both'], help="Output formats [default: outputs.emit of the configuration or 'both']")


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description="Simulate and analyse negatively reinforced urn schemes", epilog=EPILOG)
    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    p_analyze = subparsers.add_parser("analyze", help="Mean field analysis: b, rho, nu, stability, contraction, regime and Sigma")
    add_common_arguments(p_analyze)

    p_simulate = subparsers.add_parser("simulate", help="Simulate a single trajectory and write its checkpoints")
    add_common_arguments(p_simulate)
    p_simulate.add_argument("--replica",     dest="replica", type=int, default=0, help="Replica index selecting the random stream [default: %(default)s]")

    p_verify = subparsers.add_parser("verify", help="Run the ensemble and verify the analysis (PASS/FAIL per criterion)")
    add_common_arguments(p_verify)
    p_verify.add_argument("-b", "--write-binary-raw", dest="out_binary_raw_file", default=None, help="Write final replica states as binary MessagePack file. [default: %(default)s]")

    p_regions = subparsers.add_parser("regions", help="Tabulate rho over a (theta, spectrum) grid")
    p_regions.add_argument("--no-logo",      dest="logo", default=True, action="store_false", help="Disable showing the NRUrn logo [default: %(default)s]")
    grp_rg = p_regions.add_argument_group("Region grid")
    grp_rg.add_argument("--family",          dest="family", default="linear", choices=REGION_FAMILIES, help="Weight family [default: %(default)s]")
    grp_rg.add_argument("-k",                dest="k", type=int, default=2, help="Number of colours [default: %(default)s]")
    grp_rg.add_argument("--alpha",           dest="alpha", type=float, default=1.0, help="Exponent of the inverse power family [default: %(default)s]")
    grp_rg.add_argument("--theta-range",     dest="theta_range", type=float, nargs=2, default=[1.0, 3.0], metavar=("MIN", "MAX"), help="Range of theta [default: %(default)s]")
    grp_rg.add_argument("--spectrum-range",  dest="spectrum_range", type=float, nargs=2, default=[-1.0, 1.0], metavar=("MIN", "MAX"), help="Range of Re(lambda_s), or of p with --p-axis [default: %(default)s]")
    grp_rg.add_argument("--p-axis",          dest="axis", action="store_const", const="p", default="lambda", help="Use p of [[p,1-p],[1-p,p]] as spectrum axis (k=2)")
    grp_rg.add_argument("--resolution",      dest="resolution", type=int, nargs=2, default=[101, 101], metavar=("N_THETA", "N_SPECTRUM"), help="Grid points per axis [default: %(default)s]")
    grp_rg.add_argument("-o", "--out",       dest="out_dir", default=".", help="Output directory [default: %(default)s]")
    grp_rg.add_argument("--emit",            dest="emit", default="both", choices=['json', 'csv', 'both'], help="Output formats [default: %(default)s]")

    args = parser.parse_args(argv)

    if getattr(args, "replicas", None) is not None and args.replicas < 1:
        parser.error("--replicas must be >= 1")
    if getattr(args, "threads", None) is not None and args.threads < 1:
        parser.error("--threads must be >= 1")
    if getattr(args, "seed", None) is not None and not 0 <= args.seed < 2 ** 64:
        parser.error("--seed must be an unsigned 64 bit integer")

    return parser, args


def load_experiment(opt):

    config = io.config.load_config(opt.config_file)

    overrides = {}
    for name in ("seed", "replicas", "threads"):
        if getattr(opt, name) is not None:
            overrides[name] = getattr(opt, name)
    if overrides:
        config = config.replace(**overrides)

    return UrnExperiment(config, out_dir=opt.out_dir, emit=opt.emit)


def run_regions(opt):

    grid = region_grid(opt.family, opt.k, opt.theta_range, opt.spectrum_range, resolution=opt.resolution,
                       alpha=opt.alpha, axis=opt.axis)
    print(grid)

    if not os.path.isdir(opt.out_dir):
        os.makedirs(opt.out_dir)
    meta = {'version': nrurn.__version__, 'config_hash': None, 'seed': None, 'grid': repr(grid)}
    io.report.write_table(os.path.join(opt.out_dir, "regions"), grid.to_dict(), grid.to_dataframe(), meta,
                          emit=opt.emit)

    return 0


def main(argv=None):

    #Read command line options
    parser, opt = parse_args(argv)

    if opt.logo:
        nrurn.logo.logo()

    try:
        if opt.command == "regions":
            return run_regions(opt)

        experiment = load_experiment(opt)

        if opt.command == "analyze":
            experiment.analyze(verbose=True)
            experiment.write_report()
            return 0

        if opt.command == "simulate":
            experiment.simulate(replica=opt.replica)
            experiment.write_trajectory()
            return 0 if experiment.trajectory_accounting['passed'] else 1

        experiment.analyze()
        experiment.write_report()
        experiment.verify()
        experiment.write_ensemble()
        if opt.out_binary_raw_file:
            experiment.write_binary_raw(opt.out_binary_raw_file)

        exitcode = 0 if experiment.passed else 1
        print("\n{0}".format("PASS" if exitcode == 0 else "FAIL"))
        return exitcode

    except (ConfigError, IOError) as e:
        print("{0}: error: {1}".format(parser.prog, e), file=sys.stderr)
        return 2
    except UrnError as e:
        print("{0}: error: {1}".format(parser.prog, e), file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
