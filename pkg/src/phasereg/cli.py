"""Command-line entry point.

Subcommands:
    run <config>            full pipeline for a configuration file
    calibrate <config>      print the calibrated carrier and band centers
    encode-decode           single-integer round trip without a config file
    selftest                fast oracle checks of the numerical core

Exit codes: 0 success, 2 decode ambiguity, 3 configuration error,
4 numerical failure.  The environment variable PHASEREG_OUTDIR, when
set, is the root under which relative output directories are created.
"""

import argparse
import os
import sys

import numpy as np

from . import __version__, angmom, boundstates, experiment, potentials, spectra, units

EXIT_OK = 0
EXIT_AMBIGUOUS = 2
EXIT_CONFIG = 3
EXIT_NUMERICAL = 4


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="phasereg",
        description="Phase-register readout from rotational wave-packet "
                    "ionization (coupled-channel simulator).",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a configured experiment")
    run.add_argument("config", help="key=value configuration file")
    run.add_argument("--outdir", help="output directory (overrides config)")
    run.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE",
        help="override a configuration key (repeatable)",
    )

    cal = sub.add_parser("calibrate", help="report the calibrated carrier")
    cal.add_argument("config", help="key=value configuration file")
    cal.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")

    enc = sub.add_parser(
        "encode-decode", help="encode an integer, simulate, decode it back"
    )
    enc.add_argument("--n", type=int, required=True, help="integer to store")
    enc.add_argument("--bits", type=int, required=True, help="register width")
    enc.add_argument("--outdir", default="encode_decode_out")
    enc.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")

    sub.add_parser("selftest", help="run the fast oracle suite")
    return parser


def _overrides(pairs, outdir=None):
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise experiment.ConfigError(f"--set expects KEY=VALUE, got {pair!r}")
        key, val = pair.split("=", 1)
        out[key.strip()] = val.strip()
    if outdir is not None:
        out["outdir"] = outdir
    return out


def _apply_output_root(config):
    root = os.environ.get("PHASEREG_OUTDIR")
    if root and not os.path.isabs(config.outdir):
        return experiment.replace(config, outdir=os.path.join(root, config.outdir))
    return config


def _cmd_run(args):
    config = experiment.parse_config(args.config, _overrides(args.set, args.outdir))
    config = _apply_output_root(config)
    result = experiment.run_experiment(config, progress=lambda m: print(m, flush=True))
    print(f"carrier: {result['omega_cm']:.3f} cm^-1")
    if "contrast" in result:
        print(f"contrast: {result['contrast']:.4f}")
    for n, dec in sorted(result["decoded"].items()):
        print(f"decode n={n} -> {dec}")
    print(f"wrote {len(result['files'])} files to {config.outdir}")
    return EXIT_OK


def _cmd_calibrate(args):
    config = experiment.parse_config(args.config, _overrides(args.set))
    levels = experiment.solve_levels(config)
    omega = experiment.calibrate_carrier(config, levels=levels)
    omega_cm = units.hartree_to_cm(omega)
    print(f"carrier: {omega_cm:.6f} cm^-1  ({1.0e7 / omega_cm:.4f} nm)")
    levels_e, levels_ion = levels
    n_lo = config.bound_n()[0]
    for v in range(config.n_v):
        eps = boundstates.predict_peak(levels_e[n_lo][v], levels_ion[n_lo][v], omega)
        print(f"band v={v}: {eps:.3f} cm^-1")
    return EXIT_OK


def _cmd_encode_decode(args):
    over = _overrides(args.set, args.outdir)
    over.setdefault("n_v", str(args.bits))
    over.setdefault("registers", str(args.n))
    config = experiment.parse_config(None, over)
    config = _apply_output_root(config)
    result = experiment.run_experiment(config, progress=lambda m: print(m, flush=True))
    decoded = result["decoded"][args.n]
    print(f"encoded {args.n}, decoded {decoded}")
    if decoded != args.n:
        print("round trip FAILED", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _selftest_3j():
    # orthogonality over a modest j range
    worst = 0.0
    for j1 in range(4):
        for j2 in range(4):
            for j3 in range(abs(j1 - j2), j1 + j2 + 1):
                for j3p in range(abs(j1 - j2), j1 + j2 + 1):
                    acc = sum(
                        angmom.wigner3j(j1, j2, j3, m1, m2, -m1 - m2)
                        * angmom.wigner3j(j1, j2, j3p, m1, m2, -m1 - m2)
                        for m1 in range(-j1, j1 + 1)
                        for m2 in range(-j2, j2 + 1)
                        if abs(m1 + m2) <= min(j3, j3p)
                    )
                    # summing every (m1, m2) covers all 2 min(j3,j3')+1
                    # values of m3, each contributing 1/(2 j3 + 1)
                    expect = 1.0 if j3 == j3p else 0.0
                    worst = max(worst, abs(acc - expect))
    return worst, 1e-12, "3-j orthogonality"


def _selftest_isotropic():
    defects = angmom.QuantumDefects(0.25, 0.25)
    ch = angmom.ion_channels([1, 3], 0)
    m = angmom.coupling_matrix([1, 3], ch, 0, defects, dipole_const=1.0)
    worst = 0.0
    for i, n_e in enumerate((1, 3)):
        for k, (n_plus, _ml) in enumerate(ch):
            if n_plus != n_e:
                worst = max(worst, abs(m[i, k]))
    return worst, 1e-12, "isotropic channel closure"


def _selftest_bound():
    curve_e, _ = potentials.load_model_li2()
    levels = boundstates.solve_bound(curve_e, 0, 3)
    p = curve_e.morse_params
    w = np.sqrt(2.0 * p["d_e"] * p["a"] ** 2 / curve_e.mu)
    worst = 0.0
    for lev in levels:
        exact = w * (lev.v + 0.5) - (w * (lev.v + 0.5)) ** 2 / (4.0 * p["d_e"])
        worst = max(worst, abs(lev.energy - exact) / abs(exact))
    return worst, 1e-6, "Morse bound-state energies"


def _selftest_norm():
    from . import propagator, quantumstate

    config = experiment.ExperimentConfig(tau_ps=0.5)
    omega = experiment.resolve_omega(config)
    final = experiment._run_one(config, omega, 0, 0)
    register = quantumstate.encode(0, 1)
    levels_e, _ = experiment.solve_levels(config)
    initial = quantumstate.assemble_initial(
        register, levels_e, config.n_a, config.n_x, 0,
        config.grid(), config.bins(),
    )
    return abs(final.norm() - initial.norm()), 1e-10, "norm conservation"


def _cmd_selftest(_args):
    checks = (_selftest_3j, _selftest_isotropic, _selftest_bound, _selftest_norm)
    failed = False
    for check in checks:
        worst, tol, name = check()
        ok = worst <= tol
        failed |= not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {worst:.3e} (tol {tol:.0e})")
    return EXIT_NUMERICAL if failed else EXIT_OK


def main(argv=None):
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "calibrate": _cmd_calibrate,
        "encode-decode": _cmd_encode_decode,
        "selftest": _cmd_selftest,
    }
    try:
        return handlers[args.command](args)
    except experiment.ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except spectra.DecodeAmbiguity as exc:
        print(f"decode ambiguity: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
