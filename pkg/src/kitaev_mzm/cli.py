"""Command-line front end: ``kitaev-mzm <subcommand> [flags]``.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 empty or
inapplicable result.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io
from .canonical import (
    ZERO_MODE_TOL,
    CanonicalizationError,
    NoZeroModeError,
    canonicalize,
    extract_zero_modes,
)
from .chain import ChainParams, NoiseConfig, build_majorana_matrix, sample_noise
from .dot import DotSweepSpec, EmptySweepError, sweep_bias
from .fock import MAX_SITES, compare_with_canonical, oracle_ground, random_draw
from .observables import ground_state_report
from .phase import GridSpec, ScanError, scan_phase, scan_with_noise

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_EMPTY = 0, 2, 3, 4

# keys that never change the content of an output file
_NOT_CONFIG = {"config", "output", "workers", "func"}


class UsageError(ValueError):
    pass


def _chain_flags(p):
    p.add_argument("--sites", type=int, required=True, help="number of sites N")
    p.add_argument("--t", type=float, default=1.0, help="hopping amplitude")
    p.add_argument("--delta", type=float, default=1.0, help="pairing magnitude |Delta|")
    p.add_argument("--theta", type=float, default=0.0, help="pairing phase (rad)")
    p.add_argument("--mu", type=float, default=0.0, help="chemical potential")


def _noise_flags(p):
    p.add_argument("--noise-v0", type=float, default=0.0, help="disorder intensity V0")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draw", type=int, default=0, help="disorder realization index")


def _grid_flags(p):
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--delta-min", type=float, default=0.05)
    p.add_argument("--delta-max", type=float, default=1.2)
    p.add_argument("--delta-count", type=int, default=40)
    p.add_argument("--mu-min", type=float, default=0.0)
    p.add_argument("--mu-max", type=float, default=3.0)
    p.add_argument("--mu-count", type=int, default=120)
    p.add_argument("--energy-tol", type=float, default=ZERO_MODE_TOL)
    p.add_argument("--require-gap", action="store_true",
                   help="also demand eps2 > 10 * energy-tol")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: $KITAEV_MZM_WORKERS or 1)")


def _common(p):
    p.add_argument("--config", help="JSON file with the same keys as the flags")
    p.add_argument("-o", "--output", default="-", help="output path ('-' for stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="kitaev-mzm", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)
    table = {}

    p = subs.add_parser("spectrum", help="quasiparticle energies eps_1..eps_N (CSV)")
    _chain_flags(p)
    _noise_flags(p)
    _common(p)
    p.set_defaults(func=cmd_spectrum)
    table["spectrum"] = p

    p = subs.add_parser("zero-modes", help="zero-mode Majorana components (CSV)")
    _chain_flags(p)
    _noise_flags(p)
    _common(p)
    p.add_argument("--energy-tol", type=float, default=ZERO_MODE_TOL)
    p.set_defaults(func=cmd_zero_modes)
    table["zero-modes"] = p

    p = subs.add_parser("density", help="ground-state report (JSON)")
    _chain_flags(p)
    _noise_flags(p)
    _common(p)
    p.add_argument("--energy-tol", type=float, default=ZERO_MODE_TOL)
    p.add_argument("--oracle", action="store_true",
                   help=f"include the brute-force report (N <= {MAX_SITES})")
    p.set_defaults(func=cmd_density)
    table["density"] = p

    p = subs.add_parser("phase-scan", help="clean (Delta, mu) phase diagram (CSV)")
    _grid_flags(p)
    _common(p)
    p.set_defaults(func=cmd_phase_scan)
    table["phase-scan"] = p

    p = subs.add_parser("noise-scan", help="disordered phase diagram (CSV)")
    _grid_flags(p)
    _common(p)
    p.add_argument("--v0", type=float, required=True, help="disorder intensity")
    p.add_argument("--seeds", type=int, default=20, help="realizations per cell")
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--noise-mode", choices=("cell", "fixed"), default="cell")
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_noise_scan)
    table["noise-scan"] = p

    p = subs.add_parser("dot-sweep", help="quantum-dot bias sweep (CSV)")
    _chain_flags(p)
    _common(p)
    p.add_argument("--v-min", type=float, required=True)
    p.add_argument("--v-max", type=float, required=True)
    p.add_argument("--v-count", type=int, default=101)
    p.add_argument("--coupling-scale", type=float, default=1.0)
    p.add_argument("--no-clamp", action="store_true", help="keep voltages above the gap")
    p.add_argument("--exact", action="store_true", help="add extended-chain columns")
    p.set_defaults(func=cmd_dot_sweep)
    table["dot-sweep"] = p

    p = subs.add_parser("oracle-check", help="random-draw comparison with brute force")
    p.add_argument("--sites", type=int, default=7, help="largest N drawn (>= 2)")
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--noise", action="store_true", help="also draw random site potentials")
    _common(p)
    p.set_defaults(func=cmd_oracle_check)
    table["oracle-check"] = p
    return parser, table


def _run_config(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_CONFIG}


def _chain(args):
    try:
        return ChainParams(args.sites, args.t, args.delta, args.theta, args.mu)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _potentials(args):
    if args.noise_v0 < 0 or args.seed < 0 or args.draw < 0:
        raise UsageError("--noise-v0, --seed and --draw must be nonnegative")
    return sample_noise(NoiseConfig(args.noise_v0, args.seed, args.draw), args.sites)


def _grid(args):
    try:
        return GridSpec(
            (args.delta_min, args.delta_max, args.delta_count),
            (args.mu_min, args.mu_max, args.mu_count),
            args.sites, args.t, args.energy_tol, args.require_gap,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_spectrum(args):
    chain = _chain(args)
    canon = canonicalize(build_majorana_matrix(chain, _potentials(args)))
    rows = [(m + 1, e) for m, e in enumerate(canon.epsilons)]
    return io.render_csv(["index", "value"], rows, _run_config(args))


def cmd_zero_modes(args):
    chain = _chain(args)
    canon = canonicalize(build_majorana_matrix(chain, _potentials(args)))
    modes = extract_zero_modes(canon, args.energy_tol)
    g1, g2 = modes.gamma1_components, modes.gamma2_components
    rows = [(a + 1, g1[a], g2[a], abs(g1[a]), abs(g2[a])) for a in range(g1.size)]
    meta = {"eps1": io.fmt(modes.eps1), "localization": io.fmt(modes.localization)}
    return io.render_csv(
        ["majorana_index", "mode1", "mode2", "mode1_abs", "mode2_abs"], rows, _run_config(args), meta
    )


def cmd_density(args):
    chain = _chain(args)
    pot = _potentials(args)
    canon = canonicalize(build_majorana_matrix(chain, pot))
    payload = ground_state_report(canon, args.energy_tol).to_dict()
    payload["det_w"] = canon.det_w
    payload["epsilons"] = [float(e) for e in canon.epsilons]
    if args.oracle:
        if chain.n_sites > MAX_SITES:
            raise UsageError(f"--oracle needs --sites <= {MAX_SITES}")
        payload["oracle"] = oracle_ground(chain, pot).to_dict()
    return io.render_json(payload, _run_config(args))


def cmd_phase_scan(args):
    points = scan_phase(_grid(args), workers=args.workers)
    rows = [(p.delta, p.mu, p.eps1, p.eps2, p.has_zero_mode) for p in points]
    return io.render_csv(["delta", "mu", "eps1", "eps2", "has_zero_mode"], rows, _run_config(args))


def cmd_noise_scan(args):
    spec = _grid(args)
    if args.v0 < 0 or args.seeds < 1 or args.base_seed < 0:
        raise UsageError("--v0 >= 0, --seeds >= 1 and --base-seed >= 0 required")
    points = scan_with_noise(
        spec, args.v0, args.seeds, args.base_seed,
        mode=args.noise_mode, threshold=args.threshold, workers=args.workers,
    )
    rows = [
        (p.delta, p.mu, p.eps1, p.eps2, p.has_zero_mode, p.survival_fraction, p.n_seeds)
        for p in points
    ]
    cols = ["delta", "mu", "eps1", "eps2", "has_zero_mode", "survival_fraction", "n_seeds"]
    return io.render_csv(cols, rows, _run_config(args))


def cmd_dot_sweep(args):
    chain = _chain(args)
    try:
        spec = DotSweepSpec(
            chain, args.v_min, args.v_max, args.v_count, args.coupling_scale, not args.no_clamp
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    points, excluded = sweep_bias(spec, exact=args.exact, return_excluded=True)
    cols = ["v", "s_re", "s_im", "e_plus", "c1_abs2", "c2_abs2"]
    if args.exact:
        cols += ["exact_eps1", "exact_e_plus"]
    rows = []
    for p in points:
        row = [p.v, p.s.real, p.s.imag, p.e_plus, abs(p.c1) ** 2, abs(p.c2) ** 2]
        if args.exact:
            row += [p.exact_eps1, p.exact_e_plus]
        rows.append(row)
    return io.render_csv(cols, rows, _run_config(args), {"excluded_voltages": len(excluded)})


def cmd_oracle_check(args):
    if not 2 <= args.sites <= MAX_SITES:
        raise UsageError(f"--sites must be in [2, {MAX_SITES}]")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    rng = np.random.default_rng(args.seed)
    worst = {"energy": 0.0, "densities": 0.0, "spectrum": 0.0}
    parity_failures = 0
    for _ in range(args.trials):
        params, pot = random_draw(rng, 2, args.sites, with_noise=args.noise)
        dev = compare_with_canonical(params, pot)
        for k in worst:
            worst[k] = max(worst[k], dev[k])
        parity_failures += not dev["parity_ok"]
    ok = parity_failures == 0 and all(v <= args.tol for v in worst.values())
    lines = [f"trials: {args.trials}"]
    lines += [f"max_{k}_deviation: {v:.3e}" for k, v in worst.items()]
    lines += [f"parity_mismatches: {parity_failures}", f"status: {'PASS' if ok else 'FAIL'}"]
    args._exit = EXIT_OK if ok else EXIT_NUMERICAL
    return "\n".join(lines) + "\n"


def _load_config(path, sub):
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    known = {a.dest for a in sub._actions}
    out = {}
    for key, value in cfg.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest == "command":
            continue
        if dest not in known or dest in ("config", "help"):
            raise UsageError(f"unknown config key {key!r}")
        out[dest] = value
    return out


def _preparse(argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    return known.command, known.config


def main(argv=None):
    parser, table = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        command, config = _preparse(argv)
        if config and command in table:
            sub = table[command]
            cfg = _load_config(config, sub)
            # required flags supplied by the config file
            for action in sub._actions:
                if action.dest in cfg:
                    action.required = False
            sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
        text = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoZeroModeError, EmptySweepError) as exc:
        print(f"no result: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (CanonicalizationError, ScanError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    io.write_text(args.output, text)
    return getattr(args, "_exit", EXIT_OK)


if __name__ == "__main__":
    sys.exit(main())
