"""Command-line front end: plot-ready CSV/JSON sweeps and simulations.

Subcommands: capacity, upper-bound, sweep-gaussian, sweep-binary, exponents,
simulate, verify-bounds.  Every command is deterministic given its config
and seed.  The ``SKAGREE_THREADS`` environment variable sets the worker
count for ensemble simulations (results are identical regardless).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import binning_sim, capacity as cap, exponents as expo
from .channels import (
    BinaryOnOffParams,
    ChannelError,
    GaussianInterferenceParams,
    InputDistribution,
    build_binary_onoff,
    is_degraded,
    load_channel,
)


def _fmt(x) -> str:
    return "%.17g" % float(x)


def _parse_grid(spec: str):
    """Grid syntax: 'a:b:k' (k evenly spaced points) or a comma list."""
    if ":" in spec:
        a, b, k = spec.split(":")
        return list(np.linspace(float(a), float(b), int(k)))
    return [float(v) for v in spec.split(",")]


def _parse_n_range(spec: str):
    if ":" in spec:
        a, b = spec.split(":")
        return list(range(int(a), int(b) + 1))
    return [int(v) for v in spec.split(",")]


def _add_channel_flags(p: argparse.ArgumentParser):
    p.add_argument("--channel", help="channel JSON file")
    p.add_argument("--family", choices=["gaussian", "binary-onoff"],
                   help="named parametric family")
    p.add_argument("--renormalize", action="store_true",
                   help="accept and renormalize off-mass transition rows")
    # binary on-off parameters
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--q-tilde", type=float, default=0.8)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--delta3", type=float, default=0.2)
    # gaussian parameters
    p.add_argument("--power", type=float, default=1.0)
    p.add_argument("--nu1", type=float, default=1.0)
    p.add_argument("--nu2", type=float, default=1.0)
    p.add_argument("--nu3", type=float, default=2.0)
    p.add_argument("--sigma1", type=float, default=1.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--sigma3", type=float, default=1.0)
    p.add_argument("--rho12", type=float, default=0.8)
    p.add_argument("--rho13", type=float, default=0.3)


def _onoff_params(args) -> BinaryOnOffParams:
    return BinaryOnOffParams(q=args.q, q_tilde=args.q_tilde,
                             delta=args.delta, delta3=args.delta3)


def _gaussian_params(args, power=None) -> GaussianInterferenceParams:
    return GaussianInterferenceParams(
        power=args.power if power is None else power,
        nu1=args.nu1, nu2=args.nu2, nu3=args.nu3,
        sigma1=args.sigma1, sigma2=args.sigma2, sigma3=args.sigma3,
        rho12=args.rho12, rho13=args.rho13)


def _resolve_discrete_channel(args):
    if args.channel and args.family:
        raise ChannelError("give either --channel or --family, not both")
    if args.channel:
        return load_channel(args.channel, renormalize=args.renormalize)
    if args.family == "binary-onoff":
        return build_binary_onoff(_onoff_params(args))
    if args.family == "gaussian":
        raise ChannelError("the gaussian family has no discrete transition; "
                           "this command needs --channel or --family binary-onoff")
    raise ChannelError("a channel source is required (--channel or --family)")


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v)
                              for v in row))
    return "\n".join(lines) + "\n"


def cmd_capacity(args) -> int:
    gamma = args.gamma if args.gamma is not None else math.inf
    if args.family == "binary-onoff":
        params = _onoff_params(args)
        beta_star, c_sk = cap.binary_onoff_optimize(params)
        _, r_ch, r_src = cap.binary_onoff_rate(params, beta_star)
        doc = {
            "capacity_bits": c_sk, "r_ch": r_ch, "r_src": r_src,
            "input_pmf": [1.0 - beta_star, beta_star],
            "expected_cost": 0.0, "beta_star": beta_star,
        }
        if abs(c_sk - (r_ch + r_src)) > 1e-9:
            print("self-check failed: r_ch + r_src != capacity", file=sys.stderr)
            return 1
    elif args.family == "gaussian":
        result = cap.gaussian_capacity(_gaussian_params(args))
        doc = result.to_json()
    else:
        channel = _resolve_discrete_channel(args)
        if is_degraded(channel):
            result = cap.degraded_capacity(channel, gamma)
            doc = result.to_json()
            doc["upper_bound_only"] = False
        else:
            pmf, value = cap.upper_bound_with_input(channel, gamma)
            doc = {"capacity_bits": value, "input_pmf": pmf.probs.tolist(),
                   "upper_bound_only": True}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_upper_bound(args) -> int:
    gamma = args.gamma if args.gamma is not None else math.inf
    channel = _resolve_discrete_channel(args)
    pmf, value = cap.upper_bound_with_input(channel, gamma)
    doc = {"upper_bound_bits": value, "input_pmf": pmf.probs.tolist()}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_sweep_gaussian(args) -> int:
    grid = np.linspace(args.p_db_min, args.p_db_max, args.p_db_steps)
    rows = []
    for p_db in grid:
        power = 10.0 ** (p_db / 10.0)
        res = cap.gaussian_capacity(_gaussian_params(args, power=power))
        rows.append((float(p_db), res.capacity, res.r_ch, res.r_src))
    _emit(_csv(["P_dB", "C_SK", "R_ch", "R_src"], rows), args.out)
    return 0


def cmd_sweep_binary(args) -> int:
    params = _onoff_params(args)
    betas = np.linspace(0.0, 1.0, args.beta_steps)
    values = [cap.binary_onoff_rate(params, float(b)) for b in betas]
    argmax = int(np.argmax([v[0] for v in values]))
    rows = [(float(b), v[0], v[1], v[2], int(i == argmax))
            for i, (b, v) in enumerate(zip(betas, values))]
    _emit(_csv(["beta", "R_SK", "R_ch", "R_src", "is_argmax"], rows), args.out)
    return 0


def _monotone_summary(rows):
    """Directional checks over the sweep rows (dicts with the CSV fields)."""
    def series(fixed_keys, x_key, y_key):
        groups = {}
        for r in rows:
            key = tuple(r[k] for k in fixed_keys)
            groups.setdefault(key, []).append((r[x_key], r[y_key]))
        return [sorted(g) for g in groups.values() if len(g) > 1]

    def nondecreasing(pairs):
        return all(b[1] >= a[1] - 1e-9 for a, b in zip(pairs, pairs[1:]))

    def check(fixed, x, y, increasing):
        ok = True
        for pairs in series(fixed, x, y):
            mono = nondecreasing(pairs) if increasing else \
                nondecreasing([(p[0], -p[1]) for p in pairs])
            ok = ok and mono
        return ok

    return {
        "E_o_nondecreasing_in_R_phi": check(("R_SK", "R_M", "beta_or_input_id"),
                                            "R_phi", "E_o", True),
        "E_o_nonincreasing_in_R_M": check(("R_SK", "R_phi", "beta_or_input_id"),
                                          "R_M", "E_o", False),
        "F_o_nonincreasing_in_R_phi": check(("R_SK", "R_M", "beta_or_input_id"),
                                            "R_phi", "F_o", False),
        "F_o_nonincreasing_in_R_SK": check(("R_phi", "R_M", "beta_or_input_id"),
                                           "R_SK", "F_o", False),
        "F_o_nondecreasing_in_R_M": check(("R_SK", "R_phi", "beta_or_input_id"),
                                          "R_M", "F_o", True),
    }


def cmd_exponents(args) -> int:
    channel = _resolve_discrete_channel(args)
    rsk_grid = _parse_grid(args.rsk)
    rphi_grid = _parse_grid(args.rphi)
    rm_grid = _parse_grid(args.rm)
    beta_grid = _parse_grid(args.beta_grid) if args.beta_grid else [0.5]
    rows = []
    for rsk in rsk_grid:
        for rphi in rphi_grid:
            for rm in rm_grid:
                rates = expo.RatePoint(r_sk=rsk, r_phi=rphi, r_m=rm)
                for beta in beta_grid:
                    inp = InputDistribution.bernoulli(beta)
                    e = expo.reliability_exponent(channel, inp, rates)
                    f = expo.secrecy_exponent(channel, inp, rates)
                    rows.append({"R_SK": rsk, "R_phi": rphi, "R_M": rm,
                                 "beta_or_input_id": beta,
                                 "E_o": e.value, "rho_star": e.argmax,
                                 "F_o_raw": f.raw_value, "F_o": f.value,
                                 "alpha_star": f.argmax})
    header = ["R_SK", "R_phi", "R_M", "beta_or_input_id", "E_o", "rho_star",
              "F_o_raw", "F_o", "alpha_star"]
    _emit(_csv(header, [tuple(r[h] for h in header) for r in rows]), args.out)
    if args.out:
        with open(args.out + ".summary.json", "w") as fh:
            json.dump(_monotone_summary(rows), fh, indent=2)
    return 0


def cmd_simulate(args) -> int:
    if args.seed is None:
        print("simulate is stochastic: --seed is required", file=sys.stderr)
        return 1
    channel = _resolve_discrete_channel(args)
    inp = InputDistribution.bernoulli(args.input_beta) \
        if channel.alphabet_sizes[0] == 2 else \
        InputDistribution.uniform(channel.alphabet_sizes[0])
    rates = expo.RatePoint(r_sk=args.rsk_rate, r_phi=args.rphi_rate, r_m=args.rm_rate)
    rows = []
    checks = {}
    all_ok = True
    seq = np.random.SeedSequence(args.seed)
    children = seq.spawn(len(_parse_n_range(args.n)))
    for n, child in zip(_parse_n_range(args.n), children):
        avg_e, avg_l, check = binning_sim.ensemble_average(
            channel, inp, n, rates, args.codebooks, child)
        for idx, (err, leak) in enumerate(check["per_codebook"]):
            rows.append((n, idx, err, leak))
        ok = bool(check["error_ok"] and check["leakage_ok"])
        all_ok = all_ok and ok
        checks[str(n)] = {
            "avg_error": avg_e, "avg_leakage_bits": avg_l,
            "error_bound": check["error_bound"], "rho_star": check["rho_star"],
            "error_slack": check["error_slack"],
            "leakage_bound": check["leakage_bound"],
            "alpha_star": check["alpha_star"],
            "leakage_slack": check["leakage_slack"],
            "bound_check": "pass" if ok else "fail",
        }
    _emit(_csv(["n", "codebook_index", "exact_error", "exact_leakage_bits"], rows),
          args.out)
    sidecar = json.dumps(checks, indent=2) + "\n"
    if args.out:
        with open(args.out + ".bounds.json", "w") as fh:
            fh.write(sidecar)
    else:
        sys.stderr.write(sidecar)
    return 0 if all_ok else 1


def cmd_verify_bounds(args) -> int:
    """Check the algebraic ties between the finite-n ensemble bounds and the
    exponent objectives, using effective (size-rounded) rates so the identity
    is exact."""
    channel = _resolve_discrete_channel(args)
    inp = InputDistribution.bernoulli(args.input_beta) \
        if channel.alphabet_sizes[0] == 2 else \
        InputDistribution.uniform(channel.alphabet_sizes[0])
    rates = expo.RatePoint(r_sk=args.rsk_rate, r_phi=args.rphi_rate, r_m=args.rm_rate)
    worst_e, worst_f = 0.0, 0.0
    for n in _parse_n_range(args.n):
        eff = expo.RatePoint(
            r_sk=math.ceil(n * rates.r_sk - 1e-9) / n,
            r_phi=math.ceil(n * rates.r_phi - 1e-9) / n,
            r_m=math.ceil(n * rates.r_m - 1e-9) / n)
        for rho in np.linspace(0.0, 1.0, 21):
            lhs = binning_sim.ensemble_error_bound(channel, inp, n, float(rho), rates)
            rhs = 2.0 ** (-n * expo.reliability_objective(channel, inp, float(rho), eff))
            worst_e = max(worst_e, abs(lhs - rhs) / max(rhs, 1e-300))
        for alpha in np.linspace(0.05, 1.0, 20):
            lhs = binning_sim.ensemble_leakage_bound(channel, inp, n, float(alpha), rates)
            c = math.log2(math.e) / float(alpha)
            rhs = c * 2.0 ** (-n * expo.secrecy_objective(channel, inp, float(alpha), eff))
            worst_f = max(worst_f, abs(lhs - rhs) / max(rhs, 1e-300))
    ok = worst_e <= 1e-10 and worst_f <= 1e-10
    doc = {"max_rel_error_identity_gap": worst_e,
           "max_rel_leakage_identity_gap": worst_f,
           "verdict": "pass" if ok else "fail"}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skagree",
        description="Secret-key capacities, exponents, and binning simulations "
                    "for sender-excited broadcast channels")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, rates=False, sim=False):
        _add_channel_flags(p)
        p.add_argument("--gamma", type=float, default=None,
                       help="input cost budget (default: unconstrained)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"], default=None)
        if rates:
            p.add_argument("--rsk-rate", type=float, required=True)
            p.add_argument("--rphi-rate", type=float, required=True)
            p.add_argument("--rm-rate", type=float, required=True)
            p.add_argument("--input-beta", type=float, default=0.5)
            p.add_argument("--n", required=True, help="blocklengths, e.g. 1:3 or 1,2,3")
        if sim:
            p.add_argument("--codebooks", type=int, default=500)

    p = sub.add_parser("capacity", help="capacity (or upper bound) as JSON")
    common(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("upper-bound", help="conditional-information upper bound")
    common(p)
    p.set_defaults(func=cmd_upper_bound)

    p = sub.add_parser("sweep-gaussian", help="capacity sweep over power in dB")
    common(p)
    p.add_argument("--p-db-min", type=float, default=-10.0)
    p.add_argument("--p-db-max", type=float, default=20.0)
    p.add_argument("--p-db-steps", type=int, default=61)
    p.set_defaults(func=cmd_sweep_gaussian)

    p = sub.add_parser("sweep-binary", help="on-off rate curve over beta")
    common(p)
    p.add_argument("--beta-steps", type=int, default=1001)
    p.set_defaults(func=cmd_sweep_binary)

    p = sub.add_parser("exponents", help="exponent surface CSV over rate grids")
    common(p)
    p.add_argument("--rsk", required=True, help="R_SK grid, e.g. 0.01 or 0:0.2:5")
    p.add_argument("--rphi", required=True)
    p.add_argument("--rm", required=True)
    p.add_argument("--beta-grid", default=None,
                   help="Bernoulli input sweep (default: 0.5)")
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("simulate", help="ensemble simulation with bound checks")
    common(p, rates=True, sim=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-bounds", help="bound/objective identity checks")
    common(p, rates=True)
    p.set_defaults(func=cmd_verify_bounds)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ChannelError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
