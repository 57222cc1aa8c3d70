#!/usr/bin/env python3
"""Reliability/secrecy exponent surfaces over rate grids for a channel.

Produces the surface CSV plus the monotonicity summary sidecar via
`skagree exponents`.  Defaults sweep R_phi and R_M at a small fixed key
rate with a Bernoulli(beta) input sweep.
"""

import argparse

from skagree.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--channel", help="channel JSON file")
    src.add_argument("--family", default="binary-onoff",
                     choices=["binary-onoff"])
    ap.add_argument("--rsk", default="0.01")
    ap.add_argument("--rphi", default="0.2:1.2:6")
    ap.add_argument("--rm", default="0:0.2:3")
    ap.add_argument("--beta-grid", default="0.1:0.9:9")
    ap.add_argument("--out", default="exponent_surface.csv")
    args = ap.parse_args()

    source = ["--channel", args.channel] if args.channel \
        else ["--family", args.family]
    rc = cli_main(["exponents"] + source + [
        "--rsk", args.rsk, "--rphi", args.rphi, "--rm", args.rm,
        "--beta-grid", args.beta_grid, "--out", args.out])
    print("wrote %s and %s.summary.json" % (args.out, args.out))
    return rc


if __name__ == "__main__":
    raise SystemExit(main())
