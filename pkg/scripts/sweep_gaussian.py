#!/usr/bin/env python3
"""Capacity sweep of the Gaussian interference model over power in dB.

Thin wrapper around `skagree sweep-gaussian`; the CSV has columns
P_dB, C_SK, R_ch, R_src (R_src is power-independent in this model).
"""

import argparse

from skagree.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-db-min", type=float, default=-10.0)
    ap.add_argument("--p-db-max", type=float, default=20.0)
    ap.add_argument("--p-db-steps", type=int, default=61)
    ap.add_argument("--nu3", type=float, default=2.0)
    ap.add_argument("--rho12", type=float, default=0.8)
    ap.add_argument("--rho13", type=float, default=0.3)
    ap.add_argument("--out", default="gaussian_sweep.csv")
    args = ap.parse_args()

    rc = cli_main(["sweep-gaussian",
                   "--p-db-min", str(args.p_db_min),
                   "--p-db-max", str(args.p_db_max),
                   "--p-db-steps", str(args.p_db_steps),
                   "--nu3", str(args.nu3),
                   "--rho12", str(args.rho12), "--rho13", str(args.rho13),
                   "--out", args.out])
    print("wrote %s" % args.out)
    return rc


if __name__ == "__main__":
    raise SystemExit(main())
