#!/usr/bin/env python3
"""Rate curve of the binary on-off model over the input bias beta.

Writes a CSV with the per-beta decomposition plus a JSON file holding the
optimizing beta, mirroring `skagree sweep-binary` / `skagree capacity`.
"""

import argparse
import json

from skagree.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=float, default=0.5)
    ap.add_argument("--q-tilde", type=float, default=0.8)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--delta3", type=float, default=0.2)
    ap.add_argument("--beta-steps", type=int, default=1001)
    ap.add_argument("--out", default="binary_onoff_sweep.csv")
    args = ap.parse_args()

    flags = ["--q", str(args.q), "--q-tilde", str(args.q_tilde),
             "--delta", str(args.delta), "--delta3", str(args.delta3)]
    rc = cli_main(["sweep-binary", "--beta-steps", str(args.beta_steps),
                   "--out", args.out] + flags)
    rc |= cli_main(["capacity", "--family", "binary-onoff",
                    "--out", args.out + ".optimum.json"] + flags)
    with open(args.out + ".optimum.json") as fh:
        doc = json.load(fh)
    print("beta* = %.6f, C_SK = %.6f bits"
          % (doc["beta_star"], doc["capacity_bits"]))
    print("wrote %s and %s.optimum.json" % (args.out, args.out))
    return rc


if __name__ == "__main__":
    raise SystemExit(main())
