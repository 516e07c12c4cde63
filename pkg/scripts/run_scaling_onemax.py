#!/usr/bin/env python3
"""Runtime/(n ln n) sweep for RLS and the (1+1)-EA on OneMax."""

import argparse

from monolab.harness import run_scaling


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-list", default="512,1024,2048")
    ap.add_argument("--runs", type=int, default=50)
    ap.add_argument("--c", type=float, default=0.9)
    ap.add_argument("--threads", type=int, default=2)
    args = ap.parse_args()
    ns = [int(x) for x in args.n_list.split(",")]

    for name, algo in (("rls", {"variant": "rls"}),
                       ("(1+1)-EA", {"variant": "one_plus_lambda_ea", "lam": 1, "c": args.c})):
        template = {
            "function": {"kind": "onemax", "n": 0},
            "algorithm": algo,
            "budget": 0, "runs": args.runs, "base_seed": 2024, "sample_every": 10**9,
        }
        rows = run_scaling(template, ns, threads=args.threads, budget_factor_nlogn=50)
        print(name)
        for r in rows:
            print(f"  n={r['n']:>5}  mean runtime {r['mean_runtime']:>10.1f}  "
                  f"ratio {r['ratio']:.3f}  terminated {r['terminated_fraction']:.0%}")


if __name__ == "__main__":
    main()
