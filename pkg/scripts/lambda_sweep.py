"""Distance from the constraint eta = h and soliton shape error as the penalty grows."""

import argparse

from hyperdisp.experiments import lambda_sweep

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--nx", type=int, default=1000)
p.add_argument("--lams", type=float, nargs="+", default=[300.0, 1200.0, 4800.0])
args = p.parse_args()

for lam, r in zip(args.lams, lambda_sweep(tuple(args.lams), args.nx)):
    print(f"lambda {lam:8.1f}: max|eta - h| {r.max_eta_minus_h:.3e}, L2(h) shape error {r.l2:.3e}")
