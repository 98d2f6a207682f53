"""Bubbly-liquid smoke run: equilibrium fixed point and small-pulse propagation speed."""

import argparse

from hyperdisp.experiments import ikw_fixed_point, ikw_pulse

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--nx", type=int, default=1000)
p.add_argument("--t-end", type=float, default=0.01)
args = p.parse_args()

print(f"uniform R = R0 state, max relative change after 50 steps: {ikw_fixed_point():.1e}")
r = ikw_pulse(args.nx, args.t_end)
print(f"pulse moved {r.distance:.4f} m in {args.t_end} s: {r.measured_speed:.2f} m/s")
print(f"equilibrium speed {r.equilibrium_speed:.2f} m/s ({r.relative_error:.2%} off), "
      f"frozen speed {r.frozen_speed:.1f} m/s")
