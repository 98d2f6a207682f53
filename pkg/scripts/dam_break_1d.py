"""1-D dam break: plateau and lead-wave amplitude against the modulation-theory values."""

import argparse

import numpy as np

from hyperdisp.experiments import dam_break_1d

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--nx", type=int, default=8000)
p.add_argument("--t-end", type=float, default=47.434)
p.add_argument("--integrator", default="imex_ars222", choices=["imex_ars222", "splitting1"])
p.add_argument("--solver", default="hllc", choices=["rusanov", "hllc"])
p.add_argument("--cfl", type=float, default=0.95)
p.add_argument("--save", help="write x, h, u to this .npz file")
args = p.parse_args()

r = dam_break_1d(args.nx, args.t_end, args.integrator, args.solver, args.cfl)
print(f"{r.steps} steps in {r.runtime_s:.1f} s")
print(f"plateau h {r.h_plateau:.5f} (asymptotic {r.h_star:.5f}), u {r.u_plateau:.5f} (asymptotic {r.u_star:.5f})")
print(f"lead amplitude above h_R {r.lead_amp:.5f} (asymptotic {r.a_plus:.5f})")
if args.save:
    np.savez(args.save, x=r.x, h=r.h, u=r.u)
