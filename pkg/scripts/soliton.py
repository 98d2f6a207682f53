"""One period of the periodic solitary wave; prints amplitude, errors and conservation."""

import argparse

import numpy as np

from hyperdisp.experiments import soliton_period, soliton_run

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--nx", type=int, default=2000)
p.add_argument("--lam", type=float, default=1200.0)
p.add_argument("--integrator", default="imex_ars222", choices=["imex_ars222", "splitting1"])
p.add_argument("--solver", default="rusanov", choices=["rusanov", "hllc"])
p.add_argument("--cfl", type=float, default=0.9)
p.add_argument("--track", action="store_true", help="record mass, energy and max|eta-h| each step")
p.add_argument("--save", help="write x, h, h_exact to this .npz file")
args = p.parse_args()

T = soliton_period()
r = soliton_run(args.nx, args.lam, args.integrator, args.solver, T, args.cfl, track=args.track)
print(f"T = {T:.5f} s, {r.steps} steps in {r.runtime_s:.2f} s")
print(f"crest amplitude {r.amplitude:.5f} m (exact 0.2), Linf(h) {r.linf:.3e} m, L2(h) {r.l2:.3e}")
if args.track:
    m, e = np.array(r.mass), np.array(r.energy)
    print(f"mass drift {abs(m[-1] - m[0]) / m[0]:.2e}, energy drift {(e[-1] - e[0]) / e[0]:.3e}, "
          f"max|eta - h| {r.max_eta_minus_h:.3e}")
if args.save:
    np.savez(args.save, x=r.x, h=r.h, h_exact=r.h_exact)
