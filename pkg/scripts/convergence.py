"""Three-mesh refinement study on the solitary wave for both integrators."""

import argparse

from hyperdisp.experiments import convergence_study

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--meshes", type=int, nargs=3, default=[500, 1000, 2000])
p.add_argument("--t-end", type=float, default=5.0)
p.add_argument("--solver", default="hllc", choices=["rusanov", "hllc"])
args = p.parse_args()

for integ in ("imex_ars222", "splitting1"):
    s = convergence_study(integ, args.solver, tuple(args.meshes), args.t_end)
    exact = ", ".join(f"{e:.3e}" for e in s.exact_errors)
    print(f"{integ:12s} self-convergence order {s.self_order:.3f}  "
          f"(|h_N - h_2N| = {s.self_differences[0]:.3e}, {s.self_differences[1]:.3e}); "
          f"L2 vs exact soliton {exact}, orders {', '.join(f'{o:.2f}' for o in s.exact_orders)}")
