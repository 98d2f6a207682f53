"""Head-on collision of two equal solitary waves against a free-running one."""

import argparse

from hyperdisp.experiments import collision

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--nx", type=int, default=4000)
p.add_argument("--t-end", type=float, default=200.0)
args = p.parse_args()

r = collision(args.nx, args.t_end)
print(f"amplitudes after collision {r.amp_right:.4f} / {r.amp_left:.4f}, free wave {r.amp_single:.4f}")
print(f"phase lag behind the free wave {r.lag_right:.3f} / {r.lag_left:.3f} m (width {r.width:.1f} m)")
print(f"runtime {r.runtime_s:.1f} s")
