"""Residual convergence over frequency and Padé order on a coarse grid.

The full study (20 pi to 160 pi, M = 3..6, 36 x 12 points per wavelength)
takes a few minutes with ``pdsweep convergence``.  This version uses a
coarser grid, the homogeneous medium and lower frequencies so it finishes in
seconds.  The observed order column is the least-squares slope of log
residual against log omega.  At 18 points per wavelength along x the Heun
phase error, which grows like omega^3 dx^2, dominates, so the residual grows
with frequency instead of falling.
"""

import math

from pdsweep import RunConfig, run_convergence


def main():
    base = RunConfig(omega=10 * math.pi, ppw_x=18, ppw_y=8, medium="homogeneous")
    omegas = [m * math.pi for m in (10, 20, 40)]
    table = run_convergence(base, omegas, [2, 3, 4], out_dir="demo_out/convergence",
                            log=lambda line: print("  " + line))
    print()
    print(table.format())


if __name__ == "__main__":
    main()
