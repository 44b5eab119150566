"""Classical and rotated Padé approximants of (1 + z)^gamma.

Prints the coefficients of the [2/2] approximant of the square root, then
the approximation error on the negative real axis for increasing order,
classical and rotated by 45 degrees.  Rotation trades a little accuracy on
the propagating range for a usable approximation of evanescent modes
(z < -1).  The classical approximant is real there and has its poles on that
half line; the rotated one moves the poles off the axis and converges to
sqrt(1 + z) = i sqrt(-1 - z), which is what makes evanescent modes decay.
"""

from fractions import Fraction

import numpy as np

from pdsweep import error_scan, evaluate, generate_classical, rotate

HALF = Fraction(1, 2)


def main():
    c = generate_classical(HALF, 2)
    print("[2/2] Padé of sqrt(1 + z):  a0 + sum a_m z / (1 + b_m z)")
    print(f"  a0 = {c.a0.real:+.15f}")
    for m, (a, b) in enumerate(zip(c.a, c.b), start=1):
        print(f"  a{m} = {a.real:+.15f}   b{m} = {b.real:+.15f}")

    print("\nmax |P(z) - sqrt(1 + z)| on [-0.9, 0], and the rotated value at z = -4")
    print(f" M   classical   rotated 45deg   P_rot(-4)  (exact {np.sqrt(3):.4f}i)")
    for M in range(1, 9):
        cls = generate_classical(HALF, M)
        rot = rotate(cls, np.pi / 4)
        e_cls = error_scan(cls, HALF, -0.9, 0.0, 200)
        e_rot = error_scan(rot, HALF, -0.9, 0.0, 200)
        print(f"{M:2d}   {e_cls:9.2e}   {e_rot:13.2e}   {evaluate(rot, -4.0):.4f}")


if __name__ == "__main__":
    main()
