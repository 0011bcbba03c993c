"""The four norming-constant families and the calibration root b_n.

A maximum of n GED(v) draws concentrates near the "characteristic largest
value" b_n, the root of a transcendental calibration equation.  Each
affine family (scale, shift) turns the powered order statistic into
something with a Gumbel-type limit; the choice of family decides how fast
that limit is reached.

Run:  python demos/02_norming_families.py
"""

import math

from gedpower import (
    gumbel_constants,
    hall_constants,
    make_params,
    optimal_constants,
    power_constants,
    solve_bn,
    survival,
)


def main():
    print("=== the calibration root and its residual ===")
    for v in (0.5, 1.0, 2.0, 4.0):
        params = make_params(v)
        for n in (10**2, 10**6, 10**12):
            sol = solve_bn(params, n)
            ratio = sol.b_n**v / (2.0 * params.lam**v * math.log(n))
            print(f"  v={v:>4} n=1e{round(math.log10(n)):<3}: "
                  f"b_n={sol.b_n:12.6f}  residual={sol.residual:+.2e}  "
                  f"b^v/(2 lam^v log n)={ratio:.4f}")
    print("  (the last column drifts toward 1: the root grows like a "
          "power of log n)\n")

    print("=== n * survival(b_n): the tail mass the root calibrates ===")
    params = make_params(2.0)
    for n in (10**3, 10**6, 10**9, 10**12):
        b = solve_bn(params, n).b_n
        print(f"  n=1e{round(math.log10(n)):<3}: n*S(b_n) = "
              f"{n * survival(params, b):.6f}")
    print("  (bounded and settling toward a constant, as it should)\n")

    print("=== four families at v=2, p=3, n=1e6 ===")
    params = make_params(2.0)
    n = 10**6
    fams = [
        ("gumbel ", gumbel_constants(params, n)),
        ("power  ", power_constants(params, 3.0, n)),
        ("hall   ", hall_constants(params, 3.0, n)),
        ("optimal", optimal_constants(params, n)),
    ]
    for name, nm in fams:
        print(f"  {name}: scale={nm.scale:14.6f}  shift={nm.shift:14.6f}")
    print("  (gumbel/power norm the plain and powered maximum; hall and "
          "optimal are built on b_n and give the sharper rates)\n")

    print("=== at v=1 the hall family collapses onto the power family ===")
    params = make_params(1.0)
    for p in (1.0, 2.0, 3.0):
        h = hall_constants(params, p, 10**4)
        w = power_constants(params, p, 10**4)
        print(f"  p={p}: |hall/power - 1| = "
              f"scale {abs(h.scale / w.scale - 1):.2e}, "
              f"shift {abs(h.shift / w.shift - 1):.2e}")
    print()

    print("=== the corrected pair at v=2 is the classical one ===")
    params = make_params(2.0)
    n = 10**8
    b = solve_bn(params, n).b_n
    nm = optimal_constants(params, n)
    print(f"  scale: {nm.scale:.12f}  vs  2 - 2/b^2      = {2 - 2 / b**2:.12f}")
    print(f"  shift: {nm.shift:.12f}  vs  b^2 - 2/b^2 = {b**2 - 2 / b**2:.12f}")


if __name__ == "__main__":
    main()
