#!/usr/bin/env python3
"""Step-halving study of the split-operator propagator against the analytic
wavefunctions: the overlap error should fall fourfold per halving.

    python scripts/propagator_convergence.py --C 2 --n 0
"""

import argparse
import math

import numpy as np

from shoberry import (GridState, QuantumState, Representation,
                      grid_halfwidth, propagate_schrodinger, psi)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--C", type=float, default=2.0)
    parser.add_argument("--beta", type=float, default=0.0)
    parser.add_argument("--n", type=int, default=0)
    parser.add_argument("--points", type=int, default=1024)
    parser.add_argument("--levels", type=int, default=6)
    parser.add_argument("--base-steps", type=int, default=128)
    args = parser.parse_args()

    rep = Representation(1.0, 1.0, args.C, args.beta)
    state = QuantumState(rep, args.n)
    half = grid_halfwidth(state) * 1.1
    xs = np.linspace(-half, half, args.points, endpoint=False)
    initial = GridState(-half, half, args.points, psi(state, xs, 0.0), 0.0)
    exact = GridState(-half, half, args.points, psi(state, xs, rep.tau0),
                      rep.tau0)

    print(f"C={args.C:g} beta={args.beta:g} n={args.n}"
          f"  grid={args.points}  one period = {rep.tau0:.6f}")
    print(f"{'steps':>8} {'overlap error':>15} {'ratio':>7} {'norm drift':>12}")
    previous = None
    for level in range(args.levels):
        steps = args.base_steps * 2 ** level
        final = propagate_schrodinger(initial, rep.M, rep.w, rep.tau0, steps)
        error = abs(exact.overlap(final) - 1.0)
        ratio = "" if previous is None else f"{previous / error:7.3f}"
        print(f"{steps:>8} {error:>15.6e} {ratio:>7} "
              f"{abs(final.norm() - 1.0):>12.2e}")
        previous = error
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
