"""Time the compiled and NumPy kernels on the same workloads.

    python3 benchmarks/bench_kernels.py [--steps 300] [--repeat 5]
"""
import argparse
import math
import timeit

from ratetree import kernels
from ratetree.bonds import bond_tree, state_prices
from ratetree.calibration import calibrate_zbdt
from ratetree.lattice import RateTree, ZbdtParams
from ratetree.market_data import TermStructure
from ratetree.payoffs import OptionSpec
from ratetree.pricer import price


def synthetic_tree(steps):
    cols = [[0.01 + 0.02 * i / steps * math.exp(0.12 * j) / math.exp(0.06 * i)
             for j in range(i + 1)] for i in range(steps)]
    return RateTree.from_columns("zbdt", cols, ZbdtParams(0.02, 0.01, 0.0025))


def synthetic_curve(steps):
    yields = [0.02 + 0.01 * (1 - math.exp(-m / 10)) for m in range(1, steps + 1)]
    vols = [0.25 * math.exp(-m / 40) + 0.1 for m in range(1, steps + 1)]
    return TermStructure(tuple(yields), tuple(vols))


def workloads(steps):
    tree = synthetic_tree(steps)
    lo_spec = OptionSpec("put", 60.0, steps - 1, steps, "american", "double-in",
                         upper=80.0, lower=20.0)
    curve = synthetic_curve(min(steps, 60))
    params = ZbdtParams(0.02, 0.01, 0.0025)
    return {
        "bond tree": lambda b: bond_tree(tree, steps, backend=b),
        "state prices": lambda b: state_prices(tree, backend=b),
        "american double-in": lambda b: price(tree, lo_spec, backend=b),
        f"calibrate zbdt T={min(steps, 60)}": lambda b: calibrate_zbdt(curve, params, backend=b),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=300)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = sorted(kernels.BACKENDS)
    print(f"steps={args.steps}, best of {args.repeat}, backends: {', '.join(backends)}")
    print(f"{'workload':<26}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, fn in workloads(args.steps).items():
        best = {}
        for b in backends:
            fn(b)
            best[b] = min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat))
        line = f"{name:<26}" + "".join(f"{best[b] * 1e3:>10.2f}ms" for b in backends)
        if len(backends) > 1:
            line += f"{best['python'] / best['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
