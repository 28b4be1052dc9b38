"""Time the compiled and pure-Python closure kernels on random graphs.

    python3 benchmarks/bench_kernels.py [--sizes 32,128,512] [--repeats 5]

Prints one CSV row per (kernel, size, implementation).
"""

import argparse
import csv
import random
import statistics
import sys
import time

from stackat import kernels


def random_graph(rng, n, degree=2):
    adj = [sorted(rng.sample(range(n), min(degree, n))) for _ in range(n)]
    edges = lambda: [(rng.randrange(n), rng.randrange(3), rng.randrange(n)) for _ in range(n)]  # noqa: E731
    return adj, edges(), edges()


def timed(fn, repeats):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - t0) * 1000.0)
    return statistics.median(samples)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="32,128,512")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    impls = {"python": kernels.get("python")}
    try:
        impls["cython"] = kernels.get("cython")
    except ImportError:
        print("compiled extension not built; timing pure Python only", file=sys.stderr)

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["kernel", "n", "impl", "time_ms"])
    for n in (int(x) for x in args.sizes.split(",")):
        adj, pushes, pops = random_graph(random.Random(args.seed + n), n)
        for name, mod in impls.items():
            t = timed(lambda: mod.transitive_closure(n, adj), args.repeats)
            out.writerow(["transitive_closure", n, name, f"{t:.3f}"])
            t = timed(lambda: mod.pushpop_saturate(n, adj, pushes, pops), args.repeats)
            out.writerow(["pushpop_saturate", n, name, f"{t:.3f}"])


if __name__ == "__main__":
    main()
