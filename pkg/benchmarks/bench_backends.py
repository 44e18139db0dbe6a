"""Time the nested-quadrature oracle under the numba and pure-numpy backends.

Each backend runs in its own interpreter because ``DECOHIST_BACKEND`` is read
once at import time.

    python3 benchmarks/bench_backends.py [--repeat 3] [--args 0.5 1.72]
"""
import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, math, sys, time
from decohist import BACKEND, erf_product_integral, oracle_factor, oracle_general_functional
from decohist.model import GaussianSpec, OscillatorParams, Partition, Product

args = [float(a) for a in sys.argv[1].split(",")]
repeat = int(sys.argv[2])

def work():
    vals = []
    for kind in ("I", "J", "P0", "P1", "F", "G"):
        for a in args:
            vals.append(oracle_factor(kind, a))
    vals.append(erf_product_integral(0.7, -1.3)[0])
    state = Product(GaussianSpec(0.0, 0.25), GaussianSpec(0.0, 0.5))
    params = OscillatorParams(1.0, 1.0, math.pi / 2)
    vals.append(oracle_general_functional(0, 1, state, params, Partition(1.0)).real)
    return vals

t0 = time.perf_counter()
first = work()
warm = time.perf_counter() - t0
times = []
for _ in range(repeat):
    t0 = time.perf_counter()
    vals = work()
    times.append(time.perf_counter() - t0)
print(json.dumps({"backend": BACKEND, "first": warm, "best": min(times), "values": vals}))
"""


def run(backend, args, repeat):
    env = dict(os.environ, DECOHIST_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKLOAD, ",".join(map(str, args)), str(repeat)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--args", type=float, nargs="+", default=[0.5, 1.72])
    opts = p.parse_args(argv)

    res = {b: run(b, opts.args, opts.repeat) for b in ("numba", "numpy")}
    print(f"{'backend':<8} {'first call [s]':>15} {'best of ' + str(opts.repeat) + ' [s]':>15}")
    for b, r in res.items():
        print(f"{r['backend']:<8} {r['first']:>15.3f} {r['best']:>15.3f}")
    speedup = res["numpy"]["best"] / res["numba"]["best"]
    diff = max(abs(x - y) for x, y in zip(res["numba"]["values"], res["numpy"]["values"]))
    print(f"speedup (numpy / numba, warm): {speedup:.1f}x")
    print(f"max |numba - numpy| over {len(res['numba']['values'])} integrals: {diff:.2e}")


if __name__ == "__main__":
    main()
