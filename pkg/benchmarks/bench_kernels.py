"""Compare the compiled and pure-Python elimination kernels.

Each backend runs in its own interpreter (the backend is fixed at import),
on a few workloads that spend their time in sparse elimination.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "build V_B, rank-3 Heisenberg, N=4": "build_vb(heisenberg(3), 4)",
    "build V_B, rank-1 Heisenberg, N=9": "build_vb(heisenberg(), 9)",
    "twisted M_B, rank-2, T=2, N=6": (
        "B = heisenberg(2); G = SectorGrading(2, (0,), (1, 1)); ctx = fiber_context(B, G); "
        "build_MB(induce_twisted(B, G, trivial_fiber(ctx), 6, ctx))"
    ),
    "kernels only: 400x400 random sparse echelon": (
        "rng = random.Random(1); "
        "rows = [{rng.randrange(400): Fraction(rng.choice([-2, -1, 1, 2])) for _ in range(3)} "
        "for _ in range(400)]; Echelon(rows)"
    ),
}

CHILD = """
import json, random, sys, time
from fractions import Fraction
import valgebroid
from valgebroid.automorphism import SectorGrading
from valgebroid.fixtures import heisenberg
from valgebroid.linalg import Echelon
from valgebroid.twisted import build_MB, fiber_context, induce_twisted, trivial_fiber
from valgebroid.vertex import build_vb
code, repeat = sys.argv[1], int(sys.argv[2])
times = []
for _ in range(repeat):
    t = time.perf_counter()
    exec(code)
    times.append(time.perf_counter() - t)
print(json.dumps({"backend": valgebroid.BACKEND, "best": min(times)}))
"""


def run(code: str, pure: bool, repeat: int) -> dict:
    env = dict(os.environ, VALGEBROID_PURE="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", CHILD, code, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    print(f"{'workload':46} {'cython':>9} {'python':>9} {'speedup':>8}")
    for name, code in WORKLOADS.items():
        fast = run(code, False, args.repeat)
        slow = run(code, True, args.repeat)
        if fast["backend"] != "cython":
            print(f"{name:46} {'n/a':>9} {slow['best']:9.3f}   (extension not built)")
            continue
        print(f"{name:46} {fast['best']:9.3f} {slow['best']:9.3f} {slow['best'] / fast['best']:7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
