"""Compare the compiled and pure-Python polynomial kernels.

Micro benchmarks call each backend module directly on the same inputs; the
end-to-end rows rerun a composition check in a subprocess with
RESFORGE_BACKEND set, so the whole package uses one backend.

    python3 benchmarks/bench_kernel.py [--repeat 5] [--no-e2e]
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from resforge import kernel
from resforge.dnn1 import build_hb_dnn1
from resforge.exactness import random_point

E2E = {
    "compose hb dnn1(6)": "from resforge.dnn1 import build_hb_dnn1; build_hb_dnn1(6)",
    "compose hb d4m(4)": "from resforge.d4m import build_hb_d4m; build_hb_d4m(4)",
}


def inputs():
    c = build_hb_dnn1(6, check=False)
    # two mid-sized entries, so one product has about ten thousand terms
    entries = sorted((p for d in c.differentials for r in d.grid for p in r if 100 <= len(p) <= 400),
                     key=len, reverse=True)
    a, b = entries[0]._t, entries[-1]._t
    n = len(c.reg)
    pt = random_point(c.reg, random.Random(0))
    powers = [[1] + [pt[i] ** k for k in range(1, 4)] for i in range(n)]
    return a, b, n, powers


def micro(repeat: int):
    a, b, n, powers = inputs()
    prod = kernel.backends()["python"].mul(a, b)
    cases = {
        f"mul {len(a)}x{len(b)} terms": lambda k: k.mul(a, b),
        "add": lambda k: k.add(prod, prod, -1),
        "addmul": lambda k: k.addmul(dict(prod), a, b, -1),
        "normalize": lambda k: k.normalize(prod),
        f"evaluate {len(prod)} terms": lambda k: k.evaluate(prod, powers, n),
    }
    rows = []
    for name, fn in cases.items():
        times = {}
        for bname, mod in kernel.backends().items():
            number = 5
            times[bname] = min(timeit.repeat(lambda: fn(mod), number=number, repeat=repeat)) / number
        rows.append((name, times))
    return rows


def e2e(repeat: int):
    rows = []
    for name, stmt in E2E.items():
        times = {}
        for bname in kernel.backends():
            env = dict(os.environ, RESFORGE_BACKEND=bname)
            code = f"import timeit; print(min(timeit.repeat({stmt!r}, number=1, repeat={repeat})))"
            out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
            times[bname] = float(out.stdout.strip())
        rows.append((name, times))
    return rows


def show(rows):
    names = list(kernel.backends())
    print(f"{'case':32}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for case, t in rows:
        line = f"{case:32}" + "".join(f"{t[n] * 1e3:10.2f}ms" for n in names)
        if "cython" in t:
            line += f"{t['python'] / t['cython']:9.2f}x"
        print(line)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-e2e", action="store_true", help="skip the subprocess runs")
    args = ap.parse_args()
    if "cython" not in kernel.backends():
        print("compiled kernel not built; only the python backend is timed")
    rows = micro(args.repeat)
    if not args.no_e2e:
        rows += e2e(max(1, args.repeat // 2))
    show(rows)


if __name__ == "__main__":
    main()
