"""Time the compiled RK4 moment integrator against its pure-Python twin.

    python3 benchmarks/bench_kernels.py [--dt 1e-3] [--repeat 3]

The workload is the oracle grid: g = 1, six gain/loss rates, four end times
and four input families (96 trajectories). Results of both backends are
compared element-wise before timings are reported.
"""

import argparse
import time

import numpy as np

from ptcavity import _kernels_py, oracle
from ptcavity.states import initial_moments
from ptcavity.verify import FAMILIES, GAMMA_GRID, TIME_GRID

try:
    from ptcavity import _kernels
except ImportError:
    _kernels = None


def workload():
    y0s = [oracle.pack(initial_moments(s)) for s in FAMILIES]
    return [(gm, y0, t) for gm in GAMMA_GRID for y0 in y0s for t in TIME_GRID]


def run(impl, jobs, dt):
    return [np.asarray(impl.rk4_moments(1.0, gm, y0, t, dt)) for gm, y0, t in jobs]


def best_of(impl, jobs, dt, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = run(impl, jobs, dt)
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dt", type=float, default=1e-3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    jobs = workload()
    steps = sum(int(np.ceil(t / args.dt)) for _, _, t in jobs)
    print(f"{len(jobs)} trajectories, {steps} RK4 steps, dt={args.dt:g}")

    py_time, py_out = best_of(_kernels_py, jobs, args.dt, args.repeat)
    print(f"python  {py_time:8.3f} s   {py_time / steps * 1e6:8.3f} us/step")
    if _kernels is None:
        print("cython  (extension not built)")
        return
    cy_time, cy_out = best_of(_kernels, jobs, args.dt, args.repeat)
    dev = max(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b))) for a, b in zip(cy_out, py_out))
    print(f"cython  {cy_time:8.3f} s   {cy_time / steps * 1e6:8.3f} us/step")
    print(f"speedup {py_time / cy_time:8.1f} x   max rel deviation {dev:.1e}")


if __name__ == "__main__":
    main()
