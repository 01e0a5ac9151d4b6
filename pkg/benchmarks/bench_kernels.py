"""Compare the numba kernels against the pure-numpy fallback.

Each workload runs once per backend to warm up (JIT compilation for numba),
then is timed with ``timeit``; results from both backends are checked to be
identical before any timing is reported.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--quick]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from fqk import _kernels
from fqk.cyclotomic import reduction_matrix
from fqk.gradings import MadGroupDescriptor, _closure_inputs, build_grading
from fqk.kinematics import regular_system, verify_system
from fqk.monomial import stack
from fqk.pauli import schwinger_basis, weyl_ray_law_defects, wh_center, wh_group_order


def workloads(quick: bool):
    n_wh = 12 if quick else 24
    n_ray = 11 if quick else 23  # the ray law needs odd N
    n_gram = 8 if quick else 16
    grading = MadGroupDescriptor((3, 2), 2) if quick else MadGroupDescriptor((4, 3), 1)
    closure_args = _closure_inputs(build_grading(grading, certify=False))[:9]
    cols, exps, L = stack([s.matrix for s in schwinger_basis(n_gram).values()])
    red = reduction_matrix(L)
    expect = np.full(cols.shape[0], n_gram, dtype=np.int64)
    system = regular_system((4, 4) if quick else (8, 8), verify=False)
    return {
        f"wh_group_order({n_wh})": lambda: wh_group_order(n_wh),
        f"wh_center({n_wh})": lambda: len(wh_center(n_wh)),
        f"weyl_ray_law({n_ray})": lambda: weyl_ray_law_defects(n_ray),
        f"gram_defects(S_{n_gram})": lambda: _kernels.gram_defects(cols, exps, L, red, expect)[0],
        f"closure_table({grading})": lambda: int(_kernels.closure_table(*closure_args)[0].sum()),
        f"verify_system({system.config})": lambda: tuple(c.passed for c in verify_system(system)),
    }


def run(repeat: int, quick: bool) -> list[tuple[str, float, float]]:
    jobs = workloads(quick)
    rows = []
    for name, job in jobs.items():
        timings, results = {}, {}
        for backend in ("numba", "numpy"):
            _kernels.set_backend(backend)
            results[backend] = job()
            timings[backend] = min(timeit.repeat(job, number=1, repeat=repeat))
        if results["numba"] != results["numpy"]:
            raise AssertionError(f"{name}: backends disagree ({results['numba']!r} vs {results['numpy']!r})")
        rows.append((name, timings["numba"], timings["numpy"]))
    return rows


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--quick", action="store_true", help="smaller problem sizes")
    args = parser.parse_args(argv)
    if not _kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    before = _kernels.backend()
    try:
        rows = run(args.repeat, args.quick)
    finally:
        _kernels.set_backend(before)
    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'numba [ms]':>11}  {'numpy [ms]':>11}  {'speedup':>8}")
    for name, t_nb, t_np in rows:
        print(f"{name:<{width}}  {t_nb * 1e3:11.3f}  {t_np * 1e3:11.3f}  {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
