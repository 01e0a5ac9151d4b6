"""The numba kernels and their numpy fallbacks must agree bit for bit."""
import os
import subprocess
import sys

import numpy as np
import pytest

from fqk import _kernels
from fqk.cyclotomic import reduction_matrix
from fqk.gradings import MadGroupDescriptor, _closure_inputs, build_grading, verify_grading_closure
from fqk.pauli import gram_is_identity, q_matrix, schwinger_basis, wh_center, wh_group_order

def random_stack(rng, K, n, level, density=0.8):
    cols = np.stack([rng.permutation(n) for _ in range(K)])
    cols = np.where(rng.random((K, n)) < density, cols, -1).astype(np.int64)
    exps = np.where(cols >= 0, rng.integers(0, level, (K, n)), 0).astype(np.int64)
    return cols, exps


def all_impls(k):
    impls = {"python": k.py_func, "fallback": k.fallback}
    if _kernels.NUMBA_AVAILABLE:
        impls["numba"] = k.jit
    return impls


def assert_same(results):
    names = list(results)
    ref = results[names[0]]
    for name in names[1:]:
        got = results[name]
        if isinstance(ref, tuple):
            for a, b in zip(ref, got):
                assert np.array_equal(np.asarray(a), np.asarray(b)), name
        else:
            assert np.array_equal(np.asarray(ref), np.asarray(got)), name


def test_registry():
    assert set(_kernels.kernels()) == {
        "batch_product", "trace_histograms", "wh_all", "commutes_with", "closure_table", "gram_defects",
    }


@pytest.mark.parametrize("seed", range(5))
def test_batch_product(seed):
    rng = np.random.default_rng(seed)
    ca, ea = random_stack(rng, 40, 7, 12)
    cb, eb = random_stack(rng, 40, 7, 12)
    assert_same({k: f(ca, ea, cb, eb, 12) for k, f in all_impls(_kernels.batch_product).items()})


@pytest.mark.parametrize("seed", range(3))
def test_trace_histograms(seed):
    rng = np.random.default_rng(seed)
    ca, ea = random_stack(rng, 9, 5, 10, density=1.0)
    cb, eb = random_stack(rng, 6, 5, 10, density=0.6)
    assert_same({k: f(ca, ea, cb, eb, 10) for k, f in all_impls(_kernels.trace_histograms).items()})


@pytest.mark.parametrize("N", [1, 2, 5, 6])
def test_wh_all(N):
    assert_same({k: f(N) for k, f in all_impls(_kernels.wh_all).items()})


def test_commutes_with():
    cols, exps = _kernels.wh_all(4)
    q = q_matrix(4)
    assert_same({k: f(cols, exps, q.cols, q.exps, 4) for k, f in all_impls(_kernels.commutes_with).items()})


def test_gram_defects():
    rng = np.random.default_rng(11)
    cols, exps = random_stack(rng, 30, 6, 6, density=1.0)
    cols[5], exps[5] = cols[3], exps[3]
    expect = np.full(30, 6, dtype=np.int64)
    red = reduction_matrix(6)
    results = {k: f(cols, exps, 6, red, expect) for k, f in all_impls(_kernels.gram_defects).items()}
    assert_same(results)
    assert results["fallback"][0] > 0


@pytest.mark.parametrize("d", [MadGroupDescriptor((2, 2), 1), MadGroupDescriptor((3,), 2), MadGroupDescriptor((), 4)], ids=str)
def test_closure_table(d):
    args = _closure_inputs(build_grading(d, certify=False))[:9]
    assert_same({k: f(*args) for k, f in all_impls(_kernels.closure_table).items()})


def test_end_to_end_agreement(each_backend):
    assert wh_group_order(6) == 216
    assert len(wh_center(6)) == 6
    assert gram_is_identity(list(schwinger_basis(6).values()))
    g = build_grading(MadGroupDescriptor((2,), 3))
    assert all(c.passed for c in g.checks)
    assert verify_grading_closure(g).zero_products > 0


def test_set_backend_validates():
    with pytest.raises(ValueError):
        _kernels.set_backend("cuda")


@pytest.mark.parametrize("flag, expect", [("1", "numpy"), ("true", "numpy"), ("", "numba")])
def test_env_flag(flag, expect):
    if expect == "numba" and not _kernels.NUMBA_AVAILABLE:
        expect = "numpy"
    env = dict(os.environ, FQK_DISABLE_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from fqk import _kernels; print(_kernels.backend())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == expect


def test_benchmark_smoke():
    import importlib.util
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    if not _kernels.NUMBA_AVAILABLE:
        pytest.skip("numba not installed")
    before = _kernels.backend()
    try:
        rows = bench.run(repeat=1, quick=True)
    finally:
        _kernels.set_backend(before)
    assert len(rows) == 6 and all(t > 0 for _, *ts in rows for t in ts)
