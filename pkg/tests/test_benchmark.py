import importlib.util
import io
from pathlib import Path

BENCH = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"


def test_benchmark_runs_and_backends_agree():
    spec = importlib.util.spec_from_file_location("bench_kernels", BENCH)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    out = io.StringIO()
    rows = mod.run([3, 5], repeat=1, out=out)
    assert [r["n"] for r in rows] == [3, 5]
    assert all(r["python_nnls_us"] > 0 for r in rows)
    assert "py nnls us" in out.getvalue()
