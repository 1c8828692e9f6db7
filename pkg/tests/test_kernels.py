"""Compiled kernels must agree with their pure-Python fallbacks."""

import numpy as np
import pytest

from valsweep._kernels import BACKEND, _pykernels

if BACKEND == "cython":
    from valsweep._kernels import _cykernels as fast
else:
    fast = None

needs_compiled = pytest.mark.skipif(
    fast is None, reason="compiled kernels not available")


@needs_compiled
class TestBackendEquivalence:
    def test_gini_split_scan(self):
        rng = np.random.default_rng(0)
        for trial in range(30):
            n = int(rng.integers(5, 300))
            vals = np.sort(rng.choice([0.0, 0.5, 1.0, 2.5], size=n)
                           if trial % 2 else rng.normal(size=n))
            y = rng.integers(0, 2, size=n).astype(float)
            w = rng.uniform(0.5, 2.0, size=n)
            msl = int(rng.integers(1, 6))
            py = _pykernels.gini_split_scan(vals, y, w, msl)
            cy = fast.gini_split_scan(vals, y, w, msl)
            assert py[2] == cy[2]
            assert py[0] == pytest.approx(cy[0], abs=1e-12)
            assert py[1] == pytest.approx(cy[1], abs=1e-12)

    def test_hist_build(self):
        rng = np.random.default_rng(1)
        codes = rng.integers(0, 64, size=(500, 7), dtype=np.uint8)
        idx = np.sort(rng.choice(500, size=200, replace=False)).astype(np.int64)
        g = rng.normal(size=500)
        h = rng.uniform(0.05, 0.25, size=500)
        py = _pykernels.hist_build(codes, idx, g, h, 64)
        cy = fast.hist_build(codes, idx, g, h, 64)
        for a, b in zip(py, cy):
            assert np.allclose(np.asarray(a), np.asarray(b), atol=1e-12)

    def test_hist_best_split(self):
        rng = np.random.default_rng(2)
        codes = rng.integers(0, 32, size=(400, 5), dtype=np.uint8)
        idx = np.arange(400, dtype=np.int64)
        g = rng.normal(size=400)
        h = rng.uniform(0.1, 0.3, size=400)
        gh, hh, ch = _pykernels.hist_build(codes, idx, g, h, 32)
        args = (np.asarray(gh), np.asarray(hh), np.asarray(ch),
                np.full(5, 32, dtype=np.int64),
                float(g.sum()), float(h.sum()), 400, 20, 1e-3)
        py = _pykernels.hist_best_split(*args)
        cy = fast.hist_best_split(*args)
        assert py[0] == cy[0] and py[1] == cy[1]
        assert py[2] == pytest.approx(cy[2], abs=1e-10)

    def test_svm_dual_cd(self):
        rng = np.random.default_rng(3)
        X = np.ascontiguousarray(rng.normal(size=(150, 8)))
        y = np.where(rng.random(150) < 0.5, -1.0, 1.0)
        c = np.full(150, 0.7)
        w_py, ep_py, conv_py = _pykernels.svm_dual_cd(X, y, c, 1e-6, 2000)
        w_cy, ep_cy, conv_cy = fast.svm_dual_cd(X, y, c, 1e-6, 2000)
        assert conv_py == conv_cy
        assert np.allclose(np.asarray(w_py), np.asarray(w_cy),
                           rtol=1e-8, atol=1e-10)


class TestPureFallback:
    def test_env_var_forces_python(self):
        import subprocess
        import sys
        out = subprocess.run(
            [sys.executable, "-c",
             "from valsweep._kernels import BACKEND; print(BACKEND)"],
            env={"PATH": "/usr/bin:/bin", "VALSWEEP_PURE_PYTHON": "1"},
            capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == "python"
