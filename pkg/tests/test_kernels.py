import json
import os
import subprocess
import sys

import numpy as np
import pytest

from tiltedlattice import _kernels

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


def _rand_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@needs_numba
class TestBackendParity:
    def test_miller(self):
        for z, start in [(0.5, 40), (37.2, 120), (900.0, 1100)]:
            a = _kernels.bessel_miller_numba(z, start)
            b = _kernels.bessel_miller_py(z, start)
            assert np.max(np.abs(a - b)) <= 1e-15

    def test_theta(self):
        for x, q in [(0.3, 0.1), (1.2, 0.45), (2.0, 0.8), (-4.0, 0.99)]:
            assert _kernels.theta3_direct_numba(x, q) == pytest.approx(_kernels.theta3_direct_py(x, q), rel=1e-15)
            assert _kernels.theta3_dual_numba(x, q) == pytest.approx(_kernels.theta3_dual_py(x, q), rel=1e-14)
            assert _kernels.theta3_dnome_numba(x, q) == pytest.approx(_kernels.theta3_dnome_py(x, q), rel=1e-14)

    @pytest.mark.parametrize("ns,nk", [(1, 1), (7, 3), (50, 201), (400, 31)])
    def test_convolve(self, ns, nk):
        rng = np.random.default_rng(ns * 1000 + nk)
        src, ker = _rand_complex(rng, ns), _rand_complex(rng, nk)
        a = _kernels.convolve_numba(src, ker)
        b = _kernels.convolve_numpy(src, ker)
        assert a.shape == b.shape == (ns + nk - 1,)
        assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, np.max(np.abs(b)))

    @pytest.mark.parametrize("shape", [(1, 1), (1, 5), (6, 1), (17, 23)])
    def test_hamiltonian(self, shape):
        rng = np.random.default_rng(sum(shape))
        psi = _rand_complex(rng, *shape)
        diag = rng.standard_normal(shape)
        a = _kernels.hamiltonian_2d_numba(psi, diag, 0.7)
        b = _kernels.hamiltonian_2d_numpy(psi, diag, 0.7)
        assert np.max(np.abs(a - b)) <= 1e-14

    def test_convolve_repeatable(self):
        rng = np.random.default_rng(3)
        src, ker = _rand_complex(rng, 300), _rand_complex(rng, 77)
        first = _kernels.convolve_numba(src, ker)
        for _ in range(3):
            assert np.array_equal(_kernels.convolve_numba(src, ker), first)


def test_hamiltonian_matches_dense_matrix():
    nx, ny = 4, 3
    rng = np.random.default_rng(0)
    psi = _rand_complex(rng, nx, ny)
    diag = rng.standard_normal((nx, ny))
    H = np.diag(diag.ravel())
    for i in range(nx):
        for j in range(ny):
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                a, b = i + di, j + dj
                if 0 <= a < nx and 0 <= b < ny:
                    H[i * ny + j, a * ny + b] = -1.0
    assert np.allclose(_kernels.hamiltonian_2d(psi, diag, 1.0).ravel(), H @ psi.ravel(), atol=1e-14)


def _probe(env_extra):
    code = (
        "import json, numpy as np\n"
        "from tiltedlattice import _kernels\n"
        "from tiltedlattice.analytic1d import LatticeParams1D, localized, propagate_exact\n"
        "s = propagate_exact(localized(0), LatticeParams1D(1.0, 0.3), 7.0)\n"
        "print(json.dumps({'backend': _kernels.BACKEND, 'threads': _kernels.get_threads(),"
        " 're': s.amplitudes.real.tolist(), 'im': s.amplitudes.imag.tolist()}))\n"
    )
    env = dict(os.environ)
    env.update(env_extra)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def test_env_flag_selects_numpy():
    r = _probe({"TILTEDLATTICE_DISABLE_NUMBA": "1"})
    assert r["backend"] == "numpy"
    assert r["threads"] == 1


@needs_numba
def test_backends_agree_end_to_end():
    a = _probe({"TILTEDLATTICE_DISABLE_NUMBA": "0"})
    b = _probe({"TILTEDLATTICE_DISABLE_NUMBA": "1"})
    assert a["backend"] == "numba"
    diff = np.abs(np.array(a["re"]) - np.array(b["re"])) + np.abs(np.array(a["im"]) - np.array(b["im"]))
    assert diff.max() <= 1e-13


@needs_numba
def test_thread_count_does_not_change_results():
    a = _probe({"NUMBA_NUM_THREADS": "1", "TILTEDLATTICE_DISABLE_NUMBA": "0"})
    b = _probe({"NUMBA_NUM_THREADS": "3", "TILTEDLATTICE_DISABLE_NUMBA": "0"})
    assert (a["threads"], b["threads"]) == (1, 3)
    assert a["re"] == b["re"] and a["im"] == b["im"]
