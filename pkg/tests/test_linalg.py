import numpy as np
import pytest
from hypothesis import given, strategies as st

from cstarkit.errors import NumericError
from cstarkit.linalg import eigvalsh, jacobi_eigh

from oracles import hermitian_2x2_eigenvalues, to_lists


def _hermitian(rng, n, count=None):
    shape = (n, n) if count is None else (count, n, n)
    g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return 0.5 * (g + np.conj(np.swapaxes(g, -1, -2)))


def test_two_by_two_closed_form(rng):
    for _ in range(50):
        h = _hermitian(rng, 2)
        w, _ = jacobi_eigh(h)
        lo, hi = hermitian_2x2_eigenvalues(to_lists(h))
        assert w[0] == pytest.approx(lo, abs=1e-12)
        assert w[1] == pytest.approx(hi, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 9])
def test_reconstruction_and_orthonormality(rng, n):
    h = _hermitian(rng, n)
    w, v = jacobi_eigh(h)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, h, atol=1e-12)
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-12)


def test_known_spectrum_under_unitary_conjugation(rng):
    spectrum = np.array([-2.0, 0.5, 0.5, 3.0])
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    w, _ = jacobi_eigh(q @ np.diag(spectrum) @ q.conj().T)
    assert np.allclose(w, spectrum, atol=1e-12)


def test_stacked_matches_single(rng):
    hs = _hermitian(rng, 3, count=40)
    w, v = jacobi_eigh(hs)
    for k in range(40):
        ws, _ = jacobi_eigh(hs[k])
        assert np.allclose(w[k], ws, atol=1e-12)
    assert np.allclose(v @ (w[..., None] * np.conj(np.swapaxes(v, -1, -2))), hs, atol=1e-12)


def test_diagonal_and_zero_inputs():
    w, v = jacobi_eigh(np.diag([3.0, -1.0, 2.0]))
    assert list(w) == [-1.0, 2.0, 3.0]
    w, _ = jacobi_eigh(np.zeros((3, 3)))
    assert list(w) == [0.0, 0.0, 0.0]
    w, _ = jacobi_eigh(np.zeros((4, 2, 2)))
    assert w.shape == (4, 2)


def test_eigvalsh_and_shape_errors(rng):
    h = _hermitian(rng, 3)
    assert np.allclose(eigvalsh(h), jacobi_eigh(h)[0])
    with pytest.raises(ValueError):
        jacobi_eigh(np.zeros((2, 3)))


def test_sweep_cap_raises_with_diagnostics(rng):
    h = _hermitian(rng, 6)
    with pytest.raises(NumericError) as info:
        jacobi_eigh(h, max_sweeps=0)
    assert info.value.diagnostics


def test_large_and_tiny_magnitudes():
    for scale in (1e-150, 1e150):
        h = scale * np.array([[2.0, 1j], [-1j, 2.0]])
        w, _ = jacobi_eigh(h)
        assert np.allclose(w / scale, [1.0, 3.0], rtol=1e-12)


@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=2),
       st.complex_numbers(max_magnitude=1e3))
def test_trace_and_determinant_preserved(diag, off):
    h = np.array([[diag[0], off], [np.conj(off), diag[1]]])
    w, _ = jacobi_eigh(h)
    assert w.sum() == pytest.approx(diag[0] + diag[1], abs=1e-9 * (1 + abs(off) + max(map(abs, diag))))
    det = diag[0] * diag[1] - abs(off) ** 2
    assert w[0] * w[1] == pytest.approx(det, abs=1e-8 * (1 + abs(det) + abs(off) ** 2 + max(map(abs, diag)) ** 2))
