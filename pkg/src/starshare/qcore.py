"""Small dense complex linear algebra for qubit and two-qubit operators.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` with shape
``(d, d)``, ``d`` in ``{2, 4}``. Two-qubit operators use the ordering
Alice (first factor) tensor Bob (second factor), basis
``|00>, |01>, |10>, |11>``.

Functions never mutate their inputs. Most accept stacks of matrices
(leading batch axes) where that is natural for numpy; the dimension checks
apply to the trailing two axes.
"""
from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-10
ALLOWED_DIMS = (2, 4)

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

for _m in (I2, I4, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.setflags(write=False)


class DimensionError(ValueError):
    """Raised when operand shapes are incompatible or unsupported."""


def _dim(a: np.ndarray) -> int:
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionError(f"expected square matrix, got shape {a.shape}")
    d = a.shape[-1]
    if d not in ALLOWED_DIMS:
        raise DimensionError(f"dimension {d} not in {ALLOWED_DIMS}")
    return d


def as_matrix(entries) -> np.ndarray:
    """Coerce ``entries`` to a finite complex matrix of dimension 2 or 4."""
    a = np.array(entries, dtype=complex)
    _dim(a)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product ``a (x) b``; the result must stay within 4x4."""
    da, db = _dim(a), _dim(b)
    if da * db > 4:
        raise DimensionError(f"tensor product of {da}x{da} and {db}x{db} exceeds 4x4")
    return np.kron(a, b)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if _dim(a) != _dim(b):
        raise DimensionError("dimension mismatch in matmul")
    return np.matmul(a, b)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if _dim(a) != _dim(b):
        raise DimensionError("dimension mismatch in add")
    return np.add(a, b)


def scale(c: complex, a: np.ndarray) -> np.ndarray:
    _dim(a)
    return c * np.asarray(a, dtype=complex)


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose over the trailing two axes."""
    _dim(a)
    return np.conj(np.swapaxes(a, -1, -2))


def trace(a: np.ndarray):
    _dim(a)
    return np.trace(a, axis1=-2, axis2=-1)


def partial_trace_second(ab: np.ndarray) -> np.ndarray:
    """Trace out the second (Bob) qubit of a 4x4 operator.

    >>> partial_trace_second(I4).real
    array([[2., 0.],
           [0., 2.]])
    """
    if _dim(ab) != 4:
        raise DimensionError("partial_trace_second needs a 4x4 operator")
    ab = np.asarray(ab)
    t = ab.reshape(ab.shape[:-2] + (2, 2, 2, 2))
    # indices: (alice_row, bob_row, alice_col, bob_col)
    return np.einsum("...ijkj->...ik", t)


def sandwich(k: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """``k @ rho @ k^dagger``, broadcasting over leading axes."""
    return k @ rho @ np.conj(np.swapaxes(k, -1, -2))


def is_hermitian(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    try:
        _dim(a)
    except DimensionError:
        return False
    a = np.asarray(a)
    return bool(np.all(np.abs(a - dagger(a)) <= tol))


def eigvalsh(a: np.ndarray) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    2x2 uses the closed form; 4x4 defers to LAPACK.
    """
    a = np.asarray(a)
    if _dim(a) == 2:
        h = 0.5 * (a + dagger(a))
        mean = 0.5 * (h[0, 0] + h[1, 1]).real
        half_gap = np.hypot(0.5 * (h[0, 0] - h[1, 1]).real, abs(h[0, 1]))
        return np.array([mean - half_gap, mean + half_gap])
    return np.linalg.eigvalsh(0.5 * (a + dagger(a)))


def is_psd(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True when ``a`` is Hermitian and its smallest eigenvalue is >= -tol."""
    if not is_hermitian(a, tol):
        return False
    return bool(eigvalsh(a)[0] >= -tol)
