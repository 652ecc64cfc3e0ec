"""Small dense complex linear algebra on numpy arrays.

Vectors are 1-d complex arrays, matrices 2-d.  Inner products conjugate the
left argument.
"""
from __future__ import annotations

import numpy as np

from .errors import DimMismatch, NotSquare

DEFAULT_TOL = 1e-10


def as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("expected a non-empty 1-d vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    return v


def inner(u, v) -> complex:
    u, v = as_vector(u), as_vector(v)
    if u.shape != v.shape:
        raise DimMismatch(f"dimensions {u.size} and {v.size} differ")
    return complex(np.vdot(u, v))


def tensor(u, v) -> np.ndarray:
    """Kronecker product; component ``a*dim(v) + b`` is ``u[a]*v[b]``."""
    return np.kron(as_vector(u), as_vector(v))


def conj_reference(v) -> np.ndarray:
    """The overlined state: conjugate every component in the reference basis."""
    return np.conj(as_vector(v))


def _stack(vs) -> np.ndarray:
    vs = [as_vector(v) for v in vs]
    if not vs:
        raise ValueError("empty vector list")
    dims = {v.size for v in vs}
    if len(dims) != 1:
        raise DimMismatch(f"mixed dimensions {sorted(dims)}")
    return np.array(vs)


def gram(vs) -> np.ndarray:
    """``G[i, j] = inner(vs[i], vs[j])``."""
    m = _stack(vs)
    return m.conj() @ m.T


def _square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"shape {m.shape} is not square")
    return m


def max_deviation_from_identity(m) -> float:
    """Largest entry modulus of ``M^+ M - 1``."""
    m = _square(m)
    return float(np.abs(m.conj().T @ m - np.eye(m.shape[0])).max())


def unitarity_deviations(m) -> tuple[float, float]:
    """``(max|M^+ M - 1|, max|M M^+ - 1|)``."""
    m = _square(m)
    eye = np.eye(m.shape[0])
    return (
        float(np.abs(m.conj().T @ m - eye).max()),
        float(np.abs(m @ m.conj().T - eye).max()),
    )


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    return max(unitarity_deviations(m)) <= tol


def rank(vs, tol: float = DEFAULT_TOL) -> int:
    """Number of Gram eigenvalues above ``tol``."""
    return int(np.sum(np.linalg.eigvalsh(gram(vs)) > tol))
