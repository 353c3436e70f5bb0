"""Dense complex matrix kernels.

Matrices are plain 2-D ``numpy`` arrays of dtype ``complex128``. Bipartite
objects use the global index convention ``row = i * n + k`` where ``i``
labels subsystem A (dimension ``m``) and ``k`` labels subsystem B
(dimension ``n``); :func:`tensor` realises exactly this ordering.
"""

import numpy as np

from .errors import DimensionMismatch, NegativeEigenvalue, NoConvergence, NotHermitian

ComplexMatrix = np.ndarray

TOL_HERM = 1e-10
TOL_PSD = 1e-10
SUPPORT_CUTOFF = 1e-10
MAX_SWEEPS = 64

_EPS = np.finfo(float).eps


def as_matrix(x) -> ComplexMatrix:
    """Coerce ``x`` to a 2-D complex array (copying only when needed)."""
    m = np.asarray(x, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    return np.conj(m).T


def max_abs(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def _require_square(m: ComplexMatrix) -> int:
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got shape {m.shape}")
    return m.shape[0]


def hermiticity_defect(m: ComplexMatrix) -> float:
    return max_abs(m - dagger(m))


def is_hermitian(m, tol: float = TOL_HERM) -> bool:
    """``||M - M^dagger||_max <= tol * ||M||_max``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return hermiticity_defect(m) <= tol * max_abs(m)


def _canonical_phase(vecs: ComplexMatrix) -> ComplexMatrix:
    # make the first non-negligible component of every column real positive
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        big = np.abs(col)
        idx = int(np.argmax(big > 1e-8 * big.max()))
        out[:, j] = col * (np.conj(col[idx]) / abs(col[idx]))
    return out


def eig_hermitian(m, tol: float = TOL_HERM, max_sweeps: int = MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Parameters
    ----------
    m : array_like
        Square matrix, Hermitian to within ``tol`` (relative to its largest entry).
    tol : float
        Hermiticity tolerance.
    max_sweeps : int
        Budget of full cyclic sweeps before :class:`NoConvergence` is raised.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray
        Orthonormal eigenvectors as columns. Ties keep the order in which the
        rotations left them, and each column's first non-negligible component
        is made real positive, so the output is deterministic.
    """
    a = as_matrix(m)
    n = _require_square(a)
    if not is_hermitian(a, tol):
        raise NotHermitian(
            f"||M - M^dagger||_max = {hermiticity_defect(a):.3e} exceeds {tol:g} relative"
        )
    a = 0.5 * (a + dagger(a))
    v = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(a))
    if n == 0 or scale == 0.0:
        return np.zeros(n), v

    converged_at = n * _EPS * scale
    skip_below = 0.1 * _EPS * scale
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= converged_at:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= skip_below:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                u = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                pq = [p, q]
                a[:, pq] = a[:, pq] @ u
                a[pq, :] = dagger(u) @ a[pq, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
                v[:, pq] = v[:, pq] @ u
    else:
        raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], _canonical_phase(v[:, order])


def _psd_spectrum(m, tol_psd: float):
    w, v = eig_hermitian(m)
    top = max(float(w[-1]), 0.0) if w.size else 0.0
    ref = top if top > 0 else (abs(float(w[0])) if w.size else 0.0)
    if w.size and w[0] < -tol_psd * ref:
        raise NegativeEigenvalue(f"minimum eigenvalue {w[0]:.3e} below -{tol_psd:g} * lambda_max")
    return w, v, top


def support_basis(m, cutoff: float = SUPPORT_CUTOFF, tol_psd: float = TOL_PSD):
    """Eigenvalues and orthonormal eigenvectors spanning the support of a PSD matrix.

    The support is the span of eigenvectors with ``lambda > cutoff * lambda_max``.
    """
    w, v, top = _psd_spectrum(m, tol_psd)
    keep = w > cutoff * top if top > 0 else np.zeros(w.shape, dtype=bool)
    return w[keep], v[:, keep]


def pinv_sqrt(m, cutoff: float = SUPPORT_CUTOFF, tol_psd: float = TOL_PSD) -> ComplexMatrix:
    """Inverse square root of a PSD matrix on its support, zero on the kernel."""
    w, v = support_basis(m, cutoff, tol_psd)
    return (v / np.sqrt(w)) @ dagger(v)


def tensor(a, b) -> ComplexMatrix:
    """Kronecker product with the first factor as the major index."""
    return np.kron(as_matrix(a), as_matrix(b))


def trace_norm(m) -> float:
    """Sum of singular values.

    Hermitian input uses ``sum |lambda_i|`` directly; otherwise the Hermitian
    dilation ``[[0, M], [M^dagger, 0]]`` is diagonalised, whose spectrum is
    ``+-sigma_i``.
    """
    m = as_matrix(m)
    n = _require_square(m)
    if is_hermitian(m):
        return float(np.sum(np.abs(eig_hermitian(m)[0])))
    big = np.zeros((2 * n, 2 * n), dtype=complex)
    big[:n, n:] = m
    big[n:, :n] = dagger(m)
    return 0.5 * float(np.sum(np.abs(eig_hermitian(big)[0])))
