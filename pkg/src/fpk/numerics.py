"""Dense complex linear algebra and polynomial root finding.

Eigen-decompositions are delegated to LAPACK through :mod:`numpy.linalg`;
this module adds the input validation, ordering, phase canonicalization and
residual bookkeeping the rest of the package relies on.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (
    ConvergenceFailure,
    NonFiniteEntries,
    NotHermitian,
    NotSquare,
    RowsNotOrthonormal,
    ZeroPolynomial,
)

RANK_TOL = 1e-10


def as_matrix(M, dtype=complex):
    """Return ``M`` as a finite 2-D array of ``dtype``."""
    A = np.asarray(M, dtype=dtype)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteEntries("matrix contains NaN or Inf")
    return A


def opnorm(M):
    """Spectral norm; 0 for empty matrices."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def canonical_phase(v, tol=1e-12):
    """Rotate ``v`` so its first entry of non-negligible modulus is real positive.

    "Non-negligible" means ``|v_i| > tol * max|v|``.
    """
    v = np.asarray(v, dtype=complex)
    scale = np.abs(v).max() if v.size else 0.0
    if scale == 0.0:
        return v.copy()
    idx = np.flatnonzero(np.abs(v) > tol * scale)[0]
    phase = v[idx] / abs(v[idx])
    out = v / phase
    out[idx] = abs(v[idx])
    return out


def canonical_columns(V, tol=1e-12):
    V = np.asarray(V, dtype=complex)
    out = np.empty_like(V)
    for j in range(V.shape[1]):
        out[:, j] = canonical_phase(V[:, j], tol)
    return out


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalues, unit eigenvectors (as columns) and the max residual ``||Mv - lv||``."""

    values: np.ndarray
    vectors: np.ndarray
    residual: float


def _check_square(M):
    if M.shape[0] != M.shape[1]:
        raise NotSquare(f"matrix is {M.shape[0]}x{M.shape[1]}")


def _residual(M, values, vectors):
    if values.size == 0:
        return 0.0
    R = M @ vectors - vectors * values[np.newaxis, :]
    return float(np.linalg.norm(R, axis=0).max())


def hermitian_eigen(M, tol_herm=None):
    """Eigen-decomposition of a Hermitian matrix.

    Parameters
    ----------
    M : array_like
        Square matrix, Hermitian up to ``tol_herm``.
    tol_herm : float, optional
        Largest accepted entry of ``|M - M*|``. Defaults to
        ``1e-10 * (1 + ||M||)``.

    Returns
    -------
    EigenResult
        Real eigenvalues in ascending order with orthonormal,
        phase-canonical eigenvectors.
    """
    M = as_matrix(M)
    _check_square(M)
    norm = opnorm(M)
    if tol_herm is None:
        tol_herm = 1e-10 * (1.0 + norm)
    asym = float(np.abs(M - M.conj().T).max()) if M.size else 0.0
    if asym > tol_herm:
        raise NotHermitian(f"max|M - M*| = {asym:.3e} exceeds {tol_herm:.3e}")
    Mh = 0.5 * (M + M.conj().T)
    try:
        values, vectors = np.linalg.eigh(Mh)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    vectors = canonical_columns(vectors)
    return EigenResult(values, vectors, _residual(M, values.astype(complex), vectors))


def general_eigen(M):
    """Eigenvalues (with multiplicity) and unit eigenvectors of any square matrix.

    Values are sorted by real part, then imaginary part.
    """
    M = as_matrix(M)
    _check_square(M)
    if M.shape[0] == 0:
        return EigenResult(np.zeros(0, complex), np.zeros((0, 0), complex), 0.0)
    A = M.real if not np.any(M.imag) else M
    try:
        values, vectors = np.linalg.eig(A)
        values = values.astype(complex)
        vectors = vectors.astype(complex)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    vectors = vectors[:, order]
    vectors = vectors / np.linalg.norm(vectors, axis=0)
    vectors = canonical_columns(vectors)
    return EigenResult(values, vectors, _residual(M, values, vectors))


def nullspace_orthonormal(M, tol=RANK_TOL, atol=0.0):
    """Orthonormal basis (columns) of the numerical null space of ``M``.

    A direction counts as null when its singular value is at most
    ``max(tol * ||M||, atol)``. ``atol`` matters when ``M`` itself is tiny
    and its nonzero entries are pure round-off.
    """
    M = as_matrix(M)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=complex)
    if not np.any(M.imag):
        M = M.real
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    cutoff = max(tol * (s[0] if s.size else 0.0), atol)
    svals = np.zeros(n)
    svals[: s.size] = s
    null = Vh.conj().T[:, svals <= cutoff]
    return canonical_columns(null)


def orthonormal_complete(V, tol=1e-10):
    """Rows completing the orthonormal rows of ``V`` to a unitary matrix.

    Each returned row is phase-canonical (first nonzero entry real positive).
    """
    V = as_matrix(V)
    r, n = V.shape
    defect = np.abs(V @ V.conj().T - np.eye(r)).max() if r else 0.0
    if defect > tol:
        raise RowsNotOrthonormal(f"max|VV* - I| = {defect:.3e}")
    if r == n:
        return np.zeros((0, n), dtype=complex)
    # rows w with V w* = 0 are conjugates of null vectors of V
    null = nullspace_orthonormal(V, tol=1e-8, atol=1e-8)
    if null.shape[1] != n - r:
        raise RowsNotOrthonormal("numerical rank of V does not match its row count")
    W = null.conj().T
    return np.array([canonical_phase(w) for w in W])


def poly_eval(coeffs, x):
    """Evaluate an ascending-coefficient polynomial (Horner)."""
    acc = np.zeros_like(np.asarray(x, dtype=complex))
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def poly_deriv(coeffs):
    coeffs = list(coeffs)
    return [i * coeffs[i] for i in range(1, len(coeffs))]


def poly_from_roots(roots):
    """Ascending coefficients of the monic polynomial with the given roots."""
    coeffs = np.array([1.0 + 0j])
    for r in roots:
        coeffs = np.concatenate([[0.0], coeffs]) - r * np.concatenate([coeffs, [0.0]])
    return coeffs


def trim_coeffs(coeffs, tol=1e-14):
    """Drop negligible leading (highest-degree) coefficients."""
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0 or np.abs(c).max() == 0.0:
        raise ZeroPolynomial("all coefficients vanish")
    scale = np.abs(c).max()
    n = c.size
    while n > 1 and abs(c[n - 1]) <= tol * scale:
        n -= 1
    return c[:n]


def companion(coeffs):
    """Companion matrix of an ascending-coefficient polynomial of degree >= 1."""
    c = np.asarray(coeffs, dtype=complex)
    n = c.size - 1
    C = np.zeros((n, n), dtype=complex)
    C[1:, :-1] = np.eye(n - 1)
    C[:, -1] = -c[:-1] / c[-1]
    return C


def poly_roots(coeffs, trim_tol=1e-14):
    """All roots, with multiplicity, of ``sum_i coeffs[i] * x**i``.

    Roots come from companion-matrix eigenvalues followed by a single Newton
    step, kept only when it lowers ``|p(r)|``.
    """
    c = trim_coeffs(coeffs, trim_tol)
    if c.size == 1:
        return np.zeros(0, dtype=complex)
    roots = general_eigen(companion(c)).values
    dc = poly_deriv(c)
    polished = roots.copy()
    for i, r in enumerate(roots):
        p = poly_eval(c, r)
        dp = poly_eval(dc, r)
        if dp != 0:
            cand = r - p / dp
            if abs(poly_eval(c, cand)) < abs(p):
                polished[i] = cand
    order = np.lexsort((polished.imag, polished.real))
    return polished[order]


def real_if_close(values, tol):
    """Real parts of ``values``; raises if any imaginary part exceeds ``tol``."""
    values = np.asarray(values)
    if np.iscomplexobj(values) and values.size and np.abs(values.imag).max() > tol:
        raise ValueError(f"imaginary part {np.abs(values.imag).max():.3e} exceeds {tol:.3e}")
    return np.sort(np.real(values))


def matching_distance(a, b):
    """Max deviation under the optimal pairing of two eigenvalue multisets.

    Real inputs use sorted matching; complex inputs use a min-cost
    assignment. Multisets of different size are infinitely far apart.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.size != b.size:
        return float("inf")
    if a.size == 0:
        return 0.0
    if not (np.iscomplexobj(a) or np.iscomplexobj(b)):
        return float(np.abs(np.sort(a) - np.sort(b)).max())
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
