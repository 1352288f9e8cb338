"""Finite frames: bounds, Parseval/tight tests, excess, Gram matrices,
analysis/synthesis maps, Naimark complements and coherence.

A frame with ``k`` vectors in ``C^d`` is stored as a ``(k, d)`` complex array
whose rows are the frame vectors. The inner product is linear in its first
argument, ``<f, g> = sum_i f_i * conj(g_i)``, so the synthesis matrix is
``T = vectors.T`` (``d x k``), the analysis matrix is ``T*`` and the Gram
matrix ``G[j, k] = <e_k, e_j>`` equals ``T* T``.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    NotNormalized,
    NotParseval,
    NotSpanning,
    NotTight,
    ZeroVector,
)
from .numerics import as_matrix, canonical_phase, hermitian_eigen, orthonormal_complete

TOL_ZERO = 1e-12
PARSEVAL_TOL = 1e-10


def _freeze(a):
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Frame:
    """Ordered family of nonzero vectors in a ``dim``-dimensional space.

    ``field`` is ``"real"`` or ``"complex"``; real frames are stored as
    complex arrays with zero imaginary part.
    """

    vectors: np.ndarray
    field: str = "complex"

    def __post_init__(self):
        V = as_matrix(self.vectors)
        if self.field not in ("real", "complex"):
            raise ValueError(f"unknown field {self.field!r}")
        if self.field == "real":
            if V.size and np.abs(V.imag).max() > 0.0:
                raise ValueError("real frame has nonzero imaginary parts")
            V = V.real.astype(complex)
        norms = np.linalg.norm(V, axis=1)
        if norms.size and norms.min() <= TOL_ZERO * max(norms.max(), 1e-300):
            bad = np.flatnonzero(norms <= TOL_ZERO * max(norms.max(), 1e-300)).tolist()
            raise ZeroVector(f"frame contains zero vectors at indices {bad}")
        object.__setattr__(self, "vectors", _freeze(V))

    @classmethod
    def drop_zero_vectors(cls, vectors, field="complex"):
        """Build a frame from raw input, silently dropping (near-)zero vectors.

        Returns the frame and the kept original indices.
        """
        V = as_matrix(vectors)
        norms = np.linalg.norm(V, axis=1)
        keep = np.flatnonzero(norms > TOL_ZERO * max(norms.max(initial=0.0), 1e-300))
        return cls(V[keep], field), keep

    @property
    def k(self):
        """Number of frame vectors, ``|J|``."""
        return self.vectors.shape[0]

    @property
    def dim(self):
        return self.vectors.shape[1]

    def __len__(self):
        return self.k

    @property
    def synthesis_matrix(self):
        return self.vectors.T

    @property
    def analysis_matrix(self):
        return self.vectors.conj()

    @property
    def norms(self):
        return np.linalg.norm(self.vectors, axis=1)

    def frame_operator(self):
        """``S = sum_j e_j e_j*``."""
        T = self.synthesis_matrix
        return T @ T.conj().T

    def scaled(self, factor):
        return Frame(self.vectors * factor, self.field)

    def normalized(self):
        return Frame(self.vectors / self.norms[:, None], self.field)

    def with_phases(self, phases):
        """Multiply each vector by ``exp(1j * phases[j])``; the result is complex."""
        return Frame(self.vectors * np.exp(1j * np.asarray(phases))[:, None], "complex")

    def __repr__(self):
        return f"Frame(k={self.k}, dim={self.dim}, field={self.field!r})"


@dataclass(frozen=True)
class FrameBounds:
    A: float
    B: float

    @property
    def is_frame(self):
        return self.A > 0.0


def frame_bounds(F):
    """Optimal frame bounds: extreme eigenvalues of the frame operator."""
    vals = hermitian_eigen(F.frame_operator()).values
    A = max(float(vals[0]), 0.0)
    return FrameBounds(A, max(float(vals[-1]), A))


def is_parseval(F, tol=PARSEVAL_TOL):
    S = F.frame_operator()
    return float(np.linalg.norm(S - np.eye(F.dim), 2)) <= tol


def is_tight(F, tol=PARSEVAL_TOL):
    b = frame_bounds(F)
    return b.A > 0.0 and b.B - b.A <= tol * max(1.0, b.B)


def rescale_to_parseval(F, tol=1e-10):
    """Divide every vector by ``sqrt(A)`` for an ``A``-tight frame."""
    b = frame_bounds(F)
    if b.A <= 0.0 or b.B - b.A > tol * max(1.0, b.B):
        raise NotTight(f"frame bounds A={b.A:.6g}, B={b.B:.6g}")
    return F.scaled(1.0 / np.sqrt(0.5 * (b.A + b.B)))


def numerical_rank(F, tol=1e-10):
    vals = hermitian_eigen(F.frame_operator()).values
    top = vals[-1] if vals.size else 0.0
    if top <= 0.0:
        return 0
    return int(np.sum(vals > tol * top))


def excess(F, tol=1e-10):
    """Number of removable vectors, ``|J| - d``, for a spanning frame."""
    r = numerical_rank(F, tol)
    if r < F.dim:
        raise NotSpanning(f"frame spans a {r}-dimensional subspace of C^{F.dim}")
    return F.k - F.dim


def gram(F):
    """Gram matrix with entries ``G[j, k] = <e_k, e_j>``."""
    T = F.synthesis_matrix
    return T.conj().T @ T


def analysis(F, f):
    f = np.asarray(f, dtype=complex)
    if f.shape != (F.dim,):
        raise DimensionMismatch(f"vector of shape {f.shape} for a frame in dimension {F.dim}")
    return F.analysis_matrix @ f


def synthesis(F, c):
    c = np.asarray(c, dtype=complex)
    if c.shape != (F.k,):
        raise DimensionMismatch(f"{c.shape[0] if c.ndim else 0} coefficients for {F.k} vectors")
    return F.synthesis_matrix @ c


@dataclass(frozen=True, eq=False)
class NaimarkExtension:
    """Parseval frame ``e_j``, its complement ``m_j`` and the basis ``e_j + m_j``.

    ``complement`` has shape ``(k, k - d)``: row ``j`` is ``m_j``. ``extended``
    is the ``k x k`` unitary whose column ``j`` is ``e_j (+) m_j``.
    """

    base: Frame
    complement: np.ndarray
    extended: np.ndarray

    @property
    def complement_dim(self):
        return self.complement.shape[1]

    def project(self):
        """Frame obtained by keeping the first ``d`` coordinates of each ``e_j+``."""
        return Frame(self.extended[: self.base.dim, :].T, self.base.field)


def naimark_extend(F, tol=1e-8):
    """Complete the synthesis matrix of a Parseval frame to a unitary."""
    if not is_parseval(F, tol):
        raise NotParseval("Naimark extension needs a Parseval frame")
    T = F.synthesis_matrix
    Mc = orthonormal_complete(T, tol=max(tol, 1e-10))
    U = np.vstack([T, Mc])
    return NaimarkExtension(F, _freeze(Mc.T), _freeze(U))


def coherence(F):
    """``max_{i != j} |<e_i, e_j>| / (||e_i|| ||e_j||)``; 0 for a single vector."""
    if F.k < 2:
        return 0.0
    G = np.abs(gram(F.normalized()))
    np.fill_diagonal(G, 0.0)
    return float(G.max())


def is_normalized(F, tol=1e-10):
    return bool(np.all(np.abs(F.norms - 1.0) <= tol))


def is_equiangular(F, tol=1e-10):
    if not is_normalized(F, tol):
        raise NotNormalized("equiangularity is defined for unit-norm frames")
    if F.k < 2:
        return True
    G = np.abs(gram(F))
    off = G[~np.eye(F.k, dtype=bool)]
    return float(off.max() - off.min()) <= tol


def welch_coherence(k, e):
    """Coherence of an optimal Grassmannian frame with ``k`` vectors and excess ``e``."""
    if e == 0:
        return 0.0
    return float(np.sqrt(e / ((k - e) * (k - 1))))


def grassmannian_exists(k, e, field="complex"):
    """Necessary size condition for an optimal Grassmannian frame."""
    if field == "real":
        return (k - e) ** 2 >= k
    return (k - e) ** 2 >= k + e


def is_grassmannian_optimal(F, tol=1e-10):
    """Tight, equiangular, and coherence equal to the optimal value.

    Returns False (rather than raising) for frames that are not unit norm.
    """
    if not is_normalized(F, tol):
        return False
    if not is_tight(F, tol) or not is_equiangular(F, tol):
        return False
    e = excess(F)
    return abs(coherence(F) - welch_coherence(F.k, e)) <= tol


# generators -----------------------------------------------------------------


def orthonormal_basis(d, field="complex"):
    return Frame(np.eye(d), field)


def random_unitary(n, rng, real=False):
    """Haar-distributed unitary (orthogonal when ``real``) via QR with phase fix."""
    if real:
        Z = rng.standard_normal((n, n))
    else:
        Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))[None, :]


def random_parseval(d, k, rng, real=False):
    """First ``d`` rows of a random ``k x k`` unitary, read as ``k`` vectors in ``C^d``."""
    if not 1 <= d <= k:
        raise ValueError(f"need 1 <= d <= k, got d={d}, k={k}")
    U = random_unitary(k, rng, real)
    return Frame(U[:d, :].T, "real" if real else "complex")


def frame_from_gram(G, tol=1e-10, field=None):
    """A frame whose Gram matrix is the PSD matrix ``G``.

    The frame lives in dimension ``rank(G)``; its synthesis matrix has rows
    ``sqrt(lam_i) v_i*`` for the eigenpairs above ``tol * max(lam)``, each
    phase-canonical. For a projection ``G`` those rows are orthonormal.
    """
    G = as_matrix(G)
    res = hermitian_eigen(G)
    vals, vecs = res.values, res.vectors
    keep = vals > tol * max(vals[-1], 1e-300)
    # largest eigenvalues first
    vals, vecs = vals[keep][::-1], vecs[:, keep][:, ::-1]
    T = np.array([canonical_phase(np.sqrt(lam) * v.conj()) for lam, v in zip(vals, vecs.T)])
    if field is None:
        field = "real" if np.abs(G.imag).max(initial=0.0) == 0.0 else "complex"
    if field == "real":
        T = T.real
    return Frame(T.T, field)


def pairwise_angle_table(F):
    """``|<e_i, e_j>| / (||e_i|| ||e_j||)`` for every pair."""
    return np.abs(gram(F.normalized()))


def frame_summary(F, tol=1e-8):
    """Plain-dict report of the structural properties of ``F``."""
    b = frame_bounds(F)
    out = {
        "k": F.k,
        "dim": F.dim,
        "field": F.field,
        "bounds": {"A": b.A, "B": b.B},
        "is_frame": b.is_frame,
        "tight": is_tight(F, tol),
        "parseval": is_parseval(F, tol),
        "coherence": coherence(F),
    }
    try:
        out["excess"] = excess(F)
    except NotSpanning:
        out["excess"] = None
    G = gram(F)
    out["gram_projection_residual"] = float(np.abs(G @ G - G).max())
    Fn = F.normalized()
    out["equiangular"] = is_equiangular(Fn, tol)
    if out["tight"] and out["excess"] is not None:
        out["grassmannian_optimal"] = is_grassmannian_optimal(Fn, tol)
        out["welch_coherence"] = welch_coherence(F.k, out["excess"])
        out["grassmannian_size_condition"] = grassmannian_exists(F.k, out["excess"], F.field)
    else:
        out["grassmannian_optimal"] = False
    return out


def frames_equal_up_to_phase(F1, F2, tol=1e-10) -> Optional[np.ndarray]:
    """Phases ``t_j`` with ``F2_j = exp(i t_j) F1_j`` if they exist, else None."""
    if F1.vectors.shape != F2.vectors.shape:
        return None
    inner = np.einsum("jd,jd->j", F2.vectors, F1.vectors.conj())
    phases = np.angle(inner)
    aligned = F1.vectors * np.exp(1j * phases)[:, None]
    dev = np.linalg.norm(F2.vectors - aligned, axis=1)
    if np.any(dev > tol * np.maximum(1.0, F1.norms)):
        return None
    return phases
