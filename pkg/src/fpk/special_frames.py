"""Mercedes-type frames, conference-matrix Grassmannian frames and the
closed-form eigenvalue equations of their operators.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import KTooSmall, OddOrder, UnsupportedOrder, WrongLabelCount
from .frames import Frame, frame_from_gram, gram, is_parseval
from .numerics import general_eigen, matching_distance, poly_eval, poly_roots
from .operators import SpectrumReport, spectrum_direct
from .povm import LabeledFrame

SQRT3 = math.sqrt(3.0)
SQRT5 = math.sqrt(5.0)
BETA = (1.0 + SQRT5) / 2.0
BETA_BAR = (1.0 - SQRT5) / 2.0
ALPHA = 1.0 / SQRT5


# Mercedes-type frames ---------------------------------------------------------


def _check_k(k):
    if k < 3:
        raise KTooSmall(f"Mercedes-type frames need k >= 3, got {k}")


def mercedes_gram(k):
    """``I - (1/k) * ones``: diagonal ``(k-1)/k``, off-diagonal ``-1/k``."""
    _check_k(k)
    return np.eye(k) - np.full((k, k), 1.0 / k)


def mercedes_frame(k):
    """Parseval frame of ``k`` vectors in ``R^{k-1}`` with Gram :func:`mercedes_gram`."""
    return frame_from_gram(mercedes_gram(k), field="real")


def example_mercedes_frame():
    """The classical three-vector Mercedes frame in ``R^2``."""
    s = math.sqrt(2.0 / 3.0)
    V = s * np.array([[1.0, 0.0], [-0.5, SQRT3 / 2.0], [-0.5, -SQRT3 / 2.0]])
    return Frame(V, "real")


def mercedes_H_closed_form(E):
    """``(1/6) [[4E1+E2+E3, sqrt3 (E3-E2)], [sqrt3 (E3-E2), 3 (E2+E3)]]``."""
    E1, E2, E3 = E
    off = SQRT3 * (E3 - E2)
    return np.array([[4 * E1 + E2 + E3, off], [off, 3 * (E2 + E3)]]) / 6.0


def is_mercedes_type(F, tol=1e-10):
    """Parseval with ``k >= 3`` vectors in dimension ``k - 1`` and Mercedes Gram."""
    if F.k < 3 or F.dim != F.k - 1:
        return False
    return bool(np.abs(gram(F) - mercedes_gram(F.k)).max() <= tol) and is_parseval(F, 1e-8)


@dataclass(frozen=True)
class EigPolynomial:
    """Ascending real coefficients of an eigenvalue equation."""

    coeffs: np.ndarray
    provenance: str

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, lam):
        return poly_eval(self.coeffs, lam)

    def roots(self):
        return poly_roots(self.coeffs)


def _poly_mul(p, q):
    out = [0.0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _sum_polys(polys, signs=None):
    n = max(len(p) for p in polys)
    signs = signs or [1] * len(polys)
    return np.array(
        [math.fsum(s * p[i] for s, p in zip(signs, polys) if i < len(p)) for i in range(n)]
    )


def _linear_product(factors):
    """Expand a product of linear polynomials ``(a + b*lam)`` given as ``(a, b)``."""
    out = [1.0]
    for a, b in factors:
        out = _poly_mul(out, [a, b])
    return out


def mercedes_char_poly(E):
    """Coefficients of ``sum_i prod_{j != i} (E_j - lam)`` in ``lam``."""
    E = [float(x) for x in E]
    k = len(E)
    _check_k(k)
    terms = [_linear_product([(E[j], -1.0) for j in range(k) if j != i]) for i in range(k)]
    return EigPolynomial(_sum_polys(terms), "mercedes")


def mercedes_secular_eval(E, lam):
    """Evaluate ``sum_i prod_{j != i} (E_j - lam)`` directly from its product form."""
    E = np.asarray(E, dtype=float)
    total = 0.0
    for i in range(E.size):
        total += np.prod(np.delete(E, i) - lam)
    return total


def mercedes_eigs(E):
    """Eigenvalues of ``H`` for any Mercedes-type frame with labels ``E``.

    Writing the equation as ``prod_v (v - lam)^{m_v} * sum_v m_v / (v - lam)``
    over the distinct labels ``v`` (multiplicities ``m_v``) shows every label
    repeated ``m_v`` times is a root of multiplicity ``m_v - 1``. Those roots
    are split off exactly; the remaining ones come from the companion matrix
    of the reduced polynomial ``sum_v m_v prod_{w != v} (w - lam)``.
    """
    E = np.asarray(E, dtype=float)
    _check_k(E.size)
    values, mult = np.unique(E, return_counts=True)
    repeated = np.repeat(values, mult - 1)
    if values.size > 1:
        terms = [
            [m * c for c in _linear_product([(w, -1.0) for w in values if w != v])]
            for v, m in zip(values, mult)
        ]
        reduced = _sum_polys(terms)
        free = poly_roots(reduced)
    else:
        free = np.zeros(0, complex)
    roots = np.concatenate([repeated.astype(complex), free])
    scale = float(np.abs(mercedes_char_poly(E).coeffs).max())
    resid = max(
        (abs(mercedes_secular_eval(E, r.real)) / scale for r in roots),
        default=0.0,
    )
    extra = {"max_imag": float(np.abs(roots.imag).max(initial=0.0))}
    return SpectrumReport("mercedes_poly", np.sort(roots.real), resid, None, extra)


def mercedes_reduction_matrices(k):
    """The block matrices ``M``, ``M^{-1}`` and ``D`` with ``G = M^{-1} D M``."""
    _check_k(k)
    n = k - 1
    Minv = np.block(
        [
            [np.ones((1, n)), np.ones((1, 1))],
            [np.ones((n, n)) - k * np.eye(n), np.ones((n, 1))],
        ]
    ) / k
    M = np.block([[np.ones((n, 1)), -np.eye(n)], [np.ones((1, 1)), np.ones((1, n))]])
    D = np.diag([1.0] * n + [0.0])
    return M, Minv, D


def mercedes_C_closed_form(E):
    """Rank-one difference block plus ``diag(E_2, ..., E_k, 0)``."""
    E = np.asarray(E, dtype=float)
    k = E.size
    C = np.zeros((k, k))
    for i in range(k - 1):
        C[i, : k - 1] = (E[0] - E[i + 1]) / k
    return C + np.diag(np.append(E[1:], 0.0))


def mercedes_reduction_check(E, tol=1e-8):
    """Verify the block reduction ``B = M^{-1} C M`` for a Mercedes-type frame.

    Checks ``M^{-1} M = I``, ``G = M^{-1} D M``, ``C = D M E M^{-1} D``
    against its closed form, and that the eigenvalues of the leading
    ``(k-1) x (k-1)`` block of ``C`` agree with both :func:`mercedes_eigs`
    and a direct eigensolve of ``H``.
    """
    E = np.asarray(E, dtype=float)
    k = E.size
    M, Minv, D = mercedes_reduction_matrices(k)
    C = D @ M @ np.diag(E) @ Minv @ D
    inv_err = float(np.abs(Minv @ M - np.eye(k)).max())
    gram_err = float(np.abs(Minv @ D @ M - mercedes_gram(k)).max())
    closed_err = float(np.abs(C - mercedes_C_closed_form(E)).max())
    block = general_eigen(C[: k - 1, : k - 1]).values
    poly = mercedes_eigs(E).eigenvalues
    direct = spectrum_direct(LabeledFrame(mercedes_frame(k), E)).eigenvalues
    scale = 1.0 + float(np.abs(E).max())
    d_poly = matching_distance(block, poly.astype(complex)) / scale
    d_direct = matching_distance(np.sort(block.real), direct) / scale
    worst = max(inv_err, gram_err, closed_err, d_poly, d_direct)
    return {
        "check": "mercedes_reduction",
        "pass": bool(worst <= tol),
        "max_violation": worst,
        "details": {
            "k": k,
            "inverse_error": inv_err,
            "gram_factorization_error": gram_err,
            "C_closed_form_error": closed_err,
            "C_vs_poly": d_poly,
            "C_vs_direct": d_direct,
            "eigenvalues": [float(x) for x in np.sort(block.real)],
        },
    }


# conference matrices ----------------------------------------------------------


def _is_prime(n):
    if n < 2:
        return False
    return all(n % q for q in range(2, int(math.isqrt(n)) + 1))


def quadratic_character(p):
    """Legendre symbol ``chi(x)`` for ``x = 0..p-1``."""
    squares = {(x * x) % p for x in range(1, p)}
    return np.array([0] + [1 if x in squares else -1 for x in range(1, p)], dtype=int)


def conference_matrix(N):
    """Symmetric Paley conference matrix of order ``N = p + 1``, ``p = 1 (mod 4)`` prime.

    ``N = 2`` returns ``[[0, 1], [1, 0]]``.
    """
    if N == 2:
        return np.array([[0, 1], [1, 0]], dtype=int)
    p = N - 1
    if not (_is_prime(p) and p % 4 == 1):
        raise UnsupportedOrder(
            f"order {N} is not p+1 for a prime p = 1 (mod 4); only symmetric Paley orders are built"
        )
    chi = quadratic_character(p)
    idx = np.arange(p)
    Q = chi[(idx[None, :] - idx[:, None]) % p]
    C = np.zeros((N, N), dtype=int)
    C[0, 1:] = 1
    C[1:, 0] = 1
    C[1:, 1:] = Q
    return C


def is_conference_matrix(C):
    """Zero diagonal, entries in {-1, 0, 1}, and ``C^T C = (N-1) I`` in integers."""
    C = np.asarray(C)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        return False
    N = C.shape[0]
    Ci = C.astype(np.int64)
    if not np.array_equal(Ci, C) or not set(np.unique(Ci)) <= {-1, 0, 1}:
        return False
    return bool(np.all(np.diag(Ci) == 0) and np.array_equal(Ci.T @ Ci, (N - 1) * np.eye(N, dtype=np.int64)))


def conference_gram(C):
    """Parseval Gram ``(1/2)(alpha C + I)`` with ``alpha = 1/sqrt(N-1)``."""
    C = np.asarray(C)
    N = C.shape[0]
    if N % 2:
        raise OddOrder(f"conference matrix of odd order {N}")
    alpha = 1.0 / math.sqrt(N - 1)
    return 0.5 * (alpha * C + np.eye(N))


def grassmannian_from_conference(C):
    """Parseval frame of ``N`` vectors in ``R^{N/2}`` with Gram :func:`conference_gram`."""
    G = conference_gram(C)
    F = frame_from_gram(G, field="real")
    if F.dim != G.shape[0] // 2:
        raise UnsupportedOrder("conference Gram is not a projection of rank N/2; is C symmetric?")
    return F


R3_PRINTED_GRAM = (
    np.array(
        [
            [SQRT5, 1, 1, -1, 1, 1],
            [1, SQRT5, 1, -1, -1, -1],
            [1, 1, SQRT5, 1, 1, -1],
            [-1, -1, 1, SQRT5, 1, -1],
            [1, -1, 1, 1, SQRT5, 1],
            [1, -1, -1, -1, 1, SQRT5],
        ]
    )
    / (2.0 * SQRT5)
)


def r3_unnormalized_vectors():
    """``f_1, ..., f_6`` built from the golden ratio."""
    b = BETA
    return np.array(
        [[b, 1, 0], [b, -1, 0], [1, 0, b], [-1, 0, b], [0, b, 1], [0, b, -1]], dtype=float
    )


def r3_conference_frame():
    """``e_j = f_j / (sqrt(2) ||f_j||)``: a Parseval frame of six vectors in ``R^3``."""
    f = r3_unnormalized_vectors()
    e = f / (math.sqrt(2.0) * np.linalg.norm(f, axis=1)[:, None])
    return Frame(e, "real")


def matches_r3_conference(F, tol=1e-10):
    return F.k == 6 and F.dim == 3 and bool(np.abs(gram(F) - R3_PRINTED_GRAM).max() <= tol)


@dataclass(frozen=True)
class ConferenceEigData:
    beta: float
    betabar: float
    alpha: float
    A: np.ndarray
    Abar: np.ndarray
    U: np.ndarray

    def M(self):
        I = np.eye(3)
        return np.block([[self.A, I], [self.Abar, I]])

    def Minv(self):
        I = np.eye(3)
        return np.block([[self.U, -self.U], [-self.Abar @ self.U, I + self.Abar @ self.U]])

    @staticmethod
    def D():
        return np.diag([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])


def conference_eig_data():
    """The ``3 x 3`` blocks ``A``, ``Abar`` and the printed ``U = (A - Abar)^{-1}``."""

    def blk(b):
        return np.array([[-b, -b, -1.0], [b, 1.0, b], [-1.0, -b, -b]])

    a = ALPHA
    U = 0.5 * np.array([[-a, a, a], [-a, -a, -a], [a, a, -a]])
    return ConferenceEigData(BETA, BETA_BAR, ALPHA, blk(BETA), blk(BETA_BAR), U)


def _check_six(E):
    E = [float(x) for x in E]
    if len(E) != 6:
        raise WrongLabelCount(f"need 6 labels ordered like f_1..f_6, got {len(E)}")
    return E


def conference_W(E):
    """``W_{i,j}(lam)`` as linear polynomials ``(const, slope)``, 1-based indices."""
    E = _check_six(E)
    W = {}
    for i in range(1, 4):
        for j in range(1, 4):
            if i + j == 4:
                W[i, j] = (E[j - 1] - E[2 + i], 0.0)
            else:
                W[i, j] = (BETA * E[j - 1] - BETA_BAR * E[2 + i], -1.0 / ALPHA)
    return W


def _perm_sign(perm):
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def conference_det_poly(E):
    """Cubic ``sum_sigma sgn(sigma) prod_i W_{i, sigma(i)}(lam)``."""
    W = conference_W(E)
    terms, signs = [], []
    for perm in itertools.permutations((1, 2, 3)):
        terms.append(_linear_product([W[i + 1, perm[i]] for i in range(3)]))
        signs.append(_perm_sign(perm))
    return EigPolynomial(_sum_polys(terms, signs), "conference_det")


def conference_eigs(E):
    """Eigenvalues of ``H`` for :func:`r3_conference_frame` with labels ``E``."""
    poly = conference_det_poly(E)
    roots = poly.roots()
    scale = float(np.abs(poly.coeffs).max())
    resid = max((abs(poly(r.real)) / scale for r in roots), default=0.0)
    extra = {"max_imag": float(np.abs(roots.imag).max(initial=0.0)), "label_map": label_map_r3()}
    return SpectrumReport("conference_det", np.sort(roots.real), resid, None, extra)


def label_map_r3():
    """Frame index to label index table; labels follow ``f_1..f_6`` order."""
    f = r3_unnormalized_vectors()
    return [{"frame_index": j, "label_index": j, "f": [float(x) for x in f[j]]} for j in range(6)]


def conference_block_check(E, tol=1e-8):
    """Verify the block factorization behind the conference eigenvalue equation.

    Checks ``U = (A - Abar)^{-1}``, ``M^{-1} M = I``, ``G = M^{-1} D M``,
    ``D M E M^{-1} D = diag((A E1 - E2 Abar) U, 0)`` and that the eigenvalues
    of ``(A E1 - E2 Abar) U`` match a direct eigensolve of ``H``.
    """
    E = np.asarray(_check_six(E))
    cd = conference_eig_data()
    M, Minv, D = cd.M(), cd.Minv(), cd.D()
    G = gram(r3_conference_frame()).real
    u_err = float(np.abs(np.linalg.inv(cd.A - cd.Abar) - cd.U).max())
    inv_err = float(np.abs(Minv @ M - np.eye(6)).max())
    gram_err = float(np.abs(Minv @ D @ M - G).max())
    E1, E2 = np.diag(E[:3]), np.diag(E[3:])
    R = (cd.A @ E1 - E2 @ cd.Abar) @ cd.U
    C = D @ M @ np.diag(E) @ Minv @ D
    block_err = float(np.abs(C - np.block([[R, np.zeros((3, 3))], [np.zeros((3, 3)), np.zeros((3, 3))]])).max())
    block_eigs = general_eigen(R).values
    direct = spectrum_direct(LabeledFrame(r3_conference_frame(), E)).eigenvalues
    scale = 1.0 + float(np.abs(E).max())
    eig_err = matching_distance(block_eigs, direct.astype(complex)) / scale
    worst = max(u_err, inv_err, gram_err, block_err, eig_err)
    return {
        "check": "conference_block",
        "pass": bool(worst <= tol),
        "max_violation": worst,
        "details": {
            "U_inverse_error": u_err,
            "M_inverse_error": inv_err,
            "gram_factorization_error": gram_err,
            "block_form_error": block_err,
            "eigen_error": eig_err,
            "eigenvalues": [float(x) for x in np.sort(block_eigs.real)],
            "label_map": label_map_r3(),
        },
    }


def signed_permutation_equivalence(G1, G2, tol=1e-10):
    """``(perm, signs)`` with ``G2[a, b] = s_a s_b G1[perm[a], perm[b]]``, or None.

    Depth-first search; fine for the small orders used here.
    """
    G1 = np.asarray(G1)
    G2 = np.asarray(G2)
    n = G1.shape[0]
    if G2.shape != G1.shape:
        return None
    perm = [0] * n
    signs = [1] * n
    used = [False] * n

    def extend(a):
        if a == n:
            return True
        for cand in range(n):
            if used[cand] or abs(G1[cand, cand] - G2[a, a]) > tol:
                continue
            for s in (1, -1):
                ok = all(
                    abs(s * signs[b] * G1[cand, perm[b]] - G2[a, b]) <= tol for b in range(a)
                )
                if ok:
                    perm[a], signs[a], used[cand] = cand, s, True
                    if extend(a + 1):
                        return True
                    used[cand] = False
        return False

    if extend(0):
        return np.array(perm), np.array(signs)
    return None


# truncated infinite example ---------------------------------------------------


def rrr1_labeled_frame(N):
    """Truncation of the pair family ``gamma_n / (n+1)``, ``sqrt(1 - 1/(n+1)^2) gamma_n``.

    Labels are ``(n+1)^2`` on the short vectors and ``0`` on the long ones,
    ``n = 1..N``; ``H`` is then the identity.
    """
    if N < 1:
        raise ValueError("N must be positive")
    n = np.arange(1, N + 1, dtype=float)
    I = np.eye(N)
    short = I / (n + 1.0)[:, None]
    long_ = I * np.sqrt(1.0 - 1.0 / (n + 1.0) ** 2)[:, None]
    V = np.vstack([short, long_])
    labels = np.concatenate([(n + 1.0) ** 2, np.zeros(N)])
    return LabeledFrame(Frame(V, "real"), labels)


def two_ray_example_frame():
    """Three vectors on two orthogonal rays of ``C^2``: ``sqrt(2/3) d1``, ``sqrt(1/3) d1``, ``d2``."""
    V = np.array([[math.sqrt(2.0 / 3.0), 0.0], [math.sqrt(1.0 / 3.0), 0.0], [0.0, 1.0]])
    return Frame(V, "complex")
