"""POVMs generated by labeled Parseval frames.

For a Parseval frame ``{e_j}`` with real labels ``{E_j}`` the effect of a
label set ``delta`` is ``F(delta) = sum_{E_j in delta} e_j e_j*``. Label sets
are finite sets of label values; :func:`effect_interval` resolves an
interval to the labels it contains.
"""

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (
    BadLambdaChoice,
    LabelsNotDistinct,
    NotCommutative,
    NotDecomposable,
    NotParseval,
    ShapeMismatch,
)
from .frames import (
    Frame,
    excess,
    frames_equal_up_to_phase,
    is_parseval,
    random_unitary,
)
from .numerics import canonical_phase, hermitian_eigen

LABELED_PARSEVAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class LabeledFrame:
    """A Parseval frame together with one real label per vector.

    Labels need not be distinct. Pass ``check=False`` to skip the Parseval
    test, e.g. to build negative controls.
    """

    frame: Frame
    labels: np.ndarray
    check: bool = field(default=True, repr=False)
    tol: float = field(default=LABELED_PARSEVAL_TOL, repr=False)

    def __post_init__(self):
        labels = np.array(self.labels, dtype=float).ravel()
        if labels.shape != (self.frame.k,):
            raise ShapeMismatch(f"{labels.size} labels for {self.frame.k} vectors")
        if not np.all(np.isfinite(labels)):
            raise ValueError("labels must be finite")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        if self.check and not is_parseval(self.frame, self.tol):
            raise NotParseval("labeled frames must be Parseval")

    @classmethod
    def unchecked(cls, frame, labels):
        return cls(frame, labels, check=False)

    @property
    def k(self):
        return self.frame.k

    @property
    def dim(self):
        return self.frame.dim

    @property
    def distinct_labels(self):
        return np.unique(self.labels)

    @property
    def labels_distinct(self):
        return self.distinct_labels.size == self.k

    def relabel(self, labels):
        return LabeledFrame(self.frame, labels, self.check, self.tol)

    def with_phases(self, phases):
        return LabeledFrame(self.frame.with_phases(phases), self.labels, self.check, self.tol)


def _mask(lf, delta):
    delta = np.asarray(sorted(set(float(x) for x in delta)), dtype=float)
    return np.isin(lf.labels, delta)


def _sum_rank_one(F, mask):
    T = F.synthesis_matrix[:, mask]
    return T @ T.conj().T


def effect(lf, delta):
    """``F(delta)`` for a finite set of label values; ``F(empty) = 0``."""
    return _sum_rank_one(lf.frame, _mask(lf, delta))


def effect_interval(lf, lo, hi, closed=True):
    """Effect of the interval ``[lo, hi]`` (or ``(lo, hi)`` when ``closed=False``)."""
    if closed:
        inside = (lf.labels >= lo) & (lf.labels <= hi)
    else:
        inside = (lf.labels > lo) & (lf.labels < hi)
    return effect(lf, lf.labels[inside])


def atoms(lf):
    """``(label, L_label)`` for every distinct label, ascending."""
    return [(float(v), effect(lf, [v])) for v in lf.distinct_labels]


def _report(check, ok, violation, details):
    return {"check": check, "pass": bool(ok), "max_violation": float(violation), "details": details}


def povm_axioms_report(lf, tol=1e-10):
    """Positivity of every atom, additivity over disjoint label sets, total = I."""
    d = lf.dim
    at = atoms(lf)
    psd = 0.0
    ranks = []
    for _, L in at:
        vals = hermitian_eigen(L).values
        psd = max(psd, float(-vals.min()))
        ranks.append(int(np.sum(vals > 1e-10)))
    labels = [v for v, _ in at]
    additivity = 0.0
    for cut in range(1, len(labels)):
        lo, hi = labels[:cut], labels[cut:]
        diff = effect(lf, labels) - effect(lf, lo) - effect(lf, hi)
        additivity = max(additivity, float(np.abs(diff).max()))
    for (p, Lp), (q, Lq) in itertools.combinations(at, 2):
        diff = effect(lf, [p, q]) - Lp - Lq
        additivity = max(additivity, float(np.abs(diff).max()))
    total = sum((L for _, L in at), np.zeros((d, d), complex))
    normalization = float(np.linalg.norm(total - np.eye(d), 2))
    empty = float(np.abs(effect(lf, [])).max(initial=0.0))
    worst = max(psd, additivity, normalization, empty)
    details = {
        "psd_violation": psd,
        "additivity_violation": additivity,
        "normalization_violation": normalization,
        "empty_set_violation": empty,
        "n_atoms": len(at),
        "atom_ranks": ranks,
    }
    return _report("povm_axioms", worst <= tol, worst, details)


def povm_spectrum(lf, tol=1e-12):
    """Distinct labels whose atom is nonzero."""
    return [v for v, L in atoms(lf) if np.abs(L).max() > tol]


def commutator_defect(lf):
    """Largest spectral norm of ``[L_p, L_q]`` over pairs of distinct-label atoms."""
    at = [L for _, L in atoms(lf)]
    worst = 0.0
    for Lp, Lq in itertools.combinations(at, 2):
        worst = max(worst, float(np.linalg.norm(Lp @ Lq - Lq @ Lp, 2)))
    return worst


def is_commutative(lf, tol=1e-10):
    return commutator_defect(lf) <= tol


@dataclass(frozen=True, eq=False)
class RayDecomposition:
    """Orthonormal basis ``gamma_i`` with every frame vector ``e_j = c_j gamma_{p(j)}``.

    ``basis`` holds the ``gamma_i`` as rows; ``groups[i]`` lists the pairs
    ``(j, c_j)`` of frame indices collinear with ``gamma_i``.
    """

    basis: np.ndarray
    groups: tuple

    @property
    def sizes(self):
        return [len(g) for g in self.groups]

    def group_of(self):
        """Array ``p`` with ``p[j]`` the group index of frame vector ``j``."""
        k = sum(self.sizes)
        p = np.empty(k, dtype=int)
        for i, g in enumerate(self.groups):
            for j, _ in g:
                p[j] = i
        return p

    def coefficients(self):
        k = sum(self.sizes)
        c = np.empty(k, dtype=complex)
        for g in self.groups:
            for j, cj in g:
                c[j] = cj
        return c

    def reconstruct(self):
        """Frame vectors rebuilt as ``c_j gamma_{p(j)}`` (rows)."""
        return self.coefficients()[:, None] * self.basis[self.group_of()]

    def partition(self):
        return {frozenset(j for j, _ in g) for g in self.groups}


def ray_decomposition(lf, tol=1e-8, norm_tol=1e-8):
    """Split the frame into groups of vectors lying on mutually orthogonal rays.

    Greedy: take the first unassigned vector as the next ray ``gamma``; every
    unassigned vector must be collinear with ``gamma`` (sine of the angle at
    most ``tol``) or orthogonal to it (cosine at most ``tol``). Anything in
    between raises :class:`NotDecomposable`.
    """
    if not lf.labels_distinct:
        raise LabelsNotDistinct("ray decomposition assumes pairwise distinct labels")
    V = lf.frame.vectors
    norms = lf.frame.norms
    unassigned = list(range(lf.k))
    basis = []
    groups = []
    while unassigned:
        j0 = unassigned[0]
        gamma = canonical_phase(V[j0] / norms[j0])
        group = []
        rest = []
        for i in unassigned:
            c = np.vdot(gamma, V[i])
            sine = np.linalg.norm(V[i] - c * gamma) / norms[i]
            cosine = abs(c) / norms[i]
            if sine <= tol:
                group.append((i, complex(c)))
            elif cosine <= tol:
                rest.append(i)
            else:
                raise NotDecomposable(
                    f"vectors {j0} and {i} are neither collinear nor orthogonal "
                    f"(|cos| = {cosine:.3e})",
                    pair=(j0, i),
                )
        weight = sum(abs(c) ** 2 for _, c in group)
        if abs(weight - 1.0) > norm_tol:
            raise NotDecomposable(f"group of vector {j0} has squared weight {weight:.12g} != 1")
        basis.append(gamma)
        groups.append(tuple(group))
        unassigned = rest
    if len(basis) != lf.dim:
        raise NotDecomposable(f"found {len(basis)} rays in dimension {lf.dim}")
    return RayDecomposition(np.array(basis), tuple(groups))


def default_lambdas(n):
    """``(2i - 1) / (2n)`` for ``i = 1..n``."""
    return (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)


@dataclass(frozen=True, eq=False)
class SharpVersion:
    """Sharp operator ``sum_i lambda_i gamma_i gamma_i*`` and its smearing kernel.

    ``kernel[i, j]`` is ``mu_{E_j}(lambda_i)``.
    """

    lambdas: np.ndarray
    basis: np.ndarray
    kernel: np.ndarray
    labels: np.ndarray
    sharp_operator: np.ndarray

    def mu(self, delta):
        """``mu_delta(lambda_i)`` for every ``i``."""
        mask = _mask_labels(self.labels, delta)
        return self.kernel[:, mask].sum(axis=1)

    def smeared_effect(self, delta):
        """``sum_i mu_delta(lambda_i) gamma_i gamma_i*``."""
        w = self.mu(delta)
        G = self.basis
        return (G.T * w) @ G.conj()

    def spectral_projection(self, i):
        g = self.basis[i]
        return np.outer(g, g.conj())


def _mask_labels(labels, delta):
    return np.isin(labels, np.asarray(sorted(set(float(x) for x in delta)), dtype=float))


def sharp_version(lf, lambdas=None, tol=1e-8):
    """Sharp version of a commutative POVM with distinct labels."""
    try:
        rd = ray_decomposition(lf, tol)
    except NotDecomposable as exc:
        raise NotCommutative(str(exc)) from exc
    n = len(rd.groups)
    if lambdas is None:
        lambdas = default_lambdas(n)
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.shape != (n,):
        raise BadLambdaChoice(f"need {n} values, got {lambdas.size}")
    if np.unique(lambdas).size != n:
        raise BadLambdaChoice("values must be pairwise distinct")
    if lambdas.min() < 0.0 or lambdas.max() > 1.0:
        raise BadLambdaChoice("values must lie in [0, 1]")
    kernel = np.zeros((n, lf.k))
    for i, g in enumerate(rd.groups):
        for j, c in g:
            kernel[i, j] = abs(c) ** 2
    B = rd.basis
    H = (B.T * lambdas) @ B.conj()
    return SharpVersion(lambdas, B, kernel, np.array(lf.labels), H)


def smearing_residual(lf, sv, max_exhaustive=12):
    """Largest ``||F(delta) - smeared(delta)||`` over label subsets.

    All subsets when there are at most ``max_exhaustive`` distinct labels,
    otherwise singletons and their complements.
    """
    labels = list(lf.distinct_labels)
    if len(labels) <= max_exhaustive:
        subsets = itertools.chain.from_iterable(
            itertools.combinations(labels, r) for r in range(len(labels) + 1)
        )
    else:
        subsets = [[v] for v in labels] + [[w for w in labels if w != v] for v in labels]
    worst = 0.0
    for delta in subsets:
        diff = effect(lf, delta) - sv.smeared_effect(delta)
        worst = max(worst, float(np.linalg.norm(diff, 2)))
    return worst


def _check_parseval(F, tol):
    if not is_parseval(F, tol):
        raise NotParseval("identity requires a Parseval frame")


def _partial(F, J, f):
    T = F.synthesis_matrix[:, J]
    coeffs = T.conj().T @ f
    return float(np.sum(np.abs(coeffs) ** 2)), T @ coeffs


def fundamental_identity_residual(F, J_subset, f, tol=LABELED_PARSEVAL_TOL):
    """``|lhs - rhs|`` of the fundamental identity for the index subset ``J``.

    Each side is ``sum_{j in J} |<f, e_j>|^2 - ||sum_{j in J} <f, e_j> e_j||^2``,
    once for ``J`` and once for its complement.
    """
    _check_parseval(F, tol)
    f = np.asarray(f, dtype=complex)
    J = np.zeros(F.k, dtype=bool)
    J[list(J_subset)] = True
    s1, v1 = _partial(F, J, f)
    s2, v2 = _partial(F, ~J, f)
    lhs = s1 - float(np.vdot(v1, v1).real)
    rhs = s2 - float(np.vdot(v2, v2).real)
    return abs(lhs - rhs)


def three_quarters_margin(F, J_subset, f, tol=LABELED_PARSEVAL_TOL):
    """``sum_{J} |<f,e_j>|^2 + ||sum_{J^c} <f,e_j> e_j||^2 - (3/4)||f||^2`` (never negative)."""
    _check_parseval(F, tol)
    f = np.asarray(f, dtype=complex)
    J = np.zeros(F.k, dtype=bool)
    J[list(J_subset)] = True
    s1, _ = _partial(F, J, f)
    _, v2 = _partial(F, ~J, f)
    return s1 + float(np.vdot(v2, v2).real) - 0.75 * float(np.vdot(f, f).real)


class JointMeasurability(enum.Enum):
    JOINTLY_MEASURABLE = "JointlyMeasurable"
    NOT_JOINTLY_MEASURABLE = "NotJointlyMeasurable"
    OUTSIDE_CRITERIA = "OutsideCriteria"


def phase_bijection(F1, F2, tol=1e-8) -> Optional[np.ndarray]:
    """Permutation ``perm`` with ``F2[perm[j]] = phase * F1[j]`` for all ``j``, or None.

    The cost of pairing ``j`` with ``i`` is the phase-optimal distance
    ``sqrt(||e_j||^2 + ||f_i||^2 - 2 |<e_j, f_i>|)``, read off the cross-Gram
    moduli; an optimal assignment is accepted when every matched pair is
    within ``tol`` after phase alignment.
    """
    if F1.vectors.shape != F2.vectors.shape:
        return None
    cross = np.abs(F1.vectors.conj() @ F2.vectors.T)
    n1 = F1.norms[:, None] ** 2
    n2 = F2.norms[None, :] ** 2
    cost = np.sqrt(np.maximum(n1 + n2 - 2.0 * cross, 0.0))
    rows, cols = linear_sum_assignment(cost)
    # the squared-distance formula cancels badly near zero; measure matched pairs directly
    A = F1.vectors[rows]
    B = F2.vectors[cols]
    inner = np.sum(A.conj() * B, axis=1)
    phase = np.where(np.abs(inner) > 0, inner / np.where(inner == 0, 1, np.abs(inner)), 1.0)
    resid = np.linalg.norm(B - phase[:, None] * A, axis=1)
    if resid.max(initial=0.0) > tol:
        return None
    perm = np.empty(F1.k, dtype=int)
    perm[rows] = cols
    return perm


def joint_measurability(lf1, lf2, tol=1e-8):
    """Joint measurability of two frame POVMs, decided where the theory covers it.

    Frames that agree vector by vector up to unimodular phases are always
    jointly measurable. When both label families are pairwise distinct the
    POVMs are jointly measurable exactly when some bijection of indices
    matches the vectors up to phase. Every other situation is reported as
    outside the covered criteria.
    """
    F1, F2 = lf1.frame, lf2.frame
    if F1.dim != F2.dim or F1.k != F2.k:
        raise ShapeMismatch(f"frames of shape {F1.vectors.shape} and {F2.vectors.shape}")
    if excess(F1) != excess(F2):
        raise ShapeMismatch("frames have different excess")
    if frames_equal_up_to_phase(F1, F2, tol) is not None:
        return JointMeasurability.JOINTLY_MEASURABLE
    if lf1.labels_distinct and lf2.labels_distinct:
        if phase_bijection(F1, F2, tol) is not None:
            return JointMeasurability.JOINTLY_MEASURABLE
        return JointMeasurability.NOT_JOINTLY_MEASURABLE
    return JointMeasurability.OUTSIDE_CRITERIA


def commutative_frame(group_sizes, rng, real=False, weights="random"):
    """Frame made of groups of vectors on the rays of a random orthonormal basis.

    Returns the frame (vector order shuffled) and the ground-truth
    decomposition that generated it. ``weights="equal"`` uses coefficients
    ``1/sqrt(r_i)`` in group ``i``.
    """
    sizes = [int(r) for r in group_sizes]
    if not sizes or min(sizes) < 1:
        raise ValueError("group sizes must be positive")
    d = len(sizes)
    U = random_unitary(d, rng, real)
    rows = []
    owner = []
    coeffs = []
    for i, r in enumerate(sizes):
        if weights == "equal":
            c = np.full(r, 1.0 / np.sqrt(r))
        else:
            c = rng.uniform(0.2, 1.0, size=r)
            c /= np.linalg.norm(c)
        for cj in c:
            rows.append(cj * U[:, i])
            owner.append(i)
            coeffs.append(cj)
    order = rng.permutation(len(rows))
    V = np.array(rows)[order]
    owner = np.array(owner)[order]
    coeffs = np.array(coeffs)[order]
    groups = tuple(
        tuple((int(j), complex(coeffs[j])) for j in np.flatnonzero(owner == i)) for i in range(d)
    )
    frame = Frame(V, "real" if real else "complex")
    return frame, RayDecomposition(U.T.copy(), groups)
