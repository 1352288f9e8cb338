"""The operator ``H = sum_j E_j <., e_j> e_j`` of a labeled Parseval frame and
three independent ways of computing its spectrum.

In finite dimensions the two natural domains of ``H`` coincide with the
whole space, so ``H`` is simply a Hermitian ``d x d`` matrix. The Naimark
symmetric operator, whose domain is cut out by
``sum_j E_j <f, e_j> m_j = 0``, is exposed through
:func:`naimark_symmetric_domain`.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NotCommutative, NotDecomposable
from .frames import excess, gram, naimark_extend
from .numerics import general_eigen, hermitian_eigen, matching_distance, nullspace_orthonormal, opnorm
from .povm import ray_decomposition

METHODS = ("direct", "gram_reduction", "commutative_formula", "mercedes_poly", "conference_det")


def build_H(lf):
    """``sum_j E_j e_j e_j*`` as a ``d x d`` matrix."""
    T = lf.frame.synthesis_matrix
    return (T * lf.labels[None, :]) @ T.conj().T


def apply_H(lf, f):
    """``H f`` computed as synthesis of the labeled analysis coefficients."""
    coeffs = lf.frame.analysis_matrix @ np.asarray(f, dtype=complex)
    return lf.frame.synthesis_matrix @ (lf.labels * coeffs)


@dataclass(frozen=True, eq=False)
class SymmetricDomain:
    """Orthonormal columns spanning the domain of the Naimark symmetric operator."""

    basis: np.ndarray
    is_dense: bool
    constraint: np.ndarray

    @property
    def dim(self):
        return self.basis.shape[1]


def naimark_symmetric_domain(lf, tol=1e-10):
    """Null space of ``f -> sum_j E_j <f, e_j> m_j`` for the Naimark complement ``m_j``.

    ``constraint`` is that map as a ``(k - d) x d`` matrix. The domain is the
    whole space exactly when the map vanishes.
    """
    ext = naimark_extend(lf.frame)
    Mc = ext.complement.T
    constraint = Mc @ (lf.labels[:, None] * lf.frame.analysis_matrix)
    scale = 1.0 + float(np.abs(lf.labels).max(initial=0.0))
    basis = nullspace_orthonormal(constraint, tol=tol, atol=tol * scale)
    return SymmetricDomain(basis, basis.shape[1] == lf.dim, constraint)


@dataclass(frozen=True)
class SpectrumReport:
    method: str
    eigenvalues: np.ndarray
    residual: float
    zero_rule: Optional[dict] = None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "method": self.method,
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "residual": float(self.residual),
        }
        if self.zero_rule is not None:
            out["zero_rule"] = dict(self.zero_rule)
        out.update(self.extra)
        return out


def spectrum_direct(lf):
    res = hermitian_eigen(build_H(lf))
    return SpectrumReport("direct", res.values, res.residual)


def gram_matrix_B(lf):
    """``B = G E G`` on ``C^k`` with ``E = diag(labels)``."""
    G = gram(lf.frame)
    return (G * lf.labels[None, :]) @ G


def spectrum_via_gram(lf, zero_tol=None):
    """Spectrum of ``H`` from the eigenvalues of ``B = G E G``.

    Nonzero eigenvalues of ``B`` are taken as they are. Zero belongs to the
    spectrum of ``H`` exactly when ``B`` has more (near-)zero eigenvalues
    than the excess ``k - d``; its multiplicity is the surplus.
    """
    B = gram_matrix_B(lf)
    normB = opnorm(B)
    if zero_tol is None:
        zero_tol = 1e-8 * (1.0 + normB)
    res = general_eigen(B)
    vals = res.values
    imag = float(np.abs(vals.imag).max(initial=0.0))
    real = np.real(vals)
    is_zero = np.abs(vals) <= zero_tol
    zero_mult = int(is_zero.sum())
    ex = excess(lf.frame)
    surplus = max(zero_mult - ex, 0)
    eig = np.sort(np.concatenate([real[~is_zero], np.zeros(surplus)]))
    rule = {
        "excess": ex,
        "zero_multiplicity": zero_mult,
        "zero_in_spectrum": zero_mult > ex,
        "zero_tol": zero_tol,
    }
    extra = {"max_imag": imag}
    if zero_mult < ex:
        extra["warning"] = "fewer near-zero eigenvalues of B than the excess"
    return SpectrumReport("gram_reduction", eig, res.residual, rule, extra)


def commutative_eigenvalues(rd, labels):
    """``lambda_i = sum_{j in group i} E_j |c_j|^2`` for each ray ``gamma_i``."""
    return np.array([sum(labels[j] * abs(c) ** 2 for j, c in g) for g in rd.groups])


def spectrum_commutative(lf, tol=1e-8):
    """Closed-form spectrum of ``H`` for a commutative POVM with distinct labels."""
    try:
        rd = ray_decomposition(lf, tol)
    except NotDecomposable as exc:
        raise NotCommutative(str(exc)) from exc
    lam = commutative_eigenvalues(rd, lf.labels)
    # each gamma_i is an eigenvector of H with eigenvalue lambda_i
    H = build_H(lf)
    G = rd.basis
    resid = np.linalg.norm(H @ G.T - G.T * lam[None, :], axis=0).max(initial=0.0)
    return SpectrumReport("commutative_formula", np.sort(lam), float(resid))


def spectrum_cross_check(lf, tol=None):
    """Run every applicable spectral route and compare them pairwise.

    Disagreement beyond ``1e-7 * (1 + max|E|)`` (or ``tol``) fails the check.
    """
    from . import special_frames as sf

    scale = 1.0 + float(np.abs(lf.labels).max(initial=0.0))
    if tol is None:
        tol = 1e-7 * scale
    reports = [spectrum_direct(lf), spectrum_via_gram(lf)]
    skipped = {}
    if lf.labels_distinct:
        try:
            reports.append(spectrum_commutative(lf))
        except NotCommutative:
            skipped["commutative_formula"] = "POVM is not commutative"
    else:
        skipped["commutative_formula"] = "labels are not pairwise distinct"
    if sf.is_mercedes_type(lf.frame):
        reports.append(sf.mercedes_eigs(lf.labels))
    else:
        skipped["mercedes_poly"] = "frame is not of Mercedes type"
    if sf.matches_r3_conference(lf.frame):
        reports.append(sf.conference_eigs(lf.labels))
    else:
        skipped["conference_det"] = "frame is not the R^3 conference frame"
    distances = {}
    worst = 0.0
    for a in range(len(reports)):
        for b in range(a + 1, len(reports)):
            dist = matching_distance(reports[a].eigenvalues, reports[b].eigenvalues)
            distances[f"{reports[a].method}~{reports[b].method}"] = dist
            worst = max(worst, dist)
    return {
        "check": "spectrum_cross_check",
        "pass": bool(worst <= tol),
        "max_violation": float(worst),
        "details": {
            "tolerance": tol,
            "methods": [r.method for r in reports],
            "distances": distances,
            "skipped": skipped,
            "spectra": {r.method: r.to_dict() for r in reports},
        },
    }
