"""Named verification suites.

Each suite mixes fixed fixtures (exact values with known answers) and a
seeded randomized sweep. Every individual check carries its own tolerance;
a suite's ``max_violation`` is the largest ``violation / tolerance`` ratio
over its checks, so the suite passes exactly when ``max_violation <= 1``.
Checks that count misclassifications use tolerance ``0.5``.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import special_frames as sf
from .errors import NotCommutative, NotDecomposable, UnknownTheorem
from .frames import (
    Frame,
    coherence,
    excess,
    gram,
    is_parseval,
    naimark_extend,
    orthonormal_basis,
    random_parseval,
    random_unitary,
)
from .numerics import matching_distance
from .operators import (
    build_H,
    spectrum_commutative,
    spectrum_direct,
    spectrum_via_gram,
)
from .povm import (
    JointMeasurability,
    LabeledFrame,
    commutative_frame,
    commutator_defect,
    fundamental_identity_residual,
    ray_decomposition,
    sharp_version,
    smearing_residual,
    three_quarters_margin,
)

COUNT_TOL = 0.5
PRNG = "PCG64"


@dataclass
class Check:
    name: str
    violation: float
    tol: float
    source: str  # "fixture" or "random"
    info: dict = field(default_factory=dict)

    @property
    def ratio(self):
        return self.violation / self.tol

    def to_dict(self):
        out = {
            "name": self.name,
            "source": self.source,
            "violation": float(self.violation),
            "tol": float(self.tol),
            "pass": bool(self.violation <= self.tol),
        }
        out.update(self.info)
        return out


class _Checks(list):
    def add(self, name, violation, tol, source="random", **info):
        self.append(Check(name, float(violation), float(tol), source, info))


# random instances ---------------------------------------------------------------


def random_labels(rng, k, lo=-10.0, hi=10.0):
    return rng.uniform(lo, hi, size=k)


def random_labeled_frame(rng, d_max=6, k_max=12, force_zero=False, real=None):
    """Random Parseval frame with labels in ``[-10, 10]``.

    With ``force_zero`` the frame is a rotated direct sum of a random
    Parseval frame in dimension ``d - 1`` and a single unit vector labeled
    ``0``, so ``0`` is an eigenvalue of ``H``.
    """
    if real is None:
        real = bool(rng.integers(2))
    if force_zero:
        d = int(rng.integers(2, d_max + 1))
        k = int(rng.integers(d, k_max + 1))
        inner = random_parseval(d - 1, k - 1, rng, real).vectors
        V = np.zeros((k, d), dtype=complex)
        V[: k - 1, : d - 1] = inner
        V[k - 1, d - 1] = 1.0
        U = random_unitary(d, rng, real)
        V = V @ U.T
        labels = random_labels(rng, k)
        labels[k - 1] = 0.0
        order = rng.permutation(k)
        F = Frame(V[order], "real" if real else "complex")
        return LabeledFrame(F, labels[order])
    d = int(rng.integers(1, d_max + 1))
    k = int(rng.integers(d, k_max + 1))
    return LabeledFrame(random_parseval(d, k, rng, real), random_labels(rng, k))


def random_group_sizes(rng, d_max=5, r_max=3):
    d = int(rng.integers(1, d_max + 1))
    return [int(r) for r in rng.integers(1, r_max + 1, size=d)]


def random_commutative(rng, d_max=5, r_max=3):
    """Commutative labeled frame with distinct labels and its ground truth."""
    sizes = random_group_sizes(rng, d_max, r_max)
    F, truth = commutative_frame(sizes, rng, real=bool(rng.integers(2)))
    return LabeledFrame(F, random_labels(rng, F.k)), truth


def _has_generic_pair(F, tol):
    V = F.vectors / F.norms[:, None]
    C = np.abs(V.conj() @ V.T)
    off = C[~np.eye(F.k, dtype=bool)]
    return bool(np.any((off > tol) & (off < 1.0 - tol)))


def random_generic(rng, tol=1e-8):
    """Random Parseval frame with distinct labels and a non-collinear, non-orthogonal pair."""
    while True:
        d = int(rng.integers(2, 6))
        k = int(rng.integers(d + 1, 11))
        F = random_parseval(d, k, rng, bool(rng.integers(2)))
        if _has_generic_pair(F, tol):
            return LabeledFrame(F, random_labels(rng, k))


# suites -----------------------------------------------------------------------------


def suite_naimark(rng, trials, **_):
    c = _Checks()
    ext = naimark_extend(sf.example_mercedes_frame())
    moduli = np.abs(ext.complement).ravel()
    c.add("mercedes_complement_dim", abs(ext.complement_dim - 1), COUNT_TOL, "fixture")
    c.add("mercedes_complement_moduli", np.abs(moduli - 1 / math.sqrt(3)).max(), 1e-12, "fixture")
    c.add("orthonormal_excess", excess(orthonormal_basis(4)), COUNT_TOL, "fixture")
    ext6 = naimark_extend(sf.r3_conference_frame())
    c.add("r3_extension_unitary", np.abs(ext6.extended @ ext6.extended.conj().T - np.eye(6)).max(),
          1e-12, "fixture")
    gram_err = dim_err = proj_err = 0.0
    for _ in range(trials):
        F = random_labeled_frame(rng).frame
        ext = naimark_extend(F)
        U = ext.extended
        gram_err = max(gram_err, float(np.abs(U.conj().T @ U - np.eye(F.k)).max()))
        dim_err += ext.complement_dim != excess(F)
        proj_err = max(proj_err, float(np.abs(ext.project().vectors - F.vectors).max()))
    c.add("extended_gram_identity", gram_err, 1e-12)
    c.add("complement_dim_equals_excess", dim_err, COUNT_TOL)
    c.add("projection_recovers_frame", proj_err, 1e-12)
    return c, {}


def suite_structure(rng, trials, tol=1e-8, **_):
    c = _Checks()
    ex = LabeledFrame(sf.two_ray_example_frame(), [1.0, 2.0, 3.0])
    rd = ray_decomposition(ex, tol)
    c.add("two_ray_partition", rd.partition() != {frozenset({0, 1}), frozenset({2})},
          COUNT_TOL, "fixture")
    c.add("two_ray_basis_canonical", np.abs(np.abs(rd.basis) - np.eye(2)).max(), 1e-12, "fixture")
    merc = LabeledFrame(sf.example_mercedes_frame(), [1.0, 2.0, 3.0])
    try:
        ray_decomposition(merc, tol)
        merc_wrong = 1
    except NotDecomposable:
        merc_wrong = 0
    c.add("mercedes_not_commutative", merc_wrong, COUNT_TOL, "fixture")
    wrong_pos = wrong_neg = disagree = 0
    recon = 0.0
    for _ in range(trials):
        lf, truth = random_commutative(rng)
        try:
            rd = ray_decomposition(lf, tol)
            wrong_pos += rd.partition() != truth.partition()
            recon = max(recon, float(np.abs(rd.reconstruct() - lf.frame.vectors).max()))
        except NotDecomposable:
            wrong_pos += 1
        disagree += commutator_defect(lf) > 1e-10
        lf = random_generic(rng, tol)
        try:
            ray_decomposition(lf, tol)
            wrong_neg += 1
        except NotDecomposable:
            pass
        disagree += commutator_defect(lf) <= 1e-10
    c.add("commutative_detected_with_groups", wrong_pos, COUNT_TOL)
    c.add("generic_detected_non_commutative", wrong_neg, COUNT_TOL)
    c.add("decomposition_reconstructs_frame", recon, 1e-10)
    c.add("atoms_commute_iff_decomposable", disagree, COUNT_TOL)
    return c, {"tol": tol}


def suite_sharp(rng, trials, tol=1e-8, **_):
    c = _Checks()
    ex = LabeledFrame(sf.two_ray_example_frame(), [1.0, 2.0, 3.0])
    sv = sharp_version(ex, [0.25, 0.75], tol)
    expected = np.array([[2 / 3, 1 / 3, 0.0], [0.0, 0.0, 1.0]])
    c.add("kernel_values", np.abs(sv.kernel - expected).max(), 1e-12, "fixture")
    c.add("sharp_operator_diagonal", np.abs(sv.sharp_operator - np.diag([0.25, 0.75])).max(),
          1e-12, "fixture")
    c.add("smearing_identity", smearing_residual(ex, sv), 1e-10, "fixture")
    rows = smear = spec = 0.0
    for _ in range(trials):
        lf, _truth = random_commutative(rng)
        sv = sharp_version(lf, None, tol)
        rows = max(rows, float(np.abs(sv.kernel.sum(axis=1) - 1.0).max()))
        smear = max(smear, smearing_residual(lf, sv))
        eig = np.linalg.eigvalsh(sv.sharp_operator)
        spec = max(spec, matching_distance(eig, sv.lambdas))
    c.add("kernel_rows_sum_to_one", rows, 1e-12)
    c.add("smearing_identity_random", smear, 1e-10)
    c.add("sharp_spectrum_is_lambdas", spec, 1e-12)
    return c, {}


def suite_identity(rng, trials, **_):
    c = _Checks()
    # the 3/4 bound is attained by an eigenvector of the partial frame operator for 1/2
    s = 1 / math.sqrt(2)
    F = Frame([[s, 0.0], [s, 0.0], [0.0, 1.0]])
    c.add("three_quarters_attained", abs(three_quarters_margin(F, [0], [1.0, 0.0])), 1e-15,
          "fixture")
    merc = sf.example_mercedes_frame()
    c.add("mercedes_identity", fundamental_identity_residual(merc, [0], [0.3, -0.7]), 1e-12,
          "fixture")
    resid = 0.0
    neg = 0.0
    for _ in range(trials):
        F = random_labeled_frame(rng).frame
        J = np.flatnonzero(rng.integers(2, size=F.k))
        f = rng.normal(size=F.dim) + 1j * rng.normal(size=F.dim)
        f /= np.linalg.norm(f)
        resid = max(resid, fundamental_identity_residual(F, J, f))
        neg = max(neg, -three_quarters_margin(F, J, f))
    c.add("identity_residual", resid, 1e-10)
    c.add("three_quarters_margin_deficit", max(neg, 0.0), 1e-12)
    return c, {}


def suite_joint(rng, trials, tol=1e-8, **_):
    from .povm import joint_measurability

    c = _Checks()
    JM = JointMeasurability.JOINTLY_MEASURABLE
    NJM = JointMeasurability.NOT_JOINTLY_MEASURABLE
    OUT = JointMeasurability.OUTSIDE_CRITERIA
    ex = LabeledFrame(sf.two_ray_example_frame(), [1.0, 2.0, 3.0])
    ex2 = LabeledFrame(ex.frame.with_phases([0.3, 1.1, -2.0]), [5.0, 6.0, 7.0])
    c.add("phases_and_relabel", joint_measurability(ex, ex2, tol) != JM, COUNT_TOL, "fixture")
    merc = sf.example_mercedes_frame()

    def rotated(theta):
        R = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        return Frame(merc.vectors.real @ R.T, "real")

    a = LabeledFrame(merc, [1.0, 2.0, 3.0])
    c.add("mercedes_rotated_120", joint_measurability(a, LabeledFrame(rotated(2 * math.pi / 3), [4.0, 5.0, 6.0]), tol) != JM,
          COUNT_TOL, "fixture")
    c.add("mercedes_rotated_30", joint_measurability(a, LabeledFrame(rotated(math.pi / 6), [4.0, 5.0, 6.0]), tol) != NJM,
          COUNT_TOL, "fixture")
    wrong = 0
    for _ in range(trials):
        lf = random_labeled_frame(rng, d_max=5, k_max=9)
        F = lf.frame
        perm = rng.permutation(F.k)
        phases = np.exp(2j * np.pi * rng.random(F.k)) if F.field == "complex" else rng.choice([-1.0, 1.0], F.k)
        G = Frame(F.vectors[perm] * phases[:, None], F.field)
        lab2 = random_labels(rng, F.k)
        wrong += joint_measurability(lf, LabeledFrame(G, lab2), tol) != JM
        other = LabeledFrame(random_parseval(F.dim, F.k, rng, F.field == "real"), lab2)
        if F.k >= 2 and excess(other.frame) == excess(F):
            wrong += joint_measurability(lf, other, tol) != NJM
            if F.k >= 3:
                rep = lab2.copy()
                rep[1] = rep[0]
                wrong += joint_measurability(lf, LabeledFrame(other.frame, rep), tol) != OUT
    c.add("random_misclassifications", wrong, COUNT_TOL)
    return c, {"tol": tol}


def suite_gram_spectrum(rng, trials, **_):
    c = _Checks()
    lf = LabeledFrame(sf.example_mercedes_frame(), [1.0, 2.0, 3.0])
    expected = [2 - 1 / math.sqrt(3), 2 + 1 / math.sqrt(3)]
    c.add("mercedes_123", matching_distance(spectrum_via_gram(lf).eigenvalues, expected), 1e-12,
          "fixture")
    lf6 = LabeledFrame(sf.r3_conference_frame(), random_labels(rng, 6))
    c.add("conference_direct_vs_gram",
          matching_distance(spectrum_via_gram(lf6).eigenvalues, spectrum_direct(lf6).eigenvalues),
          1e-7, "fixture")
    worst = imag = 0.0
    for t in range(trials):
        lf = random_labeled_frame(rng, force_zero=bool(t % 4 == 0))
        rep = spectrum_via_gram(lf)
        worst = max(worst, matching_distance(rep.eigenvalues, spectrum_direct(lf).eigenvalues))
        imag = max(imag, rep.extra["max_imag"])
    c.add("gram_vs_direct", worst, 1e-7)
    c.add("gram_eigenvalues_real", imag, 1e-7)
    return c, {}


def _direct_zero_multiplicity(lf, zero_tol):
    return int(np.sum(np.abs(spectrum_direct(lf).eigenvalues) <= zero_tol))


def suite_zero_rule(rng, trials, **_):
    c = _Checks()
    merc = sf.example_mercedes_frame()
    rule = spectrum_via_gram(LabeledFrame(merc, [0.0, 0.0, 0.0])).zero_rule
    c.add("mercedes_all_zero_multiplicity", abs(rule["zero_multiplicity"] - rule["excess"] - 2),
          COUNT_TOL, "fixture")
    rule = spectrum_via_gram(LabeledFrame(merc, [1.0, 2.0, 3.0])).zero_rule
    c.add("mercedes_123_no_zero", rule["zero_in_spectrum"], COUNT_TOL, "fixture")
    member = mult = 0
    for t in range(trials):
        lf = random_labeled_frame(rng, force_zero=bool(t % 2 == 0))
        rep = spectrum_via_gram(lf)
        zr = rep.zero_rule
        m = _direct_zero_multiplicity(lf, zr["zero_tol"])
        member += zr["zero_in_spectrum"] != (m > 0)
        mult += (zr["zero_multiplicity"] - zr["excess"]) != m
    c.add("zero_membership_agrees", member, COUNT_TOL)
    c.add("zero_multiplicity_agrees", mult, COUNT_TOL)
    return c, {}


def suite_commutative_spectrum(rng, trials, **_):
    c = _Checks()
    ex = LabeledFrame(sf.two_ray_example_frame(), [1.0, 2.0, 3.0])
    rep = spectrum_commutative(ex)
    c.add("two_ray_eigenvalues", matching_distance(rep.eigenvalues, [4 / 3, 3.0]), 1e-12, "fixture")
    onb = LabeledFrame(orthonormal_basis(4), [3.0, -1.0, 0.5, 2.0])
    c.add("orthonormal_eigenvalues_are_labels",
          matching_distance(spectrum_commutative(onb).eigenvalues, onb.labels), 1e-12, "fixture")
    worst = resid = 0.0
    for _ in range(trials):
        lf, _truth = random_commutative(rng)
        rep = spectrum_commutative(lf)
        worst = max(worst, matching_distance(rep.eigenvalues, spectrum_direct(lf).eigenvalues))
        resid = max(resid, rep.residual)
    c.add("formula_vs_direct", worst, 1e-10)
    c.add("rays_are_eigenvectors", resid, 1e-10)
    return c, {}


def suite_mercedes(rng, trials, k_values=range(3, 9), **_):
    c = _Checks()
    merc = sf.example_mercedes_frame()
    closed = 0.0
    for _ in range(max(trials, 1)):
        E = random_labels(rng, 3)
        closed = max(closed, float(np.abs(build_H(LabeledFrame(merc, E)) - sf.mercedes_H_closed_form(E)).max()))
    c.add("operator_closed_form", closed, 1e-12, "fixture")
    expected = [2 - 1 / math.sqrt(3), 2 + 1 / math.sqrt(3)]
    c.add("mercedes_123_roots", matching_distance(sf.mercedes_eigs([1, 2, 3]).eigenvalues, expected),
          1e-12, "fixture")
    c.add("is_mercedes_type", not sf.is_mercedes_type(merc), COUNT_TOL, "fixture")
    poly = gramd = red = 0.0
    for k in k_values:
        F = sf.mercedes_frame(k)
        for _ in range(trials):
            E = random_labels(rng, k)
            lf = LabeledFrame(F, E)
            direct = spectrum_direct(lf).eigenvalues
            poly = max(poly, matching_distance(sf.mercedes_eigs(E).eigenvalues, direct))
            gramd = max(gramd, matching_distance(spectrum_via_gram(lf).eigenvalues, direct))
            red = max(red, sf.mercedes_reduction_check(E)["max_violation"])
    c.add("poly_roots_vs_direct", poly, 1e-7)
    c.add("gram_vs_direct", gramd, 1e-7)
    c.add("block_reduction", red, 1e-8)
    return c, {"k_values": list(k_values)}


def suite_conference(rng, trials, **_):
    c = _Checks()
    F = sf.r3_conference_frame()
    c.add("printed_gram", np.abs(gram(F) - sf.R3_PRINTED_GRAM).max(), 1e-12, "fixture")
    c.add("coherence", abs(coherence(F) - 1 / math.sqrt(5)), 1e-12, "fixture")
    c.add("parseval", not is_parseval(F), COUNT_TOL, "fixture")
    C6 = sf.conference_matrix(6)
    c.add("CtC_equals_5I", int(np.abs(C6.T @ C6 - 5 * np.eye(6, dtype=C6.dtype)).max()), COUNT_TOL,
          "fixture")
    bad_orders = [N for N in (2, 6, 14, 18, 30) if not sf.is_conference_matrix(sf.conference_matrix(N))]
    c.add("paley_orders", len(bad_orders), COUNT_TOL, "fixture")
    eq = sf.signed_permutation_equivalence(sf.conference_gram(C6), sf.R3_PRINTED_GRAM, 1e-12)
    c.add("printed_gram_is_paley6", eq is None, COUNT_TOL, "fixture")
    block = roots = 0.0
    for _ in range(trials):
        E = random_labels(rng, 6)
        block = max(block, sf.conference_block_check(E)["max_violation"])
        direct = spectrum_direct(LabeledFrame(F, E)).eigenvalues
        roots = max(roots, matching_distance(sf.conference_eigs(E).eigenvalues, direct))
    c.add("block_identity", block, 1e-8)
    c.add("det_roots_vs_direct", roots, 1e-7)
    return c, {}


def suite_rrr1(rng, trials, n_values=(16,), **_):
    c = _Checks()
    for N in n_values:
        lf = sf.rrr1_labeled_frame(N)
        H = build_H(lf)
        c.add(f"H_is_identity_N{N}", np.abs(H - np.eye(N)).max(), 1e-14, "fixture",
              max_label=float(lf.labels.max()))
        c.add(f"eigenvalues_one_N{N}", np.abs(spectrum_direct(lf).eigenvalues - 1.0).max(), 1e-12,
              "fixture")
    return c, {"n_values": list(n_values)}


SUITES = {
    "naimark": suite_naimark,
    "structure": suite_structure,
    "sharp": suite_sharp,
    "identity": suite_identity,
    "joint": suite_joint,
    "gram_spectrum": suite_gram_spectrum,
    "zero_rule": suite_zero_rule,
    "commutative_spectrum": suite_commutative_spectrum,
    "mercedes": suite_mercedes,
    "conference": suite_conference,
    "rrr1": suite_rrr1,
}

DEFAULT_TRIALS = {
    "naimark": 100,
    "structure": 100,
    "sharp": 50,
    "identity": 500,
    "joint": 50,
    "gram_spectrum": 200,
    "zero_rule": 200,
    "commutative_spectrum": 100,
    "mercedes": 50,
    "conference": 50,
    "rrr1": 1,
}


def run_suite(name, seed=0, trials=None, tol=1e-8, meta=True, **opts):
    """Run a named suite; returns a report dict (see module docstring)."""
    if name not in SUITES:
        raise UnknownTheorem(f"unknown verification {name!r}; choose from {sorted(SUITES)}")
    if trials is None:
        trials = DEFAULT_TRIALS[name]
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    checks, extra = SUITES[name](rng, trials, tol=tol, **opts)
    elapsed = (time.perf_counter() - t0) * 1000.0
    worst = max((ch.ratio for ch in checks), default=0.0)
    report = {
        "name": name,
        "pass": bool(worst <= 1.0),
        "max_violation": float(worst),
        "tol": 1.0,
        "details": {
            "seed": seed,
            "prng": PRNG,
            "trials": trials,
            "checks": [ch.to_dict() for ch in checks],
            **extra,
        },
    }
    if meta:
        report["elapsed_ms"] = elapsed
    return report
