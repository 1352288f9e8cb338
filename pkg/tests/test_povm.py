import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fpk import special_frames as sf
from fpk.errors import BadLambdaChoice, LabelsNotDistinct, NotCommutative, NotDecomposable, NotParseval, ShapeMismatch
from fpk.frames import Frame, orthonormal_basis, random_parseval
from fpk.povm import (
    JointMeasurability,
    LabeledFrame,
    commutative_frame,
    effect,
    effect_interval,
    fundamental_identity_residual,
    is_commutative,
    joint_measurability,
    povm_axioms_report,
    povm_spectrum,
    ray_decomposition,
    sharp_version,
    smearing_residual,
    three_quarters_margin,
)
from fpk.verify import random_commutative, random_generic

from conftest import labeled_frames, parseval_frames

JM = JointMeasurability


def test_labeled_frame_checks():
    with pytest.raises(NotParseval):
        LabeledFrame(Frame([[2.0, 0.0], [0.0, 1.0]]), [1, 2])
    with pytest.raises(ShapeMismatch):
        LabeledFrame(orthonormal_basis(2), [1, 2, 3])
    with pytest.raises(ValueError):
        LabeledFrame(orthonormal_basis(2), [1, np.nan])


def test_effect_examples(mercedes, two_ray):
    assert np.all(effect(mercedes, []) == 0)
    assert np.abs(effect(mercedes, [1, 2, 3, 99]) - np.eye(2)).max() < 1e-12
    assert np.allclose(effect(two_ray, [1.0]), np.diag([2 / 3, 0]), atol=1e-15)
    assert np.allclose(effect_interval(two_ray, 1.5, 3.0), effect(two_ray, [2, 3]))
    assert np.allclose(effect_interval(two_ray, 1.0, 3.0, closed=False), effect(two_ray, [2]))


def test_axioms_report(mercedes):
    rep = povm_axioms_report(mercedes)
    assert rep["pass"] and rep["details"]["n_atoms"] == 3 and rep["details"]["atom_ranks"] == [1, 1, 1]
    bad = LabeledFrame.unchecked(Frame([[1.0, 0.0], [0.0, 2.0]]), [1, 2])
    rep = povm_axioms_report(bad)
    assert not rep["pass"] and rep["details"]["normalization_violation"] > 1


def test_povm_spectrum():
    F = sf.example_mercedes_frame()
    assert povm_spectrum(LabeledFrame(F, [4, 4, 4])) == [4.0]
    assert povm_spectrum(LabeledFrame(F, [1, 2, 3])) == [1.0, 2.0, 3.0]
    assert povm_spectrum(LabeledFrame(F, [5, 5, 7])) == [5.0, 7.0]


def test_commutativity_examples(mercedes, two_ray):
    assert is_commutative(mercedes.relabel([2, 2, 2]))
    assert is_commutative(two_ray)
    assert not is_commutative(mercedes)


def test_ray_decomposition_examples(two_ray, mercedes):
    rd = ray_decomposition(two_ray)
    assert np.allclose(rd.basis, np.eye(2))
    g1, g2 = rd.groups
    assert [j for j, _ in g1] == [0, 1] and [j for j, _ in g2] == [2]
    assert np.allclose([c for _, c in g1], [np.sqrt(2 / 3), np.sqrt(1 / 3)])
    assert np.isclose(g2[0][1], 1)
    rd = ray_decomposition(LabeledFrame(orthonormal_basis(3), [3, 1, 2]))
    assert rd.sizes == [1, 1, 1] and np.allclose(rd.coefficients(), 1)
    with pytest.raises(NotDecomposable) as exc:
        ray_decomposition(mercedes)
    assert exc.value.pair == (0, 1)
    with pytest.raises(LabelsNotDistinct):
        ray_decomposition(mercedes.relabel([1, 1, 2]))


def test_sharp_version_examples(two_ray):
    sv = sharp_version(two_ray)
    assert np.allclose(sv.lambdas, [0.25, 0.75])
    assert np.abs(sv.kernel - [[2 / 3, 1 / 3, 0], [0, 0, 1]]).max() < 1e-12
    assert smearing_residual(two_ray, sv) < 1e-10
    assert np.allclose(sv.sharp_operator, np.diag([0.25, 0.75]))
    onb = LabeledFrame(orthonormal_basis(3), [3, 1, 2])
    sv = sharp_version(onb, [0.0, 0.5, 1.0])
    assert set(np.unique(sv.kernel)) == {0.0, 1.0}
    assert np.allclose(sv.kernel.sum(axis=0), 1)
    s = 1 / np.sqrt(2)
    doubled = LabeledFrame(Frame([[s, 0], [s, 0], [0, 1]]), [1, 2, 3])
    sv = sharp_version(doubled)
    assert np.allclose(sv.kernel, [[0.5, 0.5, 0], [0, 0, 1]])


def test_sharp_version_errors(two_ray, mercedes):
    with pytest.raises(NotCommutative):
        sharp_version(mercedes)
    with pytest.raises(BadLambdaChoice):
        sharp_version(two_ray, [0.5, 0.5])
    with pytest.raises(BadLambdaChoice):
        sharp_version(two_ray, [0.5, 1.5])
    with pytest.raises(BadLambdaChoice):
        sharp_version(two_ray, [0.5])


def test_identity_examples(rng):
    F = random_parseval(4, 7, rng)
    f = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert fundamental_identity_residual(F, range(7), f) < 1e-12
    B = orthonormal_basis(3)
    assert fundamental_identity_residual(B, [0, 2], [1, 2j, 3]) < 1e-14
    assert fundamental_identity_residual(F, [0, 3, 5], f) < 1e-10
    assert three_quarters_margin(F, range(7), f) == pytest.approx(np.vdot(f, f).real / 4)
    assert three_quarters_margin(F, [1], np.zeros(4)) == 0
    with pytest.raises(NotParseval):
        three_quarters_margin(Frame([[2.0]]), [0], [1.0])


def test_joint_examples(mercedes):
    F = mercedes.frame
    assert joint_measurability(mercedes, LabeledFrame(F, [7, 8, 9])) == JM.JOINTLY_MEASURABLE
    t = 0.4
    R = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
    rot = LabeledFrame(Frame(F.vectors.real @ R.T, "real"), [4, 5, 6])
    assert joint_measurability(mercedes, rot) == JM.NOT_JOINTLY_MEASURABLE
    ph = LabeledFrame(F.with_phases([0.5, -1.0, 2.5]), [1, 2, 3])
    assert joint_measurability(mercedes, ph) == JM.JOINTLY_MEASURABLE
    assert joint_measurability(mercedes.relabel([1, 1, 2]), rot) == JM.OUTSIDE_CRITERIA
    with pytest.raises(ShapeMismatch):
        joint_measurability(mercedes, LabeledFrame(orthonormal_basis(2), [1, 2]))


def test_commutative_frame_generator(rng):
    F, truth = commutative_frame([2, 1, 3], rng)
    assert F.k == 6 and F.dim == 3
    assert np.allclose(truth.reconstruct(), F.vectors)
    assert np.allclose(truth.basis @ truth.basis.conj().T, np.eye(3))


@given(labeled_frames(), st.integers(0, 2**32 - 1))
def test_phase_invariance(lf, seed):
    phases = np.random.default_rng(seed).uniform(0, 2 * np.pi, lf.k)
    lf2 = lf.with_phases(phases)
    for v in lf.distinct_labels[:4]:
        assert np.abs(effect(lf, [v]) - effect(lf2, [v])).max() <= 1e-14 * 10


@given(labeled_frames(k_max=8))
def test_additivity_and_complement(lf):
    labels = list(lf.distinct_labels)
    I = np.eye(lf.dim)
    for r in range(len(labels) + 1):
        for delta in itertools.islice(itertools.combinations(labels, r), 6):
            rest = [v for v in labels if v not in delta]
            total = effect(lf, delta) + effect(lf, rest)
            assert np.abs(effect(lf, labels) - total).max() < 1e-14 * 10
            assert np.abs(effect(lf, rest) - (I - effect(lf, delta))).max() < 1e-12


@given(st.integers(0, 2**32 - 1))
def test_commutative_iff_decomposable(seed):
    r = np.random.default_rng(seed)
    lf, truth = random_commutative(r)
    assert is_commutative(lf)
    assert ray_decomposition(lf).partition() == truth.partition()
    g = random_generic(r)
    assert not is_commutative(g)
    with pytest.raises(NotDecomposable):
        ray_decomposition(g)


@given(st.integers(0, 2**32 - 1))
def test_sharp_version_properties(seed):
    lf, _ = random_commutative(np.random.default_rng(seed))
    sv = sharp_version(lf)
    assert np.abs(sv.kernel.sum(axis=1) - 1).max() < 1e-12
    assert smearing_residual(lf, sv) < 1e-10


@given(parseval_frames(), st.integers(0, 2**32 - 1))
def test_identity_properties(F, seed):
    r = np.random.default_rng(seed)
    J = np.flatnonzero(r.integers(2, size=F.k))
    f = r.normal(size=F.dim) + 1j * r.normal(size=F.dim)
    assert fundamental_identity_residual(F, J, f) < 1e-10
    assert three_quarters_margin(F, J, f) >= -1e-12 * np.vdot(f, f).real
