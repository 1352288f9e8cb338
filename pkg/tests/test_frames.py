import numpy as np
import pytest
from hypothesis import given, strategies as st

from fpk import special_frames as sf
from fpk.errors import DimensionMismatch, NotNormalized, NotParseval, NotSpanning, NotTight, ZeroVector
from fpk.frames import (
    Frame,
    analysis,
    coherence,
    excess,
    frame_bounds,
    frame_from_gram,
    frames_equal_up_to_phase,
    gram,
    grassmannian_exists,
    is_equiangular,
    is_grassmannian_optimal,
    is_parseval,
    is_tight,
    naimark_extend,
    orthonormal_basis,
    random_parseval,
    random_unitary,
    rescale_to_parseval,
    synthesis,
    welch_coherence,
)

from conftest import parseval_frames

S5 = np.sqrt(5.0)


def r3_two_tight():
    """``e'_j = f_j / ||f_j||``: the unrescaled frame, tight with bound 2."""
    f = sf.r3_unnormalized_vectors()
    return Frame(f / np.linalg.norm(f, axis=1)[:, None], "real")


def test_frame_rejects_zero_vectors_and_imaginary_real_frames():
    with pytest.raises(ZeroVector):
        Frame([[1.0, 0.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        Frame([[1j, 0.0]], "real")
    F, keep = Frame.drop_zero_vectors([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
    assert F.k == 2 and list(keep) == [0, 2]


def test_frames_are_immutable():
    F = orthonormal_basis(2)
    with pytest.raises(ValueError):
        F.vectors[0, 0] = 5.0


def test_bounds():
    b = frame_bounds(orthonormal_basis(3))
    assert b.A == pytest.approx(1) and b.B == pytest.approx(1)
    b = frame_bounds(sf.example_mercedes_frame())
    assert abs(b.A - 1) < 1e-12 and abs(b.B - 1) < 1e-12
    b = frame_bounds(r3_two_tight())
    assert abs(b.A - 2) < 1e-12 and abs(b.B - 2) < 1e-12


def test_parseval_examples():
    assert is_parseval(orthonormal_basis(4))
    doubled = Frame(np.array([[1, 0], [1, 0], [0, 1], [0, 1]]) / np.sqrt(2))
    assert is_parseval(doubled)
    assert not is_parseval(r3_two_tight())


def test_rescale_examples():
    F = sf.example_mercedes_frame()
    assert np.allclose(rescale_to_parseval(F).vectors, F.vectors)
    P = rescale_to_parseval(r3_two_tight())
    assert np.abs(gram(P) - sf.R3_PRINTED_GRAM).max() < 1e-12
    assert np.allclose(rescale_to_parseval(Frame([[2, 0], [0, 2]])).vectors, np.eye(2))
    with pytest.raises(NotTight):
        rescale_to_parseval(Frame([[1, 0], [0, 2]]))


def test_excess_examples():
    assert excess(orthonormal_basis(5)) == 0
    for k in range(3, 9):
        assert excess(sf.mercedes_frame(k)) == 1
    assert excess(sf.r3_conference_frame()) == 3
    with pytest.raises(NotSpanning):
        excess(Frame([[1.0, 0.0], [2.0, 0.0]]))


def test_gram_examples():
    assert np.allclose(gram(orthonormal_basis(3)), np.eye(3))
    G = gram(sf.example_mercedes_frame())
    expected = np.full((3, 3), -1 / 3) + np.eye(3)
    assert np.abs(G - expected).max() < 1e-15
    G6 = gram(sf.r3_conference_frame())
    assert np.abs(G6 - sf.R3_PRINTED_GRAM).max() < 1e-12
    assert np.allclose(sf.R3_PRINTED_GRAM * 2 * S5, sf.R3_PRINTED_GRAM.T * 2 * S5)


def test_gram_orientation():
    F = Frame([[1.0, 0.0], [1j, 1.0]])
    G = gram(F)
    # entry (j, k) is <e_k, e_j>, linear in the first slot
    assert G[0, 1] == np.vdot(F.vectors[0], F.vectors[1])


def test_analysis_synthesis(rng):
    F = orthonormal_basis(3)
    f = np.array([1.0, -2.0, 0.5j])
    assert np.allclose(analysis(F, f), f)
    P = random_parseval(3, 7, rng)
    g = rng.normal(size=3) + 1j * rng.normal(size=3)
    assert np.abs(synthesis(P, analysis(P, g)) - g).max() < 1e-12
    c = rng.normal(size=7) + 1j * rng.normal(size=7)
    assert np.allclose(analysis(P, synthesis(P, c)), gram(P) @ c)
    with pytest.raises(DimensionMismatch):
        analysis(P, np.ones(2))
    with pytest.raises(DimensionMismatch):
        synthesis(P, np.ones(3))


def test_naimark_examples():
    ext = naimark_extend(orthonormal_basis(3))
    assert ext.complement_dim == 0
    assert np.allclose(ext.extended, np.eye(3))
    ext = naimark_extend(sf.example_mercedes_frame())
    assert ext.complement_dim == 1
    assert np.allclose(np.abs(ext.complement), 3**-0.5, atol=1e-12)
    ext = naimark_extend(sf.r3_conference_frame())
    assert ext.complement_dim == 3
    assert np.abs(ext.extended.conj().T @ ext.extended - np.eye(6)).max() < 1e-12
    with pytest.raises(NotParseval):
        naimark_extend(r3_two_tight())


def test_coherence_examples():
    F = orthonormal_basis(3)
    assert coherence(F) == 0 and is_equiangular(F) and is_grassmannian_optimal(F)
    M = sf.example_mercedes_frame().normalized()
    assert coherence(M) == pytest.approx(0.5, abs=1e-12)
    assert is_grassmannian_optimal(M)
    assert welch_coherence(3, 1) == pytest.approx(0.5)
    R = r3_two_tight()
    assert abs(coherence(R) - 1 / S5) < 1e-12
    assert is_grassmannian_optimal(R)
    with pytest.raises(NotNormalized):
        is_equiangular(sf.example_mercedes_frame())


def test_grassmannian_size_conditions():
    # complex: (k - e)^2 >= k + e; real: (k - e)^2 >= k
    assert grassmannian_exists(6, 3, "real") and grassmannian_exists(6, 3, "complex")
    assert grassmannian_exists(4, 2, "real")
    assert not grassmannian_exists(4, 2, "complex")
    assert grassmannian_exists(3, 1, "complex")


def test_frames_equal_up_to_phase():
    F = random_parseval(2, 4, np.random.default_rng(3))
    G = F.with_phases([0.1, 2.0, -1.0, 3.0])
    t = frames_equal_up_to_phase(F, G)
    assert t is not None
    assert np.allclose(np.exp(1j * t)[:, None] * F.vectors, G.vectors)
    assert frames_equal_up_to_phase(F, random_parseval(2, 4, np.random.default_rng(4))) is None


def test_frame_from_gram_round_trip(rng):
    F = random_parseval(3, 6, rng)
    H = frame_from_gram(gram(F))
    assert np.abs(gram(H) - gram(F)).max() < 1e-12


@given(parseval_frames())
def test_parseval_gram_is_projection(F):
    G = gram(F)
    assert np.abs(G @ G - G).max() < 1e-10
    assert abs(np.trace(G).real - F.dim) < 1e-10


@given(parseval_frames())
def test_naimark_projection_and_excess(F):
    ext = naimark_extend(F)
    assert np.array_equal(ext.project().vectors, F.vectors)
    assert ext.complement_dim == excess(F) == F.k - F.dim
    assert np.abs(ext.extended.conj().T @ ext.extended - np.eye(F.k)).max() < 1e-12


@given(st.integers(1, 5), st.floats(0.2, 5.0), st.integers(0, 2**32 - 1))
def test_rescale_keeps_angles(d, scale, seed):
    F = random_parseval(d, d + 2, np.random.default_rng(seed))
    T = F.scaled(scale)
    assert is_tight(T)
    P = rescale_to_parseval(T)
    assert is_parseval(P)
    assert abs(coherence(P) - coherence(F)) < 1e-12


@given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.booleans())
def test_first_rows_of_unitary_are_parseval(k, seed, real):
    U = random_unitary(k, np.random.default_rng(seed), real)
    assert np.abs(U @ U.conj().T - np.eye(k)).max() < 1e-12
    for d in range(1, k + 1):
        assert is_parseval(Frame(U[:d].T))
