import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import haar_like_unitary, svd_rank
from samplers import commuting_normal_family
from vnideals import linalg
from vnideals.errors import PreconditionError, ShapeError
from vnideals.linalg import Tolerance

pytestmark = pytest.mark.usefixtures("backend")

E11 = np.diag([1.0, 0.0])
E22 = np.diag([0.0, 1.0])
HALF = np.full((2, 2), 0.5)  # projection onto (1, 1)/sqrt(2)


def mn(a):
    return float(np.max(np.abs(a)))


class TestTolerance:
    def test_defaults(self):
        assert Tolerance() == Tolerance(1e-9, 1e-9)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            Tolerance(eps=0.0)


class TestNumericalRank:
    def test_examples(self):
        assert linalg.numerical_rank(np.eye(2)) == 2
        assert linalg.numerical_rank(np.zeros((2, 2))) == 0
        assert linalg.numerical_rank(np.ones((3, 3))) == 1

    def test_rectangular(self):
        assert linalg.numerical_rank(np.array([[1, 2, 3], [2, 4, 6]])) == 1

    def test_pivot_floor_is_one(self):
        # entries far below rank_eps count as zero even for a tiny matrix
        assert linalg.numerical_rank(np.eye(2) * 1e-12) == 0

    @given(n=st.integers(1, 10), r=st.integers(0, 10), seed=st.integers(0, 10**6))
    @settings(max_examples=50, deadline=None)
    def test_agrees_with_svd(self, n, r, seed):
        rng = np.random.default_rng(seed)
        r = min(r, n)
        m = (rng.normal(size=(n, r)) + 1j * rng.normal(size=(n, r))) @ (rng.normal(size=(r, n)))
        assert linalg.numerical_rank(m) == svd_rank(m) == r

    @given(n=st.integers(1, 8), r=st.integers(0, 8), seed=st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_unitarily_invariant(self, n, r, seed):
        r = min(r, n)
        p = linalg.random_projection(n, r, seed)
        u = haar_like_unitary(n, np.random.default_rng(seed))
        assert linalg.numerical_rank(u @ p @ u.conj().T) == linalg.numerical_rank(p) == r


class TestIsProjection:
    def test_examples(self):
        assert linalg.is_projection(E11)
        assert linalg.is_projection(HALF)
        assert not linalg.is_projection(np.diag([1.0, 0.5]))

    def test_not_self_adjoint(self):
        assert not linalg.is_projection(np.array([[1.0, 1.0], [0.0, 0.0]]))

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            linalg.is_projection(np.ones((2, 3)))


def check_atoms(atoms, gens, n):
    for i, e in enumerate(atoms):
        assert mn(e @ e - e) <= 1e-8
        for f in atoms[i + 1:]:
            assert mn(e @ f) <= 1e-8
    assert mn(sum(atoms) - np.eye(n)) <= 1e-8
    for m in gens:
        lam = [np.trace(e @ m) / np.trace(e) for e in atoms]
        assert mn(sum(l * e for l, e in zip(lam, atoms)) - m) <= 1e-7


class TestJointSpectralAtoms:
    def test_diagonal(self):
        atoms = linalg.joint_spectral_atoms([np.diag([1.0, 2.0])])
        assert mn(atoms[0] - E11) < 1e-12 and mn(atoms[1] - E22) < 1e-12

    def test_empty(self):
        atoms = linalg.joint_spectral_atoms([], n=2)
        assert len(atoms) == 1 and mn(atoms[0] - np.eye(2)) < 1e-12

    def test_projection_splits_into_range_and_kernel(self):
        atoms = linalg.joint_spectral_atoms([HALF])
        assert len(atoms) == 2
        # eigenvalue 0 first
        assert mn(atoms[0] - (np.eye(2) - HALF)) < 1e-12
        assert mn(atoms[1] - HALF) < 1e-12

    def test_normal_non_hermitian(self):
        rot = np.array([[0, -1], [1, 0]], dtype=complex)  # eigenvalues +-i
        atoms = linalg.joint_spectral_atoms([rot])
        check_atoms(atoms, [rot], 2)
        assert len(atoms) == 2

    def test_non_commuting_rejected(self):
        with pytest.raises(PreconditionError, match="generators 0 and 1"):
            linalg.joint_spectral_atoms([E11, HALF])

    def test_non_normal_rejected(self):
        with pytest.raises(PreconditionError, match="generator 0 is not normal"):
            linalg.joint_spectral_atoms([np.array([[0, 1], [0, 0]])])

    @given(n=st.integers(1, 16), count=st.integers(1, 3), seed=st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_invariants(self, n, count, seed):
        gens = commuting_normal_family(n, seed, count)
        check_atoms(linalg.joint_spectral_atoms(gens), gens, n)

    def test_deterministic(self):
        gens = commuting_normal_family(6, 11, 2)
        a = linalg.joint_spectral_atoms(gens)
        b = linalg.joint_spectral_atoms(gens)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))


class TestRandom:
    def test_unit_scalar(self):
        u = linalg.random_unitary(1, 123)
        assert u.shape == (1, 1) and abs(abs(u[0, 0]) - 1) < 1e-15

    @pytest.mark.parametrize("n", [1, 2, 3, 8, 16, 32])
    def test_unitary(self, n):
        for seed in (42, 7, 2**63 + 5):
            u = linalg.random_unitary(n, seed)
            assert mn(u.conj().T @ u - np.eye(n)) <= 1e-10

    def test_deterministic(self):
        assert np.array_equal(linalg.random_unitary(3, 42), linalg.random_unitary(3, 42))
        assert not np.array_equal(linalg.random_unitary(3, 42), linalg.random_unitary(3, 43))

    def test_projection_edges(self):
        assert mn(linalg.random_projection(3, 0, 1)) == 0
        assert mn(linalg.random_projection(3, 3, 1) - np.eye(3)) < 1e-12

    def test_projection_rank(self):
        p = linalg.random_projection(4, 2, 7)
        assert linalg.is_projection(p) and linalg.numerical_rank(p) == 2

    def test_range_error(self):
        with pytest.raises(ValueError):
            linalg.random_projection(2, 3, 0)

    @given(n=st.integers(1, 16), r=st.integers(0, 16), seed=st.integers(0, 2**64 - 1))
    @settings(max_examples=50, deadline=None)
    def test_projection_property(self, n, r, seed):
        r = min(r, n)
        p = linalg.random_projection(n, r, seed)
        assert linalg.is_projection(p)
        assert linalg.numerical_rank(p) == r

    def test_derive_seed(self):
        assert linalg.derive_seed(1, 0) != linalg.derive_seed(1, 1)
        assert linalg.derive_seed(1, 0) != linalg.derive_seed(2, 0)
        assert linalg.derive_seed(5, 9) == linalg.derive_seed(5, 9)


class TestRangeMatchingUnitary:
    def test_identity_case(self):
        u = linalg.range_matching_unitary(E11, E11)
        assert mn(u @ E11 @ u.conj().T - E11) <= 1e-7

    def test_swap(self):
        u = linalg.range_matching_unitary(E11, E22)
        assert mn(u @ E11 @ u.conj().T - E22) <= 1e-7
        # a permutation up to phases
        np.testing.assert_allclose(np.abs(u), [[0, 1], [1, 0]], atol=1e-12)

    def test_to_diagonal_line(self):
        u = linalg.range_matching_unitary(E11, HALF)
        assert mn(u @ E11 @ u.conj().T - HALF) <= 1e-7
        assert mn(u.conj().T @ u - np.eye(2)) <= 1e-10

    def test_rank_mismatch(self):
        with pytest.raises(PreconditionError):
            linalg.range_matching_unitary(E11, np.eye(2))

    @given(n=st.integers(1, 12), r=st.integers(0, 12), s1=st.integers(0, 10**9), s2=st.integers(0, 10**9))
    @settings(max_examples=50, deadline=None)
    def test_round_trip(self, n, r, s1, s2):
        r = min(r, n)
        p, q = linalg.random_projection(n, r, s1), linalg.random_projection(n, r, s2)
        u = linalg.range_matching_unitary(p, q)
        assert mn(u @ p @ u.conj().T - q) <= 1e-7
        assert mn(u.conj().T @ u - np.eye(n)) <= 1e-10
