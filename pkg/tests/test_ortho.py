import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nogo.distinguish import outcome_distribution
from nogo.ortho import (
    ParallelStatesError,
    idp_povm,
    iterate_squaring,
    orthogonalization_bound,
    orthogonalize_two_copy,
    overlap,
    overlap_reduction_bound,
    triple_product,
    triple_product_bound,
    two_copy_instrument,
)
from nogo.channels import check_channel
from nogo.qcore import projector, random_pure_state, random_unitary

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def pair(theta):
    return (np.array([np.cos(theta), np.sin(theta)], dtype=complex),
            np.array([np.sin(theta), np.cos(theta)], dtype=complex))


class TestIdp:
    def test_orthogonal(self):
        r = idp_povm(KET0, KET1)
        assert r.success_prob == pytest.approx(1.0, abs=1e-15)
        assert np.allclose(r.povm.elements[2], 0, atol=1e-15)

    def test_pi_over_8(self):
        r = idp_povm(*pair(np.pi / 8))
        assert r.success_prob == pytest.approx(1 - math.sqrt(2) / 2, abs=1e-12)
        assert r.success_prob == pytest.approx(0.292893, abs=1e-6)

    def test_parallel(self):
        with pytest.raises(ParallelStatesError):
            idp_povm(KET0, 1j * KET0)

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.integers(2, 4))
    def test_random_pairs(self, seed, dim):
        rng = np.random.default_rng(seed)
        u, v = random_pure_state(dim, rng), random_pure_state(dim, rng)
        r = idp_povm(u, v)
        assert r.success_prob == pytest.approx(1 - overlap(u, v), abs=1e-10)
        assert outcome_distribution(projector(u), r.povm)[1] <= 1e-12
        assert outcome_distribution(projector(v), r.povm)[0] <= 1e-12


class TestOrthogonalization:
    def test_bound_spots(self):
        assert orthogonalization_bound(KET0, KET1) == 1.0
        assert orthogonalization_bound(*pair(np.pi / 8)) == pytest.approx(0.5, abs=1e-15)
        assert orthogonalization_bound(KET0, KET0) == 0.0

    def test_two_copy_pi_over_8(self):
        p, o1, o2 = orthogonalize_two_copy(*pair(np.pi / 8))
        assert p == pytest.approx(0.5, abs=1e-12)
        assert abs(np.vdot(o1, o2)) <= 1e-12

    def test_two_copy_orthogonal(self):
        assert orthogonalize_two_copy(KET0, KET1)[0] == pytest.approx(1.0, abs=1e-15)

    def test_instrument_is_valid_operation(self):
        v = check_channel(two_copy_instrument(*pair(0.3)))
        assert v.is_cp and v.is_trace_nonincreasing and not v.is_tp

    @settings(max_examples=50, deadline=None)
    @given(seeds)
    def test_saturates_bound(self, seed):
        rng = np.random.default_rng(seed)
        u, v = random_pure_state(2, rng), random_pure_state(2, rng)
        p, o1, o2 = orthogonalize_two_copy(u, v)
        assert p == pytest.approx(orthogonalization_bound(u, v), abs=1e-10)
        assert abs(np.vdot(o1, o2)) <= 1e-12

    def test_reduction_bound(self):
        assert overlap_reduction_bound(0.5, 0.0) == 0.5
        assert overlap_reduction_bound(0.5, 0.5) == 1.0


class TestSquaring:
    def test_pi_over_8(self):
        t = np.pi / 8
        (r,) = iterate_squaring(*pair(t), 1)
        c2, s2 = np.cos(t) ** 2, np.sin(t) ** 2
        assert r.overlap == pytest.approx(2 * c2 * s2 / (c2**2 + s2**2), abs=1e-12)
        assert r.overlap == pytest.approx(1 / 3, abs=1e-12)
        assert r.cumulative_success == pytest.approx(0.75, abs=1e-12)

    def test_orthogonal_and_identical(self):
        assert all(r.overlap == pytest.approx(0, abs=1e-15) for r in iterate_squaring(KET0, KET1, 4))
        u = pair(0.3)[0]
        assert all(r.overlap == pytest.approx(1, abs=1e-12) for r in iterate_squaring(u, u, 4))

    def test_each_round_saturates_separation_bound(self):
        for theta in np.linspace(0.05, 0.7, 10):
            u, v = pair(theta)
            s_prev, cum_prev = overlap(u, v), 1.0
            for r in iterate_squaring(u, v, 4):
                step = r.cumulative_success / cum_prev
                bound = overlap_reduction_bound(s_prev**2, r.overlap)
                assert step == pytest.approx(bound, abs=1e-10)
                s_prev, cum_prev = r.overlap, r.cumulative_success

    def test_overlap_decreases(self):
        rounds = iterate_squaring(*pair(0.5), 5)
        overlaps = [r.overlap for r in rounds]
        assert all(b < a for a, b in zip(overlaps, overlaps[1:]))

    def test_k_validated(self):
        with pytest.raises(ValueError):
            iterate_squaring(KET0, KET1, 0)


class TestTripleProduct:
    def test_orthonormal(self):
        basis = list(np.eye(3))
        for m in (1, 2, 5):
            assert triple_product_bound(basis, m) == pytest.approx(0.0, abs=1e-15)

    def test_dependent(self):
        u, v = np.array([1, 0, 0]), np.array([0, 1, 0])
        assert triple_product_bound([u, v, (u + v) / np.sqrt(2)], 2) == 1.0

    def test_unitary_invariance(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            phis = [random_pure_state(3, rng) for _ in range(3)]
            u = random_unitary(3, rng)
            rotated = [u @ p for p in phis]
            assert abs(triple_product(rotated)) == pytest.approx(abs(triple_product(phis)), abs=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            triple_product_bound(list(np.eye(3)), 0)
        with pytest.raises(ValueError):
            triple_product_bound(list(np.eye(3)), 1, k=(1, 1))
