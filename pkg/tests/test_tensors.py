import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddmech.tensors import (
    NonInvertibleDeformation,
    NonPositiveDefinite,
    PhasePoint,
    SymTensor2,
    from_mandel,
    gl_from_grad,
    green_lagrange,
    invariants_batch,
    invariants_plane_strain,
    right_cauchy_green,
    rotate_pair,
    rotate_sym,
    shifted_invariants,
    to_mandel,
    voigt_inner,
)

from helpers import random_spd_batch


class TestGreenLagrange:
    def test_simple_shear(self):
        e = green_lagrange(np.array([[0.0, 0.1], [0.0, 0.0]]))
        np.testing.assert_allclose([e.a11, e.a22, e.a12], [0.0, 0.005, 0.05], atol=1e-15)

    def test_uniaxial_stretch(self):
        e = green_lagrange(np.diag([0.02, 0.0]))
        assert e.a11 == pytest.approx(0.0202, abs=1e-15)
        assert e.a22 == 0.0 and e.a12 == 0.0

    @given(st.floats(-math.pi, math.pi))
    def test_exact_for_pure_rotation(self, theta):
        c, s = math.cos(theta), math.sin(theta)
        q = np.array([[c, -s], [s, c]])
        e = green_lagrange(q - np.eye(2))
        assert abs(e.a11) < 1e-12 and abs(e.a22) < 1e-12 and abs(e.a12) < 1e-12

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(3)
        grads = rng.normal(scale=0.3, size=(40, 2, 2))
        batch = gl_from_grad(grads)
        for g, row in zip(grads, batch):
            e = green_lagrange(g)
            np.testing.assert_allclose(row, [e.a11, e.a22, e.a12], rtol=1e-14, atol=1e-16)


class TestRightCauchyGreen:
    def test_identity(self):
        c = right_cauchy_green(np.eye(2))
        assert (c.a11, c.a22, c.a12) == (1.0, 1.0, 0.0)

    def test_rejects_inverted(self):
        with pytest.raises(NonInvertibleDeformation):
            right_cauchy_green(np.diag([-1.0, 1.0]))
        with pytest.raises(NonInvertibleDeformation):
            right_cauchy_green(np.array([[1.0, 2.0], [1.0, 2.0]]))


class TestInvariants:
    def test_undeformed(self):
        assert invariants_plane_strain(SymTensor2(1.0, 1.0, 0.0)) == (3.0, 3.0, 1.0)

    def test_diagonal_stretch(self):
        inv = invariants_plane_strain(SymTensor2(4.0, 1.0, 0.0))
        assert inv == (6.0, 9.0, 4.0)

    def test_rejects_non_spd(self):
        with pytest.raises(NonPositiveDefinite):
            invariants_plane_strain(SymTensor2(1.0, 1.0, 1.5))
        with pytest.raises(NonPositiveDefinite):
            invariants_plane_strain(SymTensor2(-1.0, -1.0, 0.0))

    def test_against_3d_eigen_oracle(self):
        rng = np.random.default_rng(11)
        for cvec in random_spd_batch(rng, 50):
            c3 = np.zeros((3, 3))
            c3[:2, :2] = SymTensor2.from_vec(cvec).as_matrix()
            c3[2, 2] = 1.0
            lam = np.linalg.eigvalsh(c3)
            i1 = lam.sum()
            i2 = lam[0] * lam[1] + lam[1] * lam[2] + lam[0] * lam[2]
            i3 = lam.prod()
            got = invariants_plane_strain(SymTensor2.from_vec(cvec))
            np.testing.assert_allclose(got, [i1, i2, i3], rtol=1e-12)

    def test_shifted_vanish_at_identity(self):
        np.testing.assert_array_equal(shifted_invariants(SymTensor2(1.0, 1.0, 0.0)), 0.0)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(7)
        cs = random_spd_batch(rng, 30)
        i1, i2, i3 = invariants_batch(cs)
        for k, cvec in enumerate(cs):
            inv = invariants_plane_strain(SymTensor2.from_vec(cvec))
            np.testing.assert_allclose([i1[k], i2[k], i3[k]], list(inv), rtol=1e-13)


class TestRotation:
    @given(st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi))
    @settings(max_examples=50)
    def test_composition_and_roundtrip(self, t1, t2):
        a = np.array([1.3, 0.7, -0.4])
        one = rotate_sym(rotate_sym(a, t1), t2)
        two = rotate_sym(a, t1 + t2)
        np.testing.assert_allclose(one, two, atol=1e-12)
        back = rotate_sym(rotate_sym(a, t1), -t1)
        np.testing.assert_allclose(back, a, atol=1e-12)

    def test_matches_matrix_conjugation(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = rng.normal(size=3)
            theta = rng.uniform(-math.pi, math.pi)
            c, s = math.cos(theta), math.sin(theta)
            q = np.array([[c, -s], [s, c]])
            m = q.T @ SymTensor2.from_vec(a).as_matrix() @ q
            np.testing.assert_allclose(
                rotate_sym(a, theta), [m[0, 0], m[1, 1], m[0, 1]], atol=1e-13
            )

    def test_pair_preserves_eigenvalues(self):
        p = PhasePoint(SymTensor2(0.2, -0.1, 0.05), SymTensor2(30.0, 10.0, -5.0))
        q = rotate_pair(p, 0.77)
        for a, b in ((p.E, q.E), (p.S, q.S)):
            np.testing.assert_allclose(
                np.linalg.eigvalsh(a.as_matrix()),
                np.linalg.eigvalsh(b.as_matrix()),
                rtol=1e-12,
            )


class TestVoigt:
    def test_inner_product_equals_double_contraction(self):
        rng = np.random.default_rng(42)
        a = rng.normal(size=(10_000, 3))
        b = rng.normal(size=(10_000, 3))
        got = voigt_inner(a, b)
        mats_a = np.array([[a[:, 0], a[:, 2]], [a[:, 2], a[:, 1]]]).transpose(2, 0, 1)
        mats_b = np.array([[b[:, 0], b[:, 2]], [b[:, 2], b[:, 1]]]).transpose(2, 0, 1)
        want = np.einsum("nij,nij->n", mats_a, mats_b)
        np.testing.assert_allclose(got, want, rtol=1e-14, atol=1e-14)

    def test_mandel_roundtrip_and_norm(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=(100, 3))
        np.testing.assert_allclose(from_mandel(to_mandel(a)), a, rtol=1e-15)
        np.testing.assert_allclose(
            np.sum(to_mandel(a) ** 2, axis=1), voigt_inner(a, a), rtol=1e-14
        )

    def test_mandel_scalar(self):
        t = SymTensor2(1.0, 2.0, 3.0)
        np.testing.assert_allclose(t.mandel(), [1.0, 2.0, 3.0 * math.sqrt(2.0)])
        np.testing.assert_allclose(t.as_matrix(), [[1.0, 3.0], [3.0, 2.0]])
