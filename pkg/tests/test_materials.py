import math

import numpy as np
import pytest

from ddmech.materials import (
    Ciarlet,
    CiarletParams,
    HartmannNeff,
    HartmannNeffParams,
    make_material,
)
from ddmech.tensors import SymTensor2, rotate_sym

from helpers import fd_stress, fd_tangent, random_spd_batch

LAWS = [Ciarlet(), HartmannNeff()]


def hn_energy_oracle(cvec, p: HartmannNeffParams):
    """Independent path: build the 3D unimodular tensor and take matrix traces."""
    c3 = np.zeros((3, 3))
    c3[:2, :2] = SymTensor2.from_vec(cvec).as_matrix()
    c3[2, 2] = 1.0
    j = math.sqrt(np.linalg.det(c3))
    cbar = j ** (-2.0 / 3.0) * c3
    b1 = np.trace(cbar)
    b2 = 0.5 * (b1**2 - np.trace(cbar @ cbar))
    return (
        p.a * (b1**3 - 27.0)
        + p.c10 * (b1 - 3.0)
        + p.c01 * (b2**1.5 - 3.0 * math.sqrt(3.0))
        + (p.k / 50.0) * (j**5 + j**-5 - 2.0)
    )


class TestNormalization:
    @pytest.mark.parametrize("law", LAWS, ids=lambda m: m.name)
    def test_energy_and_stress_vanish_at_identity(self, law):
        ident = SymTensor2(1.0, 1.0, 0.0)
        assert abs(law.energy(ident)) < 1e-12
        s = law.stress(ident)
        assert max(abs(s.a11), abs(s.a22), abs(s.a12)) < 1e-10


class TestCiarlet:
    def test_frozen_energy_value(self):
        p = CiarletParams()
        got = Ciarlet(p).energy(SymTensor2(1.21, 1.0, 0.0))
        want = (
            0.5 * p.mu * 0.21
            + 0.25 * p.lam * 0.21
            - (0.5 * p.lam + p.mu) * math.log(1.1)
        )
        assert got == pytest.approx(want, rel=1e-12)
        assert got > 0.0

    def test_isochoric_stress_is_deviatoric_form(self):
        # J = 1 kills the volumetric term: S = mu (I - C^-1).
        p = CiarletParams()
        c = SymTensor2(1.1, 1.0 / 1.1, 0.0)
        s = Ciarlet(p).stress(c)
        np.testing.assert_allclose(
            [s.a11, s.a22, s.a12],
            [p.mu * (1.0 - 1.0 / 1.1), p.mu * (1.0 - 1.1), 0.0],
            rtol=1e-12,
            atol=1e-12,
        )

    def test_closed_form_stress(self):
        # S = lam/2 (I3 - 1) C^-1 + mu (I - C^-1)
        p = CiarletParams()
        rng = np.random.default_rng(2)
        for cvec in random_spd_batch(rng, 25):
            cm = SymTensor2.from_vec(cvec).as_matrix()
            cinv = np.linalg.inv(cm)
            det = np.linalg.det(cm)
            want = 0.5 * p.lam * (det - 1.0) * cinv + p.mu * (np.eye(2) - cinv)
            s = Ciarlet(p).stress(SymTensor2.from_vec(cvec)).as_matrix()
            np.testing.assert_allclose(s, want, rtol=1e-11, atol=1e-11)

    def test_small_strain_tangent_is_isotropic_elasticity(self):
        p = CiarletParams()
        d = Ciarlet(p).tangent(SymTensor2(1.0, 1.0, 0.0))
        lam, mu = p.lam, p.mu
        want = np.array(
            [[lam + 2 * mu, lam, 0.0], [lam, lam + 2 * mu, 0.0], [0.0, 0.0, mu]]
        )
        np.testing.assert_allclose(d, want, rtol=1e-12, atol=1e-9)


class TestHartmannNeff:
    def test_frozen_value_against_3d_oracle(self):
        p = HartmannNeffParams()
        cvec = np.array([1.44, 1.0, 0.0])
        got = HartmannNeff(p).energy(SymTensor2.from_vec(cvec))
        assert got == pytest.approx(hn_energy_oracle(cvec, p), rel=1e-12)
        assert got > 0.0

    def test_pure_dilation_keeps_isochoric_part(self):
        # C2 = c I embeds to diag(c, c, 1), which is not a pure dilation in 3D,
        # so the isochoric part must contribute on top of U(J).
        p = HartmannNeffParams()
        c = 1.3
        j = c  # J = sqrt(det diag(c, c, 1)) = c
        u = (p.k / 50.0) * (j**5 + j**-5 - 2.0)
        total = HartmannNeff(p).energy(SymTensor2(c, c, 0.0))
        assert u > 0.0
        assert abs(total - u) > 1e-4

    def test_oracle_on_random_states(self):
        p = HartmannNeffParams()
        law = HartmannNeff(p)
        rng = np.random.default_rng(8)
        for cvec in random_spd_batch(rng, 25):
            got = law.energy(SymTensor2.from_vec(cvec))
            assert got == pytest.approx(hn_energy_oracle(cvec, p), rel=1e-11)


class TestDerivativeConsistency:
    @pytest.mark.parametrize("law", LAWS, ids=lambda m: m.name)
    def test_stress_is_twice_energy_gradient(self, law):
        rng = np.random.default_rng(13)
        for cvec in random_spd_batch(rng, 25):
            want = fd_stress(lambda c: law.energy_batch(c), cvec)
            got = law.stress_batch(cvec)
            np.testing.assert_allclose(got, want, rtol=1e-7, atol=1e-7 * abs(want).max())

    @pytest.mark.parametrize("law", LAWS, ids=lambda m: m.name)
    def test_tangent_is_twice_stress_gradient(self, law):
        rng = np.random.default_rng(14)
        for cvec in random_spd_batch(rng, 15):
            want = fd_tangent(lambda c: law.stress_batch(c), cvec)
            _, got = law.stress_and_tangent(cvec[None, :])
            np.testing.assert_allclose(
                got[0], want, rtol=1e-6, atol=1e-6 * abs(want).max()
            )

    @pytest.mark.parametrize("law", LAWS, ids=lambda m: m.name)
    def test_tangent_major_symmetry(self, law):
        rng = np.random.default_rng(15)
        cs = random_spd_batch(rng, 20)
        _, d = law.stress_and_tangent(cs)
        np.testing.assert_allclose(d, np.swapaxes(d, -1, -2), rtol=1e-10, atol=1e-8)


class TestObjectivity:
    @pytest.mark.parametrize("law", LAWS, ids=lambda m: m.name)
    def test_rotated_state_gives_rotated_stress(self, law):
        rng = np.random.default_rng(21)
        for cvec in random_spd_batch(rng, 15):
            theta = rng.uniform(-math.pi, math.pi)
            s_rot = law.stress_batch(rotate_sym(cvec, theta))
            rot_s = rotate_sym(law.stress_batch(cvec), theta)
            np.testing.assert_allclose(s_rot, rot_s, rtol=1e-10, atol=1e-10)


class TestFactory:
    def test_known_names(self):
        assert make_material("ciarlet").name == "ciarlet"
        assert make_material("hn").name == "hartmann-neff"
        assert make_material("hartmann-neff").name == "hartmann-neff"

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            make_material("gent")
