import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stirap5.superposition import (
    TargetSuperposition,
    basis_states,
    closed_form_magnitude_gap,
    closed_form_magnitudes,
    closed_form_phases,
    entangled_coefficients,
    entangled_representation,
    project_onto_targets,
    rotated_dipoles,
    rotated_system,
)
from stirap5.system import FiveLevelSystem

from test_pulse import FIG2A

FIG5_TARGET = TargetSuperposition(theta=math.pi / 4, beta=-math.pi / 2)

angles = st.floats(-2 * math.pi, 2 * math.pi)


def open_system():
    return FiveLevelSystem.from_peak_rabis(40, 30, 20 + 20j, 20, 30 + 20j, None)


class TestBasis:
    @given(theta=angles, beta=angles)
    def test_orthonormal(self, theta, beta):
        k3, k4 = basis_states(TargetSuperposition(theta, beta))
        assert np.vdot(k3, k3) == pytest.approx(1.0, abs=1e-14)
        assert np.vdot(k4, k4) == pytest.approx(1.0, abs=1e-14)
        assert abs(np.vdot(k3, k4)) <= 1e-14

    def test_fig5_target_states(self):
        k3, k4 = basis_states(FIG5_TARGET)
        inv_sqrt2 = 1 / math.sqrt(2)
        assert np.allclose(k3, [0, 0, inv_sqrt2, -1j * inv_sqrt2, 0], atol=1e-15)
        assert np.allclose(k4, [0, 0, inv_sqrt2, 1j * inv_sqrt2, 0], atol=1e-15)


class TestRotatedDipoles:
    def test_identity_rotation(self):
        rot = rotated_dipoles(FIG2A, TargetSuperposition(math.pi / 2, 0.0))
        assert rot.d23 == pytest.approx(FIG2A.d23.value, abs=1e-12)
        assert rot.d24 == pytest.approx(-FIG2A.d24.value, abs=1e-12)
        assert rot.d35 == pytest.approx(FIG2A.d35.value, abs=1e-12)
        assert rot.d45 == pytest.approx(-FIG2A.d45.value, abs=1e-12)

    def test_quarter_turn_swaps_targets(self):
        rot = rotated_dipoles(FIG2A, TargetSuperposition(0.0, 0.0))
        assert rot.d24 == pytest.approx(FIG2A.d23.value, abs=1e-12)
        assert rot.d45 == pytest.approx(FIG2A.d35.value, abs=1e-12)
        assert rot.d23 == pytest.approx(FIG2A.d24.value, abs=1e-12)
        assert rot.d35 == pytest.approx(FIG2A.d45.value, abs=1e-12)

    def test_fig5_rotation_values(self):
        rot = rotated_dipoles(open_system(), FIG5_TARGET)
        inv_sqrt2 = 1 / math.sqrt(2)
        assert rot.d24 == pytest.approx((10 + 20j) * inv_sqrt2, abs=1e-12)
        assert rot.d45 == pytest.approx((40 - 30j) * inv_sqrt2, abs=1e-12)

    @given(theta=angles, beta=angles)
    def test_rotation_preserves_total_strength(self, theta, beta):
        rot = rotated_dipoles(FIG2A, TargetSuperposition(theta, beta))
        before = abs(FIG2A.d23.value) ** 2 + abs(FIG2A.d24.value) ** 2
        after = abs(rot.d23) ** 2 + abs(rot.d24) ** 2
        assert after == pytest.approx(before, rel=1e-12)
        before = abs(FIG2A.d35.value) ** 2 + abs(FIG2A.d45.value) ** 2
        after = abs(rot.d35) ** 2 + abs(rot.d45) ** 2
        assert after == pytest.approx(before, rel=1e-12)

    def test_rotated_system_keeps_untouched_fields(self):
        rs = rotated_system(FIG2A, FIG5_TARGET)
        assert rs.d12 == FIG2A.d12
        assert rs.d15 == FIG2A.d15
        assert rs.decay_rate_3 == FIG2A.decay_rate_3


class TestClosedForms:
    @given(theta=angles, beta=angles)
    def test_phase_forms_are_exact(self, theta, beta):
        target = TargetSuperposition(theta, beta)
        rot = rotated_dipoles(FIG2A, target)
        a24, a45 = closed_form_phases(FIG2A, target)
        if abs(rot.d24) > 1e-9:
            assert np.exp(1j * a24) == pytest.approx(rot.d24 / abs(rot.d24), abs=1e-9)
        if abs(rot.d45) > 1e-9:
            assert np.exp(1j * a45) == pytest.approx(rot.d45 / abs(rot.d45), abs=1e-9)

    def test_magnitude_forms_drop_cross_terms(self):
        # aligned bare dipole phases make the cross term survive: the
        # closed-form magnitudes then disagree with the exact rotation
        target = TargetSuperposition(math.pi / 4, 0.0)
        gap24, gap45 = closed_form_magnitude_gap(FIG2A, target)
        assert gap24 > 0.05
        # with a beta that kills the cross term the forms agree
        a23, a24 = FIG2A.d23.phase, FIG2A.d24.phase
        beta = a23 - a24 - math.pi / 2
        gap24_aligned, _ = closed_form_magnitude_gap(FIG2A, TargetSuperposition(math.pi / 4, beta))
        assert gap24_aligned < 1e-12

    def test_magnitude_forms_match_when_exact(self):
        target = TargetSuperposition(math.pi / 2, 0.3)
        cf = closed_form_magnitudes(FIG2A, target)
        rot = rotated_dipoles(FIG2A, target)
        assert cf[0] == pytest.approx(abs(rot.d24), rel=1e-12)
        assert cf[1] == pytest.approx(abs(rot.d45), rel=1e-12)


class TestProjection:
    def test_bare_level_target(self):
        psi = np.array([0, 0, 1.0, 0, 0], complex)
        p3p, p4p = project_onto_targets(psi, TargetSuperposition(math.pi / 2, 0.0))
        assert p3p == pytest.approx(1.0, abs=1e-14)
        assert p4p == pytest.approx(0.0, abs=1e-14)

    def test_fig5_superposition_is_pure_target(self):
        psi = np.array([0, 0, 1.0, 1j, 0], complex) / math.sqrt(2)
        p3p, p4p = project_onto_targets(psi, FIG5_TARGET)
        assert p3p == pytest.approx(0.0, abs=1e-14)
        assert p4p == pytest.approx(1.0, abs=1e-14)

    @given(
        theta=angles,
        beta=angles,
        re3=st.floats(-1, 1), im3=st.floats(-1, 1),
        re4=st.floats(-1, 1), im4=st.floats(-1, 1),
    )
    def test_sum_rule(self, theta, beta, re3, im3, re4, im4):
        psi = np.array([0.1, 0.2j, re3 + 1j * im3, re4 + 1j * im4, 0.3], complex)
        p3p, p4p = project_onto_targets(psi, TargetSuperposition(theta, beta))
        assert p3p + p4p == pytest.approx(abs(psi[2]) ** 2 + abs(psi[3]) ** 2, rel=1e-12,
                                          abs=1e-12)

    def test_trajectory_shape(self):
        amps = np.zeros((7, 5), complex)
        amps[:, 2] = 1.0
        p3p, p4p = project_onto_targets(amps, FIG5_TARGET)
        assert p3p.shape == (7,)
        assert np.allclose(p3p + p4p, 1.0)


class TestEntangledForm:
    def test_pure_first_surface(self):
        assert entangled_representation(TargetSuperposition(0.0, 0.0)) == "|n3⟩⊗|e3⟩"

    def test_pure_second_surface_negative(self):
        assert entangled_representation(TargetSuperposition(math.pi / 2, 0.0)) == "−|n4⟩⊗|e4⟩"

    def test_balanced_coefficients(self):
        c3, c4 = entangled_coefficients(TargetSuperposition(math.pi / 4, 0.0))
        inv_sqrt2 = 1 / math.sqrt(2)
        assert c3 == pytest.approx(inv_sqrt2, rel=1e-12)
        assert c4 == pytest.approx(-inv_sqrt2, rel=1e-12)
        text = entangled_representation(TargetSuperposition(math.pi / 4, 0.0))
        assert "0.707107" in text and "−" in text

    def test_complex_coefficient_rendered(self):
        text = entangled_representation(TargetSuperposition(math.pi / 4, math.pi / 2))
        assert "i)·|n4⟩⊗|e4⟩" in text
