"""Steady-state matrix elements, window assembly, and the shift defect."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nesslab.exceptions import WindowTooLarge
from nesslab.model import ModelParams, ThermalConfig
from nesslab.ness import (
    MAX_WINDOW_SITES,
    correlation_block,
    s_element,
    ti_commutator_direct,
    ti_commutator_element,
)


class TestSElement:
    def test_zero_field_diagonal_is_half(self, th12):
        p = ModelParams(0.0)
        assert abs(s_element(p, th12, 0, 0) - 0.5) < 1e-10
        assert abs(s_element(p, th12, 3, 3) - 0.5) < 1e-10

    def test_zero_field_translation_invariant(self, th12):
        p = ModelParams(0.0)
        assert abs(s_element(p, th12, 0, 1) - s_element(p, th12, 5, 6)) < 1e-10

    def test_field_breaks_translation_invariance(self, th12):
        p = ModelParams(1.0)
        assert abs(s_element(p, th12, 0, 1) - s_element(p, th12, 5, 6)) > 1e-4

    @settings(max_examples=20)
    @given(
        lam=st.floats(-2.0, 2.0),
        x=st.integers(-4, 4),
        y=st.integers(-4, 4),
    )
    def test_self_adjoint(self, th12, lam, x, y):
        p = ModelParams(lam)
        assert abs(s_element(p, th12, x, y) - s_element(p, th12, y, x).conjugate()) < 1e-9

    def test_diagonal_report(self, th12, capsys):
        # the on-site occupations shift under the field; record the profile
        # without pinning it (no closed form is asserted here)
        p = ModelParams(1.0)
        for x in range(-2, 3):
            val = s_element(p, th12, x, x)
            assert abs(val.imag) < 1e-10
            assert 0.0 < val.real < 1.0
            print(f"s({x},{x}) - 1/2 = {val.real - 0.5:+.6f}")


class TestCorrelationBlock:
    def test_zero_field_toeplitz(self, th12):
        block = correlation_block(ModelParams(0.0), th12, -3, 3)
        m = block.matrix
        for off in range(-6, 7):
            diag = np.diagonal(m, offset=off)
            assert np.max(np.abs(diag - diag[0])) < 1e-12

    def test_hermitian_by_construction(self, th12):
        block = correlation_block(ModelParams(0.5), th12, -2, 2)
        assert np.max(np.abs(block.matrix - block.matrix.conj().T)) < 1e-12

    def test_value_accessor(self, th12):
        block = correlation_block(ModelParams(0.3), th12, -2, 2)
        assert block.value(-2, 1) == complex(block.matrix[0, 3])
        assert list(block.sites) == [-2, -1, 0, 1, 2]
        with pytest.raises(IndexError):
            block.value(3, 0)

    def test_matches_pointwise_element(self, th12):
        p = ModelParams(0.8)
        block = correlation_block(p, th12, -1, 1)
        assert abs(block.value(0, 1) - s_element(p, th12, 0, 1)) < 1e-13

    def test_to_dict_shape(self, th12):
        block = correlation_block(ModelParams(0.2, nu=1), th12, -1, 1)
        doc = block.to_dict()
        assert doc["window"] == [-1, 1]
        assert doc["params"] == {"lambda": 0.2, "nu": 1}
        assert doc["thermal"] == {"beta_l": 1.0, "beta_r": 2.0}
        assert len(doc["re"]) == 3 and len(doc["re"][0]) == 3
        assert len(doc["im"]) == 3

    def test_window_cap(self, th12):
        with pytest.raises(WindowTooLarge):
            correlation_block(ModelParams(0.1), th12, 0, MAX_WINDOW_SITES)

    def test_window_order(self, th12):
        with pytest.raises(ValueError):
            correlation_block(ModelParams(0.1), th12, 2, 1)


class TestTiCommutator:
    def test_zero_iff_zero_field(self, th12):
        assert ti_commutator_element(ModelParams(0.0), th12) == 0.0
        for lam in (0.05, -0.05, 0.2, -0.2, 1.0, -1.0):
            assert abs(ti_commutator_element(ModelParams(lam), th12)) > 1e-6

    def test_sign_follows_field(self, th12):
        for lam in (0.1, -0.1, 0.5, -0.5):
            val = ti_commutator_element(ModelParams(lam), th12)
            assert math.copysign(1.0, val) == math.copysign(1.0, lam)

    def test_equilibrium_vanishes(self):
        th = ThermalConfig(2.0, 2.0)
        for lam in (0.0, 0.3, 1.0):
            assert ti_commutator_element(ModelParams(lam), th) == 0.0

    def test_fast_path_matches_matrix_elements(self, th12):
        p = ModelParams(0.2)
        fast = ti_commutator_element(p, th12)
        direct = ti_commutator_direct(p, th12)
        assert abs(fast - direct) < 1e-10

    def test_verify_flag_cross_checks(self, th12):
        val = ti_commutator_element(ModelParams(0.7), th12, verify=True)
        assert math.isfinite(val)
