"""Thermal data, lattice stencils, and the out-of-band eigenvector."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nesslab.exceptions import DomainError, NoBoundState
from nesslab.model import (
    BoundState,
    ModelParams,
    OperatorKind,
    ThermalConfig,
    bound_state,
    dispersion,
    operator_stencil,
    planck_density,
    planck_difference,
)

from bruteforce import fermi_difference


class TestConfigs:
    def test_thermal_accessors(self):
        th = ThermalConfig(1.0, 2.0)
        assert th.delta == 0.5
        assert th.beta_mean == 1.5
        assert not th.is_equilibrium
        assert ThermalConfig(3.0, 3.0).is_equilibrium

    @pytest.mark.parametrize(
        "pair",
        [(0.0, 1.0), (-1.0, 2.0), (2.0, 1.0), (math.inf, 1.0), (1.0, math.nan)],
    )
    def test_thermal_rejects(self, pair):
        with pytest.raises(ValueError):
            ThermalConfig(*pair)

    def test_params_normalizes_nu(self):
        assert ModelParams(0.5, 2.0).nu == 2
        assert isinstance(ModelParams(0.5, 2.0).nu, int)

    @pytest.mark.parametrize("kwargs", [{"lam": math.nan}, {"lam": 1.0, "nu": -1},
                                        {"lam": 1.0, "nu": 0.5}])
    def test_params_rejects(self, kwargs):
        with pytest.raises(ValueError):
            ModelParams(**kwargs)


class TestPlanck:
    def test_point_value(self):
        assert abs(planck_density(2.0, 1.0) - 1.0 / (1.0 + math.e**2)) < 1e-16
        assert planck_density(5.0, 0.0) == 0.5
        assert planck_density(0.0, 0.7) == 0.5

    def test_overflow_safe(self):
        assert planck_density(1e6, 1.0) == 0.0
        assert planck_density(1e6, -1.0) == 1.0

    def test_vectorized(self):
        out = planck_density(2.0, np.array([-1.0, 0.0, 1.0]))
        assert out.shape == (3,)
        assert abs(out[1] - 0.5) < 1e-16

    def test_difference_point_value(self):
        th = ThermalConfig(1.0, 2.0)
        assert abs(planck_difference(th, 1.0) - 0.14973849934787758) < 1e-16

    @given(
        beta_l=st.floats(0.05, 30.0),
        gap=st.floats(0.0, 30.0),
        e=st.floats(-1.0, 1.0),
    )
    def test_difference_matches_plain_fermi(self, beta_l, gap, e):
        th = ThermalConfig(beta_l, beta_l + gap)
        plain = float(fermi_difference(th.beta_l, th.beta_r, e))
        assert abs(planck_difference(th, e) - plain) < 1e-15

    def test_difference_survives_extreme_betas(self):
        th = ThermalConfig(1e3, 2e3)
        val = planck_difference(th, 1.0)
        assert math.isfinite(val)
        assert 0.0 <= val <= 1.0

    def test_difference_odd_in_energy(self):
        th = ThermalConfig(0.7, 2.3)
        for e in (0.1, 0.5, 1.0):
            assert abs(planck_difference(th, -e) + planck_difference(th, e)) < 1e-15
        assert planck_difference(th, 0.0) == 0.0


class TestDispersion:
    def test_band_values(self):
        assert dispersion(0.0) == 1.0
        assert abs(dispersion(math.pi / 3.0) - 0.5) < 1e-15
        assert dispersion(math.pi) == -1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            dispersion(3.5)
        with pytest.raises(DomainError):
            dispersion(-4.0)


class TestStencil:
    def test_field_entries(self):
        p = ModelParams(0.2)
        assert operator_stencil(OperatorKind.MAGNETIC, p, 0, 0) == 0.2
        assert operator_stencil(OperatorKind.MAGNETIC, p, 3, 4) == 0.5
        assert operator_stencil(OperatorKind.MAGNETIC, p, 1, 1) == 0.0
        assert operator_stencil(OperatorKind.XY, p, 0, 0) == 0.0
        assert operator_stencil(OperatorKind.XY, p, 0, 2) == 0.0

    def test_severed_bonds(self):
        p = ModelParams(0.7, nu=1)
        assert operator_stencil(OperatorKind.DECOUPLED, p, 1, 2) == 0.0
        assert operator_stencil(OperatorKind.DECOUPLED, p, -2, -1) == 0.0
        assert operator_stencil(OperatorKind.DECOUPLED, p, 2, 3) == 0.5
        assert operator_stencil(OperatorKind.DECOUPLED, p, 0, 1) == 0.5

    def test_decoupled_differs_from_chain_only_on_contact_bonds(self):
        p = ModelParams(0.3, nu=1)
        cut = {(-2, -1), (-1, -2), (1, 2), (2, 1)}
        for x in range(-6, 7):
            for y in range(-6, 7):
                free = operator_stencil(OperatorKind.XY, p, x, y)
                dec = operator_stencil(OperatorKind.DECOUPLED, p, x, y)
                if (x, y) in cut:
                    assert dec == 0.0 and free == 0.5
                else:
                    assert dec == free

    def test_symmetry(self):
        p = ModelParams(-1.2, nu=2)
        for kind in OperatorKind:
            for x in range(-4, 5):
                for y in range(-4, 5):
                    assert operator_stencil(kind, p, x, y) == operator_stencil(kind, p, y, x)


class TestBoundState:
    def test_closed_forms_at_three_quarters(self):
        state = bound_state(0.75)
        assert abs(state.energy - 1.25) < 1e-15
        assert abs(state.decay_rate - math.log(2.0)) < 1e-15
        assert abs(state.norm_sq - 5.0 / 3.0) < 1e-15
        assert not state.staggered

    def test_negative_field_staggers(self):
        state = bound_state(-0.75)
        assert state.energy == -1.25
        assert state.staggered
        assert state.amplitude(0) > 0.0
        assert state.amplitude(1) < 0.0
        assert state.amplitude(2) > 0.0

    def test_no_bound_state_at_zero(self):
        with pytest.raises(NoBoundState):
            bound_state(0.0)

    @pytest.mark.parametrize("lam", [0.75, -0.6, 2.0, -0.1])
    def test_eigenvector_equation(self, lam):
        state = bound_state(lam)
        worst = 0.0
        for x in range(-50, 51):
            lhs = 0.5 * state.amplitude(x - 1) + 0.5 * state.amplitude(x + 1)
            if x == 0:
                lhs += lam * state.amplitude(0)
            worst = max(worst, abs(lhs - state.energy * state.amplitude(x)))
        assert worst < 1e-12

    @given(lam=st.one_of(st.floats(0.05, 5.0), st.floats(-5.0, -0.05)))
    def test_unit_norm_and_band_gap(self, lam):
        state = bound_state(lam)
        assert abs(state.energy) > 1.0
        span = int(math.ceil(16.0 / state.decay_rate))
        sites = np.arange(-span, span + 1)
        assert abs(np.sum(state.amplitude(sites) ** 2) - 1.0) < 1e-12

    def test_amplitude_array_matches_scalar(self):
        state = bound_state(-1.3)
        arr = state.amplitude(np.array([-2, 0, 3]))
        assert arr.tolist() == [state.amplitude(-2), state.amplitude(0), state.amplitude(3)]

    def test_fields_are_frozen(self):
        state = bound_state(1.0)
        with pytest.raises(AttributeError):
            state.energy = 2.0
        assert isinstance(state, BoundState)
