"""Closed-form steady-state two-point function of the driven chain.

``s_element`` assembles one matrix element from the band overlap and the
bound-state weight; ``correlation_block`` fills a finite window using
self-adjointness of the two-point operator.  ``ti_commutator_element`` gives
the closed-form momentum integral for the difference ``s(0,2) - s(-1,1)``,
which vanishes without driving or without the field and is the cheapest
witness that the driven steady state breaks translation invariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConsistencyError, WindowTooLarge
from .model import ModelParams, ThermalConfig, bound_state, planck_difference
from .numerics import QuadratureSpec, adaptive_integrate
from .scattering import ZERO_FIELD_FLOOR, _kernel_overlap, ac_overlap, pp_weight

MAX_WINDOW_SITES = 512


def s_element(
    params: ModelParams,
    th: ThermalConfig,
    x: int,
    y: int,
    spec: QuadratureSpec | None = None,
) -> complex:
    """Steady-state correlation ``(e_x, S e_y)`` for sites ``x, y``."""
    value = ac_overlap(params, th, x, y, spec)
    # below the floor the bound term is under |lam| * weight < 1e-14 and the
    # band part already dropped its scattered terms; same cutoff both places
    if abs(params.lam) >= ZERO_FIELD_FLOOR:
        state = bound_state(params.lam)
        value += pp_weight(params, th, spec) * state.amplitude(x) * state.amplitude(y)
    return value


@dataclass(frozen=True, eq=False)
class CorrelationBlock:
    """Window ``[lo, hi]`` of the steady-state two-point matrix."""

    lo: int
    hi: int
    params: ModelParams
    thermal: ThermalConfig
    matrix: np.ndarray

    @property
    def sites(self) -> range:
        return range(self.lo, self.hi + 1)

    def value(self, x: int, y: int) -> complex:
        if not (self.lo <= x <= self.hi and self.lo <= y <= self.hi):
            raise IndexError(f"site pair ({x}, {y}) outside window [{self.lo}, {self.hi}]")
        return complex(self.matrix[x - self.lo, y - self.lo])

    def to_dict(self) -> dict:
        return {
            "window": [self.lo, self.hi],
            "params": {"lambda": self.params.lam, "nu": self.params.nu},
            "thermal": {"beta_l": self.thermal.beta_l, "beta_r": self.thermal.beta_r},
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }


def correlation_block(
    params: ModelParams,
    th: ThermalConfig,
    lo: int,
    hi: int,
    spec: QuadratureSpec | None = None,
) -> CorrelationBlock:
    """Fill the window ``[lo, hi]`` of the steady-state matrix.

    Only the upper triangle is quadratured; the lower follows from
    self-adjointness ``s(y, x) = conj(s(x, y))``.
    """
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise ValueError(f"window bounds out of order: [{lo}, {hi}]")
    n = hi - lo + 1
    if n > MAX_WINDOW_SITES:
        raise WindowTooLarge(
            f"window of {n} sites exceeds the {MAX_WINDOW_SITES}-site cap; "
            "each element costs several adaptive quadratures"
        )
    matrix = np.empty((n, n), dtype=np.complex128)
    for i, x in enumerate(range(lo, hi + 1)):
        for j in range(i, n):
            value = s_element(params, th, x, lo + j, spec)
            matrix[i, j] = value
            if j != i:
                matrix[j, i] = value.conjugate()
    return CorrelationBlock(lo=lo, hi=hi, params=params, thermal=th, matrix=matrix)


def ti_commutator_element(
    params: ModelParams,
    th: ThermalConfig,
    spec: QuadratureSpec | None = None,
    verify: bool = False,
) -> float:
    """Closed form of ``s(0, 2) - s(-1, 1)`` as a single momentum integral.

    ``lam * integral dk/2pi cos(k) rho_diff(cos k) corr(lam, cos k)``; real,
    and zero whenever ``lam = 0`` or the reservoirs agree.  With
    ``verify=True`` the two matrix elements are also assembled from overlap
    quadratures and the difference is checked against the closed form.
    """
    spec = spec if spec is not None else QuadratureSpec()
    lam = params.lam
    # below the floor the integral is bounded by |lam| itself
    if abs(lam) < ZERO_FIELD_FLOOR or th.is_equilibrium:
        fast = 0.0
    else:

        def band_diff(e: float) -> float:
            return planck_difference(th, e)

        # corr = 1 - lam^2/(sin^2 + lam^2) splits the integral (even in k)
        # into a smooth part and a kernel part; the lam and lam^3 weights
        # apply after integration, so each target scales by the inverse
        smooth_budget = QuadratureSpec(
            abs_tol=0.5 * spec.abs_tol / abs(lam),
            rel_tol=spec.rel_tol,
            max_subdivisions=spec.max_subdivisions,
        )
        kernel_budget = QuadratureSpec(
            abs_tol=0.5 * spec.abs_tol / abs(lam) ** 3,
            rel_tol=spec.rel_tol,
            max_subdivisions=spec.max_subdivisions,
        )

        def smooth(t: float) -> float:
            e = math.cos(t)
            return e * band_diff(e)

        plain = adaptive_integrate(smooth, 0.0, math.pi, smooth_budget).value / math.pi
        kernel = _kernel_overlap(lam, band_diff, False, ((0.5, 1), (0.5, -1)), kernel_budget)
        fast = lam * plain - lam**3 * kernel.real / math.pi

    if verify:
        direct = ti_commutator_direct(params, th, spec)
        tol = max(1e-10, 10.0 * spec.abs_tol)
        if abs(direct - fast) > tol:
            raise ConsistencyError(
                f"translation defect mismatch: closed form {fast!r}, "
                f"matrix elements give {direct!r}, tolerance {tol!r}"
            )
    return fast


def ti_commutator_direct(
    params: ModelParams,
    th: ThermalConfig,
    spec: QuadratureSpec | None = None,
) -> float:
    """``s(0, 2) - s(-1, 1)`` assembled from the two matrix elements."""
    diff = s_element(params, th, 0, 2, spec) - s_element(params, th, -1, 1, spec)
    return diff.real
