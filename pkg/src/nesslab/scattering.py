"""Stationary scattering data of the single-site field on the chain.

The steady state of the driven chain splits into a band part, carried by
wave operators, and a bound part, carried by the out-of-band eigenvector.
This module evaluates both: the momentum-space action of the wave operator
on lattice basis vectors, the band-part overlap integrals it induces, the
transmission-suppression factor of the local field, and the thermal weight
the initial state puts on the bound state.

Momentum-space convention: a lattice vector f transforms to
``fhat(k) = sum_x f(x) exp(i k x)`` with inverse measure ``dk / 2 pi`` on
``[-pi, pi]``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import replace
from functools import lru_cache
from typing import Callable

from .exceptions import DomainError, NoBoundState
from .model import (
    ModelParams,
    ThermalConfig,
    bound_state,
    planck_density,
)
from .numerics import (
    QuadratureSpec,
    adaptive_integrate,
    geometric_sine_sum,
    with_breakpoints,
)

_PI = math.pi

# Fields below this are handled by the zero-field closed forms: the scattered
# and bound-state contributions to any correlation element are bounded by
# |lam| * (6 pi + 8 log(1/|lam|)) < 3e-12 there, under the resolution the
# quadrature itself can certify in double precision.
ZERO_FIELD_FLOOR = 1e-14


def xy_symbol(th: ThermalConfig, k: float) -> float:
    """Momentum density of the driven chain without the field.

    Planck density of the band energy ``cos k`` at the right temperature for
    ``k <= 0`` and at the left temperature for ``k > 0``: right movers carry
    the left reservoir's occupation and vice versa.
    """
    if not -_PI <= k <= _PI:
        raise DomainError(f"momentum {k} outside [-pi, pi]")
    r = th.beta_r if k <= 0.0 else th.beta_l
    return planck_density(r, math.cos(k))


def magnetic_correction(lam: float, e: float) -> float:
    """Transmission suppression ``(1 - e^2) / (1 - e^2 + lam^2)`` on the band.

    Identically 1 at zero field; vanishes at the band edges ``e = +-1`` and
    peaks at ``1 / (1 + lam^2)`` at the band center.
    """
    if abs(e) > 1.0 + 1e-12:
        raise DomainError(f"band energy {e} outside [-1, 1]")
    if lam == 0.0:
        return 1.0
    s = max(0.0, 1.0 - e * e)
    # guards 0/0 when lam*lam underflows to zero at the band edges
    if s == 0.0:
        return 0.0
    return s / (s + lam * lam)


def wave_action(lam: float, x: int, k: float) -> complex:
    """Momentum function of the wave operator applied to the basis vector at ``x``.

    ``exp(ikx) + i lam exp(i|k||x|) / (sin|k| - i lam)``; the plane wave plus
    an outgoing scattered wave.  At ``lam = 0`` it is exactly the plane wave.
    """
    if not -_PI <= k <= _PI:
        raise DomainError(f"momentum {k} outside [-pi, pi]")
    plane = cmath.exp(1j * k * x)
    if lam == 0.0:
        return plane
    ak = abs(k)
    return plane + 1j * lam * cmath.exp(1j * ak * abs(x)) / (math.sin(ak) - 1j * lam)


def _kernel_overlap(
    lam: float,
    rho: Callable[[float], float],
    with_sin: bool,
    waves: tuple[tuple[float, int], ...],
    budget: QuadratureSpec,
) -> complex:
    """Integral over ``[0, pi]`` of a smooth numerator against the field kernel.

    Evaluates ``integral rho(cos t) [sin t] sum_j w_j e^{i m_j t}
    / (sin^2 t + lam^2) dt`` for ``waves = ((w_j, m_j), ...)`` with integer
    frequencies.  The kernel factors as ``(c - cos t)(c + cos t)`` with
    ``c = sqrt(1 + lam^2)``, one near-pole per endpoint of half-width
    ~|lam|; each pole's matched part (numerator frozen to value and slope
    at that endpoint) is integrated in closed form, and the quadrature only
    sees the bounded second-order residual.  Direct quadrature of the raw
    integrand is not an option: its peak grows like 1/lam^2 and QUADPACK's
    extrapolation returns silently wrong values once |lam| drops below
    ~1e-4.
    """
    c = math.hypot(1.0, lam)
    al = abs(lam)
    edge_gap = lam * lam / (c + 1.0)  # c - 1 without cancellation

    def mix(t: float) -> complex:
        return sum(w * cmath.exp(1j * m * t) for w, m in waves)

    def num(t: float) -> complex:
        base = mix(t)
        if with_sin:
            base *= math.sin(t)
        return rho(math.cos(t)) * base

    rho0, rhop = rho(1.0), rho(-1.0)
    w0 = sum(w for w, _ in waves)
    wp = sum(w * (1.0 if m % 2 == 0 else -1.0) for w, m in waves)
    # endpoint slopes: d/dt rho(cos t) vanishes at both ends, so only the
    # trigonometric factor differentiates there
    if with_sin:
        n0, npi = complex(0.0), complex(0.0)
        d0 = complex(rho0 * w0)
        dpi = complex(-rhop * wp)
    else:
        n0, npi = complex(rho0 * w0), complex(rhop * wp)
        d0 = rho0 * sum(1j * m * w for w, m in waves)
        dpi = rhop * sum(1j * m * w * (1.0 if m % 2 == 0 else -1.0) for w, m in waves)

    # integral of 1/(c -+ cos t) is pi/|lam|; of sin t/(c -+ cos t) is L
    log_span = 2.0 * math.log((c + 1.0) / al)
    closed = ((n0 + npi) * (_PI / al) + (d0 - dpi) * log_span) / (2.0 * c)

    def c_minus_cos(t: float) -> float:
        h = math.sin(0.5 * t)
        return edge_gap + 2.0 * h * h

    def c_plus_cos(t: float) -> float:
        h = math.cos(0.5 * t)
        return edge_gap + 2.0 * h * h

    def residual(t: float) -> complex:
        s = math.sin(t)
        lo, hi = c_minus_cos(t), c_plus_cos(t)
        matched = ((n0 + d0 * s) * hi + (npi - dpi * s) * lo) / (2.0 * c)
        return (num(t) - matched) / (lo * hi)

    return adaptive_integrate(residual, 0.0, _PI, budget).value + closed


def ac_overlap(
    params: ModelParams,
    th: ThermalConfig,
    x: int,
    y: int,
    spec: QuadratureSpec | None = None,
) -> complex:
    """Band contribution to the steady-state two-point function at ``(x, y)``.

    The overlap ``integral dk/2pi conj(w e_x)(k) theta(k) (w e_y)(k)`` with
    ``theta`` the thermal symbol, expanded into three terms (plane-plane,
    plane-scattered cross terms, scattered-scattered).  The plane term is a
    direct quadrature split at the symbol jump k = 0; the kernel terms go
    through the matched-subtraction integrator, one panel per sign of k,
    with the momentum mapped to [0, pi] so all wave frequencies are
    integers.  Fields with ``|lam| < ZERO_FIELD_FLOOR`` take the plane term
    alone; the rest is bounded by ~3e-12 there, below what the quadrature
    could certify anyway.
    """
    spec = spec if spec is not None else QuadratureSpec()
    lam = params.lam
    band_only = abs(lam) < ZERO_FIELD_FLOOR
    terms = 1 if band_only else 3
    budget = QuadratureSpec(
        abs_tol=spec.abs_tol / terms,
        rel_tol=spec.rel_tol,
        max_subdivisions=spec.max_subdivisions,
        breakpoints=(0.0,),
    )
    d = y - x

    def plane(k: float) -> complex:
        return xy_symbol(th, k) * cmath.exp(1j * k * d)

    total = adaptive_integrate(plane, -_PI, _PI, budget).value / (2.0 * _PI)
    if band_only:
        return total

    ax, ay = abs(x), abs(y)
    lam2 = lam * lam
    # two panels per term, and the lam / lam^2 weights apply only after
    # integration, so each panel's absolute target scales by the inverse
    # weight; this also prices in the roundoff of the subtracted layers
    half = 0.5 * spec.abs_tol / terms
    cross_budget = QuadratureSpec(
        abs_tol=half / abs(lam),
        rel_tol=spec.rel_tol,
        max_subdivisions=spec.max_subdivisions,
    )
    scattered_budget = QuadratureSpec(
        abs_tol=half / lam2,
        rel_tol=spec.rel_tol,
        max_subdivisions=spec.max_subdivisions,
    )

    cross_total = complex(0.0)
    scattered_total = complex(0.0)
    m3 = ay - ax
    # k > 0 carries the left reservoir, k < 0 (mapped by k -> -t) the right
    for beta, m1, m2 in ((th.beta_l, ay - x, y - ax), (th.beta_r, ay + x, -y - ax)):

        def rho(e: float, b: float = beta) -> float:
            return planck_density(b, e)

        cross_total += _kernel_overlap(lam, rho, True, ((1.0, m1), (-1.0, m2)), cross_budget)
        scattered_total += _kernel_overlap(
            lam, rho, False, ((1.0, m1), (1.0, m2), (-1.0, m3)), scattered_budget
        )

    total += 1j * lam * cross_total / (2.0 * _PI)
    total -= lam2 * scattered_total / (2.0 * _PI)
    return total


@lru_cache(maxsize=128)
def _pp_weight_cached(params: ModelParams, th: ThermalConfig, spec: QuadratureSpec) -> float:
    state = bound_state(params.lam)
    nu = params.nu
    alpha = state.decay_rate

    # Reservoir overlaps via the half-line sine transform: the eigenvector
    # tail on sites >= nu+1 transforms to (e^{-alpha nu}/nu_norm) * S(q_s, k)
    # with S the geometric sine sum; the sign alternation at lam < 0 enters
    # as q_s = -e^{-alpha}, and left/right tails give identical |transform|^2.
    q_s = math.copysign(math.exp(-alpha), params.lam)
    if abs(q_s) >= 1.0:
        # exp(-alpha) rounds to 1 once alpha < ~1.1e-16; the tail is flat
        # to double precision and the half-line sums above diverge.
        raise NoBoundState(
            f"field {params.lam!r} too weak to resolve the bound state in double precision"
        )
    prefactor = math.exp(-2.0 * alpha * nu) / state.norm_sq

    # The squared sine sum peaks like (1 - |q_s|)^-2 at the band edge the
    # bound state hugs; Parseval integrates that peak exactly,
    # (2/pi) integral S^2 = q^2/(1-q^2), and subtracting the edge density
    # leaves a bounded integrand.  prefactor ~ |lam| weights each reservoir
    # only after integration, so the absolute target relaxes accordingly
    # (prefactor < 1 always, the two shares sum to at most spec.abs_tol
    # after weighting); the slack also covers roundoff in the edge layer.
    edge = 1.0 if q_s > 0.0 else -1.0
    r = abs(q_s)
    geometric = q_s * q_s / ((1.0 - r) * (1.0 + r))
    budget = replace(spec, abs_tol=0.5 * spec.abs_tol / prefactor)

    def reservoir(beta: float) -> float:
        rho_edge = planck_density(beta, edge)

        def regular(k: float) -> float:
            drho = planck_density(beta, math.cos(k)) - rho_edge
            return drho * geometric_sine_sum(q_s, k) ** 2

        tail = (2.0 / _PI) * adaptive_integrate(regular, 0.0, _PI, budget).value
        return rho_edge * geometric + tail

    # Sample sites hold occupation 1/2 each; staggering squares away.
    sample = 0.5 * sum(state.amplitude(x) ** 2 for x in range(-nu, nu + 1))

    weight = prefactor * (reservoir(th.beta_l) + reservoir(th.beta_r)) + sample
    return float(weight)


def pp_weight(
    params: ModelParams,
    th: ThermalConfig,
    spec: QuadratureSpec | None = None,
    strict: bool = False,
) -> float:
    """Thermal weight of the initial state on the bound state, in [0, 1].

    Returns 0 at zero field by convention; with ``strict=True`` that case
    raises NoBoundState instead.  Nonzero fields below ~1e-16 raise
    NoBoundState unconditionally (the eigenvector tail is flat to double
    precision).  For ``|lam|`` under ~1e-6 the weight carries relative
    error up to ~eps/|lam| inherited from the tail ratio exp(-asinh|lam|);
    the bound-state term of ``s_element`` stays at machine accuracy
    regardless, its amplitudes scaling like sqrt(|lam|).
    """
    if params.lam == 0.0:
        if strict:
            raise NoBoundState("no bound state to weight at zero field strength")
        return 0.0
    spec = spec if spec is not None else QuadratureSpec()
    # caller breakpoints target [-pi, pi] integrals; invalid on [0, pi]
    return _pp_weight_cached(params, th, with_breakpoints(spec))
