"""Brute-force finite-lattice verifier for the closed-form steady state.

Everything here is deliberately independent of the quadrature modules: the
chain is truncated to a window ``[-M, M]`` with open ends, the Hamiltonians
are built densely from the shared stencil, the decoupled initial state is
assembled by per-block functional calculus, and correlations are evolved
exactly through the dense eigendecomposition.  Large-time averages of these
finite evolutions are the yardstick the analytic formulas are tested
against.

Evolution convention: ``omega_xy(t) = (exp(ith) e_x, S exp(ith) e_y)`` with
``h`` the field Hamiltonian and ``S`` the initial two-point matrix.  The
open ends reflect ballistically with unit group velocity, so every routine
enforces a time horizon keeping the light cone safely inside the window.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh
from scipy.special import expit

from .exceptions import (
    ConsistencyError,
    DomainError,
    ResourceLimit,
    TimeHorizonExceeded,
)
from .model import ModelParams, OperatorKind, ThermalConfig, operator_stencil

# half-width caps: below 10 the guard window is empty, above 5000 a dense
# eigensolve stops being a sane oracle
_MIN_HALF_WIDTH = 10
_MAX_HALF_WIDTH = 5000
_DEFAULT_MEMORY_CAP = 2 << 30

# an eigenvalue this far beyond the band edge marks the bound state
_BAND_EDGE_TOL = 1e-9

_REFLECTION_MARGIN = 0.8


def _real_apply(mat: np.ndarray, z: np.ndarray) -> np.ndarray:
    # real matrix times complex block without upcasting the matrix; the
    # real/imag views are strided, which would knock numpy off the BLAS path
    re = mat @ np.ascontiguousarray(z.real)
    im = mat @ np.ascontiguousarray(z.imag)
    return re + 1j * im


@dataclass(eq=False)
class TruncatedSystem:
    """Dense window ``[-M, M]`` of the chain; immutable after construction.

    Hamiltonians for all three stencil kinds are built eagerly; the
    factorizations of the field and decoupled kinds are computed at build
    time, the free one on first use.  Initial-state matrices are cached per
    temperature pair.
    """

    M: int
    params: ModelParams
    hamiltonians: dict[OperatorKind, np.ndarray]
    _factorizations: dict[OperatorKind, tuple[np.ndarray, np.ndarray]] = field(
        default_factory=dict
    )
    _state_cache: dict[tuple[float, float], np.ndarray] = field(default_factory=dict)

    @property
    def n_sites(self) -> int:
        return 2 * self.M + 1

    @property
    def sites(self) -> range:
        return range(-self.M, self.M + 1)

    def index(self, x: int) -> int:
        if abs(x) > self.M:
            raise DomainError(f"site {x} outside window [-{self.M}, {self.M}]")
        return x + self.M

    def factorization(self, kind: OperatorKind) -> tuple[np.ndarray, np.ndarray]:
        if kind not in self._factorizations:
            self._factorizations[kind] = eigh(self.hamiltonians[kind])
        return self._factorizations[kind]

    def bound_data(self) -> tuple[float, np.ndarray] | None:
        """Out-of-band eigenpair of the field Hamiltonian, if resolved.

        A shallow bound state (tiny field, decay length beyond M) may not
        separate from the band on the truncation; then None is returned and
        the evolution split treats everything as band.
        """
        evals, evecs = self.factorization(OperatorKind.MAGNETIC)
        outside = np.nonzero(np.abs(evals) > 1.0 + _BAND_EDGE_TOL)[0]
        if outside.size == 0:
            return None
        if outside.size > 1:
            raise ConsistencyError(
                f"{outside.size} eigenvalues outside the band; the rank-one "
                "field admits at most one"
            )
        i = int(outside[0])
        return float(evals[i]), evecs[:, i].copy()


def build_truncation(
    M: int,
    params: ModelParams,
    max_bytes: int = _DEFAULT_MEMORY_CAP,
) -> TruncatedSystem:
    """Assemble the dense window and factor the field and decoupled kinds."""
    M = int(M)
    if not _MIN_HALF_WIDTH <= M <= _MAX_HALF_WIDTH:
        raise ValueError(
            f"half-width {M} outside [{_MIN_HALF_WIDTH}, {_MAX_HALF_WIDTH}]"
        )
    n = 2 * M + 1
    # 3 Hamiltonians + up to 3 eigenvector sets, all float64
    estimate = 6 * n * n * 8
    if estimate > max_bytes:
        raise ResourceLimit(
            f"window of {n} sites needs about {estimate / 2**30:.1f} GiB "
            f"of dense storage, above the {max_bytes / 2**30:.1f} GiB cap"
        )
    sites = list(range(-M, M + 1))
    hams: dict[OperatorKind, np.ndarray] = {}
    for kind in OperatorKind:
        mat = np.zeros((n, n))
        for i in range(n - 1):
            hop = operator_stencil(kind, params, sites[i], sites[i + 1])
            mat[i, i + 1] = hop
            mat[i + 1, i] = hop
        mat[M, M] = operator_stencil(kind, params, 0, 0)
        hams[kind] = mat
    sys = TruncatedSystem(M=M, params=params, hamiltonians=hams)
    sys.factorization(OperatorKind.MAGNETIC)
    sys.factorization(OperatorKind.DECOUPLED)
    return sys


def initial_two_point(sys: TruncatedSystem, th: ThermalConfig) -> np.ndarray:
    """Two-point matrix of the decoupled initial state on the window.

    Planck functional calculus of the left and right blocks of the
    decoupled Hamiltonian at their own temperatures, identity over two on
    the sample block.  The blocks are diagonalized separately: the two
    reservoir blocks are isospectral, and a joint factorization would be
    free to mix their degenerate eigenvectors, which the per-block form
    rules out by construction.
    """
    key = (th.beta_l, th.beta_r)
    cached = sys._state_cache.get(key)
    if cached is not None:
        return cached
    nu = sys.params.nu
    n = sys.n_sites
    n_res = sys.M - nu  # sites on each side beyond the sample
    if n_res <= 0:
        raise DomainError(f"sample half-width {nu} leaves no reservoir in window")
    h_d = sys.hamiltonians[OperatorKind.DECOUPLED]
    state = np.zeros((n, n))

    def planck_block(block: np.ndarray, beta: float) -> np.ndarray:
        w, u = eigh(block)
        return (u * expit(-beta * w)) @ u.T

    state[:n_res, :n_res] = planck_block(h_d[:n_res, :n_res], th.beta_l)
    mid = slice(n_res, n_res + 2 * nu + 1)
    state[mid, mid] = 0.5 * np.eye(2 * nu + 1)
    state[n - n_res :, n - n_res :] = planck_block(h_d[n - n_res :, n - n_res :], th.beta_r)
    sys._state_cache[key] = state
    return state


@dataclass(frozen=True, eq=False)
class EvolutionTrace:
    """Sampled evolution of one correlation matrix element.

    ``components`` optionally splits each sample into band-band, band-bound,
    bound-band, and bound-bound parts; the bound-bound part is constant in
    time because its two evolution phases cancel exactly.
    """

    times: np.ndarray
    values: np.ndarray
    components: dict[str, np.ndarray] | None = None

    def __post_init__(self) -> None:
        if self.times.size < 1 or np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be nonempty and strictly increasing")
        if np.max(np.abs(self.values)) > 1.0 + 1e-9:
            raise ConsistencyError("correlation sample above 1 in magnitude")
        if self.components is not None:
            pp = self.components["pp"]
            if np.max(np.abs(pp - pp[0])) > 1e-12:
                raise ConsistencyError("bound-bound component drifts in time")

    def to_csv(self) -> str:
        cols = ["t", "re", "im"]
        data = [self.times, self.values.real, self.values.imag]
        if self.components is not None:
            for name in ("aa", "ap", "pa", "pp"):
                cols += [f"re_{name}", f"im_{name}"]
                part = self.components[name]
                data += [part.real, part.imag]
        lines = [",".join(cols)]
        for row in zip(*data):
            lines.append(",".join(f"{v:.17g}" for v in row))
        return "\n".join(lines) + "\n"


def _check_horizon(sys: TruncatedSystem, x: int, y: int, t_max: float) -> None:
    horizon = _REFLECTION_MARGIN * (
        sys.M - max(abs(x), abs(y), sys.params.nu + 2)
    )
    if t_max > horizon:
        raise TimeHorizonExceeded(
            f"time {t_max} beyond the reflection horizon {horizon} of the "
            f"{sys.n_sites}-site window"
        )


def evolve_with_state(
    sys: TruncatedSystem,
    state: np.ndarray,
    x: int,
    y: int,
    times,
    split: bool = True,
) -> EvolutionTrace:
    """Evolve ``(e_x, S(t) e_y)`` for a caller-supplied initial matrix."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.size and times[0] < 0.0:
        raise ValueError("times must be nonnegative")
    if max(abs(x), abs(y)) > sys.M / 4:
        raise DomainError(f"sites ({x}, {y}) beyond a quarter of the window")
    _check_horizon(sys, x, y, float(times[-1]))

    evals, evecs = sys.factorization(OperatorKind.MAGNETIC)
    ix, iy = sys.index(x), sys.index(y)
    phases = np.exp(1j * np.outer(evals, times))  # (n, nt)
    frame_x = _real_apply(evecs, phases * evecs[ix, :][:, None])
    frame_y = _real_apply(evecs, phases * evecs[iy, :][:, None])

    bound = sys.bound_data() if split else None
    if bound is None:
        s_frame_y = _real_apply(state, frame_y)
        values = np.einsum("it,it->t", frame_x.conj(), s_frame_y)
        components = None
        if split:
            nt = times.size
            zero = np.zeros(nt, dtype=complex)
            components = {"aa": values.copy(), "ap": zero, "pa": zero.copy(), "pp": zero.copy()}
    else:
        energy, vec = bound
        phase_b = np.exp(1j * energy * times)
        pp_x = vec[:, None] * (vec[ix] * phase_b)[None, :]
        pp_y = vec[:, None] * (vec[iy] * phase_b)[None, :]
        ac_x = frame_x - pp_x
        ac_y = frame_y - pp_y
        s_ac_y = _real_apply(state, ac_y)
        s_pp_y = (state @ vec)[:, None] * (vec[iy] * phase_b)[None, :]
        components = {
            "aa": np.einsum("it,it->t", ac_x.conj(), s_ac_y),
            "ap": np.einsum("it,it->t", ac_x.conj(), s_pp_y),
            "pa": np.einsum("it,it->t", pp_x.conj(), s_ac_y),
            "pp": np.einsum("it,it->t", pp_x.conj(), s_pp_y),
        }
        values = components["aa"] + components["ap"] + components["pa"] + components["pp"]
    return EvolutionTrace(times=times, values=values, components=components)


def evolve_correlation(
    sys: TruncatedSystem,
    th: ThermalConfig,
    x: int,
    y: int,
    times,
    split: bool = True,
) -> EvolutionTrace:
    """Exact finite-window evolution of the decoupled initial correlation."""
    return evolve_with_state(sys, initial_two_point(sys, th), x, y, times, split)


def ness_estimate(
    sys: TruncatedSystem,
    th: ThermalConfig,
    x: int,
    y: int,
    t_star: float,
) -> complex:
    """Late-time estimate of the steady-state correlation at ``(x, y)``.

    Mean of the evolved correlation over ``[0.8 t_star, t_star]`` on a
    roughly unit-spaced grid; the averaging window damps the residual
    band-bound oscillation without a full time average.
    """
    t_star = float(t_star)
    if t_star < 100.0:
        raise ValueError(f"late-time estimate needs t_star >= 100, got {t_star}")
    n = int(round(0.2 * t_star)) + 1
    times = np.linspace(0.8 * t_star, t_star, n)
    trace = evolve_correlation(sys, th, x, y, times, split=False)
    return complex(np.mean(trace.values))


def oracle_flux(sys: TruncatedSystem, th: ThermalConfig, t_star: float) -> tuple[float, float]:
    """Steady fluxes out of the left and right reservoirs, by brute force.

    Each is half the imaginary part of the late-time correlation across the
    corresponding contact bond pair; energy conservation in the steady state
    makes them opposite.
    """
    nu = sys.params.nu
    j_left = 0.5 * ness_estimate(sys, th, -(nu + 2), -nu, t_star).imag
    j_right = 0.5 * ness_estimate(sys, th, nu + 2, nu, t_star).imag
    return float(j_left), float(j_right)


def numeric_wave_action(
    sys: TruncatedSystem,
    x: int,
    t: float,
    k_grid,
) -> np.ndarray:
    """Finite-time scattering approximation to the wave-operator action.

    Removes the bound component from the basis vector at ``x``, evolves
    forward under the field Hamiltonian and backward under the free one,
    and Fourier-transforms the result over the window.  Both evolutions
    spread with unit speed, so the horizon here is twice as strict.
    """
    t = float(t)
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    k_grid = np.atleast_1d(np.asarray(k_grid, dtype=float))
    if np.any(np.abs(k_grid) > np.pi):
        raise DomainError("momenta outside [-pi, pi]")
    horizon = 0.5 * _REFLECTION_MARGIN * (sys.M - max(abs(x), sys.params.nu + 2))
    if t > horizon:
        raise TimeHorizonExceeded(
            f"time {t} beyond the two-way horizon {horizon} of the window"
        )
    n = sys.n_sites
    psi = np.zeros(n)
    psi[sys.index(x)] = 1.0
    bound = sys.bound_data()
    if bound is not None:
        _, vec = bound
        psi = psi - vec * vec[sys.index(x)]
    evals_m, evecs_m = sys.factorization(OperatorKind.MAGNETIC)
    evals_0, evecs_0 = sys.factorization(OperatorKind.XY)
    phi = _real_apply(evecs_m, np.exp(1j * t * evals_m) * (evecs_m.T @ psi))
    chi = _real_apply(evecs_0, np.exp(-1j * t * evals_0) * _real_apply(evecs_0.T, phi))
    kernel = np.exp(1j * np.outer(k_grid, np.arange(-sys.M, sys.M + 1)))
    return kernel @ chi
