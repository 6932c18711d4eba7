"""Time integration of the beam system u_t = v, v_t = -u_xxxx - W'(u).

The integrator is Strang splitting: a half step of the linear beam flow,
a full nonlinear kick, another half linear step.  The linear flow
u_tt = -u_xxxx is advanced exactly in Fourier space, where each mode is
a harmonic oscillator of frequency omega_k = k^2 (the k = 0 pair drifts
as u0 += t*v0).  Because both sub-flows are exact, the scheme is
second-order accurate, time-reversible, and free of any linear stability
restriction; the documented step bound |dt|*k_max^2 <= 2*pi is an
accuracy criterion that keeps the fastest mode's per-step rotation below
one full turn.  The kick uses only W', which is Lipschitz for both bridge
potentials (the piecewise one has a jump in W'' but not in W'), so no
special-casing is needed.

Diagnostics target the two conservation laws and the traveling-wave
picture: energy E and momentum C along the flow, the tracked translation
xi(t) of the profile, the shift-minimized shape error, the distance to
the translation orbit of a reference pair measured in the X norm
(v^2 + u_xx^2 + u^2 under the integral), and the Liapunov value
V(t) = (E - e0)^2 + (C - p0)^2 which is constant in time because both
invariants are.  Momentum is conserved by the scheme itself up to the
nonlinearity's aliasing: the kick changes C by a multiple of the
integral of d/dx W(u), which vanishes identically on the periodic box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .functionals import FieldState, energy, momentum, x_norm_sq
from .grid import Grid, integrate, shift
from .potential import PotentialModel, derivative as w_prime

__all__ = [
    "EvolveConfig",
    "EvolutionRecord",
    "InstabilityError",
    "default_dt",
    "step",
    "evolve",
    "track_shift",
    "orbit_distance",
    "stability_experiment",
]

BLOWUP_THRESHOLD = 1e6
STEP_ROTATION_BOUND = 2.0 * math.pi


class InstabilityError(RuntimeError):
    """The field amplitude blew past the blow-up threshold."""

    def __init__(self, message: str, time: float | None = None):
        super().__init__(message)
        self.time = time


@dataclass(frozen=True)
class EvolveConfig:
    """Integration horizon and sampling cadence.

    dt = None selects the default accuracy-driven step
    0.2 * (2*pi / k_max^2), one fifth of a turn of the fastest mode.
    """

    t_final: float
    dt: float | None = None
    sample_stride: int = 50
    integrator: str = "strang_split"

    def __post_init__(self):
        if self.t_final <= 0:
            raise ValueError("t_final must be positive")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive (or None for the default)")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be >= 1")
        if self.integrator != "strang_split":
            raise ValueError("integrator must be 'strang_split'")

    def resolved_dt(self, grid: Grid) -> float:
        dt = self.dt if self.dt is not None else default_dt(grid)
        if self.t_final < dt:
            raise ValueError("t_final must be at least one time step")
        return dt


@dataclass(frozen=True)
class EvolutionRecord:
    """Sampled conservation and orbit diagnostics along one trajectory."""

    times: np.ndarray
    energy_series: np.ndarray
    momentum_series: np.ndarray
    shift_series: np.ndarray
    shape_error_series: np.ndarray
    orbit_distance_series: np.ndarray
    liapunov_series: np.ndarray

    CSV_HEADER = "t,E,C,xi,shape_err,orbit_dist,V"

    def __post_init__(self):
        n = len(self.times)
        for name in ("energy_series", "momentum_series", "shift_series",
                     "shape_error_series", "orbit_distance_series", "liapunov_series"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length differs from times")
        if n > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for row in zip(self.times, self.energy_series, self.momentum_series,
                       self.shift_series, self.shape_error_series,
                       self.orbit_distance_series, self.liapunov_series):
            lines.append(",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"


def default_dt(grid: Grid) -> float:
    """0.2 * (2*pi / k_max^2); the fastest mode turns a fifth of a circle."""
    k_max = float(grid.wavenumbers[-1])
    return 0.2 * (2.0 * math.pi / (k_max * k_max))


def _linear_flow(grid: Grid, u: np.ndarray, v: np.ndarray, t: float):
    """Exact flow of u_tt = -u_xxxx: per-mode rotation at frequency k^2."""
    w = grid.wavenumbers ** 2
    uh = np.fft.rfft(u)
    vh = np.fft.rfft(v)
    wt = w * t
    c = np.cos(wt)
    s = np.sin(wt)
    # sin(wt)/w, continued to t at w = 0 so the mean drifts as u0 + t*v0
    s_over_w = np.divide(s, w, out=np.full_like(w, t), where=w > 0)
    n = grid.n_points
    u_new = np.fft.irfft(uh * c + vh * s_over_w, n)
    v_new = np.fft.irfft(-uh * w * s + vh * c, n)
    return u_new, v_new


def step(state: FieldState, model: PotentialModel, dt: float) -> FieldState:
    """One Strang step L(dt/2) K(dt) L(dt/2); exact inverse under dt -> -dt.

    Accepts negative dt (backward integration).  Requires
    |dt| * k_max^2 <= 2*pi and raises InstabilityError when max |u|
    exceeds the blow-up threshold.
    """
    g = state.grid
    k_max = float(g.wavenumbers[-1])
    if abs(dt) * k_max * k_max > STEP_ROTATION_BOUND:
        raise ValueError(
            f"|dt|*k_max^2 = {abs(dt) * k_max ** 2:.3g} exceeds the "
            f"accuracy bound {STEP_ROTATION_BOUND:.3g}"
        )
    u, v = _linear_flow(g, state.u, state.v, 0.5 * dt)
    v = v - dt * w_prime(model, u)
    u, v = _linear_flow(g, u, v, 0.5 * dt)
    peak = float(np.max(np.abs(u)))
    if not math.isfinite(peak) or peak > BLOWUP_THRESHOLD:
        raise InstabilityError(f"max |u| = {peak:.3e} exceeded {BLOWUP_THRESHOLD:g}")
    return FieldState(u, v, g)


def track_shift(state: FieldState, reference: FieldState) -> float:
    """Translation tau maximizing the correlation of u against the reference.

    The cyclic cross-correlation is evaluated at every grid lag by FFT and
    the peak is refined to sub-grid accuracy by quadratic interpolation
    through its two neighbors.
    """
    g = state.grid
    ur = reference.u
    if float(np.max(np.abs(ur))) == 0.0:
        raise ValueError("reference profile is identically zero")
    n = g.n_points
    corr = np.fft.irfft(np.fft.rfft(state.u) * np.conj(np.fft.rfft(ur)), n)
    m = int(np.argmax(corr))
    cm, c0, cp = corr[(m - 1) % n], corr[m], corr[(m + 1) % n]
    denom = cm - 2.0 * c0 + cp
    frac = 0.5 * (cm - cp) / denom if denom != 0.0 else 0.0
    tau = (m + frac) * g.dx
    half = g.half_length
    if tau > half:
        tau -= 2.0 * half
    return float(tau)


def _shifted(reference: FieldState, tau: float) -> FieldState:
    g = reference.grid
    return FieldState(shift(g, reference.u, tau), shift(g, reference.v, tau), g)


def _x_distance(state: FieldState, other: FieldState) -> float:
    du = state.u - other.u
    dv = state.v - other.v
    return math.sqrt(x_norm_sq(FieldState(du, dv, state.grid)))


def orbit_distance(state: FieldState, reference: FieldState) -> float:
    """min over tau of the X-norm distance to the translated reference pair.

    All grid lags are evaluated at once by weighted FFT correlation
    (weights 1 + k^4 on u, 1 on v), then the best lag is refined by a
    bounded scalar minimization of the exact shifted distance.
    """
    g = state.grid
    n = g.n_points
    w = 1.0 + g.wavenumbers ** 4
    fu, fv = np.fft.rfft(state.u), np.fft.rfft(state.v)
    gu, gv = np.fft.rfft(reference.u), np.fft.rfft(reference.v)
    inner = g.dx * np.fft.irfft(w * fu * np.conj(gu) + fv * np.conj(gv), n)
    a2 = x_norm_sq(state)
    b2 = x_norm_sq(reference)
    dist2 = np.maximum(a2 + b2 - 2.0 * inner, 0.0)
    m = int(np.argmin(dist2))
    tau0 = m * g.dx

    # minimize over the offset from the grid lag, not tau itself: the
    # scalar solver's internal relative tolerance then stays at the
    # rounding level instead of growing with |tau|
    def objective(s: float) -> float:
        return _x_distance(state, _shifted(reference, tau0 + s))

    res = minimize_scalar(objective, bounds=(-g.dx, g.dx),
                          method="bounded", options={"xatol": 1e-10})
    return float(min(res.fun, math.sqrt(dist2[m])))


def evolve(
    state: FieldState,
    model: PotentialModel,
    config: EvolveConfig,
    reference: FieldState | None = None,
    invariant_targets: tuple[float, float] | None = None,
) -> EvolutionRecord:
    """Integrate to t_final, sampling diagnostics every sample_stride steps.

    Shape, shift, and orbit diagnostics are measured against `reference`
    (the initial state when omitted).  The Liapunov value uses
    `invariant_targets` (e0, p0), defaulting to the initial energy and
    momentum so that V starts at zero for an unperturbed run.  A zero
    reference profile yields absolute diagnostics: xi = 0, shape error
    the plain L2 norm of u, orbit distance the plain X norm.

    The state stays spectral between force evaluations: consecutive
    linear half steps are fused into one rotation and physical space is
    entered only for W'(u) and at sample times.  The trajectory is the
    same Strang composition as repeated `step` calls, but with a quarter
    of the transforms the rounding walk on the invariants grows several
    times slower, which matters when E and C must hold to 1e-10.
    """
    g = state.grid
    dt = config.resolved_dt(g)
    k_max = float(g.wavenumbers[-1])
    if dt * k_max * k_max > STEP_ROTATION_BOUND:
        raise ValueError(
            f"|dt|*k_max^2 = {dt * k_max ** 2:.3g} exceeds the "
            f"accuracy bound {STEP_ROTATION_BOUND:.3g}"
        )
    n_steps = max(1, int(round(config.t_final / dt)))
    ref = reference if reference is not None else state
    ref_l2 = math.sqrt(integrate(g, ref.u ** 2))
    if invariant_targets is None:
        invariant_targets = (energy(state, model), momentum(state))
    e0, p0 = invariant_targets

    times, es, cs, xis, shapes, orbits, liaps = [], [], [], [], [], [], []

    def sample(t: float, st: FieldState):
        e = energy(st, model)
        c = momentum(st)
        if ref_l2 > 0.0:
            xi = track_shift(st, ref)
            err = _x_distance_l2(st, ref, xi) / ref_l2
            od = orbit_distance(st, ref)
        else:
            xi = 0.0
            err = math.sqrt(integrate(g, st.u ** 2))
            od = math.sqrt(x_norm_sq(st))
        times.append(t)
        es.append(e)
        cs.append(c)
        xis.append(xi)
        shapes.append(err)
        orbits.append(od)
        liaps.append((e - e0) ** 2 + (c - p0) ** 2)

    def _x_distance_l2(st: FieldState, rf: FieldState, tau: float) -> float:
        return math.sqrt(integrate(g, (st.u - shift(g, rf.u, tau)) ** 2))

    n = g.n_points
    w2 = g.wavenumbers ** 2

    def rotation(t: float):
        wt = w2 * t
        c = np.cos(wt)
        s = np.sin(wt)
        # sin(wt)/w^2, continued to t at w = 0: the mean drifts as u0 + t*v0
        s_over = np.divide(s, w2, out=np.full_like(w2, t), where=w2 > 0)
        return c, s_over, w2 * s

    def rotate(uh, vh, rot):
        c, s_over, ws = rot
        return uh * c + vh * s_over, -uh * ws + vh * c

    def check_peak(u: np.ndarray, t: float) -> None:
        peak = float(np.max(np.abs(u)))
        if not math.isfinite(peak) or peak > BLOWUP_THRESHOLD:
            raise InstabilityError(
                f"max |u| = {peak:.3e} exceeded {BLOWUP_THRESHOLD:g} "
                f"at t = {t:.6g}", time=t,
            )

    half = rotation(0.5 * dt)
    full = rotation(dt)

    sample(0.0, state)
    uh = np.fft.rfft(state.u)
    vh = np.fft.rfft(state.v)
    done = 0
    while done < n_steps:
        until_sample = config.sample_stride - done % config.sample_stride
        block = min(until_sample, n_steps - done)
        uh, vh = rotate(uh, vh, half)
        for j in range(block):
            u_mid = np.fft.irfft(uh, n)
            check_peak(u_mid, (done + j + 1) * dt)
            vh = vh - dt * np.fft.rfft(w_prime(model, u_mid))
            if j < block - 1:
                uh, vh = rotate(uh, vh, full)
        uh, vh = rotate(uh, vh, half)
        done += block
        current = FieldState(np.fft.irfft(uh, n), np.fft.irfft(vh, n), g)
        check_peak(current.u, done * dt)
        sample(done * dt, current)

    return EvolutionRecord(
        np.asarray(times), np.asarray(es), np.asarray(cs), np.asarray(xis),
        np.asarray(shapes), np.asarray(orbits), np.asarray(liaps),
    )


def stability_experiment(
    profile,
    model: PotentialModel,
    epsilon: float,
    config: EvolveConfig,
    seed: int = 0,
) -> EvolutionRecord:
    """Evolve a seeded perturbation of the profile and record orbit diagnostics.

    The perturbation is smooth (band-limited to the lowest quarter of the
    modes so it has bounded X norm independent of resolution), zero-mean,
    drawn from a counter-based generator keyed by `seed`, and scaled to
    relative X-norm size epsilon.  The Liapunov value is measured against
    the unperturbed profile's (e0, p0), so V(t) is a positive constant
    for epsilon > 0.  The certified regime is 0 < epsilon <= 0.1; larger
    values run fine but land outside the small-perturbation estimates,
    and epsilon = 0 reduces to the pure transport run.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    base = profile.state
    g = base.grid
    state = base
    if epsilon > 0:
        rng = np.random.Generator(np.random.Philox(seed))
        n = g.n_points
        cutoff = max(2, n // 8)  # rfft slots below a quarter of k_max
        du = _band_limited_field(rng, g, cutoff)
        dv = _band_limited_field(rng, g, cutoff)
        size = math.sqrt(x_norm_sq(FieldState(du, dv, g)))
        target = epsilon * math.sqrt(x_norm_sq(base))
        du *= target / size
        dv *= target / size
        state = FieldState(base.u + du, base.v + dv, g)
    e0 = profile.invariants_at_min.energy
    p0 = profile.invariants_at_min.momentum
    return evolve(state, model, config, reference=base, invariant_targets=(e0, p0))


def _band_limited_field(rng: np.random.Generator, grid: Grid, cutoff: int) -> np.ndarray:
    n = grid.n_points
    spectrum = np.zeros(n // 2 + 1, dtype=complex)
    live = slice(1, cutoff)  # slot 0 stays empty: zero mean
    count = cutoff - 1
    spectrum[live] = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    return np.fft.irfft(spectrum, n)
