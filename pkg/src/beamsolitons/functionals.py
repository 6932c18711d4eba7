"""Invariants and variational calculus for the beam Hamiltonian system.

States are pairs (u, v) on a periodic grid.  The two conserved
quantities of u_tt + u_xxxx + W'(u) = 0 are

    E(u, v) = 1/2 * int(v^2 + u_xx^2) + int W(u)      (energy)
    C(u, v) = -int(v * u_x)                           (momentum)

and the phase-space norm is ||(u, v)||^2 = int(v^2 + u_xx^2 + u^2).
Solitons arise as minimizers of the penalized ratio functional

    J_delta = E/|C| + delta * E

whose first variation is assembled here from the E and C gradients.  The
gradients are discrete fields paired through the grid quadrature: for
any perturbation (phi, psi), the Gateaux derivative equals
integrate(gu * phi) + integrate(gv * psi).

Two sampled infima frame the existence mechanism: lambda0_ratio bounds
(1/2)||u||^2 / |C| from below by 1 (exactly, via Cauchy-Schwarz on the
discrete sums), while scan_lambda_star certifies that E/|C| drops below 1
on a family of dilated bumps, so the ratio part of J prefers localized
nonlinear states over vanishing ones.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, as_field, diff, integrate
from .potential import PotentialModel, derivative as w_prime, evaluate as w_value

__all__ = [
    "FieldState",
    "InvariantSet",
    "BumpSpec",
    "RatioScanResult",
    "DegenerateMomentumError",
    "energy",
    "momentum",
    "x_norm_sq",
    "hylomorphic_j",
    "invariant_set",
    "energy_gradient",
    "momentum_gradient",
    "j_gradient",
    "lambda0_ratio",
    "bump_state",
    "scan_lambda_star",
]

MOMENTUM_FLOOR = 1e-14


class DegenerateMomentumError(ValueError):
    """Raised when |C| is too small for any ratio quantity to be defined."""


@dataclass(frozen=True)
class FieldState:
    """One point (u, v) of the discrete phase space."""

    u: np.ndarray
    v: np.ndarray
    grid: Grid

    def __post_init__(self):
        object.__setattr__(self, "u", as_field(self.grid, self.u))
        object.__setattr__(self, "v", as_field(self.grid, self.v))


@dataclass(frozen=True)
class InvariantSet:
    """E, C, the squared phase-space norm, and J at a stored delta."""

    energy: float
    momentum: float
    x_norm_sq: float
    j_value: float
    delta: float


def energy(state: FieldState, model: PotentialModel) -> float:
    """E = 1/2 int(v^2 + u_xx^2) + int W(u)."""
    g = state.grid
    kinetic = 0.5 * integrate(g, state.v ** 2)
    bending = 0.5 * integrate(g, diff(g, state.u, 2) ** 2)
    potential = integrate(g, w_value(model, state.u))
    for name, term in (("kinetic", kinetic), ("bending", bending), ("potential", potential)):
        if not math.isfinite(term):
            raise FloatingPointError(f"energy term {name} is non-finite")
    return kinetic + bending + potential


def momentum(state: FieldState) -> float:
    """C = -int(v * u_x)."""
    g = state.grid
    value = -integrate(g, state.v * diff(g, state.u, 1))
    if not math.isfinite(value):
        raise FloatingPointError("momentum is non-finite")
    return value


def x_norm_sq(state: FieldState) -> float:
    """Squared phase-space norm int(v^2 + u_xx^2 + u^2)."""
    g = state.grid
    return integrate(g, state.v ** 2 + diff(g, state.u, 2) ** 2 + state.u ** 2)


def hylomorphic_j(state: FieldState, model: PotentialModel, delta: float) -> float:
    """J = E/|C| + delta*E; undefined when C degenerates."""
    c = momentum(state)
    if abs(c) < MOMENTUM_FLOOR:
        raise DegenerateMomentumError(f"momentum {c:.3e} below {MOMENTUM_FLOOR:.0e}")
    e = energy(state, model)
    return e / abs(c) + delta * e


def invariant_set(state: FieldState, model: PotentialModel, delta: float) -> InvariantSet:
    return InvariantSet(
        energy(state, model),
        momentum(state),
        x_norm_sq(state),
        hylomorphic_j(state, model, delta),
        delta,
    )


def energy_gradient(state: FieldState, model: PotentialModel) -> tuple[np.ndarray, np.ndarray]:
    """(dE/du, dE/dv) = (u_xxxx + W'(u), v) under the quadrature pairing."""
    g = state.grid
    return diff(g, state.u, 4) + w_prime(model, state.u), state.v.copy()


def momentum_gradient(state: FieldState) -> tuple[np.ndarray, np.ndarray]:
    """(dC/du, dC/dv) = (v_x, -u_x) under the quadrature pairing."""
    g = state.grid
    return diff(g, state.v, 1), -diff(g, state.u, 1)


def j_gradient(
    state: FieldState, model: PotentialModel, delta: float
) -> tuple[np.ndarray, np.ndarray]:
    """Gradient of J: (1/|C| + delta)*gradE - sign(C)*(E/C^2)*gradC."""
    c = momentum(state)
    if abs(c) < MOMENTUM_FLOOR:
        raise DegenerateMomentumError(f"momentum {c:.3e} below {MOMENTUM_FLOOR:.0e}")
    e = energy(state, model)
    geu, gev = energy_gradient(state, model)
    gcu, gcv = momentum_gradient(state)
    a = 1.0 / abs(c) + delta
    b = math.copysign(1.0, c) * e / c ** 2
    return a * geu - b * gcu, a * gev - b * gcv


def lambda0_ratio(state: FieldState) -> float:
    """(1/2)||(u, v)||^2 / |C|, the sampled lower-bound ratio (>= 1)."""
    c = momentum(state)
    if abs(c) < MOMENTUM_FLOOR:
        raise DegenerateMomentumError(f"momentum {c:.3e} below {MOMENTUM_FLOOR:.0e}")
    return 0.5 * x_norm_sq(state) / abs(c)


@dataclass(frozen=True)
class BumpSpec:
    """Smooth compactly supported seed profile scale*exp(-1/(1-(x/radius)^2)).

    The default scale e normalizes the peak to 1.  The profile is C-infinity
    with support [-radius, radius]; dilation by lambda stretches the support
    to [-lambda*radius, lambda*radius].
    """

    radius: float = 1.0
    scale: float = math.e


def _bump_value(spec: BumpSpec, y: np.ndarray) -> np.ndarray:
    out = np.zeros_like(y)
    inside = np.abs(y) < spec.radius
    z = y[inside] / spec.radius
    out[inside] = spec.scale * np.exp(-1.0 / (1.0 - z * z))
    return out


def _bump_slope(spec: BumpSpec, y: np.ndarray) -> np.ndarray:
    # d/dy of scale*exp(-1/(1-(y/r)^2)) = value * (-2y/r^2) / (1-(y/r)^2)^2
    out = np.zeros_like(y)
    inside = np.abs(y) < spec.radius
    z = y[inside] / spec.radius
    val = spec.scale * np.exp(-1.0 / (1.0 - z * z))
    out[inside] = val * (-2.0 * z / spec.radius) / (1.0 - z * z) ** 2
    return out


def bump_state(grid: Grid, spec: BumpSpec, R: float, lam: float) -> FieldState:
    """Dilated-bump state u = R*U0(x/lam), v = -R*d/dx[U0(x/lam)].

    The velocity sign makes C = R^2 * int(d/dx[U0(x/lam)])^2 > 0, the
    momentum convention every minimization run keeps.
    """
    if lam <= 0 or R < 0:
        raise ValueError("require lam > 0 and R >= 0")
    if lam * spec.radius >= grid.half_length:
        raise ValueError(
            f"dilated bump support {lam * spec.radius:g} exceeds the box "
            f"{grid.half_length:g}; enlarge half_length or reduce lambda"
        )
    u = R * _bump_value(spec, grid.x / lam)
    v = -R * _bump_slope(spec, grid.x / lam) / lam
    return FieldState(u, v, grid)


@dataclass(frozen=True)
class RatioScanResult:
    """Scan of E/|C| and the lower-bound ratio over the (R, lambda) family."""

    best_ratio: float
    best_R: float
    best_lambda: float
    lambda0_floor: float
    table: list = field(repr=False)

    CSV_HEADER = "R,lambda,ratio,lambda0_ratio,uu_ok"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for R, lam, ratio, l0, uu in self.table:
            lines.append(f"{R!r},{lam!r},{ratio!r},{l0!r},{int(uu)}")
        return "\n".join(lines) + "\n"


def _scan_row(model, grid, spec, R, lam, uu_ok):
    state = bump_state(grid, spec, R, lam)
    ratio = energy(state, model) / abs(momentum(state))
    return (float(R), float(lam), ratio, lambda0_ratio(state), uu_ok)


def scan_lambda_star(
    model: PotentialModel,
    grid: Grid,
    spec: BumpSpec,
    R_values,
    lambda_values,
    max_workers: int | None = None,
) -> RatioScanResult:
    """Tabulate E/|C| over dilated bumps; the minimum certifies E/|C| < 1.

    For each lambda the second-to-first derivative energy ratio
    int(u_xx^2)/int(u_x^2) of the unit-amplitude dilated bump is compared
    against 1/2 (it scales as lambda^-2, so wide bumps pass); the flag is
    reported per row.  Rows are computed in parallel and merged by index.
    """
    R_values = [float(R) for R in R_values]
    lambda_values = [float(l) for l in lambda_values]
    if not R_values or not lambda_values:
        raise ValueError("R_values and lambda_values must be nonempty")

    uu_by_lambda = {}
    for lam in lambda_values:
        probe = bump_state(grid, spec, 1.0, lam)
        num = integrate(grid, diff(grid, probe.u, 2) ** 2)
        den = integrate(grid, diff(grid, probe.u, 1) ** 2)
        uu_by_lambda[lam] = bool(num / den < 0.5)

    jobs = [(R, lam) for R in R_values for lam in lambda_values]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        rows = list(
            pool.map(lambda rl: _scan_row(model, grid, spec, rl[0], rl[1], uu_by_lambda[rl[1]]), jobs)
        )

    ratios = [row[2] for row in rows]
    best = int(np.argmin(ratios))
    floor = min(row[3] for row in rows)
    return RatioScanResult(rows[best][2], rows[best][0], rows[best][1], floor, rows)
