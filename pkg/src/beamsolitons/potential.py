"""Nonlinearities W for the beam equation u_tt + u_xxxx + W'(u) = 0.

Two built-in models describe the restoring force of a suspension-bridge
roadway:

    bridge_piecewise:  W(s) = s^2/2      for s <= 1
                       W(s) = s - 1/2    for s >= 1
    bridge_smooth:     W(s) = s - 1 + exp(-s)

Both are normalized so W(0) = W'(0) = 0 and W''(0) = 1.  Solitary waves
exist because W grows subquadratically for large positive s; that and the
two positivity conditions below are machine-checkable hypotheses:

    positivity:     W(s) >= eta * s^2 for |s| <= 1,  W(s) >= eta for |s| >= 1
    nondegeneracy:  W''(0) = 1
    hylomorphy:     W(s) <= M * s^alpha for s >= 0, with 0 <= alpha < 2

`check_assumptions` evaluates all three on a sample set and reports
worst-case margins, so a model's hypotheses are tested instead of assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "PotentialModel",
    "AssumptionReport",
    "bridge_piecewise",
    "bridge_smooth",
    "make_potential",
    "custom_model_names",
    "evaluate",
    "derivative",
    "nonlinear_part",
    "check_assumptions",
]


@dataclass(frozen=True)
class PotentialModel:
    """A potential W with its derivative and assumption constants.

    w and w_prime accept floats or numpy arrays elementwise.  eta, M and
    alpha are the constants entering the positivity and hylomorphy
    inequalities; w_second_at_zero stores the analytic W''(0).
    """

    kind: str
    eta: float
    hylomorphy_M: float
    hylomorphy_alpha: float
    w: Callable[[np.ndarray], np.ndarray]
    w_prime: Callable[[np.ndarray], np.ndarray]
    w_second_at_zero: float = 1.0


@dataclass(frozen=True)
class AssumptionReport:
    """Pass/fail plus worst-case margins for the three hypotheses.

    positivity_margin is min over samples of W(s) - eta*min(s^2, 1); it
    must be >= (a rounding slack below) 0.  hylomorphy_margin is max over
    sampled s >= 0 of W(s) - M*s^alpha; it must be <= 0.
    nondegeneracy_margin is |second difference of W at 0 - 1|.
    """

    positivity_ok: bool
    positivity_margin: float
    nondegeneracy_ok: bool
    nondegeneracy_margin: float
    hylomorphy_ok: bool
    hylomorphy_margin: float
    samples: str

    @property
    def passed(self) -> bool:
        return self.positivity_ok and self.nondegeneracy_ok and self.hylomorphy_ok

    def summary_lines(self) -> list[str]:
        rows = [
            ("positivity  W(s) >= eta*min(s^2,1)", self.positivity_ok, self.positivity_margin),
            ("nondegeneracy  W''(0) = 1", self.nondegeneracy_ok, self.nondegeneracy_margin),
            ("hylomorphy  W(s) <= M*s^alpha", self.hylomorphy_ok, self.hylomorphy_margin),
        ]
        out = []
        for label, ok, margin in rows:
            out.append(f"{'PASS' if ok else 'FAIL'}  {label}  margin={margin:+.3e}")
        out.append(f"      samples: {self.samples}")
        return out


def _w1(s):
    s = np.asarray(s, dtype=float)
    return np.where(s <= 1.0, 0.5 * s * s, s - 0.5)


def _w1_prime(s):
    s = np.asarray(s, dtype=float)
    return np.where(s <= 1.0, s, 1.0)


def _w2(s):
    s = np.asarray(s, dtype=float)
    return s - 1.0 + np.exp(-s)


def _w2_prime(s):
    s = np.asarray(s, dtype=float)
    return 1.0 - np.exp(-s)


def bridge_piecewise(eta: float = 0.5, M: float = 1.0, alpha: float = 1.0) -> PotentialModel:
    """Piecewise bridge potential, validated at construction."""
    model = PotentialModel("bridge_piecewise", eta, M, alpha, _w1, _w1_prime, 1.0)
    _validate_builtin(model)
    return model


def bridge_smooth(eta: float = 0.1, M: float = 1.0, alpha: float = 1.0) -> PotentialModel:
    """Smooth bridge potential, validated at construction."""
    model = PotentialModel("bridge_smooth", eta, M, alpha, _w2, _w2_prime, 1.0)
    _validate_builtin(model)
    return model


def _quartic(s):
    s = np.asarray(s, dtype=float)
    return s ** 4


def _quartic_prime(s):
    s = np.asarray(s, dtype=float)
    return 4.0 * s ** 3


def _zero(s):
    return np.zeros_like(np.asarray(s, dtype=float))


# Named custom models.  These are intentionally not validated at
# construction: quartic_test exists to demonstrate a hylomorphy failure,
# zero_force turns the integrator's kick off for linear-dispersion tests.
_CUSTOM_MODELS: dict[str, Callable[[], PotentialModel]] = {
    "quartic_test": lambda: PotentialModel(
        "custom", 0.25, 1.0, 1.0, _quartic, _quartic_prime, 0.0
    ),
    "zero_force": lambda: PotentialModel("custom", 0.25, 1.0, 1.0, _zero, _zero, 0.0),
}


def custom_model_names() -> list[str]:
    return sorted(_CUSTOM_MODELS)


def make_potential(
    kind: str,
    custom_name: str | None = None,
    eta: float | None = None,
    M: float | None = None,
    alpha: float | None = None,
) -> PotentialModel:
    """Build a model by kind, with optional overrides of the constants.

    kind "custom" selects one of the registered named models; overrides
    replace the declared constants but never the potential itself.
    """
    if kind == "bridge_piecewise":
        base = bridge_piecewise()
    elif kind == "bridge_smooth":
        base = bridge_smooth()
    elif kind == "custom":
        if custom_name not in _CUSTOM_MODELS:
            raise ValueError(
                f"unknown custom model {custom_name!r}; available: {custom_model_names()}"
            )
        base = _CUSTOM_MODELS[custom_name]()
    else:
        raise ValueError(f"unknown potential kind {kind!r}")
    if eta is not None or M is not None or alpha is not None:
        base = PotentialModel(
            base.kind,
            base.eta if eta is None else float(eta),
            base.hylomorphy_M if M is None else float(M),
            base.hylomorphy_alpha if alpha is None else float(alpha),
            base.w,
            base.w_prime,
            base.w_second_at_zero,
        )
        if base.eta <= 0 or base.hylomorphy_M <= 0 or not 0 <= base.hylomorphy_alpha < 2:
            raise ValueError("require eta > 0, M > 0, 0 <= alpha < 2")
    return base


def evaluate(model: PotentialModel, s):
    """W(s) elementwise; rejects non-finite input."""
    s = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(s)):
        raise ValueError("non-finite argument to potential")
    return model.w(s)


def derivative(model: PotentialModel, s):
    """W'(s) elementwise; rejects non-finite input."""
    s = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(s)):
        raise ValueError("non-finite argument to potential")
    return model.w_prime(s)


def nonlinear_part(model: PotentialModel, s):
    """N(s) = W(s) - s^2/2, the deviation from the linearization at 0."""
    s = np.asarray(s, dtype=float)
    return evaluate(model, s) - 0.5 * s * s


def _sample_points(s_min: float, s_max: float, n_samples: int) -> np.ndarray:
    # Uniform coverage plus a logarithmic refinement near 0, where the
    # positivity and nondegeneracy margins degenerate quadratically.
    pts = [np.linspace(s_min, s_max, n_samples)]
    tiny = 10.0 ** np.linspace(-8, 0, 200)
    for sgn in (1.0, -1.0):
        refined = sgn * tiny
        pts.append(refined[(refined >= s_min) & (refined <= s_max)])
    return np.unique(np.concatenate(pts))


def check_assumptions(
    model: PotentialModel, s_min: float, s_max: float, n_samples: int
) -> AssumptionReport:
    """Evaluate the three hypotheses on a sample of [s_min, s_max].

    All margins are reported even when a check fails, so a failing model
    still yields a complete diagnostic.
    """
    if not (s_min < s_max):
        raise ValueError("require s_min < s_max")
    if n_samples < 100:
        raise ValueError("require n_samples >= 100")
    s = _sample_points(s_min, s_max, n_samples)
    ws = evaluate(model, s)

    floor = model.eta * np.minimum(s * s, 1.0)
    pos_margin = float(np.min(ws - floor))
    scale = max(1.0, float(np.max(np.abs(ws))))
    positivity_ok = pos_margin >= -1e-12 * scale

    nondegeneracy_margin = 0.0
    nondegeneracy_ok = abs(model.w_second_at_zero - 1.0) <= 1e-10
    for h in (1e-3, 1e-4):
        cd2 = (float(model.w(h)) - 2.0 * float(model.w(0.0)) + float(model.w(-h))) / h ** 2
        nondegeneracy_margin = max(nondegeneracy_margin, abs(cd2 - 1.0))
        if abs(cd2 - 1.0) > 10.0 * h * h:
            nondegeneracy_ok = False

    s_pos = s[s >= 0.0]
    bound = model.hylomorphy_M * s_pos ** model.hylomorphy_alpha
    hyl_margin = float(np.max(evaluate(model, s_pos) - bound))
    hylomorphy_ok = hyl_margin <= 1e-12 * scale

    desc = f"uniform[{s_min:g},{s_max:g}] x {n_samples} + log refinement near 0"
    return AssumptionReport(
        positivity_ok,
        pos_margin,
        nondegeneracy_ok,
        nondegeneracy_margin,
        hylomorphy_ok,
        hyl_margin,
        desc,
    )


def _validate_builtin(model: PotentialModel) -> None:
    report = check_assumptions(model, -5.0, 50.0, 2000)
    if not report.passed:
        raise ValueError(
            f"built-in potential {model.kind} failed its own hypotheses:\n"
            + "\n".join(report.summary_lines())
        )
