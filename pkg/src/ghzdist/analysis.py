"""Quantitative analysis of the distillation map.

First-order response extraction around the GHZ fixed point (with the
closed form available for the u1 round as an oracle), convergence-order
estimation from log-log slopes, attraction-basin threshold location by
bisection, and schedule-equivalence measurement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import qmat
from .protocol import (
    NOISELESS,
    NoiseParams,
    Schedule,
    ZeroSuccessProbability,
    alternating_schedule,
    iterate_once,
    run_schedule,
    uniform_schedule,
)
from .states import (
    NoiseSpec,
    coherent_input,
    fidelity,
    ghz_density,
    ghz_minus,
    perturbed_input,
    white_noise_input,
)
from .unitaries import TwoQubitUnitary

DEFAULT_STEP = 1e-4


class BracketInvalid(ValueError):
    """Bisection endpoints do not straddle the convergence boundary."""


@dataclass(frozen=True)
class ResponseMatrix:
    """Numerically extracted first-order response and the step used."""

    matrix: np.ndarray
    step: float

    def __post_init__(self):
        m = qmat.as_complex(self.matrix)
        herm_err = float(np.max(np.abs(m - qmat.dagger(m))))
        if herm_err > 10.0 * self.step**2:
            raise ValueError(
                f"response is not Hermitian within 10 h^2: error {herm_err:.3e}"
            )
        object.__setattr__(self, "matrix", m)


def first_order_response(
    unitary: TwoQubitUnitary, m, h: float = DEFAULT_STEP
) -> ResponseMatrix:
    """Central-difference derivative of one round along the direction ``m``.

    Evaluates (P[rho_ghz + h m] - P[rho_ghz - h m]) / (2 h), accurate to
    O(h^2).  ``m`` must be traceless Hermitian and ``h`` in [1e-6, 1e-2].

    The GHZ state is rank-one, so for a generic traceless direction the
    probe states sit a distance O(h) outside the state space; the
    positivity floor passed to the map is widened to 2 h |m|_2 plus the
    standard floor, exactly the excursion the probe itself introduces.
    """
    if not 1e-6 <= h <= 1e-2:
        raise ValueError(f"h must be in [1e-6, 1e-2], got {h}")
    m = qmat.as_complex(m)
    if np.max(np.abs(m - qmat.dagger(m))) > 1e-10:
        raise ValueError("direction must be Hermitian")
    if abs(m.trace()) > 1e-10:
        raise ValueError("direction must be traceless")
    spectral = float(np.max(np.abs(np.linalg.eigvalsh(m)))) if np.any(m) else 0.0
    floor = 2.0 * h * spectral + qmat.PSD_FLOOR
    base = ghz_density()
    plus, _ = iterate_once(base + h * m, base + h * m, unitary, psd_floor=floor)
    minus, _ = iterate_once(base - h * m, base - h * m, unitary, psd_floor=floor)
    return ResponseMatrix((plus - minus) / (2.0 * h), h)


def closed_form_response_u1(m) -> np.ndarray:
    """Exact first-order response of the u1 round.

    The coefficient -2 <GHZ-| m |GHZ-> lands on the |000><111| entry, its
    conjugate on |111><000|, and every other entry vanishes.
    """
    m = qmat.as_complex(m)
    if m.shape != (8, 8):
        raise ValueError(f"expected an 8x8 matrix, got shape {m.shape}")
    g = ghz_minus()
    coeff = -2.0 * complex(g.conj() @ m @ g)
    out = np.zeros((8, 8), dtype=np.complex128)
    out[0, 7] = coeff
    out[7, 0] = coeff.conjugate()
    return out


def convergence_order(schedule: Schedule, m, eps_list) -> float:
    """Log-log slope of the one-step residual error versus noise strength.

    For each eps the input rho_ghz + eps * m is run for one record of the
    schedule and the error 1 - F is collected; the least-squares slope of
    log(1 - F) against log(eps) over the three smallest eps values is
    returned.  Inputs must be physical states, so mixture-type directions
    (a density matrix minus the GHZ projector) are the natural choice.
    """
    eps = [float(e) for e in eps_list]
    if len(eps) < 3 or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("eps_list needs >= 3 strictly decreasing values")
    eps = eps[-3:]
    errors = []
    for e in eps:
        rho0 = perturbed_input(NoiseSpec.custom(e, m))
        record = run_schedule(rho0, schedule, 1)[-1]
        err = 1.0 - record.fidelity
        if err <= 1e-15:
            raise ValueError(f"residual error at eps={e} is below the numeric floor")
        errors.append(err)
    slope, _ = np.polyfit(np.log(eps), np.log(errors), 1)
    return float(slope)


@dataclass(frozen=True)
class ConvergenceRule:
    """A run converges when the fidelity passes the target within the step cap."""

    fidelity_target: float = 0.999
    max_double_steps: int = 60

    def converges(self, rho0, schedule: Schedule, noise: NoiseParams) -> bool:
        try:
            records = run_schedule(rho0, schedule, self.max_double_steps, noise)
        except ZeroSuccessProbability:
            return False
        return any(r.fidelity > self.fidelity_target for r in records)

    def describe(self) -> str:
        return (
            f"fidelity > {self.fidelity_target} within "
            f"{self.max_double_steps} double steps"
        )


@dataclass(frozen=True)
class ThresholdResult:
    """Bisection outcome: the boundary parameter and its final bracket."""

    family: str
    threshold: float
    bracket: tuple[float, float]
    rule: str


#: a family maps the swept parameter to an input state, or to a
#: (state, noise) pair when the parameter is itself a noise knob
Family = Callable[[float], "np.ndarray | tuple[np.ndarray, NoiseParams]"]


def coherent_family(eps: float) -> np.ndarray:
    """Pure inputs with equal extra |001> and |110> components."""
    return coherent_input(eps)


def white_family(eps: float) -> np.ndarray:
    """White-noise mixtures of the GHZ state."""
    return white_noise_input(eps)


def measurement_error_family(rho0) -> Family:
    """Sweep the readout flip probability at a fixed input state."""
    frozen = qmat.as_complex(rho0).copy()
    return lambda p_m: (frozen, NoiseParams(p_m=p_m))


def _family_point(family: Family, param: float, noise: NoiseParams):
    point = family(param)
    if isinstance(point, tuple):
        return point
    return point, noise


def threshold_bisect(
    family: Family,
    lo: float,
    hi: float,
    resolution: float,
    schedule: Schedule | None = None,
    noise: NoiseParams = NOISELESS,
    rule: ConvergenceRule = ConvergenceRule(),
    family_name: str = "custom",
) -> ThresholdResult:
    """Bisect the convergence boundary of a one-parameter input family.

    ``family(lo)`` must converge under ``rule`` and ``family(hi)`` must
    not, else :class:`BracketInvalid` is raised.  Bisection proceeds until
    the bracket width is at most ``resolution``; the reported threshold is
    the bracket midpoint.
    """
    if schedule is None:
        schedule = alternating_schedule()
    if not lo < hi:
        raise BracketInvalid(f"need lo < hi, got [{lo}, {hi}]")
    if resolution <= 0:
        raise ValueError(f"resolution must be positive, got {resolution}")

    def converges(param: float) -> bool:
        rho0, point_noise = _family_point(family, param, noise)
        return rule.converges(rho0, schedule, point_noise)

    if not converges(lo):
        raise BracketInvalid(f"family does not converge at lo={lo}")
    if converges(hi):
        raise BracketInvalid(f"family still converges at hi={hi}")
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if converges(mid):
            lo = mid
        else:
            hi = mid
    return ThresholdResult(
        family=family_name,
        threshold=0.5 * (lo + hi),
        bracket=(lo, hi),
        rule=rule.describe(),
    )


def protocol_equivalence(rho0, n_double_steps: int) -> float:
    """Max per-step fidelity gap between the alternating and uniform schedules."""
    recs_a = run_schedule(rho0, alternating_schedule(), n_double_steps)
    recs_u = run_schedule(rho0, uniform_schedule(0), n_double_steps)
    return max(abs(a.fidelity - u.fidelity) for a, u in zip(recs_a, recs_u))
