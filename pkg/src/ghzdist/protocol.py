"""The post-selection distillation map, its error models, and iteration schedules.

One round consumes two copies of a three-qubit state shared by parties A,
B and C.  Each party holds one qubit of each copy, applies the same
two-qubit gate to its (kept, flag) pair, and measures the flag in the
computational basis.  The round is kept only when every reported flag
reads zero; the surviving kept qubits, renormalized, form the round's
output.  Post-selection makes the map nonlinear in the input state.

Layout: the six-qubit joint state is assembled as (kept copy) tensor
(flag copy) with qubit order (Ak, Bk, Ck, Af, Bf, Cf), then permuted by
``PAIR_PERM`` to party-adjacent pairs (Ak, Af, Bk, Bf, Ck, Cf) so each
party's gate acts on an adjacent pair.  That fixed permutation is the one
place the layout is chosen; everything else follows from it.

Error models:

* measurement error: after a perfect projective measurement, each flag
  readout flips independently with probability ``p_m``; the parties keep
  on an all-zero *reported* record, so the retained state is the exact
  mixture of the eight true outcomes weighted by the probability that
  each is reported as all zeros (no sampling involved);
* gate error: a two-qubit depolarizing channel with strength ``p_g`` acts
  on each party's pair immediately after that party's gate, sending the
  pair state rho to (1 - 16 p_g / 15) rho + (4 p_g / 15) I_4.  Channels on
  disjoint pairs commute, so the application order is immaterial.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import qmat
from .states import fidelity
from .unitaries import TwoQubitUnitary, u1, u2, u3

#: source positions taking (Ak,Bk,Ck,Af,Bf,Cf) to (Ak,Af,Bk,Bf,Ck,Cf)
PAIR_PERM = (0, 3, 1, 4, 2, 5)

#: renormalizing below this keep probability would amplify noise unboundedly
SUCCESS_FLOOR = 1e-14


class InvalidInput(ValueError):
    """An input failed the density-matrix checks."""


class ZeroSuccessProbability(RuntimeError):
    """The keep probability fell below the renormalization floor."""


@dataclass(frozen=True)
class NoiseParams:
    """Per-flag readout flip probability and per-gate depolarizing strength."""

    p_m: float = 0.0
    p_g: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p_m <= 1.0:
            raise ValueError(f"p_m must be in [0, 1], got {self.p_m}")
        # p_g <= 15/16 keeps the channel coefficient 1 - 16 p_g / 15 >= 0
        if not 0.0 <= self.p_g <= 15.0 / 16.0:
            raise ValueError(f"p_g must be in [0, 15/16], got {self.p_g}")


NOISELESS = NoiseParams()


@dataclass(frozen=True)
class Single:
    """Apply one unitary per iteration step."""

    unitary: TwoQubitUnitary


@dataclass(frozen=True)
class AlternatingDouble:
    """One double step applies ``first`` then ``second``."""

    first: TwoQubitUnitary
    second: TwoQubitUnitary


@dataclass(frozen=True)
class UniformDouble:
    """One double step applies the same unitary twice."""

    unitary: TwoQubitUnitary


Schedule = Single | AlternatingDouble | UniformDouble


def alternating_schedule() -> AlternatingDouble:
    """The u1-then-u2 double iteration."""
    return AlternatingDouble(u1(), u2())


def uniform_schedule(n: int = 0) -> UniformDouble:
    """The u3(n)-twice double iteration."""
    return UniformDouble(u3(n))


def _elementary_unitaries(schedule: Schedule) -> tuple[TwoQubitUnitary, ...]:
    if isinstance(schedule, Single):
        return (schedule.unitary,)
    if isinstance(schedule, AlternatingDouble):
        return (schedule.first, schedule.second)
    if isinstance(schedule, UniformDouble):
        return (schedule.unitary, schedule.unitary)
    raise TypeError(f"not a schedule: {schedule!r}")


@dataclass(frozen=True)
class IterationRecord:
    """Per-step results of a schedule run.

    ``success_probability`` is the product of the elementary keep
    probabilities of the step (one factor for a single step, two for a
    double step).  ``tree_success_probability`` counts the input tree
    instead: producing one double-step output needs two first-stage
    outputs feeding one second stage, so for elementary probabilities
    (p1, p2) it is p1 * p1 * p2.  The two conventions answer different
    questions ("does one chain survive" vs "does the whole four-input
    tree survive") and both are reported.

    ``cumulative_min_inputs`` is the deterministic input count assuming
    every measurement succeeds, 2^(elementary steps so far);
    ``cumulative_expected_inputs`` weights each elementary stage by its
    measured keep probability (each stage consumes 2/p times the inputs
    of the previous one on average).
    """

    step: int
    fidelity: float
    success_probability: float
    elementary_probabilities: tuple[float, ...]
    tree_success_probability: float
    intermediate_fidelity: float | None
    cumulative_min_inputs: int
    cumulative_expected_inputs: float


def _check_input(rho: np.ndarray, name: str, psd_floor: float) -> None:
    report = qmat.validate_density(rho)
    if not (report.hermitian and report.unit_trace):
        raise InvalidInput(
            f"{name} state fails density checks: hermiticity error "
            f"{report.hermiticity_error:.3e}, trace error {report.trace_error:.3e}"
        )
    if report.min_eigenvalue < -psd_floor:
        raise InvalidInput(
            f"{name} state has eigenvalue {report.min_eigenvalue:.3e} "
            f"below the floor -{psd_floor:.1e}"
        )


def _depolarize_pair(rho6: np.ndarray, pair: int, lam: float) -> np.ndarray:
    """Two-qubit depolarizing channel on pair slots (2*pair, 2*pair+1)."""
    pair_qubits = (2 * pair, 2 * pair + 1)
    others = [q for q in range(6) if q not in pair_qubits]
    reduced = qmat.partial_trace(rho6, keep=others)
    refreshed = qmat.tensor(np.eye(4) / 4.0, reduced)
    layout = list(pair_qubits) + others
    perm = [layout.index(q) for q in range(6)]
    return (1.0 - lam) * rho6 + lam * qmat.permute_qubits(refreshed, perm)


def _project_flags(rho6: np.ndarray, outcome: tuple[int, int, int]) -> np.ndarray:
    """Unnormalized kept-qubit matrix after projecting flags onto |outcome>."""
    o0, o1, o2 = outcome
    idx = [
        ((a >> 2) & 1) * 32 + o0 * 16 + ((a >> 1) & 1) * 8 + o1 * 4 + (a & 1) * 2 + o2
        for a in range(8)
    ]
    return rho6[np.ix_(idx, idx)]


def iterate_once(
    rho_keep,
    rho_flag,
    unitary: TwoQubitUnitary,
    noise: NoiseParams = NOISELESS,
    *,
    psd_floor: float = qmat.PSD_FLOOR,
) -> tuple[np.ndarray, float]:
    """One round of the protocol; returns (output state, keep probability).

    The two input copies may differ.  ``psd_floor`` is how far below zero
    an input eigenvalue may sit before the input is rejected; callers
    probing the map along tangent directions (finite differences around a
    rank-deficient state) widen it, everything else uses the default.

    Raises :class:`InvalidInput` if an input fails the density checks and
    :class:`ZeroSuccessProbability` if the keep probability falls below
    ``SUCCESS_FLOOR``.
    """
    rho_keep = qmat.as_complex(rho_keep)
    rho_flag = qmat.as_complex(rho_flag)
    _check_input(rho_keep, "keep", psd_floor)
    _check_input(rho_flag, "flag", psd_floor)
    u = unitary.matrix if isinstance(unitary, TwoQubitUnitary) else qmat.as_complex(unitary)

    six = qmat.permute_qubits(qmat.tensor(rho_keep, rho_flag), PAIR_PERM)
    gate = qmat.tensor(qmat.tensor(u, u), u)
    six = gate @ six @ qmat.dagger(gate)
    if noise.p_g > 0.0:
        lam = 16.0 * noise.p_g / 15.0
        for pair in range(3):
            six = _depolarize_pair(six, pair, lam)

    weights = (1.0 - noise.p_m, noise.p_m)
    kept = np.zeros((8, 8), dtype=np.complex128)
    for outcome in itertools.product((0, 1), repeat=3):
        w = weights[outcome[0]] * weights[outcome[1]] * weights[outcome[2]]
        if w == 0.0:
            continue
        kept += w * _project_flags(six, outcome)
    p_keep = float(kept.trace().real)
    if p_keep < SUCCESS_FLOOR:
        raise ZeroSuccessProbability(f"keep probability {p_keep:.3e} below floor")
    return kept / p_keep, p_keep


def _tree_success(probs: tuple[float, ...]) -> float:
    """Probability that the full input tree of one step survives.

    Stage j of a k-stage step runs 2^(k-1-j) times in the tree, so the
    result is the product of p_j ** 2^(k-1-j).
    """
    k = len(probs)
    out = 1.0
    for j, p in enumerate(probs):
        out *= p ** (2 ** (k - 1 - j))
    return out


def run_schedule(
    rho0,
    schedule: Schedule,
    n_steps: int,
    noise: NoiseParams = NOISELESS,
) -> list[IterationRecord]:
    """Iterate the protocol, feeding identical copies at every elementary step.

    For double schedules one record covers one double step; ``n_steps``
    counts records.  Raises on the same conditions as :func:`iterate_once`.
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    rho = qmat.as_complex(rho0)
    records: list[IterationRecord] = []
    elementary_total = 0
    expected = 1.0
    for step in range(1, n_steps + 1):
        unis = _elementary_unitaries(schedule)
        probs: list[float] = []
        intermediate = None
        for k, u in enumerate(unis):
            rho, p = iterate_once(rho, rho, u, noise)
            probs.append(p)
            if len(unis) == 2 and k == 0:
                intermediate = fidelity(rho)
            elementary_total += 1
            expected *= 2.0 / p
        records.append(
            IterationRecord(
                step=step,
                fidelity=fidelity(rho),
                success_probability=float(np.prod(probs)),
                elementary_probabilities=tuple(probs),
                tree_success_probability=_tree_success(tuple(probs)),
                intermediate_fidelity=intermediate,
                cumulative_min_inputs=2**elementary_total,
                cumulative_expected_inputs=expected,
            )
        )
    return records


def resource_count(n_double_steps: int) -> int:
    """Minimum input states for n double steps: 4^n."""
    if not 0 <= n_double_steps <= 31:
        raise ValueError(f"n_double_steps must be in [0, 31], got {n_double_steps}")
    return 4**n_double_steps
