"""Catalog of the protocol's local two-qubit operations and condition checkers.

All 4x4 matrices use the ordered basis |00>, |01>, |10>, |11>, where the
first qubit is the kept (unmeasured) qubit and the second is the flag
qubit that gets measured.  Rows 0 and 2 are the flag-zero output rows:
they are the only amplitudes that survive post-selection on an all-zero
measurement record, which is why every condition system below involves
just those two rows.

Two numeric condition systems are exposed besides plain unitarity:

* the fixed-point system, satisfied exactly when the GHZ state is left
  invariant by one protocol round with the candidate operation;
* the coherent-cancellation system, satisfied when one round removes the
  first-order error of any slightly rotated (pure) input.

Operations that satisfy both fall into two diagonal patterns (|U[0,1]| =
|U[2,2]| = 1 or |U[0,2]| = |U[2,1]| = 1, all other flag-zero entries
vanishing) with a relative phase of 0 or +-2pi/3 between the two unit
entries; ``classify_solution`` tests for those patterns directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qmat

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class TwoQubitUnitary:
    """A labelled 4x4 unitary in the |keep, flag> basis."""

    matrix: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        m = qmat.as_complex(self.matrix)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m.view(np.float64))):
            raise ValueError("matrix contains NaN or Inf entries")
        if not qmat.is_unitary(m, qmat.DEFAULT_TOL):
            raise ValueError(f"matrix for {self.label!r} is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def _mat(u) -> np.ndarray:
    return u.matrix if isinstance(u, TwoQubitUnitary) else qmat.as_complex(u)


def u1() -> TwoQubitUnitary:
    """CNOT-X gate: swaps |00> <-> |01>, fixes |10> and |11>.

    Equals CNOT(keep -> flag) composed after X on the flag qubit.
    """
    m = np.array(
        [
            [0, 1, 0, 0],
            [1, 0, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ],
        dtype=np.complex128,
    )
    return TwoQubitUnitary(m, "u1")


def u2() -> TwoQubitUnitary:
    """CNOT-H gate: CNOT(flag -> keep) followed by a Hadamard on the flag."""
    m = np.array(
        [
            [1, 0, 0, 1],
            [1, 0, 0, -1],
            [0, 1, 1, 0],
            [0, -1, 1, 0],
        ],
        dtype=np.complex128,
    ) / _SQRT2
    return TwoQubitUnitary(m, "u2")


def u3(n: int = 0) -> TwoQubitUnitary:
    """One-parameter gate family used by the uniform double iteration.

    The integer ``n`` sets phases exp(-+ i n pi / 3); the family is
    periodic with period 6 (reduced exactly, so u3(6) == u3(0) bit for
    bit).  n = 0 gives the real matrix CNOT(keep -> flag) followed by a
    Hadamard on the kept qubit.
    """
    phase = np.exp(-1j * np.pi * (n % 6) / 3.0)
    m = np.array(
        [
            [phase, 0, 0, 1],
            [0, phase, 1, 0],
            [1, 0, 0, -phase.conjugate()],
            [0, 1, -phase.conjugate(), 0],
        ],
        dtype=np.complex128,
    ) / _SQRT2
    return TwoQubitUnitary(m, f"u3[{n}]")


CATALOG = {"u1": u1, "u2": u2, "u3": u3}


@dataclass(frozen=True)
class ConditionReport:
    """Per-condition residual magnitudes and the aggregated verdict."""

    residuals: tuple[tuple[str, float], ...]
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "passed", all(r < self.tolerance for _, r in self.residuals)
        )

    def failing(self) -> tuple[str, ...]:
        return tuple(name for name, r in self.residuals if r >= self.tolerance)


def check_unitarity(u, tol: float = qmat.DEFAULT_TOL) -> ConditionReport:
    """Residual of m m^dagger - I in max-norm, reported per the one condition."""
    m = _mat(u)
    resid = float(np.max(np.abs(m @ qmat.dagger(m) - np.eye(4))))
    return ConditionReport((("unitarity", resid),), tol)


def check_fixed_point(u, tol: float = qmat.DEFAULT_TOL) -> ConditionReport:
    """Conditions for the GHZ state to be a fixed point of one round.

    With r0 and r2 the flag-zero rows, the constraints are
    sum(r0^3) == sum(r2^3) != 0 and sum(r0^2 r2) == sum(r2^2 r0) == 0.
    The nonzero clause reports the residual max(0, 2 tol - |sum(r0^3)|) so
    that it passes exactly when |sum(r0^3)| > tol.
    """
    m = _mat(u)
    r0, r2 = m[0], m[2]
    s0 = np.sum(r0**3)
    s2 = np.sum(r2**3)
    residuals = (
        ("cube_sums_equal", float(abs(s0 - s2))),
        ("cube_sum_nonzero", max(0.0, 2.0 * tol - float(abs(s0)))),
        ("cross_sum_r0r0r2", float(abs(np.sum(r0**2 * r2)))),
        ("cross_sum_r2r2r0", float(abs(np.sum(r2**2 * r0)))),
    )
    return ConditionReport(residuals, tol)


def check_coherent_conditions(u, tol: float = qmat.DEFAULT_TOL) -> ConditionReport:
    """Conditions for one round to cancel first-order coherent errors.

    Seven polynomial relation families over the flag-zero rows; families 1
    and 2 are instantiated per output row, families 3, 4, 5 and 7 per
    exponent split x in {1, 2}.  One residual is reported per instance.
    """
    m = _mat(u)
    a, b, c, d = m[0]
    e, f, g, h = m[2]
    residuals: list[tuple[str, float]] = []
    for name, row in (("r0", m[0]), ("r2", m[2])):
        residuals.append(
            (f"c1[{name}]", float(abs(a * e * (row[1] + row[2]) + row[3] * (b * f + c * g))))
        )
    for name, row in (("r0", m[0]), ("r2", m[2])):
        residuals.append(
            (f"c2[{name}]", float(abs(d * h * (row[1] + row[2]) + row[0] * (b * f + c * g))))
        )
    for x in (1, 2):
        y = 3 - x
        residuals.append(
            (f"c3[x={x}]", float(abs(a**x * (f**y + g**y) + h**y * (b**x + c**x))))
        )
    for x in (1, 2):
        y = 3 - x
        residuals.append(
            (f"c4[x={x}]", float(abs(e**x * (b**y + c**y) + d**y * (f**x + g**x))))
        )
    for x in (1, 2):
        y = 3 - x
        lhs = a**x * (b**y + c**y) + d**y * (b**x + c**x)
        rhs = e**x * (f**y + g**y) + h**y * (f**x + g**x)
        residuals.append((f"c5[x={x}]", float(abs(lhs - rhs))))
    residuals.append(("c6", float(abs(a**3 - e**3 + h**3 - d**3))))
    for x in (1, 2):
        y = 3 - x
        residuals.append((f"c7[x={x}]", float(abs(a**x * e**y - d**x * h**y))))
    return ConditionReport(tuple(residuals), tol)


ALLOWED_PHASES = (0.0, 2.0 * np.pi / 3.0, -2.0 * np.pi / 3.0)


@dataclass(frozen=True)
class SolutionClass:
    """Classification of a unitary against the two solution patterns.

    ``kind`` is "A" (|U[0,1]| = |U[2,2]| = 1), "B" (|U[0,2]| = |U[2,1]| = 1)
    or None; ``relative_phase`` is the matched value from {0, +-2pi/3},
    None when unclassified.
    """

    kind: str | None
    relative_phase: float | None


def classify_solution(u, tol: float = 1e-8) -> SolutionClass:
    """Match the flag-zero rows against the two solution patterns.

    The relative phase between the two unit-magnitude entries must sit
    within ``tol`` radians of 0 or +-2pi/3; the classification is invariant
    under a global phase on the whole matrix.
    """
    m = _mat(u)
    for kind, (p0, p2) in (("A", ((0, 1), (2, 2))), ("B", ((0, 2), (2, 1)))):
        first, second = m[p0], m[p2]
        others = [
            m[r, col]
            for r in (0, 2)
            for col in range(4)
            if (r, col) not in (p0, p2)
        ]
        if abs(abs(first) - 1.0) > tol or abs(abs(second) - 1.0) > tol:
            continue
        if any(abs(o) > tol for o in others):
            continue
        phi = float(np.angle(second) - np.angle(first))
        for target in ALLOWED_PHASES:
            delta = (phi - target + np.pi) % (2.0 * np.pi) - np.pi
            if abs(delta) <= tol:
                return SolutionClass(kind, target)
    return SolutionClass(None, None)


def verify_decomposition(u, factors) -> float:
    """Max-norm distance between ``u`` and the ordered product of factors.

    The product is phase-aligned to ``u`` on the largest-magnitude entry
    before comparing, since gate decompositions are physical only up to a
    global phase.  Factors are 4x4 matrices, applied right-to-left (the
    first list element is the leftmost factor of the product).
    """
    m = _mat(u)
    prod = np.eye(4, dtype=np.complex128)
    for factor in factors:
        fm = qmat.as_complex(factor)
        if fm.shape != (4, 4):
            raise ValueError(f"factor has shape {fm.shape}, expected 4x4")
        prod = prod @ fm
    idx = np.unravel_index(np.argmax(np.abs(prod)), prod.shape)
    if abs(prod[idx]) > 0 and abs(m[idx]) > 0:
        phase = m[idx] / prod[idx]
        phase /= abs(phase)
        prod = prod * phase
    return float(np.max(np.abs(m - prod)))


# -- elementary 4x4 building blocks for decomposition checks --------------

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / _SQRT2
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_I2 = np.eye(2, dtype=np.complex128)

#: CNOT with the kept qubit as control, flag as target
CNOT_KEEP_TO_FLAG = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)
#: CNOT with the flag qubit as control, kept qubit as target
CNOT_FLAG_TO_KEEP = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=np.complex128
)
X_ON_KEEP = np.kron(_X, _I2)
X_ON_FLAG = np.kron(_I2, _X)
H_ON_KEEP = np.kron(_H, _I2)
H_ON_FLAG = np.kron(_I2, _H)


def rz_on_keep(theta: float) -> np.ndarray:
    """Z-rotation diag(exp(-i theta/2), exp(i theta/2)) on the kept qubit."""
    rz = np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
    return np.kron(rz, _I2)


def rz_on_flag(theta: float) -> np.ndarray:
    """Z-rotation on the flag qubit."""
    rz = np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
    return np.kron(_I2, rz)
