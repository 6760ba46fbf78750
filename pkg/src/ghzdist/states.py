"""Input states for the three-qubit distillation protocol.

Constructors for the target GHZ state, its orthogonal partner, and the
perturbed inputs the protocol is tested against: exactly normalized pure
states with extra computational-basis components (coherent errors), white
noise mixtures, and arbitrary traceless Hermitian directions (incoherent
errors).  The perturbation strength is the dimensionless epsilon in
rho = rho_ghz + eps * M.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmat

DIM = 8

#: default extra components of the coherent input family: equal weights on
#: |001> and |110>
DEFAULT_COHERENT_COMPONENTS = ((1, 1.0), (6, 1.0))


class NonPositiveState(ValueError):
    """A requested perturbation leaves the set of physical states."""


def ghz() -> np.ndarray:
    """(|000> + |111>)/sqrt(2) as an 8-component amplitude vector."""
    v = np.zeros(DIM, dtype=np.complex128)
    v[0] = v[7] = 1.0 / np.sqrt(2.0)
    return v


def ghz_minus() -> np.ndarray:
    """(|000> - |111>)/sqrt(2), orthogonal to the GHZ state."""
    v = np.zeros(DIM, dtype=np.complex128)
    v[0] = 1.0 / np.sqrt(2.0)
    v[7] = -1.0 / np.sqrt(2.0)
    return v


def pure_density(psi) -> np.ndarray:
    """|psi><psi| for an amplitude vector."""
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


def ghz_density() -> np.ndarray:
    return pure_density(ghz())


def fidelity(rho) -> float:
    """Overlap <GHZ| rho |GHZ> of an 8x8 density matrix with the target."""
    rho = qmat.as_complex(rho)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"expected an 8x8 matrix, got shape {rho.shape}")
    return float((rho[0, 0] + rho[0, 7] + rho[7, 0] + rho[7, 7]).real / 2.0)


def coherent_input(eps_c: float, components=DEFAULT_COHERENT_COMPONENTS) -> np.ndarray:
    """Pure state GHZ + eps_c * (weighted basis components), exactly normalized.

    ``components`` is a sequence of (basis index, complex weight) pairs;
    the amplitude added at each index is eps_c * weight.  Normalization is
    exact, not first order in eps_c.
    """
    if eps_c < 0:
        raise ValueError(f"eps_c must be >= 0, got {eps_c}")
    psi = ghz()
    for idx, weight in components:
        if not 0 <= idx < DIM:
            raise ValueError(f"component index {idx} outside [0, {DIM})")
        psi[idx] += eps_c * weight
    norm = np.linalg.norm(psi)
    if norm < 1e-12:
        raise ValueError("components cancel the state to numerical zero")
    return pure_density(psi / norm)


def white_noise_input(eps_w: float) -> np.ndarray:
    """(1 - eps_w) * rho_ghz + (eps_w / 8) * I."""
    if not 0.0 <= eps_w <= 1.0:
        raise ValueError(f"eps_w must be in [0, 1], got {eps_w}")
    return (1.0 - eps_w) * ghz_density() + (eps_w / DIM) * np.eye(DIM)


@dataclass(frozen=True)
class NoiseSpec:
    """Description of an input perturbation of strength ``epsilon``.

    kind "coherent": payload is an amplitude vector orthogonal to GHZ; the
    input is the exactly normalized pure state GHZ + eps * payload.
    kind "white": mixture with the maximally mixed state (payload None).
    kind "custom": payload is an 8x8 traceless Hermitian direction M and
    the input is rho_ghz + eps * M.
    """

    kind: str
    epsilon: float
    payload: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("coherent", "white", "custom"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.kind == "white":
            if self.payload is not None:
                raise ValueError("white noise takes no payload")
            if self.epsilon > 1.0:
                raise ValueError("white-noise strength must be <= 1")
        elif self.kind == "coherent":
            psi = np.asarray(self.payload, dtype=np.complex128)
            if psi.shape != (DIM,):
                raise ValueError("coherent payload must be an 8-vector")
            if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
                raise ValueError("coherent payload must be normalized")
            if abs(np.vdot(ghz(), psi)) > 1e-10:
                raise ValueError("coherent payload must be orthogonal to GHZ")
            object.__setattr__(self, "payload", psi)
        else:
            m = qmat.as_complex(self.payload)
            if m.shape != (DIM, DIM):
                raise ValueError("custom payload must be 8x8")
            if np.max(np.abs(m - qmat.dagger(m))) > 1e-10:
                raise ValueError("custom payload must be Hermitian")
            if abs(m.trace()) > 1e-10:
                raise ValueError("custom payload must be traceless")
            object.__setattr__(self, "payload", m)

    @classmethod
    def coherent(cls, epsilon: float, psi) -> "NoiseSpec":
        return cls("coherent", epsilon, np.asarray(psi, dtype=np.complex128))

    @classmethod
    def white(cls, epsilon: float) -> "NoiseSpec":
        return cls("white", epsilon)

    @classmethod
    def custom(cls, epsilon: float, m) -> "NoiseSpec":
        return cls("custom", epsilon, qmat.as_complex(m))


def perturbed_input(spec: NoiseSpec) -> np.ndarray:
    """Build the input density matrix described by ``spec``.

    White noise is the identification M = I/8 - rho_ghz.  Coherent specs
    return the exact normalized pure state (whose first-order expansion is
    the cross-term direction |psi><GHZ| + h.c.).  Custom specs return
    rho_ghz + eps * M and raise :class:`NonPositiveState` if that matrix
    has an eigenvalue below -1e-9; the matrix is never clipped.
    """
    if spec.kind == "white":
        return white_noise_input(spec.epsilon)
    if spec.kind == "coherent":
        psi = ghz() + spec.epsilon * spec.payload
        return pure_density(psi / np.linalg.norm(psi))
    rho = ghz_density() + spec.epsilon * spec.payload
    min_eig = float(np.linalg.eigvalsh((rho + qmat.dagger(rho)) / 2.0)[0])
    if min_eig < -qmat.PSD_FLOOR:
        raise NonPositiveState(
            f"eps={spec.epsilon} pushes an eigenvalue to {min_eig:.3e}"
        )
    return rho


def random_traceless_hermitian(seed: int, scale: float = 1.0) -> np.ndarray:
    """Deterministic 8x8 traceless Hermitian matrix with max-norm <= scale.

    Gaussian real/imaginary parts from numpy's seeded PCG64 generator,
    Hermitized, de-traced, then rescaled so the largest entry magnitude
    equals ``scale``.  Same seed, same matrix.
    """
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((DIM, DIM)) + 1j * rng.standard_normal((DIM, DIM))
    h = (a + a.conj().T) / 2.0
    h -= (h.trace() / DIM) * np.eye(DIM)
    peak = float(np.max(np.abs(h)))
    if peak > 0:
        h *= scale / peak
    return h


def random_density(seed: int) -> np.ndarray:
    """Deterministic random 8x8 density matrix (normalized A A^dagger)."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((DIM, DIM)) + 1j * rng.standard_normal((DIM, DIM))
    rho = a @ a.conj().T
    return rho / rho.trace()
