"""Dense complex matrix kernel with qubit-indexed operations.

Everything operates on plain complex128 numpy arrays in row-major layout;
the largest object handled anywhere in the package is 64x64, so dense
storage is used throughout.

Basis convention: qubit 0 is the leftmost (most significant) tensor
factor, i.e. the basis state |q0 q1 ... q_{n-1}> carries the integer index
q0*2^(n-1) + q1*2^(n-2) + ... + q_{n-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Tolerances: validity checks default to 1e-10; conservation laws
# (trace/hermiticity preservation) are asserted at 1e-12; eigenvalues of a
# physical state may dip to -1e-9 before being treated as an error.
DEFAULT_TOL = 1e-10
CONSERVATION_TOL = 1e-12
PSD_FLOOR = 1e-9


def as_complex(m) -> np.ndarray:
    """Return ``m`` as a complex128 ndarray (no copy if already one)."""
    return np.asarray(m, dtype=np.complex128)


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_complex(m).conj().T


def tensor(a, b) -> np.ndarray:
    """Kronecker product with combined index i_a * dim_b + i_b."""
    return np.kron(as_complex(a), as_complex(b))


def _infer_qubits(dim: int) -> int:
    n = (dim - 1).bit_length()
    if dim <= 0 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def permute_qubits(m, perm: Sequence[int], n: int | None = None) -> np.ndarray:
    """Conjugate ``m`` by the basis permutation that reorders qubits.

    ``perm[k]`` is the source position of the qubit that lands at position
    ``k``.  The operation is a pure reindexing of entries, so applying a
    permutation followed by its inverse reproduces the input exactly.
    """
    m = as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    nq = _infer_qubits(m.shape[0])
    if n is not None and n != nq:
        raise ValueError(f"matrix is {nq}-qubit but n={n} was given")
    if sorted(perm) != list(range(nq)):
        raise ValueError(f"{list(perm)} is not a permutation of 0..{nq - 1}")
    # sel[new_index] = old_index whose bit at position perm[k] equals the
    # new index's bit at position k
    sel = np.zeros(2**nq, dtype=np.intp)
    for new in range(2**nq):
        old = 0
        for k, src in enumerate(perm):
            bit = (new >> (nq - 1 - k)) & 1
            old |= bit << (nq - 1 - src)
        sel[new] = old
    return m[np.ix_(sel, sel)]


def partial_trace(rho, keep: Iterable[int], n: int | None = None) -> np.ndarray:
    """Trace out all qubits not listed in ``keep``.

    The kept qubits appear in the result in increasing original order.
    The trace of the input is preserved.
    """
    rho = as_complex(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    nq = _infer_qubits(rho.shape[0])
    if n is not None and n != nq:
        raise ValueError(f"matrix is {nq}-qubit but n={n} was given")
    keep = sorted(set(keep))
    if any(q < 0 or q >= nq for q in keep):
        raise ValueError(f"keep={keep} is not a subset of 0..{nq - 1}")
    if keep == list(range(nq)):
        return rho.copy()
    t = rho.reshape((2,) * (2 * nq))
    remaining = nq
    for q in sorted((q for q in range(nq) if q not in keep), reverse=True):
        t = np.trace(t, axis1=q, axis2=q + remaining)
        remaining -= 1
    dim = 2 ** len(keep)
    return t.reshape(dim, dim)


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    """True iff the max-norm of m m^dagger - I is below ``tol``."""
    m = as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    resid = m @ dagger(m) - np.eye(m.shape[0])
    return float(np.max(np.abs(resid))) < tol


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of the three density-matrix checks plus their magnitudes."""

    hermitian: bool
    unit_trace: bool
    positive: bool
    hermiticity_error: float
    trace_error: float
    min_eigenvalue: float

    @property
    def ok(self) -> bool:
        return self.hermitian and self.unit_trace and self.positive


def validate_density(rho, tol: float = DEFAULT_TOL) -> ValidityReport:
    """Check Hermiticity, unit trace and positivity of ``rho`` at ``tol``.

    The smallest eigenvalue is reported so callers can apply their own
    positivity floor; eigenvalues come from ``numpy.linalg.eigvalsh`` on
    the Hermitian part.
    """
    rho = as_complex(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho.view(np.float64))):
        raise ValueError("matrix contains NaN or Inf entries")
    herm_err = float(np.max(np.abs(rho - dagger(rho))))
    trace_err = float(abs(rho.trace() - 1.0))
    eigs = np.linalg.eigvalsh((rho + dagger(rho)) / 2.0)
    min_eig = float(eigs[0])
    return ValidityReport(
        hermitian=herm_err < tol,
        unit_trace=trace_err < tol,
        positive=min_eig >= -tol,
        hermiticity_error=herm_err,
        trace_error=trace_err,
        min_eigenvalue=min_eig,
    )
