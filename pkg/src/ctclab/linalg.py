"""Finite-dimensional complex linear algebra and quantum-state utilities.

All matrices are dense ``numpy`` arrays with dtype ``complex128``, stored
row-major. States are density matrices (Hermitian, unit trace, positive
semidefinite within explicit tolerances); interactions are unitaries.
Entropies are in bits throughout.
"""

from __future__ import annotations

import numpy as np

#: Default tolerance for Hermiticity, trace, unitarity and PSD checks.
DEFAULT_TOL = 1e-9


def as_matrix(m) -> np.ndarray:
    """Coerce input to a square complex matrix."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def max_abs(m) -> float:
    """Entrywise max-norm, the norm used by all tolerance checks."""
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


# ---------------------------------------------------------------------------
# validation

def check_hermitian(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate Hermiticity within ``tol``; return the coerced matrix."""
    a = as_matrix(m)
    dev = max_abs(a - a.conj().T)
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian: max deviation {dev:.3e} > {tol:.3e}")
    return a


def check_density_matrix(m, tol_hermitian: float = DEFAULT_TOL,
                         tol_trace: float = DEFAULT_TOL,
                         tol_psd: float = DEFAULT_TOL) -> np.ndarray:
    """Validate a density matrix (Hermitian, unit trace, PSD); return it.

    Each property is checked against its own tolerance so callers can
    loosen one without touching the others.
    """
    a = check_hermitian(m, tol_hermitian)
    tr = np.trace(a)
    if abs(tr - 1.0) > tol_trace:
        raise ValueError(f"trace {tr:.12g} differs from 1 by more than {tol_trace:.3e}")
    lo = float(np.linalg.eigvalsh((a + a.conj().T) / 2).min())
    if lo < -tol_psd:
        raise ValueError(f"matrix is not PSD: smallest eigenvalue {lo:.3e} < -{tol_psd:.3e}")
    return a


def check_unitary(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate unitarity (``m m† = I`` within ``tol``); return the matrix."""
    a = as_matrix(m)
    dev = max_abs(a @ a.conj().T - np.eye(a.shape[0]))
    if dev > tol:
        raise ValueError(f"matrix is not unitary: max |m m† - I| = {dev:.3e} > {tol:.3e}")
    return a


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    try:
        check_hermitian(m, tol)
    except ValueError:
        return False
    return True


def is_density_matrix(m, tol: float = DEFAULT_TOL) -> bool:
    try:
        check_density_matrix(m, tol, tol, tol)
    except ValueError:
        return False
    return True


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    try:
        check_unitary(m, tol)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------------------
# core operations

def tensor(a, b) -> np.ndarray:
    """Kronecker product of two matrices (dimensions multiply)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho, dims, keep: int) -> np.ndarray:
    """Trace out one factor of a bipartite matrix.

    Parameters
    ----------
    rho : array, shape (dA*dB, dA*dB)
        Bipartite matrix with factor ordering A (x) B.
    dims : (dA, dB)
        Dimensions of the two factors.
    keep : int
        0 keeps factor A (traces out B), 1 keeps factor B.
    """
    da, db = int(dims[0]), int(dims[1])
    a = as_matrix(rho)
    if a.shape[0] != da * db:
        raise ValueError(f"matrix dimension {a.shape[0]} != {da} * {db}")
    if keep not in (0, 1):
        raise ValueError(f"keep must be 0 or 1, got {keep}")
    r = a.reshape(da, db, da, db)
    if keep == 0:
        return np.einsum("ijkj->ik", r)
    return np.einsum("ijil->jl", r)


def hermitian_eigendecomposition(m, tol: float = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with real eigenvalues in
    ascending order and eigenvectors as columns, so that
    ``m = V diag(w) V†``. Raises ``ValueError`` on non-Hermitian input.
    """
    a = check_hermitian(m, tol)
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    return w, v


def von_neumann_entropy(rho, tol: float = DEFAULT_TOL) -> float:
    """Entropy -sum(p log2 p) of the spectrum, in bits, with 0 log 0 = 0.

    Eigenvalues within ``tol`` below zero are treated as exact zeros.
    """
    w, _ = hermitian_eigendecomposition(rho, tol)
    w = w[w > 1e-15]
    if w.size == 0:
        return 0.0
    return float(-np.sum(w * np.log2(w)))


def mutual_information(rho, dims, tol: float = DEFAULT_TOL) -> float:
    """Mutual information S(A) + S(B) - S(AB) of a bipartite state, in bits."""
    s_a = von_neumann_entropy(partial_trace(rho, dims, keep=0), tol)
    s_b = von_neumann_entropy(partial_trace(rho, dims, keep=1), tol)
    s_ab = von_neumann_entropy(rho, tol)
    return s_a + s_b - s_ab


def trace_distance(a, b) -> float:
    """Trace distance (1/2)||a - b||_1 between two Hermitian matrices."""
    d = as_matrix(a) - as_matrix(b)
    w = np.linalg.eigvalsh((d + d.conj().T) / 2)
    return float(0.5 * np.sum(np.abs(w)))


def projector(v) -> np.ndarray:
    """Rank-one projector |v><v| of a (normalized) state vector."""
    u = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(u, u.conj())


# ---------------------------------------------------------------------------
# gate and state catalog

def _ro(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m


ID2 = _ro(np.eye(2, dtype=complex))
PAULI_X = _ro(np.array([[0, 1], [1, 0]], dtype=complex))
PAULI_Y = _ro(np.array([[0, -1j], [1j, 0]], dtype=complex))
PAULI_Z = _ro(np.array([[1, 0], [0, -1]], dtype=complex))
SWAP = _ro(np.array([[1, 0, 0, 0],
                     [0, 0, 1, 0],
                     [0, 1, 0, 0],
                     [0, 0, 0, 1]], dtype=complex))
# control = first factor, target = second
CNOT = _ro(np.array([[1, 0, 0, 0],
                     [0, 1, 0, 0],
                     [0, 0, 0, 1],
                     [0, 0, 1, 0]], dtype=complex))


def standard_gates() -> dict:
    """Catalog of named unitaries (fresh writable copies)."""
    return {
        "identity": np.eye(2, dtype=complex),
        "identity4": np.eye(4, dtype=complex),
        "x": PAULI_X.copy(),
        "y": PAULI_Y.copy(),
        "z": PAULI_Z.copy(),
        "swap": SWAP.copy(),
        "cnot": CNOT.copy(),
    }


def bell_state() -> np.ndarray:
    """State vector of the maximally entangled pair (|00> + |11>)/sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1 / np.sqrt(2)
    return v


def bell_density() -> np.ndarray:
    """Density matrix of the maximally entangled pair."""
    return projector(bell_state())


def ket(index: int, dim: int) -> np.ndarray:
    """Computational-basis column vector |index> in the given dimension."""
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dim {dim}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


# ---------------------------------------------------------------------------
# random sampling (for tests and property sweeps)

def haar_random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed random unitary via QR with phase correction."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random full-rank density matrix (Wishart construction)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m).real


# ---------------------------------------------------------------------------
# JSON matrix format: {"rows": n, "cols": m, "entries": [[re, im], ...]}
# entries are row-major

def matrix_to_json(m) -> dict:
    """Serialize a matrix to the JSON wire format."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "entries": [[float(x.real), float(x.imag)] for x in a.reshape(-1)],
    }


def matrix_from_json(obj) -> np.ndarray:
    """Parse the JSON wire format back into a complex matrix."""
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix dimensions must be positive, got {rows}x{cols}")
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.empty(rows * cols, dtype=complex)
    for k, pair in enumerate(entries):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"entry {k} is not an [re, im] pair: {pair!r}")
        flat[k] = complex(float(pair[0]), float(pair[1]))
    return flat.reshape(rows, cols)
