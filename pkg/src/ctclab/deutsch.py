"""Deutsch-model closed timelike curves on finite-dimensional quantum systems.

A chronology-respecting (CR) system in state ``rho_cr_in`` interacts with a
chronology-violating (CTC) system through a joint unitary ``U`` (tensor
ordering is always CR (x) CTC). The CTC system must satisfy the consistency
condition: its state is a fixed point of the induced channel

    sigma -> Tr_CR[ U (rho_cr_in (x) sigma) U† ].

The fixed-point set of this channel is a non-empty compact convex set of
density matrices; Deutsch's selection rule picks the unique state of maximal
von Neumann entropy in it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .linalg import (
    DEFAULT_TOL,
    check_density_matrix,
    check_unitary,
    max_abs,
    maximally_mixed,
    mutual_information,
    partial_trace,
    tensor,
    trace_distance,
    von_neumann_entropy,
)

#: Default fixed-point residual tolerance (entrywise max-norm).
FIXED_POINT_TOL = 1e-10

# Cesaro averaging is run with doubling length N = 2^k; past ~46 doublings
# the repeated squaring of the superoperator hits roundoff on peripheral
# eigenvalues, so cap there and fall back to null-space projection.
MAX_DOUBLINGS = 46


class SolverError(RuntimeError):
    """Numerical failure of the fixed-point solver (not nonexistence)."""


@dataclass(frozen=True)
class DeutschChannel:
    """Interaction unitary plus CR input state, defining the CTC channel.

    Attributes
    ----------
    unitary : matrix of dimension d_cr * d_ctc
    rho_cr_in : CR input density matrix of dimension d_cr
    d_cr, d_ctc : factor dimensions, ordering CR (x) CTC
    """

    unitary: np.ndarray
    rho_cr_in: np.ndarray
    d_cr: int
    d_ctc: int

    def __post_init__(self):
        u = check_unitary(self.unitary)
        rho = check_density_matrix(self.rho_cr_in)
        if self.d_cr < 1 or self.d_ctc < 1:
            raise ValueError("factor dimensions must be positive")
        if u.shape[0] != self.d_cr * self.d_ctc:
            raise ValueError(
                f"unitary dimension {u.shape[0]} != d_cr * d_ctc = {self.d_cr * self.d_ctc}")
        if rho.shape[0] != self.d_cr:
            raise ValueError(f"CR state dimension {rho.shape[0]} != d_cr = {self.d_cr}")
        object.__setattr__(self, "unitary", u)
        object.__setattr__(self, "rho_cr_in", rho)

    @classmethod
    def from_json(cls, obj) -> "DeutschChannel":
        """Parse {"d_cr": n, "d_ctc": m, "unitary": <matrix>, "rho_cr_in": <matrix>}."""
        try:
            d_cr, d_ctc = int(obj["d_cr"]), int(obj["d_ctc"])
            u = linalg.matrix_from_json(obj["unitary"])
            rho = linalg.matrix_from_json(obj["rho_cr_in"])
        except KeyError as exc:
            raise ValueError(f"channel object missing field {exc}") from exc
        return cls(unitary=u, rho_cr_in=rho, d_cr=d_cr, d_ctc=d_ctc)

    def to_json(self) -> dict:
        return {
            "d_cr": self.d_cr,
            "d_ctc": self.d_ctc,
            "unitary": linalg.matrix_to_json(self.unitary),
            "rho_cr_in": linalg.matrix_to_json(self.rho_cr_in),
        }


def apply_channel(ch: DeutschChannel, sigma) -> np.ndarray:
    """Map the CTC state through one traversal: Tr_CR[U (rho_cr (x) sigma) U†]."""
    s = linalg.as_matrix(sigma)
    if s.shape[0] != ch.d_ctc:
        raise ValueError(f"CTC state dimension {s.shape[0]} != d_ctc = {ch.d_ctc}")
    joint = ch.unitary @ tensor(ch.rho_cr_in, s) @ ch.unitary.conj().T
    return partial_trace(joint, (ch.d_cr, ch.d_ctc), keep=1)


def cr_output(ch: DeutschChannel, sigma) -> np.ndarray:
    """CR state after the interaction: Tr_CTC[U (rho_cr (x) sigma) U†]."""
    joint = ch.unitary @ tensor(ch.rho_cr_in, linalg.as_matrix(sigma)) @ ch.unitary.conj().T
    return partial_trace(joint, (ch.d_cr, ch.d_ctc), keep=0)


def superoperator_matrix(ch: DeutschChannel) -> np.ndarray:
    """Matrix S with S vec(sigma) = vec(apply_channel(sigma)), row-major vec.

    Built column by column from the action on matrix units.
    """
    d = ch.d_ctc
    s = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d * d):
        unit = np.zeros((d, d), dtype=complex)
        unit[k // d, k % d] = 1.0
        s[:, k] = apply_channel(ch, unit).reshape(-1)
    return s


@dataclass(frozen=True)
class FixedPointSet:
    """The convex set of consistent CTC states.

    ``particular`` is one consistent density matrix; ``basis`` is an
    orthonormal (Hilbert-Schmidt) family of traceless Hermitian fixed
    matrices, so the full set is
    {particular + sum_i c_i basis[i]} intersected with the PSD cone.
    """

    particular: np.ndarray
    basis: tuple = field(default_factory=tuple)
    residual: float = 0.0

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def state(self, coefficients) -> np.ndarray:
        """Point of the affine fixed space at the given basis coefficients."""
        m = self.particular.copy()
        for c, b in zip(coefficients, self.basis):
            m = m + c * b
        return m


def _channel_residual(s_op: np.ndarray, m: np.ndarray) -> float:
    d = m.shape[0]
    return max_abs((s_op @ m.reshape(-1)).reshape(d, d) - m)


def _cesaro_particular(s_op: np.ndarray, d: int, tol: float, max_doublings: int):
    """Cesaro averages (1/N) sum_{k<N} Phi^k(I/d) with N doubling each step.

    Each iterate is re-hermitized and trace-renormalized (both exact
    properties of the true average) to suppress roundoff drift. Returns the
    best iterate and its residual.
    """
    n2 = d * d
    avg = np.eye(n2, dtype=complex)      # (1/N) sum_{k<N} S^k at N = 1
    power = s_op.copy()                  # S^N
    v0 = maximally_mixed(d).reshape(-1)
    best, best_res = None, np.inf
    for _ in range(max_doublings):
        m = (avg @ v0).reshape(d, d)
        m = (m + m.conj().T) / 2
        tr = np.trace(m).real
        if abs(tr) > 1e-6:
            m = m / tr
        res = _channel_residual(s_op, m)
        if res < best_res:
            best, best_res = m, res
        if best_res <= tol:
            break
        avg = 0.5 * (avg + power @ avg)
        power = power @ power
    return best, best_res


def _null_space(m: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space of m."""
    _, sv, vh = np.linalg.svd(m)
    scale = sv[0] if sv.size and sv[0] > 1.0 else 1.0
    rank = int(np.sum(sv > tol * scale))
    return vh[rank:].conj().T


def _project_to_fixed_space(s_op: np.ndarray, d: int, m: np.ndarray, tol: float):
    """Refine an approximate fixed point: project onto null(S - I), clip, renormalize."""
    ns = _null_space(s_op - np.eye(d * d), tol)
    v = ns @ (ns.conj().T @ m.reshape(-1))
    m2 = v.reshape(d, d)
    m2 = (m2 + m2.conj().T) / 2
    w, vec = np.linalg.eigh(m2)
    w = np.clip(w, 0.0, None)
    m2 = (vec * w) @ vec.conj().T
    tr = np.trace(m2).real
    if tr < 1e-12:
        return m, np.inf
    m2 = m2 / tr
    return m2, _channel_residual(s_op, m2)


def _hermitian_traceless_fixed_basis(s_op: np.ndarray, d: int,
                                     particular: np.ndarray, tol: float) -> tuple:
    """Orthonormal basis of traceless Hermitian fixed matrices.

    The fixed space of the channel is closed under dagger, so the Hermitian
    parts of a complex null-space basis of (S - I) span its Hermitian
    sector; subtracting multiples of ``particular`` (a fixed matrix of unit
    trace) removes the trace component without leaving the fixed space.
    """
    ns = _null_space(s_op - np.eye(d * d), tol)
    candidates = []
    for k in range(ns.shape[1]):
        b = ns[:, k].reshape(d, d)
        candidates.append((b + b.conj().T) / 2)
        candidates.append((b - b.conj().T) / 2j)
    basis = []
    for h in candidates:
        h = h - np.trace(h).real * particular
        for b in basis:
            h = h - np.real(np.trace(b.conj().T @ h)) * b
        norm = np.sqrt(np.real(np.trace(h.conj().T @ h)))
        if norm > 1e-8:
            basis.append(h / norm)
    return tuple(basis)


def fixed_point_set(ch: DeutschChannel, tol: float = FIXED_POINT_TOL,
                    max_doublings: int = MAX_DOUBLINGS) -> FixedPointSet:
    """Compute the consistent-state set of the channel.

    A particular solution comes from Cesaro averaging of the maximally mixed
    state (convergent for every trace-preserving positive map, and PSD by
    construction); if the doubling cap is hit first, the best iterate is
    refined by projection onto the null space of (S - I). The affine basis
    is extracted from that null space restricted to traceless Hermitian
    matrices. Raises ``SolverError`` if the residual cannot be brought
    under ``tol``.
    """
    d = ch.d_ctc
    s_op = superoperator_matrix(ch)
    particular, res = _cesaro_particular(s_op, d, tol, max_doublings)
    if res > tol:
        refined, res2 = _project_to_fixed_space(s_op, d, particular, tol)
        if res2 < res:
            particular, res = refined, res2
    if res > tol:
        raise SolverError(
            f"fixed-point residual {res:.3e} > {tol:.3e} after {max_doublings} doublings")
    basis = _hermitian_traceless_fixed_basis(s_op, d, particular, tol)
    return FixedPointSet(particular=particular, basis=basis, residual=res)


def _entropy_and_gradient(fps: FixedPointSet, coeffs: np.ndarray):
    """Entropy (bits) at the given coefficients and its gradient.

    d/dc_i of -Tr[sigma log2 sigma] is -Tr[b_i log2 sigma] for traceless
    b_i; the logarithm is taken on the positive eigenspace (iterates stay
    at maximal rank within the set, where this is exact).
    """
    m = fps.state(coeffs)
    w, v = np.linalg.eigh(m)
    if w.min() < -1e-12:
        return None, None
    pos = w > 1e-14
    ent = float(-np.sum(w[pos] * np.log2(w[pos])))
    log_m = (v[:, pos] * np.log2(w[pos])) @ v[:, pos].conj().T
    grad = np.array([-np.real(np.trace(b.conj().T @ log_m)) for b in fps.basis])
    return ent, grad


def max_entropy_fixed_point(fps: FixedPointSet, gradient_tol: float = 1e-10,
                            max_iter: int = 10000,
                            initial_coefficients=None) -> np.ndarray:
    """Entropy maximizer over the fixed-point set (Deutsch's selection rule).

    Projected gradient ascent in basis-coefficient space with backtracking:
    a step is halved until it both stays PSD and increases the entropy.
    Entropy is strictly concave on the compact convex set, so the ascent
    reaches the unique maximizer from any feasible start.
    """
    if not fps.basis:
        return fps.particular
    n = len(fps.basis)
    coeffs = np.zeros(n) if initial_coefficients is None else np.asarray(
        initial_coefficients, dtype=float).copy()
    ent, grad = _entropy_and_gradient(fps, coeffs)
    if ent is None:
        raise SolverError("infeasible starting coefficients for entropy ascent")
    # If the particular solution sits on the boundary of the PSD cone, nudge
    # 1% toward the maximally mixed state's projection into the fixed space
    # to start strictly inside.
    if initial_coefficients is None and \
            np.linalg.eigvalsh(fps.particular).min() < 1e-12:
        target = maximally_mixed(fps.particular.shape[0]) - fps.particular
        nudge = 0.01 * np.array(
            [np.real(np.trace(b.conj().T @ target)) for b in fps.basis])
        ent2, grad2 = _entropy_and_gradient(fps, nudge)
        if ent2 is not None:
            coeffs, ent, grad = nudge, ent2, grad2
    step = 1.0
    for _ in range(max_iter):
        if np.linalg.norm(grad) <= gradient_tol:
            break
        trial = step
        while trial > 1e-18:
            cand = coeffs + trial * grad
            ent2, grad2 = _entropy_and_gradient(fps, cand)
            if ent2 is not None and ent2 > ent:
                coeffs, ent, grad = cand, ent2, grad2
                step = trial * 2
                break
            trial /= 2
        else:
            break  # no uphill feasible step at any length: at the optimum
    return fps.state(coeffs)


@dataclass(frozen=True)
class CircuitResult:
    """Solved circuit: consistent CTC state, CR output, and summary figures."""

    rho_ctc: np.ndarray
    rho_cr_out: np.ndarray
    fixed_set: FixedPointSet
    entropy_ctc: float
    entropy_cr_in: float
    entropy_cr_out: float
    joint_out_mutual_information: float


def run_deutsch_circuit(ch: DeutschChannel, tol: float = FIXED_POINT_TOL) -> CircuitResult:
    """Solve the consistency condition and propagate the CR system.

    The CTC state is the maximum-entropy fixed point; the CR output is the
    complementary partial trace of the joint post-interaction state.
    """
    fps = fixed_point_set(ch, tol=tol)
    rho_ctc = max_entropy_fixed_point(fps)
    joint = ch.unitary @ tensor(ch.rho_cr_in, rho_ctc) @ ch.unitary.conj().T
    rho_cr_out = partial_trace(joint, (ch.d_cr, ch.d_ctc), keep=0)
    return CircuitResult(
        rho_ctc=rho_ctc,
        rho_cr_out=rho_cr_out,
        fixed_set=fps,
        entropy_ctc=von_neumann_entropy(rho_ctc),
        entropy_cr_in=von_neumann_entropy(ch.rho_cr_in),
        entropy_cr_out=von_neumann_entropy(rho_cr_out),
        joint_out_mutual_information=mutual_information(joint, (ch.d_cr, ch.d_ctc)),
    )


@dataclass(frozen=True)
class BellSwapResult:
    """Half of an entangled pair swapped with a CTC qubit: before/after summary."""

    rho_ctc: np.ndarray
    rho_ab_in: np.ndarray
    rho_ab_out: np.ndarray
    mutual_information_before: float
    mutual_information_after: float
    residual: float


def bell_swap_scenario(seed=None) -> BellSwapResult:
    """Swap a CTC qubit with one half of a maximally entangled pair.

    Qubits A and B start maximally entangled; B is swapped with the CTC
    qubit C. The consistency condition forces C to the maximally mixed
    state, and the partial-trace output strips all correlation between A
    and B: the joint output is I/4. The ``seed`` argument is accepted for
    interface uniformity; the analysis is deterministic.
    """
    eta_ab = linalg.bell_density()
    rho_b = partial_trace(eta_ab, (2, 2), keep=1)
    ch = DeutschChannel(unitary=linalg.SWAP.copy(), rho_cr_in=rho_b, d_cr=2, d_ctc=2)
    result = run_deutsch_circuit(ch)
    # Embed into the three-qubit space A (x) B (x) C to propagate the pair.
    u_full = tensor(np.eye(2, dtype=complex), linalg.SWAP)
    joint = u_full @ tensor(eta_ab, result.rho_ctc) @ u_full.conj().T
    rho_ab_out = partial_trace(joint, (4, 2), keep=0)
    return BellSwapResult(
        rho_ctc=result.rho_ctc,
        rho_ab_in=eta_ab,
        rho_ab_out=rho_ab_out,
        mutual_information_before=mutual_information(eta_ab, (2, 2)),
        mutual_information_after=mutual_information(rho_ab_out, (2, 2)),
        residual=result.fixed_set.residual,
    )


def perturbation_entropy_check(fps: FixedPointSet, maximizer: np.ndarray,
                               epsilon: float = 1e-3) -> float:
    """Largest entropy gain over +/- epsilon basis perturbations of the maximizer.

    Perturbed points are projected back to PSD (eigenvalue clipping, trace
    renormalization). A correct maximizer gives a non-positive result up to
    numerical noise.
    """
    base = von_neumann_entropy(maximizer)
    worst = -np.inf
    for b in fps.basis:
        for sign in (1.0, -1.0):
            m = maximizer + sign * epsilon * b
            w, v = np.linalg.eigh((m + m.conj().T) / 2)
            w = np.clip(w, 0.0, None)
            m = (v * w) @ v.conj().T
            m = m / np.trace(m).real
            worst = max(worst, von_neumann_entropy(m) - base)
    return worst if fps.basis else 0.0


def state_summary(rho) -> dict:
    """Human-oriented summary figures for a density matrix."""
    return {
        "dim": int(np.asarray(rho).shape[0]),
        "entropy_bits": von_neumann_entropy(rho),
        "purity": float(np.real(np.trace(linalg.as_matrix(rho) @ linalg.as_matrix(rho)))),
    }


__all__ = [
    "DeutschChannel", "FixedPointSet", "CircuitResult", "BellSwapResult",
    "SolverError", "apply_channel", "cr_output", "superoperator_matrix",
    "fixed_point_set", "max_entropy_fixed_point", "run_deutsch_circuit",
    "bell_swap_scenario", "perturbation_entropy_check", "state_summary",
    "FIXED_POINT_TOL", "trace_distance",
]
