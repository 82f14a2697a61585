"""
Maximum-confidence POVM that erases which-way information completely.

The conclusive elements ``Pi_m = eta |G~_m><G~_m|`` with
``|G~_m> = rho_c^-1 |G_m>`` fire only on ``|G_m>``, which leaves the
particle in the momentum-like state ``|m>`` and hence uniformly spread over
the reachable lattice. The inconclusive element ``Pi_?`` fills the POVM up to
the identity.

Everything is diagonal or rank-1 in the Dicke basis, so no matrix square
roots or eigensolvers are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.random import Generator, Philox
from numpy.typing import NDArray

from .dicke import DickeDiagonalState, _check_momentum, _check_normalized, log_gamma_coefficients, phases
from .errors import CapacityError, DimensionError, ImpossibleOutcomeError
from .walk import ProbabilityDistribution, _check_steps

__all__ = [
    "POVM_MAX_T",
    "INCONCLUSIVE",
    "PovmSet",
    "MeasurementRecord",
    "g_tilde",
    "optimal_eta",
    "log_optimal_eta",
    "build_povm",
    "outcome_probabilities",
    "post_measurement_distribution",
    "success_probability",
    "log_success_probability",
    "sample_outcomes",
    "sample_measurement",
]

# gamma_k^-1 reaches 2^(T/2); beyond this the assembled matrices lose the
# 1e-12 completeness tolerance in double precision
POVM_MAX_T = 60

INCONCLUSIVE = None
"""Outcome label of the inconclusive element ``Pi_?``."""


def g_tilde(T: int, m: int) -> NDArray[np.complex128]:
    """``|G~_m> = sum_k gamma_k^-1 exp(i 2 pi k m / (T+1)) |Gamma_k>`` (unnormalized)."""
    m = _check_momentum(T, m)
    return np.exp(-log_gamma_coefficients(T)) * phases(T, m)


def log_optimal_eta(T: int) -> float:
    T = _check_steps(T, 1)
    return -T * math.log(2.0) - math.log(T + 1)


def optimal_eta(T: int) -> float:
    """
    Largest common weight ``eta = 1 / (2^T (T+1))`` keeping ``sum_m Pi_m <= 1``.

    ``sum_m |G~_m><G~_m| = (T+1) diag(gamma_k^-2)``; its largest entry sits at
    ``k = 0`` and ``k = T`` where ``gamma_k^-2 = 2^T``.
    """
    T = _check_steps(T, 1)
    return math.ldexp(1.0 / (T + 1), -T)


def log_success_probability(T: int) -> float:
    T = _check_steps(T, 1)
    return math.log(T + 1) - T * math.log(2.0)


def success_probability(T: int) -> float:
    """Probability ``(T+1) 2^-T`` that some conclusive outcome fires."""
    T = _check_steps(T, 1)
    return math.ldexp(T + 1, -T)


@dataclass(frozen=True)
class PovmSet:
    """
    The ``T+1`` conclusive elements and the inconclusive one, in the Dicke basis.

    Attributes
    ----------
    T : int
    eta : float
        Common weight of the conclusive elements.
    g_tilde : ndarray, shape (T+1, T+1)
        Row ``m`` holds the components of ``|G~_m>``.
    pi_fail_diag : ndarray, shape (T+1,)
        Diagonal of ``Pi_?``, equal to ``1 - 1/C(T, k)``.
    """

    T: int
    eta: float
    g_tilde: NDArray[np.complex128]
    pi_fail_diag: NDArray[np.float64]

    @property
    def n_outcomes(self) -> int:
        """Conclusive outcomes plus the inconclusive one."""
        return self.T + 2

    def element(self, m: int) -> NDArray[np.complex128]:
        """Matrix of the conclusive element ``Pi_m``."""
        m = _check_momentum(self.T, m)
        v = self.g_tilde[m]
        return self.eta * np.outer(v, v.conj())

    def inconclusive(self) -> NDArray[np.float64]:
        return np.diag(self.pi_fail_diag)

    def completeness(self) -> NDArray[np.complex128]:
        """``Pi_? + sum_m Pi_m`` assembled explicitly."""
        total = self.eta * (self.g_tilde.T @ self.g_tilde.conj())
        return total + self.inconclusive()


def build_povm(T: int, max_T: int = POVM_MAX_T) -> PovmSet:
    """
    Assemble the maximum-confidence POVM for walk length ``T``.

    Raises
    ------
    CapacityError
        If ``T`` exceeds ``max_T`` (default :data:`POVM_MAX_T`).
    """
    T = _check_steps(T, 1)
    if T > max_T:
        raise CapacityError(
            f"POVM assembly limited to T <= {max_T} (gamma_k^-1 spans 2^(T/2)); got {T}"
        )
    rows = np.array([g_tilde(T, m) for m in range(T + 1)])
    fail = np.array([1.0 - 1.0 / math.comb(T, k) for k in range(T + 1)])
    return PovmSet(T, optimal_eta(T), rows, fail)


def _check_pair(state: DickeDiagonalState, povm: PovmSet) -> None:
    if state.T != povm.T:
        raise DimensionError(f"state has T={state.T}, POVM has T={povm.T}")
    _check_normalized(state.beta, "state")


def _branch_weights(state: DickeDiagonalState, povm: PovmSet, outcome: Optional[int]) -> NDArray[np.float64]:
    # unnormalized position weights of one branch
    if outcome is INCONCLUSIVE:
        return np.abs(state.beta) ** 2 * povm.pi_fail_diag
    m = _check_momentum(povm.T, outcome)
    # Pi_m is rank-1: the particle is left in sum_k beta_k <G~_m|Gamma_k> |x_k>
    amps = math.sqrt(povm.eta) * state.beta * povm.g_tilde[m].conj()
    return np.abs(amps) ** 2


def outcome_probabilities(state: DickeDiagonalState, povm: PovmSet) -> NDArray[np.float64]:
    """Born probabilities of outcomes ``m = 0..T`` followed by the inconclusive one."""
    _check_pair(state, povm)
    probs = [_branch_weights(state, povm, m).sum() for m in range(povm.T + 1)]
    probs.append(_branch_weights(state, povm, INCONCLUSIVE).sum())
    return np.array(probs)


def post_measurement_distribution(
    state: DickeDiagonalState, povm: PovmSet, outcome: Optional[int]
) -> ProbabilityDistribution:
    """
    Position distribution conditioned on ``outcome``.

    ``outcome`` is a momentum index ``m`` or :data:`INCONCLUSIVE`.
    """
    _check_pair(state, povm)
    w = _branch_weights(state, povm, outcome)
    total = w.sum()
    if total <= 0.0:
        label = "?" if outcome is INCONCLUSIVE else outcome
        raise ImpossibleOutcomeError(f"outcome {label} has zero probability")
    return ProbabilityDistribution(state.T, w / total)


@dataclass(frozen=True)
class MeasurementRecord:
    """One simulated shot: the POVM outcome and the detected position."""

    outcome: Optional[int]
    x: int

    @property
    def conclusive(self) -> bool:
        return self.outcome is not INCONCLUSIVE


def _shot_uniforms(seed: int, start: int, stop: int) -> NDArray[np.float64]:
    # shot i owns Philox block i (four doubles); only the first two are used
    bitgen = Philox(key=seed)
    bitgen.advance(start)
    return Generator(bitgen).random((stop - start, 4))[:, :2]


def _inverse_cdf(cdf: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.int64]:
    # side="right" never lands on a zero-width bin; the clamp handles u * cdf[-1]
    # rounding up to cdf[-1]
    idx = np.searchsorted(cdf, u * cdf[-1], side="right")
    last = int(np.flatnonzero(np.diff(cdf, prepend=0.0) > 0)[-1])
    return np.minimum(idx, last)


def sample_outcomes(
    state: DickeDiagonalState,
    povm: PovmSet,
    seed: int,
    shots: int,
    chunk_size: int = 65536,
) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    """
    Vectorized sampler returning outcome indices and positions.

    Outcome index ``T + 1`` means inconclusive. Shot ``i`` depends only on
    ``(seed, i)``, so the result does not depend on ``chunk_size``.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    probs = outcome_probabilities(state, povm)
    outcome_cdf = np.cumsum(probs)
    branch_cdfs = []
    for idx, p in enumerate(probs):
        if p <= 0.0:
            branch_cdfs.append(None)
            continue
        label = INCONCLUSIVE if idx == povm.T + 1 else idx
        branch_cdfs.append(np.cumsum(post_measurement_distribution(state, povm, label).weights))

    outcomes = np.empty(shots, dtype=np.int64)
    ks = np.empty(shots, dtype=np.int64)
    for start in range(0, shots, chunk_size):
        stop = min(start + chunk_size, shots)
        u = _shot_uniforms(seed, start, stop)
        out = _inverse_cdf(outcome_cdf, u[:, 0])
        k = np.empty(stop - start, dtype=np.int64)
        for o in np.unique(out):
            mask = out == o
            k[mask] = _inverse_cdf(branch_cdfs[o], u[mask, 1])
        outcomes[start:stop] = out
        ks[start:stop] = k
    return outcomes, 2 * ks - state.T


def sample_measurement(
    state: DickeDiagonalState,
    povm: PovmSet,
    seed: int,
    shots: int,
    chunk_size: int = 65536,
) -> list[MeasurementRecord]:
    """
    Monte Carlo shots: draw an outcome, then a position from its branch.

    Both draws use inverse-CDF sampling on a counter-based generator keyed
    by ``seed``.
    """
    outcomes, xs = sample_outcomes(state, povm, seed, shots, chunk_size)
    T = povm.T
    return [
        MeasurementRecord(INCONCLUSIVE if o == T + 1 else int(o), int(x))
        for o, x in zip(outcomes.tolist(), xs.tolist())
    ]
