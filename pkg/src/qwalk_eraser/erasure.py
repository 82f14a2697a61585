"""
Which-way erasure by a rank-1 projective measurement of the coins.

Measuring the coins onto ``|pi> = sum_k alpha_k |Gamma_k>`` leaves the
particle with distribution ``|beta_k|^2 |alpha_k|^2 / N``, where the success
probability ``N`` is the normalization. Inverting that relation gives the
projector that turns the binomial distribution into any target distribution;
targeting the Hadamard-walk distribution recovers ballistic spreading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .dicke import DickeDiagonalState, _check_normalized, gamma_coefficients
from .errors import DimensionError, ImpossibleOutcomeError
from .walk import CoinInit, ProbabilityDistribution, _check_steps

__all__ = [
    "DickeProjector",
    "HadamardAmplitudes",
    "hadamard_amplitudes",
    "hadamard_closed_form",
    "conditional_distribution",
    "complement_distribution",
    "projector_from_target",
    "pi_state",
]


@dataclass(frozen=True)
class DickeProjector:
    """
    Rank-1 coin projector ``|pi><pi|`` with ``|pi> = sum_k alpha_k |Gamma_k>``.

    ``success_prob`` is the probability of the projective outcome on the
    state the projector was built for (the canonical walk state unless stated
    otherwise).
    """

    T: int
    alpha: NDArray[np.complex128]
    success_prob: float

    def __post_init__(self):
        a = np.array(self.alpha, dtype=complex)
        if a.shape != (self.T + 1,):
            raise DimensionError(f"expected {self.T + 1} coefficients for T={self.T}, got shape {a.shape}")
        _check_normalized(a, "projector state")
        if not 0.0 < self.success_prob <= 1.0 + 1e-12:
            raise ValueError(f"success probability {self.success_prob} outside (0, 1]")
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "success_prob", float(self.success_prob))

    @classmethod
    def for_state(cls, state: DickeDiagonalState, alpha) -> "DickeProjector":
        """Build from ``alpha`` with the success probability evaluated on ``state``."""
        alpha = np.asarray(alpha, dtype=complex)
        if alpha.shape != state.beta.shape:
            raise DimensionError("projector and state dimensions differ")
        prob = float(np.sum(np.abs(state.beta) ** 2 * np.abs(alpha) ** 2))
        if prob <= 0.0:
            raise ImpossibleOutcomeError("projector is orthogonal to the state")
        return cls(state.T, alpha, prob)

    def matrix(self) -> NDArray[np.complex128]:
        return np.outer(self.alpha, self.alpha.conj())


def _weights(state: DickeDiagonalState, proj: DickeProjector) -> NDArray[np.float64]:
    if state.T != proj.T:
        raise DimensionError(f"state has T={state.T}, projector has T={proj.T}")
    _check_normalized(state.beta, "state")
    return np.abs(state.beta) ** 2 * np.abs(proj.alpha) ** 2


def conditional_distribution(state: DickeDiagonalState, proj: DickeProjector) -> ProbabilityDistribution:
    """Position distribution after the coins are found in ``|pi>``."""
    w = _weights(state, proj)
    total = w.sum()
    if total <= 0.0:
        raise ImpossibleOutcomeError("projector is orthogonal to the state; outcome never occurs")
    return ProbabilityDistribution(state.T, w / total)


def complement_distribution(state: DickeDiagonalState, proj: DickeProjector) -> ProbabilityDistribution:
    """
    Position distribution after the complementary outcome ``1 - |pi><pi|``.

    Computed as ``(p - N q) / (1 - N)`` with entries clamped at zero.
    """
    w = _weights(state, proj)
    success = w.sum()
    p = np.abs(state.beta) ** 2
    failure = 1.0 - success
    if failure <= 1e-15:
        raise ImpossibleOutcomeError("complementary outcome has zero probability")
    r = np.clip((p - w) / failure, 0.0, None)
    return ProbabilityDistribution(state.T, r / r.sum())


def projector_from_target(T: int, target: ProbabilityDistribution) -> DickeProjector:
    """
    Projector whose conditional distribution on the canonical state is ``target``.

    ``alpha_k = sqrt(N p_k) / gamma_k`` with ``N = 1 / sum_k (p_k / gamma_k^2)``.
    The phases of ``alpha_k`` are free; they are chosen real and non-negative.
    """
    T = _check_steps(T, 1)
    if target.T != T:
        raise DimensionError(f"target has T={target.T}, expected {T}")
    gamma = gamma_coefficients(T)
    ratio = target.weights / gamma**2
    success = 1.0 / ratio.sum()
    alpha = np.sqrt(success * ratio)
    alpha /= np.linalg.norm(alpha)
    return DickeProjector(T, alpha, success)


@dataclass(frozen=True)
class HadamardAmplitudes:
    """
    Coin-resolved amplitudes of the Hadamard walk from ``|0> (x) |0>``.

    ``psi0[k]`` and ``psi1[k]`` belong to position ``x = 2k - T``. At
    ``k = T`` the combinatorial formula gives zero; the true probability
    there is ``2^-T``.
    """

    T: int
    psi0: NDArray[np.float64]
    psi1: NDArray[np.float64]


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n or n < 0:
        return 0
    return math.comb(n, k)


def _scaled(n: int, T: int) -> float:
    # n / 2^(T/2) without overflowing for large integers
    value = n / 2 ** (T // 2)
    return value / math.sqrt(2.0) if T % 2 else value


def _hadamard_sums(T: int) -> tuple[list[int], list[int]]:
    s0, s1 = [], []
    for k in range(T + 1):
        a = b = 0
        for j in range(k + 1):
            sign = -1 if (T - k - j) % 2 else 1
            a += sign * _binom(T - k - 1, j - 1) * _binom(k, j)
            b -= sign * _binom(T - k - 1, j) * _binom(k, j)
        s0.append(a)
        s1.append(b)
    return s0, s1


def hadamard_amplitudes(T: int) -> HadamardAmplitudes:
    """Evaluate the combinatorial amplitude sums with exact integer arithmetic."""
    T = _check_steps(T, 1)
    s0, s1 = _hadamard_sums(T)
    return HadamardAmplitudes(
        T,
        np.array([_scaled(v, T) for v in s0]),
        np.array([_scaled(v, T) for v in s1]),
    )


def hadamard_closed_form(T: int, init: CoinInit | str = CoinInit.SYMMETRIC) -> ProbabilityDistribution:
    """
    Closed-form Hadamard-walk distribution after ``T`` steps.

    ``ZERO`` uses the combinatorial sums with the endpoint override
    ``p(+-T) = 2^-T``; ``ONE`` is its mirror image and ``SYMMETRIC`` the
    average of the two.
    """
    T = _check_steps(T, 1)
    init = CoinInit.parse(init)
    s0, s1 = _hadamard_sums(T)
    denom = 2**T
    # exact rational p_k = (s0^2 + s1^2) / 2^T, rounded once
    p = [(a * a + b * b) / denom for a, b in zip(s0, s1)]
    p[0] = p[T] = 1 / denom
    zero = np.array(p)
    if init is CoinInit.ZERO:
        weights = zero
    elif init is CoinInit.ONE:
        weights = zero[::-1]
    else:
        weights = 0.5 * (zero + zero[::-1])
    return ProbabilityDistribution(T, weights)


def pi_state(T: int, init: CoinInit | str = CoinInit.SYMMETRIC) -> DickeProjector:
    """Projector that turns the binomial distribution into the Hadamard-walk one."""
    return projector_from_target(T, hadamard_closed_form(T, init))

