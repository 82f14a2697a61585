"""
Standard one-dimensional Hadamard walk and the classical random-walk reference.

Sign convention used throughout the package: coin ``c = 0`` moves the
particle one site to the right (``x + 1``), coin ``c = 1`` moves it one site
to the left (``x - 1``).

Positions after ``T`` steps live on ``{-T, -T+2, ..., T}``; distributions are
stored on that lattice with index ``k`` standing for ``x = 2k - T``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import CapacityError, DimensionError

__all__ = [
    "CoinInit",
    "WalkState",
    "ProbabilityDistribution",
    "HADAMARD",
    "hadamard_coin",
    "shift",
    "initial_state",
    "dtqw_evolve",
    "dtqw_distribution",
    "path_sum_oracle",
    "classical_distribution",
    "std_dev",
    "total_variation",
    "PATH_SUM_MAX_T",
]

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)

# 2^T paths are enumerated
PATH_SUM_MAX_T = 20

_NORM_TOL = 1e-10


class CoinInit(enum.Enum):
    """Initial coin state of the single-coin walk."""

    ZERO = "zero"
    ONE = "one"
    SYMMETRIC = "symmetric"

    @property
    def amplitudes(self) -> NDArray[np.complex128]:
        """Coin amplitudes ``(a_0, a_1)``; SYMMETRIC is ``(|0> + i|1>)/sqrt(2)``."""
        if self is CoinInit.ZERO:
            return np.array([1.0, 0.0], dtype=complex)
        if self is CoinInit.ONE:
            return np.array([0.0, 1.0], dtype=complex)
        return np.array([1.0, 1.0j]) / math.sqrt(2.0)

    @classmethod
    def parse(cls, value: "CoinInit | str") -> "CoinInit":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            choices = ", ".join(c.value for c in cls)
            raise ValueError(f"unknown coin init {value!r}; expected one of {choices}") from None


@dataclass(frozen=True)
class WalkState:
    """
    Position-coin amplitude table of a single-coin walk.

    Attributes
    ----------
    steps_so_far : int
        Number of walk steps already applied.
    amplitudes : ndarray, shape (2 * capacity + 1, 2)
        ``amplitudes[x + capacity, c]`` is the amplitude of ``|x> (x) |c>``.
    """

    steps_so_far: int
    amplitudes: NDArray[np.complex128]

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 2 or amps.shape[1] != 2 or amps.shape[0] % 2 != 1:
            raise ValueError(f"amplitude table must have shape (2n+1, 2), got {amps.shape}")
        if self.steps_so_far < 0:
            raise ValueError("steps_so_far must be non-negative")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def capacity(self) -> int:
        """Largest |x| representable on the grid."""
        return (self.amplitudes.shape[0] - 1) // 2

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(-self.capacity, self.capacity + 1)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def amplitude(self, x: int, c: int) -> complex:
        if abs(x) > self.capacity:
            return 0j
        return complex(self.amplitudes[x + self.capacity, c])


@dataclass(frozen=True)
class ProbabilityDistribution:
    """
    Probabilities over the reachable lattice ``x = 2k - T``, ``k = 0..T``.
    """

    T: int
    weights: NDArray[np.float64]

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if self.T < 0:
            raise ValueError("T must be non-negative")
        if w.shape != (self.T + 1,):
            raise DimensionError(f"expected {self.T + 1} weights for T={self.T}, got shape {w.shape}")
        if np.any(w < 0) or np.any(w > 1 + _NORM_TOL):
            raise ValueError("weights must lie in [0, 1]")
        if abs(w.sum() - 1.0) > _NORM_TOL:
            raise ValueError(f"weights sum to {w.sum():.17g}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def positions(self) -> NDArray[np.int64]:
        return 2 * np.arange(self.T + 1) - self.T

    def mirrored(self) -> "ProbabilityDistribution":
        """Reflection ``x -> -x``."""
        return ProbabilityDistribution(self.T, self.weights[::-1])

    def __len__(self) -> int:
        return self.T + 1


def _check_steps(T: int, minimum: int = 0) -> int:
    if isinstance(T, bool) or int(T) != T:
        raise TypeError(f"number of steps must be an integer, got {T!r}")
    T = int(T)
    if T < minimum:
        raise ValueError(f"number of steps must be >= {minimum}, got {T}")
    return T


def hadamard_coin(state: WalkState) -> WalkState:
    """Apply the Hadamard coin at every position."""
    return WalkState(state.steps_so_far, state.amplitudes @ HADAMARD.T)


def shift(state: WalkState) -> WalkState:
    """
    Conditional translation: ``(x, 0) -> (x+1, 0)`` and ``(x, 1) -> (x-1, 1)``.

    Raises
    ------
    CapacityError
        If the walk has already used every site of its grid.
    """
    if state.steps_so_far >= state.capacity:
        raise CapacityError(
            f"position grid of half-width {state.capacity} exhausted after "
            f"{state.steps_so_far} steps"
        )
    old = state.amplitudes
    new = np.zeros_like(old)
    new[1:, 0] = old[:-1, 0]
    new[:-1, 1] = old[1:, 1]
    return WalkState(state.steps_so_far + 1, new)


def initial_state(init: CoinInit | str, capacity: int) -> WalkState:
    """``|x=0> (x) |init>`` on a grid of half-width ``capacity``."""
    capacity = _check_steps(capacity)
    amps = np.zeros((2 * capacity + 1, 2), dtype=complex)
    amps[capacity] = CoinInit.parse(init).amplitudes
    return WalkState(0, amps)


def dtqw_evolve(T: int, init: CoinInit | str = CoinInit.SYMMETRIC) -> WalkState:
    """Run ``T`` steps of the Hadamard walk starting from ``|0> (x) |init>``."""
    T = _check_steps(T)
    state = initial_state(init, T)
    for _ in range(T):
        state = shift(hadamard_coin(state))
    return state


def dtqw_distribution(state: WalkState) -> ProbabilityDistribution:
    """Spatial distribution ``p(x) = sum_c |a(x, c)|^2`` on the reachable lattice."""
    T = state.steps_so_far
    cap = state.capacity
    per_site = np.sum(np.abs(state.amplitudes) ** 2, axis=1)
    idx = 2 * np.arange(T + 1) - T + cap
    return ProbabilityDistribution(T, per_site[idx])


def path_sum_oracle(T: int, init: CoinInit | str = CoinInit.SYMMETRIC) -> ProbabilityDistribution:
    """
    Hadamard-walk distribution by explicit enumeration of all ``2^T`` coin paths.

    A path is the sequence ``(c_1, ..., c_T)`` of coin values right after each
    coin toss. Its amplitude is ``sum_c0 init[c0] * prod_t H[c_t, c_{t-1}]`` and
    it ends at ``x = sum_t (-1)^{c_t}`` with final coin ``c_T``.
    """
    T = _check_steps(T)
    if T > PATH_SUM_MAX_T:
        raise CapacityError(f"path enumeration limited to T <= {PATH_SUM_MAX_T}, got {T}")
    init_amps = CoinInit.parse(init).amplitudes
    if T == 0:
        return ProbabilityDistribution(0, [1.0])

    paths = np.arange(2**T)
    bits = (paths[:, None] >> np.arange(T)[None, :]) & 1  # bits[:, t] = c_{t+1}

    amp = np.zeros(2**T, dtype=complex)
    for c0, a0 in enumerate(init_amps):
        if a0 == 0:
            continue
        prod = np.full(2**T, a0, dtype=complex)
        prev = np.full(2**T, c0)
        for t in range(T):
            prod *= HADAMARD[bits[:, t], prev]
            prev = bits[:, t]
        amp += prod

    x = T - 2 * bits.sum(axis=1)
    k = (x + T) // 2
    final_coin = bits[:, -1]
    bins = 2 * k + final_coin
    n = 2 * (T + 1)
    re = np.bincount(bins, weights=amp.real, minlength=n)
    im = np.bincount(bins, weights=amp.imag, minlength=n)
    probs = (re**2 + im**2).reshape(T + 1, 2).sum(axis=1)
    return ProbabilityDistribution(T, probs)


def classical_distribution(T: int) -> ProbabilityDistribution:
    """Binomial distribution ``C(T, k) / 2^T`` of the unbiased classical walk."""
    T = _check_steps(T)
    denom = 2**T
    return ProbabilityDistribution(T, [math.comb(T, k) / denom for k in range(T + 1)])


def std_dev(dist: ProbabilityDistribution) -> float:
    """Standard deviation of the position ``x = 2k - T``."""
    x = dist.positions.astype(float)
    p = dist.weights
    mean = float(np.dot(p, x))
    var = float(np.dot(p, (x - mean) ** 2))
    return math.sqrt(max(var, 0.0))


def total_variation(a: ProbabilityDistribution, b: ProbabilityDistribution) -> float:
    """Half the L1 distance between two distributions on the same lattice."""
    if a.T != b.T:
        raise DimensionError(f"distributions for T={a.T} and T={b.T} cannot be compared")
    return 0.5 * float(np.sum(np.abs(a.weights - b.weights)))
