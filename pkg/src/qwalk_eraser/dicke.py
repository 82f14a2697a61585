"""
Multi-coin walk with one Hadamard-tossed coin per step, stored in the
(T+1)-dimensional symmetric coin subspace.

After ``T`` steps the joint state is ``sum_k beta_k |x = 2k - T> (x) |Gamma_k>``
where ``|Gamma_k>`` is the equal-weight superposition of all coin strings
that move the particle to ``2k - T``. Under the package sign convention
(coin 0 moves right) these are the strings with exactly ``k`` zeros, i.e.
``T - k`` ones. Only the (T+1) coefficients ``beta_k`` are stored.

The full ``2^T`` representation in :func:`brute_force_mcqw` exists as a
reference for tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.special import gammaln

from .errors import CapacityError
from .walk import HADAMARD, ProbabilityDistribution, _check_steps

__all__ = [
    "BRUTE_FORCE_MAX_T",
    "DickeDiagonalState",
    "FullMulticoinState",
    "log_binomial",
    "log_gamma_coefficients",
    "gamma_coefficients",
    "canonical_phi_T",
    "brute_force_mcqw",
    "compress",
    "spatial_marginal",
    "momentum_amplitudes",
    "to_momentum",
    "from_momentum",
    "phases",
    "g_state",
    "cyclic_shift",
    "reduced_coin_matrix",
]

BRUTE_FORCE_MAX_T = 20

_NORM_TOL = 1e-10


def log_binomial(n: int, k):
    """``ln C(n, k)`` via log-gamma; ``k`` may be an array."""
    k = np.asarray(k, dtype=float)
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def log_gamma_coefficients(T: int) -> NDArray[np.float64]:
    """``ln gamma_k = (ln C(T, k) - T ln 2) / 2`` for ``k = 0..T``."""
    T = _check_steps(T, 1)
    k = np.arange(T + 1)
    return 0.5 * (log_binomial(T, k) - T * math.log(2.0))


def gamma_coefficients(T: int) -> NDArray[np.float64]:
    """Schmidt coefficients ``gamma_k = sqrt(C(T, k) 2^-T)``, overflow-safe in ``T``."""
    return np.exp(log_gamma_coefficients(T))


def _check_normalized(vec, what: str) -> None:
    total = float(np.sum(np.abs(vec) ** 2))
    if abs(total - 1.0) > _NORM_TOL:
        raise ValueError(f"{what} is not normalized (squared norm {total:.17g})")


@dataclass(frozen=True)
class DickeDiagonalState:
    """
    Compressed multi-coin state ``sum_k beta_k |2k - T> (x) |Gamma_k>``.

    ``beta`` is not required to be normalized: :func:`compress` returns the
    symmetric component of an arbitrary state, which may be shorter.
    """

    T: int
    beta: NDArray[np.complex128]

    def __post_init__(self):
        b = np.array(self.beta, dtype=complex)
        if b.shape != (self.T + 1,):
            raise ValueError(f"expected {self.T + 1} coefficients for T={self.T}, got shape {b.shape}")
        b.setflags(write=False)
        object.__setattr__(self, "beta", b)

    @property
    def positions(self) -> NDArray[np.int64]:
        return 2 * np.arange(self.T + 1) - self.T

    def norm(self) -> float:
        return float(np.linalg.norm(self.beta))

    def is_normalized(self, atol: float = 1e-12) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= atol

    def schmidt_rank(self, atol: float = 0.0) -> int:
        return int(np.count_nonzero(np.abs(self.beta) > atol))


@dataclass(frozen=True)
class FullMulticoinState:
    """
    Multi-coin state over all ``2^T`` coin strings.

    Bit ``i`` of the integer index is the value of coin ``i + 1``. Each coin
    string carries a definite particle position, stored in ``positions``.
    """

    T: int
    amplitudes: NDArray[np.complex128]
    positions: NDArray[np.int64]

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        pos = np.array(self.positions, dtype=np.int64).reshape(-1)
        if amps.shape != (2**self.T,) or pos.shape != amps.shape:
            raise ValueError(f"expected 2^{self.T} amplitudes and positions")
        amps.setflags(write=False)
        pos.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "positions", pos)

    @property
    def popcounts(self) -> NDArray[np.int64]:
        idx = np.arange(2**self.T)
        return ((idx[:, None] >> np.arange(self.T)[None, :]) & 1).sum(axis=1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def canonical_phi_T(T: int) -> DickeDiagonalState:
    """Multi-coin walk state after ``T`` steps from ``|0> (x) H^T |0...0>``."""
    return DickeDiagonalState(T, gamma_coefficients(T).astype(complex))


def brute_force_mcqw(T: int, max_T: int = BRUTE_FORCE_MAX_T) -> FullMulticoinState:
    """
    Step-by-step multi-coin walk over all ``2^T`` coin strings.

    Step ``i`` tosses coin ``i`` with a Hadamard and then shifts the particle
    according to that coin. Since every coin starts in ``|0>`` and each shift
    reads one coin only, the position is a function of the coin string at all
    times, so it is tracked as a per-string array instead of a separate axis.
    """
    T = _check_steps(T, 1)
    if T > max_T:
        raise CapacityError(f"brute-force multi-coin walk limited to T <= {max_T}, got {T}")

    # axis j of the tensor is coin T - j (C order puts bit 0 on the last axis)
    psi = np.zeros((2,) * T, dtype=complex)
    psi[(0,) * T] = 1.0
    positions = np.zeros((2,) * T, dtype=np.int64)
    for i in range(T):
        axis = T - 1 - i
        psi = np.moveaxis(np.tensordot(HADAMARD, psi, axes=([1], [axis])), 0, axis)
        coin = np.arange(2).reshape([2 if a == axis else 1 for a in range(T)])
        positions = positions + (1 - 2 * coin)
    return FullMulticoinState(T, psi.reshape(-1), positions.reshape(-1))


def compress(full: FullMulticoinState) -> tuple[DickeDiagonalState, float]:
    """
    Project onto the symmetric subspace paired with the particle position.

    Returns the Dicke-diagonal component and the norm of what is left over.
    A coin string with ``k`` zeros is paired with index ``k``.
    """
    T = full.T
    zeros = T - full.popcounts
    sizes = np.array([math.comb(T, k) for k in range(T + 1)], dtype=float)
    sums = np.zeros(T + 1, dtype=complex)
    np.add.at(sums, zeros, full.amplitudes)
    beta = sums / np.sqrt(sizes)
    # the symmetric component gives amplitude beta_k / sqrt(C(T, k)) per string
    leftover = full.amplitudes - (beta / np.sqrt(sizes))[zeros]
    return DickeDiagonalState(T, beta), float(np.linalg.norm(leftover))


def spatial_marginal(state: DickeDiagonalState) -> ProbabilityDistribution:
    """Position distribution ``|beta_k|^2``."""
    _check_normalized(state.beta, "state")
    return ProbabilityDistribution(state.T, np.abs(state.beta) ** 2)


def phases(T: int, m: int) -> NDArray[np.complex128]:
    """``exp(i 2 pi k m / (T+1))`` for ``k = 0..T``."""
    k = np.arange(T + 1)
    return np.exp(2j * np.pi * ((k * m) % (T + 1)) / (T + 1))


def _check_momentum(T: int, m: int) -> int:
    if isinstance(m, bool) or int(m) != m:
        raise TypeError(f"momentum index must be an integer, got {m!r}")
    m = int(m)
    if not 0 <= m <= T:
        raise IndexError(f"momentum index {m} outside 0..{T}")
    return m


def momentum_amplitudes(state: DickeDiagonalState, m: int) -> complex:
    """
    Overlap of the spatial part with the momentum-like state ``|m>``.

    ``<m|x=2k-T> = exp(+i 2 pi k m / (T+1)) / sqrt(T+1)``, so the result is
    ``sum_k beta_k exp(+i 2 pi k m / (T+1)) / sqrt(T+1)``.
    """
    m = _check_momentum(state.T, m)
    return complex(np.dot(phases(state.T, m), state.beta) / math.sqrt(state.T + 1))


def to_momentum(state: DickeDiagonalState) -> NDArray[np.complex128]:
    """All momentum amplitudes at once (unitary FFT)."""
    return np.fft.ifft(state.beta, norm="ortho")


def from_momentum(amplitudes) -> DickeDiagonalState:
    """Inverse of :func:`to_momentum`."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    return DickeDiagonalState(amplitudes.size - 1, np.fft.fft(amplitudes, norm="ortho"))


def g_state(T: int, m: int) -> NDArray[np.complex128]:
    """Coin state ``|G_m> = sum_k gamma_k exp(i 2 pi k m / (T+1)) |Gamma_k>``."""
    m = _check_momentum(T, m)
    return gamma_coefficients(T) * phases(T, m)


def cyclic_shift(v, n: int) -> NDArray[np.complex128]:
    """Apply ``V^n`` with ``V = sum_k exp(i 2 pi k / (T+1)) |Gamma_k><Gamma_k|``."""
    v = np.asarray(v, dtype=complex)
    T = v.size - 1
    return v * phases(T, n)


def reduced_coin_matrix(T: int) -> NDArray[np.float64]:
    """Reduced coin state ``diag(gamma_k^2)`` in the Dicke basis."""
    return np.diag(gamma_coefficients(T) ** 2)
