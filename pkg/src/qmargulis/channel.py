"""Code-capacity depolarizing noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

RNG_ALGORITHM = "numpy-PCG64/SeedSequence(seed,spawn_key=(stream,))"


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream identified by ``(seed, stream)``.

    Streams come from ``SeedSequence(seed, spawn_key=(stream,))`` feeding
    PCG64, which numpy guarantees to be stable across platforms.
    """

    seed: int
    stream: int = 0
    algorithm: str = RNG_ALGORITHM

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class PauliError:
    ex: np.ndarray
    ez: np.ndarray

    @property
    def n(self) -> int:
        return self.ex.size

    def weight(self) -> int:
        return int(np.count_nonzero(self.ex | self.ez))

    def labels(self) -> str:
        table = np.array(list("IXZY"))
        return "".join(table[self.ex + 2 * self.ez])


def _check_probability(p_phys: float) -> None:
    if not 0.0 <= p_phys <= 1.0:
        raise ValidationError(f"error probability {p_phys} is outside [0, 1]")


def sample(n: int, p_phys: float, rng: RngStream | np.random.Generator) -> PauliError:
    """Draw X, Y, Z each with probability ``p_phys / 3`` on every qubit."""
    _check_probability(p_phys)
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    u = gen.random(n)
    third = p_phys / 3.0
    ex = u < 2.0 * third  # X on [0, p/3), Y on [p/3, 2p/3)
    ez = (u >= third) & (u < p_phys)  # Y and Z on [p/3, p)
    return PauliError(ex.astype(np.uint8), ez.astype(np.uint8))


def component_prior(p_phys: float) -> float:
    """Marginal flip probability of each CSS component."""
    _check_probability(p_phys)
    return 2.0 * p_phys / 3.0
