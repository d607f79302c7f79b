"""Loss sequences for the experiment battery.

Every stochastic component draws from its own PCG64 substream derived from
the run seed and a stable hash of the component name, so adding a new
component never shifts the numbers another one sees.
"""

import zlib
from dataclasses import dataclass, field

import numpy as np

KINDS = ("iid_uniform", "segmented", "spite_adaptive", "swap_trap")


def substream(seed, name):
    ss = np.random.SeedSequence(seed, spawn_key=(zlib.crc32(name.encode()),))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class AdversarySpec:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown adversary kind {self.kind!r}; expected one of {KINDS}")


class Adversary:
    adaptive = False

    def __init__(self, d, T, rng):
        self.d = d
        self.T = T
        self.rng = rng

    def next(self, p, t):
        raise NotImplementedError


class IidUniform(Adversary):
    def next(self, p, t):
        return self.rng.uniform(-1.0, 1.0, self.d)


class Segmented(Adversary):
    """The best expert is fixed within each of ``segments`` equal blocks of rounds.

    Ordinary experts draw ``U[-1, 1]``; the block's favourite draws from the
    same law scaled by ``1 - gap`` and shifted down by ``gap``, so its mean
    is ``-gap`` while staying inside ``[-1, 1]``.
    """

    def __init__(self, d, T, rng, segments=1, gap=0.2):
        super().__init__(d, T, rng)
        if segments < 1:
            raise ValueError("segments must be positive")
        if not 0.0 <= gap <= 1.0:
            raise ValueError("gap must lie in [0, 1]")
        self.segments = int(segments)
        self.gap = float(gap)
        self.best = rng.integers(0, d, size=self.segments)

    def segment(self, t):
        return min(self.segments - 1, t * self.segments // max(self.T, 1))

    def next(self, p, t):
        l = self.rng.uniform(-1.0, 1.0, self.d)
        b = self.best[self.segment(t)]
        l[b] = l[b] * (1.0 - self.gap) - self.gap
        return l


class SpiteAdaptive(Adversary):
    """Charges every expert that holds more than its uniform share."""

    adaptive = True

    def next(self, p, t):
        return np.sign(np.asarray(p) - 1.0 / self.d)


class SwapTrap(Adversary):
    """Punishes the learner's favourite and rewards its right neighbour.

    Because the favourite keeps moving, any fixed external comparator is
    weak while the swap ``a -> a+1`` collects a gain every round.
    """

    adaptive = True

    def __init__(self, d, T, rng, noise=0.5, trap=0.5):
        super().__init__(d, T, rng)
        if noise < 0 or trap < 0 or noise + trap > 1.0:
            raise ValueError("need noise, trap >= 0 and noise + trap <= 1")
        self.noise = float(noise)
        self.trap = float(trap)

    def next(self, p, t):
        l = self.noise * self.rng.uniform(-1.0, 1.0, self.d)
        a = int(np.argmax(p))
        l[a] += self.trap
        l[(a + 1) % self.d] -= self.trap
        return l


_CLASSES = {
    "iid_uniform": IidUniform,
    "segmented": Segmented,
    "spite_adaptive": SpiteAdaptive,
    "swap_trap": SwapTrap,
}


def make_adversary(spec, d, T, seed):
    rng = substream(seed, f"adversary/{spec.kind}")
    try:
        return _CLASSES[spec.kind](d, T, rng, **spec.params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {spec.kind}: {exc}") from None


def adversary_next(adv, p, t):
    l = adv.next(p, t)
    return np.clip(l, -1.0, 1.0)
