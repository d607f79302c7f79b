"""Dyadic augmentation of the expert set.

``d`` experts are embedded into ``d_bar = 2**ceil(log2 d)`` slots: each
expert owns a block of one or two consecutive slots. Losses are lifted by
copying an expert's loss into all its slots, and distributions on slots are
collapsed by summing the mass of each block. Comparators are lifted with the
two complexity-preserving constructions used for the uniformity and the
self-map bounds.

All indices are 0-based.
"""

from dataclasses import dataclass

import numpy as np

from .simplex import RowSumMismatch


class RelabelingError(ValueError):
    pass


def dyadic_size(d):
    """Smallest power of two that is >= d, and its log2."""
    if d < 1:
        raise RelabelingError(f"need at least one expert, got d={d}")
    S = (d - 1).bit_length()
    return 1 << S, S


@dataclass(frozen=True, eq=False)
class Relabeling:
    d: int
    d_bar: int
    forward: tuple  # forward[i] is a range of slots owned by expert i
    inverse: np.ndarray  # inverse[slot] = owning expert

    def __post_init__(self):
        check_relabeling(self)

    @classmethod
    def from_forward(cls, forward):
        """Build from one slot range per expert; ranges may come in any order."""
        forward = tuple(range(b.start, b.stop) if isinstance(b, range) else range(b[0], b[-1] + 1)
                        for b in forward)
        d = len(forward)
        d_bar, _ = dyadic_size(d)
        inverse = np.full(d_bar, -1, dtype=int)
        for i, block in enumerate(forward):
            if block.start < 0 or block.stop > d_bar:
                raise RelabelingError(f"block {i} leaves the slot range [0, {d_bar})")
            inverse[block.start:block.stop] = i
        inverse.setflags(write=False)
        return cls(d, d_bar, forward, inverse)

    @classmethod
    def from_blocks(cls, sizes):
        """Consecutive blocks in expert order with the given sizes (each 1 or 2)."""
        forward, start = [], 0
        for size in sizes:
            forward.append(range(start, start + int(size)))
            start += int(size)
        return cls.from_forward(forward)

    @property
    def S(self):
        return self.d_bar.bit_length() - 1

    @property
    def block_sizes(self):
        return np.array([len(b) for b in self.forward])

    @property
    def slot_block_sizes(self):
        """``|I(I^{-1}(j))|`` for every slot ``j``."""
        return self.block_sizes[self.inverse]

    @property
    def important(self):
        """First slot of every block."""
        return np.array([b.start for b in self.forward])


def check_relabeling(r):
    if r.d_bar != dyadic_size(r.d)[0]:
        raise RelabelingError(f"d_bar={r.d_bar} is not the dyadic size of d={r.d}")
    if len(r.forward) != r.d:
        raise RelabelingError("need one block per expert")
    covered = []
    for i, block in enumerate(r.forward):
        if not isinstance(block, range) or block.step != 1:
            raise RelabelingError(f"block {i} is not a run of consecutive slots")
        if not 1 <= len(block) <= 2:
            raise RelabelingError(f"block {i} has size {len(block)}, expected 1 or 2")
        covered.extend(block)
    if sorted(covered) != list(range(r.d_bar)):
        raise RelabelingError("blocks must partition the slots")
    inv = np.asarray(r.inverse)
    if inv.shape != (r.d_bar,):
        raise RelabelingError("inverse has the wrong length")
    for i, block in enumerate(r.forward):
        if np.any(inv[block.start:block.stop] != i):
            raise RelabelingError(f"inverse disagrees with block {i}")


def build_default(d):
    """Duplicate the first ``d_bar - d`` experts in place, keep the rest single."""
    d_bar, _ = dyadic_size(d)
    extra = d_bar - d
    return Relabeling.from_blocks([2] * extra + [1] * (d - extra))


def lift_loss(l, r):
    return np.asarray(l, dtype=float)[r.inverse]


def collapse_distribution(p_bar, r):
    p = np.zeros(r.d)
    np.add.at(p, r.inverse, np.asarray(p_bar, dtype=float))
    return p


def lift_comparator_uniform(phi, r):
    """Lift keeping rows inside a block identical.

    Column mass of target expert ``k`` is split evenly over its slots, so
    adjacent augmented rows can only differ at block boundaries.
    """
    phi = np.asarray(phi, dtype=float)
    inv = r.inverse
    return phi[np.ix_(inv, inv)] / r.slot_block_sizes[None, :]


def lift_comparator_self(phi, r):
    """Lift keeping self-mapped experts self-mapped.

    Slot ``i`` keeps the diagonal weight of its expert on itself and routes
    the mass destined for every other expert to that expert's first slot.
    """
    phi = np.asarray(phi, dtype=float)
    inv = r.inverse
    d_bar = r.d_bar
    rows = np.arange(d_bar)
    out = np.zeros((d_bar, d_bar))
    out[:, r.important] = phi[inv, :]
    out[rows, r.important[inv]] = 0.0
    out[rows, rows] = phi[inv, inv]
    # the construction is exact; a failure here is a bug, not round-off
    sums = out.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > 1e-9)
    if len(bad):
        raise RowSumMismatch(int(bad[0]), float(sums[bad[0]]))
    return out
