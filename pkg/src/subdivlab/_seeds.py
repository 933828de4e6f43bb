"""Splittable seed derivation.

One 64-bit master seed must determine every randomized run, including runs
that conceptually fan out into independent substreams (one per sweep point,
per retry, per worker).  We expand the master seed with splitmix64, the
standard finalizer-based generator: derived streams agree whether the work is
done serially or partitioned, because each substream seed depends only on the
master seed and the substream's label, never on execution order.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state, returning (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def derive_seed(master: int, *labels: int | str) -> int:
    """Derive a 64-bit seed from a master seed and a label path.

    Integer labels are folded directly; string labels are folded bytewise.
    """
    state = master & _MASK
    state, acc = splitmix64(state)
    for label in labels:
        if isinstance(label, str):
            for byte in label.encode("utf-8"):
                state, out = splitmix64(state ^ byte)
                acc ^= out
        else:
            state, out = splitmix64(state ^ (label & _MASK))
            acc ^= out
    return acc
