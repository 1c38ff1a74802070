"""Deterministic counter-based RNG scheme shared by all stochastic sparsifiers.

The scheme is splitmix64: a stream is an initial 64-bit state derived from
(global seed, salt, entity id); successive values come from advancing the
state by the golden-ratio increment and applying the splitmix64 finalizer.
Because a stream depends only on (seed, salt, id), every per-vertex or
per-edge decision is independent of iteration order and worker count.

This module is the pure-Python reference of the scheme. The parallel kernels
carry a uint64 mirror of the same arithmetic; `tests` assert both produce
identical streams.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

# Salt namespaces keep the per-purpose streams disjoint.
SALT_EDGE_KEYS = 1  # random sparsifier: one key per edge index
SALT_VERTEX = 2  # k-neighbor: one stream per vertex
SALT_SEED_INIT = 3  # rank degree: initial random seed draw
SALT_FALLBACK = 4  # rank degree: fallback re-seed draws, indexed by occurrence


def mix64(z: int) -> int:
    """splitmix64 finalizer: avalanche a 64-bit value."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def stream_state(seed: int, salt: int, ident: int) -> int:
    """Initial state of the (salt, ident) stream under a global seed.

    ident must fit in 56 bits (node and edge indices always do).
    """
    sid = ((salt << 56) | (ident & ((1 << 56) - 1))) & MASK64
    return mix64((seed & MASK64) ^ mix64((sid * GOLDEN) & MASK64))


def next_u64(state: int) -> tuple[int, int]:
    """Advance a stream one step; returns (new_state, uniform uint64)."""
    state = (state + GOLDEN) & MASK64
    return state, mix64(state)


def rand_below(state: int, bound: int) -> tuple[int, int]:
    """Uniform draw in [0, bound) via modulo reduction (bound << 2^64)."""
    state, value = next_u64(state)
    return state, value % bound


def bernoulli_threshold(p: float) -> int:
    """uint64 threshold t such that (key < t) occurs with probability ~p."""
    if p >= 1.0:
        return MASK64 + 1
    if p <= 0.0:
        return 0
    return int(p * float(1 << 64))


def sample_distinct(state: int, count: int, n: int) -> tuple[int, list[int]]:
    """Draw `count` distinct node ids from [0, n) by rejection.

    Used for rank-degree seeding; not performance critical. Returns the ids
    sorted ascending for a deterministic frontier.
    """
    count = min(count, n)
    picked: set[int] = set()
    while len(picked) < count:
        state, v = rand_below(state, n)
        picked.add(v)
    return state, sorted(picked)
