"""Interleaving policies.

Forward execution usually offers several identifier steps at once (one per
active parallel arm). A scheduler picks one. Three policies:

* ``LeftmostScheduler``   always the first step in left-to-right tree order;
* ``SeededScheduler``     a deterministic pseudo-random pick that depends
                          only on the seed, the number of steps taken so
                          far and a fingerprint of the enabled steps -- the
                          same seed always yields the same run, across
                          platforms and Python versions;
* ``IdentifierScript``    follows a prescribed identifier-to-statement
                          assignment (each statement listed with the
                          identifiers it should consume), used to re-enact
                          a run recorded elsewhere.

``ReplayScheduler`` (in engine.py) re-applies a recorded trace exactly.

SeededScheduler's generator is xorshift64*: the 64-bit state is the seed
xor the step counter times 0x9E3779B97F4A7C15 xor an FNV-1a 64 hash of the
enabled steps (or 0x9E3779B97F4A7C15 if that works out to zero); it is
shifted by 12, 25 and 27 and multiplied by 0x2545F4914F6CDD1D; the result
modulo the number of enabled steps picks the step.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence

from .redex import Redex
from .state import ExecError

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MULT = 0x2545F4914F6CDD1D
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _MASK
    return h


def fingerprint(redexes: Sequence[Redex]) -> int:
    text = ";".join(f"{'/'.join(r.address)}|{r.rule}|{r.origin}" for r in redexes)
    return fnv1a(text.encode("utf-8"))


def xorshift64star(x: int) -> int:
    x &= _MASK
    if x == 0:
        x = _GOLDEN
    x ^= x >> 12
    x = (x ^ (x << 25)) & _MASK
    x ^= x >> 27
    return (x * _MULT) & _MASK


class LeftmostScheduler:
    """Deterministic: always the leftmost enabled step."""

    def choose(self, engine, redexes: List[Redex]) -> Redex:
        return redexes[0]


class SeededScheduler:
    """Deterministic pseudo-random interleaving from a seed."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK
        self.count = 0

    def choose(self, engine, redexes: List[Redex]) -> Redex:
        state = self.seed ^ ((self.count * _GOLDEN) & _MASK) ^ fingerprint(redexes)
        self.count += 1
        return redexes[xorshift64star(state) % len(redexes)]


class IdentifierScript:
    """Follow a map from identifier to the origin uid that must consume it.

    When several enabled steps share the requested origin (parallel copies
    of the same source statement), the leftmost wins.
    """

    def __init__(self, owner_by_ident: Dict[int, int]):
        self.owner = dict(owner_by_ident)

    def choose(self, engine, redexes: List[Redex]) -> Redex:
        ident = engine.state.seq
        want = self.owner.get(ident)
        if want is None:
            raise ExecError(f"no owner scripted for identifier {ident}")
        for r in redexes:
            if r.origin == want:
                return r
        raise ExecError(
            f"identifier {ident} is scripted for statement {want},"
            " which is not enabled"
        )


def make_scheduler(policy: str, seed: Optional[int] = None):
    if policy == "leftmost":
        return LeftmostScheduler()
    if policy == "seeded":
        return SeededScheduler(seed if seed is not None else 0)
    raise ValueError(f"unknown scheduling policy {policy!r}")
