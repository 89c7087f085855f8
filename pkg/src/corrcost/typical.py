"""Letter-typical sets of i.i.d. sequences, enumerated by composition.

A length-n sequence is delta-typical for a letter distribution P when every
letter's empirical frequency is within delta of its probability,
|N(a|seq)/n - P(a)| <= delta, including letters of probability zero.

Enumeration iterates over letter-count vectors (compositions of n) first
and permutations second, so cardinalities and uniform samples are obtained
combinatorially without materializing the sequence list.  This keeps block
lengths up to ~20 tractable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ArityMismatchError, EmptyTypicalSetWarning
from .dist import JointDist


def _multinomial(n: int, counts: Sequence[int]) -> int:
    out = math.factorial(n)
    for k in counts:
        out //= math.factorial(k)
    return out


def _index_permutations(counts: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Distinct arrangements of the multiset {i repeated counts[i]}.

    Classic next-permutation scan on integer letter indices, lexicographic.
    """
    seq = []
    for i, k in enumerate(counts):
        seq.extend([i] * k)
    n = len(seq)
    if n == 0:
        return
    while True:
        yield tuple(seq)
        i = n - 2
        while i >= 0 and seq[i] >= seq[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while seq[i] >= seq[j]:
            j -= 1
        seq[i], seq[j] = seq[j], seq[i]
        seq[i + 1:] = reversed(seq[i + 1:])


@dataclass(frozen=True)
class TypicalSet:
    """The delta-typical set of an i.i.d. letter source at block length n.

    Holds the valid letter-count vectors, not the sequences themselves.
    ``cardinality`` is exact (integer); iteration and sampling are lazy.
    """

    letters: tuple
    probs: tuple[float, ...]
    n: int
    delta: float
    compositions: tuple[tuple[int, ...], ...]

    @property
    def composition_counts(self) -> tuple[int, ...]:
        return tuple(_multinomial(self.n, c) for c in self.compositions)

    @property
    def cardinality(self) -> int:
        return sum(self.composition_counts)

    def is_empty(self) -> bool:
        return not self.compositions

    def __iter__(self) -> Iterator[tuple]:
        for comp in self.compositions:
            for idx_seq in _index_permutations(comp):
                yield tuple(self.letters[i] for i in idx_seq)

    def __contains__(self, seq) -> bool:
        if len(seq) != self.n:
            return False
        counts = {lab: 0 for lab in self.letters}
        for s in seq:
            if s not in counts:
                return False
            counts[s] += 1
        comp = tuple(counts[lab] for lab in self.letters)
        return comp in set(self.compositions)

    def sample(self, rng: np.random.Generator, size: int) -> list[tuple]:
        """Draw ``size`` sequences i.i.d. uniformly, with replacement."""
        counts = self.composition_counts
        total = sum(counts)
        if total == 0:
            raise ValueError("cannot sample from an empty typical set")
        weights = np.array([c / total for c in counts], dtype=float)
        weights /= weights.sum()
        out = []
        comp_idx = rng.choice(len(self.compositions), size=size, p=weights)
        for ci in comp_idx:
            letters = []
            for lab, k in zip(self.letters, self.compositions[ci]):
                letters.extend([lab] * k)
            perm = rng.permutation(len(letters))
            out.append(tuple(letters[j] for j in perm))
        return out


def typical_set(marginal: JointDist, n: int, delta: float) -> TypicalSet:
    """Delta-typical set of a single-variable marginal at block length n.

    Letters with zero probability are kept in the alphabet; they may occur
    at most ``floor(n*delta)`` times.  An empty result is signaled with an
    :class:`EmptyTypicalSetWarning`, not an exception, since small (n,
    delta) legitimately produce empty sets.
    """
    if len(marginal.variables) != 1:
        raise ArityMismatchError("typical_set expects a single-variable marginal")
    if n < 1:
        raise ArityMismatchError(f"block length must be >= 1, got {n}")
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    var = marginal.variables[0]
    letters = tuple(marginal.alphabets[var])
    probs = tuple(marginal.prob((lab,)) for lab in letters)

    ranges = []
    for p in probs:
        lo = max(0, math.ceil(n * (p - delta) - 1e-12))
        hi = min(n, math.floor(n * (p + delta) + 1e-12))
        ranges.append((lo, hi))

    comps: list[tuple[int, ...]] = []

    def extend(prefix: list[int], remaining: int, idx: int):
        if idx == len(letters) - 1:
            lo, hi = ranges[idx]
            if lo <= remaining <= hi:
                comps.append(tuple(prefix + [remaining]))
            return
        lo, hi = ranges[idx]
        tail_min = sum(r[0] for r in ranges[idx + 1:])
        tail_max = sum(r[1] for r in ranges[idx + 1:])
        for k in range(lo, hi + 1):
            rest = remaining - k
            if tail_min <= rest <= tail_max:
                extend(prefix + [k], rest, idx + 1)

    if letters:
        extend([], n, 0)
    ts = TypicalSet(
        letters=letters, probs=probs, n=n, delta=delta, compositions=tuple(comps)
    )
    if ts.is_empty():
        warnings.warn(
            f"typical set empty for n={n}, delta={delta}", EmptyTypicalSetWarning
        )
    return ts


def default_delta(n: int) -> float:
    """Default typicality width: shrinks with n but never below 0.05."""
    return max(0.05, n ** (-1.0 / 3.0))
