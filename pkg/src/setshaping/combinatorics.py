"""Entropy-ordered enumeration of all length-N sequences over an alphabet.

The total order on sequences is (class entropy ascending, counts vector
lexicographic ascending, in-class lexicographic ascending).  For a fixed
length N, entropy ascending is equivalent to ``prod n_i**n_i`` descending,
which we compare as exact big integers: no floating point enters the sort,
so equal-entropy classes (including distinct count multisets such as
(2,2,2,2) vs (4,1,1,1,1) at N=8) tie exactly and fall through to the
lexicographic rule.

Ranks are plain Python ints and therefore arbitrary precision; |A|**N
overflows machine words almost immediately (3**41 > 2**64).
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterator

from .core import Alphabet, Composition, Sequence, entropy_of_composition
from .errors import RankOutOfRangeError, TooManyClassesError

__all__ = [
    "RankIndex",
    "ClassOrdering",
    "multinomial",
    "composition_count",
    "enumerate_compositions",
    "class_ordering",
    "rank_in_class",
    "unrank_in_class",
    "rank_sequence",
    "unrank_sequence",
    "DEFAULT_CLASS_CAP",
]

RankIndex = int

DEFAULT_CLASS_CAP = 5_000_000


def multinomial(comp: Composition) -> int:
    """Size of a type class: N! / prod(n_i!), computed exactly."""
    result = 1
    partial = 0
    for n in comp.counts:
        partial += n
        result *= math.comb(partial, n)
    return result


def composition_count(n: int, alphabet: Alphabet) -> int:
    """Number of compositions of n into |A| non-negative parts."""
    return math.comb(n + alphabet.size - 1, alphabet.size - 1)


def enumerate_compositions(n: int, alphabet: Alphabet) -> Iterator[Composition]:
    """Yield every composition of n into |A| parts, in lexicographic order
    of the counts vector."""

    def gen(parts: int, total: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in gen(parts - 1, total - first):
                yield (first,) + rest

    for counts in gen(alphabet.size, n):
        yield Composition(counts)


def _order_key(counts: tuple[int, ...]):
    # prod n^n descending == entropy ascending for fixed N (exact ints);
    # ties break lexicographically on the counts vector.
    prod = 1
    for c in counts:
        if c > 1:
            prod *= c**c
    return (-prod, counts)


@dataclass(frozen=True)
class ClassOrdering:
    """All compositions of (length, alphabet) sorted by the entropy order,
    with cumulative sequence counts for rank arithmetic.

    Immutable after construction; rank/unrank are pure given the ordering.
    """

    length: int
    alphabet: Alphabet
    base: float
    compositions: tuple[Composition, ...]
    cumulative: tuple[int, ...] = field(repr=False)
    _index: dict[tuple[int, ...], int] = field(repr=False)

    @property
    def sequence_count(self) -> int:
        return self.cumulative[-1] if self.cumulative else 0

    def class_index(self, comp: Composition) -> int:
        return self._index[comp.counts]

    def class_start(self, i: int) -> int:
        """Global rank of the first sequence in class i."""
        return self.cumulative[i - 1] if i else 0

    def class_entropy(self, i: int) -> float:
        return entropy_of_composition(self.compositions[i], self.base).bits_per_symbol


def class_ordering(
    n: int,
    alphabet: Alphabet,
    base: float = 2.0,
    max_classes: int = DEFAULT_CLASS_CAP,
) -> ClassOrdering:
    """Materialize the entropy-ordered class list for length-n sequences."""
    if n < 1:
        raise ValueError(f"ordering requires length >= 1, got {n}")
    total_classes = composition_count(n, alphabet)
    if total_classes > max_classes:
        raise TooManyClassesError(
            f"{total_classes} compositions for length {n}, alphabet "
            f"{alphabet.size} exceeds the cap of {max_classes}"
        )
    comps = sorted(
        (c.counts for c in enumerate_compositions(n, alphabet)), key=_order_key
    )
    cumulative = []
    running = 0
    index = {}
    for i, counts in enumerate(comps):
        running += multinomial(Composition(counts))
        cumulative.append(running)
        index[counts] = i
    return ClassOrdering(
        length=n,
        alphabet=alphabet,
        base=base,
        compositions=tuple(Composition(c) for c in comps),
        cumulative=tuple(cumulative),
        _index=index,
    )


def rank_in_class(seq: Sequence) -> RankIndex:
    """Position of seq in the lexicographic order of its type class.

    Standard prefix-count method: at each position, add the number of
    permutations of the remaining multiset that start with a smaller
    symbol.  ``remaining * counts[s] // remaining_total`` is exact.
    """
    counts = [0] * seq.alphabet.size
    for s in seq.symbols:
        counts[s] += 1
    remaining = multinomial(Composition(tuple(counts)))
    total = seq.length
    rank = 0
    for sym in seq.symbols:
        for smaller in range(sym):
            if counts[smaller]:
                rank += remaining * counts[smaller] // total
        remaining = remaining * counts[sym] // total
        counts[sym] -= 1
        total -= 1
    return rank


def unrank_in_class(comp: Composition, r: RankIndex) -> Sequence:
    """Inverse of rank_in_class: the r-th lexicographic sequence of a class."""
    size = len(comp.counts)
    total = comp.total
    remaining = multinomial(comp)
    if not 0 <= r < remaining:
        raise RankOutOfRangeError(
            f"rank {r} outside class of size {remaining} for counts {comp.counts}"
        )
    counts = list(comp.counts)
    symbols = []
    for _ in range(comp.total):
        for sym in range(size):
            if not counts[sym]:
                continue
            here = remaining * counts[sym] // total
            if r < here:
                symbols.append(sym)
                remaining = here
                counts[sym] -= 1
                total -= 1
                break
            r -= here
    return Sequence(Alphabet(size), tuple(symbols))


def rank_sequence(seq: Sequence, ordering: ClassOrdering) -> RankIndex:
    """Global rank of seq in the entropy order; bijective over 0..|A|**N - 1."""
    if seq.length != ordering.length or seq.alphabet != ordering.alphabet:
        raise ValueError(
            f"sequence of length {seq.length} over alphabet {seq.alphabet.size} "
            f"does not match ordering ({ordering.length}, {ordering.alphabet.size})"
        )
    counts = [0] * seq.alphabet.size
    for s in seq.symbols:
        counts[s] += 1
    i = ordering.class_index(Composition(tuple(counts)))
    return ordering.class_start(i) + rank_in_class(seq)


def unrank_sequence(
    n: int, alphabet: Alphabet, r: RankIndex, ordering: ClassOrdering
) -> Sequence:
    """Exact inverse of rank_sequence."""
    if n != ordering.length or alphabet != ordering.alphabet:
        raise ValueError(
            f"requested ({n}, {alphabet.size}) does not match ordering "
            f"({ordering.length}, {ordering.alphabet.size})"
        )
    if not 0 <= r < ordering.sequence_count:
        raise RankOutOfRangeError(
            f"rank {r} outside 0..{ordering.sequence_count - 1}"
        )
    i = bisect_right(ordering.cumulative, r)
    return unrank_in_class(ordering.compositions[i], r - ordering.class_start(i))
