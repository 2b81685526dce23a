"""Symbol sequences, n-gram frequency profiles, and gram-based string distances.

The distances here operate on any finite sequence of hashable symbols:
plain strings, tuples, lists, or :class:`SymbolicSequence` values produced
by the SAX front end. All mismatch bookkeeping is exact integer arithmetic;
floating point enters only through the final weighted sums.
"""

from __future__ import annotations

import string
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass


@dataclass(frozen=True)
class Alphabet:
    """Finite ordered set of distinct symbols.

    The tuple order is the total order the symbolization step relies on:
    symbol i labels the i-th interval between consecutive breakpoints.
    """

    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not 2 <= len(self.symbols) <= 26:
            raise ValueError(f"alphabet size must be in [2, 26], got {len(self.symbols)}")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")

    @classmethod
    def latin(cls, size: int) -> "Alphabet":
        """The first `size` lowercase letters, 'a' through at most 'z'."""
        if not 2 <= size <= 26:
            raise ValueError(f"alphabet size must be in [2, 26], got {size}")
        return cls(tuple(string.ascii_lowercase[:size]))

    def index(self, symbol) -> int:
        """Rank of `symbol` in the alphabet order."""
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise ValueError(f"symbol {symbol!r} is not in the alphabet") from None

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self.symbols


@dataclass(frozen=True)
class SymbolicSequence(Sequence):
    """A finite string over a declared :class:`Alphabet`.

    Behaves as an ordinary immutable sequence of symbols, so every distance
    in this module accepts it interchangeably with a plain string.
    """

    symbols: tuple[str, ...]
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        for sym in self.symbols:
            if sym not in self.alphabet:
                raise ValueError(f"symbol {sym!r} is not in the declared alphabet")

    @classmethod
    def from_string(cls, text: str, alphabet: Alphabet) -> "SymbolicSequence":
        return cls(tuple(text), alphabet)

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return SymbolicSequence(self.symbols[index], self.alphabet)
        return self.symbols[index]

    def __str__(self) -> str:
        return "".join(self.symbols)


@dataclass
class NGramProfile:
    """Multiset of the length-`n` contiguous substrings of one sequence.

    `counts` maps each n-gram (a length-n symbol tuple) to its frequency;
    zero-count entries are never stored. `total` is the number of n-gram
    positions, i.e. max(len(seq) - n + 1, 0).
    """

    n: int
    counts: Counter
    total: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("gram length must be positive")
        for gram, count in self.counts.items():
            if len(gram) != self.n:
                raise ValueError(f"profile key {gram!r} does not have length {self.n}")
            if count < 1:
                raise ValueError(f"profile count for {gram!r} must be >= 1, got {count}")
        if self.total != sum(self.counts.values()):
            raise ValueError("profile total does not match the sum of counts")


@dataclass(frozen=True)
class LambdaVector(Sequence):
    """Per-order weights for the weighted gram distance, each in [0, upper]."""

    weights: tuple[float, ...]
    upper: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if not self.weights:
            raise ValueError("at least one weight is required")
        for w in self.weights:
            if w < 0:
                raise ValueError(f"weights must be non-negative, got {w}")
            if w > self.upper:
                raise ValueError(f"weight {w} exceeds the upper bound {self.upper}")

    @property
    def n_max(self) -> int:
        return len(self.weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, index):
        return self.weights[index]


def extract_ngrams(seq, n: int) -> NGramProfile:
    """Count every length-`n` contiguous substring of `seq` with multiplicity.

    When n exceeds the sequence length the profile is empty with total 0.
    """
    if n < 1:
        raise ValueError("gram length must be positive")
    symbols = tuple(seq)
    counts = Counter(symbols[i:i + n] for i in range(len(symbols) - n + 1))
    return NGramProfile(n=n, counts=counts, total=max(len(symbols) - n + 1, 0))


def common_gram_mass(p: NGramProfile, q: NGramProfile) -> int:
    """Sum over shared n-grams of the smaller of the two frequencies."""
    if p.n != q.n:
        raise ValueError(f"gram length mismatch: {p.n} != {q.n}")
    small, large = (p, q) if len(p.counts) <= len(q.counts) else (q, p)
    return sum(
        min(count, large.counts[gram])
        for gram, count in small.counts.items()
        if gram in large.counts
    )


def g_boundary(n: int, length: int) -> int:
    """Boundary helper: n while n fits in the sequence, length + 1 beyond.

    Chosen so that length - g_boundary(n, length) + 1 equals the number of
    n-grams in a sequence of the given length, including the empty case.
    """
    if n < 1:
        raise ValueError("gram length must be positive")
    if length < 0:
        raise ValueError("length must be non-negative")
    return n if n <= length else length + 1


def mismatch_term(s, t, n: int) -> int:
    """L1 distance between the order-`n` gram frequency vectors of s and t.

    Equals |s| + |t| - g(n,|s|) - g(n,|t|) + 2 - 2 * common mass: both
    profile totals minus twice the shared mass.
    """
    p = extract_ngrams(s, n)
    q = extract_ngrams(t, n)
    return p.total + q.total - 2 * common_gram_mass(p, q)


def abc_sg_distance(s, t, lambdas) -> float:
    """Weighted sum of gram mismatches over orders n = 1..len(lambdas).

    Orders beyond len(lambdas) carry weight zero. Terms are accumulated in
    ascending n so results are bit-reproducible against precomputed paths.
    """
    weights = [float(w) for w in lambdas]
    if not weights:
        raise ValueError("at least one weight is required")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be non-negative")
    total = 0.0
    for n, w in enumerate(weights, start=1):
        total += w * mismatch_term(s, t, n)
    return total


def edit_distance(s, t) -> int:
    """Levenshtein distance with unit insert/delete/substitute costs."""
    a, b = tuple(s), tuple(t)
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, sym_a in enumerate(a, start=1):
        current = [i]
        for j, sym_b in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (sym_a != sym_b),
            ))
        previous = current
    return previous[-1]


def eed(s, t, lam: float) -> float:
    """Edit distance plus a weighted unigram-overlap penalty.

    The penalty is |s| + |t| - 2 * (shared unigram mass), scaled by lam.
    """
    if lam < 0:
        raise ValueError("the co-occurrence factor must be non-negative")
    a, b = tuple(s), tuple(t)
    mass = common_gram_mass(extract_ngrams(a, 1), extract_ngrams(b, 1))
    return edit_distance(a, b) + lam * (len(a) + len(b) - 2 * mass)
