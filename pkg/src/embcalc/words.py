"""Basic words of the free Lie algebra on letters z_1, ..., z_k.

The Hall set used here is the set of Lyndon words over 1 < 2 < ... < k with
their standard bracketing: a Lyndon word of length >= 2 factors as ``uv``
with ``v`` its longest proper Lyndon suffix, and brackets as ``[u, v]``.
Every quantity used downstream (alpha, beta, counts per multidegree) is the
same for any Hall set.
"""
from __future__ import annotations

import gc
import math
from contextlib import contextmanager
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .errors import InvalidArgument

__all__ = [
    "BasicWord",
    "MultiDegree",
    "enumerate_basic_words",
    "lyndon_words",
    "alpha",
    "beta",
    "involves_all_but_first",
    "witt_count",
    "is_lyndon",
    "degrees_of",
    "by_multidegree",
]


@dataclass(frozen=True)
class MultiDegree:
    """Letter-count vector (d_1, ..., d_k) of a word."""

    degrees: tuple[int, ...]

    def __post_init__(self):
        if any(d < 0 for d in self.degrees):
            raise InvalidArgument(f"negative degree in {self.degrees}")

    @property
    def k(self) -> int:
        return len(self.degrees)

    @property
    def weight(self) -> int:
        return sum(self.degrees)

    def __add__(self, other: MultiDegree) -> MultiDegree:
        if other.k != self.k:
            raise InvalidArgument("multidegrees over different alphabets")
        return MultiDegree(tuple(a + b for a, b in zip(self.degrees, other.degrees)))

    def __getitem__(self, i):
        return self.degrees[i]

    def __iter__(self):
        return iter(self.degrees)

    def __len__(self):
        return len(self.degrees)


def is_lyndon(letters: Sequence[int]) -> bool:
    """True iff ``letters`` is strictly smaller than each of its proper rotations."""
    w = tuple(letters)
    if not w:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


class BasicWord:
    """A Lyndon word in z_1..z_k, viewed through its standard bracketing.

    ``letters`` is the flattened word (1-based letter indices). Immutable;
    multidegree and bracketing are computed on first use.
    """

    __slots__ = ("letters", "k", "_md", "_shape")

    def __init__(self, letters: Sequence[int], k: int):
        letters = tuple(letters)
        if k < 1:
            raise InvalidArgument("alphabet must have at least one letter")
        if not letters or any(not 1 <= a <= k for a in letters):
            raise InvalidArgument(f"letters {letters} outside 1..{k}")
        if not is_lyndon(letters):
            raise InvalidArgument(f"{letters} is not a Lyndon word")
        _init(self, letters, k)

    @classmethod
    def _trusted(cls, letters: tuple[int, ...], k: int) -> BasicWord:
        # skips validation; for words straight out of lyndon_words
        w = object.__new__(cls)
        _init(w, letters, k)
        return w

    @classmethod
    def letter(cls, index: int, k: int) -> BasicWord:
        return cls((index,), k)

    @classmethod
    def bracket(cls, left: BasicWord, right: BasicWord) -> BasicWord:
        """The bracket ``[left, right]``; must be a Lyndon word with that standard factorization."""
        if left.k != right.k:
            raise InvalidArgument("cannot bracket words over different alphabets")
        letters = left.letters + right.letters
        if not is_lyndon(letters):
            raise InvalidArgument(f"[{left}, {right}] is not a basic word")
        word = cls._trusted(letters, left.k)
        if word.shape != (left, right):
            raise InvalidArgument(f"[{left}, {right}] is not a basic word")
        return word

    def __setattr__(self, name, value):
        raise AttributeError("BasicWord is immutable")

    def __eq__(self, other):
        if not isinstance(other, BasicWord):
            return NotImplemented
        return self.letters == other.letters and self.k == other.k

    def __hash__(self):
        return hash((self.letters, self.k))

    def __repr__(self):
        return f"BasicWord({self.letters}, k={self.k})"

    @property
    def weight(self) -> int:
        return len(self.letters)

    @property
    def multidegree(self) -> MultiDegree:
        if self._md is None:
            object.__setattr__(self, "_md", MultiDegree(degrees_of(self.letters, self.k)))
        return self._md

    @property
    def shape(self) -> int | tuple[BasicWord, BasicWord]:
        """A letter index for single letters, otherwise the pair (left, right)."""
        if self._shape is None:
            w = self.letters
            if len(w) == 1:
                shape = w[0]
            else:
                i = next(i for i in range(1, len(w)) if is_lyndon(w[i:]))
                shape = (BasicWord._trusted(w[:i], self.k), BasicWord._trusted(w[i:], self.k))
            object.__setattr__(self, "_shape", shape)
        return self._shape

    @property
    def is_letter(self) -> bool:
        return len(self.letters) == 1

    def sort_key(self) -> tuple:
        return (self.weight, tuple(-d for d in degrees_of(self.letters, self.k)), self.letters)

    def __lt__(self, other: BasicWord) -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        shape = self.shape
        if isinstance(shape, int):
            return f"z{shape}"
        return f"[{shape[0]},{shape[1]}]"


def _init(w: BasicWord, letters: tuple[int, ...], k: int) -> None:
    object.__setattr__(w, "letters", letters)
    object.__setattr__(w, "k", k)
    object.__setattr__(w, "_md", None)
    object.__setattr__(w, "_shape", None)


@contextmanager
def gc_paused():
    """Suspend the cyclic collector while allocating many acyclic objects."""
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def degrees_of(letters: Sequence[int], k: int) -> tuple[int, ...]:
    return tuple(map(letters.count, range(1, k + 1)))


def by_multidegree(words: Iterable[tuple[int, ...]], k: int) -> dict[tuple[int, ...], list[tuple[int, ...]]]:
    """Group letter tuples by multidegree, keeping their relative order."""
    groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    idx = range(1, k + 1)
    for w in words:
        d = tuple(map(w.count, idx))
        g = groups.get(d)
        if g is None:
            groups[d] = [w]
        else:
            g.append(w)
    return groups


def lyndon_words(
    k: int,
    budget: int,
    cost: Sequence[float] | None = None,
    required: Iterable[int] = (),
) -> list[tuple[int, ...]]:
    """All Lyndon words over 1..k whose total letter cost is at most ``budget``.

    ``cost[i - 1]`` is the cost of letter i (default 1, so ``budget`` is a
    weight bound). Costs must be positive; ``math.inf`` excludes a letter.
    Words must contain every letter in ``required``. Output is in
    lexicographic order.

    Words are grown as prenecklaces: a prefix with period p may only be
    extended by a letter >= prefix[-p], and the extension is Lyndon exactly
    when that letter is strictly larger. Every prefix of a Lyndon word is a
    prenecklace and costs are positive, so pruning on spent cost is exact.
    """
    if cost is None:
        cost = [1] * k
    if len(cost) != k:
        raise InvalidArgument(f"need {k} letter costs, got {len(cost)}")
    if any(not c > 0 for c in cost):
        raise InvalidArgument("letter costs must be positive")
    required = sorted(set(required))
    if any(not 1 <= r <= k for r in required):
        raise InvalidArgument(f"required letters {required} outside 1..{k}")
    if any(math.isinf(cost[r - 1]) for r in required):
        return []

    out: list[tuple[int, ...]] = []
    letters = [a for a in range(1, k + 1) if not math.isinf(cost[a - 1])]
    need = {r: cost[r - 1] for r in required}
    prefix: list[int] = []
    # state: (letters still missing, cost of adding each once)
    missing = set(need)

    def extend(p: int, spent: float, owed: float) -> None:
        t = len(prefix)
        floor = prefix[t - p]
        for a in letters:
            if a < floor:
                continue
            s = spent + cost[a - 1]
            if a in missing:
                o = owed - need[a]
                missing.discard(a)
                fresh = True
            else:
                o = owed
                fresh = False
            if s + o <= budget:
                prefix.append(a)
                if a != floor and not missing:
                    out.append(tuple(prefix))
                extend(p if a == floor else t + 1, s, o)
                prefix.pop()
            if fresh:
                missing.add(a)

    owed0 = sum(need.values())
    for a in letters:
        s = cost[a - 1]
        if a in missing:
            o = owed0 - need[a]
            missing.discard(a)
            fresh = True
        else:
            o = owed0
            fresh = False
        if s + o <= budget:
            prefix.append(a)
            if not missing:
                out.append((a,))
            extend(1, s, o)
            prefix.pop()
        if fresh:
            missing.add(a)
    return out


def enumerate_basic_words(k: int, max_weight: int) -> list[BasicWord]:
    """Basic words in z_1..z_k of weight <= max_weight.

    Sorted by weight, then multidegree (more of the earlier letters first),
    then the flattened letter string.
    """
    if k < 1 or max_weight < 1:
        raise InvalidArgument("k and max_weight must both be >= 1")
    words = [BasicWord._trusted(w, k) for w in lyndon_words(k, max_weight)]
    words.sort(key=BasicWord.sort_key)
    return words


def alpha(w: BasicWord) -> int:
    """Number of letters of ``w`` different from z_1."""
    return w.weight - w.multidegree[0]


def beta(w: BasicWord) -> int:
    """Number of letters of ``w`` equal to z_1."""
    return w.multidegree[0]


def involves_all_but_first(w: BasicWord) -> bool:
    return all(d >= 1 for d in w.multidegree.degrees[1:])


def witt_count(d: MultiDegree | Sequence[int]) -> int:
    """Number of Lyndon words with letter content ``d`` (necklace/Witt formula).

    (1/W) * sum over e | gcd(d) of mobius(e) * (W/e)! / prod (d_i/e)!
    """
    from sympy import divisors, mobius

    degrees = tuple(d.degrees if isinstance(d, MultiDegree) else d)
    total = sum(degrees)
    if total < 1:
        raise InvalidArgument("multidegree must have weight >= 1")
    g = reduce(math.gcd, (x for x in degrees if x))
    acc = 0
    for e in divisors(g):
        mu = int(mobius(e))
        if mu:
            num = math.factorial(total // e)
            for x in degrees:
                num //= math.factorial(x // e)
            acc += mu * num
    count, rem = divmod(acc, total)
    assert rem == 0, (degrees, acc)
    return count
