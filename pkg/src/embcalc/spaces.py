"""Formal homotopy types, their connectivity, and Hilton-Milnor splitting.

Expressions are immutable and hashable. Nothing here models an actual
space: a GenericCW carries a name and a connectivity, and every other node
is a formal construction (loops, suspension, smash, wedge, weak product).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence, Union

from .errors import InvalidArgument
from .extint import INF, ExtInt, ExtLike, ext
from .words import BasicWord, by_multidegree, gc_paused, lyndon_words

__all__ = [
    "Point",
    "Sphere",
    "GenericCW",
    "Loop",
    "Susp",
    "Smash",
    "SmashPower",
    "Wedge",
    "WeakProd",
    "SpaceExpr",
    "CubeOfSpaces",
    "connectivity",
    "normalize",
    "build_layer_cube",
    "hilton_milnor_split",
    "total_fiber_factors",
]


@dataclass(frozen=True)
class Point:
    def __str__(self):
        return "*"


@dataclass(frozen=True)
class Sphere:
    d: int

    def __post_init__(self):
        if self.d < 0:
            raise InvalidArgument(f"sphere dimension {self.d} < 0")

    def __str__(self):
        return f"S^{self.d}"


@dataclass(frozen=True)
class GenericCW:
    name: str
    conn: ExtInt = field(default_factory=lambda: ExtInt(0))

    def __post_init__(self):
        object.__setattr__(self, "conn", ext(self.conn))
        if self.conn < 0:
            raise InvalidArgument(f"{self.name} must be connected, got connectivity {self.conn}")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Loop:
    a: int
    inner: "SpaceExpr"

    def __post_init__(self):
        if self.a < 0:
            raise InvalidArgument("negative loop count")

    def __str__(self):
        return f"Ω^{self.a} {_wrap(self.inner)}"


@dataclass(frozen=True)
class Susp:
    b: int
    inner: "SpaceExpr"

    def __post_init__(self):
        if self.b < 0:
            raise InvalidArgument("negative suspension count")

    def __str__(self):
        return f"Σ^{self.b} {_wrap(self.inner)}"


@dataclass(frozen=True)
class Smash:
    factors: tuple["SpaceExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise InvalidArgument("smash product needs at least one factor")

    def __str__(self):
        return " ∧ ".join(_wrap(f) for f in self.factors)


@dataclass(frozen=True)
class SmashPower:
    base: "SpaceExpr"
    j: int

    def __post_init__(self):
        if self.j < 0:
            raise InvalidArgument("negative smash power")

    def __str__(self):
        return f"{_wrap(self.base)}^({self.j})"


@dataclass(frozen=True)
class Wedge:
    summands: tuple["SpaceExpr", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))

    def __str__(self):
        if not self.summands:
            return "*"
        return " ∨ ".join(_wrap(s) for s in self.summands)


@dataclass(frozen=True)
class WeakProd:
    factors: tuple["SpaceExpr", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def __str__(self):
        if not self.factors:
            return "*"
        return "Π' (" + ", ".join(str(f) for f in self.factors) + ")"


SpaceExpr = Union[Point, Sphere, GenericCW, Loop, Susp, Smash, SmashPower, Wedge, WeakProd]
_ATOMS = (Point, Sphere, GenericCW, SmashPower)


def _wrap(x: SpaceExpr) -> str:
    return str(x) if isinstance(x, _ATOMS) else f"({x})"


@lru_cache(maxsize=None)
def connectivity(x: SpaceExpr) -> ExtInt:
    if isinstance(x, Point):
        return INF
    if isinstance(x, Sphere):
        return ExtInt(x.d - 1)
    if isinstance(x, GenericCW):
        return x.conn
    if isinstance(x, Susp):
        return connectivity(x.inner) + x.b
    if isinstance(x, Loop):
        return connectivity(x.inner) - x.a
    if isinstance(x, Smash):
        total = ExtInt(len(x.factors) - 1)
        for f in x.factors:
            total = total + connectivity(f)
        return total
    if isinstance(x, SmashPower):
        if x.j == 0:
            return ExtInt(-1)
        return connectivity(x.base) * x.j + (x.j - 1)
    if isinstance(x, Wedge):
        return min((connectivity(s) for s in x.summands), default=INF)
    if isinstance(x, WeakProd):
        return min((connectivity(f) for f in x.factors), default=INF)
    raise InvalidArgument(f"not a space expression: {x!r}")


def _key(x: SpaceExpr) -> str:
    return repr(x)


@lru_cache(maxsize=None)
def normalize(x: SpaceExpr) -> SpaceExpr:
    """Canonical form used for display and comparison.

    Collapses iterated loops and suspensions, absorbs spheres into
    suspension coordinates, kills smash products with a point factor, drops
    point summands and factors, and collects repeated smash factors into a
    smash power. Smash, wedge and weak product are treated as commutative.
    Loops of suspensions are left alone.
    """
    if isinstance(x, (Point, Sphere, GenericCW)):
        return x
    if isinstance(x, Loop):
        inner = normalize(x.inner)
        if x.a == 0:
            return inner
        if isinstance(inner, Point):
            return inner
        if isinstance(inner, Loop):
            return Loop(x.a + inner.a, inner.inner)
        return Loop(x.a, inner)
    if isinstance(x, Susp):
        inner = normalize(x.inner)
        if x.b == 0 or isinstance(inner, Point):
            return inner
        if isinstance(inner, Sphere):
            return Sphere(inner.d + x.b)
        if isinstance(inner, Susp):
            return Susp(x.b + inner.b, inner.inner)
        return Susp(x.b, inner)
    if isinstance(x, SmashPower):
        if x.j == 0:
            return Sphere(0)
        return _smash_normal([normalize(x.base)] * x.j)
    if isinstance(x, Smash):
        return _smash_normal([normalize(f) for f in x.factors])
    if isinstance(x, Wedge):
        parts = []
        for s in x.summands:
            s = normalize(s)
            if isinstance(s, Wedge):
                parts.extend(s.summands)
            elif not isinstance(s, Point):
                parts.append(s)
        if not parts:
            return Point()
        if len(parts) == 1:
            return parts[0]
        return Wedge(tuple(sorted(parts, key=_key)))
    if isinstance(x, WeakProd):
        parts = []
        for f in x.factors:
            f = normalize(f)
            if isinstance(f, WeakProd):
                parts.extend(f.factors)
            elif not isinstance(f, Point):
                parts.append(f)
        if not parts:
            return Point()
        if len(parts) == 1:
            return parts[0]
        return WeakProd(tuple(sorted(parts, key=_key)))
    raise InvalidArgument(f"not a space expression: {x!r}")


def _smash_normal(factors: list[SpaceExpr]) -> SpaceExpr:
    # factors are already normal
    shift = 0
    cores: Counter = Counter()
    stack = list(factors)
    while stack:
        f = stack.pop()
        if isinstance(f, Point):
            return Point()
        if isinstance(f, Sphere):
            shift += f.d
        elif isinstance(f, Susp):
            shift += f.b
            stack.append(f.inner)
        elif isinstance(f, Smash):
            stack.extend(f.factors)
        elif isinstance(f, SmashPower):
            cores[f.base] += f.j
        else:
            cores[f] += 1
    parts = [b if j == 1 else SmashPower(b, j) for b, j in sorted(cores.items(), key=lambda bj: _key(bj[0]))]
    if not parts:
        core: SpaceExpr = Sphere(0)
    elif len(parts) == 1:
        core = parts[0]
    else:
        core = Smash(tuple(parts))
    return normalize(Susp(shift, core)) if shift else core


def desuspend(x: SpaceExpr) -> SpaceExpr:
    """X with Susp(1, X) ~ x, for expressions that are visibly suspensions."""
    if isinstance(x, Susp) and x.b >= 1:
        return x.inner if x.b == 1 else Susp(x.b - 1, x.inner)
    if isinstance(x, Sphere) and x.d >= 1:
        return Sphere(x.d - 1)
    if isinstance(x, Point):
        return x
    raise InvalidArgument(f"{x} is not visibly a suspension")


@dataclass(frozen=True)
class CubeOfSpaces:
    """A cube indexed by the subsets of ``index_set``.

    ``vertices`` maps each subset (a frozenset) to a space. ``meta`` keeps the
    parameters the cube was built from.
    """

    index_set: tuple[int, ...]
    vertices: dict
    contravariant: bool = True
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = set(_subsets(self.index_set))
        if set(self.vertices) != expected:
            raise InvalidArgument("a cube needs exactly one vertex per subset of its index set")

    @property
    def dimension(self) -> int:
        return len(self.index_set)

    def __getitem__(self, subset: Iterable[int]) -> SpaceExpr:
        return self.vertices[frozenset(subset)]

    def initial(self) -> frozenset:
        """The vertex the total fiber is taken over: the full set for a contravariant cube."""
        return frozenset(self.index_set) if self.contravariant else frozenset()


def _subsets(items: Sequence[int]) -> Iterable[frozenset]:
    for r in range(len(items) + 1):
        for c in combinations(items, r):
            yield frozenset(c)


def _check_connected(x: SpaceExpr, what: str = "Y") -> None:
    if not isinstance(x, Point) and connectivity(x) < 0:
        raise InvalidArgument(f"{what} = {x} must be connected (connectivity >= 0)")


def build_layer_cube(k: int, n: int, Y: SpaceExpr) -> CubeOfSpaces:
    """The (k-1)-cube R -> ΣY ∨ (one S^{n-1} per element of R), R ⊆ {2..k}.

    ΣY stands in for the punctured manifold N; the maps are collapses, so the
    cube is contravariant. Sphere summands appear in the order of R.
    """
    if k < 2:
        raise InvalidArgument("layer cubes need k >= 2")
    if n < 2:
        raise InvalidArgument("ambient dimension too small")
    _check_connected(Y)
    index = tuple(range(2, k + 1))
    vertices = {
        R: Wedge((Susp(1, Y),) + tuple(Sphere(n - 1) for _ in sorted(R)))
        for R in _subsets(index)
    }
    return CubeOfSpaces(index, vertices, True, {"k": k, "n": n, "Y": Y})


def _hm_words(summands: Sequence[SpaceExpr], cutoff: ExtInt) -> list[tuple[int, ...]]:
    # conn(w(X)) = sum over letters of (conn X_i + 1) - 1; point summands never appear
    costs = []
    for x in summands:
        c = connectivity(x)
        costs.append(math.inf if c.is_pos_inf else int(c) + 1)
    if cutoff.is_neg_inf:
        return []
    return lyndon_words(len(summands), int(cutoff) + 1, costs)


def _word_space(summands: Sequence[SpaceExpr], letters: Sequence[int]) -> SpaceExpr:
    return Smash(tuple(summands[a - 1] for a in letters))


def hilton_milnor_split(summands: Sequence[SpaceExpr], cutoff: ExtLike) -> WeakProd:
    """ΩΣ(X_1 ∨ ... ∨ X_k) as a weak product of ΩΣ w(X_1, ..., X_k).

    Keeps the factors of connectivity <= cutoff, over all basic words w;
    w(X) replaces z_i by X_i and juxtaposition by smash. Factors are ordered
    by connectivity, then by word.
    """
    cutoff = ext(cutoff)
    if cutoff.is_pos_inf:
        raise InvalidArgument("cutoff must be finite or -inf")
    for i, x in enumerate(summands, 1):
        _check_connected(x, f"X_{i}")
    k = len(summands)
    if k == 0:
        return WeakProd(())
    terms = []
    for letters in _hm_words(summands, cutoff):
        word = BasicWord._trusted(letters, k)
        factor = Loop(1, Susp(1, _word_space(summands, letters)))
        terms.append((connectivity(factor), word.sort_key(), factor))
    terms.sort(key=lambda t: (t[0], t[1]))
    return WeakProd(tuple(f for _, _, f in terms))


def _vertex_letters(cube: CubeOfSpaces, R: frozenset) -> tuple[SpaceExpr, ...]:
    # read (X_1, ..., X_k) off the vertex ΣX_1 ∨ ΣX_r1 ∨ ... with r1 < r2 < ... in R
    vertex = cube.vertices[R]
    if not isinstance(vertex, Wedge) or len(vertex.summands) != len(R) + 1:
        raise InvalidArgument(f"vertex {sorted(R)} is not a wedge of {len(R) + 1} suspensions")
    k = cube.dimension + 1
    xs: list[SpaceExpr] = [Point()] * k
    xs[0] = desuspend(vertex.summands[0])
    for i, s in zip(sorted(R), vertex.summands[1:]):
        xs[i - 1] = desuspend(s)
    return tuple(xs)


def total_fiber_factors(cube: CubeOfSpaces, cutoff: ExtLike):
    """Loop-space factors of the layer, computed by splitting the layer cube.

    Each vertex ΣX_1 ∨ ... ∨ ΣX_k is looped and split by Hilton-Milnor,
    naturally in the vertex, so the looped cube splits into one sub-cube per
    basic word. A sub-cube that is constant in some direction has
    contractible total fiber; otherwise only its initial vertex is nontrivial
    and the total fiber is that vertex. The surviving factors are looped
    k - 1 more times (sections over the k-dimensional configuration base).

    Returns :class:`embcalc.tower.Factor` records with connectivity <= cutoff.
    """
    from .tower import Factor

    cutoff = ext(cutoff)
    if cutoff.is_pos_inf:
        raise InvalidArgument("cutoff must be finite or -inf")
    for key in ("k", "n", "Y"):
        if key not in cube.meta:
            raise InvalidArgument("cube was not produced by build_layer_cube")
    k = cube.meta["k"]
    if cube.index_set != tuple(range(2, k + 1)) or not cube.contravariant:
        raise InvalidArgument("malformed layer cube")
    extra_loops = k - 1

    letter_spaces = {R: _vertex_letters(cube, R) for R in cube.vertices}
    top = cube.initial()
    if cutoff.is_neg_inf:
        return []
    # factor connectivity only rises away from the initial vertex
    words = _hm_words(letter_spaces[top], cutoff + extra_loops)

    directions = cube.index_set

    def subcube_fiber(degrees: tuple[int, ...]) -> SpaceExpr | None:
        letters = [a for a, d in enumerate(degrees, 1) for _ in range(d)]
        # smash is homotopy commutative, so the word's letter content suffices
        sub = {R: normalize(Loop(1, Susp(1, _word_space(xs, letters)))) for R, xs in letter_spaces.items()}
        for i in directions:
            if all(sub[R] == sub[R | {i}] for R in sub if i not in R):
                return None
        if any(not isinstance(v, Point) for R, v in sub.items() if R != top):
            raise InvalidArgument("sub-cube has more than one nontrivial vertex")
        return Loop(extra_loops, Loop(1, Susp(1, _word_space(letter_spaces[top], letters))))

    keyed = []
    with gc_paused():
        groups = by_multidegree(words, k)
    for degrees, group in groups.items():
        expr = subcube_fiber(degrees)
        if expr is None:
            continue
        conn = connectivity(expr)
        if conn.is_pos_inf or conn > cutoff:
            continue
        keyed.append(((conn, sum(degrees), tuple(-d for d in degrees)), degrees, expr, group))
    keyed.sort(key=lambda t: t[0])
    trusted = BasicWord._trusted
    with gc_paused():
        return [
            Factor(trusted(letters, k), sum(degrees[1:]), degrees[0], expr, conn)
            for (conn, _, _), degrees, expr, group in keyed
            for letters in group
        ]
