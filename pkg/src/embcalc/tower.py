"""Layers of the Taylor tower for embeddings of an interval I in N ~ ΣY.

For k >= 2 the k-th layer is a weak product, over basic words w in
z_1..z_k that use every letter except possibly z_1, of

    Ω^k Σ^{1 + α(w)(n-2)} Y^(β(w)).

Weak products are infinite, so every query carries a connectivity cutoff
and returns only the factors at or below it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidArgument, UnsupportedRange
from .estimates import emb_analyticity, layer_map_connectivity
from .extint import ExtInt, ExtLike, ext
from .spaces import Loop, Point, SmashPower, SpaceExpr, Susp, connectivity, normalize
from .words import BasicWord, by_multidegree, gc_paused, lyndon_words

__all__ = [
    "Factor",
    "Stage",
    "TowerSummary",
    "FibrationRecord",
    "KnotTower",
    "factor_expr",
    "layer_factors",
    "contractible_factors",
    "tower_summary",
    "knot_tower",
]


@dataclass(frozen=True, slots=True)
class Factor:
    word: BasicWord
    alpha: int
    beta: int
    expr: SpaceExpr
    connectivity: ExtInt

    @property
    def normal_form(self) -> SpaceExpr:
        return normalize(self.expr)


@dataclass(frozen=True)
class Stage:
    k: int
    label: str
    factors: tuple[Factor, ...] = ()
    map_connectivity: ExtInt | None = None


@dataclass(frozen=True)
class TowerSummary:
    n: int
    Y: SpaceExpr
    cutoff: ExtInt
    q: int
    stages: tuple[Stage, ...]


@dataclass(frozen=True)
class FibrationRecord:
    """emb(I, R^{n-1} x I) -> emb(S^1, S^n) -> O(n+1)/O(n-1), recorded, not resolved."""

    n: int
    fiber: str
    total: str
    base: str
    base_dimension: int
    base_connectivity: int


@dataclass(frozen=True)
class KnotTower:
    tower: TowerSummary
    fibration: FibrationRecord


def _check_target(Y: SpaceExpr) -> None:
    if not isinstance(Y, Point) and connectivity(Y) < 0:
        raise InvalidArgument(f"Y = {Y} must be connected")


def _check_n(n: int) -> None:
    if n < 4:
        raise UnsupportedRange(f"the layer formula needs n >= 4 (got n = {n})")


def factor_expr(k: int, n: int, Y: SpaceExpr, alpha: int, beta: int) -> SpaceExpr:
    return Loop(k, Susp(1 + alpha * (n - 2), SmashPower(Y, beta)))


def layer_factors(k: int, n: int, Y: SpaceExpr, cutoff: ExtLike) -> list[Factor]:
    """Factors of the k-th layer with connectivity <= cutoff.

    Contractible factors (Y a point and β >= 1) are dropped. Sorted by
    connectivity, then by word.
    """
    _check_n(n)
    if k < 2:
        raise InvalidArgument("layers are indexed by k >= 2")
    _check_target(Y)
    cutoff = ext(cutoff)
    if cutoff.is_pos_inf:
        raise InvalidArgument("cutoff must be finite or -inf")
    if cutoff.is_neg_inf:
        return []

    # conn of a factor is sum of letter costs minus k
    c_y = connectivity(Y)
    first = math.inf if c_y.is_pos_inf else int(c_y) + 1
    costs = [first] + [n - 2] * (k - 1)
    words = lyndon_words(k, int(cutoff) + k, costs, required=range(2, k + 1))

    with gc_paused():
        groups = by_multidegree(words, k)
    keyed = []
    for degrees, group in groups.items():
        b = degrees[0]
        a = len(group[0]) - b
        expr = factor_expr(k, n, Y, a, b)
        conn = connectivity(expr)
        if conn.is_pos_inf or conn > cutoff:
            continue
        keyed.append(((conn, a + b, tuple(-d for d in degrees)), a, b, expr, group))
    keyed.sort(key=lambda t: t[0])
    # each group is already in lexicographic order
    trusted = BasicWord._trusted
    with gc_paused():
        return [
            Factor(trusted(letters, k), a, b, expr, conn)
            for (conn, _, _), a, b, expr, group in keyed
            for letters in group
        ]


def contractible_factors(k: int, n: int, Y: SpaceExpr, cutoff: ExtLike) -> list[Factor]:
    """The factors layer_factors drops as contractible.

    Only a contractible Y produces any: then every word containing z_1 gives
    a point. Listed are the words a target of connectivity 0 would
    contribute at this cutoff, i.e. those with α(n-2) + β <= cutoff + k.
    """
    _check_n(n)
    cutoff = ext(cutoff)
    if not connectivity(Y).is_pos_inf or k < 2 or not cutoff.is_finite:
        return []
    costs = [1] + [n - 2] * (k - 1)
    out = []
    for letters in lyndon_words(k, int(cutoff) + k, costs, required=range(1, k + 1)):
        b = letters.count(1)
        a = len(letters) - b
        expr = factor_expr(k, n, Y, a, b)
        out.append(Factor(BasicWord._trusted(letters, k), a, b, expr, connectivity(expr)))
    out.sort(key=lambda f: f.word.sort_key())
    return out


def tower_summary(n: int, Y: SpaceExpr, k_max: int, cutoff: ExtLike, q: int = 1) -> TowerSummary:
    """Stages 1..k_max of the tower; stage 1 is the immersion space.

    Each stage k >= 2 carries its layer factors and the connectivity of the
    forgetful map T_k -> T_{k-1} for handle index ``q`` (1 for I rel ∂I).
    """
    _check_n(n)
    if k_max < 1:
        raise InvalidArgument("k_max must be >= 1")
    _check_target(Y)
    cutoff = ext(cutoff)
    F = emb_analyticity(n)
    stages = [Stage(1, "immersions")]
    for k in range(2, k_max + 1):
        stages.append(
            Stage(k, "layer", tuple(layer_factors(k, n, Y, cutoff)), layer_map_connectivity(F, q, k))
        )
    return TowerSummary(n, Y, cutoff, q, tuple(stages))


def knot_tower(n: int, k_max: int, cutoff: ExtLike) -> KnotTower:
    """Tower for emb(I, R^{n-1} x I), with the fibration over the Stiefel manifold V_2(R^{n+1})."""
    _check_n(n)
    tower = tower_summary(n, Point(), k_max, cutoff)
    fibration = FibrationRecord(
        n=n,
        fiber=f"emb(I, R^{n - 1} x I)",
        total=f"emb(S^1, S^{n})",
        base=f"O({n + 1})/O({n - 1})",
        base_dimension=2 * n - 1,
        base_connectivity=n - 2,
    )
    return KnotTower(tower, fibration)
