"""Closed-form connectivity estimates for embedding functors.

Convention: a map is k-connected when all of its homotopy fibers are
(k-1)-connected; a cube is k-Cartesian when the map from its initial vertex
to the homotopy limit of the others is k-connected. A handle index of -inf
means the piece is a collar, and every estimate involving it is +inf.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InvalidArgument, PreconditionViolation, UnsupportedRange
from .extint import INF, ExtInt, ExtLike, ext

__all__ = [
    "HandleProfile",
    "AnalyticCofunctor",
    "HaefligerRange",
    "excision_cartesianness",
    "emb_analyticity",
    "analytic_cube_cartesianness",
    "eta_connectivity",
    "emb_eta_connectivity",
    "converges",
    "layer_map_connectivity",
    "homogeneous_analyticity",
    "haefliger_metastable",
    "emb_tower_converges",
    "agrees_by_analyticity",
]


@dataclass(frozen=True)
class HandleProfile:
    """Ambient dimension n and handle indices q_0..q_r of the attached pieces."""

    n: int
    q_list: tuple[ExtInt, ...]

    def __post_init__(self):
        object.__setattr__(self, "q_list", tuple(ext(q) for q in self.q_list))

    @property
    def r(self) -> int:
        return len(self.q_list) - 1


@dataclass(frozen=True)
class AnalyticCofunctor:
    """A cofunctor that is rho-analytic with excess c."""

    rho: int
    c: int
    label: str = ""


@dataclass(frozen=True)
class HaefligerRange:
    square_1_cartesian: bool
    s: int


def _handles(q_list: Sequence[ExtLike]) -> tuple[ExtInt, ...]:
    qs = tuple(ext(q) for q in q_list)
    if any(q.is_pos_inf for q in qs):
        raise InvalidArgument("a handle index cannot be +inf")
    return qs


def excision_cartesianness(p: HandleProfile) -> ExtInt:
    """How Cartesian the cube S -> emb(Q_S, Y) is: 3 - n + sum (n - q_i - 2)."""
    qs = _handles(p.q_list)
    if len(qs) < 2:
        raise InvalidArgument("need at least two pieces (r >= 1)")
    for q in qs:
        if q.is_finite and p.n - int(q) < 3:
            raise PreconditionViolation(f"handle index {q} needs codimension n - q >= 3 (n = {p.n})")
    if any(q.is_neg_inf for q in qs):
        return INF
    return ExtInt(3 - p.n + sum(p.n - int(q) - 2 for q in qs))


def emb_analyticity(n: int) -> AnalyticCofunctor:
    """V -> emb(V, N^n) is (n-2)-analytic with excess 3-n."""
    if n < 3:
        raise UnsupportedRange(f"analyticity of embeddings needs n >= 3 (got {n})")
    label = f"emb(-, N^{n})"
    if n == 3:
        label += " [boundary case: only handle index 0 is below rho = 1]"
    return AnalyticCofunctor(n - 2, 3 - n, label)


def analytic_cube_cartesianness(F: AnalyticCofunctor, q_list: Sequence[ExtLike]) -> ExtInt:
    qs = _handles(q_list)
    if len(qs) < 2:
        raise InvalidArgument("need at least two handles (r >= 1)")
    for q in qs:
        if q >= F.rho:
            raise PreconditionViolation(f"handle index {q} is not below rho = {F.rho}")
    if any(q.is_neg_inf for q in qs):
        return INF
    return ExtInt(F.c + sum(F.rho - int(q) for q in qs))


def _below_rho(F: AnalyticCofunctor, q: ExtLike) -> ExtInt:
    q = ext(q)
    if q.is_pos_inf or q >= F.rho:
        raise PreconditionViolation(f"handle index {q} is not below rho = {F.rho}")
    return q


def eta_connectivity(F: AnalyticCofunctor, q: ExtLike, j: int) -> ExtInt:
    """Connectivity of eta_j: G(W) -> T_j G(W), namely c + (j+1)(rho - q).

    W has a proper Morse function with critical indices <= q. The bound is
    only established for j >= 1, so j = 0 is refused rather than guessed.
    """
    q = _below_rho(F, q)
    if j < 1:
        raise InvalidArgument("eta_j is only estimated for j >= 1")
    if q.is_neg_inf:
        return INF
    return ExtInt(F.c + (j + 1) * (F.rho - int(q)))


def emb_eta_connectivity(n: int, q: ExtLike, k: int) -> ExtInt:
    """k(n-2-q) - q + 1, for eta_k on emb(W, N^n)."""
    q = ext(q)
    if q.is_pos_inf or q >= n - 2:
        raise PreconditionViolation(f"need q < n - 2 (q = {q}, n = {n})")
    if k < 1:
        raise InvalidArgument("k must be >= 1")
    if q.is_neg_inf:
        return INF
    q = int(q)
    return ExtInt(k * (n - 2 - q) - q + 1)


def converges(F: AnalyticCofunctor, q: ExtLike) -> bool:
    """Whether G(W) -> holim T_k G(W) is an equivalence, W of handle index q."""
    return ext(q) < F.rho


def layer_map_connectivity(F: AnalyticCofunctor, q: ExtLike, k: int) -> ExtInt:
    """Connectivity of r_k: T_k G -> T_{k-1} G, namely c + k(rho - q)."""
    q = _below_rho(F, q)
    if k < 0:
        raise InvalidArgument("k must be >= 0")
    if k == 0:
        return ExtInt(F.c)
    if q.is_neg_inf:
        return INF
    return ExtInt(F.c + k * (F.rho - int(q)))


def homogeneous_analyticity(k: int, conn_on_Ok: ExtLike, rho: int, m: int) -> Optional[AnalyticCofunctor]:
    """Excess certified for a homogeneous degree-k cofunctor.

    If G(V) is (c - 1 + k rho)-connected for V a union of k balls and
    rho >= m, G is rho-analytic with excess c; the largest such c is
    returned. None when rho < m.
    """
    if k < 0:
        raise InvalidArgument("degree must be >= 0")
    if rho < m:
        return None
    conn = ext(conn_on_Ok)
    if not conn.is_finite:
        raise InvalidArgument("connectivity on O_k must be finite")
    return AnalyticCofunctor(rho, int(conn) + 1 - k * rho, f"homogeneous of degree {k}")


def haefliger_metastable(m: int, n: int) -> HaefligerRange:
    """Haefliger's range: the square is 1-Cartesian when 2n > 3(m+1) and n >= 3.

    ``s`` is the connectivity of emb(M, N) -> T_2 emb(M, N), 2(n-2-m) - m + 1.
    """
    if m < 0 or m > n:
        raise InvalidArgument(f"need 0 <= m <= n (m = {m}, n = {n})")
    return HaefligerRange(2 * n > 3 * (m + 1) and n >= 3, 2 * (n - 2 - m) - m + 1)


def emb_tower_converges(m: int, n: int, has_compact_component: bool, q: ExtLike | None = None) -> bool:
    """Whether emb(W, N^n) is the limit of its tower for W open in M^m.

    Codimension >= 3 always converges; codimension 2 needs W without compact
    components; otherwise W must have handle index q < n - 2 (supplied by
    the caller, not checked).
    """
    if m < n - 2:
        return True
    if m == n - 2 and not has_compact_component:
        return True
    return q is not None and ext(q) < n - 2


def agrees_by_analyticity(rho: int, q: ExtLike, equivalence_on_finite_sets: bool) -> bool:
    """Whether a map of rho-analytic cofunctors is an equivalence on W of handle index q.

    It is, once it is an equivalence on tubular neighborhoods of finite sets.
    """
    return equivalence_on_finite_sets and ext(q) < rho
