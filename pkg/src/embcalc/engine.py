"""Mechanical replay of the connectivity bookkeeping behind the convergence
and homogeneous-layer estimates.

A derivation is a list of steps. Each step applies one rule to facts
produced by earlier steps (or states an axiom) and yields a new fact
"subject is b-Cartesian" or "subject is b-connected". The rule arithmetic:

    R1  base cube and every fiber cube a_i-Cartesian  -> total min(a_i)-Cartesian
    R2  map of cubes a-Cartesian, target b-Cartesian  -> source min(a, b)-Cartesian
    R3  composite f.g a-Cartesian, f b-Cartesian       -> g min(a, b - 1)-Cartesian
    R4  termwise t-connected over a punctured k-cube   -> (t - k + 1)-connected on holims
    R5  composable maps a_i-connected                  -> composite min(a_i)-connected
    P   fibrations a_i-connected                       -> product / pullback min(a_i)-connected
    V   only nontrivial vertex is a-connected          -> cube (a + 1)-Cartesian
    W   a-Cartesian (or connected), b <= a             -> b-Cartesian (or connected)

A map counts as a 1-cube, so R3 applies to maps as well. R2 and R3 are
encoded only in the instances the two arguments need.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import InvalidArgument, PreconditionViolation
from .estimates import AnalyticCofunctor, analytic_cube_cartesianness
from .extint import INF, ExtInt, ExtLike, ext

__all__ = [
    "ConnFact",
    "Step",
    "DerivationTrace",
    "RULES",
    "apply_rule",
    "derive_eta_bound",
    "derive_homogeneous_cartesianness",
]

CARTESIAN = "cartesian"
CONNECTED = "connected"

# rule -> (minimum inputs, maximum inputs or None)
RULES = {
    "R1": (2, None),
    "R2": (2, 2),
    "R3": (2, 2),
    "R4": (1, 1),
    "R5": (2, None),
    "P": (1, None),
    "V": (1, 1),
    "W": (1, 1),
}


@dataclass(frozen=True)
class ConnFact:
    subject: str
    kind: str
    bound: ExtInt

    def __post_init__(self):
        if self.kind not in (CARTESIAN, CONNECTED):
            raise InvalidArgument(f"unknown fact kind {self.kind!r}")
        object.__setattr__(self, "bound", ext(self.bound))

    def __str__(self):
        return f"{self.subject} is {self.bound}-{self.kind}"

    def to_dict(self) -> dict:
        return {"subject": self.subject, "kind": self.kind, "bound": self.bound.to_json()}


@dataclass(frozen=True)
class Step:
    rule: str
    inputs: tuple[int, ...]
    output: ConnFact
    note: str = ""


@dataclass
class DerivationTrace:
    steps: list[Step] = field(default_factory=list)
    conclusion: Optional[ConnFact] = None

    def validate(self) -> None:
        """Every step may only use outputs of strictly earlier steps."""
        for i, step in enumerate(self.steps):
            if step.rule == "axiom":
                if step.inputs:
                    raise InvalidArgument(f"step {i}: axioms take no inputs")
                continue
            if step.rule not in RULES:
                raise InvalidArgument(f"step {i}: unknown rule {step.rule}")
            if any(not 0 <= j < i for j in step.inputs):
                raise InvalidArgument(f"step {i} uses a fact that is not yet derived")
        if self.conclusion is not None and self.conclusion not in (s.output for s in self.steps):
            raise InvalidArgument("conclusion is not the output of any step")

    def fact(self, i: int) -> ConnFact:
        return self.steps[i].output

    def to_text(self) -> str:
        lines = []
        for i, s in enumerate(self.steps):
            src = ",".join(f"#{j}" for j in s.inputs) or "-"
            line = f"#{i}\t{s.rule}\t{src}\t{s.output}"
            if s.note:
                line += f"\t({s.note})"
            lines.append(line)
        if self.conclusion is not None:
            lines.append(f"conclusion\t{self.conclusion}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "steps": [
                {"rule": s.rule, "inputs": list(s.inputs), "output": s.output.to_dict(), "note": s.note}
                for s in self.steps
            ],
            "conclusion": self.conclusion.to_dict() if self.conclusion else None,
        }


def apply_rule(
    rule: str,
    inputs: Sequence[ConnFact],
    *,
    subject: str = "",
    cube_size: int | None = None,
    bound: ExtLike | None = None,
) -> ConnFact:
    """Apply one inference rule; see the module docstring for the arithmetic.

    R3 takes (composite, f) in that order. R4 needs ``cube_size``; W needs
    the weakened ``bound``.
    """
    if rule not in RULES:
        raise InvalidArgument(f"unknown rule {rule!r}")
    lo, hi = RULES[rule]
    if len(inputs) < lo or (hi is not None and len(inputs) > hi):
        raise InvalidArgument(f"{rule} takes {lo}{'+' if hi is None else ''} inputs, got {len(inputs)}")
    bounds = [f.bound for f in inputs]
    subject = subject or f"{rule}({', '.join(f.subject for f in inputs)})"

    if rule in ("R1", "R2"):
        return ConnFact(subject, CARTESIAN, min(bounds))
    if rule == "R3":
        a, b = bounds
        return ConnFact(subject, inputs[0].kind, min(a, b - 1))
    if rule == "R4":
        if cube_size is None or cube_size < 1:
            raise InvalidArgument("R4 needs the size k >= 1 of the punctured cube")
        return ConnFact(subject, CONNECTED, bounds[0] - cube_size + 1)
    if rule in ("R5", "P"):
        return ConnFact(subject, CONNECTED, min(bounds))
    if rule == "V":
        return ConnFact(subject, CARTESIAN, bounds[0] + 1)
    # W
    if bound is None:
        raise InvalidArgument("W needs the weaker bound")
    bound = ext(bound)
    if bound > bounds[0]:
        raise InvalidArgument(f"cannot weaken {bounds[0]} to the larger {bound}")
    return ConnFact(subject, inputs[0].kind, bound)


class _Builder:
    def __init__(self):
        self.trace = DerivationTrace()
        self._index: dict[ConnFact, int] = {}

    def _push(self, step: Step) -> ConnFact:
        self.trace.steps.append(step)
        self._index.setdefault(step.output, len(self.trace.steps) - 1)
        return step.output

    def axiom(self, subject: str, kind: str, bound: ExtLike, note: str) -> ConnFact:
        return self._push(Step("axiom", (), ConnFact(subject, kind, bound), note))

    def rule(self, rule: str, inputs: Sequence[ConnFact], subject: str, note: str = "", **params) -> ConnFact:
        out = apply_rule(rule, inputs, subject=subject, **params)
        return self._push(Step(rule, tuple(self._index[f] for f in inputs), out, note))

    def weaken(self, fact: ConnFact, bound: ExtInt, note: str) -> ConnFact:
        if fact.bound == bound:
            return fact
        return self.rule("W", [fact], fact.subject + " (claimed)", note, bound=bound)

    def finish(self, conclusion: ConnFact) -> DerivationTrace:
        self.trace.conclusion = conclusion
        self.trace.validate()
        return self.trace


def derive_eta_bound(F: AnalyticCofunctor, q: int, k: int, balls: int | None = None) -> DerivationTrace:
    """Derive the connectivity of eta_{k-1}: G(W) -> T_{k-1}G(W).

    W has a handle decomposition with handles of index <= q. For q = 0, W is
    a disjoint union of ``balls`` open balls (default k, the worst case);
    the tower T_l -> ... -> T_{k-1} is a composite of fibrations pulled back
    from products of the cube maps p_S. For q > 0, k parallel codimension-q
    slices A_1..A_k of every q-handle give a k-cube S -> W minus A_S whose
    punctured part has handle index q - 1, which is derived first.
    """
    if not isinstance(q, int) or q < 0:
        raise InvalidArgument("q must be a non-negative integer")
    if q >= F.rho:
        raise PreconditionViolation(f"handle index {q} is not below rho = {F.rho}")
    if k < 2:
        raise InvalidArgument("k must be >= 2")
    ell = k if balls is None else balls
    if ell < 0:
        raise InvalidArgument("ball count must be >= 0")
    b = _Builder()

    def eta(level: int) -> ConnFact:
        target = f"eta_{k - 1}: G(W) -> T_{k - 1}G(W), W of handle index <= {level}"
        if level == 0:
            if ell < k:
                return b.axiom(target, CONNECTED, INF, f"W is {ell} < {k} balls")
            layer_maps = []
            for t in range(k, ell + 1):
                cube = b.axiom(
                    f"p_S for |S| = {t} (cube R -> G(W_R), R ⊆ S)",
                    CARTESIAN,
                    analytic_cube_cartesianness(F, [0] * t),
                    f"analyticity, {t} handles of index 0",
                )
                layer_maps.append(
                    b.rule("P", [cube], f"r_{t}: T_{t}G(W) -> T_{t - 1}G(W)", "pullback of a product of the p_S")
                )
            composite = layer_maps[0]
            if len(layer_maps) > 1:
                composite = b.rule("R5", layer_maps, f"r_{k}...r_{ell}: T_{ell}G(W) -> T_{k - 1}G(W)")
            top = b.axiom(f"eta_{ell}: G(W) -> T_{ell}G(W)", CONNECTED, INF, f"W is {ell} balls")
            return b.rule("R5", [top, composite], target)

        inner = eta(level - 1)
        holim = b.rule(
            "R4",
            [inner],
            f"holim_(S≠∅) G(W-A_S) -> holim_(S≠∅) T_{k - 1}G(W-A_S), index {level}",
            "W-A_S has handle index < {}".format(level),
            cube_size=k,
        )
        g_cube = b.axiom(
            f"cube S -> G(W-A_S), index {level}",
            CARTESIAN,
            analytic_cube_cartesianness(F, [level] * k),
            f"analyticity, {k} handles of index {level}",
        )
        t_cube = b.axiom(
            f"cube S -> T_{k - 1}G(W-A_S), index {level}",
            CARTESIAN,
            INF,
            f"T_{k - 1}G is polynomial of degree <= {k - 1}",
        )
        composite = b.rule(
            "R5", [g_cube, holim], f"G(W) -> holim_(S≠∅) T_{k - 1}G(W-A_S), index {level}"
        )
        return b.rule("R3", [composite, t_cube], target)

    return b.finish(eta(q))


def derive_homogeneous_cartesianness(
    k: int,
    c: int,
    rho: int,
    m: int,
    q_list: Sequence[ExtLike],
    base_handles: Iterable[int] = (0,),
) -> DerivationTrace:
    """Derive c + sum(rho - q_i) for the handle cube of a homogeneous degree-k G.

    G(V) is assumed (c - 1 + k rho)-connected on unions of k balls. The
    derivation runs the downward induction on the number r + 1 of attached
    handles, with inner inductions on the number of handles of the base
    (``base_handles`` lists their indices) and on the largest attached index.
    Each induction hypothesis is used at exactly its claimed bound.
    """
    if rho < m:
        raise PreconditionViolation(f"need rho >= m (rho = {rho}, m = {m})")
    qs = tuple(ext(q) for q in q_list)
    if not qs:
        raise InvalidArgument("need at least one attached handle")
    for q in qs:
        if q.is_pos_inf or (q.is_finite and not 0 <= int(q) <= m):
            raise PreconditionViolation(f"handle index {q} outside 0..m = {m}")
    base = tuple(base_handles)
    if any(not 0 <= p <= m for p in base):
        raise PreconditionViolation(f"base handle indices {base} outside 0..m = {m}")
    if k < 0:
        raise InvalidArgument("degree must be >= 0")

    b = _Builder()
    name = f"cube S -> G(V_S), handles {_fmt(qs)}"
    if k == 0 or any(q.is_neg_inf for q in qs):
        return b.finish(b.axiom(name, CARTESIAN, INF, "trivial case"))
    if len(qs) > k:
        return b.finish(b.axiom(name, CARTESIAN, INF, f"r >= k = {k}: trivial case"))

    memo: dict[tuple[tuple[int, ...], int], ConnFact] = {}

    def claim(hs: tuple[int, ...]) -> ExtInt:
        return ExtInt(c + sum(rho - h for h in hs))

    def prove(hs: tuple[int, ...], h: int) -> ConnFact:
        key = (hs, h)
        if key in memo:
            return memo[key]
        r = len(hs) - 1
        subject = f"cube S -> G(V_S), handles {_fmt(hs)}, base with {h} handle(s)"
        if r >= k:
            fact = b.weaken(b.axiom(subject, CARTESIAN, INF, f"r >= k = {k}"), claim(hs), "induction hypothesis")
        elif hs[0] == 0 and h == 0:
            if r < k - 1:
                fact = b.weaken(
                    b.axiom(subject, CARTESIAN, INF, "every vertex contractible"), claim(hs), "induction hypothesis"
                )
            else:
                vertex = b.axiom(
                    f"G(V_[{r}]), V_[{r}] is {k} balls",
                    CONNECTED,
                    c - 1 + k * rho,
                    "hypothesis on O_k; other vertices contractible",
                )
                fact = b.rule("V", [vertex], subject)
        elif hs[0] == 0:
            p = base[h - 1]
            bigger = prove(tuple(sorted(hs + (p,), reverse=True)), h - 1)
            smaller = prove(hs, h - 1)
            fact = b.rule("R2", [bigger, smaller], subject, f"cocore of an index-{p} handle removed")
        else:
            q0 = hs[0]
            lowered = tuple(sorted((q0 - 1,) + hs[1:], reverse=True))
            f = prove(lowered, h)
            fg = b.axiom(
                f"f.g for {_fmt(hs)}, base {h}", CARTESIAN, INF, "V_S - C -> V_S - B is an isotopy equivalence"
            )
            g = b.rule("R3", [fg, f], f"g for {_fmt(hs)}, base {h}")
            square = prove(tuple(sorted(hs + (q0,), reverse=True)), h)
            fact = b.rule("R2", [square, g], subject, f"strip between two cocores of the index-{q0} handle")
        memo[key] = fact
        return fact

    start = tuple(sorted((int(q) for q in qs), reverse=True))
    return b.finish(prove(start, len(base)))


def _fmt(hs) -> str:
    return "[" + ",".join(str(h) for h in hs) + "]"
