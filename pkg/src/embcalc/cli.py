"""Command line entry point: ``embcalc <command> ...``.

Text tables by default, ``--json`` for one canonical JSON record per run.
Exit status: 0 success, 2 invalid arguments, 3 unsupported dimension range.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

from . import __version__
from .engine import derive_eta_bound, derive_homogeneous_cartesianness
from .errors import EmbCalcError, UnsupportedRange
from .estimates import (
    AnalyticCofunctor,
    HandleProfile,
    analytic_cube_cartesianness,
    emb_analyticity,
    emb_eta_connectivity,
    eta_connectivity,
    excision_cartesianness,
    haefliger_metastable,
    homogeneous_analyticity,
    layer_map_connectivity,
)
from .extint import ExtInt, ext
from .spaces import GenericCW, Loop, Point, Sphere, SpaceExpr, normalize
from .tower import Factor, contractible_factors, knot_tower, layer_factors, tower_summary
from .words import alpha, beta, enumerate_basic_words

FORMAT_VERSION = 1
DEFAULT_CUTOFF = 20

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RANGE = 3


class _Parser(argparse.ArgumentParser):
    def _get_formatter(self):
        # fixed width, so usage text does not depend on the terminal
        return self.formatter_class(prog=self.prog, width=80)

    def error(self, message):
        raise _UsageError(message, self.format_usage())


class _UsageError(Exception):
    def __init__(self, message: str, usage: str = ""):
        super().__init__(message)
        self.usage = usage


def dumps(record: Any) -> str:
    """Canonical JSON: sorted keys, no whitespace, UTF-8 text."""
    return json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def parse_target(text: str) -> SpaceExpr:
    """``point``, ``sphere:D`` (D >= 1) or ``cw:CONN`` (connectivity >= 0)."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "point" and not arg:
            return Point()
        if kind == "sphere":
            d = int(arg)
            if d >= 1:
                return Sphere(d)
        if kind == "cw":
            conn = ExtInt(arg)
            if conn >= 0:
                return GenericCW("Y", conn)
    except (ValueError, EmbCalcError):
        pass
    raise argparse.ArgumentTypeError(f"bad target {text!r}: use point, sphere:D (D >= 1) or cw:CONN (CONN >= 0)")


def _ext_arg(text: str) -> ExtInt:
    try:
        return ExtInt(text)
    except EmbCalcError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _ext_list(text: str) -> list[ExtInt]:
    return [_ext_arg(t) for t in text.split(",") if t.strip()]


def _default_cutoff() -> ExtInt:
    raw = os.environ.get("EMBCALC_CUTOFF_DEFAULT")
    if raw is None:
        return ExtInt(DEFAULT_CUTOFF)
    return _ext_arg(raw)


def _target_json(Y: SpaceExpr) -> dict:
    if isinstance(Y, Point):
        return {"kind": "point"}
    if isinstance(Y, Sphere):
        return {"kind": "sphere", "dim": Y.d}
    return {"kind": "cw", "connectivity": Y.conn.to_json()}


def _target_text(Y: SpaceExpr) -> str:
    if isinstance(Y, GenericCW):
        return f"Y (connectivity {Y.conn})"
    return str(Y)


def _factor_json(f: Factor, k: int, n: int) -> dict:
    nf = normalize(f.expr)
    inner = nf.inner if isinstance(nf, Loop) else nf
    return {
        "word": str(f.word),
        "letters": list(f.word.letters),
        "alpha": f.alpha,
        "beta": f.beta,
        "loops": k,
        "suspension": 1 + f.alpha * (n - 2),
        "smash_power": f.beta,
        "sphere": inner.d if isinstance(inner, Sphere) else None,
        "expr": str(nf),
        "connectivity": f.connectivity.to_json(),
    }


def _factor_row(f: Factor, k: int) -> list[str]:
    nf = normalize(f.expr)
    inner = nf.inner if isinstance(nf, Loop) else nf
    return [str(f.word), str(f.alpha), str(f.beta), str(k), str(inner), str(f.connectivity)]


FACTOR_HEADER = ["word", "alpha", "beta", "loops", "space", "conn"]


def table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    fmt = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    lines = [fmt(header), fmt(["-" * w for w in widths])]
    lines.extend(fmt(r) for r in rows)
    return "\n".join(lines)


def _kv(pairs: Sequence[tuple[str, Any]]) -> str:
    width = max(len(k) for k, _ in pairs)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in pairs)


def _js(v: Any) -> Any:
    if isinstance(v, ExtInt):
        return v.to_json()
    if isinstance(v, list):
        return [_js(x) for x in v]
    return v


# --- commands --------------------------------------------------------------
# each returns (parameters, results, text)


def cmd_words(a):
    words = enumerate_basic_words(a.k, a.max_weight)
    results = [
        {
            "word": str(w),
            "letters": list(w.letters),
            "multidegree": list(w.multidegree.degrees),
            "alpha": alpha(w),
            "beta": beta(w),
        }
        for w in words
    ]
    rows = [[str(w), str(w.weight), str(w.multidegree.degrees), str(alpha(w)), str(beta(w))] for w in words]
    text = table(["word", "weight", "multidegree", "alpha", "beta"], rows)
    return {"k": a.k, "max_weight": a.max_weight}, {"count": len(words), "words": results}, text


def _layer_block(k, n, Y, cutoff, verbose):
    factors = layer_factors(k, n, Y, cutoff)
    res = {"k": k, "factors": [_factor_json(f, k, n) for f in factors]}
    text = table(FACTOR_HEADER, [_factor_row(f, k) for f in factors])
    if verbose:
        dropped = contractible_factors(k, n, Y, cutoff)
        res["contractible"] = [str(f.word) for f in dropped]
        if dropped:
            text += "\ncontractible (dropped): " + " ".join(str(f.word) for f in dropped)
    return res, text


def cmd_layers(a):
    cutoff = a.cutoff if a.cutoff is not None else _default_cutoff()
    res, text = _layer_block(a.k, a.n, a.target, cutoff, a.verbose)
    params = {"k": a.k, "n": a.n, "target": _target_json(a.target), "cutoff": cutoff.to_json()}
    return params, res, text


def _tower_payload(summary, verbose):
    stages, chunks = [], []
    for st in summary.stages:
        if st.k == 1:
            stages.append({"k": 1, "label": st.label})
            chunks.append("stage 1: immersions")
            continue
        entry = {
            "k": st.k,
            "label": st.label,
            "map_connectivity": st.map_connectivity.to_json(),
            "factors": [_factor_json(f, st.k, summary.n) for f in st.factors],
        }
        body = table(FACTOR_HEADER, [_factor_row(f, st.k) for f in st.factors])
        if verbose:
            dropped = contractible_factors(st.k, summary.n, summary.Y, summary.cutoff)
            entry["contractible"] = [str(f.word) for f in dropped]
            if dropped:
                body += "\ncontractible (dropped): " + " ".join(str(f.word) for f in dropped)
        stages.append(entry)
        chunks.append(f"stage {st.k}: r_{st.k} is {st.map_connectivity}-connected\n{body}")
    return stages, "\n\n".join(chunks)


def cmd_tower(a):
    cutoff = a.cutoff if a.cutoff is not None else _default_cutoff()
    summary = tower_summary(a.n, a.target, a.kmax, cutoff, q=a.q)
    stages, text = _tower_payload(summary, a.verbose)
    params = {"n": a.n, "target": _target_json(a.target), "kmax": a.kmax, "cutoff": cutoff.to_json(), "q": a.q}
    head = f"tower of emb(I, N^{a.n}), N ~ Σ{_target_text(a.target)}, handle index q = {a.q}"
    return params, {"stages": stages}, head + "\n\n" + text


def cmd_knot(a):
    cutoff = a.cutoff if a.cutoff is not None else _default_cutoff()
    kt = knot_tower(a.n, a.kmax, cutoff)
    stages, text = _tower_payload(kt.tower, a.verbose)
    fib = kt.fibration
    fib_json = {
        "fiber": fib.fiber,
        "total": fib.total,
        "base": fib.base,
        "base_dimension": fib.base_dimension,
        "base_connectivity": fib.base_connectivity,
    }
    head = (
        f"fibration: {fib.fiber} -> {fib.total} -> {fib.base}\n"
        f"base: Stiefel manifold V_2(R^{a.n + 1}), dimension {fib.base_dimension}, "
        f"{fib.base_connectivity}-connected"
    )
    params = {"n": a.n, "kmax": a.kmax, "cutoff": cutoff.to_json()}
    return params, {"fibration": fib_json, "stages": stages}, head + "\n\n" + text


def _functor(a) -> AnalyticCofunctor:
    if a.n is not None:
        if a.rho is not None or a.c is not None:
            raise _UsageError("give either --n or both --rho and --c")
        return emb_analyticity(a.n)
    if a.rho is None or a.c is None:
        raise _UsageError("give either --n or both --rho and --c")
    return AnalyticCofunctor(a.rho, a.c, "G")


def cmd_estimate(a):
    kind = a.estimate
    if kind == "excision":
        value = excision_cartesianness(HandleProfile(a.n, tuple(a.q)))
        params = {"n": a.n, "q": _js(a.q)}
        return params, {"cartesianness": value.to_json()}, f"cube S -> emb(Q_S, Y) is {value}-Cartesian"
    if kind == "analytic":
        F = emb_analyticity(a.n)
        res = {"rho": F.rho, "c": F.c}
        text = [("rho", F.rho), ("c", F.c)]
        if a.n == 3:
            res["note"] = "boundary case n = 3"
            text.append(("note", res["note"]))
        if a.q is not None:
            value = analytic_cube_cartesianness(F, a.q)
            res["cartesianness"] = value.to_json()
            text.append(("cartesianness", value))
        return {"n": a.n, "q": _js(a.q)}, res, _kv(text)
    if kind == "eta":
        F = _functor(a)
        value = eta_connectivity(F, a.q, a.j)
        res = {"rho": F.rho, "c": F.c, "connectivity": value.to_json()}
        text = [("rho", F.rho), ("c", F.c), (f"eta_{a.j} connectivity", value)]
        if a.n is not None:
            closed = emb_eta_connectivity(a.n, a.q, a.j)
            res["closed_form"] = closed.to_json()
            text.append(("k(n-2-q)-q+1", closed))
        params = {"n": a.n, "rho": a.rho, "c": a.c, "q": a.q.to_json(), "j": a.j}
        return params, res, _kv(text)
    if kind == "layer-map":
        F = _functor(a)
        value = layer_map_connectivity(F, a.q, a.k)
        params = {"n": a.n, "rho": a.rho, "c": a.c, "q": a.q.to_json(), "k": a.k}
        res = {"rho": F.rho, "c": F.c, "connectivity": value.to_json()}
        return params, res, _kv([("rho", F.rho), ("c", F.c), (f"r_{a.k} connectivity", value)])
    if kind == "haefliger":
        h = haefliger_metastable(a.m, a.n)
        res = {"square_1_cartesian": h.square_1_cartesian, "s": h.s}
        return {"m": a.m, "n": a.n}, res, _kv([("square 1-Cartesian", str(h.square_1_cartesian).lower()), ("s", h.s)])
    if kind == "homogeneous":
        F = homogeneous_analyticity(a.k, a.conn, a.rho, a.m)
        params = {"k": a.k, "conn": a.conn.to_json(), "rho": a.rho, "m": a.m}
        if F is None:
            return params, {"analytic": False}, "no certificate: rho < m"
        return params, {"analytic": True, "rho": F.rho, "c": F.c}, _kv([("rho", F.rho), ("c", F.c)])
    raise _UsageError(f"unknown estimate {kind}")


def cmd_derive(a):
    if a.derivation == "eta":
        F = AnalyticCofunctor(a.rho, a.c, "G")
        trace = derive_eta_bound(F, a.q, a.k, a.balls)
        params = {"rho": a.rho, "c": a.c, "q": a.q, "k": a.k, "balls": a.balls}
    else:
        trace = derive_homogeneous_cartesianness(a.k, a.c, a.rho, a.m, a.q, a.base)
        params = {"k": a.k, "c": a.c, "rho": a.rho, "m": a.m, "q": _js(a.q), "base": a.base}
    res = trace.to_dict()
    res["bound"] = trace.conclusion.bound.to_json()
    return params, res, trace.to_text()


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="embcalc", description="Taylor tower calculator for spaces of embeddings.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("words", help="basic words in z_1..z_k")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--max-weight", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_words)

    sp = sub.add_parser("layers", help="factors of the k-th layer")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--target", type=parse_target, required=True, help="point | sphere:D | cw:CONN")
    sp.add_argument("--cutoff", type=_ext_arg)
    sp.add_argument("--verbose", action="store_true", help="also list contractible factors")
    common(sp)
    sp.set_defaults(func=cmd_layers)

    sp = sub.add_parser("tower", help="stages 1..kmax of the tower")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--target", type=parse_target, required=True)
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--cutoff", type=_ext_arg)
    sp.add_argument("--q", type=int, default=1, help="handle index (default 1)")
    sp.add_argument("--verbose", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_tower)

    sp = sub.add_parser("knot", help="tower for emb(I, R^{n-1} x I)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--cutoff", type=_ext_arg)
    sp.add_argument("--verbose", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_knot)

    est = sub.add_parser("estimate", help="closed-form estimates")
    es = est.add_subparsers(dest="estimate", parser_class=_Parser)
    es.required = True

    sp = es.add_parser("excision")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=_ext_list, required=True, help="comma-separated handle indices, e.g. 0,1 or -inf,0")
    common(sp)

    sp = es.add_parser("analytic")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=_ext_list)
    common(sp)

    for name, idx in (("eta", "j"), ("layer-map", "k")):
        sp = es.add_parser(name)
        sp.add_argument("--n", type=int)
        sp.add_argument("--rho", type=int)
        sp.add_argument("--c", type=int)
        sp.add_argument("--q", type=_ext_arg, required=True)
        sp.add_argument(f"--{idx}", type=int, required=True)
        common(sp)

    sp = es.add_parser("haefliger")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    common(sp)

    sp = es.add_parser("homogeneous")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--conn", type=_ext_arg, required=True)
    sp.add_argument("--rho", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    common(sp)
    est.set_defaults(func=cmd_estimate)

    der = sub.add_parser("derive", help="replay a derivation")
    ds = der.add_subparsers(dest="derivation", parser_class=_Parser)
    ds.required = True
    sp = ds.add_parser("eta")
    sp.add_argument("--rho", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--balls", type=int)
    common(sp)
    sp = ds.add_parser("homogeneous")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--rho", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--q", type=_ext_list, required=True)
    sp.add_argument("--base", type=lambda s: [int(t) for t in s.split(",") if t.strip()], default=[0])
    common(sp)
    der.set_defaults(func=cmd_derive)
    return p


def _command_name(a) -> str:
    sub = getattr(a, "estimate", None) or getattr(a, "derivation", None)
    return f"{a.command} {sub}" if sub else a.command


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        params, results, text = a.func(a)
    except _UsageError as e:
        stderr.write(e.usage)
        print(f"embcalc: error: {e}", file=stderr)
        return EXIT_INVALID
    except UnsupportedRange as e:
        print(f"embcalc: unsupported range: {e}", file=stderr)
        return EXIT_RANGE
    except EmbCalcError as e:
        print(f"embcalc: error: {e}", file=stderr)
        return EXIT_INVALID
    if a.json:
        record = {
            "format_version": FORMAT_VERSION,
            "command": _command_name(a),
            "parameters": params,
            "results": results,
        }
        stdout.write(dumps(record) + "\n")
    else:
        stdout.write(text + "\n")
    return EXIT_OK


def main() -> None:
    try:
        code = run()
    except SystemExit as e:
        # --help / --version
        code = e.code if isinstance(e.code, int) else 0
    sys.exit(code)
