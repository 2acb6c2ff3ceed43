"""Command-line workbench: parse, validate, compute, report.

Exit codes: 0 for ok/true results, 1 for violations or false results,
2 for input errors.  Machine mode emits one JSON document tagged with a
schema name; inputs are echoed canonically so outputs re-parse.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import generic, io, magidor, prikry, projection, ramsey
from .errors import ParseError, WorkbenchError
from .magidor import ExtensionType
from .ordinal import Ordinal, format_ordinal, parse_ordinal
from .oset import OrdinalSet, format_set, parse_set
from .projection import IndexSet
from .universe import ToyUniverse

# Every public operation of every module is reachable through exactly one
# verb; tests enforce this table against the modules' __all__ lists.
REGISTRY: dict[tuple[str, str], tuple[str, str]] = {
    ("ordinal", "compare"): ("ord", "cmp"),
    ("ordinal", "add"): ("ord", "add"),
    ("ordinal", "omega_power"): ("ord", "wpow"),
    ("ordinal", "cnf_difference"): ("ord", "diff"),
    ("ordinal", "limit_order"): ("ord", "olimit"),
    ("ordinal", "classify"): ("ord", "classify"),
    ("oset", "union"): ("set", "union"),
    ("oset", "intersect"): ("set", "inter"),
    ("oset", "difference"): ("set", "diff"),
    ("oset", "membership"): ("set", "member"),
    ("oset", "restrict_below"): ("set", "restrict-below"),
    ("oset", "restrict_above"): ("set", "restrict-above"),
    ("universe", "stratum"): ("set", "stratum"),
    ("universe", "check"): ("uni", "check"),
    ("universe", "is_large"): ("uni", "large"),
    ("universe", "star_closure"): ("uni", "star"),
    ("universe", "stratify"): ("uni", "stratify"),
    ("magidor", "validate"): ("cond", "validate"),
    ("magidor", "leq"): ("cond", "leq"),
    ("magidor", "gamma_of"): ("cond", "gamma"),
    ("magidor", "type_of"): ("cond", "type-of"),
    ("magidor", "extend"): ("cond", "extend"),
    ("magidor", "find_type"): ("cond", "find-type"),
    ("magidor", "unveil_type"): ("cond", "unveil"),
    ("magidor", "split_at"): ("cond", "split"),
    ("magidor", "join"): ("cond", "join"),
    ("projection", "index_of"): ("proj", "index"),
    ("projection", "pi"): ("proj", "pi"),
    ("projection", "validate_I"): ("proj", "validate"),
    ("projection", "leq_I"): ("proj", "leq"),
    ("projection", "in_D"): ("proj", "in-d"),
    ("projection", "densify"): ("proj", "densify"),
    ("projection", "onto_construct"): ("proj", "onto"),
    ("projection", "lift"): ("proj", "lift"),
    ("projection", "correct_computation_check"): ("proj", "check-correct"),
    ("projection", "refine_to_clubs"): ("proj", "refine-clubs"),
    ("projection", "quotient_member"): ("proj", "quotient-member"),
    ("generic", "in_filter"): ("gen", "in-filter"),
    ("generic", "interval_otp"): ("gen", "otp"),
    ("generic", "filter_pair_compatible"): ("gen", "compatible"),
    ("ramsey", "homogenize"): ("ramsey", "homog"),
    ("ramsey", "important_coordinates"): ("ramsey", "important"),
    ("prikry", "validate_tree"): ("prikry", "validate"),
    ("prikry", "leq_tree"): ("prikry", "leq"),
    ("prikry", "normalize_dense"): ("prikry", "normalize"),
    ("prikry", "validate_sequence_condition"): ("prikry", "validate-seq"),
    ("prikry", "modified_diag"): ("prikry", "diag"),
    ("prikry", "limit_ultrafilter_member"): ("prikry", "limit-member"),
    ("prikry", "is_p_point"): ("prikry", "p-point"),
    ("prikry", "apply_derivation"): ("prikry", "derive"),
    ("prikry", "project_ultrafilter"): ("prikry", "project"),
}


# Parsed inputs are echoed canonically in machine-mode reports.
_ECHO: list = []


def _record(kind: str, value):
    _ECHO.append({"kind": kind, "value": value})
    return value


def _load_json_arg(text: str):
    if os.path.exists(text):
        return io.load_document(text)
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"not a file and not JSON: {text[:40]!r}") from err


def _arg_ord(text: str) -> Ordinal:
    g = parse_ordinal(text)
    _record("ordinal", format_ordinal(g))
    return g


def _arg_set(text: str) -> OrdinalSet:
    if os.path.exists(text):
        s = io.set_from_json(io.load_document(text))
    else:
        try:
            s = parse_set(text)
        except ParseError:
            try:
                s = io.set_from_json(json.loads(text))
            except json.JSONDecodeError as err:
                raise ParseError(f"not a set literal: {text[:40]!r}") from err
    _record("set", io.set_to_json(s))
    return s


def _arg_universe(text: str) -> ToyUniverse:
    u = io.universe_from_json(_load_json_arg(text))
    _record("universe", io.universe_to_json(u))
    return u


def _arg_condition(text: str):
    p = io.condition_from_json(_load_json_arg(text))
    _record("condition", io.condition_to_json(p))
    return p


def _arg_icondition(text: str):
    q = io.icondition_from_json(_load_json_arg(text))
    _record("icondition", io.icondition_to_json(q))
    return q


def _arg_alphas(text: str) -> tuple[tuple[Ordinal, ...], ...]:
    doc = _load_json_arg(text)
    return tuple(tuple(parse_ordinal(a) for a in gap) for gap in doc)


def _type_json(x: ExtensionType) -> list:
    return [[format_ordinal(e) for e in gap] for gap in x.per_block]


def _alphas_json(alphas) -> list:
    return [[format_ordinal(a) for a in gap] for gap in alphas]


class Report:
    """Collects the result payload plus the human rendering."""

    def __init__(self, schema: str):
        self.schema = schema
        self.payload: dict = {"schema": schema}
        self.lines: list[str] = []
        self.code = 0

    def set(self, key: str, value, human: str | None = None):
        self.payload[key] = value
        if human is not None:
            self.lines.append(human)
        return self

    def verdict(self, ok: bool, yes: str, no: str):
        self.code = 0 if ok else 1
        self.lines.append(yes if ok else no)
        return self


def _emit(rep: Report, machine: bool) -> int:
    if machine:
        print(json.dumps(rep.payload, sort_keys=True))
    else:
        for line in rep.lines:
            print(line)
    return rep.code


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------


def _handle_ord(args) -> Report:
    verb = args.verb
    rep = Report(f"ordbench.ord.{verb}/1")
    if verb == "add":
        a, b = _arg_ord(args.a), _arg_ord(args.b)
        out = a + b
        return rep.set("result", format_ordinal(out), format_ordinal(out))
    if verb == "diff":
        from .ordinal import cnf_difference

        a, b = _arg_ord(args.a), _arg_ord(args.b)
        exps = cnf_difference(a, b)
        human = "<" + ",".join(format_ordinal(e) for e in exps) + ">"
        return rep.set("result", [format_ordinal(e) for e in exps], human)
    if verb == "cmp":
        from .ordinal import compare

        c = compare(_arg_ord(args.a), _arg_ord(args.b))
        word = {-1: "less", 0: "equal", 1: "greater"}[c]
        return rep.set("result", word, word)
    if verb == "olimit":
        from .ordinal import limit_order

        out = limit_order(_arg_ord(args.a))
        return rep.set("result", format_ordinal(out), format_ordinal(out))
    if verb == "classify":
        from .ordinal import classify

        word = classify(_arg_ord(args.a))
        return rep.set("result", word, word)
    if verb == "wpow":
        from .ordinal import omega_power

        out = omega_power(_arg_ord(args.a))
        return rep.set("result", format_ordinal(out), format_ordinal(out))
    raise AssertionError(verb)


def _handle_set(args) -> Report:
    verb = args.verb
    rep = Report(f"ordbench.set.{verb}/1")
    if verb in ("union", "inter", "diff"):
        a, b = _arg_set(args.a), _arg_set(args.b)
        out = {
            "union": a.union,
            "inter": a.intersect,
            "diff": a.difference,
        }[verb](b)
        return rep.set("result", io.set_to_json(out), format_set(out))
    if verb == "member":
        s = _arg_set(args.a)
        g = parse_ordinal(args.b)
        ok = g in s
        rep.set("result", ok)
        return rep.verdict(ok, "member", "not a member")
    if verb in ("restrict-below", "restrict-above"):
        s = _arg_set(args.a)
        g = parse_ordinal(args.b)
        out = s.restrict_below(g) if verb == "restrict-below" else s.restrict_above(g)
        return rep.set("result", io.set_to_json(out), format_set(out))
    if verb == "stratum":
        u = _arg_universe(args.universe)
        xi = _arg_ord(args.a)
        below = parse_ordinal(args.below) if args.below else u.lambda0
        out = u.stratum(xi, below)
        return rep.set("result", io.set_to_json(out), format_set(out))
    raise AssertionError(verb)


def _handle_uni(args) -> Report:
    verb = args.verb
    rep = Report(f"ordbench.uni.{verb}/1")
    if verb == "check":
        try:
            u = _arg_universe(args.universe)
        except ValueError as err:
            rep.set("violations", [str(err)])
            return rep.verdict(False, "", f"invalid: {err}")
        rep.set("universe", io.universe_to_json(u))
        rep.set("violations", [])
        return rep.verdict(True, "ok", "")
    u = _arg_universe(args.universe)
    if verb == "large":
        ok = u.is_large(_arg_set(args.b_set), parse_ordinal(args.beta), parse_ordinal(args.xi))
        rep.set("result", ok)
        return rep.verdict(ok, "large", "not large")
    if verb == "star":
        out = u.star_closure(_arg_set(args.b_set), parse_ordinal(args.beta))
        return rep.set("result", io.set_to_json(out), format_set(out))
    if verb == "stratify":
        parts = u.stratify(_arg_set(args.b_set), parse_ordinal(args.beta))
        doc = {format_ordinal(k): io.set_to_json(v) for k, v in parts.items()}
        human = "; ".join(f"{k}: {format_set(v)}" for k, v in sorted((str(k), v) for k, v in parts.items()))
        return rep.set("result", doc, human)
    raise AssertionError(verb)


def _handle_cond(args) -> Report:
    verb = args.verb
    rep = Report(f"ordbench.cond.{verb}/1")
    if verb == "validate":
        p = _arg_condition(args.c1)
        violations = magidor.validate(p)
        rep.set("violations", violations)
        for v in violations:
            rep.lines.append(v)
        return rep.verdict(not violations, "ok", f"{len(violations)} violation(s)")
    if verb == "leq":
        p, q = _arg_condition(args.c1), _arg_condition(args.c2)
        ok = magidor.leq_star(p, q) if args.star else magidor.leq(p, q)
        rep.set("result", ok)
        return rep.verdict(ok, "extends", "does not extend")
    if verb == "gamma":
        p = _arg_condition(args.c1)
        out = magidor.gamma_of(p, int(args.index))
        return rep.set("result", format_ordinal(out), format_ordinal(out))
    if verb == "type-of":
        p = _arg_condition(args.c1)
        x = magidor.type_of(p, _arg_alphas(args.alphas))
        return rep.set("result", _type_json(x), str(x))
    if verb == "extend":
        p = _arg_condition(args.c1)
        shrink = None
        if args.shrink:
            doc = _load_json_arg(args.shrink)
            shrink = {
                parse_ordinal(entry["kappa"]): io.set_from_json(entry["B"])
                for entry in doc
            }
        out = magidor.extend(p, _arg_alphas(args.alphas), shrink)
        return rep.set(
            "result", io.condition_to_json(out), f"{len(out.blocks)} blocks"
        )
    if verb == "find-type":
        p, q = _arg_condition(args.c1), _arg_condition(args.c2)
        x, alphas = magidor.find_type(p, q)
        rep.set("type", _type_json(x), str(x))
        rep.set("alphas", _alphas_json(alphas))
        return rep
    if verb == "unveil":
        p = _arg_condition(args.c1)
        x = magidor.unveil_type(p, parse_ordinal(args.gamma))
        return rep.set("result", _type_json(x), str(x))
    if verb == "split":
        p = _arg_condition(args.c1)
        lower, upper = magidor.split_at(p, int(args.index))
        rep.set("lower", io.condition_to_json(lower), f"lower: {len(lower.blocks)} blocks")
        rep.set(
            "upper",
            None if upper is None else io.condition_to_json(upper),
            "upper: empty" if upper is None else f"upper: {len(upper.blocks)} blocks",
        )
        return rep
    if verb == "join":
        lower = _arg_condition(args.c1)
        upper = _arg_condition(args.c2) if args.c2 else None
        out = magidor.join(lower, upper)
        return rep.set("result", io.condition_to_json(out), f"{len(out.blocks)} blocks")
    raise AssertionError(verb)


def _handle_proj(args) -> Report:
    verb = args.verb
    rep = Report(f"ordbench.proj.{verb}/1")
    if verb == "index":
        p = _arg_condition(args.c1)
        I = IndexSet(_arg_set(args.index_set))
        out = projection.index_of(p, int(args.index), I)
        text = "NA" if out is None else format_ordinal(out)
        return rep.set("result", None if out is None else format_ordinal(out), text)
    if verb == "pi":
        p = _arg_condition(args.c1)
        I = IndexSet(_arg_set(args.index_set))
        out = projection.pi(p, I)
        return rep.set("result", io.icondition_to_json(out), f"{len(out.blocks)} blocks")
    if verb == "validate":
        q = _arg_icondition(args.c1)
        violations = projection.validate_I(q)
        rep.set("violations", violations)
        for v in violations:
            rep.lines.append(v)
        return rep.verdict(not violations, "ok", f"{len(violations)} violation(s)")
    if verb == "leq":
        p, q = _arg_icondition(args.c1), _arg_icondition(args.c2)
        ok = projection.leq_I_star(p, q) if args.star else projection.leq_I(p, q)
        rep.set("result", ok)
        return rep.verdict(ok, "extends", "does not extend")
    if verb == "in-d":
        p = _arg_condition(args.c1)
        I = IndexSet(_arg_set(args.index_set))
        failure = projection.in_D(p, I)
        if failure is None:
            rep.set("result", None)
            return rep.verdict(True, "in D", "")
        rep.set(
            "result",
            {
                "block": failure.block_index,
                "coordinate": format_ordinal(failure.coordinate),
                "clause": failure.clause,
                "repair": None
                if failure.repair is None
                else format_ordinal(failure.repair),
            },
        )
        return rep.verdict(
            False,
            "",
            f"fails clause {failure.clause} at block {failure.block_index} "
            f"(coordinate {failure.coordinate})",
        )
    if verb == "densify":
        p = _arg_condition(args.c1)
        I = IndexSet(_arg_set(args.index_set))
        out = projection.densify(p, I)
        return rep.set("result", io.condition_to_json(out), f"{len(out.blocks)} blocks")
    if verb == "onto":
        q = _arg_icondition(args.c1)
        out = projection.onto_construct(q)
        return rep.set("result", io.condition_to_json(out), f"{len(out.blocks)} blocks")
    if verb == "lift":
        p = _arg_condition(args.c1)
        q = _arg_icondition(args.c2)
        out = projection.lift(p, q)
        return rep.set("result", io.condition_to_json(out), f"{len(out.blocks)} blocks")
    if verb == "check-correct":
        p = _arg_condition(args.c1)
        I = IndexSet(_arg_set(args.index_set))
        ok = projection.correct_computation_check(p, I)
        rep.set("result", ok)
        return rep.verdict(ok, "computes the index set correctly", "mismatch")
    if verb == "refine-clubs":
        roots = [parse_ordinal(r) for r in args.roots.split(",")]
        cstar = _arg_set(args.c1)
        out = projection.refine_to_clubs(roots, cstar)
        return rep.set(
            "result",
            [format_ordinal(r) for r in out],
            ", ".join(format_ordinal(r) for r in out),
        )
    if verb == "quotient-member":
        p = _arg_condition(args.c1)
        I = _arg_set(args.index_set)
        witness = generic.CanonicalSequence(p.universe.lambda0, I)
        ok = projection.quotient_member(p, witness)
        rep.set("result", ok)
        return rep.verdict(ok, "in the quotient filter", "not in the quotient filter")
    raise AssertionError(verb)


def _handle_gen(args) -> Report:
    verb = args.verb
    rep = Report(f"ordbench.gen.{verb}/1")
    if verb == "in-filter":
        p = _arg_condition(args.c1)
        seq = generic.CanonicalSequence(
            p.universe.lambda0, _arg_set(args.restrict) if args.restrict else None
        )
        ok = generic.in_filter(p, seq)
        rep.set("result", ok)
        return rep.verdict(ok, "in the filter", "not in the filter")
    if verb == "otp":
        seq = generic.CanonicalSequence(
            parse_ordinal(args.lambda0),
            _arg_set(args.restrict) if args.restrict else None,
        )
        out = generic.interval_otp(seq, parse_ordinal(args.a), parse_ordinal(args.b))
        return rep.set("result", format_ordinal(out), format_ordinal(out))
    if verb == "compatible":
        p, q = _arg_condition(args.c1), _arg_condition(args.c2)
        seq = generic.CanonicalSequence(
            p.universe.lambda0, _arg_set(args.restrict) if args.restrict else None
        )
        ok = generic.filter_pair_compatible(p, q, seq)
        rep.set("result", ok)
        return rep.verdict(ok, "compatible", "not compatible")
    raise AssertionError(verb)


def _handle_ramsey(args) -> Report:
    verb = args.verb
    rep = Report(f"ordbench.ramsey.{verb}/1")
    F = io.product_fn_from_json(_load_json_arg(args.fn))
    sizes = [int(x) for x in args.min_sizes.split(",")]
    if verb == "homog":
        got = ramsey.homogenize(F, sizes)
        if got is None:
            rep.set("result", None)
            return rep.verdict(False, "", "not found")
        hs, color = got
        rep.set("result", {"factors": [list(h) for h in hs], "color": color})
        return rep.verdict(True, f"color {color} on {[list(h) for h in hs]}", "")
    if verb == "important":
        got = ramsey.important_coordinates(F, sizes)
        if got is None:
            rep.set("result", None)
            return rep.verdict(False, "", "not found")
        hs, I = got
        rep.set("result", {"factors": [list(h) for h in hs], "coordinates": list(I)})
        return rep.verdict(True, f"important coordinates {list(I)}", "")
    raise AssertionError(verb)


def _handle_prikry(args) -> Report:
    verb = args.verb
    rep = Report(f"ordbench.prikry.{verb}/1")
    if verb == "validate":
        t = io.tree_from_json(_load_json_arg(args.a))
        u = io.structure_from_json(_load_json_arg(args.structure))
        violations = prikry.validate_tree(t, u)
        rep.set("violations", violations)
        for v in violations:
            rep.lines.append(v)
        return rep.verdict(not violations, "ok", f"{len(violations)} violation(s)")
    if verb == "leq":
        u = io.structure_from_json(_load_json_arg(args.structure))
        s = io.tree_from_json(_load_json_arg(args.a))
        t = io.tree_from_json(_load_json_arg(args.b))
        ok = (
            prikry.leq_tree_star(s, t, u)
            if args.star
            else prikry.leq_tree(s, t, u)
        )
        rep.set("result", ok)
        return rep.verdict(ok, "extends", "does not extend")
    if verb == "normalize":
        u = io.structure_from_json(_load_json_arg(args.structure))
        t = io.tree_from_json(_load_json_arg(args.a))
        out = prikry.normalize_dense(t, u)
        return rep.set("result", io.tree_to_json(out), f"depth {out.depth} tree")
    if verb == "validate-seq":
        u = io.structure_from_json(_load_json_arg(args.structure))
        trunk = tuple(int(x) for x in args.trunk.split(",")) if args.trunk else ()
        doc = _load_json_arg(args.a)
        if args.variant == "single":
            sets = set(doc)
        else:
            sets = {int(k): set(v) for k, v in doc.items()}
        violations = prikry.validate_sequence_condition(trunk, sets, u, args.variant)
        rep.set("violations", violations)
        for v in violations:
            rep.lines.append(v)
        return rep.verdict(not violations, "ok", f"{len(violations)} violation(s)")
    if verb == "diag":
        u = io.structure_from_json(_load_json_arg(args.structure))
        fam = {int(k): set(v) for k, v in _load_json_arg(args.a).items()}
        out = prikry.modified_diag(u, fam, int(args.k))
        return rep.set("result", sorted(out), str(sorted(out)))
    if verb == "limit-member":
        u = io.structure_from_json(_load_json_arg(args.structure))
        X = [tuple(t) for t in _load_json_arg(args.a)]
        ok = prikry.limit_ultrafilter_member(u, X, int(args.n))
        rep.set("result", ok)
        return rep.verdict(ok, "member", "not a member")
    if verb == "p-point":
        u = io.structure_from_json(_load_json_arg(args.structure))
        node = tuple(int(x) for x in args.node.split(",")) if args.node else ()
        family = [
            {int(k): v for k, v in table.items()}
            for table in _load_json_arg(args.a)
        ]
        ok = prikry.is_p_point(u, node, int(args.bound), family)
        rep.set("result", ok)
        return rep.verdict(ok, "p-point on the family", "not a p-point")
    if verb == "derive":
        d = io.derivation_from_json(_load_json_arg(args.a))
        branch = tuple(int(x) for x in args.branch.split(","))
        out = prikry.apply_derivation(d, branch)
        distinct, counts = prikry.derivation_profile(d)
        rep.set("result", list(out), f"sequence {list(out)}")
        rep.set("profile", {"levels": list(distinct), "counts": list(counts)})
        return rep
    if verb == "project":
        u = io.structure_from_json(_load_json_arg(args.structure))
        table = {
            tuple(entry["args"]): tuple(entry["value"])
            if isinstance(entry["value"], list)
            else entry["value"]
            for entry in _load_json_arg(args.fn)
        }
        target = {
            tuple(t) if isinstance(t, list) else t
            for t in _load_json_arg(args.a)
        }
        member = prikry.project_ultrafilter(
            u, lambda *t: table[t], int(args.n)
        )
        ok = member(target)
        rep.set("result", ok)
        return rep.verdict(ok, "member", "not a member")
    raise AssertionError(verb)


HANDLERS = {
    "ord": _handle_ord,
    "set": _handle_set,
    "uni": _handle_uni,
    "cond": _handle_cond,
    "proj": _handle_proj,
    "gen": _handle_gen,
    "ramsey": _handle_ramsey,
    "prikry": _handle_prikry,
}


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ordbench", description=__doc__)
    top.add_argument("--machine", action="store_true", help="emit one JSON document")
    top.add_argument(
        "--self-test", action="store_true", help="run a quick deterministic sweep"
    )
    groups = top.add_subparsers(dest="group")

    def sub(g, verb, *names, **flags):
        sp = g.add_parser(verb)
        sp.set_defaults(verb=verb)
        for n in names:
            sp.add_argument(n)
        for n, kw in flags.items():
            flag = "--index" if n == "index_set" else f"--{n.replace('_', '-')}"
            sp.add_argument(flag, **kw)
        return sp

    g = groups.add_parser("ord").add_subparsers(dest="verb")
    for v in ("add", "diff", "cmp"):
        sub(g, v, "a", "b")
    for v in ("olimit", "classify", "wpow"):
        sub(g, v, "a")

    g = groups.add_parser("set").add_subparsers(dest="verb")
    for v in ("union", "inter", "diff", "member", "restrict-below", "restrict-above"):
        sub(g, v, "a", "b")
    sub(g, "stratum", "a", universe={"required": True}, below={"default": None})

    g = groups.add_parser("uni").add_subparsers(dest="verb")
    sub(g, "check", "universe")
    sub(g, "large", "universe", "b_set", "beta", "xi")
    sub(g, "star", "universe", "b_set", "beta")
    sub(g, "stratify", "universe", "b_set", "beta")

    g = groups.add_parser("cond").add_subparsers(dest="verb")
    sub(g, "validate", "c1")
    sub(g, "leq", "c1", "c2", star={"action": "store_true"})
    sub(g, "gamma", "c1", "index")
    sub(g, "type-of", "c1", "alphas")
    sub(g, "extend", "c1", "alphas", shrink={"default": None})
    sub(g, "find-type", "c1", "c2")
    sub(g, "unveil", "c1", "gamma")
    sub(g, "split", "c1", "index")
    sub(g, "join", "c1", c2={"default": None})

    g = groups.add_parser("proj").add_subparsers(dest="verb")
    sub(g, "index", "c1", "index", index_set={"required": True, "dest": "index_set"})
    sub(g, "pi", "c1", index_set={"required": True, "dest": "index_set"})
    sub(g, "validate", "c1")
    sub(g, "leq", "c1", "c2", star={"action": "store_true"})
    sub(g, "in-d", "c1", index_set={"required": True, "dest": "index_set"})
    sub(g, "densify", "c1", index_set={"required": True, "dest": "index_set"})
    sub(g, "onto", "c1")
    sub(g, "lift", "c1", "c2")
    sub(g, "check-correct", "c1", index_set={"required": True, "dest": "index_set"})
    sub(g, "refine-clubs", "c1", roots={"required": True})
    sub(g, "quotient-member", "c1", index_set={"required": True, "dest": "index_set"})

    g = groups.add_parser("gen").add_subparsers(dest="verb")
    sub(g, "in-filter", "c1", restrict={"default": None})
    sub(g, "otp", "lambda0", "a", "b", restrict={"default": None})
    sub(g, "compatible", "c1", "c2", restrict={"default": None})

    g = groups.add_parser("ramsey").add_subparsers(dest="verb")
    sub(g, "homog", "fn", min_sizes={"required": True})
    sub(g, "important", "fn", min_sizes={"required": True})

    g = groups.add_parser("prikry").add_subparsers(dest="verb")
    sub(g, "validate", "a", structure={"required": True})
    sub(g, "leq", "a", "b", structure={"required": True}, star={"action": "store_true"})
    sub(g, "normalize", "a", structure={"required": True})
    sub(
        g,
        "validate-seq",
        "a",
        structure={"required": True},
        trunk={"default": ""},
        variant={"default": "omega_sequence"},
    )
    sub(g, "diag", "a", "k", structure={"required": True})
    sub(g, "limit-member", "a", "n", structure={"required": True})
    sub(g, "p-point", "a", "bound", structure={"required": True}, node={"default": ""})
    sub(g, "derive", "a", "branch")
    sub(g, "project", "fn", "a", "n", structure={"required": True})
    return top


def self_test() -> int:
    """Quick deterministic sweep; seeded by WORKBENCH_SEED."""
    import random

    from .generic import CanonicalSequence, in_filter
    from .magidor import Block, MagidorCondition, extend_minimal, find_type, leq

    seed = int(os.environ.get("WORKBENCH_SEED", "7"))
    rng = random.Random(seed)
    u = ToyUniverse(parse_ordinal("w^2"), parse_ordinal("w"))
    p = MagidorCondition(u, (Block(u.lambda0, u.ground()),))
    seq = CanonicalSequence(u.lambda0)
    for _ in range(20):
        levels = tuple(
            parse_ordinal(str(rng.randrange(2))) for _ in range(rng.randrange(1, 3))
        )
        try:
            q, alphas = extend_minimal(
                p, ExtensionType(((),) * (len(p.blocks) - 1) + (levels,))
            )
        except WorkbenchError:
            continue
        assert leq(p, q) and in_filter(q, seq)
        x, got = find_type(p, q)
        assert got == alphas
        p = q if rng.random() < 0.5 else p
    print(f"self-test ok (seed {seed})")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.self_test:
        return self_test()
    if not getattr(args, "group", None) or not getattr(args, "verb", None):
        parser.print_help()
        return 2
    _ECHO.clear()
    try:
        rep = HANDLERS[args.group](args)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 2
    except WorkbenchError as err:
        print(f"error: {err.__class__.__name__}: {err}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return 2
    if args.machine and _ECHO:
        rep.payload["inputs"] = list(_ECHO)
    return _emit(rep, args.machine)


if __name__ == "__main__":
    sys.exit(main())
