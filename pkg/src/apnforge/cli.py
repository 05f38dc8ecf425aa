"""Command-line front end.

Exit status: 0 on success, 2 on user error (one-line diagnostic on stderr),
3 when a search runs out of its time budget.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, field as dc_field

from .autsearch import full_automorphism_group
from .errors import ApnForgeError, BadParams, SearchTimeout
from .family import FamilyParams, family_report, gold_comparison, valid_gold_r
from .formats import format_code, format_perm, parse_code, parse_function, read_perms
from .funcspace import (
    FunctionTable,
    PolySpec,
    algebraic_degree,
    builtin_function,
    differential_uniformity,
    evaluate,
)
from .gf2n import FieldSpec, field_from_designation, make_field, poly_str, subfield
from .lincode import BinaryCode, build_code, code_equal, dual_min_distance, ea_witness, function_from_code
from .permgrp import PermGroup, is_automorphism, translation_generators
from .subgroups import conjugating_element, regular_elem_abelian_subgroups

EXIT_OK, EXIT_USER, EXIT_TIMEOUT = 0, 2, 3

_DEFAULT_N = {"dillon_h1": 6, "dillon_h2": 6, "dillon_h3": 8}

# Tags attached to result lines in text mode.
TAG_GOLD_APN = "Gold APN: x^(2^r+1) is APN when gcd(r,n)=1"
TAG_DUAL6 = "APN iff the dual code has minimum distance 6"
TAG_FAMILY_APN = "trinomial family is APN"
TAG_FAMILY_DIM = "trinomial family code dimension 4k+1"
TAG_U = "subgroup U of order 2^(2k)*3*(2^k-1)"
TAG_DELTA = "family automorphism delta of order 3k"
TAG_C_INDEP = "family code does not depend on c"
TAG_INEQ = "family members are not CCZ-equivalent to Gold functions"
TAG_FAMILY_AUT = "full group order 2^(2k)*3k*(2^k-1) for s=1"
TAG_TRANSLATIONS = "quadratic codes are invariant under translations"


# --- reports ------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


@dataclass
class Report:
    """Lines of key=value pairs, optionally tagged, plus text-only notes.

    kv mode prints only the pairs, one per line, so it carries a subset of
    what text mode shows.
    """

    lines: list = dc_field(default_factory=list)

    def add(self, *pairs, tag: str | None = None):
        self.lines.append(("pairs", list(pairs), tag))

    def note(self, text: str):
        self.lines.append(("note", text, None))

    def render(self, mode: str) -> str:
        out = []
        for kind, body, tag in self.lines:
            if kind == "note":
                if mode == "text":
                    out.append(body)
                continue
            if mode == "kv":
                out.extend(f"{k}={_fmt(v)}" for k, v in body)
            else:
                line = " ".join(f"{k}={_fmt(v)}" for k, v in body)
                out.append(f"{line}  [{tag}]" if tag else line)
        return "\n".join(out)


# --- inputs -----------------------------------------------------------------------------


def _hex(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise BadParams(f"not an integer: {text!r}") from None


def _field_arg(args, n_default: int | None = None) -> FieldSpec:
    if getattr(args, "field", None):
        return field_from_designation(args.field)
    if n_default is None:
        raise BadParams("--field is required (e.g. --field gf2e6)")
    return make_field(n_default)


def _builtin(name: str, args) -> PolySpec:
    if name == "family":
        if args.k is None:
            raise BadParams("family needs --k")
        field = _field_arg(args, 2 * args.k)
        if field.n != 2 * args.k:
            raise BadParams(f"family with k={args.k} needs n={2 * args.k}, field has n={field.n}")
        params = {"s": args.s, "b": None if args.b is None else _hex(args.b),
                  "c": None if args.c is None else _hex(args.c)}
        return builtin_function(name, field, params)
    field = _field_arg(args, _DEFAULT_N.get(name))
    return builtin_function(name, field, {"r": args.r})


def _parse_descriptor(text: str, field: str | None) -> PolySpec:
    """'gold,r=5' or 'family,k=3,s=5' style descriptors for second operands."""
    name, *opts = text.split(",")
    ns = argparse.Namespace(field=field, r=1, k=None, s=1, b=None, c=None)
    for o in opts:
        key, _, val = o.partition("=")
        if key not in {"field", "r", "k", "s", "b", "c"} or not val:
            raise BadParams(f"bad descriptor option {o!r}")
        setattr(ns, key, val if key in {"field", "b", "c"} else _hex(val))
    return _builtin(name, ns)


def _load_path(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise BadParams(f"cannot read {path}: {e.strerror}") from None
    head = next((ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")), "")
    return parse_code(text) if head.startswith("binarycode") else parse_function(text)


def _load_primary(args):
    """PolySpec or BinaryCode from --builtin or a positional path."""
    if args.builtin and args.input:
        raise BadParams("give either --builtin or an input file, not both")
    if args.builtin:
        return _builtin(args.builtin, args)
    if args.input:
        return _load_path(args.input)
    raise BadParams("no input: use --builtin NAME or an input file")


def _load_other(text: str, field: str | None):
    if os.path.exists(text):
        return _load_path(text)
    return _parse_descriptor(text, field)


def _as_function(obj) -> tuple[FunctionTable, PolySpec | None]:
    if isinstance(obj, PolySpec):
        return evaluate(obj), obj
    if isinstance(obj, BinaryCode):
        raise BadParams("this command needs a function, not a code dump")
    return obj, None


def _as_code(obj) -> BinaryCode:
    if isinstance(obj, BinaryCode):
        return obj
    return build_code(_as_function(obj)[0])


def _describe(rep: Report, obj):
    if isinstance(obj, PolySpec):
        rep.note(f"function: {obj}  over {obj.field.designation}")
        if "u" in obj.meta:
            rep.add(("primitive_u", f"{obj.meta['u']:#x}"))


# --- commands ---------------------------------------------------------------------------


def cmd_fn(args) -> Report:
    obj = _load_primary(args)
    f, poly = _as_function(obj)
    rep = Report()
    _describe(rep, poly)
    name = poly.meta.get("name") if poly is not None else None
    if args.action == "eval":
        if args.x is not None:
            x = _hex(args.x)
            if not 0 <= x < f.field.size:
                raise BadParams(f"x={args.x} outside the field")
            rep.add(("x", f"{x:#x}"), ("f", f"{f(x):#x}"))
        else:
            rep.add(("values", [f"{v:#x}" for v in f.values.tolist()]))
    elif args.action in ("du", "apn"):
        du = differential_uniformity(f, threads=args.threads)
        tag = {"gold": TAG_GOLD_APN, "family": TAG_FAMILY_APN}.get(name)
        if args.action == "du":
            rep.add(("differential_uniformity", du), ("apn", du == 2), tag=tag)
        else:
            rep.add(("apn", du == 2), tag=tag)
    elif args.action == "degree":
        d = algebraic_degree(f)
        rep.add(("algebraic_degree", d), ("quadratic", d <= 2))
    return rep


def cmd_code(args) -> Report:
    obj = _load_primary(args)
    c = _as_code(obj)
    rep = Report()
    _describe(rep, obj)
    name = obj.meta.get("name") if isinstance(obj, PolySpec) else None
    if args.action == "build":
        text = format_code(c)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
            rep.add(("written", args.output), ("dimension", c.dimension))
        else:
            rep.note(text.rstrip("\n"))
            rep.add(("dimension", c.dimension))
    elif args.action == "dim":
        rep.add(("dimension", c.dimension), tag=TAG_FAMILY_DIM if name == "family" else None)
    elif args.action == "dualmin":
        d = dual_min_distance(c, args.cap)
        rep.add(("dual_min_distance", d if d is not None else f">{args.cap}"), tag=TAG_DUAL6)
    elif args.action == "recover-function":
        f = function_from_code(c)
        rep.note(f"recovered function table over {f.field.designation} (up to EA-equivalence)")
        rep.add(("values", [f"{v:#x}" for v in f.values.tolist()]))
        rep.add(("code_fixed_point", code_equal(build_code(f), c)))
    elif args.action in ("equal", "witness"):
        if not args.other:
            raise BadParams(f"code {args.action} needs --other FILE|DESCRIPTOR")
        d = _as_code(_load_other(args.other, args.field or c.field.designation))
        if args.action == "equal":
            rep.add(("codes_equal", code_equal(c, d)))
        else:
            w = ea_witness(c, d)
            rep.note("B1 rows:")
            for row in w.B1:
                rep.note("  " + "".join(map(str, row.tolist())))
            rep.note("B rows:")
            for row in w.B:
                rep.note("  " + "".join(map(str, row.tolist())))
            rep.add(("t", "".join(map(str, w.t.tolist()))), ("verified", w.verify(c, d)))
    return rep


def _automorphism_group(args, c: BinaryCode) -> PermGroup:
    if getattr(args, "gens", None):
        return PermGroup(read_perms(args.gens, c.field), c.length, field=c.field)
    return full_automorphism_group(c, budget=args.budget)


def cmd_aut(args) -> Report:
    rep = Report()
    if args.action == "order" and args.gens and not (args.builtin or args.input):
        perms = read_perms(args.gens)
        if not perms:
            raise BadParams("no permutations in generator file")
        rep.add(("group_order", PermGroup(perms).order))
        return rep
    obj = _load_primary(args)
    c = _as_code(obj)
    _describe(rep, obj)
    name = obj.meta.get("name") if isinstance(obj, PolySpec) else None
    if args.action == "verify":
        if args.perm:
            perms = read_perms(args.perm, c.field)
        else:
            perms = translation_generators(c.field)
            rep.note("checking the translation generators x -> x + e_i")
        results = [is_automorphism(c, p) for p in perms]
        tag = TAG_TRANSLATIONS if not args.perm else None
        rep.add(("checked", len(results)), ("all_automorphisms", all(results)), tag=tag)
        return rep
    if args.action == "order":
        if not args.gens:
            raise BadParams("aut order needs --gens FILE")
        perms = read_perms(args.gens, c.field)
        bad = sum(not is_automorphism(c, p) for p in perms)
        rep.add(("group_order", PermGroup(perms, c.length, field=c.field).order),
                ("non_automorphisms", bad))
        return rep
    if args.action == "full":
        t0 = time.monotonic()
        G = full_automorphism_group(c, budget=args.budget)
        tag = TAG_FAMILY_AUT if name == "family" and obj.meta.get("s") == 1 else None
        rep.add(("aut_order", G.order), tag=tag)
        rep.add(("elapsed_s", f"{time.monotonic() - t0:.2f}"))
        if args.emit_gens:
            for g in G.generators:
                rep.note(format_perm(g))
        return rep
    G = _automorphism_group(args, c)
    subs = regular_elem_abelian_subgroups(G)
    trans = PermGroup(translation_generators(c.field), c.length)
    has_trans = any(S == trans for S in subs)
    if args.action == "regular-subgroups":
        rep.add(("aut_order", G.order), ("regular_elem_abelian", len(subs)),
                ("translations_among_them", has_trans))
        return rep
    # conjugate: every subgroup against the first one
    ok = True
    for i, S in enumerate(subs[1:], 1):
        h = conjugating_element(G, subs[0], S)
        ok &= h is not None
        rep.note(f"subgroup {i}: " + ("conjugate via " + format_perm(h) if h is not None else "not conjugate"))
    rep.add(("regular_elem_abelian", len(subs)), ("pairwise_conjugate", ok))
    return rep


def _family_params(args) -> FamilyParams:
    if args.k is None:
        raise BadParams("--k is required")
    field = _field_arg(args, 2 * args.k)
    return FamilyParams.make(args.k, args.s, None if args.b is None else _hex(args.b),
                             None if args.c is None else _hex(args.c), field)


def _certificate_lines(rep: Report, cert):
    r = cert.gold_r
    rep.add((f"gold_r{r}_verdict", cert.verdict.value), (f"gold_r{r}_codes_equal", cert.codes_equal),
            (f"gold_r{r}_quadratic", list(cert.quadratic_flags)),
            (f"gold_r{r}_dims", list(cert.code_dims)), tag=TAG_INEQ)
    for step in cert.reasoning:
        rep.note(f"  because {step}")


def cmd_family(args) -> Report:
    p = _family_params(args)
    rep = Report()
    rep.note(f"family k={p.k} s={p.s} b={p.b:#x} c={p.c:#x} over {p.field.designation}")
    if args.action == "gold-compare":
        rs = [args.r] if args.r is not None else valid_gold_r(2 * p.k)
        for r in rs:
            _certificate_lines(rep, gold_comparison(p, r))
        return rep
    info = family_report(p, b_variants=args.b_variants)
    rep.add(("k", p.k), ("s", p.s), ("b", f"{p.b:#x}"), ("c", f"{p.c:#x}"))
    rep.add(("apn", info["apn"]), tag=TAG_FAMILY_APN)
    rep.add(("code_dim", info["code_dim"]), tag=TAG_FAMILY_DIM)
    rep.add(("u_order", info["u_order"]), ("u_nonabelian", info["u_nonabelian"]), tag=TAG_U)
    if "delta_order" in info:
        rep.add(("delta_order", info["delta_order"]), tag=TAG_DELTA)
    rep.add(("c_independence", info["c_independence"]),
            ("c_values_checked", info["c_independence_checked"]), tag=TAG_C_INDEP)
    for cert in info["gold"].values():
        _certificate_lines(rep, cert)
    for b, eq in info.get("b_variation_equal", {}).items():
        rep.add((f"b_{b:#x}_same_code", eq))
    return rep


def cmd_field(args) -> Report:
    F = _field_arg(args)
    rep = Report()
    rep.add(("designation", F.designation), ("n", F.n), ("size", F.size))
    rep.note(f"modulus: {poly_str(F.modulus)}")
    rep.add(("generator", f"{F.generator:#x}"))
    if F.n % 2 == 0:
        L = subfield(F)
        rep.add(("subfield_k", L.k), ("subfield_generator", f"{L.primitive_element():#x}"))
    return rep


# --- parser -----------------------------------------------------------------------------


def _add_source(p: argparse.ArgumentParser):
    p.add_argument("input", nargs="?", help="function file or code dump")
    p.add_argument("--builtin", help="gold, family, dillon_h1, dillon_h2 or dillon_h3")
    p.add_argument("--field", help="field designation, e.g. gf2e6 or gf2e6:0x5b")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--k", type=int)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--b", help="family b as hex, default smallest primitive element")
    p.add_argument("--c", help="family c as hex, default smallest element outside L")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="apnforge", description=__doc__.splitlines()[0])
    ap.add_argument("--format", choices=("text", "kv"), default="text")
    ap.add_argument("--threads", type=_positive, default=1)
    ap.add_argument("--budget", type=_positive, default=None, help="time budget in seconds")
    sub = ap.add_subparsers(dest="command", required=True)

    fn = sub.add_parser("fn", help="function properties")
    fn.add_argument("action", choices=("eval", "du", "apn", "degree"))
    _add_source(fn)
    fn.add_argument("--x", help="evaluate at a single point")
    fn.set_defaults(run=cmd_fn)

    code = sub.add_parser("code", help="the code C_f")
    code.add_argument("action", choices=("build", "dim", "equal", "dualmin", "recover-function", "witness"))
    _add_source(code)
    code.add_argument("--other", help="second operand: file or descriptor like 'gold,r=5'")
    code.add_argument("--cap", type=int, default=6)
    code.add_argument("-o", "--output")
    code.set_defaults(run=cmd_code)

    aut = sub.add_parser("aut", help="code automorphisms")
    aut.add_argument("action", choices=("verify", "order", "full", "regular-subgroups", "conjugate"))
    _add_source(aut)
    aut.add_argument("--perm", help="permutation file to verify")
    aut.add_argument("--gens", help="generator file")
    aut.add_argument("--emit-gens", action="store_true")
    aut.set_defaults(run=cmd_aut)

    fam = sub.add_parser("family", help="the trinomial family")
    fam.add_argument("action", choices=("report", "gold-compare"))
    fam.add_argument("--k", type=int)
    fam.add_argument("--s", type=int, default=1)
    fam.add_argument("--b")
    fam.add_argument("--c")
    fam.add_argument("--r", type=int)
    fam.add_argument("--field")
    fam.add_argument("--b-variants", type=int, default=0)
    fam.set_defaults(run=cmd_family)

    fld = sub.add_parser("field", help="field information")
    fld.add_argument("action", choices=("info",))
    fld.add_argument("--field", required=True)
    fld.set_defaults(run=cmd_field)

    # global options are also accepted after the subcommand
    for p in (fn, code, aut, fam, fld):
        p.add_argument("--format", choices=("text", "kv"), default=argparse.SUPPRESS)
        p.add_argument("--threads", type=_positive, default=argparse.SUPPRESS)
        p.add_argument("--budget", type=_positive, default=argparse.SUPPRESS)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = args.run(args)
    except SearchTimeout as e:
        print(f"timeout: {e}", file=sys.stderr)
        return EXIT_TIMEOUT
    except ApnForgeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USER
    print(rep.render(args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
