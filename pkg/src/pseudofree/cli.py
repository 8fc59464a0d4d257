"""Command-line front end.

Group specs: a path to a group JSON file, or shorthand joined by 'x' for
direct products:

  Zn          cyclic of order n
  Dn          dihedral of order 2n
  Dstarm, Q8  binary dihedral of order 4m (Q8 = Dstar2)
  Tet|A4, Oct|S4, Icos|A5
  Zm:Zk       Z_m x| Z_k, the generator acting by the unit of largest order
              whose k-th power is 1; Zm:Zk[u] fixes the unit u

Examples: D4, Dstar6, Z12xZ2, Z5:Z4, Z3:Z4[2]xZ5.

Exit codes: 0 success (a rejected tuple is still a success), 1 malformed
input, 2 capacity exceeded.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import random
import re
import sys

import numpy as np

from . import actions as ac
from . import classification as cl
from . import cohomology as co
from . import groups as gr
from .groups import CapacityError, FiniteGroup, GroupError
from .isometry import AmbiguityError

EXIT_OK, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers

_TOKEN = re.compile(r"^(?:Z(\d+):Z(\d+)(?:\[(\d+)\])?|Z(\d+)|Dstar(\d+)|D(\d+)|Q8|Tet|A4|Oct|S4|Icos|A5)$")


def _default_unit(m: int, k: int) -> int:
    best, best_order = 1, 1
    for u in range(1, m):
        if math.gcd(u, m) != 1 or pow(u, k, m) != 1 % m:
            continue
        order = next(j for j in range(1, k + 1) if pow(u, j, m) == 1 % m)
        if order > best_order:
            best, best_order = u, order
    return best


def _parse_token(tok: str) -> FiniteGroup:
    mt = _TOKEN.match(tok)
    if not mt:
        raise InputError(f"cannot parse group token {tok!r}")
    m, k, u, zn, ds, dn = mt.groups()
    if m:
        m, k = int(m), int(k)
        unit = int(u) if u else _default_unit(m, k)
        return gr.cyclic_semidirect(m, k, unit, f"Z{m}:Z{k}[{unit}]")
    if zn:
        return gr.cyclic(int(zn))
    if ds:
        return gr.binary_dihedral(int(ds))
    if dn:
        return gr.dihedral(int(dn))
    return {"Q8": lambda: gr.binary_dihedral(2), "Tet": gr.tetrahedral, "A4": gr.tetrahedral,
            "Oct": gr.octahedral, "S4": gr.octahedral, "Icos": gr.icosahedral,
            "A5": gr.icosahedral}[tok]()


def parse_group(spec: str) -> FiniteGroup:
    if os.path.isfile(spec):
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
        if "abstract_group" in data:
            data = data["abstract_group"]
        return FiniteGroup.from_json(data, os.path.basename(spec))
    if spec.lstrip().startswith("{"):
        return FiniteGroup.from_json(json.loads(spec))
    parts = spec.split("x")
    if not all(parts):
        raise InputError(f"cannot parse group spec {spec!r}")
    G = _parse_token(parts[0])
    for p in parts[1:]:
        G = gr.direct_product(G, _parse_token(p))
    return G


def parse_params(text: str | None) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise InputError(f"parameter {item!r} is not of the form key=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


_KLEIN = {"1": 0, "a": 1, "b": 2, "ab": 3}


def _phi_from_assignment(G: FiniteGroup, params: dict) -> np.ndarray:
    labels = {l: i for l, i in G.generators}
    gens, vals = [], []
    for l, v in params.items():
        if l not in labels:
            raise InputError(f"unknown generator {l!r}; generators are {sorted(labels)}")
        if v not in _KLEIN:
            raise InputError(f"image {v!r} must be one of 1, a, b, ab")
        gens.append(labels[l])
        vals.append(_KLEIN[v])
    for l, i in G.generators:
        if l not in params:
            gens.append(i)
            vals.append(0)
    H = gr.direct_product(gr.cyclic(2), gr.cyclic(2))   # index 2 x + y matches the Klein code
    f = gr.extend_partial(G, H, gens, vals, injective=False)
    if f is None or (f < 0).any():
        raise InputError("generator images do not define a homomorphism")
    return f


def parse_phis(G: FiniteGroup, text: str) -> list[np.ndarray]:
    """--phi: trivial | image=<a|b|ab|full|any> | gen=val,... | JSON list."""
    text = text.strip()
    if text in ("trivial", "1"):
        return [np.zeros(G.order, dtype=np.int64)]
    if text.startswith("["):
        return [np.array(json.loads(text), dtype=np.int64)]
    if text.startswith("image="):
        want = text.split("=", 1)[1]
        images = {"a": {0, 1}, "b": {0, 2}, "ab": {0, 3}, "full": {0, 1, 2, 3}, "trivial": {0}}
        homs = cl.klein_homs(G)
        if want == "any":
            return homs
        if want not in images:
            raise InputError(f"unknown image {want!r}")
        return [h for h in homs if set(h.tolist()) == images[want]]
    return [_phi_from_assignment(G, parse_params(text))]


def parse_coeff(G: FiniteGroup, text: str) -> co.GModule:
    if text == "Z":
        return co.trivial_module(G)
    mt = re.fullmatch(r"Z(\d+)", text)
    if mt:
        return co.trivial_module(G, int(mt.group(1)))
    mt = re.fullmatch(r"twisted:(\d+):(.+)", text)
    if mt:
        m = int(mt.group(1))
        acts = {k: int(v) for k, v in parse_params(mt.group(2)).items()}
        return co.module_from_generator_action(G, m, acts)
    raise InputError(f"cannot parse coefficients {text!r} (use Z, Zm or twisted:m:gen=u,...)")


def parse_subgroup(G: FiniteGroup, text: str) -> list[int]:
    labels = {l: i for l, i in G.generators}
    elems = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok in labels:
            elems.append(labels[tok])
        elif tok.isdigit() and int(tok) < G.order:
            elems.append(int(tok))
        else:
            raise InputError(f"subgroup generator {tok!r} is neither a label nor an element index")
    return gr.closure(G, elems)


# ---------------------------------------------------------------- output

def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=str)


def _emit(args, payload, text: str | None = None, lines: list | None = None) -> None:
    if args.quiet:
        return
    if args.format == "text" and text is not None:
        out = text
    elif lines is not None and args.format == "json":
        out = "\n".join(_dump(x) for x in lines)
    else:
        out = json.dumps(payload, sort_keys=True, indent=2, default=str)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)


# ---------------------------------------------------------------- subcommands

def cmd_classify(args) -> int:
    G = parse_group(args.group)
    verdicts = []
    for phi in parse_phis(G, args.phi):
        try:
            t = cl.ClassificationTuple(G, phi)
        except GroupError as e:
            raise InputError(str(e))
        v = cl.decide(t)
        verdicts.append({"group": G.name, "order": G.order, "phi": t.phi.tolist(),
                         "image": list(t.image), "relabeled": t.relabeled} | v.to_json())
    text = "\n".join(f"{d['group']} image <{','.join(d['image'])}>: {d['verdict']}"
                     + (f" ({d['reason']})" if d["reason"] else "") for d in verdicts)
    if not verdicts:
        text = "no homomorphism with the requested image"
    _emit(args, verdicts, text or "", lines=verdicts)
    return EXIT_OK


def cmd_build(args) -> int:
    params = parse_params(args.params)
    spec = ac.build(args.family, **params)
    data = spec.to_json()
    _emit(args, data, f"{spec.family}: {len(spec.generators)} generators, "
                      f"abstract group {spec.abstract_group.name} of order {spec.abstract_group.order}")
    return EXIT_OK


def cmd_verify(args) -> int:
    with open(args.action, encoding="utf-8") as fh:
        spec = ac.ActionSpec.from_json(json.load(fh))
    rep = ac.verify(spec, args.max_order, args.tolerance)
    _emit(args, rep.to_json(), rep.to_text())
    return EXIT_OK


def cmd_enumerate(args) -> int:
    entries = cl.enumerate_big_list(args.max_order)
    rows = [e.to_json() for e in entries]
    text = "\n".join(f"{r['family']:3s} {r['order']:4d} {r['group']:28s} <{','.join(r['image'])}>  "
                     f"{r['builder']} {r['builder_params']}" for r in rows)
    _emit(args, rows, text, lines=rows)
    return EXIT_OK


def cmd_rh(args) -> int:
    res = cl.enumerate_rh(args.chi, args.max_n)
    by_family = {}
    for d in res.solutions:
        by_family.setdefault(d.family or "exceptional", []).append({"N": d.N, "tuple": list(d.tuple)})
    data = res.to_json() | {"instances": by_family}
    lines = [f"chi = {res.chi}, N <= {res.max_N}: {len(res.solutions)} solutions, "
             f"{len(res.families)} infinite families, {len(res.exceptional)} exceptional"]
    for f in res.families:
        lines.append(f"  {f.label:24s} {res.family_hits.get(f.label, 0)} instances")
    for d in res.exceptional[:200]:
        lines.append(f"  exceptional N={d.N}: {d.tuple}")
    if len(res.exceptional) > 200:
        lines.append(f"  ... {len(res.exceptional) - 200} more")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_cohomology(args) -> int:
    G = parse_group(args.group)
    if args.restrict == "all":
        if args.coeff != "Z" or args.degree != 2 or G.order != 8 or not gr.isomorphic(G, gr.dihedral(4)):
            raise InputError("--restrict all is only defined for D4 with Z coefficients in degree 2")
        table = co.d4_restriction_table()
        D4 = gr.dihedral(4)
        H = co.cohomology(D4, co.trivial_module(D4), 2)
        lines = [f"H^2(D4; Z) = {H.describe()}", f"{'':12s} {'e^2':>6s} {'f^2':>6s}"]
        for row in co.D4_SUBGROUP_ORDER:
            lines.append(f"{row:12s} {table[row]['e^2']:>6s} {table[row]['f^2']:>6s}")
        _emit(args, {"H2": H.to_json(), "restriction": table}, "\n".join(lines))
        return EXIT_OK
    M = parse_coeff(G, args.coeff)
    H = co.cohomology(G, M, args.degree, args.route)
    data = {"group": G.name, "order": G.order, "coefficients": args.coeff,
            "cohomology": H.to_json() | {"route": H.route}}
    text = f"H^{args.degree}({G.name}; {args.coeff}) = {H.describe()}"
    if args.restrict:
        sub = parse_subgroup(G, args.restrict)
        res = co.restriction(G, sub, M, args.degree, args.route)
        data["restriction"] = {"subgroup": sub, "target": res.target.to_json(),
                               "matrix": [[int(x) for x in row] for row in res.matrix],
                               "zero": res.is_zero(), "isomorphism": res.is_isomorphism()}
        text += (f"\nrestriction to subgroup of order {len(sub)}: target {res.target.describe()}, "
                 f"zero={res.is_zero()}, isomorphism={res.is_isomorphism()}")
    _emit(args, data, text)
    return EXIT_OK


def cmd_crosscheck(args) -> int:
    if args.sample:
        rng = random.Random(args.seed)
        entries = cl.enumerate_big_list(args.max_order)
        picked = sorted(rng.sample(range(len(entries)), min(args.sample, len(entries))))
        rows = []
        for i in picked:
            e = entries[i]
            rep = ac.verify(e.spec(), max(512, args.max_order))
            W = ac.w_closure(list(e.spec().generators), max(512, args.max_order))
            v = cl.decide(cl.ClassificationTuple.from_wgroup(W))
            rows.append({"entry": e.to_json(), "verify_passed": rep.passed, "verdict": v.to_json()})
        ok = all(r["verify_passed"] and r["verdict"]["verdict"] == cl.ADMITS for r in rows)
        text = f"sampled {len(rows)} entries (seed {args.seed}): {'OK' if ok else 'FAILURES'}"
        _emit(args, {"seed": args.seed, "ok": ok, "rows": rows}, text)
        return EXIT_OK
    rep = cl.cross_check(args.max_order)
    _emit(args, rep.to_json(), rep.to_text())
    return EXIT_OK


# ---------------------------------------------------------------- entry point

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--output", help="write the result to this file instead of stdout")

    p = _Parser(prog="pseudofree", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("classify", parents=[common], help="decide realizability of (G, phi)")
    s.add_argument("--group", required=True)
    s.add_argument("--phi", default="trivial",
                   help="trivial | image=a|b|ab|full|any | gen=val,... | JSON list of Klein indices")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("build", parents=[common], help="build a linear action")
    s.add_argument("--family", required=True, choices=sorted(ac.BUILDERS))
    s.add_argument("--params", default="")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("verify", parents=[common], help="verify an action file")
    s.add_argument("--action", required=True)
    s.add_argument("--max-order", type=int, default=ac.DEFAULT_MAX_ORDER)
    s.add_argument("--tolerance", type=float, default=ac.MATCH_TOL)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("enumerate", parents=[common], help="list realizable groups")
    s.add_argument("--max-order", type=int, default=240)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("rh", parents=[common], help="Riemann-Hurwitz data")
    s.add_argument("--chi", type=int, choices=(2, 4), required=True)
    s.add_argument("--max-n", type=int, required=True)
    s.set_defaults(func=cmd_rh)

    s = sub.add_parser("cohomology", parents=[common], help="group cohomology")
    s.add_argument("--group", required=True)
    s.add_argument("--coeff", default="Z")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--restrict", help="'all' (D4 table) or subgroup generators as labels/indices")
    s.add_argument("--route", choices=("auto", "bar", "resolution"), default="auto")
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("crosscheck", parents=[common], help="builders against the decision procedure")
    s.add_argument("--max-order", type=int, default=64)
    s.add_argument("--sample", type=int, default=0, help="check a random sample of this size")
    s.set_defaults(func=cmd_crosscheck)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as e:
        print(f"capacity exceeded: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InputError, GroupError, AmbiguityError, OSError, json.JSONDecodeError, KeyError,
            ValueError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
