"""Command line interface: ``k3mirror <group> <command> [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import linalg
from .catalog import arnold_table, run_verify
from .discform import are_isomorphic, discriminant_form, fqf_negate
from .embed import (
    Embedding,
    find_u_m_summand,
    is_m_admissible,
    nikulin_exists,
    nikulin_unique,
    orthogonal_complement,
    u_m_summand_criterion,
)
from .errors import K3MirrorError
from .fricke import embed_A, embed_Aprime, fricke_counts, fricke_matrix, is_integral, SqrtInt
from .mirror import k3_dual, kummer_wedge_identity, mirror_lattice, mirror_of_polarization, tube_alpha
from .polys import QComplex
from .toric import WeightSystem, analyze
from .zlattice import Lattice, direct_sum, is_even, make_standard, rescale, root_count, signature


class UsageError(Exception):
    pass


def load_lattice(text: str) -> Lattice:
    """A standard name, inline JSON, or a path to a lattice JSON file."""
    text = text.strip()
    if text.startswith("{"):
        return Lattice.from_json(json.loads(text))
    if os.path.isfile(text):
        with open(text) as fh:
            return Lattice.from_json(json.load(fh))
    return make_standard(text)


def parse_vector(text: str):
    try:
        return [int(x) for x in text.replace(" ", "").strip("[]()").split(",") if x != ""]
    except ValueError as exc:
        raise UsageError(f"cannot parse integer vector {text!r}") from exc


def parse_matrix(text: str):
    try:
        M = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse matrix {text!r}") from exc
    return [[int(x) for x in row] for row in M]


def lattice_info(L: Lattice) -> dict:
    out = dict(L.to_json())
    out["rank"] = L.rank
    out["det"] = L.det
    out["even"] = is_even(L)
    if L.det != 0:
        sig = signature(L)
        out["signature"] = [sig.pos, sig.neg]
        if sig.pos == 0 and L.rank <= 24:
            out["roots"] = root_count(L).count
    return out


# ------------------------------------------------------------ handlers


def cmd_lattice(args):
    if args.command == "make":
        return 0, lattice_info(make_standard(args.name))
    if args.command == "sum":
        return 0, lattice_info(direct_sum(*(load_lattice(x) for x in args.parts)))
    if args.command == "rescale":
        return 0, lattice_info(rescale(load_lattice(args.lattice), args.by))
    return 0, lattice_info(load_lattice(args.lattice))


def cmd_disc(args):
    if args.command == "form":
        A = discriminant_form(load_lattice(args.lattice))
        return 0, {"group": A.describe(), "order": A.order, **A.to_json()}
    A, B = discriminant_form(load_lattice(args.first)), discriminant_form(load_lattice(args.second))
    if args.negate:
        B = fqf_negate(B)
    w = are_isomorphic(A, B)
    return 0, {"isomorphic": w is not None, "witness": [list(x) for x in w] if w is not None else None}


def cmd_embed(args):
    if args.command == "complement":
        amb = load_lattice(args.ambient)
        vecs = [parse_vector(v) for v in args.vector]
        E = Embedding.from_vectors(amb, vecs)
        C, emb = orthogonal_complement(E)
        return 0, {"complement": lattice_info(C), "embedding": [list(r) for r in emb.matrix]}
    if args.command == "nikulin":
        M = load_lattice(args.lattice)
        return 0, {"exists": nikulin_exists(M).value, "unique": nikulin_unique(M).value}
    if args.command == "summand":
        S = load_lattice(args.lattice)
        out = {"criterion": u_m_summand_criterion(S, args.m).value}
        explicit = find_u_m_summand(S, args.m)
        out["explicit"] = explicit.splitting if explicit else None
        return 0, out
    L = load_lattice(args.lattice)
    res = is_m_admissible(L, parse_vector(args.f), bound=args.bound, m=args.m)
    return 0, res.to_json()


def _auto_polarization(ambient: Lattice, sub: Lattice):
    """Embed <2n> as e + n f in the first hyperbolic block of the ambient lattice."""
    if sub.rank != 1 or sub.gram[0][0] <= 0 or sub.gram[0][0] % 2:
        raise UsageError("automatic embedding only handles <2n> with n > 0; pass --matrix")
    n = sub.gram[0][0] // 2
    G = ambient.gram
    for i in range(ambient.rank - 1):
        if G[i][i] == 0 and G[i + 1][i + 1] == 0 and G[i][i + 1] == 1:
            v = [0] * ambient.rank
            v[i], v[i + 1] = 1, n
            return Embedding(ambient, sub, linalg.from_columns([v], ambient.rank))
    raise UsageError("ambient lattice has no hyperbolic block for the automatic embedding")


def cmd_mirror(args):
    if args.command == "compute":
        if args.lattice:
            N = load_lattice(args.lattice)
            if not args.f:
                raise UsageError("--f is required with --lattice")
            return 0, mirror_lattice(N, parse_vector(args.f)).to_json()
        amb = load_lattice(args.ambient)
        sub = load_lattice(args.sub)
        if args.matrix:
            E = Embedding(amb, sub, parse_matrix(args.matrix))
        else:
            E = _auto_polarization(amb, sub)
        N, embN = orthogonal_complement(E)
        if args.f:
            f = parse_vector(args.f)
        else:
            f = _first_isotropic_basis_vector(amb, embN)
        res = mirror_of_polarization(E, f)
        out = res.to_json()
        out["f_ambient"] = f
        out["complement"] = lattice_info(N)
        out["check_info"] = lattice_info(res.check_lattice)
        return 0, out
    if args.command == "dual":
        return 0, {"k3_dual": k3_dual(load_lattice(args.first), load_lattice(args.second))}
    if args.command == "tube":
        N = load_lattice(args.lattice)
        z = [QComplex.parse(x) for x in args.z.split(",")]
        return 0, tube_alpha(N, parse_vector(args.f), parse_vector(args.g), z).to_json()
    ns = [args.n] if args.n else list(range(1, 11))
    ok = all(kummer_wedge_identity(n) for n in ns) and kummer_wedge_identity(None)
    return (0 if ok else 1), {"n": ns, "symbolic": True, "holds": ok}


def _first_isotropic_basis_vector(amb, embN):
    M = [list(r) for r in embN.matrix]
    for i in range(amb.rank):
        if amb.gram[i][i] != 0:
            continue
        v = [int(j == i) for j in range(amb.rank)]
        if linalg.solve_integer(M, v) is not None:
            return v
    raise UsageError("no isotropic basis vector of the ambient lattice lies in the complement; pass --f")


def _parse_entry(text: str, n: int):
    """Entries like ``3``, ``1/2``, ``2r`` (2 sqrt n) or ``-1/3r``."""
    text = text.strip()
    if text.endswith("r"):
        coeff = text[:-1] or "1"
        if coeff in ("-", "+"):
            coeff += "1"
        return SqrtInt(0, Fraction(coeff), n)
    return SqrtInt(Fraction(text), 0, n)


def _render(M):
    return [[str(x) for x in row] for row in M]


def cmd_fricke(args):
    if args.command == "counts":
        return 0, fricke_counts(args.n)
    n = args.n
    if args.fricke:
        g = fricke_matrix(n)
    else:
        if not args.g:
            raise UsageError("pass --g a,b,c,d or --fricke")
        parts = args.g.split(",")
        if len(parts) != 4:
            raise UsageError("--g needs four entries")
        e = [_parse_entry(p, n) for p in parts]
        g = [[e[0], e[1]], [e[2], e[3]]]
    A = embed_Aprime(g, n) if args.prime else embed_A(g, n)
    return 0, {"matrix": _render(A), "integral": is_integral(A), "basis": "f,e,-g" if args.prime else "f,e,g"}


def cmd_toric(args):
    return 0, analyze(WeightSystem.parse(args.weights))


def cmd_catalog(args):
    if args.command == "table":
        return 0, {"rows": [r.to_json() for r in arnold_table()]}
    report = run_verify(args.only, args.jobs)
    return (1 if report["summary"]["fail"] else 0), report


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--out", default=argparse.SUPPRESS, help="also write the JSON result to this path")

    p = argparse.ArgumentParser(prog="k3mirror", parents=[common], description=__doc__)
    groups = p.add_subparsers(dest="group", required=True)

    def sub(parent, name, **kw):
        return parent.add_parser(name, parents=[common], **kw)

    g = sub(groups, "lattice", help="construct and inspect lattices").add_subparsers(dest="command", required=True)
    sub(g, "make").add_argument("name")
    s = sub(g, "sum")
    s.add_argument("parts", nargs="+")
    s = sub(g, "rescale")
    s.add_argument("lattice")
    s.add_argument("--by", type=int, required=True)
    sub(g, "show").add_argument("lattice")

    g = sub(groups, "disc", help="discriminant forms").add_subparsers(dest="command", required=True)
    sub(g, "form").add_argument("lattice")
    s = sub(g, "iso")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--negate", action="store_true", help="compare with the negated second form")

    g = sub(groups, "embed", help="embeddings and criteria").add_subparsers(dest="command", required=True)
    s = sub(g, "complement")
    s.add_argument("--ambient", required=True)
    s.add_argument("--vector", action="append", required=True, help="image of a sub basis vector (repeatable)")
    sub(g, "nikulin").add_argument("lattice")
    s = sub(g, "summand")
    s.add_argument("lattice")
    s.add_argument("--m", type=int, default=1)
    s = sub(g, "admissible")
    s.add_argument("lattice")
    s.add_argument("--f", required=True)
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--bound", type=int, default=8)

    g = sub(groups, "mirror", help="mirror lattices").add_subparsers(dest="command", required=True)
    s = sub(g, "compute")
    s.add_argument("--ambient", default="L_K3")
    s.add_argument("--sub", default=None)
    s.add_argument("--matrix", default=None, help="JSON embedding matrix (ambient rank x sub rank)")
    s.add_argument("--lattice", default=None, help="compute directly in this lattice N")
    s.add_argument("--f", default=None)
    s = sub(g, "dual")
    s.add_argument("first")
    s.add_argument("second")
    s = sub(g, "tube")
    s.add_argument("--lattice", required=True)
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--z", required=True, help="comma separated entries such as 0,0,1/2+i")
    sub(g, "wedge").add_argument("--n", type=int, default=None)

    g = sub(groups, "fricke", help="Fricke group arithmetic").add_subparsers(dest="command", required=True)
    sub(g, "counts").add_argument("--n", type=int, required=True)
    s = sub(g, "matrix")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--g", default=None, help="a,b,c,d; suffix r means times sqrt(n)")
    s.add_argument("--fricke", action="store_true")
    s.add_argument("--prime", action="store_true", help="use the (f, e, -g) Moebius form")

    g = sub(groups, "toric", help="reflexive simplices").add_subparsers(dest="command", required=True)
    sub(g, "analyze").add_argument("--weights", required=True)

    g = sub(groups, "catalog", help="embedded data and verification").add_subparsers(dest="command", required=True)
    sub(g, "table")
    s = sub(g, "verify")
    s.add_argument("--only", action="append", default=None, help="claim id or id prefix (repeatable)")
    s.add_argument("--jobs", type=int, default=1)
    return p


HANDLERS = {
    "lattice": cmd_lattice,
    "disc": cmd_disc,
    "embed": cmd_embed,
    "mirror": cmd_mirror,
    "fricke": cmd_fricke,
    "toric": cmd_toric,
    "catalog": cmd_catalog,
}


def _text(result, indent=0) -> str:
    pad = "  " * indent
    if isinstance(result, dict):
        if "claims" in result and "summary" in result:
            lines = [f"{c['status']:8s} {c['id']}  ({c['ms']} ms)" for c in result["claims"]]
            s = result["summary"]
            lines.append(f"pass {s['pass']}  fail {s['fail']}  unknown {s['unknown']}")
            return "\n".join(lines)
        lines = []
        for k, v in result.items():
            if isinstance(v, (dict, list)) and v and isinstance(v, dict):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    return pad + json.dumps(result)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        code, result = HANDLERS[args.group](args)
    except (K3MirrorError, UsageError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "json", False):
        print(json.dumps(result, indent=2, sort_keys=True))
    else:
        print(_text(result))
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            json.dump(result, fh, indent=2, sort_keys=True)
    return code


if __name__ == "__main__":
    sys.exit(main())
