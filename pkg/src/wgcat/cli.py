"""Command-line entry point ``wgcat``.

Exit codes: 0 when the verdict holds, 1 when it does not (or a construction's
precondition fails), 2 for malformed input, 3 when a guard (depth, size or
time) is exceeded.  Every document written to standard output is canonical
JSON carrying ``kind`` and ``schema`` fields.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .fincat import FinCat, check_category, decalage
from .labels import label
from .msimp import MultiSimp
from .report import GuardError, MalformedError, PreconditionError, WgcatError

SCHEMA = 1
MODELS = ("cat", "nfold", "hd", "wg", "tawg", "tam", "ftawg", "lta", "groupoidal", "segalic")
FUNCTORS = ("p", "q", "dec", "xi", "shift", "v", "f", "g", "r0", "d", "disc", "tr", "st",
            "pstep", "qn")
CLASSES = ("fincat", "hd", "catwg", "tawg", "lta", "groupoidal", "ftawg", "tam")


def guard_ms() -> int:
    raw = os.environ.get("WGCAT_GUARD_MS", "60000")
    try:
        return int(raw)
    except ValueError:
        raise MalformedError(f"WGCAT_GUARD_MS must be an integer, got {raw!r}") from None


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=True, separators=(",", ":"))


def emit(kind: str, body: dict) -> None:
    doc = {"kind": kind, "schema": SCHEMA}
    doc.update(body)
    sys.stdout.write(dumps(doc) + "\n")


# -- loading -----------------------------------------------------------------

def read_doc(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        doc = json.loads(text)
    except OSError as exc:
        raise MalformedError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedError(f"{path} is not JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedError("document must be a JSON object")
    return doc


def as_table(doc: dict, n: int | None) -> MultiSimp:
    """Any table-like document: a category, a flat table or a nested n-fold
    form.  With ``n`` given the dimension must match."""
    from .nfold import nfold_from_json
    if doc.get("kind") == "ftam" or ("table" in doc and "sections" in doc):
        doc = doc["table"]
    if "arity" in doc and "cells" in doc:
        t = MultiSimp.from_json(doc)
    elif "objects" in doc:
        t = MultiSimp.point(FinCat.from_json(doc))
    else:
        t = nfold_from_json(doc, validate=False).table
    if n is not None and t.arity != n - 1:
        raise MalformedError(f"document has dimension {t.arity + 1}, expected {n}")
    return t


def as_category(doc: dict) -> FinCat:
    t = as_table(doc, None)
    if t.arity != 0:
        raise MalformedError("expected a category")
    return t.base()


def as_ftam(doc: dict, n: int | None):
    from .models import FTam
    if not ("table" in doc and "sections" in doc):
        raise MalformedError("expected a table with sections (kind 'ftam')")
    t = FTam.from_json(doc)
    if n is not None and t.table.arity != n - 1:
        raise MalformedError(f"document has dimension {t.table.arity + 1}, expected {n}")
    return t


def as_psfunctor(doc: dict, n: int | None):
    from .pseudo import PsFunctor
    if doc.get("kind") == "psfunctor" or "arrows" in doc:
        h = PsFunctor.from_json(doc)
        if n is not None and h.arity != n - 1:
            raise MalformedError(f"pseudo-functor has arity {h.arity}, expected {n - 1}")
        return h
    return PsFunctor.from_table(as_table(doc, n))


def table_body(t: MultiSimp) -> dict:
    body = {"n": t.arity + 1}
    body.update(t.to_json())
    return body


def emit_table(t: MultiSimp) -> None:
    if t.arity == 0:
        body = {"n": 1}
        body.update(t.base().to_json())
        emit("category", body)
    else:
        emit("table", table_body(t))


def emit_ftam(f) -> None:
    body = {"n": f.table.arity + 1}
    body.update(f.to_json())
    emit("ftam", body)


# -- verbs -------------------------------------------------------------------

def cmd_check(args) -> int:
    from . import models
    from .nfold import validate_table
    doc = read_doc(args.file)
    m = args.model
    if m == "cat":
        rep = check_category(as_category(doc))
    elif m == "ftawg":
        rep = models.ftawg_report(as_ftam(doc, args.n))
    elif m == "segalic":
        from .pseudo import check_pseudo, is_segalic
        h = as_psfunctor(doc, args.n)
        rep = check_pseudo(h)
        if rep:
            rep = is_segalic(h)
    else:
        t = as_table(doc, args.n)
        fn = {"nfold": validate_table, "hd": models.hd_report, "wg": models.catwg_report,
              "tawg": models.tawg_report, "tam": models.is_tam, "lta": models.lta_report,
              "groupoidal": models.groupoidal_report}[m]
        rep = fn(t)
    emit("report", {"model": m, "report": rep.to_json()})
    return 0 if rep else 1


def _along(path: str, x: MultiSimp):
    from .nfold import _simpmap_from_json
    doc = read_doc(path)
    try:
        src = as_table(doc["source"], x.arity)
        return _simpmap_from_json(doc["map"], src, x.level(0))
    except KeyError as exc:
        raise MalformedError(f"shift needs 'source' and 'map': missing {exc}") from exc


def cmd_apply(args) -> int:
    from . import constructions as cons
    from . import discretize as disc
    from . import models, pseudo
    doc = read_doc(args.file)
    f, n = args.functor, args.n
    if f in ("p", "q"):
        emit_table(models.truncate(as_table(doc, n), f))
    elif f == "dec":
        c, d1 = decalage(as_category(doc))
        emit("category", dict(c.to_json(), n=1))
    elif f == "xi":
        from .nfold import NFold, xi_swap
        if args.k is None:
            raise MalformedError("xi needs --k")
        emit_table(xi_swap(NFold(as_table(doc, n)), args.k).table)
    elif f == "shift":
        if not args.along:
            raise MalformedError("shift needs --along FILE")
        x = as_table(doc, n)
        out, _ = cons.shift(x, _along(args.along, x))
        emit_table(out)
    elif f == "v":
        emit_table(cons.resolve_hd_V(as_table(doc, n)).output)
    elif f == "f":
        emit_table(cons.resolve_wg_F(as_table(doc, n)).output)
    elif f == "g":
        emit_ftam(cons.as_ftam(cons.to_fcat_G(as_table(doc, n))))
    elif f == "r0":
        emit_ftam(disc.r0(as_ftam(doc, n)))
    elif f == "d":
        emit_table(disc.d_n(as_ftam(doc, n)))
    elif f == "disc":
        emit_table(disc.disc_n(as_table(doc, n)))
    elif f == "tr":
        h, _ = pseudo.tr_n(as_table(doc, n))
        sys.stdout.write(dumps(h.to_json()) + "\n")
    elif f == "st":
        emit_table(pseudo.strictify(as_psfunctor(doc, n)).output)
    elif f == "pstep":
        emit_table(pseudo.p_step(as_table(doc, n)))
    elif f == "qn":
        emit_table(pseudo.q_n(as_table(doc, n)).output)
    return 0


def cmd_equiv(args) -> int:
    from .models import is_n_equivalence
    from .nfold import _simpmap_from_json
    doc = read_doc(args.file)
    try:
        src, tgt = as_table(doc["source"], args.n), as_table(doc["target"], args.n)
        fmap = _simpmap_from_json(doc["map"], src, tgt)
    except KeyError as exc:
        raise MalformedError(f"map document needs 'source', 'target', 'map': {exc}") from exc
    cert = is_n_equivalence(fmap)
    emit("certificate", {"n": args.n, "certificate": cert.to_json()})
    return 0 if cert.ok else 1


def cmd_zigzag(args) -> int:
    from .discretize import zigzag_witness
    x = as_table(read_doc(args.file), args.n)
    z = zigzag_witness(x, guard_ms())
    emit("zigzag", {"n": z.n, "ok": z.ok, "edges": z.to_json()})
    return 0 if z.ok else 1


def cmd_corpus(args) -> int:
    from .corpus import GenSpec, generate
    from .models import FTam
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i in range(args.count):
        seed = args.seed + i
        obj = generate(GenSpec(seed, args.cls, args.n))
        if isinstance(obj, FTam):
            doc = {"kind": "ftam", "schema": SCHEMA, "n": obj.table.arity + 1}
            doc.update(obj.to_json())
        elif isinstance(obj, FinCat):
            doc = {"kind": "category", "schema": SCHEMA, "n": 1}
            doc.update(obj.to_json())
        else:
            doc = {"kind": "table" if obj.arity else "category", "schema": SCHEMA}
            doc.update(table_body(obj) if obj.arity else dict(obj.base().to_json(), n=1))
        name = f"{args.cls}-n{args.n}-seed{seed}.json"
        (out / name).write_text(dumps(doc) + "\n")
        files.append(name)
    emit("corpus", {"class": args.cls, "n": args.n, "files": files})
    return 0


def dot_of(c: FinCat, name: str = "C") -> str:
    lines = [f"digraph {json.dumps(name)} {{"]
    for o in c.objects:
        lines.append(f"  {json.dumps(label(o))};")
    idents = set(c.ident.values())
    for f in c.morphisms():
        if f in idents:
            continue
        a, b = c.mor[f]
        lines.append(f"  {json.dumps(label(a))} -> {json.dumps(label(b))} "
                     f"[label={json.dumps(label(f))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export(args) -> int:
    t = as_table(read_doc(args.file), None)
    if args.cell is None:
        idx = (0,) * t.arity
    else:
        idx = tuple(int(v) for v in args.cell.split(",")) if args.cell not in ("", "*") else ()
    if idx not in t.cells:
        raise MalformedError(f"no cell {idx}")
    sys.stdout.write(dot_of(t.cells[idx], "cell " + (",".join(map(str, idx)) or "*")))
    return 0


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wgcat", description="Finite weakly globular structures.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("check", help="run a model checker")
    p.add_argument("--model", required=True, choices=MODELS)
    p.add_argument("--n", type=int)
    p.add_argument("file")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("apply", help="apply a construction")
    p.add_argument("--functor", required=True, choices=FUNCTORS)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, help="direction for xi")
    p.add_argument("--along", help="map document for shift")
    p.add_argument("file")
    p.set_defaults(run=cmd_apply)

    p = sub.add_parser("equiv", help="certify an n-equivalence")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("file")
    p.set_defaults(run=cmd_equiv)

    p = sub.add_parser("zigzag", help="certified zig-zag to the discretization")
    p.add_argument("--n", type=int)
    p.add_argument("file")
    p.set_defaults(run=cmd_zigzag)

    p = sub.add_parser("corpus", help="write generated instances")
    p.add_argument("--class", dest="cls", required=True, choices=CLASSES)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(run=cmd_corpus)

    p = sub.add_parser("export", help="DOT rendering of one cell")
    p.add_argument("--dot", action="store_true", required=True)
    p.add_argument("--cell", help="comma-separated index; default all zeros")
    p.add_argument("file")
    p.set_defaults(run=cmd_export)
    return ap


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        return args.run(args)
    except MalformedError as exc:
        emit("error", {"error": "malformed", "detail": str(exc)})
        return 2
    except GuardError as exc:
        emit("error", {"error": "guard", "detail": str(exc)})
        return 3
    except BrokenPipeError:
        sys.stderr.close()
        return 0
    except RecursionError:
        emit("error", {"error": "guard", "detail": "recursion depth exceeded"})
        return 3
    except (PreconditionError, WgcatError) as exc:
        emit("error", {"error": exc.kind, "detail": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
