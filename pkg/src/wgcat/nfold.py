"""n-fold categories.

An :class:`NFold` of dimension n is held as its corner table: the
(n-1)-fold simplicial object in finite categories obtained by taking nerves
in every direction but the last.  The internal-category components
(objects, arrows, d0, d1, s, m) are derived on demand and are what the
recursive JSON form stores.
"""
from __future__ import annotations

from itertools import product

from .fincat import FinCat, FinFunctor, check_category, induced_functor, is_isomorphism, limit_cat
from .labels import label
from .msimp import (DEFAULT_TRUNCATION, MultiSimp, SegalFailure, SimpMap, _with,
                    categorify_last, check_simplicial, multinerve_of_table, segal_map,
                    segal_report)
from .report import MalformedError, PreconditionError, Report, failed, passed, prefixed


class NFold:
    __slots__ = ("table",)

    def __init__(self, table: MultiSimp):
        self.table = table

    @property
    def n(self) -> int:
        return self.table.arity + 1

    @property
    def L(self) -> int:
        return self.table.L

    @staticmethod
    def from_category(c: FinCat) -> "NFold":
        return NFold(MultiSimp.point(c))

    @property
    def category(self) -> FinCat:
        if self.n != 1:
            raise PreconditionError("only 1-fold objects are plain categories")
        return self.table.base()

    # internal-category view in the first direction
    @property
    def obj(self) -> "NFold":
        return NFold(self.table.level(0))

    @property
    def arr(self) -> "NFold":
        return NFold(self.table.level(1))

    def _level_map(self, k: int, theta: tuple) -> SimpMap:
        t = self.table
        comps = {i[1:]: t.act(i, 0, theta) for i in t.indices() if i[0] == k}
        r = len(theta) - 1
        return SimpMap(t.level(k), t.level(r), comps)

    @property
    def d0(self) -> SimpMap:
        return self._level_map(1, (1,))

    @property
    def d1(self) -> SimpMap:
        return self._level_map(1, (0,))

    @property
    def s(self) -> SimpMap:
        return self._level_map(0, (0, 0))

    def composable_pairs(self) -> MultiSimp:
        """X1 ×_{X0} X1 as an (n-1)-fold table of pairs."""
        return _chain_table(self.table.level(1), self.d0, self.d1, 2)

    @property
    def m(self) -> SimpMap:
        t = self.table
        pairs = self.composable_pairs()
        comps = {}
        for idx, pc in pairs.cells.items():
            full = (2,) + idx
            seg = segal_map(t, full, 0)
            inv_o = {v: k for k, v in seg.o.items()}
            inv_m = {v: k for k, v in seg.m.items()}
            comp = t.act(full, 0, (0, 2))
            comps[idx] = FinFunctor(pc, t.cells[(1,) + idx],
                                    {x: comp.o[inv_o[x]] for x in pc.objects},
                                    {f: comp.m[inv_m[f]] for f in pc.mor})
        return SimpMap(pairs, t.level(1), comps)

    def to_json(self) -> dict:
        return nfold_to_json(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, NFold) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self) -> str:
        return f"NFold(n={self.n}, L={self.L})"


def _chain_table(x1: MultiSimp, d0: SimpMap, d1: SimpMap, k: int) -> MultiSimp:
    """k-fold composable chains of x1 over x0, cellwise."""
    cells = {}
    for i, c in x1.cells.items():
        cons = [(j, d0.comps[i], j + 1, d1.comps[i]) for j in range(k - 1)]
        cells[i] = limit_cat([c] * k, cons)

    def op(i, d, g, s, t):
        fn = x1.gens[(i, d, g)]
        return induced_functor(s, t, [(j, fn) for j in range(k)])

    return MultiSimp.build(x1.arity, x1.L, lambda i: cells[i], op)


# ---------------------------------------------------------------------------
# validation and assembly

def validate_table(t: MultiSimp, require_segal: bool = True) -> Report:
    for i, c in sorted(t.cells.items()):
        r = check_category(c)
        if not r:
            return prefixed(failed("category:" + r.clause, witness=r.witness), i)
    r = check_simplicial(t)
    if not r:
        return r
    if require_segal:
        r = segal_report(t)
        if not r:
            return r
    return passed("nfold", truncation=t.L)


def validate_nfold(raw) -> Report:
    """Internal-category axioms on a recursive or table document."""
    if isinstance(raw, NFold):
        x = raw
    elif isinstance(raw, MultiSimp):
        x = NFold(raw)
    else:
        x = nfold_from_json(raw, validate=False)
    return validate_table(x.table)


def from_levels(t: MultiSimp) -> NFold:
    """Accept a table whose directional Segal maps are all isomorphisms."""
    if t.L < 2 and t.arity > 0:
        raise PreconditionError("truncation must be at least 2")
    rep = segal_report(t)
    if not rep:
        idx, d = rep.path
        raise SegalFailure(idx[d - 1], where=(d, idx))
    return NFold(t)


def corner_J(x: NFold) -> MultiSimp:
    return x.table


def multinerve(x: NFold, L: int | None = None) -> MultiSimp:
    """All directions as nerves: an n-fold simplicial object in sets."""
    return multinerve_of_table(x.table, L)


def _move(t: MultiSimp, src: int, dst: int) -> MultiSimp:
    order = list(range(t.arity))
    order.pop(src)
    order.insert(dst, src)
    return t.permute(order)


def xi_swap(x: NFold, k: int) -> NFold:
    """Re-present x so that its direction k (1-based) becomes the last one.

    k = n leaves the presentation unchanged; ``xi_unswap`` undoes it.
    """
    n = x.n
    if not 1 <= k <= n:
        raise PreconditionError(f"direction {k} out of range 1..{n}")
    if k == n:
        return x
    mn = multinerve(x)
    return NFold(categorify_last(_move(mn, k - 1, n - 1)))


def xi_unswap(x: NFold, k: int) -> NFold:
    n = x.n
    if not 1 <= k <= n:
        raise PreconditionError(f"direction {k} out of range 1..{n}")
    if k == n:
        return x
    mn = multinerve(x)
    return NFold(categorify_last(_move(mn, n - 1, k - 1)))


def nerve_dir(x: NFold, k: int, L: int | None = None) -> MultiSimp:
    """Table whose first direction is the nerve of x in direction k.

    Level i (``.level(i)``) is the (n-1)-fold object x_i in direction k.
    For n = 1 this is the nerve of the category.
    """
    n = x.n
    if not 1 <= k <= n:
        raise PreconditionError(f"direction {k} out of range 1..{n}")
    mn = multinerve(x, L)
    return categorify_last(_move(mn, k - 1, 0)) if n > 1 else mn


def discrete_inclusion(x: NFold, L: int | None = None) -> NFold:
    """x as an (n+1)-fold object, discrete in the new last direction."""
    return NFold(multinerve_of_table(x.table, L))


def is_discrete_table(t: MultiSimp) -> bool:
    return (all(c.is_discrete() for c in t.cells.values())
            and all(is_isomorphism(f) for f in t.gens.values()))


def is_discrete(x: NFold) -> bool:
    return is_discrete_table(x.table)


def discrete_nfold(elements, n: int, L: int = DEFAULT_TRUNCATION) -> NFold:
    c = FinCat.discrete(elements)
    return NFold(MultiSimp.constant(n - 1, L if n > 1 else 0, c))


def map_of_level(x: NFold, theta_level: int, theta: tuple) -> SimpMap:
    return x._level_map(theta_level, theta)


# ---------------------------------------------------------------------------
# recursive JSON

def _simpmap_json(f: SimpMap) -> dict:
    if f.source.arity == 0:
        return f.base().to_json()
    return {"components": f.to_json()}


def nfold_to_json(x: NFold) -> dict:
    if x.n == 1:
        doc = dict(x.category.to_json())
        doc["n"] = 1
        return doc
    return {"n": x.n, "truncation": x.L, "obj": nfold_to_json(x.obj),
            "arr": nfold_to_json(x.arr), "d0": _simpmap_json(x.d0),
            "d1": _simpmap_json(x.d1), "s": _simpmap_json(x.s), "m": _simpmap_json(x.m)}


def _relabel_index(c: FinCat):
    return {label(o): o for o in c.objects}, {label(f): f for f in c.mor}


def _functor_by_labels(doc: dict, src: FinCat, tgt: FinCat) -> FinFunctor:
    so, sm = _relabel_index(src)
    to, tm = _relabel_index(tgt)
    try:
        o = {so[k]: to[v] for k, v in doc["objectMap"].items()}
        m = {sm[k]: tm[v] for k, v in doc["morphismMap"].items()}
    except KeyError as exc:
        raise MalformedError(f"functor refers to unknown identifier {exc}") from exc
    return FinFunctor(src, tgt, o, m)


def _simpmap_from_json(doc: dict, src: MultiSimp, tgt: MultiSimp) -> SimpMap:
    if src.arity == 0:
        return SimpMap(src, tgt, {(): _functor_by_labels(doc, src.base(), tgt.base())})
    comps = {}
    try:
        entries = doc["components"]
        for idx in src.indices():
            comps[idx] = _functor_by_labels(entries[",".join(map(str, idx))],
                                            src.cells[idx], tgt.cells[idx])
    except (KeyError, TypeError) as exc:
        raise MalformedError(f"malformed map document: {exc}") from exc
    return SimpMap(src, tgt, comps)


def nfold_from_json(doc: dict, validate: bool = True) -> NFold:
    if not isinstance(doc, dict):
        raise MalformedError("document must be an object")
    if "arity" in doc and "cells" in doc:
        x = NFold(MultiSimp.from_json(doc))
    elif int(doc.get("n", 1)) == 1 and "objects" in doc:
        x = NFold.from_category(FinCat.from_json(doc))
    else:
        try:
            n = int(doc["n"])
            L = int(doc.get("truncation", DEFAULT_TRUNCATION))
            x0 = nfold_from_json(doc["obj"], validate=False).table
            x1 = nfold_from_json(doc["arr"], validate=False).table
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedError(f"malformed n-fold document: {exc}") from exc
        if x0.arity != n - 2 or x1.arity != n - 2:
            raise MalformedError("recursion depth does not match n")
        x0, x1 = _retruncate(x0, L), _retruncate(x1, L)
        d0 = _simpmap_from_json(doc["d0"], x1, x0)
        d1 = _simpmap_from_json(doc["d1"], x1, x0)
        s = _simpmap_from_json(doc["s"], x0, x1)
        pairs = _chain_table(x1, d0, d1, 2)
        m = _simpmap_from_json(doc["m"], pairs, x1)
        x = NFold(internal_nerve(x0, x1, d0, d1, s, m, L))
    if validate:
        rep = validate_table(x.table)
        if not rep:
            raise MalformedError(f"n-fold axioms fail: {rep.clause} at {rep.path}")
    return x


def _retruncate(t: MultiSimp, L: int) -> MultiSimp:
    if t.arity == 0 or t.L == L:
        return t
    if t.L > L:
        return t.truncate_to(L)
    raise MalformedError("inner truncation smaller than outer truncation")


def internal_nerve(x0: MultiSimp, x1: MultiSimp, d0: SimpMap, d1: SimpMap, s: SimpMap,
                   m: SimpMap, L: int = DEFAULT_TRUNCATION) -> MultiSimp:
    """Nerve of an internal category in (n-1)-fold tables, as a table with
    one more direction placed first."""
    chains = {0: x0, 1: x1}
    for k in range(2, L + 1):
        chains[k] = _chain_table(x1, d0, d1, k)

    def parts(k, y):
        if k == 0:
            return [y], []
        return None, ([y] if k == 1 else list(y))

    def make_action(i, k, theta):
        src_cell = chains[k].cells[i]

        def run(y, table):
            # table picks .o or .m of the structure functors
            if k == 0:
                verts, arrows = [y], []
            else:
                arrows = [y] if k == 1 else list(y)
                verts = [table(d1.comps[i])[arrows[0]]] + [table(d0.comps[i])[a]
                                                            for a in arrows]
            out = []
            for a, b in zip(theta, theta[1:]):
                if a == b:
                    out.append(table(s.comps[i])[verts[a]])
                else:
                    acc = arrows[a]
                    for t in range(a + 1, b):
                        acc = table(m.comps[i])[(acc, arrows[t])]
                    out.append(acc)
            if len(theta) == 1:
                return verts[theta[0]]
            return out[0] if len(out) == 1 else tuple(out)

        return src_cell, run

    def cell(idx):
        return chains[idx[0]].cells[idx[1:]]

    def op(idx, d, g, src, tgt):
        k, i = idx[0], idx[1:]
        if d == 0:
            _, run = make_action(i, k, g)
            return FinFunctor(src, tgt, {y: run(y, lambda f: f.o) for y in src.objects},
                              {y: run(y, lambda f: f.m) for y in src.mor})
        return chains[k].gens[(i, d - 1, g)]

    return MultiSimp.build(x0.arity + 1, L, cell, op)
