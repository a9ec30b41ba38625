"""Finite categories given by explicit tables, and the operations built on them.

A :class:`FinCat` lists its objects, its morphisms with source and target, an
identity per object and a composition table ``(g, f) -> g∘f``.  Everything
else here (limits, iso classes, components, décalage, equivalence analysis,
pseudo-inverses) works by enumerating those tables.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .labels import label, ordered
from .report import MalformedError, PreconditionError, Report, failed, passed


class LazyComp(Mapping):
    """Composition table filled in on first lookup.

    Used for categories built as limits, where the full table is far larger
    than the part any algorithm touches.
    """

    def __init__(self, mor: Mapping, rule: Callable):
        self._mor, self._rule, self._done = mor, rule, {}

    def __getitem__(self, key):
        hit = self._done.get(key)
        if hit is None:
            if key not in self:
                raise KeyError(key)
            hit = self._done[key] = self._rule(*key)
        return hit

    def __contains__(self, key) -> bool:
        g, f = key
        mg, mf = self._mor.get(g), self._mor.get(f)
        return mg is not None and mf is not None and mg[0] == mf[1]

    def __iter__(self):
        out_of = defaultdict(list)
        for g, (a, _) in self._mor.items():
            out_of[a].append(g)
        for f, (_, b) in self._mor.items():
            for g in out_of[b]:
                yield (g, f)

    def items(self):
        # full sweeps do not populate the cache
        done, rule = self._done, self._rule
        out_of = defaultdict(list)
        for g, (a, _) in self._mor.items():
            out_of[a].append(g)
        for f, (_, b) in self._mor.items():
            for g in out_of[b]:
                hit = done.get((g, f))
                yield (g, f), (rule(g, f) if hit is None else hit)

    def __len__(self) -> int:
        return sum(1 for _ in self)


class FinCat:
    __slots__ = ("objects", "mor", "ident", "comp", "name", "_out", "_in", "_hom",
                 "_inv", "_json")

    def __init__(self, objects: Iterable, morphisms: Mapping, identities: Mapping,
                 compose: Mapping, name: str = ""):
        self.objects = ordered(set(objects))
        self.mor = dict(morphisms)
        self.ident = dict(identities)
        self.comp = compose if isinstance(compose, LazyComp) else dict(compose)
        self.name = name
        self._out = self._in = self._hom = self._inv = self._json = None

    # -- basic access -------------------------------------------------
    def src(self, f):
        return self.mor[f][0]

    def tgt(self, f):
        return self.mor[f][1]

    def compose(self, g, f):
        return self.comp[(g, f)]

    def _index(self):
        out, inn, hom = defaultdict(list), defaultdict(list), defaultdict(list)
        for f in ordered(self.mor):
            a, b = self.mor[f]
            out[a].append(f)
            inn[b].append(f)
            hom[(a, b)].append(f)
        self._out, self._in, self._hom = dict(out), dict(inn), dict(hom)

    def out_of(self, a) -> list:
        if self._out is None:
            self._index()
        return self._out.get(a, [])

    def into(self, b) -> list:
        if self._in is None:
            self._index()
        return self._in.get(b, [])

    def hom(self, a, b) -> list:
        if self._hom is None:
            self._index()
        return self._hom.get((a, b), [])

    def morphisms(self) -> tuple:
        return ordered(self.mor)

    def inverse(self, f):
        """Inverse of ``f`` or ``None``."""
        if self._inv is None:
            inv = {}
            for f2, (a, b) in self.mor.items():
                ia, ib = self.ident[a], self.ident[b]
                for g in self.hom(b, a):
                    if self.comp[(g, f2)] == ia and self.comp[(f2, g)] == ib:
                        inv[f2] = g
                        break
            self._inv = inv
        return self._inv.get(f)

    def is_iso(self, f) -> bool:
        return self.inverse(f) is not None

    def isos_out_of(self, a) -> list:
        return [f for f in self.out_of(a) if self.is_iso(f)]

    def is_discrete(self) -> bool:
        return len(self.mor) == len(self.objects)

    def is_groupoid(self) -> bool:
        return all(self.is_iso(f) for f in self.mor)

    def size(self) -> tuple[int, int]:
        return len(self.objects), len(self.mor)

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        if self._json is None:
            ob = {o: label(o) for o in self.objects}
            lab = {f: label(f) for f in self.mor}
            self._json = {
                "objects": [ob[o] for o in self.objects],
                "morphisms": [{"id": lab[f], "src": ob[self.mor[f][0]],
                               "tgt": ob[self.mor[f][1]]} for f in self.morphisms()],
                "identities": {ob[o]: lab[self.ident[o]] for o in self.objects},
                "compose": sorted([lab[g], lab[f], lab[h]]
                                  for (g, f), h in self.comp.items()),
            }
        return self._json

    @staticmethod
    def from_json(doc: Mapping, name: str = "") -> "FinCat":
        try:
            objects = list(doc["objects"])
            mors = {m["id"]: (m["src"], m["tgt"]) for m in doc["morphisms"]}
            ident = dict(doc["identities"])
            comp = {(g, f): h for g, f, h in doc["compose"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedError(f"malformed category document: {exc}") from exc
        return FinCat(objects, mors, ident, comp, name=name)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinCat) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash((self.objects, len(self.mor)))

    def __repr__(self) -> str:
        n, m = self.size()
        return f"FinCat({self.name or '?'}: {n} objects, {m} morphisms)"

    # -- constructors -------------------------------------------------
    @staticmethod
    def discrete(elements: Iterable, name: str = "") -> "FinCat":
        elems = ordered(set(elements))
        return FinCat(elems, {x: (x, x) for x in elems}, {x: x for x in elems},
                      {(x, x): x for x in elems}, name=name)

    @staticmethod
    def equivalence_relation(assign: Mapping, name: str = "") -> "FinCat":
        """Posetal groupoid with a unique arrow x→y whenever assign[x] == assign[y]."""
        objs = ordered(assign)
        classes = defaultdict(list)
        for x in objs:
            classes[assign[x]].append(x)
        mors, comp = {}, {}
        for members in classes.values():
            for x in members:
                for y in members:
                    mors[(x, y)] = (x, y)
            for x in members:
                for y in members:
                    for z in members:
                        comp[((y, z), (x, y))] = (x, z)
        return FinCat(objs, mors, {x: (x, x) for x in objs}, comp, name=name)

    @staticmethod
    def walking_arrow() -> "FinCat":
        return FinCat(["0", "1"], {"id0": ("0", "0"), "id1": ("1", "1"), "a": ("0", "1")},
                      {"0": "id0", "1": "id1"},
                      {("id0", "id0"): "id0", ("id1", "id1"): "id1",
                       ("a", "id0"): "a", ("id1", "a"): "a"}, name="walking-arrow")

    @staticmethod
    def walking_iso() -> "FinCat":
        mors = {"id0": ("0", "0"), "id1": ("1", "1"), "u": ("0", "1"), "v": ("1", "0")}
        comp = {("id0", "id0"): "id0", ("id1", "id1"): "id1",
                ("u", "id0"): "u", ("id1", "u"): "u", ("v", "id1"): "v", ("id0", "v"): "v",
                ("v", "u"): "id0", ("u", "v"): "id1"}
        return FinCat(["0", "1"], mors, {"0": "id0", "1": "id1"}, comp, name="walking-iso")

    @staticmethod
    def cyclic_group(order: int) -> "FinCat":
        els = [f"g{i}" for i in range(order)]
        comp = {(els[i], els[j]): els[(i + j) % order] for i in range(order) for j in range(order)}
        return FinCat(["*"], {g: ("*", "*") for g in els}, {"*": els[0]}, comp,
                      name=f"Z/{order}")


# ---------------------------------------------------------------------------
# validation

def _raw_tables(raw):
    if isinstance(raw, FinCat):
        return raw
    return FinCat.from_json(raw)


def check_category(raw) -> Report:
    """First violated category axiom, or a pass.

    Dangling identifiers raise :class:`MalformedError` rather than failing.
    """
    c = _raw_tables(raw)
    objs = set(c.objects)
    for f, (a, b) in c.mor.items():
        if a not in objs or b not in objs:
            raise MalformedError(f"morphism {label(f)} has unknown endpoint")
    for o in c.objects:
        if o not in c.ident:
            raise MalformedError(f"object {label(o)} has no identity")
    for o, i in c.ident.items():
        if o not in objs or i not in c.mor:
            raise MalformedError(f"identity entry {label(o)} is dangling")
        if c.mor[i] != (o, o):
            return failed("identity-endpoints", witness=(i,))
    for (g, f), h in c.comp.items():
        if g not in c.mor or f not in c.mor or h not in c.mor:
            raise MalformedError(f"composition entry ({label(g)},{label(f)}) is dangling")
        if c.src(g) != c.tgt(f):
            return failed("compose-domain", "composite defined on a non-composable pair",
                          witness=(g, f))
        if c.mor[h] != (c.src(f), c.tgt(g)):
            return failed("compose-endpoints", witness=(g, f, h))
    for f in c.morphisms():
        for g in c.out_of(c.tgt(f)):
            if (g, f) not in c.comp:
                return failed("compose-total", "composable pair without composite",
                              witness=(g, f))
    for f in c.morphisms():
        a, b = c.mor[f]
        if c.comp[(f, c.ident[a])] != f or c.comp[(c.ident[b], f)] != f:
            return failed("identity-law", witness=(f,))
    for f in c.morphisms():
        for g in c.out_of(c.tgt(f)):
            gf = c.comp[(g, f)]
            for h in c.out_of(c.tgt(g)):
                if c.comp[(h, gf)] != c.comp[(c.comp[(h, g)], f)]:
                    return failed("associativity", witness=(h, g, f))
    return passed("category")


# ---------------------------------------------------------------------------
# functors and natural isomorphisms

class FinFunctor:
    __slots__ = ("source", "target", "o", "m")

    def __init__(self, source: FinCat, target: FinCat, object_map: Mapping,
                 morphism_map: Mapping):
        self.source, self.target = source, target
        self.o = dict(object_map)
        self.m = dict(morphism_map)

    def __call__(self, x):
        return self.o[x]

    @staticmethod
    def identity(c: FinCat) -> "FinFunctor":
        return FinFunctor(c, c, {x: x for x in c.objects}, {f: f for f in c.mor})

    @staticmethod
    def constant(c: FinCat, d: FinCat, obj) -> "FinFunctor":
        i = d.ident[obj]
        return FinFunctor(c, d, {x: obj for x in c.objects}, {f: i for f in c.mor})

    def after(self, first: "FinFunctor") -> "FinFunctor":
        """``self ∘ first``."""
        o, m = self.o, self.m
        return FinFunctor(first.source, self.target,
                          {x: o[y] for x, y in first.o.items()},
                          {f: m[g] for f, g in first.m.items()})

    def is_identity(self) -> bool:
        return (self.source == self.target and all(k == v for k, v in self.o.items())
                and all(k == v for k, v in self.m.items()))

    def to_json(self) -> dict:
        return {"objectMap": {label(k): label(self.o[k]) for k in self.source.objects},
                "morphismMap": {label(k): label(self.m[k]) for k in self.source.morphisms()}}

    @staticmethod
    def from_json(doc: Mapping, source: FinCat, target: FinCat) -> "FinFunctor":
        try:
            return FinFunctor(source, target, dict(doc["objectMap"]), dict(doc["morphismMap"]))
        except (KeyError, TypeError) as exc:
            raise MalformedError(f"malformed functor document: {exc}") from exc

    def same_as(self, other: "FinFunctor") -> bool:
        return self.o == other.o and self.m == other.m

    def __repr__(self) -> str:
        return f"FinFunctor({self.source!r} -> {self.target!r})"


class ConjugateFunctor(FinFunctor):
    """A functor given on morphisms by ``F(m) = c_q ∘ base(down(m)) ∘ c_p⁻¹``.

    ``down`` sends morphisms of the source to morphisms of ``base.source``
    and ``up`` sends target morphisms to ``base.target``; both are faithful
    functors by construction (identity or the projection of a category whose
    hom-sets are copied from another one).  ``cells[p]`` is an iso
    ``base(down p) → up(F p)``.  Composition is preserved exactly when base
    is a functor and the formula holds, which is what :func:`check_functor`
    verifies, in time linear in the number of morphisms.
    """

    __slots__ = ("base", "down_o", "down_m", "up", "cells")

    def __init__(self, source, target, object_map, morphism_map, base: FinFunctor,
                 down_o: Mapping, down_m: Mapping, up: Callable, cells: Mapping):
        super().__init__(source, target, object_map, morphism_map)
        self.base, self.down_o, self.down_m, self.up, self.cells = (
            base, down_o, down_m, up, cells)

    def verify(self) -> Report:
        r = check_functor(self.base)
        if not r:
            return failed("conjugate-base", r.clause, witness=r.witness)
        b = self.base.target
        for p in self.source.objects:
            c = self.cells[p]
            fp = b.src(self.up(self.target.ident[self.o[p]]))
            if b.mor.get(c) != (self.base.o[self.down_o[p]], fp):
                return failed("conjugate-cell", witness=(p,))
            if not b.is_iso(c):
                return failed("conjugate-cell-invertible", witness=(p,))
        for m, (p, q) in self.source.mor.items():
            want = b.comp[(self.cells[q], b.comp[(self.base.m[self.down_m[m]],
                                                  b.inverse(self.cells[p]))])]
            if self.up(self.m[m]) != want:
                return failed("conjugate-formula", witness=(m,))
        return passed("functor")


def check_functor(f: FinFunctor) -> Report:
    c, d = f.source, f.target
    targets = set(d.objects)
    for x in c.objects:
        if f.o.get(x) not in targets:
            return failed("functor-objects", witness=(x,))
    for g in c.mor:
        if g not in f.m or f.m[g] not in d.mor:
            return failed("functor-morphisms", witness=(g,))
        if d.mor[f.m[g]] != (f.o[c.src(g)], f.o[c.tgt(g)]):
            return failed("functor-endpoints", witness=(g,))
    for x in c.objects:
        if f.m[c.ident[x]] != d.ident[f.o[x]]:
            return failed("functor-identity", witness=(x,))
    if isinstance(f, ConjugateFunctor):
        return f.verify()
    m, dcomp = f.m, d.comp
    for (g, h), gh in c.comp.items():
        if dcomp[(m[g], m[h])] != m[gh]:
            return failed("functor-composition", witness=(g, h))
    return passed("functor")


def is_isomorphism(f: FinFunctor) -> bool:
    return (len(set(f.o.values())) == len(f.source.objects) == len(f.target.objects)
            and len(set(f.m.values())) == len(f.source.mor) == len(f.target.mor))


@dataclass
class NatIso:
    """Invertible natural transformation ``source_functor ⇒ target_functor``."""

    source_functor: FinFunctor
    target_functor: FinFunctor
    components: dict

    def check(self) -> Report:
        F, G, a = self.source_functor, self.target_functor, self.components
        d = F.target
        for x in F.source.objects:
            cx = a.get(x)
            if cx is None or d.mor.get(cx) != (F.o[x], G.o[x]):
                return failed("component-type", witness=(x,))
            if not d.is_iso(cx):
                return failed("component-invertible", witness=(x,))
        for f in F.source.mor:
            x, y = F.source.mor[f]
            if d.comp[(G.m[f], a[x])] != d.comp[(a[y], F.m[f])]:
                return failed("naturality", witness=(f,))
        return passed("natiso")

    def inverse(self) -> "NatIso":
        d = self.source_functor.target
        return NatIso(self.target_functor, self.source_functor,
                      {x: d.inverse(c) for x, c in self.components.items()})

    def to_json(self) -> dict:
        return {label(k): label(v) for k, v in sorted(self.components.items(),
                                                       key=lambda kv: label(kv[0]))}


@dataclass
class AdjointEquivalence:
    """forward ⊣ backward with unit ``id ⇒ backward∘forward`` and counit
    ``forward∘backward ⇒ id``, both invertible."""

    forward: FinFunctor
    backward: FinFunctor
    unit: NatIso
    counit: NatIso

    def check(self) -> Report:
        for tag, fn in (("forward", self.forward), ("backward", self.backward)):
            r = check_functor(fn)
            if not r:
                return failed(f"{tag}:{r.clause}", witness=r.witness)
        for tag, nt in (("unit", self.unit), ("counit", self.counit)):
            r = nt.check()
            if not r:
                return failed(f"{tag}:{r.clause}", witness=r.witness)
        f, g = self.forward, self.backward
        c, d = f.source, f.target
        eta, eps = self.unit.components, self.counit.components
        for x in c.objects:
            # ε_{Fx} ∘ F(η_x) = id_{Fx}
            if d.comp[(eps[f.o[x]], f.m[eta[x]])] != d.ident[f.o[x]]:
                return failed("triangle-forward", witness=(x,))
        for y in d.objects:
            # G(ε_y) ∘ η_{Gy} = id_{Gy}
            if c.comp[(g.m[eps[y]], eta[g.o[y]])] != c.ident[g.o[y]]:
                return failed("triangle-backward", witness=(y,))
        return passed("adjoint-equivalence")

    def to_json(self) -> dict:
        return {"forward": self.forward.to_json(), "backward": self.backward.to_json(),
                "unit": self.unit.to_json(), "counit": self.counit.to_json()}


# ---------------------------------------------------------------------------
# limits

def limit_cat(cats: list, constraints: list, name: str = "") -> FinCat:
    """Limit of ``cats`` cut out by equations ``F(x_i) == G(x_j)``.

    ``constraints`` holds tuples ``(i, F, j, G)`` with ``i < j``; objects and
    morphisms of the result are tuples with one entry per input category.
    """
    k = len(cats)
    by_second = defaultdict(list)
    for (i, F, j, G) in constraints:
        if not i < j:
            raise ValueError("constraints must satisfy i < j")
        by_second[j].append((i, F, G))

    def enumerate_(pool, fmap_of):
        # fmap_of(functor) picks the object or morphism table
        indexes = {}
        for j, cons in by_second.items():
            i, F, G = cons[0]
            idx = defaultdict(list)
            for x in pool(j):
                idx[fmap_of(G)[x]].append(x)
            indexes[j] = idx
        results = []
        partial = [None] * k

        def rec(j):
            if j == k:
                results.append(tuple(partial))
                return
            cons = by_second.get(j)
            if cons:
                i0, F0, _ = cons[0]
                cands = indexes[j].get(fmap_of(F0)[partial[i0]], ())
                rest = cons[1:]
            else:
                cands, rest = pool(j), ()
            for x in cands:
                if all(fmap_of(F)[partial[i]] == fmap_of(G)[x] for i, F, G in rest):
                    partial[j] = x
                    rec(j + 1)
            partial[j] = None

        rec(0)
        return results

    objs = enumerate_(lambda j: cats[j].objects, lambda fn: fn.o)
    mors_t = enumerate_(lambda j: cats[j].morphisms(), lambda fn: fn.m)
    mors = {t: (tuple(cats[i].mor[t[i]][0] for i in range(k)),
                tuple(cats[i].mor[t[i]][1] for i in range(k))) for t in mors_t}
    ident = {o: tuple(cats[i].ident[o[i]] for i in range(k)) for o in objs}
    comps = [c.comp for c in cats]
    comp = LazyComp(mors, lambda g, f: tuple(c[(a, b)] for c, a, b in zip(comps, g, f)))
    return FinCat(objs, mors, ident, comp, name=name)


def projection(lim: FinCat, cat: FinCat, i: int) -> FinFunctor:
    return FinFunctor(lim, cat, {o: o[i] for o in lim.objects}, {f: f[i] for f in lim.mor})


def induced_functor(source: FinCat, target: FinCat, parts: list) -> FinFunctor:
    """Functor into a limit assembled componentwise.

    ``parts[i] = (idx, h)``: entry ``i`` of the image is ``h`` applied to entry
    ``idx`` of the source tuple (``idx=None`` uses the whole source value;
    ``h=None`` means identity).
    """
    def pick(table_of):
        def run(x):
            out = []
            for idx, h in parts:
                v = x if idx is None else x[idx]
                out.append(v if h is None else table_of(h)[v])
            return tuple(out)
        return run

    fo, fm = pick(lambda h: h.o), pick(lambda h: h.m)
    return FinFunctor(source, target, {x: fo(x) for x in source.objects},
                      {f: fm(f) for f in source.mor})


def product_cat(cats: list, name: str = "") -> FinCat:
    return limit_cat(cats, [], name=name)


def pullback_cat(f: FinFunctor, g: FinFunctor):
    """Pullback of ``f: A→C`` and ``g: B→C`` with its two projections."""
    if f.target != g.target:
        raise PreconditionError("pullback legs must share a target")
    P = limit_cat([f.source, g.source], [(0, f, 1, g)], name="pullback")
    return P, projection(P, f.source, 0), projection(P, g.source, 1)


# ---------------------------------------------------------------------------
# p, q, d and décalage

class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if label(ra) < label(rb):
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb

    def classes(self) -> dict:
        """element -> least element (by label) of its class"""
        return {x: self.find(x) for x in self.parent}


def p_iso_classes(c: FinCat):
    """Isomorphism classes, each named by its least object.

    Returns ``(classes, assign)`` with ``assign[obj] = class name``.
    """
    uf = _UnionFind(c.objects)
    for f, (a, b) in c.mor.items():
        if a != b and c.is_iso(f):
            uf.union(a, b)
    assign = uf.classes()
    return ordered(set(assign.values())), assign


def q_components(c: FinCat):
    """Connected components of the underlying graph, named by least object."""
    uf = _UnionFind(c.objects)
    for a, b in c.mor.values():
        uf.union(a, b)
    assign = uf.classes()
    return ordered(set(assign.values())), assign


def d_discrete(s: Iterable, name: str = "") -> FinCat:
    return FinCat.discrete(s, name=name)


def quotient_functor(c: FinCat, assign: Mapping) -> FinFunctor:
    """Functor onto the discrete category of classes (requires classes closed
    under morphisms, as for components or for iso classes of a groupoid)."""
    d = FinCat.discrete(set(assign.values()))
    return FinFunctor(c, d, dict(assign), {f: assign[c.src(f)] for f in c.mor})


def p_map(f: FinFunctor) -> dict:
    """Induced function on iso classes."""
    _, sa = p_iso_classes(f.source)
    _, ta = p_iso_classes(f.target)
    return {sa[x]: ta[f.o[x]] for x in f.source.objects}


def q_map(f: FinFunctor) -> dict:
    _, sa = q_components(f.source)
    _, ta = q_components(f.target)
    return {sa[x]: ta[f.o[x]] for x in f.source.objects}


def is_posetal(c: FinCat) -> bool:
    if c._hom is None:
        c._index()
    return all(len(v) <= 1 for v in c._hom.values())


def decalage(c: FinCat):
    """Dec c with its last-vertex functor ``d1: Dec c → c``.

    Objects of Dec c are the arrows ``f: a→b`` of c; a morphism from
    ``f: a→b`` to ``g: a→b'`` is an arrow ``h: b→b'`` with ``h∘f = g``.
    For posetal c objects are named ``(a, b)`` and morphisms ``(a, b, b')``;
    otherwise ``(a, b, f)`` and ``(f, h)``.
    """
    posetal = is_posetal(c)

    def oname(f):
        a, b = c.mor[f]
        return (a, b) if posetal else (a, b, f)

    def mname(f, h):
        if posetal:
            a, b = c.mor[f]
            return (a, b, c.tgt(h))
        return (f, h)

    objs, mors, ident, comp = [], {}, {}, {}
    d1o, d1m = {}, {}
    for f in c.morphisms():
        objs.append(oname(f))
        d1o[oname(f)] = c.tgt(f)
    for f in c.morphisms():
        for h in c.out_of(c.tgt(f)):
            g = c.comp[(h, f)]
            name = mname(f, h)
            mors[name] = (oname(f), oname(g))
            d1m[name] = h
            if h == c.ident[c.tgt(f)]:
                ident[oname(f)] = name
    out_of = defaultdict(list)
    for f in c.morphisms():
        for h in c.out_of(c.tgt(f)):
            out_of[oname(f)].append((f, h))
    for f in c.morphisms():
        for h in c.out_of(c.tgt(f)):
            g = c.comp[(h, f)]
            for (g2, k) in out_of[oname(g)]:
                comp[(mname(g2, k), mname(f, h))] = mname(f, c.comp[(k, h)])
    dec = FinCat(objs, mors, ident, comp, name="Dec")
    return dec, FinFunctor(dec, c, d1o, d1m)


def dec_functor(f: FinFunctor, dec_src: FinCat, dec_tgt: FinCat) -> FinFunctor:
    """Dec applied to a functor."""
    c, d = f.source, f.target
    ps, pt = is_posetal(c), is_posetal(d)
    o, m = {}, {}
    for g in c.morphisms():
        a, b = c.mor[g]
        src_name = (a, b) if ps else (a, b, g)
        fg = f.m[g]
        o[src_name] = (f.o[a], f.o[b]) if pt else (f.o[a], f.o[b], fg)
        for h in c.out_of(b):
            mn = (a, b, c.tgt(h)) if ps else (g, h)
            o_tgt = (f.o[a], f.o[b], d.tgt(f.m[h])) if pt else (fg, f.m[h])
            m[mn] = o_tgt
    return FinFunctor(dec_src, dec_tgt, o, m)


def dec_section(c: FinCat, dec: FinCat) -> dict:
    """Identity arrows of c as objects of Dec c (a canonical section of the
    discretization of Dec c, indexed by the objects of c)."""
    posetal = is_posetal(c)
    return {a: ((a, a) if posetal else (a, a, c.ident[a])) for a in c.objects}


# ---------------------------------------------------------------------------
# isofibrations and equivalences

def is_isofibration(f: FinFunctor) -> bool:
    return isofibration_witness(f) is None


def isofibration_witness(f: FinFunctor):
    """``(b, φ)`` with no lift, or ``None``."""
    c, d = f.source, f.target
    lifts = defaultdict(set)
    for g in c.mor:
        if c.is_iso(g):
            lifts[(c.src(g), f.m[g])].add(g)
    for b in c.objects:
        for phi in d.isos_out_of(f.o[b]):
            if not lifts.get((b, phi)):
                return (b, phi)
    return None


@dataclass(frozen=True)
class EquivalenceVerdict:
    fully_faithful: bool
    essentially_surjective: bool
    equivalence: bool
    witness: tuple = ()

    def to_json(self) -> dict:
        out = {"fully_faithful": self.fully_faithful,
               "essentially_surjective": self.essentially_surjective,
               "equivalence": self.equivalence}
        if self.witness:
            out["witness"] = [label(w) for w in self.witness]
        return out


def equivalence_analysis(f: FinFunctor) -> EquivalenceVerdict:
    c, d = f.source, f.target
    ff, witness = True, ()
    pre = defaultdict(list)
    for b in c.objects:
        pre[f.o[b]].append(b)
    for a in c.objects:
        by_target = defaultdict(list)
        for g in c.out_of(a):
            by_target[c.tgt(g)].append(g)
        fa = f.o[a]
        for b, hs in by_target.items():
            images = {f.m[g] for g in hs}
            if len(images) != len(hs) or len(images) != len(d.hom(fa, f.o[b])):
                ff, witness = False, ("hom", a, b)
                break
        if ff:
            # empty source homs must map to empty target homs
            for y in {d.tgt(u) for u in d.out_of(fa)}:
                lonely = [b for b in pre.get(y, ()) if b not in by_target]
                if lonely:
                    ff, witness = False, ("hom", a, lonely[0])
                    break
        if not ff:
            break
    _, cls = p_iso_classes(d)
    hit = {cls[f.o[a]] for a in c.objects}
    missing = [y for y in d.objects if cls[y] not in hit]
    es = not missing
    if es is False and not witness:
        witness = ("missing", missing[0])
    return EquivalenceVerdict(ff, es, ff and es, witness)


def pseudo_inverse(f: FinFunctor, verdict: EquivalenceVerdict | None = None) -> AdjointEquivalence:
    """Deterministic adjoint pseudo-inverse of an equivalence.

    For each target object y the backward image is the least source object x
    with f(x) = y when one exists (with identity counit), and otherwise the
    least x with f(x) ≅ y, connected by the least such iso f(x) → y.  So
    ``f ∘ backward`` is the identity on the image of f.
    """
    verdict = verdict or equivalence_analysis(f)
    if not verdict.equivalence:
        raise PreconditionError("not-an-equivalence")
    c, d = f.source, f.target
    by_image = defaultdict(list)
    for x in c.objects:
        by_image[f.o[x]].append(x)
    _, cls = p_iso_classes(d)
    first, exact = {}, {}
    for x in c.objects:  # objects are pre-sorted by label
        first.setdefault(cls[f.o[x]], x)
        exact.setdefault(f.o[x], x)
    bo, eps = {}, {}
    for y in d.objects:
        if y in exact:
            bo[y] = exact[y]
            eps[y] = d.ident[y]
            continue
        x = first[cls[y]]
        bo[y] = x
        eps[y] = next(u for u in d.hom(f.o[x], y) if d.is_iso(u))
    # backward on morphisms: the unique ψ with f(ψ) = ε_{y'}^{-1} ∘ φ ∘ ε_y
    pre = {}
    for g in c.mor:
        pre[(c.src(g), c.tgt(g), f.m[g])] = g
    bm = {}
    for phi, (y, y2) in d.mor.items():
        target_arrow = d.comp[(d.inverse(eps[y2]), d.comp[(phi, eps[y])])]
        bm[phi] = pre[(bo[y], bo[y2], target_arrow)]
    g = FinFunctor(d, c, bo, bm)
    eta = {}
    for x in c.objects:
        fx = f.o[x]
        eta[x] = pre[(x, bo[fx], d.inverse(eps[fx]))]
    gf = g.after(f)
    fg = f.after(g)
    return AdjointEquivalence(f, g, NatIso(FinFunctor.identity(c), gf, eta),
                              NatIso(fg, FinFunctor.identity(d), eps))


def is_equiv_relation(c: FinCat) -> bool:
    return c.is_groupoid() and is_posetal(c)
