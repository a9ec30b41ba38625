"""Truncated multi-simplicial objects in finite categories.

A :class:`MultiSimp` of arity ``m`` and truncation ``L`` stores a finite
category for every multi-index in ``{0..L}^m`` and a functor for every face
and degeneracy generator in every direction.  Sets are discrete categories,
so simplicial sets use the same class.  Directions are numbered from 0.

A monotone map ``θ: [r] → [k]`` is a tuple ``(θ(0), …, θ(r))``; ``act``
evaluates ``X(θ): X_k → X_r`` in a given direction for any such θ by
factoring it into generators.
"""
from __future__ import annotations

from collections import defaultdict
from itertools import product
from typing import Callable

from .fincat import (FinCat, FinFunctor, induced_functor, is_isomorphism, limit_cat,
                     q_components)
from .labels import label
from .report import PreconditionError, Report, WgcatError, failed, passed

DEFAULT_TRUNCATION = 3


def face_theta(k: int, j: int) -> tuple:
    """δ_j: [k-1] → [k], skipping j."""
    return tuple(i if i < j else i + 1 for i in range(k))


def degen_theta(k: int, j: int) -> tuple:
    """σ_j: [k+1] → [k], hitting j twice."""
    return tuple(i if i <= j else i - 1 for i in range(k + 2))


def compose_theta(theta: tuple, phi: tuple) -> tuple:
    """θ∘φ for monotone maps given as tuples."""
    return tuple(theta[i] for i in phi)


def monotone_maps(r: int, k: int):
    """All monotone maps [r] → [k], in lexicographic order."""
    def rec(prefix, lo):
        if len(prefix) == r + 1:
            yield tuple(prefix)
            return
        for v in range(lo, k + 1):
            prefix.append(v)
            yield from rec(prefix, v)
            prefix.pop()
    yield from rec([], 0)


def generator_word(theta: tuple, k: int) -> list:
    """Generators whose actions compose to X(θ), in application order.

    Each entry is ``(level, generator_theta)`` with the generator acting on
    ``X_level``.
    """
    image = sorted(set(theta))
    word = []
    cur = k
    for j in reversed(range(k + 1)):
        if j not in image:
            word.append((cur, face_theta(cur, j)))
            cur -= 1
    u = [image.index(t) for t in theta]
    degs = []
    while len(u) - 1 > cur:
        i = next(i for i in range(len(u) - 1) if u[i] == u[i + 1])
        degs.append(i)
        del u[i + 1]
    # the last deletion is the innermost factor, applied first
    level = cur
    for i in reversed(degs):
        word.append((level, degen_theta(level, i)))
        level += 1
    return word


def generators(k: int, L: int):
    """Face and degeneracy generators out of level k within truncation."""
    if k >= 1:
        for j in range(k + 1):
            yield face_theta(k, j)
    if k < L:
        for j in range(k + 1):
            yield degen_theta(k, j)


def _with(idx: tuple, d: int, v: int) -> tuple:
    return idx[:d] + (v,) + idx[d + 1:]


class MultiSimp:
    __slots__ = ("arity", "L", "cells", "gens", "_act", "_json", "memo")

    def __init__(self, arity: int, L: int, cells: dict, gens: dict):
        self.arity, self.L = arity, L
        self.cells = dict(cells)
        self.gens = dict(gens)
        self._act = {}
        self._json = None
        self.memo = {}  # derived data (truncations, discretizations) keyed by name

    # -- indexing -----------------------------------------------------
    def indices(self):
        return list(product(range(self.L + 1), repeat=self.arity))

    def cell(self, idx: tuple) -> FinCat:
        return self.cells[tuple(idx)]

    def act(self, idx: tuple, d: int, theta: tuple) -> FinFunctor:
        """X(θ) in direction d out of cell idx."""
        key = (idx, d, theta)
        hit = self._act.get(key)
        if hit is not None:
            return hit
        k = idx[d]
        if theta == tuple(range(k + 1)):
            out = FinFunctor.identity(self.cells[idx])
        elif key in self.gens:
            out = self.gens[key]
        else:
            out = None
            cur = idx
            for level, g in generator_word(theta, k):
                step = self.gens[(_with(cur, d, level), d, g)]
                out = step if out is None else step.after(out)
                cur = _with(cur, d, len(g) - 1)
        self._act[key] = out
        return out

    def act_multi(self, idx: tuple, thetas: dict) -> FinFunctor:
        out, cur = None, idx
        for d in sorted(thetas):
            step = self.act(cur, d, thetas[d])
            out = step if out is None else step.after(out)
            cur = _with(cur, d, len(thetas[d]) - 1)
        return out if out is not None else FinFunctor.identity(self.cells[idx])

    def vertex(self, idx: tuple, d: int, j: int) -> FinFunctor:
        return self.act(idx, d, (j,))

    # -- derived views --------------------------------------------------
    @staticmethod
    def build(arity: int, L: int, cell_fn: Callable, op_fn: Callable) -> "MultiSimp":
        """Assemble from ``cell_fn(idx)`` and ``op_fn(idx, d, θ, source, target)``,
        the latter called once per generator."""
        idxs = list(product(range(L + 1), repeat=arity))
        cells = {i: cell_fn(i) for i in idxs}
        gens = {}
        for i in idxs:
            for d in range(arity):
                for g in generators(i[d], L):
                    j = _with(i, d, len(g) - 1)
                    gens[(i, d, g)] = op_fn(i, d, g, cells[i], cells[j])
        return MultiSimp(arity, L, cells, gens)

    @staticmethod
    def constant(arity: int, L: int, c: FinCat) -> "MultiSimp":
        ident = FinFunctor.identity(c)
        return MultiSimp.build(arity, L, lambda i: c, lambda *a: ident)

    @staticmethod
    def point(c: FinCat) -> "MultiSimp":
        return MultiSimp(0, 0, {(): c}, {})

    def base(self) -> FinCat:
        """The single cell of an arity-0 object."""
        return self.cells[()]

    def slice(self, d: int, k: int) -> "MultiSimp":
        """Fix index k in direction d."""
        cells = {i[:d] + i[d + 1:]: c for i, c in self.cells.items() if i[d] == k}
        gens = {}
        for (i, e, g), fn in self.gens.items():
            if i[d] != k or e == d:
                continue
            gens[(i[:d] + i[d + 1:], e if e < d else e - 1, g)] = fn
        return MultiSimp(self.arity - 1, self.L, cells, gens)

    def level(self, k: int) -> "MultiSimp":
        return self.cached(("level", k), lambda: self.slice(0, k))

    def permute(self, order: list) -> "MultiSimp":
        """New object whose direction ``t`` is old direction ``order[t]``."""
        inv = {old: new for new, old in enumerate(order)}

        def new_idx(i):
            return tuple(i[order[t]] for t in range(self.arity))

        cells = {new_idx(i): c for i, c in self.cells.items()}
        gens = {(new_idx(i), inv[e], g): fn for (i, e, g), fn in self.gens.items()}
        return MultiSimp(self.arity, self.L, cells, gens)

    def map_cells(self, cell_fn: Callable, fun_fn: Callable) -> "MultiSimp":
        """Apply a functorial operation cellwise.

        ``cell_fn(c)`` transforms a cell; ``fun_fn(F, new_src, new_tgt)``
        transforms a generator functor.
        """
        cells = {i: cell_fn(c) for i, c in self.cells.items()}
        gens = {}
        for (i, d, g), fn in self.gens.items():
            j = _with(i, d, len(g) - 1)
            gens[(i, d, g)] = fun_fn(fn, cells[i], cells[j])
        return MultiSimp(self.arity, self.L, cells, gens)

    def truncate_to(self, L: int) -> "MultiSimp":
        keep = {i: c for i, c in self.cells.items() if max(i, default=0) <= L}
        gens = {}
        for (i, d, g), fn in self.gens.items():
            if i in keep and len(g) - 1 <= L and (len(g) - 1 < i[d] or i[d] < L):
                gens[(i, d, g)] = fn
        return MultiSimp(self.arity, L, keep, gens)

    # -- comparison and serialization ------------------------------------
    def to_json(self) -> dict:
        if self._json is None:
            cells = {",".join(map(str, i)) or "*": c.to_json()
                     for i, c in sorted(self.cells.items())}
            faces, degs = [], []
            for (i, d, g), fn in sorted(self.gens.items(), key=lambda kv: (kv[0][0], kv[0][1],
                                                                          kv[0][2])):
                k = i[d]
                entry = {"cell": ",".join(map(str, i)), "direction": d + 1,
                         "map": list(g), "functor": fn.to_json()}
                (faces if len(g) - 1 < k else degs).append(entry)
            self._json = {"arity": self.arity, "truncation": self.L, "cells": cells,
                          "faces": faces, "degeneracies": degs}
        return self._json

    @staticmethod
    def from_json(doc: dict) -> "MultiSimp":
        from .report import MalformedError
        try:
            arity, L = int(doc["arity"]), int(doc["truncation"])
            cells = {}
            for key, cdoc in doc["cells"].items():
                idx = () if key in ("", "*") else tuple(int(v) for v in key.split(","))
                cells[idx] = FinCat.from_json(cdoc)
            gens = {}
            for entry in list(doc.get("faces", [])) + list(doc.get("degeneracies", [])):
                key = entry["cell"]
                idx = () if key in ("", "*") else tuple(int(v) for v in key.split(","))
                d, g = int(entry["direction"]) - 1, tuple(entry["map"])
                j = _with(idx, d, len(g) - 1)
                gens[(idx, d, g)] = FinFunctor.from_json(entry["functor"], cells[idx], cells[j])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise MalformedError(f"malformed multi-simplicial document: {exc}") from exc
        if set(cells) != set(product(range(L + 1), repeat=arity)):
            raise MalformedError("cell table does not cover the truncated index set")
        return MultiSimp(arity, L, cells, gens)

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiSimp) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash((self.arity, self.L, len(self.cells)))

    def __repr__(self) -> str:
        sizes = {i: c.size() for i, c in sorted(self.cells.items())}
        return f"MultiSimp(arity={self.arity}, L={self.L}, cells={sizes})"

    def cached(self, key, fn):
        if key not in self.memo:
            self.memo[key] = fn()
        return self.memo[key]

    def is_constant(self) -> bool:
        first = next(iter(self.cells.values()))
        return (all(c == first for c in self.cells.values())
                and all(fn.is_identity() for fn in self.gens.values()))


class SimpMap:
    """Natural family of functors between two MultiSimps."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: MultiSimp, target: MultiSimp, comps: dict):
        self.source, self.target = source, target
        self.comps = dict(comps)

    @staticmethod
    def identity(x: MultiSimp) -> "SimpMap":
        return SimpMap(x, x, {i: FinFunctor.identity(c) for i, c in x.cells.items()})

    def after(self, first: "SimpMap") -> "SimpMap":
        return SimpMap(first.source, self.target,
                       {i: self.comps[i].after(first.comps[i]) for i in first.comps})

    def level(self, k: int) -> "SimpMap":
        return self.slice(0, k)

    def slice(self, d: int, k: int) -> "SimpMap":
        return SimpMap(self.source.slice(d, k), self.target.slice(d, k),
                       {i[:d] + i[d + 1:]: f for i, f in self.comps.items() if i[d] == k})

    def permute(self, order: list) -> "SimpMap":
        def new_idx(i):
            return tuple(i[order[t]] for t in range(len(i)))
        return SimpMap(self.source.permute(order), self.target.permute(order),
                       {new_idx(i): f for i, f in self.comps.items()})

    def base(self) -> FinFunctor:
        return self.comps[()]

    def check(self) -> Report:
        from .fincat import check_functor
        for i, f in self.comps.items():
            r = check_functor(f)
            if not r:
                return failed("map-component", r.clause, path=(i,), witness=r.witness)
        for (i, d, g), fn in self.source.gens.items():
            j = _with(i, d, len(g) - 1)
            lhs = self.target.act(i, d, g).after(self.comps[i])
            rhs = self.comps[j].after(fn)
            if not lhs.same_as(rhs):
                return failed("map-naturality", path=(i, d + 1), witness=g)
        return passed("map")

    def to_json(self) -> dict:
        return {",".join(map(str, i)) or "*": f.to_json() for i, f in sorted(self.comps.items())}

    def is_identity(self) -> bool:
        return all(f.is_identity() for f in self.comps.values())


# ---------------------------------------------------------------------------
# simplicial identities

def check_simplicial(x: MultiSimp) -> Report:
    """Exhaustive audit of the simplicial identities within truncation.

    Every composable pair of generators in one direction must agree with the
    normal form of the composite map, and generators in distinct directions
    must commute.
    """
    from .fincat import check_functor
    for key, fn in x.gens.items():
        r = check_functor(fn)
        if not r:
            return failed("generator-functor", r.clause, path=key[:2], witness=key[2])
    for i in x.indices():
        for d in range(x.arity):
            k = i[d]
            for g1 in generators(k, x.L):
                r = len(g1) - 1
                j = _with(i, d, r)
                first = x.gens[(i, d, g1)]
                for g2 in generators(r, x.L):
                    second = x.gens[(j, d, g2)]
                    composite = compose_theta(g1, g2)
                    expect = _normal_form(x, i, d, composite)
                    if not second.after(first).same_as(expect):
                        return failed("simplicial-identity", path=(i, d + 1),
                                      witness=(g1, g2))
                for e in range(x.arity):
                    if e == d:
                        continue
                    for h in generators(i[e], x.L):
                        j2 = _with(i, e, len(h) - 1)
                        lhs = x.gens[(j, e, h)].after(first)
                        rhs = x.gens[(j2, d, g1)].after(x.gens[(i, e, h)])
                        if not lhs.same_as(rhs):
                            return failed("directions-commute", path=(i, d + 1, e + 1),
                                          witness=(g1, h))
    return passed("simplicial", truncation=x.L)


def _normal_form(x: MultiSimp, i: tuple, d: int, theta: tuple) -> FinFunctor:
    out, cur = None, i
    for level, g in generator_word(theta, i[d]):
        step = x.gens[(_with(cur, d, level), d, g)]
        out = step if out is None else step.after(out)
        cur = _with(cur, d, len(g) - 1)
    return out if out is not None else FinFunctor.identity(x.cells[i])


# ---------------------------------------------------------------------------
# nerves

def _chain_parts(c: FinCat, k: int, x):
    """(vertices, arrows) of a level-k chain."""
    if k == 0:
        return [x], []
    arrows = [x] if k == 1 else list(x)
    verts = [c.src(arrows[0])] + [c.tgt(a) for a in arrows]
    return verts, arrows


def _chain_name(verts, arrows):
    if not arrows:
        return verts[0]
    if len(arrows) == 1:
        return arrows[0]
    return tuple(arrows)


def chains(c: FinCat, k: int) -> list:
    if k == 0:
        return list(c.objects)
    if k == 1:
        return list(c.morphisms())
    out = []

    def rec(seq):
        if len(seq) == k:
            out.append(tuple(seq))
            return
        for g in c.out_of(c.tgt(seq[-1])):
            seq.append(g)
            rec(seq)
            seq.pop()

    for f in c.morphisms():
        rec([f])
    return out


def chain_action(c: FinCat, k: int, theta: tuple, x):
    verts, arrows = _chain_parts(c, k, x)
    new_verts = [verts[t] for t in theta]
    new_arrows = []
    for a, b in zip(theta, theta[1:]):
        f = c.ident[verts[a]]
        for t in range(a, b):
            f = c.comp[(arrows[t], f)]
        new_arrows.append(f)
    return _chain_name(new_verts, new_arrows)


def nerve(c: FinCat, L: int = DEFAULT_TRUNCATION) -> MultiSimp:
    """Truncated nerve as a simplicial object in discrete categories."""
    levels = {(k,): FinCat.discrete(chains(c, k)) for k in range(L + 1)}

    def op(i, d, g, s, t):
        k = i[0]
        fmap = {x: chain_action(c, k, g, x) for x in s.objects}
        return FinFunctor(s, t, fmap, fmap)

    return MultiSimp.build(1, L, lambda i: levels[i], op)


def nerve_functor_level(f: FinFunctor, k: int, src: FinCat, tgt: FinCat) -> FinFunctor:
    """Level k of the nerve of a functor, between discrete chain categories."""
    def image(x):
        if k == 0:
            return f.o[x]
        if k == 1:
            return f.m[x]
        return tuple(f.m[a] for a in x)
    fmap = {x: image(x) for x in src.objects}
    return FinFunctor(src, tgt, fmap, fmap)


# ---------------------------------------------------------------------------
# Segal maps

def _chain_limit(x: MultiSimp, idx: tuple, d: int, base_map=None):
    """Target of the Segal map at idx in direction d.

    ``base_map`` (a functor family on the 0-cell, e.g. a discretization)
    replaces the vertex maps by their composites with it.
    """
    k = idx[d]
    one = _with(idx, d, 1)
    c1 = x.cells[one]
    tgt_v = x.vertex(one, d, 1)
    src_v = x.vertex(one, d, 0)
    if base_map is not None:
        tgt_v, src_v = base_map.after(tgt_v), base_map.after(src_v)
    cons = [(j, tgt_v, j + 1, src_v) for j in range(k - 1)]
    return limit_cat([c1] * k, cons, name="segal")


def segal_map(x: MultiSimp, idx: tuple, d: int = 0, base_map=None) -> FinFunctor:
    """X_k → X_1 ×_{X_0} … ×_{X_0} X_1 in direction d (or over a quotient of
    X_0 given by ``base_map``, which yields the induced Segal map)."""
    k = idx[d]
    if k < 2 or k > x.L:
        raise PreconditionError(f"Segal map needs 2 <= k <= {x.L}, got {k}")
    target = _chain_limit(x, idx, d, base_map)
    parts = [(None, x.act(idx, d, (j - 1, j))) for j in range(1, k + 1)]
    return induced_functor(x.cells[idx], target, parts)


def induced_segal_map(x: MultiSimp, idx: tuple, gamma: FinFunctor | None, d: int = 0):
    if gamma is None:
        raise PreconditionError("missing gamma")
    return segal_map(x, idx, d, base_map=gamma)


def segal_report(x: MultiSimp, directions=None) -> Report:
    """Are all Segal maps isomorphisms (within truncation)?"""
    dirs = range(x.arity) if directions is None else directions
    for d in dirs:
        for idx in x.indices():
            if idx[d] >= 2:
                if not is_isomorphism(segal_map(x, idx, d)):
                    return failed("segal", f"Segal map not invertible", path=(idx, d + 1),
                                  truncation=x.L)
    return passed("segal", truncation=x.L)


class SegalFailure(WgcatError):
    kind = "segal-failure"

    def __init__(self, k, where=()):
        super().__init__(f"Segal condition fails at level {k} {where}")
        self.k, self.where = k, where


def reconstruct_category(t: MultiSimp, check_axioms: bool = True) -> FinCat:
    """Category whose nerve is the simplicial set t (arity 1, discrete cells)."""
    if t.arity != 1:
        raise PreconditionError("expects a simplicial object")
    if t.L < 2:
        raise PreconditionError("need truncation >= 2")
    for k in range(2, t.L + 1):
        if not is_isomorphism(segal_map(t, (k,), 0)):
            raise SegalFailure(k)
    return _category_from_levels(t, check_axioms)


def _category_from_levels(t: MultiSimp, check_axioms=True) -> FinCat:
    x0, x1, x2 = t.cells[(0,)], t.cells[(1,)], t.cells[(2,)]
    src, tgt = t.vertex((1,), 0, 0).o, t.vertex((1,), 0, 1).o
    ident = t.act((0,), 0, (0, 0)).o
    e01, e12, e02 = (t.act((2,), 0, th).o for th in ((0, 1), (1, 2), (0, 2)))
    mors = {f: (src[f], tgt[f]) for f in x1.objects}
    comp = {}
    for s in x2.objects:
        comp[(e12[s], e01[s])] = e02[s]
    c = FinCat(x0.objects, mors, ident, comp)
    if check_axioms:
        from .fincat import check_category
        rep = check_category(c)
        if not rep:
            raise SegalFailure(3 if rep.clause == "associativity" else 2)
    return c


def categorify_last(t: MultiSimp) -> MultiSimp:
    """Turn the last direction of a set-valued object into categories.

    Cell ``idx`` of the result is the category whose nerve is
    ``s ↦ t[idx + (s,)]``; raises :class:`SegalFailure` when that is not a
    nerve.
    """
    m = t.arity - 1
    cats = {}
    for idx in product(range(t.L + 1), repeat=m):
        s = _column(t, idx)
        try:
            cats[idx] = reconstruct_category(s)
        except SegalFailure as exc:
            raise SegalFailure(exc.k, where=idx) from None

    def op(i, d, g, s, tg):
        o = t.gens[(i + (0,), d, g)].o
        mm = t.gens[(i + (1,), d, g)].o
        return FinFunctor(s, tg, o, mm)

    return MultiSimp.build(m, t.L, lambda i: cats[i], op)


def _column(t: MultiSimp, idx: tuple) -> MultiSimp:
    m = len(idx)
    cells = {(s,): t.cells[idx + (s,)] for s in range(t.L + 1)}
    gens = {((i[m],), 0, g): fn for (i, d, g), fn in t.gens.items()
            if d == m and i[:m] == idx}
    return MultiSimp(1, t.L, cells, gens)


def multinerve_of_table(x: MultiSimp, L: int | None = None) -> MultiSimp:
    """Add a last direction by taking the nerve of every cell."""
    m = x.arity
    if L is None:
        L = x.L if m else DEFAULT_TRUNCATION
    if m and L != x.L:
        raise PreconditionError("truncation mismatch")
    chain_cells = {i: {s: FinCat.discrete(chains(c, s)) for s in range(L + 1)}
                   for i, c in x.cells.items()}

    def cell(j):
        return chain_cells[j[:m]][j[m]]

    def op(j, d, g, s, tg):
        i, k = j[:m], j[m]
        if d == m:
            c = x.cells[i]
            fmap = {y: chain_action(c, k, g, y) for y in s.objects}
            return FinFunctor(s, tg, fmap, fmap)
        return nerve_functor_level(x.gens[(i, d, g)], k, s, tg)

    return MultiSimp.build(m + 1, L, cell, op)


def check_multinerve_property(t: MultiSimp) -> bool:
    """Set-valued table satisfies the Segal isomorphism in every direction."""
    if not all(c.is_discrete() for c in t.cells.values()):
        return False
    return bool(segal_report(t))


def total_components(x: MultiSimp, assign_cells=None):
    """Connected components of all objects of all cells, glued along
    morphisms and structure maps.  Returns ``(names, assign)`` where
    ``assign[(idx, obj)]`` is the component name: the least object of the
    all-zero cell in it."""
    parent = {}

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for i, c in x.cells.items():
        for o in c.objects:
            parent[(i, o)] = (i, o)
    for i, c in x.cells.items():
        for f, (a, b) in c.mor.items():
            union((i, a), (i, b))
    for (i, d, g), fn in x.gens.items():
        j = _with(i, d, len(g) - 1)
        for o, v in fn.o.items():
            union((i, o), (j, v))
    zero = tuple([0] * x.arity)
    groups = defaultdict(list)
    for key in parent:
        groups[find(key)].append(key)
    assign = {}
    for members in groups.values():
        zeros = [o for (i, o) in members if i == zero]
        if zeros:
            name = min(zeros, key=label)
        else:
            name = min((o for _, o in members), key=label)
        for key in members:
            assign[key] = name
    return sorted(set(assign.values()), key=label), assign


def product_table(x: MultiSimp, y: MultiSimp) -> MultiSimp:
    """Cellwise product of two tables of the same shape."""
    if (x.arity, x.L) != (y.arity, y.L):
        raise PreconditionError("product needs tables of the same shape")
    cells = {i: limit_cat([x.cells[i], y.cells[i]], []) for i in x.cells}
    gens = {}
    for key, fx in x.gens.items():
        i, d, g = key
        j = _with(i, d, len(g) - 1)
        gens[key] = induced_functor(cells[i], cells[j], [(0, fx), (1, y.gens[key])])
    return MultiSimp(x.arity, x.L, cells, gens)


def pullback_table(f: SimpMap, g: SimpMap):
    """Cellwise pullback of ``f: X → Z`` and ``g: Y → Z`` with both projections."""
    if f.target is not g.target and f.target.to_json() != g.target.to_json():
        raise PreconditionError("pullback legs must share a target")
    x, y = f.source, g.source
    cells = {i: limit_cat([x.cells[i], y.cells[i]], [(0, f.comps[i], 1, g.comps[i])])
             for i in x.cells}
    gens = {}
    for key, fx in x.gens.items():
        i, d, th = key
        j = _with(i, d, len(th) - 1)
        gens[key] = induced_functor(cells[i], cells[j], [(0, fx), (1, y.gens[key])])
    p = MultiSimp(x.arity, x.L, cells, gens)
    pr0 = SimpMap(p, x, {i: FinFunctor(c, x.cells[i], {o: o[0] for o in c.objects},
                                       {m: m[0] for m in c.mor}) for i, c in cells.items()})
    pr1 = SimpMap(p, y, {i: FinFunctor(c, y.cells[i], {o: o[1] for o in c.objects},
                                       {m: m[1] for m in c.mor}) for i, c in cells.items()})
    return p, pr0, pr1
