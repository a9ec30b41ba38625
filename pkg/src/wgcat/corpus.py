"""Deterministic small instances of every model class, and brute-force oracles.

Randomness is counter based: every draw uses a fresh ``random.Random``
seeded by a string built from the spec fields, so a :class:`GenSpec`
always yields the identical document and no global state is touched.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

from .fincat import FinCat, FinFunctor, NatIso, check_category, check_functor, product_cat
from .labels import label, ordered
from .msimp import (DEFAULT_TRUNCATION, MultiSimp, SimpMap, chains, nerve, product_table)
from .report import GuardError, PreconditionError

CLASSES = ("fincat", "hd", "catwg", "tawg", "tam", "ftawg", "groupoidal")


@dataclass(frozen=True)
class GenSpec:
    seed: int
    cls: str = "catwg"
    n: int = 2
    max_objects: int = 4
    L: int = DEFAULT_TRUNCATION

    def rng(self, *extra) -> random.Random:
        key = ":".join(str(v) for v in (self.cls, self.n, self.seed, self.max_objects,
                                        self.L) + extra)
        return random.Random(key)


# ---------------------------------------------------------------------------
# finite categories

def relabel(c: FinCat, prefix: str = "") -> FinCat:
    """Same category with every identifier rendered as a string."""
    o = {x: prefix + label(x) for x in c.objects}
    m = {f: prefix + label(f) for f in c.mor}
    return FinCat([o[x] for x in c.objects], {m[f]: (o[a], o[b]) for f, (a, b) in c.mor.items()},
                  {o[x]: m[c.ident[x]] for x in c.objects},
                  {(m[g], m[f]): m[h] for (g, f), h in c.comp.items()}, name=c.name)


def preorder_category(n_objects: int, relation: set) -> FinCat:
    objs = [chr(ord("a") + i) for i in range(n_objects)]
    le = {(i, i) for i in range(n_objects)} | set(relation)
    changed = True
    while changed:
        changed = False
        for (i, j), (j2, k) in itertools.product(list(le), list(le)):
            if j == j2 and (i, k) not in le:
                le.add((i, k))
                changed = True
    mors = {f"{objs[i]}{objs[j]}": (objs[i], objs[j]) for i, j in le}
    comp = {}
    for (i, j) in le:
        for (j2, k) in le:
            if j == j2:
                comp[(f"{objs[j]}{objs[k]}", f"{objs[i]}{objs[j]}")] = f"{objs[i]}{objs[k]}"
    return FinCat(objs, mors, {x: x + x for x in objs}, comp, name="preorder")


def free_dag_category(n_objects: int, edges: list) -> FinCat:
    """Free category on an acyclic quiver; morphisms are paths."""
    objs = [chr(ord("a") + i) for i in range(n_objects)]
    paths = {f"1{x}": (x, x, ()) for x in objs}
    frontier = [(objs[u], objs[v], (name,)) for name, (u, v) in enumerate(edges)]
    while frontier:
        nxt = []
        for a, b, p in frontier:
            pid = ".".join(f"e{e}" for e in p)
            paths[pid] = (a, b, p)
            for name, (u, v) in enumerate(edges):
                if objs[u] == b:
                    nxt.append((a, objs[v], p + (name,)))
        frontier = nxt
    by_path = {p: pid for pid, (_, _, p) in paths.items() if p}
    mors = {pid: (a, b) for pid, (a, b, _) in paths.items()}
    comp = {}
    for f, (a, b, pf) in paths.items():
        for g, (b2, c, pg) in paths.items():
            if b2 != b:
                continue
            if not pf:
                comp[(g, f)] = g
            elif not pg:
                comp[(g, f)] = f
            else:
                comp[(g, f)] = by_path[pf + pg]
    return FinCat(objs, mors, {x: f"1{x}" for x in objs}, comp, name="free")


def random_fincat(rng: random.Random, max_objects: int = 5, max_morphisms: int = 12) -> FinCat:
    """One of several families, rejected until within the size bounds."""
    for _ in range(200):
        kind = rng.choice(["preorder", "free", "group", "equiv", "product"])
        n = rng.randint(1, max_objects)
        if kind == "preorder":
            rel = {(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < 0.3}
            c = preorder_category(n, rel)
        elif kind == "free":
            edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
            if len(edges) > 1 and rng.random() < 0.3:
                edges.append(edges[0])
            c = free_dag_category(n, edges)
        elif kind == "group":
            c = FinCat.cyclic_group(rng.randint(1, 4))
        elif kind == "equiv":
            c = gen_hd_from_surjection([str(i) for i in range(n)],
                                       {str(i): rng.randint(0, max(0, n - 2)) for i in range(n)})
        else:
            m = rng.randint(1, max(1, max_objects // 2))
            rel = {(i, j) for i in range(m) for j in range(m) if i < j and rng.random() < 0.5}
            c = relabel(product_cat([preorder_category(m, rel),
                                     FinCat.cyclic_group(rng.randint(1, 2))]))
        if len(c.objects) <= max_objects and len(c.mor) <= max_morphisms:
            return c
    raise GuardError("could not draw a category within the bounds")


def gen_fincat(spec: GenSpec) -> FinCat:
    return random_fincat(spec.rng("fincat"), spec.max_objects + 1, 12)


def gen_hd_from_surjection(a, f) -> FinCat:
    """Equivalence-relation category A[f] for a surjection f: A → B."""
    a = list(a)
    missing = [x for x in a if x not in f]
    if missing:
        raise PreconditionError(f"surjection undefined on {missing[0]}")
    return relabel(FinCat.equivalence_relation({x: f[x] for x in a}))


def surjection_onto(rng: random.Random, targets: list, max_total: int, max_fiber: int = 2,
                    force: bool = False):
    """A surjection onto ``targets`` with small random fibers; ``force``
    makes the first fiber non-trivial whenever the size bound allows."""
    f = {}
    budget = max_total - len(targets)
    for n, t in enumerate(targets):
        extra = 0
        if budget > 0 and (rng.random() < 0.5 or (force and n == 0)):
            extra = rng.randint(1, min(max_fiber - 1, budget)) if max_fiber > 1 else 0
            budget -= extra
        for i in range(1 + extra):
            f[f"{label(t)}~{i}"] = t
    return f


def random_hd(rng: random.Random, max_objects: int = 4) -> FinCat:
    n = rng.randint(1, max_objects)
    return gen_hd_from_surjection([str(i) for i in range(n)],
                                  {str(i): rng.randint(0, max(0, n - 2)) for i in range(n)})


# ---------------------------------------------------------------------------
# strict structures with discrete objects

def suspension2(g: FinCat, L: int = DEFAULT_TRUNCATION) -> MultiSimp:
    """One-object, one-1-cell double category whose 2-cells form the
    commutative monoid ``g`` (a one-object category); level k is g^k."""
    (star,) = g.objects
    e = g.ident[star]
    levels = {k: relabel_power(g, k) for k in range(L + 1)}

    def op(i, d, th, s, t):
        k, r = i[0], len(th) - 1

        def mor(tup):
            out = []
            for a, b in zip(th, th[1:]):
                v = e
                for j in range(a, b):
                    v = g.comp[(tup[j], v)]
                out.append(v)
            return tuple(out)
        o = {x: tuple(star for _ in range(r)) for x in s.objects}
        return FinFunctor(s, t, o, {f: mor(f) for f in s.mor})

    return MultiSimp.build(1, L, lambda i: levels[i[0]], op)


def relabel_power(g: FinCat, k: int) -> FinCat:
    (star,) = g.objects
    obj = tuple(star for _ in range(k))
    mors = {t: (obj, obj) for t in itertools.product(g.morphisms(), repeat=k)}
    comp = {(a, b): tuple(g.comp[(x, y)] for x, y in zip(a, b)) for a in mors for b in mors}
    return FinCat([obj], mors, {obj: tuple(g.ident[star] for _ in range(k))}, comp)


def strict_two_category(c: FinCat, g: FinCat | None, L: int) -> MultiSimp:
    """Nerve of c, optionally thickened by 2-cells from an abelian group g."""
    x = nerve(c, L)
    if g is None or len(g.mor) == 1:
        return x
    return product_table(x, suspension2(g, L))


def level_zero_surjection(x: MultiSimp, rng: random.Random, max_objects: int,
                          force: bool = False):
    """A homotopically discrete Y0 with a levelwise surjective isofibration
    onto the discrete level 0 of x."""
    x0 = x.level(0)
    base = x0.cells[tuple([0] * x0.arity)]
    targets = list(base.objects)
    f = surjection_onto(rng, targets, max(max_objects, len(targets)), force=force)
    a_f = gen_hd_from_surjection(list(f), f)
    back = {label(k): v for k, v in f.items()}
    if x0.arity == 0:
        y0 = MultiSimp.point(a_f)
    else:
        style = rng.choice(["constant", "nerve"]) if x0.arity == 1 else "constant"
        if style == "constant":
            y0 = MultiSimp.constant(x0.arity, x0.L, a_f)
        else:
            y0 = nerve(a_f, x0.L)
    comps = {}
    for i, yc in y0.cells.items():
        xc = x0.cells[i]
        if x0.arity:
            v = x0.vertex(i, 0, 0).o
            over = {v[t]: t for t in xc.objects}
        else:
            over = {t: t for t in xc.objects}
        if yc is a_f:
            o = {a: over[back[a]] for a in yc.objects}
        else:
            k = i[0]

            def first_vertex(ch, k=k):
                if k == 0:
                    return ch
                return a_f.src(ch if k == 1 else ch[0])
            o = {ch: over[back[first_vertex(ch)]] for ch in yc.objects}
        comps[i] = FinFunctor(yc, xc, o, {m: xc.ident[o[yc.src(m)]] for m in yc.mor})
    return SimpMap(y0, x0, comps)


def _cell_budget(x: MultiSimp) -> int:
    return max(len(c.mor) for c in x.cells.values())


def gen_catwg(spec: GenSpec, budget: int | None = None, retries: int = 40) -> MultiSimp:
    """A weakly globular instance: a strict structure with discrete objects,
    shifted along a surjection from an equivalence relation."""
    from .constructions import shift
    from .models import catwg_report
    if spec.n < 2 or spec.n > 3:
        raise GuardError("generator supports dimensions 2 and 3")
    if spec.max_objects < 1:
        # no room for any structure: the one-point discrete object
        return MultiSimp.constant(spec.n - 1, spec.L, FinCat.discrete(["*"]))
    if budget is None:
        budget = 400 if spec.n == 2 else 600
    for attempt in range(retries):
        rng = spec.rng("catwg", attempt)
        if spec.n == 2:
            c = random_fincat(rng, min(3, spec.max_objects), 6)
            g = FinCat.cyclic_group(rng.choice([1, 1, 2])) if len(c.objects) <= 2 else None
            x = strict_two_category(c, g, spec.L)
        else:
            x = bar_table(*BAR_CHOICES[(spec.seed + attempt) % len(BAR_CHOICES)], L=min(spec.L, 2))
            if catwg_report(x):
                return x
            continue
        if spec.max_objects <= 1:
            return x
        f0 = level_zero_surjection(x, rng, spec.max_objects, force=spec.n > 2)
        out, _ = shift(x, f0)
        if _cell_budget(out) > budget:
            continue
        if catwg_report(out):
            return out
    raise GuardError("retry budget exhausted")


# (|G|, |H|, |M|): G = Z/|G| with H its subgroup of order |H|, M = Z/|M|
BAR_CHOICES = [(2, 2, 1), (4, 2, 1), (2, 1, 2), (2, 1, 3), (3, 1, 2), (6, 2, 1), (4, 1, 1),
               (6, 1, 1), (3, 1, 1), (2, 1, 1)]


def bar_table(g: int, h: int, m: int, L: int = 2) -> MultiSimp:
    """Bar construction of the commutative group object G[f] × B M.

    G[f] is the equivalence relation of the quotient Z/g → Z/(g/h) and B M
    is the one-object category of Z/m seen through its nerve.  Level k of
    the outer direction is the k-fold power; faces add adjacent factors.
    The result has a point as level 0 and a constant groupoid direction,
    so it is weakly globular with non-discrete level 0 in every level k ≥ 1.
    """
    step = g // h

    def cell_base(k2):
        objs = [(str(a), ms) for a in range(g)
                for ms in itertools.product([str(i) for i in range(m)], repeat=k2)]
        mors = {((str(a), str(b)), ms): ((str(a), ms), (str(b), ms))
                for a in range(g) for b in range(g) if (a - b) % step == 0
                for ms in itertools.product([str(i) for i in range(m)], repeat=k2)}
        ident = {(a, ms): ((a, a), ms) for a, ms in objs}
        comp = {}
        for (ab, ms), (x, y) in mors.items():
            for (cd, ms2), (y2, z) in mors.items():
                if y2 == y:
                    comp[((cd, ms2), (ab, ms))] = ((ab[0], cd[1]), ms)
        return FinCat(objs, mors, ident, comp)

    bases = {k2: cell_base(k2) for k2 in range(L + 1)}
    cells = {(k1, k2): product_cat([bases[k2]] * k1) for k1 in range(L + 1)
             for k2 in range(L + 1)}

    def add(xs, mod):
        return str(sum(int(v) for v in xs) % mod)

    def add_m(tuples, k2):
        return tuple(add([t[i] for t in tuples], m) for i in range(k2))

    def bar(th, items, combine):
        return tuple(combine(items[a:b]) for a, b in zip(th, th[1:]))

    def op(i, d, th, s, t):
        k1, k2 = i
        if d == 0:
            def fo(x):
                return bar(th, x, lambda part: (add([p[0] for p in part], g),
                                                add_m([p[1] for p in part], k2)))

            def fm(f):
                return bar(th, f, lambda part: ((add([p[0][0] for p in part], g),
                                                 add([p[0][1] for p in part], g)),
                                                add_m([p[1] for p in part], k2)))
        else:
            def inner(ms):
                return tuple(add(ms[a:b], m) for a, b in zip(th, th[1:]))

            def fo(x):
                return tuple((a, inner(ms)) for a, ms in x)

            def fm(f):
                return tuple((ab, inner(ms)) for ab, ms in f)
        return FinFunctor(s, t, {x: fo(x) for x in s.objects}, {f: fm(f) for f in s.mor})

    return MultiSimp.build(2, L, lambda i: cells[i], op)


def _triple_from(z: MultiSimp) -> MultiSimp:
    """A strict 3-fold object: the 2-fold table z with every cell replaced
    by its nerve (a discrete third direction)."""
    from .msimp import multinerve_of_table
    return multinerve_of_table(z)


def gen_hd(spec: GenSpec) -> MultiSimp:
    rng = spec.rng("hd")
    c = random_hd(rng, spec.max_objects)
    if spec.n == 1:
        return MultiSimp.point(c)
    if spec.n == 2:
        return rng.choice([MultiSimp.constant(1, spec.L, c), nerve(c, spec.L)])
    raise GuardError("generator supports dimensions 1 and 2")


def gen_groupoidal(spec: GenSpec) -> MultiSimp:
    """Weakly globular instances whose strict part is a groupoid."""
    from .constructions import shift
    rng = spec.rng("groupoidal")
    c = rng.choice([FinCat.walking_iso(), FinCat.cyclic_group(2), random_hd(rng, 3),
                    FinCat.cyclic_group(3)])
    x = strict_two_category(c, FinCat.cyclic_group(2) if len(c.objects) == 1 else None, spec.L)
    f0 = level_zero_surjection(x, rng, spec.max_objects)
    return shift(x, f0)[0]


def generate(spec: GenSpec):
    """Dispatch on the class name; returns a document-ready structure."""
    if spec.cls == "fincat":
        return gen_fincat(spec)
    if spec.cls == "hd":
        return gen_hd(spec)
    if spec.cls in ("catwg", "tawg", "lta"):
        return gen_catwg(spec)
    if spec.cls == "groupoidal":
        return gen_groupoidal(spec)
    if spec.cls == "ftawg":
        from .constructions import as_ftam, to_fcat_G
        return as_ftam(to_fcat_G(gen_catwg(spec), check=False))
    if spec.cls == "tam":
        from .constructions import to_fcat_G
        from .discretize import d_n
        from .constructions import as_ftam
        return d_n(as_ftam(to_fcat_G(gen_catwg(spec), check=False)))
    raise PreconditionError(f"unknown class {spec.cls}")


def random_cospan_over_discrete(rng: random.Random):
    """Functors A → E ← B with E discrete."""
    e = FinCat.discrete([f"x{i}" for i in range(rng.randint(1, 2))])
    legs = []
    for side in "AB":
        c = random_fincat(rng, 3, 6)
        # send each connected component to one element of e
        from .fincat import q_components
        _, comp = q_components(c)
        choice = {k: rng.choice(list(e.objects)) for k in set(comp.values())}
        o = {x: choice[comp[x]] for x in c.objects}
        legs.append(FinFunctor(c, e, o, {f: o[c.src(f)] for f in c.mor}))
    return legs[0], legs[1]


def random_isofibration(rng: random.Random):
    """An isofibration f: B → D built as a projection D × K → D composed
    with nothing fancy, or as d1 of a décalage, or into a discrete target."""
    from .fincat import decalage, projection
    kind = rng.choice(["projection", "decalage", "discrete"])
    if kind == "projection":
        d = random_fincat(rng, 3, 6)
        k = random_fincat(rng, 2, 4)
        p = product_cat([d, k])
        return projection(p, d, 0)
    if kind == "decalage":
        d = random_hd(rng, 4) if rng.random() < 0.5 else random_fincat(rng, 3, 6)
        dec, d1 = decalage(d)
        return d1
    c = random_fincat(rng, 3, 6)
    from .fincat import q_components
    names, comp = q_components(c)
    e = FinCat.discrete(names)
    return FinFunctor(c, e, dict(comp), {f: comp[c.src(f)] for f in c.mor})


def random_functor_into(rng: random.Random, d: FinCat, tries: int = 50):
    """A functor from a small random category into d, by random search over
    object maps and forced choices on generating morphisms (rejection)."""
    for _ in range(tries):
        c = random_fincat(rng, 3, 6)
        o = {x: rng.choice(list(d.objects)) for x in c.objects}
        m = {}
        ok = True
        for f in c.morphisms():
            a, b = c.mor[f]
            if f == c.ident[a]:
                m[f] = d.ident[o[a]]
                continue
            homs = d.hom(o[a], o[b])
            if not homs:
                ok = False
                break
            m[f] = rng.choice(homs)
        if ok:
            fn = FinFunctor(c, d, o, m)
            if check_functor(fn):
                return fn
    # fall back to a constant functor from a point
    pt = FinCat.discrete(["*"])
    x = d.objects[0]
    return FinFunctor(pt, d, {"*": x}, {"*": d.ident[x]})


# ---------------------------------------------------------------------------
# oracle for equivalence of categories

@dataclass
class OracleVerdict:
    verdict: str  # "equivalent" | "not-equivalent" | "inconclusive"
    witness: tuple = ()


def _all_functors(c: FinCat, d: FinCat, deadline: float):
    """Every functor c → d, by backtracking over objects then morphisms."""
    objs, mors = list(c.objects), list(c.morphisms())
    ident_of = {c.ident[x]: x for x in c.objects}

    def obj_maps(i, cur):
        if time.monotonic() > deadline:
            raise TimeoutError
        if i == len(objs):
            yield dict(cur)
            return
        for y in d.objects:
            cur[objs[i]] = y
            yield from obj_maps(i + 1, cur)
        cur.pop(objs[i], None)

    for o in obj_maps(0, {}):
        def mor_maps(i, cur):
            if time.monotonic() > deadline:
                raise TimeoutError
            if i == len(mors):
                yield dict(cur)
                return
            f = mors[i]
            a, b = c.mor[f]
            cands = [d.ident[o[a]]] if f in ident_of else d.hom(o[a], o[b])
            for v in cands:
                cur[f] = v
                # composition with already-mapped arrows
                good = True
                for g in c.out_of(b):
                    if g in cur and (g, f) in c.comp and c.comp[(g, f)] in cur:
                        if d.comp[(cur[g], v)] != cur[c.comp[(g, f)]]:
                            good = False
                            break
                if good:
                    for h in c.into(a):
                        if h in cur and c.comp[(f, h)] in cur:
                            if d.comp[(v, cur[h])] != cur[c.comp[(f, h)]]:
                                good = False
                                break
                if good:
                    yield from mor_maps(i + 1, cur)
            cur.pop(f, None)

        for m in mor_maps(0, {}):
            fn = FinFunctor(c, d, o, m)
            if check_functor(fn):
                yield fn


def _natiso_between(f: FinFunctor, g: FinFunctor):
    """A natural isomorphism f ⇒ g if one exists (exhaustive)."""
    c, d = f.source, f.target
    objs = list(c.objects)
    options = [[u for u in d.hom(f.o[x], g.o[x]) if d.is_iso(u)] for x in objs]
    for choice in itertools.product(*options):
        comps = dict(zip(objs, choice))
        if NatIso(f, g, comps).check():
            return comps
    return None


def oracle_equivalence(c: FinCat, d: FinCat, bound: int = 6,
                       timeout_s: float = 10.0) -> OracleVerdict:
    """Search functor pairs F: c → d, G: d → c with GF ≅ id and FG ≅ id."""
    if len(c.objects) > bound or len(d.objects) > bound:
        return OracleVerdict("inconclusive", ("size",))
    deadline = time.monotonic() + timeout_s
    try:
        backs = list(_all_functors(d, c, deadline))
        for f in _all_functors(c, d, deadline):
            for g in backs:
                if (_natiso_between(FinFunctor.identity(c), g.after(f)) is not None and
                        _natiso_between(f.after(g), FinFunctor.identity(d)) is not None):
                    return OracleVerdict("equivalent", (f, g))
    except TimeoutError:
        return OracleVerdict("inconclusive", ("timeout",))
    return OracleVerdict("not-equivalent")


def squares_double_category(c: FinCat, L: int = DEFAULT_TRUNCATION) -> MultiSimp:
    """Commutative squares of c: the double category whose two directions
    are both the arrows of c (table of arity 1 with categorical cells)."""
    from .msimp import nerve_functor_level
    cells = {}
    for k in range(L + 1):
        objs = chains(c, k)
        # morphisms between k-chains: k+1 vertical arrows making every square commute
        def verts(ch, k=k):
            if k == 0:
                return [ch]
            arr = [ch] if k == 1 else list(ch)
            return [c.src(arr[0])] + [c.tgt(a) for a in arr]

        def arrows(ch, k=k):
            return [] if k == 0 else ([ch] if k == 1 else list(ch))
        mors, ident, comp = {}, {}, {}
        for s in objs:
            for t in objs:
                vs, vt = verts(s), verts(t)
                options = [c.hom(a, b) for a, b in zip(vs, vt)]
                for choice in itertools.product(*options):
                    ok = all(c.comp[(arrows(t)[j], choice[j])] ==
                             c.comp[(choice[j + 1], arrows(s)[j])] for j in range(k))
                    if ok:
                        mors[(s, t, choice)] = (s, t)
        for s in objs:
            ident[s] = (s, s, tuple(c.ident[v] for v in verts(s)))
        for f, (a, b) in mors.items():
            for g, (b2, e) in mors.items():
                if b2 == b:
                    comp[(g, f)] = (a, e, tuple(c.comp[(y, x)] for x, y in zip(f[2], g[2])))
        cells[(k,)] = FinCat(objs, mors, ident, comp)
    from .msimp import chain_action, generators, _with
    gens = {}
    for k in range(L + 1):
        for th in generators(k, L):
            r = len(th) - 1
            s, t = cells[(k,)], cells[(r,)]
            o = {x: chain_action(c, k, th, x) for x in s.objects}
            m = {}
            for f in s.mor:
                a, b, choice = f
                m[f] = (o[a], o[b], tuple(choice[j] for j in th))
            gens[((k,), 0, th)] = FinFunctor(s, t, o, m)
    return MultiSimp(1, L, cells, gens)
