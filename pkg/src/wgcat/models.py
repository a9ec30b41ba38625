"""Membership checkers for the Segal-type models and the n-equivalence decision.

Every structure is a :class:`~wgcat.msimp.MultiSimp` table of arity
``n - 1``; direction 0 is the outer simplicial direction, whose level k is
``x.level(k)``.  All "for every k >= 2" clauses are checked for
``2 <= k <= L`` and reports carry that truncation.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product

from .fincat import (AdjointEquivalence, EquivalenceVerdict, FinCat, FinFunctor, LazyComp, NatIso,
                     check_category, equivalence_analysis, induced_functor, is_equiv_relation,
                     limit_cat, p_iso_classes, pseudo_inverse, q_components)
from .labels import label
from .msimp import (MultiSimp, SegalFailure, SimpMap, _with, categorify_last, check_simplicial,
                    segal_map, segal_report, total_components)
from .nfold import is_discrete_table
from .report import PreconditionError, Report, failed, passed, prefixed

# ---------------------------------------------------------------------------
# truncation functors p^(n), q^(n)

_QUOTIENTS = {"p": p_iso_classes, "q": q_components}


def _cell_classes(c: FinCat, kind: str):
    # FinCat has slots, so memoize in a side table keyed by identity
    hit = _CLASS_CACHE.get((id(c), kind))
    if hit is not None and hit[0] is c:
        return hit[1]
    names, assign = _QUOTIENTS[kind](c)
    out = (FinCat.discrete(names), assign)
    _CLASS_CACHE[(id(c), kind)] = (c, out)
    return out


_CLASS_CACHE: dict = {}


def clear_caches() -> None:
    _CLASS_CACHE.clear()


def _class_functor(fn: FinFunctor, s: FinCat, t: FinCat, kind: str) -> FinFunctor:
    _, sa = _cell_classes(fn.source, kind)
    _, ta = _cell_classes(fn.target, kind)
    fmap = {sa[x]: ta[fn.o[x]] for x in fn.source.objects}
    return FinFunctor(s, t, fmap, fmap)


def _levelwise_sets(x: MultiSimp, kind: str) -> MultiSimp:
    return x.map_cells(lambda c: _cell_classes(c, kind)[0],
                       lambda fn, s, t: _class_functor(fn, s, t, kind))


def truncate(x: MultiSimp, kind: str = "p") -> MultiSimp:
    """Apply p (iso classes) or q (components) to every cell and reassemble
    one dimension lower.  Raises :class:`SegalFailure` when the result is
    not a nerve in the last direction."""
    def run():
        if x.arity == 0:
            return MultiSimp.point(_cell_classes(x.base(), kind)[0])
        return categorify_last(_levelwise_sets(x, kind))
    return x.cached(("truncate", kind), run)


def truncate_p(x: MultiSimp) -> MultiSimp:
    return truncate(x, "p")


def truncate_q(x: MultiSimp) -> MultiSimp:
    return truncate(x, "q")


def truncate_map(f: SimpMap, kind: str = "p") -> SimpMap:
    ps, pt = truncate(f.source, kind), truncate(f.target, kind)
    m = f.source.arity
    comps = {}
    for idx, cat in ps.cells.items():
        if m == 0:
            fn = f.comps[()]
            _, sa = _cell_classes(fn.source, kind)
            _, ta = _cell_classes(fn.target, kind)
            fmap = {sa[x]: ta[fn.o[x]] for x in fn.source.objects}
            comps[idx] = FinFunctor(cat, pt.cells[idx], fmap, fmap)
            continue
        f0, f1 = f.comps[idx + (0,)], f.comps[idx + (1,)]
        _, sa0 = _cell_classes(f0.source, kind)
        _, ta0 = _cell_classes(f0.target, kind)
        _, sa1 = _cell_classes(f1.source, kind)
        _, ta1 = _cell_classes(f1.target, kind)
        comps[idx] = FinFunctor(cat, pt.cells[idx],
                                {sa0[x]: ta0[f0.o[x]] for x in f0.source.objects},
                                {sa1[x]: ta1[f1.o[x]] for x in f1.source.objects})
    return SimpMap(ps, pt, comps)


# ---------------------------------------------------------------------------
# discretization data

@dataclass
class Discretization:
    """X^d together with γ: every object of every cell ↦ its element of X^d."""

    names: tuple
    assign: dict  # (idx, obj) -> name

    def gamma_functor(self, x: MultiSimp, idx: tuple) -> FinFunctor:
        d = FinCat.discrete(self.names)
        c = x.cells[idx]
        o = {a: self.assign[(idx, a)] for a in c.objects}
        return FinFunctor(c, d, o, {f: o[c.src(f)] for f in c.mor})

    def section(self) -> dict:
        """Deterministic section: each class is named by its least object of
        the all-zero cell, which is also its chosen representative."""
        return {c: c for c in self.names}

    def discrete_cat(self) -> FinCat:
        return FinCat.discrete(self.names)


def discretization(z: MultiSimp) -> Discretization:
    """Components of the total diagram; for homotopically discrete z these
    are the elements of the iterated iso-class quotient."""
    def run():
        if z.arity == 0:
            names, assign = p_iso_classes(z.base())
            return Discretization(names, {((), a): n for a, n in assign.items()})
        names, assign = total_components(z)
        return Discretization(tuple(names), assign)
    return z.cached("discretization", run)


def iterated_p(z: MultiSimp) -> tuple:
    """X^d computed literally as p^(1) p^(2) … p^(n) z."""
    cur = z
    while cur.arity > 0:
        cur = truncate_p(cur)
    return p_iso_classes(cur.base())[0]


@dataclass
class HDWitness:
    subject: MultiSimp
    discrete: tuple
    gamma: dict
    section: dict

    def to_json(self) -> dict:
        return {"discretization": [label(x) for x in self.discrete],
                "section": {label(k): label(v) for k, v in sorted(self.section.items(),
                                                                  key=lambda kv: label(kv[0]))}}


# ---------------------------------------------------------------------------
# homotopically discrete objects

def _structure(x: MultiSimp) -> Report:
    for i, c in sorted(x.cells.items()):
        if isinstance(c.comp, LazyComp):
            continue  # limits of categories are categories
        r = check_category(c)
        if not r:
            return prefixed(failed("category:" + r.clause, witness=r.witness), i)
    return check_simplicial(x)


def hd_report(x: MultiSimp, validate: bool = True) -> Report:
    if validate:
        r = _structure(x)
        if not r:
            return failed("hd.structure", r.clause, r.path, r.witness)
    return x.cached("hd", lambda: _hd(x))


def _hd(x: MultiSimp) -> Report:
    L = x.L if x.arity else None
    if x.arity == 0:
        c = x.base()
        if not is_equiv_relation(c):
            return failed("hd.base", "not an equivalence relation", truncation=L)
        return passed("hd", truncation=L)
    for k in range(x.L + 1):
        r = _hd(x.level(k))
        if not r:
            return prefixed(r, ("level", k))
    r = segal_report(x, directions=[0])
    if not r:
        return failed("hd.i", "Segal map not invertible", r.path, truncation=L)
    try:
        px = truncate_p(x)
    except SegalFailure as exc:
        return failed("hd.ii", f"levelwise p is not a nerve ({exc})", truncation=L)
    r = _hd(px)
    if not r:
        return prefixed(Report(False, "hd.ii", r.path, r.clause + " " + r.detail, r.witness, L),
                        "p")
    return passed("hd", truncation=L)


def is_hd(x: MultiSimp, validate: bool = True):
    """:class:`HDWitness` on success, failing :class:`Report` otherwise."""
    r = hd_report(x, validate)
    if not r:
        return r
    disc = discretization(x)
    return HDWitness(x, disc.names, disc.assign, disc.section())


# ---------------------------------------------------------------------------
# hom objects and induced Segal maps

def full_subcategory(c: FinCat, keep) -> FinCat:
    keep = set(keep)
    mors = {f: (s, t) for o in keep for f in c.out_of(o) for s, t in (c.mor[f],) if t in keep}
    table = c.comp
    rule = table._rule if isinstance(table, LazyComp) else (lambda g, f: table[(g, f)])
    comp = LazyComp(mors, rule)
    return FinCat(keep, mors,
                  {o: c.ident[o] for o in keep}, comp)


def restrict_functor(fn: FinFunctor, s: FinCat, t: FinCat) -> FinFunctor:
    return FinFunctor(s, t, {o: fn.o[o] for o in s.objects}, {f: fn.m[f] for f in s.mor})


def _endpoint_classes(x: MultiSimp, disc: Discretization):
    """For each cell of level 1: object ↦ (class of source, class of target)."""
    out = {}
    for idx in x.indices():
        if idx[0] != 1:
            continue
        zero = _with(idx, 0, 0)
        s, t = x.vertex(idx, 0, 0).o, x.vertex(idx, 0, 1).o
        out[idx[1:]] = {o: (disc.assign[(zero, s[o])], disc.assign[(zero, t[o])])
                        for o in x.cells[idx].objects}
    return out


def hom_object(x: MultiSimp, a, b) -> MultiSimp:
    """X(a,b): the part of X_1 whose source lies over a and target over b."""
    disc = _disc_of_level0(x)
    if a not in disc.names or b not in disc.names:
        raise PreconditionError("labels not in the discretization of X_0")
    return _fiber(x, disc, a, b)


def _fiber(x: MultiSimp, disc: Discretization, a, b) -> MultiSimp:
    return x.cached(("fiber", a, b), lambda: _build_fiber(x, disc, a, b))


def _fiber_index(x: MultiSimp, disc: Discretization) -> dict:
    def run():
        ends = _endpoint_classes(x, disc)
        out = {}
        for i, table in ends.items():
            groups = defaultdict(list)
            for o, ab in table.items():
                groups[ab].append(o)
            out[i] = groups
        return out
    return x.cached(("ends",), run)


def _build_fiber(x: MultiSimp, disc: Discretization, a, b) -> MultiSimp:
    index = _fiber_index(x, disc)
    lvl = x.level(1)
    cells = {i: full_subcategory(c, index[i].get((a, b), ())) for i, c in lvl.cells.items()}
    gens = {}
    for (i, d, g), fn in lvl.gens.items():
        j = _with(i, d, len(g) - 1)
        gens[(i, d, g)] = restrict_functor(fn, cells[i], cells[j])
    return MultiSimp(lvl.arity, lvl.L, cells, gens)


def _disc_of_level0(x: MultiSimp) -> Discretization:
    d = discretization(x.level(0))
    # re-key by full index so that vertex targets can be looked up directly
    return Discretization(d.names, {((0,) + i, o): n for (i, o), n in d.assign.items()})


def fiber_map(f: SimpMap, a, b, fa, fb) -> SimpMap:
    src = _fiber(f.source, _disc_of_level0(f.source), a, b)
    tgt = _fiber(f.target, _disc_of_level0(f.target), fa, fb)
    comps = {i: restrict_functor(f.comps[(1,) + i], src.cells[i], tgt.cells[i])
             for i in src.cells}
    return SimpMap(src, tgt, comps)


def induced_segal(x: MultiSimp, k: int, over: str = "total") -> SimpMap:
    """Induced Segal map of level k in direction 0, as a map of tables.

    ``over="total"`` uses γ: X_0 → X_0^d; ``over="cell"`` uses the cellwise
    iso-class quotient of X_0 (the comparison appearing in LTa^n).
    """
    src = x.level(k)
    if over == "total":
        disc = _disc_of_level0(x)
        base = {i: disc for i in src.cells}
    else:
        base = {}
        for i in src.cells:
            _, assign = _cell_classes(x.cells[(0,) + i], "p")
            base[i] = Discretization(tuple(sorted(set(assign.values()), key=label)),
                                     {((0,) + i, o): n for o, n in assign.items()})
    cells, vert = {}, {}
    for i in src.cells:
        one = (1,) + i
        c1 = x.cells[one]
        zero = (0,) + i
        s, t = x.vertex(one, 0, 0), x.vertex(one, 0, 1)
        dset = FinCat.discrete(base[i].names)

        def via(v, i=i, zero=zero, c1=c1, dset=dset):
            o = {y: base[i].assign[(zero, v.o[y])] for y in c1.objects}
            return FinFunctor(c1, dset, o, {f: o[c1.src(f)] for f in c1.mor})

        sv, tv = via(s), via(t)
        cells[i] = limit_cat([c1] * k, [(j, tv, j + 1, sv) for j in range(k - 1)])
    lvl1 = x.level(1)
    gens = {}
    for (i, d, g), fn in lvl1.gens.items():
        j = _with(i, d, len(g) - 1)
        gens[(i, d, g)] = induced_functor(cells[i], cells[j], [(t, fn) for t in range(k)])
    tgt = MultiSimp(src.arity, x.L, cells, gens)
    comps = {}
    for i in src.cells:
        full = (k,) + i
        comps[i] = induced_functor(x.cells[full], cells[i],
                                   [(None, x.act(full, 0, (j - 1, j))) for j in range(1, k + 1)])
    return SimpMap(src, tgt, comps)


# ---------------------------------------------------------------------------
# n-equivalences

@dataclass
class EquivCertificate:
    n: int
    ok: bool
    base: EquivalenceVerdict | None = None
    inverse: dict | None = None
    fibers: list = field(default_factory=list)   # (a, b, fa, fb, cert)
    truncation: "EquivCertificate | None" = None
    failure: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {"n": self.n, "ok": self.ok}
        if self.failure:
            out["failure"] = self.failure
        if self.base is not None:
            out["base"] = self.base.to_json()
        if self.inverse is not None:
            out["inverse"] = self.inverse
        if self.n > 1:
            out["fibers"] = [{"a": label(a), "b": label(b), "fa": label(fa), "fb": label(fb),
                              "certificate": c.to_json()} for a, b, fa, fb, c in self.fibers]
            if self.truncation is not None:
                out["truncated"] = self.truncation.to_json()
        return out


def _n_of(f: SimpMap) -> int:
    return f.source.arity + 1


def _adjoint_json(ae: AdjointEquivalence) -> dict:
    return {"backward": ae.backward.to_json(), "unit": ae.unit.to_json(),
            "counit": ae.counit.to_json()}


def is_n_equivalence(f: SimpMap, stop_early: bool = True) -> EquivCertificate:
    """Decide whether f is an n-equivalence (n = arity + 1), recording the
    full recursion as a certificate."""
    n = _n_of(f)
    if n == 1:
        fn = f.base()
        v = equivalence_analysis(fn)
        if not v.equivalence:
            return EquivCertificate(1, False, base=v, failure="not an equivalence of categories")
        return EquivCertificate(1, True, base=v, inverse=_adjoint_json(pseudo_inverse(fn, v)))
    dx, dy = _disc_of_level0(f.source), _disc_of_level0(f.target)
    zero = tuple([0] * f.source.arity)
    f0 = f.comps[zero]
    image = {dx.assign[(zero, o)]: dy.assign[(zero, f0.o[o])]
             for o in f.source.cells[zero].objects}
    cert = EquivCertificate(n, True)
    for a in dx.names:
        for b in dx.names:
            sub = is_n_equivalence(fiber_map(f, a, b, image[a], image[b]), stop_early)
            cert.fibers.append((a, b, image[a], image[b], sub))
            if not sub.ok:
                cert.ok = False
                cert.failure = f"fiber ({label(a)},{label(b)})"
                if stop_early:
                    return cert
    try:
        pf = truncate_map(f, "p")
    except SegalFailure as exc:
        cert.ok, cert.failure = False, f"truncation is not defined ({exc})"
        return cert
    cert.truncation = is_n_equivalence(pf, stop_early)
    if not cert.truncation.ok:
        cert.ok = False
        cert.failure = cert.failure or "truncated map"
    return cert


def verify_certificate(f: SimpMap, cert: EquivCertificate) -> bool:
    """Replay a certificate against f without any search.

    Base nodes are checked by re-validating the stored adjoint inverse (or
    by re-evaluating the recorded failure witness); inner nodes recompute
    fibers and truncations deterministically and recurse.
    """
    n = _n_of(f)
    if cert.n != n:
        return False
    if n == 1:
        fn = f.base()
        if cert.ok:
            inv = cert.inverse or {}
            try:
                g = _functor_from_labels(inv["backward"], fn.target, fn.source)
                unit = NatIso(FinFunctor.identity(fn.source), g.after(fn),
                              _components_from_labels(inv["unit"], fn.source, fn.source))
                counit = NatIso(fn.after(g), FinFunctor.identity(fn.target),
                                _components_from_labels(inv["counit"], fn.target, fn.target))
            except KeyError:
                return False
            return bool(AdjointEquivalence(fn, g, unit, counit).check())
        return not equivalence_analysis(fn).equivalence
    dx, dy = _disc_of_level0(f.source), _disc_of_level0(f.target)
    zero = tuple([0] * f.source.arity)
    f0 = f.comps[zero]
    image = {dx.assign[(zero, o)]: dy.assign[(zero, f0.o[o])]
             for o in f.source.cells[zero].objects}
    recorded = {(a, b): sub for a, b, _, _, sub in cert.fibers}
    if cert.ok:
        if set(recorded) != {(a, b) for a in dx.names for b in dx.names}:
            return False
        for (a, b), sub in recorded.items():
            if not sub.ok or not verify_certificate(fiber_map(f, a, b, image[a], image[b]), sub):
                return False
        return (cert.truncation is not None and cert.truncation.ok
                and verify_certificate(truncate_map(f, "p"), cert.truncation))
    for (a, b), sub in recorded.items():
        if not sub.ok:
            return verify_certificate(fiber_map(f, a, b, image[a], image[b]), sub)
    if cert.truncation is not None and not cert.truncation.ok:
        return verify_certificate(truncate_map(f, "p"), cert.truncation)
    return False


def _functor_from_labels(doc, src: FinCat, tgt: FinCat) -> FinFunctor:
    so = {label(o): o for o in src.objects}
    sm = {label(f): f for f in src.mor}
    to = {label(o): o for o in tgt.objects}
    tm = {label(f): f for f in tgt.mor}
    return FinFunctor(src, tgt, {so[k]: to[v] for k, v in doc["objectMap"].items()},
                      {sm[k]: tm[v] for k, v in doc["morphismMap"].items()})


def _components_from_labels(doc, objs_cat: FinCat, mor_cat: FinCat) -> dict:
    so = {label(o): o for o in objs_cat.objects}
    tm = {label(f): f for f in mor_cat.mor}
    return {so[k]: tm[v] for k, v in doc.items()}


# ---------------------------------------------------------------------------
# model checkers

def catwg_report(x: MultiSimp, validate: bool = True) -> Report:
    if validate:
        r = _structure(x)
        if not r:
            return failed("wg.structure", r.clause, r.path, r.witness)
    return x.cached("catwg", lambda: _catwg(x))


def _segal_equivalence_failure(x: MultiSimp, k: int):
    """Is the induced Segal map at level k an equivalence?  Returns None or a
    failure string.

    For arity 1 the target ``X_1 ×_{X_0^d} … ×_{X_0^d} X_1`` is never built:
    its hom-sets are products of hom-sets of X_1 and its iso classes are the
    compatible tuples of iso classes of X_1, so both halves of the test can be
    run against the factors."""
    if x.arity != 1:
        cert = is_n_equivalence(induced_segal(x, k))
        return None if cert.ok else cert.failure
    disc = _disc_of_level0(x)
    c1, ck = x.cells[(1,)], x.cells[(k,)]
    s, t = x.vertex((1,), 0, 0).o, x.vertex((1,), 0, 1).o
    src = {a: disc.assign[((0,), s[a])] for a in c1.objects}
    tgt = {a: disc.assign[((0,), t[a])] for a in c1.objects}
    edges = [x.act((k,), 0, (j - 1, j)) for j in range(1, k + 1)]
    image = {p: tuple(e.o[p] for e in edges) for p in ck.objects}
    for p in ck.objects:
        ip = image[p]
        for q in ck.objects:
            iq = image[q]
            size = 1
            for j in range(k):
                size *= len(c1.hom(ip[j], iq[j]))
                if not size:
                    break
            homs = ck.hom(p, q)
            if len(homs) != size:
                return "not fully faithful"
            if len({tuple(e.m[f] for e in edges) for f in homs}) != size:
                return "not fully faithful"
    _, cls = p_iso_classes(c1)
    rep = {}
    for a in c1.objects:
        rep.setdefault(cls[a], a)
    hit = {tuple(cls[a] for a in image[p]) for p in ck.objects}
    tuples = [(c,) for c in sorted(rep, key=label)]
    for _ in range(k - 1):
        tuples = [tp + (c,) for tp in tuples for c in sorted(rep, key=label)
                  if tgt[rep[tp[-1]]] == src[rep[c]]]
    for tp in tuples:
        if tp not in hit:
            return "not essentially surjective"
    return None


def _catwg(x: MultiSimp) -> Report:
    if x.arity == 0:
        return passed("wg")
    L = x.L
    r = _hd(x.level(0))
    if not r:
        return failed("wg.a", f"X_0 not homotopically discrete: {r.clause}", r.path,
                      truncation=L)
    r = segal_report(x, directions=[0])
    if not r:
        return failed("wg.b", "Segal map not invertible", r.path, truncation=L)
    for k in range(1, L + 1):
        r = _catwg(x.level(k))
        if not r:
            return prefixed(r, ("level", k))
    for k in range(2, L + 1):
        why = _segal_equivalence_failure(x, k)
        if why:
            return failed("wg.c", f"induced Segal map at level {k}: {why}",
                          (("level", k),), truncation=L)
    try:
        px = truncate_p(x)
    except SegalFailure as exc:
        return failed("wg.d", f"levelwise p is not a nerve ({exc})", truncation=L)
    r = _catwg(px)
    if not r:
        return prefixed(Report(False, "wg.d", r.path, f"{r.clause} {r.detail}".strip(),
                               r.witness, L), "p")
    return passed("wg", truncation=L)


def is_catwg(x: MultiSimp, validate: bool = True) -> Report:
    return catwg_report(x, validate)


def tawg_report(x: MultiSimp, validate: bool = True) -> Report:
    if validate:
        r = _structure(x)
        if not r:
            return failed("tawg.structure", r.clause, r.path, r.witness)
    return x.cached("tawg", lambda: _tawg(x))


def _tawg(x: MultiSimp) -> Report:
    if x.arity == 0:
        return passed("tawg")
    L = x.L
    r = _hd(x.level(0))
    if not r:
        return failed("tawg.a", f"X_0 not homotopically discrete: {r.clause}", r.path,
                      truncation=L)
    for k in range(1, L + 1):
        r = _tawg(x.level(k))
        if not r:
            return prefixed(r, ("level", k))
    for k in range(2, L + 1):
        why = _segal_equivalence_failure(x, k)
        if why:
            return failed("tawg.b", f"induced Segal map at level {k}: {why}",
                          (("level", k),), truncation=L)
    try:
        truncate_p(x)
    except SegalFailure as exc:
        return failed("tawg.p", f"levelwise p is not a nerve ({exc})", truncation=L)
    return passed("tawg", truncation=L)


def is_tawg(x: MultiSimp, validate: bool = True) -> Report:
    return tawg_report(x, validate)


def corner(x: MultiSimp, prefix: tuple) -> MultiSimp:
    """X_{prefix,0}: fix the first len(prefix) indices, then index 0."""
    cur = x
    for k in prefix:
        cur = cur.level(k)
    return cur.level(0)


def is_tam(x: MultiSimp, validate: bool = True) -> Report:
    r = tawg_report(x, validate)
    if not r:
        return r
    n = x.arity + 1
    for r_ in range(0, max(n - 1, 0)):
        if x.arity == 0:
            break
        c = corner(x, (1,) * r_)
        if not is_discrete_table(c):
            return failed("tam.discrete", f"corner X_{{{'1' * r_}0}} is not discrete",
                          path=((1,) * r_ + (0,),), truncation=x.L)
    return passed("tam", truncation=x.L if x.arity else None)


def lta_report(x: MultiSimp, validate: bool = True) -> Report:
    r = tawg_report(x, validate)
    if not r:
        return r
    return x.cached("lta", lambda: _lta(x))


def _lta(x: MultiSimp) -> Report:
    n = x.arity + 1
    if n <= 2:
        return _tawg(x)
    L = x.L
    for k in range(L + 1):
        r = _lta(x.level(k))
        if not r:
            return prefixed(Report(False, "lta.i", r.path, r.clause, r.witness, L), ("level", k))
    for k in range(2, L + 1):
        v = induced_segal(x, k, over="cell")
        for i, fn in sorted(v.comps.items()):
            if not equivalence_analysis(fn).equivalence:
                return failed("lta.ii", f"v_{k} not an equivalence at cell {i}",
                              (("level", k), i), truncation=L)
    for idx in x.indices():
        for d in range(x.arity):
            if idx[d] >= 2 and not nu_map(x, idx, d) is None:
                fn = nu_map(x, idx, d)
                if not equivalence_analysis(fn).equivalence:
                    return failed("lta.nu", f"ν at {idx} direction {d + 1} not an equivalence",
                                  (idx,), truncation=L)
    try:
        px = truncate_p(x)
    except SegalFailure as exc:
        return failed("lta.iii", f"levelwise p is not a nerve ({exc})", truncation=L)
    r = _catwg(px)
    if not r:
        return failed("lta.iii", f"p^(n)X not weakly globular: {r.clause}", r.path, truncation=L)
    return passed("lta", truncation=L)


def is_lta(x: MultiSimp, validate: bool = True) -> Report:
    return lta_report(x, validate)


def cell_class_functor(x: MultiSimp, idx: tuple) -> FinFunctor:
    c = x.cells[idx]
    d, assign = _cell_classes(c, "p")
    return FinFunctor(c, d, dict(assign), {f: assign[c.src(f)] for f in c.mor})


def nu_target(x: MultiSimp, idx: tuple, d: int) -> FinCat:
    key = ("nu-target", idx, d)

    def run():
        k = idx[d]
        one, zero = _with(idx, d, 1), _with(idx, d, 0)
        c1 = x.cells[one]
        gz = cell_class_functor(x, zero)
        sv = gz.after(x.vertex(one, d, 0))
        tv = gz.after(x.vertex(one, d, 1))
        return limit_cat([c1] * k, [(j, tv, j + 1, sv) for j in range(k - 1)])
    return x.cached(key, run)


def nu_map(x: MultiSimp, idx: tuple, d: int) -> FinFunctor:
    """ν(k̄, i): X_k̄ → X_{k̄(1,i)} ×_{X^d_{k̄(0,i)}} … (k_i factors), with the
    cellwise iso-class quotient as discretization."""
    key = ("nu", idx, d)

    def run():
        k = idx[d]
        return induced_functor(x.cells[idx], nu_target(x, idx, d),
                               [(None, x.act(idx, d, (j - 1, j))) for j in range(1, k + 1)])
    return x.cached(key, run)


def groupoidal_report(x: MultiSimp) -> Report:
    if x.arity == 0:
        if x.base().is_groupoid():
            return passed("groupoidal")
        return failed("groupoidal.base", "a morphism is not invertible")
    for k in range(x.L + 1):
        r = groupoidal_report(x.level(k))
        if not r:
            return prefixed(r, ("level", k))
    try:
        px = truncate_p(x)
    except SegalFailure as exc:
        return failed("groupoidal.p", f"levelwise p is not a nerve ({exc})")
    r = groupoidal_report(px)
    return prefixed(r, "p") if not r else passed("groupoidal", truncation=x.L)


def is_groupoidal(x: MultiSimp) -> Report:
    return groupoidal_report(x)


# ---------------------------------------------------------------------------
# sections for FCat documents

@dataclass
class FTam:
    """A table together with chosen sections of the discretizations of its
    homotopically discrete corners.

    ``sections[prefix]`` maps each element of the discretization of
    ``corner(table, prefix)`` to an object of that corner's all-zero cell.
    The empty prefix is the corner X_0 itself.
    """

    table: MultiSimp
    sections: dict

    @property
    def n(self) -> int:
        return self.table.arity + 1

    def to_json(self) -> dict:
        secs = []
        for prefix in sorted(self.sections):
            secs.append({"prefix": list(prefix),
                         "section": {label(k): label(v) for k, v in
                                     sorted(self.sections[prefix].items(),
                                            key=lambda kv: label(kv[0]))}})
        return {"table": self.table.to_json(), "sections": secs}

    @staticmethod
    def from_json(doc: dict) -> "FTam":
        from .report import MalformedError
        try:
            table = MultiSimp.from_json(doc["table"])
            secs = {tuple(int(v) for v in e["prefix"]): dict(e["section"])
                    for e in doc["sections"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedError(f"malformed sectioned document: {exc}") from exc
        return FTam(table, secs)


def corner_zero_index(x: MultiSimp, prefix: tuple) -> tuple:
    return tuple(prefix) + (0,) * (x.arity - len(prefix))


def section_prefixes(x: MultiSimp) -> list:
    """Prefixes k̄ with 1 <= |k̄| <= n-2 whose corners need sections."""
    out = []
    for s in range(1, x.arity):
        out.extend(product(range(x.L + 1), repeat=s))
    return out


def ftawg_report(t: FTam, validate: bool = True) -> Report:
    x = t.table
    r = tawg_report(x, validate)
    if not r:
        return r
    if x.arity == 0:
        return passed("ftawg")
    prefixes = section_prefixes(x)
    if () in t.sections:
        prefixes = [()] + prefixes
    for prefix in prefixes:
        sec = t.sections.get(prefix)
        if sec is None:
            return failed("ftawg.missing", "no section for corner", (prefix,), truncation=x.L)
        disc = discretization(corner(x, prefix))
        zc = (0,) * (x.arity - len(prefix) - 1)
        if set(sec) != set(disc.names):
            return failed("ftawg.section", "section domain differs from discretization",
                          (prefix,), truncation=x.L)
        for c, obj in sec.items():
            if disc.assign.get((zc, obj)) != c:
                return failed("ftawg.section", "γ∘γ' is not the identity", (prefix,),
                              witness=(c,), truncation=x.L)
    for prefix in section_prefixes(x):
        s = len(prefix)
        full = corner_zero_index(x, prefix)
        for e in range(s):
            for g in _gens(prefix[e], x.L):
                target_prefix = _with(prefix, e, len(g) - 1)
                fn = x.act(full, e, g)
                disc_t = discretization(corner(x, target_prefix))
                zc = (0,) * (x.arity - s - 1)
                sec_s, sec_t = t.sections[prefix], t.sections[target_prefix]
                for c, obj in sec_s.items():
                    img = fn.o[obj]
                    if sec_t[disc_t.assign[(zc, img)]] != img:
                        return failed("ftawg.square", "section square does not commute",
                                      (prefix, e + 1), witness=(g, c), truncation=x.L)
    if () in t.sections and x.arity >= 2:
        top, inner = t.sections[()], t.sections.get((0,))
        if inner is not None and not set(top.values()) <= set(inner.values()):
            return failed("ftawg.top", "top-level representatives are not corner "
                          "representatives", truncation=x.L)
    return passed("ftawg", truncation=x.L)


def _gens(k, L):
    from .msimp import generators
    return list(generators(k, L))


def is_ftawg(t: FTam, validate: bool = True) -> Report:
    return ftawg_report(t, validate)


def default_sections(x: MultiSimp, with_top: bool = True) -> dict:
    """Least-object sections for every corner (deterministic, not
    necessarily satisfying the section squares)."""
    secs = {}
    prefixes = ([()] if with_top and x.arity >= 1 else []) + section_prefixes(x)
    for prefix in prefixes:
        secs[prefix] = discretization(corner(x, prefix)).section()
    return secs
