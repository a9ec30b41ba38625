"""Resolutions of weakly globular objects.

``shift`` rebuilds a table over a new level 0 mapping into the old one,
``resolve_hd_V`` replaces a homotopically discrete object by one whose
discretization has a canonical section, ``resolve_wg_F`` applies that to
level 0 of a weakly globular object, and ``to_fcat_G`` iterates the last
step through the levels so that every corner carries a canonical section.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .fincat import (FinCat, FinFunctor, dec_functor, dec_section, decalage, limit_cat)
from .labels import label
from .models import (EquivCertificate, FTam, corner, discretization, hd_report,
                     is_n_equivalence, section_prefixes)
from .msimp import (MultiSimp, SimpMap, _with, chain_action, chains, generators,
                    nerve_functor_level, reconstruct_category, total_components)
from .report import GuardError, PreconditionError

MAX_DEPTH = 4


def _guard(n: int, limit: int = MAX_DEPTH) -> None:
    if n > limit:
        raise GuardError(f"dimension {n} exceeds the construction limit {limit}")


def doc_hash(doc) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True, separators=(",", ":"))
                          .encode()).hexdigest()[:16]


@dataclass
class ConstructionTrace:
    name: str
    source: MultiSimp
    output: MultiSimp
    comparison: SimpMap
    certificate: EquivCertificate | None = None
    sections: dict = field(default_factory=dict)

    def certify(self) -> EquivCertificate:
        if self.certificate is None:
            self.certificate = is_n_equivalence(self.comparison)
        return self.certificate

    def to_json(self) -> dict:
        out = {"kind": "construction-trace", "construction": self.name,
               "input": doc_hash(self.source.to_json()), "output": self.output.to_json(),
               "comparison": self.comparison.to_json()}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


# ---------------------------------------------------------------------------
# functors on a cell given by explicit object/morphism rules

def _functor(src: FinCat, tgt: FinCat, fo, fm) -> FinFunctor:
    return FinFunctor(src, tgt, {a: fo(a) for a in src.objects},
                      {f: fm(f) for f in src.mor})


# ---------------------------------------------------------------------------
# the shift construction X(f0)

def shift(x: MultiSimp, f0: SimpMap) -> tuple[MultiSimp, SimpMap]:
    """X(f0) together with its comparison map to x.

    Level 0 of the result is the source of ``f0``; cell ``(k, ī)`` for
    ``k >= 1`` has objects ``(x, y_0, …, y_k)`` with the j-th vertex of x
    equal to ``f0(y_j)``.
    """
    if x.arity < 1:
        raise PreconditionError("shift needs a table with an outer direction")
    y0 = f0.source
    if y0.arity != x.arity - 1 or f0.target.to_json() != x.level(0).to_json():
        raise PreconditionError("dimension mismatch between f0 and level 0")
    cells = {}
    for idx in x.indices():
        k, rest = idx[0], idx[1:]
        if k == 0:
            cells[idx] = y0.cells[rest]
            continue
        yc, fr = y0.cells[rest], f0.comps[rest]
        cons = [(0, x.vertex(idx, 0, j), j + 1, fr) for j in range(k + 1)]
        cells[idx] = limit_cat([x.cells[idx]] + [yc] * (k + 1), cons)

    def parts(idx, obj, is_obj):
        # (x-part, y-parts) of an object or morphism of cell idx
        if idx[0] == 0:
            fr = f0.comps[idx[1:]]
            return (fr.o[obj] if is_obj else fr.m[obj]), (obj,)
        return obj[0], obj[1:]

    gens = {}
    for (idx, d, g), fn in x.gens.items():
        tgt = _with(idx, d, len(g) - 1)
        src_c, tgt_c = cells[idx], cells[tgt]
        if d == 0:
            r = len(g) - 1

            def rule(is_obj, idx=idx, g=g, fn=fn, r=r):
                table = fn.o if is_obj else fn.m

                def run(v):
                    xp, ys = parts(idx, v, is_obj)
                    picked = tuple(ys[i] for i in g)
                    if r == 0:
                        return picked[0]
                    return (table[xp],) + picked
                return run
        else:
            yg = y0.gens[(idx[1:], d - 1, g)]

            def rule(is_obj, idx=idx, fn=fn, yg=yg):
                table, ytab = (fn.o, yg.o) if is_obj else (fn.m, yg.m)

                def run(v):
                    if idx[0] == 0:
                        return ytab[v]
                    return (table[v[0]],) + tuple(ytab[y] for y in v[1:])
                return run
        gens[(idx, d, g)] = _functor(src_c, tgt_c, rule(True), rule(False))
    out = MultiSimp(x.arity, x.L, cells, gens)
    comps = {}
    for idx in x.indices():
        if idx[0] == 0:
            comps[idx] = f0.comps[idx[1:]]
        else:
            c = cells[idx]
            comps[idx] = _functor(c, x.cells[idx], lambda v: v[0], lambda v: v[0])
    return out, SimpMap(out, x, comps)


def shift_map(h: SimpMap, g0: SimpMap, xs: MultiSimp, xt: MultiSimp) -> SimpMap:
    """X(f0) → X'(f0') induced by h: X → X' and g0: Y0 → Y0' over it."""
    comps = {}
    for idx, c in xs.cells.items():
        rest = idx[1:]
        gy = g0.comps[rest]
        if idx[0] == 0:
            comps[idx] = gy
            continue
        hk = h.comps[idx]
        comps[idx] = _functor(c, xt.cells[idx],
                              lambda v, hk=hk, gy=gy: (hk.o[v[0]],) + tuple(gy.o[y] for y in v[1:]),
                              lambda v, hk=hk, gy=gy: (hk.m[v[0]],) + tuple(gy.m[y] for y in v[1:]))
    return SimpMap(xs, xt, comps)


# ---------------------------------------------------------------------------
# components of every outer level, assembled into a category

@dataclass
class Collapse:
    """q^{(2..n)} of a table: a category C with, for every outer level k,
    the assignment of cell objects to k-chains of C."""

    category: FinCat
    assign: dict  # (idx, obj) -> element of (N C)_k, k = idx[0]


def collapse(z: MultiSimp) -> Collapse:
    def run():
        levels, assigns = {}, {}
        for k in range(z.L + 1):
            lv = z.level(k)
            if lv.arity == 0:
                from .fincat import q_components
                names, a = q_components(lv.base())
                assigns[k] = {((), o): v for o, v in a.items()}
            else:
                names, assigns[k] = total_components(lv)
            levels[k] = FinCat.discrete(names)
        gens = {}
        for k in range(z.L + 1):
            for g in generators(k, z.L):
                r = len(g) - 1
                fmap = {}
                for (i, o), v in assigns[k].items():
                    img = z.act((k,) + i, 0, g).o[o]
                    fmap[v] = assigns[r][(i, img)]
                gens[((k,), 0, g)] = FinFunctor(levels[k], levels[r], fmap, fmap)
        simp = MultiSimp(1, z.L, {(k,): c for k, c in levels.items()}, gens)
        cat = reconstruct_category(simp)
        out = {}
        for k in range(z.L + 1):
            for (i, o), v in assigns[k].items():
                if k <= 1:
                    out[((k,) + i, o)] = v
                else:
                    out[((k,) + i, o)] = tuple(simp.act((k,), 0, (j - 1, j)).o[v]
                                               for j in range(1, k + 1))
        return Collapse(cat, out)
    return z.cached("collapse", run)


def _nerve_level_set(c: FinCat, k: int) -> FinCat:
    return FinCat.discrete(chains(c, k))


# ---------------------------------------------------------------------------
# V_n

def _dec_point(x: MultiSimp) -> tuple[MultiSimp, SimpMap]:
    c = x.base()
    dec, d1 = decalage(c)
    out = MultiSimp.point(dec)
    return out, SimpMap(out, x, {(): d1})


def resolve_hd_V(x: MultiSimp, check: bool = True) -> ConstructionTrace:
    """V_n X with f_X: V_n X → X for homotopically discrete x."""
    _guard(x.arity + 1)
    if check:
        rep = hd_report(x)
        if not rep:
            raise PreconditionError(f"input is not homotopically discrete ({rep.clause})")
    out, fx, secs = _resolve_hd(x)
    return ConstructionTrace("V", x, out, fx, sections={(): secs})


def _resolve_hd(x: MultiSimp):
    def run():
        if x.arity == 0 and x.base().is_discrete():
            disc = discretization(x)
            return x, SimpMap.identity(x), {disc.assign[((), o)]: o for o in x.base().objects}
        if x.arity == 0:
            out, fx = _dec_point(x)
            c = x.base()
            return out, fx, _dec_classes_section(out, dec_section(c, out.base()))
        if _is_discrete_table(x):
            disc = discretization(x)
            return x, SimpMap.identity(x), {c: c for c in disc.names}
        fz, vz = _resolve_wg(x)
        col = collapse(fz)
        C = col.category
        dec, d1 = decalage(C)
        cells = {}
        nerve_c = {k: _nerve_level_set(C, k) for k in range(x.L + 1)}
        nerve_dec = {k: _nerve_level_set(dec, k) for k in range(x.L + 1)}
        d1k = {k: nerve_functor_level(d1, k, nerve_dec[k], nerve_c[k]) for k in range(x.L + 1)}
        phi = {}
        for idx, c in fz.cells.items():
            k = idx[0]
            o = {a: col.assign[(idx, a)] for a in c.objects}
            phi[idx] = FinFunctor(c, nerve_c[k], o, {f: o[c.src(f)] for f in c.mor})
            cells[idx] = limit_cat([c, nerve_dec[k]], [(0, phi[idx], 1, d1k[k])])
        gens = {}
        for (idx, d, g), fn in fz.gens.items():
            tgt = _with(idx, d, len(g) - 1)
            k = idx[0]
            if d == 0:
                wo = {w: chain_action(dec, k, g, w) for w in nerve_dec[k].objects}
            else:
                wo = None

            def fo(v, fn=fn, wo=wo):
                return (fn.o[v[0]], v[1] if wo is None else wo[v[1]])

            def fm(v, fn=fn, wo=wo):
                return (fn.m[v[0]], v[1] if wo is None else wo[v[1]])
            gens[(idx, d, g)] = _functor(cells[idx], cells[tgt], fo, fm)
        out = MultiSimp(x.arity, x.L, cells, gens)
        comps = {}
        for idx, c in cells.items():
            vv = vz.comps[idx]
            comps[idx] = _functor(c, x.cells[idx], lambda v, vv=vv: vv.o[v[0]],
                                  lambda v, vv=vv: vv.m[v[0]])
        fx = SimpMap(out, x, comps)
        # canonical section: diagonal of Dec over each component of level 0
        zero = (0,) * x.arity
        disc = discretization(out)
        diag = dec_section(C, dec)
        _, _, inner = _resolve_hd(x.level(0))
        secs = {}
        for cls_inner, rep in inner.items():
            a = col.assign[(zero, rep)]
            obj = (rep, diag[a])
            secs[disc.assign[(zero, obj)]] = obj
        return out, fx, secs
    return x.cached("V", run)


def _dec_classes_section(out: MultiSimp, diag: dict) -> dict:
    disc = discretization(out)
    zero = (0,) * out.arity
    return {disc.assign[(zero, o)]: o for o in diag.values()}


def _is_discrete_table(x: MultiSimp) -> bool:
    from .nfold import is_discrete_table
    return is_discrete_table(x)


# ---------------------------------------------------------------------------
# F_n

def _resolve_wg(x: MultiSimp):
    """(F_n X, V_X) for weakly globular x (arity >= 1)."""
    def run():
        x0 = x.level(0)
        if _is_discrete_table(x0):
            return x, SimpMap.identity(x)
        v0, f0, _ = _resolve_hd(x0)
        return shift(x, f0)
    return x.cached("F", run)


def resolve_wg_F(x: MultiSimp, check: bool = True) -> ConstructionTrace:
    _guard(x.arity + 1)
    if x.arity == 0:
        raise PreconditionError("F needs dimension at least 2")
    if check:
        from .models import catwg_report
        rep = catwg_report(x)
        if not rep:
            raise PreconditionError(f"input is not weakly globular ({rep.clause})")
    out, vx = _resolve_wg(x)
    _, _, secs = _resolve_hd(x.level(0))
    return ConstructionTrace("F", x, out, vx, sections={(): secs})


def resolve_wg_F_map(h: SimpMap) -> SimpMap:
    """F_n on a morphism (implemented for n = 2, where V_1 is décalage).

    An unresolved end (discrete level 0) is treated as shifted along the
    identity, and lifted into a resolved end through the Dec diagonal.
    """
    xs, xt = h.source, h.target
    if xs.arity != 1:
        raise GuardError("F on morphisms is implemented for dimension 2")
    fs, vs = _resolve_wg(xs)
    ft, vt = _resolve_wg(xt)
    s_done, t_done = fs is not xs, ft is not xt
    if not s_done and not t_done:
        return h
    h0 = h.comps[(0,)]
    if s_done and not t_done:
        comps = {}
        for idx, c in fs.cells.items():
            hk, vk = h.comps[idx], vs.comps[idx]
            comps[idx] = _functor(c, ft.cells[idx], lambda v, hk=hk, vk=vk: hk.o[vk.o[v]],
                                  lambda v, hk=hk, vk=vk: hk.m[vk.m[v]])
        return SimpMap(fs, ft, comps)
    dt = ft.cells[(0,)]
    if s_done:
        g = dec_functor(h0, fs.cells[(0,)], dt)
    else:
        diag = dec_section(xt.cells[(0,)], dt)
        c0 = xs.cells[(0,)]
        g = FinFunctor(c0, dt, {a: diag[h0.o[a]] for a in c0.objects},
                       {f: dt.ident[diag[h0.o[c0.src(f)]]] for f in c0.mor})
    if s_done:
        return shift_map(h, SimpMap(fs.level(0), ft.level(0), {(): g}), fs, ft)
    comps = {(0,): g}
    for idx, c in xs.cells.items():
        k = idx[0]
        if k == 0:
            continue
        hk = h.comps[idx]
        verts = [xs.vertex(idx, 0, j) for j in range(k + 1)]
        comps[idx] = _functor(
            c, ft.cells[idx],
            lambda v, hk=hk, verts=verts: (hk.o[v],) + tuple(g.o[w.o[v]] for w in verts),
            lambda v, hk=hk, verts=verts: (hk.m[v],) + tuple(g.m[w.m[v]] for w in verts))
    return SimpMap(xs, ft, comps)


# ---------------------------------------------------------------------------
# G_n

def _g_levelwise(fx: MultiSimp):
    """Apply F_{n-1} to every outer level of fx and to the maps between them.

    Returns the new table, its comparison map to fx and, per outer level,
    whether that level was actually resolved.
    """
    L = fx.L
    levels = {k: fx.level(k) for k in range(L + 1)}
    res = {k: _resolve_wg(levels[k]) for k in range(L + 1)}
    cells = {}
    for k in range(L + 1):
        for i, c in res[k][0].cells.items():
            cells[(k,) + i] = c
    gens = {}
    for k in range(L + 1):
        for (i, d, g), fn in res[k][0].gens.items():
            gens[((k,) + i, d + 1, g)] = fn
        for g in generators(k, L):
            r = len(g) - 1
            comps = {i: fx.act((k,) + i, 0, g) for i in levels[k].cells}
            fm = resolve_wg_F_map(SimpMap(levels[k], levels[r], comps))
            for i, fn in fm.comps.items():
                gens[((k,) + i, 0, g)] = fn
    out = MultiSimp(fx.arity, L, cells, gens)
    comps = {}
    for k in range(L + 1):
        for i, fn in res[k][1].comps.items():
            comps[(k,) + i] = fn
    resolved = {k: res[k][0] is not levels[k] for k in range(L + 1)}
    return out, SimpMap(out, fx, comps), resolved


def to_fcat_G(x: MultiSimp, check: bool = True) -> ConstructionTrace:
    """G_n X as a table with explicit corner sections, with G_n X → X."""
    n = x.arity + 1
    _guard(n, 3)
    if check:
        from .models import catwg_report
        rep = catwg_report(x)
        if not rep:
            raise PreconditionError(f"input is not weakly globular ({rep.clause})")
    if n == 1:
        return ConstructionTrace("G", x, x, SimpMap.identity(x), sections={})
    fx, vx = _resolve_wg(x)
    if n == 2:
        out, comp = fx, vx
        secs = {(): _top_section_from_dec(x, fx)}
        return ConstructionTrace("G", x, out, comp, sections=secs)
    gx, w, resolved = _g_levelwise(fx)
    comp = vx.after(w)
    secs = {}
    for (k,) in section_prefixes(gx):
        cz = corner(gx, (k,))
        if resolved[k]:
            secs[(k,)] = _dec_classes_section(cz, dec_section(fx.cells[(k, 0)], cz.base()))
        else:
            secs[(k,)] = {c: c for c in discretization(cz).names}
    secs[()] = _top_from_corner(gx, secs[(0,)])
    return ConstructionTrace("G", x, gx, comp, sections=secs)


def _top_section_from_dec(x: MultiSimp, fx: MultiSimp) -> dict:
    if fx is x:
        return {c: c for c in discretization(x.level(0)).names}
    c0 = x.cells[(0,)]
    dec0 = fx.cells[(0,)]
    return _dec_classes_section(fx.level(0), dec_section(c0, dec0))


def _top_from_corner(gx: MultiSimp, inner: dict) -> dict:
    """Top-level representatives chosen among the corner representatives."""
    top = discretization(gx.level(0))
    zero = (0,) * (gx.arity - 1)
    reps = {}
    for obj in sorted(inner.values(), key=label):
        cls = top.assign[(zero, obj)]
        reps.setdefault(cls, obj)
    return reps


def as_ftam(trace: ConstructionTrace) -> FTam:
    return FTam(trace.output, dict(trace.sections))
