"""Pseudo-functors on truncated multi-simplicial index categories.

A morphism of the index category out of a multi-index ``idx`` is a tuple of
monotone maps, one per direction (``θ_d: [r_d] → [idx_d]``).  A
:class:`PsFunctor` assigns a functor ``H(θ): H_idx → H_r`` to each such
morphism together with invertible cells ``φ(θ, ψ): H(ψ)H(θ) ⇒ H(θψ)`` and
unit cells ``H(id) ⇒ id``.

The rigidification for n = 2 runs in three steps:

* :func:`tr_n` transports the simplicial structure of X along the
  equivalences ν_k: X_k → X_1 ×_{X_0^d} … ×_{X_0^d} X_1.  Each face or
  degeneracy acts block by block, composing a block of edges through X, so
  the Segal maps of the result are exact projections.  The cells are pasted
  from the units and counits of the chosen adjoint equivalences.
* :func:`strictify` builds the strict replacement L with
  ``obj L_k = ⊔_r Δ([k],[r]) × obj H_r`` and hom-sets taken from H_k.
* :func:`q_n` composes them and assembles ``s: Q X → X``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from .fincat import (AdjointEquivalence, ConjugateFunctor, FinCat, FinFunctor, LazyComp, NatIso,
                     check_functor, equivalence_analysis, is_isomorphism, limit_cat,
                     p_iso_classes, pseudo_inverse)
from .labels import label, ordered
from .models import (_disc_of_level0, catwg_report, is_lta, is_n_equivalence, is_tawg,
                     EquivCertificate)
from .msimp import (MultiSimp, SimpMap, categorify_last, check_simplicial, generators,
                    monotone_maps, reconstruct_category)
from .report import GuardError, PreconditionError, Report, WgcatError, failed, passed

MAX_STRICT_OBJECTS = 200_000


class StageError(WgcatError):
    kind = "stage"

    def __init__(self, stage: str, detail: str):
        super().__init__(f"{stage}: {detail}")
        self.stage, self.detail = stage, detail


# -- index-category morphisms ---------------------------------------------

def identity_move(idx: tuple) -> tuple:
    return tuple(tuple(range(k + 1)) for k in idx)


def move_target(move: tuple) -> tuple:
    return tuple(len(t) - 1 for t in move)


def compose_moves(first: tuple, then: tuple) -> tuple:
    """The move ``first`` followed by ``then`` (θψ in each direction)."""
    return tuple(tuple(a[i] for i in b) for a, b in zip(first, then))


def generator_moves(idx: tuple, L: int):
    for d, k in enumerate(idx):
        for g in generators(k, L):
            yield tuple(g if e == d else tuple(range(idx[e] + 1)) for e in range(len(idx)))


def _move_json(idx, move) -> dict:
    return {"index": list(idx), "move": [list(t) for t in move]}


# -- pseudo-functors --------------------------------------------------------

class PsFunctor:
    """Truncated pseudo-functor into finite categories.

    ``arrow_fn(idx, move)`` returns H(move).  ``phi_fn(idx, first, then, x)``
    returns the component at x of ``H(then)H(first) ⇒ H(first·then)``;
    ``unit_fn(idx, x)`` the component of ``H(id) ⇒ id``.  Missing cell
    functions mean the identity, which is correct for strict inputs.
    """

    def __init__(self, arity: int, L: int, cells: dict, arrow_fn: Callable,
                 phi_fn: Callable | None = None, unit_fn: Callable | None = None):
        self.arity, self.L = arity, L
        self.cells = dict(cells)
        self._arrow_fn, self._phi_fn, self._unit_fn = arrow_fn, phi_fn, unit_fn
        self._arrows, self._phi = {}, {}

    def indices(self):
        return list(product(range(self.L + 1), repeat=self.arity))

    def arrow(self, idx: tuple, move: tuple) -> FinFunctor:
        key = (idx, move)
        out = self._arrows.get(key)
        if out is None:
            if move == identity_move(idx) and self._unit_fn is None:
                out = FinFunctor.identity(self.cells[idx])
            else:
                out = self._arrow_fn(idx, move)
            self._arrows[key] = out
        return out

    def phi_at(self, idx: tuple, first: tuple, then: tuple, x):
        key = (idx, first, then, x)
        out = self._phi.get(key)
        if out is None:
            if self._phi_fn is None:
                tgt = self.cells[move_target(then)]
                out = tgt.ident[self.arrow(idx, compose_moves(first, then)).o[x]]
            else:
                out = self._phi_fn(idx, first, then, x)
            self._phi[key] = out
        return out

    def phi(self, idx: tuple, first: tuple, then: tuple) -> dict:
        return {x: self.phi_at(idx, first, then, x) for x in self.cells[idx].objects}

    def unit_at(self, idx: tuple, x):
        if self._unit_fn is None:
            return self.cells[idx].ident[x]
        return self._unit_fn(idx, x)

    def generator_pairs(self):
        for idx in self.indices():
            for f in generator_moves(idx, self.L):
                for g in generator_moves(move_target(f), self.L):
                    yield idx, f, g

    @staticmethod
    def from_table(x: MultiSimp) -> "PsFunctor":
        """A strict table viewed as a pseudo-functor with identity cells."""
        def arrow(idx, move):
            return x.act_multi(idx, {d: t for d, t in enumerate(move)})
        return PsFunctor(x.arity, x.L, x.cells, arrow)

    def generator_table(self) -> MultiSimp:
        gens = {}
        for idx in self.indices():
            for mv in generator_moves(idx, self.L):
                d = next(e for e in range(self.arity) if mv[e] != tuple(range(idx[e] + 1)))
                gens[(idx, d, mv[d])] = self.arrow(idx, mv)
        return MultiSimp(self.arity, self.L, self.cells, gens)

    def all_moves(self, idx: tuple):
        per_dir = [[t for r in range(self.L + 1) for t in monotone_maps(r, k)] for k in idx]
        return [tuple(mv) for mv in product(*per_dir)]

    def to_json(self) -> dict:
        """Every arrow within truncation and every composable pair of cells,
        so that the document determines the pseudo-functor completely."""
        def key(idx):
            return ",".join(map(str, idx)) or "*"
        arrows, coherence = [], []
        for idx in self.indices():
            for mv in self.all_moves(idx):
                arrows.append(dict(_move_json(idx, mv), functor=self.arrow(idx, mv).to_json()))
                j = move_target(mv)
                for g in self.all_moves(j):
                    comps = self.phi(idx, mv, g)
                    coherence.append({"index": list(idx), "f": [list(t) for t in mv],
                                      "g": [list(t) for t in g],
                                      "iso": {label(k): label(v) for k, v in comps.items()}})
        units = {key(idx): {label(o): label(self.unit_at(idx, o))
                            for o in self.cells[idx].objects} for idx in self.indices()}
        return {"kind": "psfunctor", "schema": 1, "arity": self.arity,
                "truncation": self.L,
                "cells": {key(i): c.to_json() for i, c in sorted(self.cells.items())},
                "arrows": arrows, "coherence": coherence, "units": units}

    @staticmethod
    def from_json(doc: dict) -> "PsFunctor":
        from .report import MalformedError

        def idx_of(key):
            return () if key in ("", "*") else tuple(int(v) for v in key.split(","))

        def move_of(raw):
            return tuple(tuple(int(v) for v in t) for t in raw)
        try:
            arity, L = int(doc["arity"]), int(doc["truncation"])
            cells = {idx_of(k): FinCat.from_json(c) for k, c in doc["cells"].items()}
            arrows = {}
            for e in doc["arrows"]:
                idx, mv = tuple(e["index"]), move_of(e["move"])
                arrows[(idx, mv)] = FinFunctor.from_json(e["functor"], cells[idx],
                                                         cells[move_target(mv)])
            phi = {}
            for e in doc["coherence"]:
                idx, f, g = tuple(e["index"]), move_of(e["f"]), move_of(e["g"])
                for o, m in e["iso"].items():
                    phi[(idx, f, g, o)] = m
            units = {(idx_of(k), o): m for k, comps in doc["units"].items()
                     for o, m in comps.items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedError(f"malformed pseudo-functor document: {exc}") from exc
        if set(cells) != set(product(range(L + 1), repeat=arity)):
            raise MalformedError("cell table does not cover the truncated index set")

        def lookup(table, key, what):
            try:
                return table[key]
            except KeyError:
                raise MalformedError(f"pseudo-functor document lacks {what} {key}") from None
        return PsFunctor(arity, L, cells,
                         lambda idx, mv: lookup(arrows, (idx, mv), "arrow"),
                         lambda idx, f, g, x: lookup(phi, (idx, f, g, x), "cell"),
                         lambda idx, x: lookup(units, (idx, x), "unit"))


@dataclass
class PsNatTrans:
    """Components ``t_idx: source_idx → target_idx`` and invertible cells
    ``cells[(idx, move)][x]: target(move)(t x) → t(source(move) x)``."""

    source: PsFunctor
    target: object  # PsFunctor or MultiSimp
    components: dict
    cell_fn: Callable
    _cells: dict = field(default_factory=dict)

    def cell_at(self, idx, move, x):
        key = (idx, move, x)
        if key not in self._cells:
            self._cells[key] = self.cell_fn(idx, move, x)
        return self._cells[key]

    def check(self) -> Report:
        tgt = self.target if isinstance(self.target, PsFunctor) else PsFunctor.from_table(self.target)
        for idx in self.source.indices():
            r = check_functor(self.components[idx])
            if not r:
                return failed("component", r.clause, path=(idx,))
            for mv in generator_moves(idx, self.source.L):
                j = move_target(mv)
                t_i, t_j = self.components[idx], self.components[j]
                hs, ht = self.source.arrow(idx, mv), tgt.arrow(idx, mv)
                cat = tgt.cells[j]
                src_cat = self.source.cells[idx]
                for x in src_cat.objects:
                    c = self.cell_at(idx, mv, x)
                    if cat.mor.get(c) != (ht.o[t_i.o[x]], t_j.o[hs.o[x]]) or not cat.is_iso(c):
                        return failed("cell-type", path=(idx,), witness=(mv, x))
                for f, (a, b) in src_cat.mor.items():
                    lhs = cat.comp[(self.cell_at(idx, mv, b), ht.m[t_i.m[f]])]
                    rhs = cat.comp[(t_j.m[hs.m[f]], self.cell_at(idx, mv, a))]
                    if lhs != rhs:
                        return failed("cell-naturality", path=(idx,), witness=(mv, f))
        return passed("pseudo-natural")

    def levelwise_equivalence(self) -> bool:
        return all(equivalence_analysis(f).equivalence for f in self.components.values())


def check_pseudo(h: PsFunctor) -> Report:
    """Functoriality of the generator arrows, naturality and invertibility of
    every coherence cell on generator pairs, and the associativity and unit
    axioms on generator triples."""
    for idx in h.indices():
        for mv in generator_moves(idx, h.L):
            r = check_functor(h.arrow(idx, mv))
            if not r:
                return failed("arrow", r.clause, path=(idx,), witness=(mv,))
    for idx, f, g in h.generator_pairs():
        j, l = move_target(f), move_target(g)
        cat = h.cells[l]
        hf, hg, hgf = h.arrow(idx, f), h.arrow(j, g), h.arrow(idx, compose_moves(f, g))
        src = h.cells[idx]
        for x in src.objects:
            c = h.phi_at(idx, f, g, x)
            if cat.mor.get(c) != (hg.o[hf.o[x]], hgf.o[x]) or not cat.is_iso(c):
                return failed("coherence-type", path=(idx,), witness=(f, g, x))
        for m, (a, b) in src.mor.items():
            if (cat.comp[(h.phi_at(idx, f, g, b), hg.m[hf.m[m]])]
                    != cat.comp[(hgf.m[m], h.phi_at(idx, f, g, a))]):
                return failed("coherence-naturality", path=(idx,), witness=(f, g, m))
    for idx in h.indices():
        for f in generator_moves(idx, h.L):
            j = move_target(f)
            hf = h.arrow(idx, f)
            cat = h.cells[j]
            ii, ij = identity_move(idx), identity_move(j)
            for x in h.cells[idx].objects:
                left = h.phi_at(idx, f, ij, x)          # H(id)H(f)x → H(f)x
                if left != h.unit_at(j, hf.o[x]):
                    return failed("unit-left", path=(idx,), witness=(f, x))
                right = h.phi_at(idx, ii, f, x)         # H(f)H(id)x → H(f)x
                if right != hf.m[h.unit_at(idx, x)]:
                    return failed("unit-right", path=(idx,), witness=(f, x))
    for idx, f, g in h.generator_pairs():
        j, l = move_target(f), move_target(g)
        fg = compose_moves(f, g)
        for k in generator_moves(l, h.L):
            out = h.cells[move_target(k)]
            hk = h.arrow(l, k)
            hf = h.arrow(idx, f)
            gk = compose_moves(g, k)
            for x in h.cells[idx].objects:
                one = out.comp[(h.phi_at(idx, fg, k, x), hk.m[h.phi_at(idx, f, g, x)])]
                two = out.comp[(h.phi_at(idx, f, gk, x), h.phi_at(j, g, k, hf.o[x]))]
                if one != two:
                    return failed("associativity", path=(idx,), witness=(f, g, k, x))
    return passed("pseudo-functor", truncation=h.L)


def _segal_target(h: PsFunctor, idx: tuple, d: int) -> tuple[FinCat, list]:
    k = idx[d]
    one = idx[:d] + (1,) + idx[d + 1:]
    src = h.arrow(one, tuple((0,) if e == d else tuple(range(idx[e] + 1))
                             for e in range(h.arity)))
    tgt = h.arrow(one, tuple((1,) if e == d else tuple(range(idx[e] + 1))
                             for e in range(h.arity)))
    lim = limit_cat([h.cells[one]] * k, [(j, tgt, j + 1, src) for j in range(k - 1)])
    edges = [h.arrow(idx, tuple((j - 1, j) if e == d else tuple(range(idx[e] + 1))
                                for e in range(h.arity))) for j in range(1, k + 1)]
    return lim, edges


def segal_functor(h: PsFunctor, idx: tuple, d: int) -> FinFunctor:
    lim, edges = _segal_target(h, idx, d)
    c = h.cells[idx]
    o = {x: tuple(e.o[x] for e in edges) for x in c.objects}
    m = {f: tuple(e.m[f] for e in edges) for f in c.mor}
    return FinFunctor(c, lim, o, m)


def p_bar(h: PsFunctor) -> MultiSimp:
    """Cellwise iso classes; the cells of H become identities, so the result
    is a strict table of sets."""
    classes = {i: p_iso_classes(c) for i, c in h.cells.items()}
    cells = {i: FinCat.discrete(names) for i, (names, _) in classes.items()}
    gens = {}
    for idx in h.indices():
        for mv in generator_moves(idx, h.L):
            d = next(e for e in range(h.arity) if mv[e] != tuple(range(idx[e] + 1)))
            j = move_target(mv)
            fn = h.arrow(idx, mv)
            src_cls, tgt_cls = classes[idx][1], classes[j][1]
            o = {}
            for x in h.cells[idx].objects:
                o[src_cls[x]] = tgt_cls[fn.o[x]]
            gens[(idx, d, mv[d])] = FinFunctor(cells[idx], cells[j], o, dict(o))
    return MultiSimp(h.arity, h.L, cells, gens)


def is_segalic(h: PsFunctor) -> Report:
    """Discreteness of every cell with a zero coordinate, invertible Segal
    maps in every direction, and a Segal-type iso-class image."""
    for idx in h.indices():
        if 0 in idx and not h.cells[idx].is_discrete():
            return failed("discreteness", path=(idx,))
    for d in range(h.arity):
        for idx in h.indices():
            if idx[d] >= 2 and not is_isomorphism(segal_functor(h, idx, d)):
                return failed("segal", path=(idx, d + 1), truncation=h.L)
    pb = p_bar(h)
    r = check_simplicial(pb)
    if not r:
        return failed("p-image", "iso-class image is not simplicial")
    try:
        if h.arity == 1:
            reconstruct_category(pb)
        else:
            r = catwg_report(categorify_last(pb))
            if not r:
                return failed("p-image", r.clause)
    except WgcatError as exc:
        return failed("p-image", str(exc))
    return passed("segalic", truncation=h.L)


# -- transport of structure (n = 2) ----------------------------------------

class _Transport:
    """Adjoint equivalences ν_k ⊣ μ_k between the levels of X and the wide
    pullbacks H_k, plus the blockwise arrows and their cells."""

    def __init__(self, x: MultiSimp):
        self.x = x
        L = x.L
        disc = _disc_of_level0(x)
        self.H = {}
        self.nu = {}
        h0 = FinCat.discrete(disc.names)
        self.H[0] = h0
        c0 = x.cells[(0,)]
        g0 = {o: disc.assign[((0,), o)] for o in c0.objects}
        self.nu[0] = FinFunctor(c0, h0, g0, {f: g0[c0.src(f)] for f in c0.mor})
        x1 = x.cells[(1,)]
        if L >= 1:
            self.H[1] = x1
            self.nu[1] = FinFunctor.identity(x1)
            s = x.vertex((1,), 0, 0)
            t = x.vertex((1,), 0, 1)
            self.src_cls = self.nu[0].after(s)
            self.tgt_cls = self.nu[0].after(t)
        for k in range(2, L + 1):
            hk = limit_cat([x1] * k, [(j, self.tgt_cls, j + 1, self.src_cls)
                                      for j in range(k - 1)])
            self.H[k] = hk
            edges = [x.act((k,), 0, (j - 1, j)) for j in range(1, k + 1)]
            ck = x.cells[(k,)]
            o = {a: tuple(e.o[a] for e in edges) for a in ck.objects}
            m = {f: tuple(e.m[f] for e in edges) for f in ck.mor}
            self.nu[k] = FinFunctor(ck, hk, o, m)
        self.adj: dict[int, AdjointEquivalence] = {}
        for k, fn in self.nu.items():
            v = equivalence_analysis(fn)
            if not v.equivalence:
                raise PreconditionError(f"induced Segal map at level {k} is not an equivalence")
            self.adj[k] = pseudo_inverse(fn, v)
        self._B, self._T, self._alpha = {}, {}, {}

    # pieces of H_k
    def vertex_class(self, k, u, p):
        if k == 0:
            return u
        e = u if k == 1 else u[p - 1 if p > 0 else 0]
        return self.tgt_cls.o[e] if p > 0 else self.src_cls.o[e]

    def block(self, k, u, a, b, morphism=False):
        """Component of H_k on positions a..b as an element of H_{b-a}."""
        ell = b - a
        if ell == 0:
            if morphism:
                src = self.H[k].src(u)
                return self.H[0].ident[self.vertex_class(k, src, a)]
            return self.vertex_class(k, u, a)
        if k == 1:
            return u
        part = u[a:b]
        return part[0] if ell == 1 else part

    def long_edge(self, ell):
        """X((0,ℓ)) μ_ℓ : H_ℓ → H_1 (identity for ℓ = 1)."""
        if ell == 1:
            return FinFunctor.identity(self.H[1])
        theta = (0, ell) if ell else (0, 0)
        return self.x.act((ell,), 0, theta).after(self.adj[ell].backward)

    def B(self, k, theta) -> FinFunctor:
        """Blockwise action of θ: [r] → [k] on H_k."""
        key = (k, theta)
        if key in self._B:
            return self._B[key]
        r = len(theta) - 1
        hk, hr = self.H[k], self.H[r]
        if r == 0:
            o = {u: self.block(k, u, theta[0], theta[0]) for u in hk.objects}
            m = {f: hr.ident[o[hk.src(f)]] for f in hk.mor}
        else:
            blocks = [(theta[i - 1], theta[i]) for i in range(1, r + 1)]
            le = {b - a: self.long_edge(b - a) for a, b in blocks}

            def ob(u):
                parts = tuple(le[b - a].o[self.block(k, u, a, b)] for a, b in blocks)
                return parts[0] if r == 1 else parts

            def mo(f):
                parts = tuple(le[b - a].m[self.block(k, f, a, b, True)] for a, b in blocks)
                return parts[0] if r == 1 else parts
            o = {u: ob(u) for u in hk.objects}
            m = {f: mo(f) for f in hk.mor}
        out = FinFunctor(hk, hr, o, m)
        self._B[key] = out
        return out

    def T(self, k, theta) -> FinFunctor:
        """ν_r X(θ) μ_k."""
        key = (k, theta)
        if key not in self._T:
            r = len(theta) - 1
            self._T[key] = self.nu[r].after(self.x.act((k,), 0, theta)).after(
                self.adj[k].backward)
        return self._T[key]

    def alpha(self, k, theta, u):
        """Invertible T(θ)u → B(θ)u in H_r."""
        key = (k, theta, u)
        if key in self._alpha:
            return self._alpha[key]
        r = len(theta) - 1
        hr = self.H[r]
        if r == 0:
            out = hr.ident[self.B(k, theta).o[u]]
        else:
            eps_u = self.adj[k].counit.components[u]
            mu_u = self.adj[k].backward.o[u]
            parts = []
            for i in range(1, r + 1):
                a, b = theta[i - 1], theta[i]
                ell = b - a
                w = self.x.act((k,), 0, tuple(range(a, b + 1))).o[mu_u]
                cl = self.x.cells[(ell,)]
                eta_w = self.adj[ell].unit.components[w]
                eps_b = self.block(k, eps_u, a, b, True)
                step = cl.comp[(self.adj[ell].backward.m[eps_b], eta_w)]
                c = (0, ell) if ell else (0, 0)
                parts.append(self.x.act((ell,), 0, c).m[step] if ell != 1 else step)
            out = parts[0] if r == 1 else tuple(parts)
        self._alpha[key] = out
        return out

    def phi_T(self, k, theta, psi, u):
        """T(ψ)T(θ)u → T(θψ)u, from the inverse unit at level r."""
        r = len(theta) - 1
        s = len(psi) - 1
        z = self.x.act((k,), 0, theta).o[self.adj[k].backward.o[u]]
        cr = self.x.cells[(r,)]
        inv = cr.inverse(self.adj[r].unit.components[z])
        return self.nu[s].m[self.x.act((r,), 0, psi).m[inv]]

    def phi_B(self, k, theta, psi, u):
        """B(ψ)B(θ)u → B(θψ)u."""
        r = len(theta) - 1
        s = len(psi) - 1
        hs = self.H[s]
        tp = tuple(theta[i] for i in psi)
        bt = self.B(k, theta)
        whisker = hs.comp[(self.alpha(r, psi, bt.o[u]), self.T(r, psi).m[self.alpha(k, theta, u)])]
        return hs.comp[(self.alpha(k, tp, u),
                        hs.comp[(self.phi_T(k, theta, psi, u), hs.inverse(whisker))])]


def tr_n(x: MultiSimp, check: bool = True):
    """Segalic pseudo-functor transported from x, with t: Tr X → X.

    Returns ``(H, t)``.  Only n = 2 is supported (arity 1)."""
    n = x.arity + 1
    if n != 2:
        raise GuardError("transport of structure is implemented for n = 2")
    if check:
        r = is_lta(x)
        if not r:
            raise PreconditionError(f"input is not in LTa: {r.clause}")
    tp = _Transport(x)
    cells = {(k,): tp.H[k] for k in range(x.L + 1)}

    def arrow(idx, move):
        return tp.B(idx[0], move[0])

    def phi(idx, first, then, u):
        return tp.phi_B(idx[0], first[0], then[0], u)

    h = PsFunctor(1, x.L, cells, arrow, phi)
    h.transport = tp

    def cell(idx, move, u):
        # X(θ) μ_k u → μ_r B(θ) u
        k, theta = idx[0], move[0]
        r = len(theta) - 1
        z = x.act((k,), 0, theta).o[tp.adj[k].backward.o[u]]
        cr = x.cells[(r,)]
        eta = tp.adj[r].unit.components[z]
        return cr.comp[(tp.adj[r].backward.m[tp.alpha(k, theta, u)], eta)]

    t = PsNatTrans(h, x, {(k,): tp.adj[k].backward for k in range(x.L + 1)}, cell)
    return h, t


# -- strictification --------------------------------------------------------

def _third(m):
    return m[2]


def _same(m):
    return m


@dataclass
class Strictification:
    output: MultiSimp
    comparisons: dict  # idx -> FinFunctor L_idx → H_idx

    def certify(self) -> Report:
        for idx, g in sorted(self.comparisons.items()):
            if not equivalence_analysis(g).equivalence:
                return failed("comparison", path=(idx,))
        return passed("comparisons")


def is_strict(h: PsFunctor) -> bool:
    """Identity coherence cells and strictly composing generator arrows."""
    if h._phi_fn is None and h._unit_fn is None:
        return True
    for idx in h.indices():
        for x in h.cells[idx].objects:
            if h.unit_at(idx, x) != h.cells[idx].ident[x]:
                return False
    for idx, f, g in h.generator_pairs():
        tgt = h.cells[move_target(g)]
        if not all(c == tgt.ident[tgt.src(c)] for c in h.phi(idx, f, g).values()):
            return False
        if not h.arrow(move_target(f), g).after(h.arrow(idx, f)).same_as(
                h.arrow(idx, compose_moves(f, g))):
            return False
    return True


def strictify(h: PsFunctor, check: bool = True) -> Strictification:
    """Strict replacement of a Segalic pseudo-functor of arity 1.

    ``L_k`` has objects ``(r, θ, v)`` with ``θ: [k] → [r]`` and ``v ∈ H_r``;
    a morphism ``(r, θ, v) → (r', θ', v')`` is a morphism
    ``H(θ)v → H(θ')v'`` of ``H_k``.  Generators act by precomposition on θ
    and conjugate morphisms by the coherence cells.
    """
    if h.arity != 1:
        raise GuardError("strictification is implemented for arity 1")
    if check:
        r = is_segalic(h)
        if not r:
            raise PreconditionError(f"not Segalic: {r.clause}")
    L = h.L
    if is_strict(h):
        out = h.generator_table()
        return Strictification(out, {i: FinFunctor.identity(c) for i, c in out.cells.items()})
    cells, image, down, comparisons = {}, {}, {}, {}
    for k in range(L + 1):
        hk = h.cells[(k,)]
        objs, img = [], {}
        for r in range(L + 1):
            hr = h.cells[(r,)]
            for theta in monotone_maps(k, r):
                fn = h.arrow((r,), (theta,))
                for v in hr.objects:
                    p = (r, theta, v)
                    objs.append(p)
                    img[p] = fn.o[v]
        if len(objs) > MAX_STRICT_OBJECTS:
            raise GuardError(f"strictification level {k} has {len(objs)} objects")
        by_img = {}
        for p in objs:
            by_img.setdefault(img[p], []).append(p)
        mors = {}
        for p in objs:
            for f in hk.out_of(img[p]):
                for q in by_img.get(hk.tgt(f), ()):
                    mors[(p, q, f)] = (p, q)
        ident = {p: (p, p, hk.ident[img[p]]) for p in objs}
        comp = LazyComp(mors, lambda g, f, hk=hk: (f[0], g[1], hk.comp[(g[2], f[2])]))
        cells[(k,)] = FinCat(objs, mors, ident, comp)
        image[k] = img
        down[k] = {m: m[2] for m in mors}
        comparisons[(k,)] = FinFunctor(cells[(k,)], hk, img, down[k])

    def op(idx, d, psi, src, tgt):
        k = idx[0]
        s = len(psi) - 1
        hs = h.cells[(s,)]
        hpsi = h.arrow((k,), (psi,))

        def move(p):
            r, theta, v = p
            return (r, tuple(theta[i] for i in psi), v)

        def cell(p):
            r, theta, v = p
            return h.phi_at((r,), (theta,), (psi,), v)
        o = {p: move(p) for p in src.objects}
        cells_p = {p: cell(p) for p in src.objects}
        m = {}
        for mor in src.mor:
            p, q, f = mor
            g = hs.comp[(cells_p[q], hs.comp[(hpsi.m[f], hs.inverse(cells_p[p]))])]
            m[mor] = (o[p], o[q], g)
        return ConjugateFunctor(src, tgt, o, m, hpsi, image[k], down[k], _third, cells_p)

    out = MultiSimp.build(1, L, lambda idx: cells[idx], op)
    st = Strictification(out, comparisons)
    if check:
        r = check_simplicial(out)
        if not r:
            raise StageError("strictify", f"output is not simplicial: {r.clause}")
        r = st.certify()
        if not r:
            raise StageError("strictify", "comparison is not an equivalence")
    return st


def p_step(x: MultiSimp) -> MultiSimp:
    """The pullback step before transport.  For n = 2 it is the identity."""
    if x.arity + 1 == 2:
        return x
    raise GuardError("the pullback step is implemented for n = 2 only")


# -- rigidification -------------------------------------------------------

Q_TRUNCATION = 2


@dataclass
class Rigidification:
    """Q X with ``comparison = s: Q X → X|_L`` and the intermediate data."""

    source: MultiSimp
    output: MultiSimp
    comparison: SimpMap
    pseudo: PsFunctor
    transport: PsNatTrans
    strict: Strictification
    certificate: EquivCertificate | None = None

    def certify(self) -> EquivCertificate:
        if self.certificate is None:
            self.certificate = is_n_equivalence(self.comparison)
        return self.certificate


def _identity_rigidification(xt: MultiSimp) -> Rigidification:
    ident = SimpMap.identity(xt)
    h = PsFunctor.from_table(xt)
    t = PsNatTrans(h, xt, dict(ident.comps),
                   lambda idx, mv, v: xt.cells[move_target(mv)].ident[
                       xt.act_multi(idx, dict(enumerate(mv))).o[v]])
    return Rigidification(xt, xt, ident, h, t, Strictification(xt, dict(ident.comps)))


def q_n(x: MultiSimp, check: bool = True, truncation: int = Q_TRUNCATION) -> Rigidification:
    """Rigidification ``Q X = St Tr X`` with ``s: Q X → X`` (n = 2).

    Computed at truncation ``min(x.L, truncation)``; the map s lands in x
    truncated to the same level."""
    n = x.arity + 1
    if n not in (2, 3):
        raise GuardError("rigidification is implemented for n in {2, 3}")
    if n == 3:
        raise GuardError("rigidification for n = 3 is not implemented")
    xt = x.truncate_to(min(x.L, truncation)) if x.L > truncation else x
    if all(c.is_discrete() for c in xt.cells.values()):
        return _identity_rigidification(xt)
    if check:
        r = is_tawg(xt)
        if not r:
            raise StageError("input", f"not weakly globular Tamsamani: {r.clause}")
    if is_segalic(PsFunctor.from_table(xt)):
        # already strict with discrete corners: every stage is an identity
        return _identity_rigidification(xt)
    try:
        h, t = tr_n(p_step(xt), check=False)
    except WgcatError as exc:
        raise StageError("transport", str(exc)) from exc
    try:
        st = strictify(h, check=check)
    except WgcatError as exc:
        if isinstance(exc, GuardError):
            raise
        raise StageError("strictify", str(exc)) from exc
    q = st.output
    comps = {}
    for (k,), cat in q.cells.items():
        xk = xt.cells[(k,)]
        mu_k = t.components[(k,)]
        o, m = {}, {}
        for p in cat.objects:
            r, theta, v = p
            o[p] = xt.act((r,), 0, theta).o[t.components[(r,)].o[v]]

        back = {p: xk.inverse(t.cell_at((p[0],), (p[1],), p[2])) for p in cat.objects}
        for mor in cat.mor:
            p, q2, f = mor
            m[mor] = xk.comp[(back[q2], xk.comp[(mu_k.m[f], xk.inverse(back[p]))])]
        comps[(k,)] = ConjugateFunctor(cat, xk, o, m, mu_k, st.comparisons[(k,)].o,
                                       st.comparisons[(k,)].m, _same, back)
    s = SimpMap(q, xt, comps)
    rig = Rigidification(xt, q, s, h, t, st)
    if check:
        r = s.check()
        if not r:
            raise StageError("comparison", f"s is not a map of tables: {r.clause}")
        r = catwg_report(q)
        if not r:
            raise StageError("output", f"Q X is not weakly globular: {r.clause}")
        cert = rig.certify()
        if not cert.ok:
            raise StageError("comparison", "s is not an n-equivalence")
    return rig
