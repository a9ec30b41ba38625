"""Replacing homotopically discrete corners by their discrete quotients.

``r0`` discretizes level 0 only; ``d_n`` discretizes every corner reached
along a run of non-zero indices, which lands in the Tamsamani model;
``disc_n`` precomposes with the section-carrying resolution ``to_fcat_G``.
``zigzag_witness`` connects a weakly globular X to ``disc_n X`` by
certified n-equivalences.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .fincat import FinCat, FinFunctor
from .labels import label
from .models import (EquivCertificate, FTam, corner, discretization, ftawg_report,
                     full_subcategory, is_n_equivalence, is_tam)
from .msimp import MultiSimp, SimpMap, _with, check_simplicial
from .report import GuardError, PreconditionError

DEFAULT_GUARD_MS = 60000


def _first_zero(idx: tuple):
    for j, v in enumerate(idx):
        if v == 0:
            return j
    return None


def _discretize(t: FTam, depth: int, check: bool):
    """Returns the discretized table and its inclusion into the input.

    Corners reached along a run of non-zero indices (of length < depth)
    become their discretizations.  Every other cell keeps only the objects
    whose vertices in those corners are chosen representatives: without
    that restriction the degeneracy out of a discretized corner followed by
    a face would disagree with the original face-degeneracy composite
    unless every corner were already discrete.
    """
    x, secs = t.table, t.sections
    if x.arity == 0:
        return x, SimpMap.identity(x)
    if check:
        rep = ftawg_report(t)
        if not rep:
            raise PreconditionError(f"input is not in FCat ({rep.clause})")

    def section(prefix):
        if prefix not in secs:
            raise PreconditionError(f"missing section for prefix {list(prefix)}")
        return secs[prefix]

    cells, gamma, lift, rep_sets = {}, {}, {}, {}
    for idx, c in x.cells.items():
        j = _first_zero(idx)
        if j is None or j >= depth:
            continue
        prefix = idx[:j]
        disc = discretization(corner(x, prefix))
        cells[idx] = FinCat.discrete(disc.names)
        gamma[idx] = {o: disc.assign[(idx[j + 1:], o)] for o in c.objects}
        base = prefix + (0,) * (x.arity - j)
        push = {d: (0,) * (idx[d] + 1) for d in range(j + 1, x.arity) if idx[d]}
        fn = x.act_multi(base, push) if push else None
        lift[idx] = {cls: (fn.o[obj] if fn else obj) for cls, obj in section(prefix).items()}
        rep_sets[idx] = set(lift[idx].values())

    for idx, c in x.cells.items():
        if idx in cells:
            continue
        j = _first_zero(idx)
        bound = min(depth, x.arity if j is None else j)
        checks = [(p, t_, _with(idx, p, 0)) for p in range(bound) for t_ in range(idx[p] + 1)]
        if not checks:
            cells[idx] = c
            continue
        keep = [o for o in c.objects
                if all(x.act(idx, p, (t_,)).o[o] in rep_sets[q] for p, t_, q in checks)]
        cells[idx] = c if len(keep) == len(c.objects) else full_subcategory(c, keep)

    def carry(i, j, g):
        s, tg = cells[i], cells[j]
        if i in gamma:
            o = {cls: g.o[rep] for cls, rep in lift[i].items()}
        else:
            o = {a: g.o[a] for a in s.objects}
        if j in gamma:
            o = {a: gamma[j][v] for a, v in o.items()}
        missing = [a for a, v in o.items() if v not in tg.ident]
        if missing:
            raise PreconditionError(
                f"sections are not compatible: {label(missing[0])} leaves the representatives")
        if i in gamma or j in gamma:
            return FinFunctor(s, tg, o, {f: tg.ident[o[s.src(f)]] for f in s.mor})
        return FinFunctor(s, tg, o, {f: g.m[f] for f in s.mor})

    gens = {}
    for (i, d, th), g in x.gens.items():
        gens[(i, d, th)] = carry(i, _with(i, d, len(th) - 1), g)
    out = MultiSimp(x.arity, x.L, cells, gens)
    comps = {}
    for idx, c in cells.items():
        src = x.cells[idx]
        if idx in lift:
            o = dict(lift[idx])
            comps[idx] = FinFunctor(c, src, o, {cls: src.ident[o[cls]] for cls in c.objects})
        else:
            comps[idx] = FinFunctor(c, src, {a: a for a in c.objects}, {f: f for f in c.mor})
    inclusion = SimpMap(out, x, comps)
    if check:
        rep = check_simplicial(out)
        if not rep:
            raise PreconditionError(f"discretized table is not simplicial ({rep.clause})")
    return out, inclusion


def r0(t: FTam, check: bool = True) -> FTam:
    """Level 0 replaced by its discretization, faces through γ and
    degeneracies through the chosen section."""
    out, _ = _discretize(t, 1, check)
    if out is t.table:
        return t
    secs = {p: s for p, s in t.sections.items() if p}
    secs[()] = {c: c for c in discretization(out.level(0)).names}
    return FTam(out, secs)


def d_n(t: FTam, check: bool = True) -> MultiSimp:
    """Discretize every corner X_{k̄0} with k̄ free of zeros."""
    return d_n_with_inclusion(t, check)[0]


def d_n_with_inclusion(t: FTam, check: bool = True):
    if t.table.arity + 1 > 4:
        raise GuardError("d_n is limited to dimension 4")
    return _discretize(t, t.table.arity, check)


def disc_n(x: MultiSimp, check: bool = True) -> MultiSimp:
    from .constructions import as_ftam, to_fcat_G
    return d_n(as_ftam(to_fcat_G(x, check=check)), check=check)


# ---------------------------------------------------------------------------
# isomorphisms of tables

def _cell_iso(c: FinCat, d: FinCat, objmap: dict, deadline: float):
    """Extend a bijection on objects to an isomorphism c → d, or None."""
    m = {}
    for a in c.objects:
        for b in c.objects:
            src, tgt = c.hom(a, b), d.hom(objmap[a], objmap[b])
            if len(src) != len(tgt):
                return None
            if len(src) == 1:
                m[src[0]] = tgt[0]
    pending = [f for f in c.morphisms() if f not in m]
    if not pending:
        fn = FinFunctor(c, d, objmap, m)
        return fn if _preserves(fn) else None

    options = {f: d.hom(objmap[c.src(f)], objmap[c.tgt(f)]) for f in pending}

    def rec(i, used):
        if time.monotonic() > deadline:
            raise TimeoutError
        if i == len(pending):
            fn = FinFunctor(c, d, objmap, m)
            return fn if _preserves(fn) else None
        f = pending[i]
        for v in options[f]:
            if v in used:
                continue
            m[f] = v
            hit = rec(i + 1, used | {v})
            if hit is not None:
                return hit
        m.pop(f, None)
        return None

    return rec(0, frozenset())


def _preserves(fn: FinFunctor) -> bool:
    c, d = fn.source, fn.target
    if len(set(fn.m.values())) != len(c.mor):
        return False
    for x in c.objects:
        if fn.m[c.ident[x]] != d.ident[fn.o[x]]:
            return False
    for f in c.mor:
        for g in c.out_of(c.tgt(f)):
            if d.comp[(fn.m[g], fn.m[f])] != fn.m[c.comp[(g, f)]]:
                return False
    return True


@dataclass
class IsoVerdict:
    verdict: str  # "isomorphic" | "not-isomorphic" | "inconclusive"
    iso: SimpMap | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {"kind": "isomorphism", "verdict": self.verdict}
        if self.reason:
            out["reason"] = self.reason
        if self.iso is not None:
            out["map"] = self.iso.to_json()
        return out


def find_table_isomorphism(x: MultiSimp, y: MultiSimp, guard_ms: int = DEFAULT_GUARD_MS,
                           max_objects: int | None = None) -> IsoVerdict:
    """Cellwise isomorphism commuting with every generator.

    Object bijections are tried label-identity first, then by a search
    that propagates through the generators out of the all-zero cell.
    """
    if (x.arity, x.L) != (y.arity, y.L):
        return IsoVerdict("not-isomorphic", reason="shape")
    for i in x.cells:
        if x.cells[i].size() != y.cells[i].size():
            return IsoVerdict("not-isomorphic", reason=f"cell {list(i)} sizes differ")
    deadline = time.monotonic() + guard_ms / 1000.0
    try:
        same = all(set(x.cells[i].objects) == set(y.cells[i].objects) for i in x.cells)
        if same:
            comps = {}
            for i, c in x.cells.items():
                fn = _cell_iso(c, y.cells[i], {o: o for o in c.objects}, deadline)
                if fn is None:
                    break
                comps[i] = fn
            else:
                f = SimpMap(x, y, comps)
                if f.check():
                    return IsoVerdict("isomorphic", f)
        if max_objects is not None and any(len(c.objects) > max_objects
                                           for c in x.cells.values()):
            return IsoVerdict("inconclusive", reason="size guard")
        return _search_iso(x, y, deadline)
    except TimeoutError:
        return IsoVerdict("inconclusive", reason="guard timeout")


def _search_iso(x: MultiSimp, y: MultiSimp, deadline: float) -> IsoVerdict:
    """Backtracking over object bijections cell by cell (indices in
    lexicographic order), pruning with the generators between decided cells."""
    import itertools
    order = sorted(x.cells)
    comps = {}

    def consistent(i):
        for (a, d, th), g in x.gens.items():
            b = _with(a, d, len(th) - 1)
            if a in comps and b in comps and (a == i or b == i):
                h = y.gens[(a, d, th)]
                fa, fb = comps[a], comps[b]
                for o in x.cells[a].objects:
                    if fb.o[g.o[o]] != h.o[fa.o[o]]:
                        return False
                for f in x.cells[a].mor:
                    if fb.m[g.m[f]] != h.m[fa.m[f]]:
                        return False
        return True

    def rec(k):
        if time.monotonic() > deadline:
            raise TimeoutError
        if k == len(order):
            return True
        i = order[k]
        c, d = x.cells[i], y.cells[i]
        for perm in itertools.permutations(d.objects):
            if time.monotonic() > deadline:
                raise TimeoutError
            fn = _cell_iso(c, d, dict(zip(c.objects, perm)), deadline)
            if fn is None:
                continue
            comps[i] = fn
            if consistent(i) and rec(k + 1):
                return True
            comps.pop(i, None)
        return False

    if rec(0):
        return IsoVerdict("isomorphic", SimpMap(x, y, dict(comps)))
    return IsoVerdict("not-isomorphic", reason="exhaustive search")


# ---------------------------------------------------------------------------
# zig-zags

@dataclass
class ZigZagEdge:
    source: str
    target: str
    direction: str  # "forward": from → to;  "backward": to → from
    certificate: EquivCertificate | None
    map: SimpMap | None = None

    def to_json(self) -> dict:
        return {"from": self.source, "to": self.target, "direction": self.direction,
                "certificate": self.certificate.to_json() if self.certificate else None}


@dataclass
class ZigZag:
    n: int
    nodes: dict = field(default_factory=dict)   # name -> MultiSimp
    edges: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.certificate is not None and e.certificate.ok for e in self.edges)

    def to_json(self) -> list:
        return [e.to_json() for e in self.edges]

    def summary(self) -> str:
        parts = []
        for e in self.edges:
            arrow = "->" if e.direction == "forward" else "<-"
            status = "ok" if e.certificate is not None and e.certificate.ok else "FAILED"
            parts.append(f"{e.source} {arrow} {e.target} [{status}]")
        return "\n".join(parts)


class ZigZagError(PreconditionError):
    def __init__(self, stage: str, detail: str):
        super().__init__(f"{stage}: {detail}")
        self.stage = stage


def _restrict_map(f: SimpMap, source: MultiSimp, target: MultiSimp) -> SimpMap:
    return SimpMap(source, target, {i: c for i, c in f.comps.items() if i in source.cells})


def _truncated(x: MultiSimp, L: int) -> MultiSimp:
    return x if x.L <= L else x.truncate_to(L)


def zigzag_witness(x: MultiSimp, guard_ms: int = DEFAULT_GUARD_MS) -> ZigZag:
    """Disc X ← Q Disc X → X with both edges certified.

    The left edge is the rigidification comparison of Disc X.  The right
    edge is the composite Q Disc X → Disc X → G X → X of that comparison,
    the inclusion of the discretized table, and the comparison of the
    resolution G.  All nodes are cut to the truncation used by Q.
    """
    from .constructions import as_ftam, to_fcat_G
    from .pseudo import q_n
    n = x.arity + 1
    if n not in (1, 2, 3):
        raise GuardError("zig-zags are certified for n <= 3")
    deadline = time.monotonic() + guard_ms / 1000

    def tick(stage):
        if time.monotonic() > deadline:
            raise GuardError(f"zig-zag exceeded {guard_ms} ms during {stage}")
    z = ZigZag(n)
    if n == 1:
        z.nodes = {"X": x}
        return z
    try:
        g = to_fcat_G(x)
    except GuardError:
        raise
    except Exception as exc:
        raise ZigZagError("resolution", str(exc)) from exc
    tick("resolution")
    try:
        disc, incl = d_n_with_inclusion(as_ftam(g))
    except Exception as exc:
        raise ZigZagError("discretization", str(exc)) from exc
    if not is_tam(disc):
        raise ZigZagError("discretization", "output is not in the Tamsamani model")
    tick("discretization")
    try:
        q_disc = q_n(disc)
    except GuardError:
        raise
    except Exception as exc:
        raise ZigZagError("rigidification", str(exc)) from exc
    tick("rigidification")
    L = q_disc.output.L
    dt = q_disc.source
    gt, xt = _truncated(g.output, L), _truncated(x, L)
    left = q_disc.comparison
    right = (_restrict_map(g.comparison, gt, xt)
             .after(_restrict_map(incl, dt, gt))
             .after(left))
    z.nodes = {"Disc X": dt, "Q Disc X": q_disc.output, "X": xt}
    z.edges.append(ZigZagEdge("Disc X", "Q Disc X", "backward", q_disc.certify(), left))
    z.edges.append(ZigZagEdge("Q Disc X", "X", "forward", is_n_equivalence(right), right))
    tick("certification")
    return z


def _is_discrete_all(x: MultiSimp) -> bool:
    return all(c.is_discrete() for c in x.cells.values())


def verify_zigzag(z: ZigZag) -> bool:
    from .models import verify_certificate
    return all(e.map is not None and e.certificate is not None and e.certificate.ok
               and verify_certificate(e.map, e.certificate) for e in z.edges)
