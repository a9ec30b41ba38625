"""Acceptance criteria 1-10, one test each.

Every test prints a single line ``criterion k [PASS|FAIL] ...`` with the
tolerance used, the instance tally and the runtime against its limit.  The
lines are repeated in the terminal summary.  Run this file directly to get
only the ten lines.
"""
import hashlib
import itertools
import json
import os
import random
import subprocess
import sys
import time
from collections import Counter

import pytest

from wgcat.constructions import as_ftam, resolve_wg_F, to_fcat_G
from wgcat.corpus import (GenSpec, generate, random_fincat, random_functor_into, random_hd,
                          random_isofibration, random_cospan_over_discrete)
from wgcat.discretize import d_n, disc_n, find_table_isomorphism, verify_zigzag, zigzag_witness
from wgcat.fincat import (FinCat, FinFunctor, check_functor, decalage, equivalence_analysis,
                          is_equiv_relation, is_isofibration, p_iso_classes, product_cat,
                          projection, pullback_cat, q_components)
from wgcat.models import (clear_caches, full_subcategory, is_catwg, is_ftawg, is_groupoidal,
                          is_n_equivalence, is_tam, verify_certificate)
from wgcat.msimp import (MultiSimp, SimpMap, nerve, product_table, pullback_table,
                         reconstruct_category, segal_report)
from wgcat.pseudo import q_n
from wgcat.report import GuardError


def outcome(k, ok, tolerance, tally, seconds, limit):
    verdict = "PASS" if ok and seconds < limit else "FAIL"
    return (f"criterion {k} [{verdict}] tolerance={tolerance} {tally} "
            f"runtime={seconds:.1f}s limit={limit}s")


class Timer:
    def __enter__(self):
        self.start = time.monotonic()
        return self

    def __exit__(self, *exc):
        self.seconds = time.monotonic() - self.start


# ---------------------------------------------------------------------------
# 1. nerves

def criterion_1():
    good = 0
    with Timer() as t:
        for s in range(100):
            c = random_fincat(random.Random(f"acc1:{s}"), 5, 12)
            x = nerve(c, 3)
            back = reconstruct_category(x)
            if segal_report(x) and nerve(back, 3) == x and back.size() == c.size():
                good += 1
    return outcome(1, good == 100, "exact", f"{good}/100 categories", t.seconds, 10), good == 100


# ---------------------------------------------------------------------------
# 2. q over discrete bases and p along isofibrations

def _set_pullback(left, right, over_left, over_right):
    return {(a, b) for a in left for b in right if over_left[a] == over_right[b]}


def _q_lemma(f, g):
    p, pr0, pr1 = pullback_cat(f, g)
    _, qp = q_components(p)
    _, qa = q_components(f.source)
    _, qb = q_components(g.source)
    # E is discrete, so components of E are its objects
    over_a = {qa[x]: f.o[x] for x in f.source.objects}
    over_b = {qb[x]: g.o[x] for x in g.source.objects}
    expected = _set_pullback(set(qa.values()), set(qb.values()), over_a, over_b)
    induced = {}
    for o in p.objects:
        induced.setdefault(qp[o], set()).add((qa[o[0]], qb[o[1]]))
    images = [next(iter(v)) for v in induced.values()]
    return (all(len(v) == 1 for v in induced.values()) and len(images) == len(set(images))
            and set(images) == expected)


def _p_lemma(f, g):
    p, _, _ = pullback_cat(f, g)
    _, pp = p_iso_classes(p)
    _, pa = p_iso_classes(f.source)
    _, pb = p_iso_classes(g.source)
    _, pc = p_iso_classes(f.target)
    over_a = {pa[x]: pc[f.o[x]] for x in f.source.objects}
    over_b = {pb[x]: pc[g.o[x]] for x in g.source.objects}
    expected = _set_pullback(set(pa.values()), set(pb.values()), over_a, over_b)
    induced = {}
    for o in p.objects:
        induced.setdefault(pp[o], set()).add((pa[o[0]], pb[o[1]]))
    images = [next(iter(v)) for v in induced.values()]
    return (all(len(v) == 1 for v in induced.values()) and len(images) == len(set(images))
            and set(images) == expected)


def _trivial_automorphisms(d):
    return all(len(d.hom(a, a)) == 1 for a in d.objects)


def criterion_2():
    q_ok = p_ok = 0
    raw, raw_ok = 0, 0
    with Timer() as t:
        for s in range(100):
            f, g = random_cospan_over_discrete(random.Random(f"acc2q:{s}"))
            q_ok += _q_lemma(f, g)
        # the p statement needs the base to have no non-identity automorphisms;
        # cospans over other bases are tallied separately
        s = 0
        checked = 0
        while checked < 100:
            rng = random.Random(f"acc2p:{s}")
            s += 1
            f = random_isofibration(rng)
            assert is_isofibration(f)
            g = random_functor_into(rng, f.target)
            if _trivial_automorphisms(f.target):
                checked += 1
                p_ok += _p_lemma(f, g)
            else:
                raw += 1
                raw_ok += _p_lemma(f, g)
    ok = q_ok == 100 and p_ok == 100
    return outcome(2, ok, "exact", f"q {q_ok}/100, p {p_ok}/100 cospans (bases with "
                   f"automorphisms, not counted: {raw_ok}/{raw} hold)", t.seconds, 30), ok


# ---------------------------------------------------------------------------
# 3. décalage of homotopically discrete categories

def criterion_3():
    good = 0
    with Timer() as t:
        for s in range(50):
            c = generate(GenSpec(s, "hd", 1)).base()
            dec, d1 = decalage(c)
            if (is_equiv_relation(dec) and is_isofibration(d1)
                    and set(d1.o.values()) == set(c.objects)):
                good += 1
    return outcome(3, good == 50, "exact", f"{good}/50 inputs", t.seconds, 10), good == 50


# ---------------------------------------------------------------------------
# 4. pullback stability

def _hd_functor(rng, b, c):
    """Random functor between equivalence relations: classes to classes."""
    _, cb = p_iso_classes(b)
    _, cc = p_iso_classes(c)
    target_of = {k: rng.choice(sorted(set(cc.values()))) for k in set(cb.values())}
    members = {k: [y for y in c.objects if cc[y] == k] for k in set(cc.values())}
    o = {x: rng.choice(members[target_of[cb[x]]]) for x in b.objects}
    m = {f: c.hom(o[b.src(f)], o[b.tgt(f)])[0] for f in b.mor}
    return FinFunctor(b, c, o, m)


def _square_ff(s):
    rng = random.Random(f"acc4ff:{s}")
    d = random_fincat(rng, 4, 10)
    keep = [o for o in d.objects if rng.random() < 0.6] or [d.objects[0]]
    a = full_subcategory(d, keep)
    f = FinFunctor(a, d, {o: o for o in a.objects}, {m: m for m in a.mor})
    g = random_functor_into(rng, d)
    assert equivalence_analysis(f).fully_faithful
    p, _, r = pullback_cat(f, g)
    return equivalence_analysis(r).fully_faithful


def _square_hd(s):
    rng = random.Random(f"acc4hd:{s}")
    c = random_hd(rng, 4)
    if rng.random() < 0.5:
        a, f = decalage(c)
    else:
        k = random_hd(rng, 3)
        a = product_cat([c, k])
        f = projection(a, c, 0)
    b = random_hd(rng, 4)
    g = _hd_functor(rng, b, c)
    assert is_equiv_relation(a) and is_equiv_relation(b) and is_isofibration(f)
    assert check_functor(g)
    p, _, _ = pullback_cat(f, g)
    return is_equiv_relation(p)


def _square_equiv(s):
    rng = random.Random(f"acc4eq:{s}")
    z = generate(GenSpec(s, "catwg", 2)).truncate_to(2)
    # a contractible groupoid, so the projection is a 2-equivalence
    size = rng.randint(1, 3)
    fiber = (FinCat.walking_iso() if size == 1
             else FinCat.equivalence_relation({str(i): 0 for i in range(size + 1)}))
    y = product_table(z, MultiSimp.constant(1, z.L, fiber))
    g = SimpMap(y, z, {i: projection(c, z.cells[i], 0) for i, c in y.cells.items()})
    f = resolve_wg_F(z).comparison if s % 2 else SimpMap.identity(z)
    assert all(is_isofibration(c) for c in g.comps.values())
    assert is_n_equivalence(g).ok
    _, _, h = pullback_table(g, f)
    cert = is_n_equivalence(h)
    return cert.ok and verify_certificate(h, cert)


def criterion_4():
    with Timer() as t:
        ff = sum(_square_ff(s) for s in range(50))
        hd = sum(_square_hd(s) for s in range(50))
        eq = sum(_square_equiv(s) for s in range(50))
        clear_caches()
    ok = ff == hd == eq == 50
    return outcome(4, ok, "exact", f"ff {ff}/50, hd {hd}/50, 2-equivalence {eq}/50 squares",
                   t.seconds, 60), ok


# ---------------------------------------------------------------------------
# 5. F and G

def criterion_5():
    good2 = good3 = 0
    with Timer() as t:
        for s in range(50):
            x = generate(GenSpec(s, "catwg", 2))
            f, g = resolve_wg_F(x), to_fcat_G(x)
            cf, cg = f.certify(), g.certify()
            if (is_catwg(f.output) and cf.ok and verify_certificate(f.comparison, cf)
                    and is_ftawg(as_ftam(g)) and cg.ok and verify_certificate(g.comparison, cg)):
                good2 += 1
            clear_caches()
        for s in range(10):
            x = generate(GenSpec(s, "catwg", 3))
            g = to_fcat_G(x)
            cg = g.certify()
            if is_ftawg(as_ftam(g)) and cg.ok and verify_certificate(g.comparison, cg):
                good3 += 1
            clear_caches()
    ok = good2 == 50 and good3 == 10
    return outcome(5, ok, "exact", f"n=2 {good2}/50, n=3 {good3}/10", t.seconds, 300), ok


# ---------------------------------------------------------------------------
# 6. discretization and zig-zags

def criterion_6():
    good2 = good3 = 0
    reasons = Counter()
    with Timer() as t:
        for s in range(50):
            x = generate(GenSpec(s, "catwg", 2))
            if not is_tam(disc_n(x)):
                continue
            z = zigzag_witness(x)
            if z.ok and verify_zigzag(z):
                good2 += 1
            clear_caches()
        for s in range(5):
            x = generate(GenSpec(s, "catwg", 3))
            if not is_tam(disc_n(x)):
                reasons["disc not tam"] += 1
                continue
            try:
                z = zigzag_witness(x)
            except GuardError:
                reasons["n=3 rigidification unavailable"] += 1
                continue
            if z.ok and verify_zigzag(z):
                good3 += 1
            clear_caches()
    ok = good2 == 50 and good3 >= 5
    why = f" ({', '.join(f'{k}: {v}' for k, v in sorted(reasons.items()))})" if reasons else ""
    return outcome(6, ok, "exact", f"n=2 {good2}/50, n=3 {good3}/5{why}", t.seconds, 600), ok


# ---------------------------------------------------------------------------
# 7. rigidification

def criterion_7():
    good = 0
    with Timer() as t:
        for s in range(50):
            x = generate(GenSpec(s, "tawg", 2))
            rig = q_n(x)
            cert = rig.certify()
            levels = all(is_n_equivalence(rig.comparison.level(k)).ok
                         for k in range(rig.output.L + 1))
            per_index = all(equivalence_analysis(g).equivalence
                            for g in rig.strict.comparisons.values())
            if (is_catwg(rig.output) and cert.ok and verify_certificate(rig.comparison, cert)
                    and levels and per_index):
                good += 1
            clear_caches()
    return outcome(7, good == 50, "exact", f"{good}/50 inputs", t.seconds, 300), good == 50


# ---------------------------------------------------------------------------
# 8. Q after D against Q

def criterion_8():
    verdicts = Counter()
    with Timer() as t:
        for s in range(25):
            ft = generate(GenSpec(s, "ftawg", 2))
            a = q_n(d_n(ft), check=False).output
            b = q_n(ft.table, check=False).output
            verdicts[find_table_isomorphism(a, b).verdict] += 1
            del a, b
            clear_caches()
    ok = verdicts["isomorphic"] == 25
    tally = ", ".join(f"{k} {v}" for k, v in sorted(verdicts.items()))
    return outcome(8, ok, "exact", f"{tally} of 25", t.seconds, 300), ok


# ---------------------------------------------------------------------------
# 9. groupoidality across certified equivalences

def criterion_9():
    agree, mixed = 0, Counter()
    with Timer() as t:
        for s in range(25):
            cls = "groupoidal" if s % 2 == 0 else "catwg"
            x = generate(GenSpec(s, cls, 2)).truncate_to(2)
            tr = resolve_wg_F(x)
            cert = tr.certify()
            assert cert.ok and verify_certificate(tr.comparison, cert)
            a, b = bool(is_groupoidal(tr.output)), bool(is_groupoidal(x))
            mixed[a] += 1
            agree += a == b
    ok = agree == 25
    return outcome(9, ok, "exact", f"{agree}/25 pairs agree (groupoidal {mixed[True]}, "
                   f"not {mixed[False]})", t.seconds, 60), ok


# ---------------------------------------------------------------------------
# 10. determinism

ARTIFACT_SCRIPT = r"""
import hashlib, json, random
from wgcat.constructions import resolve_wg_F, to_fcat_G
from wgcat.corpus import GenSpec, generate, random_fincat
from wgcat.discretize import disc_n, zigzag_witness
from wgcat.models import clear_caches
from wgcat.msimp import nerve
from wgcat.pseudo import q_n

h = hashlib.sha256()
encoder = json.JSONEncoder(sort_keys=True, separators=(",", ":"))

def feed(doc):
    # streamed: strictified tables have millions of composites
    for chunk in encoder.iterencode(doc):
        h.update(chunk.encode())

for s in range(5):
    feed(nerve(random_fincat(random.Random(f"acc1:{s}"), 5, 12), 3).to_json())
    x = generate(GenSpec(s, "catwg", 2))
    feed(x.to_json())
    f = resolve_wg_F(x)
    f.certify()
    feed(f.to_json())
    g = to_fcat_G(x)
    g.certify()
    feed(g.to_json())
    feed(disc_n(x).to_json())
    feed(q_n(generate(GenSpec(s, "tawg", 2))).output.to_json())
    feed(zigzag_witness(x).to_json())
    clear_caches()
for s in range(2):
    feed(generate(GenSpec(s, "catwg", 3)).to_json())
print(h.hexdigest())
"""


def criterion_10():
    with Timer() as t:
        digests = []
        for seed in ("0", "1", "4242"):
            env = dict(os.environ, PYTHONHASHSEED=seed)
            out = subprocess.run([sys.executable, "-c", ARTIFACT_SCRIPT], env=env,
                                 capture_output=True, text=True, check=True)
            digests.append(out.stdout.strip())
    ok = len(set(digests)) == 1 and len(digests[0]) == 64
    return outcome(10, ok, "byte-identical", f"{len(digests)} runs under distinct hash seeds, "
                   f"digest {digests[0][:12]}", t.seconds, 600), ok


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_criterion(crit, acceptance_log):
    line, ok = crit()
    acceptance_log(line)
    assert "[PASS]" in line, line


if __name__ == "__main__":
    for crit in CRITERIA:
        print(crit()[0], flush=True)
