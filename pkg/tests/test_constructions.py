from wgcat.constructions import as_ftam, resolve_hd_V, resolve_wg_F, shift, to_fcat_G
from wgcat.corpus import GenSpec, generate, squares_double_category, suspension2
from wgcat.discretize import find_table_isomorphism
from wgcat.fincat import FinCat, FinFunctor, is_isofibration
from wgcat.models import (HDWitness, is_catwg, is_ftawg, is_hd, truncate_map,
                          verify_certificate)
from wgcat.msimp import MultiSimp, SimpMap, nerve


def nondiscrete_catwg(limit=20):
    for s in range(limit):
        x = generate(GenSpec(s, "catwg", 2))
        if not x.cells[(0,)].is_discrete():
            return x
    raise AssertionError("corpus has no instance with non-discrete level 0")


def test_shift_along_identity_is_isomorphic(arrow):
    x = nerve(arrow, 2)
    out, comp = shift(x, SimpMap.identity(x.level(0)))
    assert comp.check()
    assert find_table_isomorphism(out, x).verdict == "isomorphic"


def test_shift_of_discrete_is_fiber_product():
    d = FinCat.discrete(["x", "y"])
    x = MultiSimp.constant(1, 2, d)
    y0 = FinCat.discrete(["p", "q", "r"])
    f0 = FinFunctor(y0, d, {"p": "x", "q": "x", "r": "y"}, {"p": "x", "q": "x", "r": "y"})
    out, comp = shift(x, SimpMap(MultiSimp.point(y0), x.level(0), {(): f0}))
    assert comp.check()
    # pairs (y_0, y_1) over the same point: 2*2 + 1
    assert len(out.cells[(1,)].objects) == 5
    assert len(out.cells[(2,)].objects) == 2 ** 3 + 1


def test_shift_along_decalage_is_weakly_globular(iso):
    from wgcat.fincat import decalage
    x = nerve(iso, 2)
    dec, _ = decalage(iso)
    # each object of Dec lies over the source of its arrow; components of Dec
    # are the fibers of that map, so it is a functor to the discrete level 0
    src = {o: iso.src(o[2]) if len(o) == 3 else o[0] for o in dec.objects}
    f0 = FinFunctor(dec, x.cells[(0,)], src, {m: src[dec.src(m)] for m in dec.mor})
    out, comp = shift(x, SimpMap(MultiSimp.point(dec), x.level(0), {(): f0}))
    assert comp.check()
    assert is_catwg(out)


def test_V_on_discrete_is_identity():
    x = MultiSimp.point(FinCat.discrete(["a", "b"]))
    t = resolve_hd_V(x)
    assert t.output is x or t.output == x
    assert t.comparison.is_identity()


def test_V_on_ef_is_decalage(ef):
    t = resolve_hd_V(MultiSimp.point(ef))
    assert len(t.output.base().objects) == 5
    d1 = t.comparison.base()
    assert is_isofibration(d1)
    assert set(d1.o.values()) == set(ef.objects)


def test_V_on_squares_double_category(ef):
    t = resolve_hd_V(squares_double_category(ef, 2))
    assert isinstance(is_hd(t.output), HDWitness)
    for f in t.comparison.comps.values():
        assert is_isofibration(f)
        assert set(f.o.values()) == set(f.target.objects)
    pf = truncate_map(t.comparison)
    for f in pf.comps.values():
        assert set(f.o.values()) == set(f.target.objects)


def test_F_on_discrete_and_strict_inputs():
    x = MultiSimp.constant(1, 2, FinCat.discrete(["a"]))
    assert resolve_wg_F(x).output == x
    s = suspension2(FinCat.cyclic_group(2), 2)
    assert resolve_wg_F(s).output == s


def test_F_on_corpus_instance():
    x = nondiscrete_catwg()
    t = resolve_wg_F(x)
    assert is_catwg(t.output)
    cert = t.certify()
    assert cert.ok and verify_certificate(t.comparison, cert)
    assert t.to_json()["certificate"]["ok"] is True


def test_G_on_discrete_is_identity():
    x = MultiSimp.constant(1, 2, FinCat.discrete(["a", "b"]))
    assert to_fcat_G(x).output == x


def test_G_two_dimensional():
    t = to_fcat_G(nondiscrete_catwg())
    assert is_ftawg(as_ftam(t))
    assert t.certify().ok


def test_G_three_dimensional():
    x = generate(GenSpec(0, "catwg", 3))
    t = to_fcat_G(x)
    assert is_ftawg(as_ftam(t))
    cert = t.certify()
    assert cert.ok and verify_certificate(t.comparison, cert)
