import pytest

from wgcat.corpus import GenSpec, generate, squares_double_category, suspension2
from wgcat.fincat import FinCat, FinFunctor
from wgcat.msimp import MultiSimp, SimpMap, chains, nerve
from wgcat.models import (HDWitness, discretization, hom_object, is_catwg, is_groupoidal,
                          is_hd, is_lta, is_n_equivalence, is_tam, is_tawg, iterated_p,
                          truncate_p, truncate_q, verify_certificate)

POINT = FinCat.discrete(["*"])


def to_terminal(x):
    t = MultiSimp.constant(x.arity, x.L, POINT)
    return SimpMap(x, t, {i: FinFunctor(c, POINT, {o: "*" for o in c.objects},
                                        {m: "*" for m in c.mor}) for i, c in x.cells.items()})


def boundary_of_triangle():
    """Nerve of the poset 0<1<2 without its nondegenerate 2-simplex."""
    p = FinCat(["0", "1", "2"],
               {"00": ("0", "0"), "11": ("1", "1"), "22": ("2", "2"),
                "01": ("0", "1"), "12": ("1", "2"), "02": ("0", "2")},
               {"0": "00", "1": "11", "2": "22"},
               {("01", "00"): "01", ("11", "01"): "01", ("12", "11"): "12",
                ("22", "12"): "12", ("02", "00"): "02", ("22", "02"): "02",
                ("12", "01"): "02", ("00", "00"): "00", ("11", "11"): "11",
                ("22", "22"): "22"})
    x = nerve(p, 2)
    full = next(ch for ch in chains(p, 2) if ch == ("01", "12"))
    name = next(o for o in x.cells[(2,)].objects if "01" in str(o) and "12" in str(o)
                and "00" not in str(o) and "11" not in str(o) and "22" not in str(o))
    assert full
    keep = [o for o in x.cells[(2,)].objects if o != name]
    cells = dict(x.cells)
    cells[(2,)] = FinCat.discrete(keep)
    gens = {}
    for (i, d, th), fn in x.gens.items():
        src, tgt = cells[i], cells[(len(th) - 1,)]
        o = {a: fn.o[a] for a in src.objects}
        gens[(i, d, th)] = FinFunctor(src, tgt, o, o)
    return MultiSimp(1, 2, cells, gens)


def test_truncate_p_examples(ef):
    assert len(truncate_p(MultiSimp.point(ef)).base().objects) == 2
    d = FinCat.discrete(["a", "b"])
    assert truncate_p(MultiSimp.point(d)).base().objects == d.objects
    px = truncate_p(MultiSimp.constant(1, 2, ef))
    assert px.arity == 0
    assert px.base().is_discrete() and len(px.base().objects) == 2


def test_truncate_q_counts_components(arrow):
    assert len(truncate_q(MultiSimp.point(arrow)).base().objects) == 1


def test_is_hd_examples(ef):
    w = is_hd(MultiSimp.constant(1, 2, FinCat.discrete(["a", "b"])))
    assert isinstance(w, HDWitness) and w.discrete == ("a", "b")
    assert isinstance(is_hd(squares_double_category(ef, 2)), HDWitness)
    r = is_hd(MultiSimp.point(FinCat.cyclic_group(2)))
    assert not r and r.clause == "hd.base"


def test_discretization_matches_iterated_p(ef):
    x = squares_double_category(ef, 2)
    assert tuple(discretization(x).names) == tuple(iterated_p(x))


def test_hom_objects_of_discrete():
    x = MultiSimp.constant(1, 2, FinCat.discrete(["a", "b"]))
    assert len(hom_object(x, "a", "a").base().objects) == 1
    assert len(hom_object(x, "a", "b").base().objects) == 0


def test_hom_object_of_arrow(arrow):
    x = nerve(arrow, 2)
    assert len(hom_object(x, "0", "1").base().objects) == 1


def test_hom_objects_partition_level_one(ef):
    x = generate(GenSpec(3, "catwg", 2))
    names = discretization(x.level(0)).names
    total = sum(len(hom_object(x, a, b).base().objects) for a in names for b in names)
    assert total == len(x.cells[(1,)].objects)


def test_catwg_examples():
    assert is_catwg(suspension2(FinCat.cyclic_group(2), 2))
    for seed in range(3):
        assert is_catwg(generate(GenSpec(seed, "catwg", 2)))
    r = is_catwg(MultiSimp.constant(1, 2, FinCat.cyclic_group(2)))
    assert not r and r.clause == "wg.a"


def test_tawg_examples():
    x = generate(GenSpec(1, "catwg", 2))
    assert is_tawg(x)
    r = is_tawg(boundary_of_triangle())
    assert not r and r.clause.startswith("tawg")


def test_tam_and_lta_on_nerves(arrow):
    assert is_tam(nerve(arrow, 2))
    assert is_lta(nerve(arrow, 2))
    x = next(generate(GenSpec(s, "catwg", 2)) for s in range(20)
             if not generate(GenSpec(s, "catwg", 2)).cells[(0,)].is_discrete())
    r = is_tam(x)
    assert not r and r.clause == "tam.discrete"


def test_n_equivalence_identity(ef):
    x = generate(GenSpec(2, "catwg", 2))
    cert = is_n_equivalence(SimpMap.identity(x))
    assert cert.ok and verify_certificate(SimpMap.identity(x), cert)


def test_gamma_is_an_n_equivalence(ef):
    x = MultiSimp.constant(1, 2, ef)
    disc = discretization(x)
    target = MultiSimp.constant(1, 2, disc.discrete_cat())
    gamma = SimpMap(x, target, {i: disc.gamma_functor(x, i) for i in x.cells})
    assert gamma.check()
    cert = is_n_equivalence(gamma)
    assert cert.ok and verify_certificate(gamma, cert)


def test_collapsing_two_cells_fails_on_a_fiber():
    x = suspension2(FinCat.cyclic_group(2), 2)
    f = to_terminal(x)
    assert f.check()
    cert = is_n_equivalence(f)
    assert not cert.ok
    assert cert.failure.startswith("fiber (")
    assert verify_certificate(f, cert)


def test_groupoidal_verdicts(arrow, iso):
    assert is_groupoidal(nerve(iso, 2))
    assert not is_groupoidal(nerve(arrow, 2))
