from wgcat.fincat import (FinCat, FinFunctor, check_category, check_functor, d_discrete,
                          decalage, equivalence_analysis, is_equiv_relation, is_isofibration,
                          is_isomorphism, p_iso_classes, pseudo_inverse, pullback_cat,
                          q_components, quotient_functor)


def chain3():
    """Free category on a→b→c→d, with one composite corrupted."""
    objs = ["a", "b", "c", "d"]
    mors = {f"1{x}": (x, x) for x in objs}
    mors.update({"h": ("a", "b"), "g": ("b", "c"), "f": ("c", "d"),
                 "gh": ("a", "c"), "fg": ("b", "d"), "fgh": ("a", "d")})
    ident = {x: f"1{x}" for x in objs}
    comp = {}
    for m, (s, t) in mors.items():
        comp[(m, ident[s])] = m
        comp[(ident[t], m)] = m
    comp.update({("g", "h"): "gh", ("f", "g"): "fg", ("f", "gh"): "fgh", ("fg", "h"): "fgh"})
    return objs, mors, ident, comp


def test_check_category_accepts_basic_shapes(arrow):
    assert check_category(FinCat.discrete(["a", "b"]))
    assert check_category(arrow)
    assert check_category(FinCat.cyclic_group(3))


def test_check_category_reports_associativity():
    objs, mors, ident, comp = chain3()
    assert check_category(FinCat(objs, mors, ident, comp))
    # redirect one bracketing to a parallel arrow so the two sides disagree
    mors["fgh2"] = ("a", "d")
    comp[("fgh2", "1a")] = "fgh2"
    comp[("1d", "fgh2")] = "fgh2"
    comp[("fg", "h")] = "fgh2"
    rep = check_category(FinCat(objs, mors, ident, comp))
    assert not rep
    assert rep.clause == "associativity"
    assert set(rep.witness) == {"h", "g", "f"}


def test_check_category_json_round_trip(ef):
    doc = ef.to_json()
    assert FinCat.from_json(doc) == ef
    assert check_category(doc)


def test_pullback_of_identities_is_diagonal(ef):
    ident = FinFunctor.identity(ef)
    p, pr0, pr1 = pullback_cat(ident, ident)
    assert p.size() == ef.size()
    assert is_isomorphism(pr0) and is_isomorphism(pr1)


def test_pullback_over_discrete_is_coproduct_of_fiber_products(arrow, iso):
    e = FinCat.discrete(["x", "y"])
    c = FinCat.discrete(["p", "q", "r"])
    f = FinFunctor(c, e, {"p": "x", "q": "x", "r": "y"}, {"p": "x", "q": "x", "r": "y"})
    d = FinCat.discrete(["s", "t"])
    g = FinFunctor(d, e, {"s": "x", "t": "y"}, {"s": "x", "t": "y"})
    p, _, _ = pullback_cat(f, g)
    # fiber over x: 2 × 1, fiber over y: 1 × 1
    assert len(p.objects) == 3


def test_pullback_of_arrow_against_its_target(arrow):
    pt = FinCat.discrete(["*"])
    g = FinFunctor(pt, arrow, {"*": "1"}, {"*": "id1"})
    p, _, _ = pullback_cat(FinFunctor.identity(arrow), g)
    assert p.size() == (1, 1)


def test_iso_classes(ef, iso):
    assert p_iso_classes(FinCat.discrete(["a", "b"]))[0] == ("a", "b")
    assert len(p_iso_classes(iso)[0]) == 1
    assert len(p_iso_classes(ef)[0]) == 2


def test_components(arrow):
    assert len(q_components(arrow)[0]) == 1
    assert len(q_components(FinCat.discrete(["a", "b"]))[0]) == 2
    zig = FinCat(["a", "b", "c"], {"1a": ("a", "a"), "1b": ("b", "b"), "1c": ("c", "c"),
                                   "u": ("a", "b"), "v": ("c", "b")},
                 {"a": "1a", "b": "1b", "c": "1c"},
                 {("1a", "1a"): "1a", ("1b", "1b"): "1b", ("1c", "1c"): "1c",
                  ("u", "1a"): "u", ("1b", "u"): "u", ("v", "1c"): "v", ("1b", "v"): "v"})
    assert check_category(zig)
    assert len(q_components(zig)[0]) == 1


def test_discrete_categories():
    assert d_discrete([]).size() == (0, 0)
    assert d_discrete(["x"]).size() == (1, 1)
    assert d_discrete(["x", "y", "z"]).size() == (3, 3)


def test_decalage_of_equivalence_relation(ef):
    dec, d1 = decalage(ef)
    assert set(dec.objects) == {("1", "1"), ("1", "2"), ("2", "1"), ("2", "2"), ("3", "3")}
    assert check_functor(d1)
    assert is_equiv_relation(dec)
    assert is_isofibration(d1)


def test_decalage_of_discrete():
    dec, _ = decalage(FinCat.discrete(["a"]))
    assert dec.objects == (("a", "a"),) and dec.is_discrete()
    dec, d1 = decalage(FinCat.discrete(["a", "b"]))
    assert set(dec.objects) == {("a", "a"), ("b", "b")}
    assert is_isomorphism(d1)


def test_isofibration_examples(iso, ef):
    e = FinCat.discrete(["x"])
    assert is_isofibration(FinFunctor(ef, e, {o: "x" for o in ef.objects},
                                      {m: "x" for m in ef.mor}))
    pt = FinCat.discrete(["*"])
    incl = FinFunctor(pt, iso, {"*": "0"}, {"*": "id0"})
    assert not is_isofibration(incl)


def test_equivalence_analysis(ef):
    v = equivalence_analysis(FinFunctor.identity(ef))
    assert (v.fully_faithful, v.essentially_surjective, v.equivalence) == (True, True, True)
    _, assign = p_iso_classes(ef)
    gamma = quotient_functor(ef, assign)
    assert equivalence_analysis(gamma).equivalence
    two = FinCat.discrete(["a", "b"])
    const = FinFunctor(two, FinCat.discrete(["*"]), {"a": "*", "b": "*"}, {"a": "*", "b": "*"})
    v = equivalence_analysis(const)
    assert (v.fully_faithful, v.essentially_surjective, v.equivalence) == (False, True, False)


def test_pseudo_inverse_identity(ef):
    adj = pseudo_inverse(FinFunctor.identity(ef))
    assert adj.backward.is_identity()
    assert all(ef.mor[u][0] == ef.mor[u][1] for u in adj.unit.components.values())


def test_pseudo_inverse_of_class_map(ef):
    _, assign = p_iso_classes(ef)
    gamma = quotient_functor(ef, assign)
    adj = pseudo_inverse(gamma)
    # backward picks the least element of each class
    assert sorted(adj.backward.o.values()) == ["1", "3"]
    assert gamma.after(adj.backward).is_identity()
    assert adj.check()


def test_pseudo_inverse_of_walking_iso(iso):
    pt = FinCat.discrete(["*"])
    f = FinFunctor(iso, pt, {"0": "*", "1": "*"}, {m: "*" for m in iso.mor})
    adj = pseudo_inverse(f)
    assert adj.backward.o == {"*": "0"}
    assert adj.check()


def test_equiv_relation_predicate(ef, arrow):
    assert is_equiv_relation(ef)
    assert not is_equiv_relation(arrow)
    assert not is_equiv_relation(FinCat.cyclic_group(2))


def test_iso_classes_of_pullback_can_exceed_set_pullback():
    # base Z/2, décalage projection against a constant functor from a groupoid
    z2 = FinCat.cyclic_group(2)
    dec, d1 = decalage(z2)
    assert is_isofibration(d1)
    star = z2.objects[0]
    iso = FinCat.walking_iso()
    g = FinFunctor(iso, z2, {o: star for o in iso.objects},
                   {m: z2.ident[star] for m in iso.mor})
    p, _, _ = pullback_cat(d1, g)
    assert len(p_iso_classes(p)[0]) == 2
    # each of dec, iso and z2 has a single iso class, so the set pullback is a point
    assert [len(p_iso_classes(c)[0]) for c in (dec, iso, z2)] == [1, 1, 1]
