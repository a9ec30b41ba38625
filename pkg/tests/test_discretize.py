import pytest

from wgcat.constructions import as_ftam, to_fcat_G
from wgcat.corpus import GenSpec, generate, suspension2
from wgcat.discretize import (d_n, d_n_with_inclusion, disc_n, find_table_isomorphism, r0,
                              verify_zigzag, zigzag_witness)
from wgcat.fincat import FinCat
from wgcat.models import FTam, default_sections, is_tam, is_tawg
from wgcat.msimp import MultiSimp, SimpMap, check_simplicial, nerve
from wgcat.report import GuardError


def nondiscrete_catwg(limit=20):
    for s in range(limit):
        x = generate(GenSpec(s, "catwg", 2))
        if not x.cells[(0,)].is_discrete():
            return x
    raise AssertionError("no corpus instance with non-discrete level 0")


def test_r0_leaves_discrete_level_zero_alone(arrow):
    x = nerve(arrow, 2)
    t = FTam(x, default_sections(x))
    assert r0(t).table == x


def test_r0_on_resolution_output():
    g = to_fcat_G(nondiscrete_catwg())
    out = r0(as_ftam(g))
    assert out.table.cells[(0,)].is_discrete()
    assert is_tawg(out.table)
    assert check_simplicial(out.table)


def test_d_n_on_discrete_input():
    x = MultiSimp.constant(1, 2, FinCat.discrete(["a", "b"]))
    assert d_n(FTam(x, default_sections(x))) == x


def test_d_n_lands_in_tamsamani_model():
    g = to_fcat_G(nondiscrete_catwg())
    assert is_tam(d_n(as_ftam(g)))


def test_d_n_keeps_nonzero_cells_up_to_representatives():
    g = to_fcat_G(nondiscrete_catwg())
    out, incl = d_n_with_inclusion(as_ftam(g))
    assert incl.check()
    for idx in out.cells:
        if 0 not in idx:
            src = g.output.cells[idx]
            sub = out.cells[idx]
            assert set(sub.objects) <= set(src.objects)
            # full subcategory: every arrow between kept objects survives
            kept = set(sub.objects)
            assert {f for f, (a, b) in src.mor.items() if a in kept and b in kept} == set(sub.mor)


def test_d_n_equals_input_on_nonzero_cells_when_level_zero_is_discrete(arrow):
    x = suspension2(FinCat.cyclic_group(2), 2)
    out = d_n(FTam(x, default_sections(x)))
    for idx in out.cells:
        if 0 not in idx:
            assert out.cells[idx] == x.cells[idx]


def test_disc_n_examples(arrow):
    x = MultiSimp.constant(1, 2, FinCat.discrete(["a"]))
    assert disc_n(x) == x
    s = nerve(arrow, 2)
    assert find_table_isomorphism(disc_n(s), s).verdict == "isomorphic"
    assert is_tam(disc_n(nondiscrete_catwg()))


def test_zigzag_on_discrete_input():
    x = MultiSimp.constant(1, 2, FinCat.discrete(["a", "b"]))
    z = zigzag_witness(x)
    assert z.ok and verify_zigzag(z)
    assert all(e.map.is_identity() for e in z.edges)


def test_zigzag_on_corpus_instance():
    z = zigzag_witness(nondiscrete_catwg())
    assert len(z.edges) == 2
    assert [e.direction for e in z.edges] == ["backward", "forward"]
    assert z.ok and verify_zigzag(z)


def test_zigzag_three_dimensional_is_guarded():
    x = generate(GenSpec(0, "catwg", 3))
    with pytest.raises(GuardError):
        zigzag_witness(x)


def test_isomorphism_search_finds_relabelings(ef):
    x = MultiSimp.constant(1, 2, ef)
    assert find_table_isomorphism(x, x).verdict == "isomorphic"
    y = MultiSimp.constant(1, 2, FinCat.equivalence_relation({"1": "A", "2": "B", "3": "B"}))
    v = find_table_isomorphism(x, y)
    assert v.verdict == "isomorphic" and v.iso.check()
    z = MultiSimp.constant(1, 2, FinCat.equivalence_relation({"1": "A", "2": "B", "3": "C"}))
    assert find_table_isomorphism(x, z).verdict == "not-isomorphic"
