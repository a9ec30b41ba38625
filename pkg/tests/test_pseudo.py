import pytest

from wgcat.corpus import GenSpec, generate, suspension2
from wgcat.discretize import find_table_isomorphism
from wgcat.fincat import FinCat, equivalence_analysis
from wgcat.models import is_catwg, verify_certificate
from wgcat.msimp import MultiSimp, nerve
from wgcat.pseudo import (PsFunctor, check_pseudo, compose_moves, generator_moves,
                          identity_move, is_segalic, move_target, p_step, q_n, strictify, tr_n)
from wgcat.report import GuardError


def nondiscrete_catwg(limit=20):
    for s in range(limit):
        x = generate(GenSpec(s, "tawg", 2))
        if not x.cells[(0,)].is_discrete():
            return x.truncate_to(2)
    raise AssertionError("no corpus instance with non-discrete level 0")


def test_moves_compose():
    idx = (2,)
    ident = identity_move(idx)
    assert move_target(ident) == idx
    for mv in generator_moves(idx, 2):
        assert compose_moves(ident, mv) == mv
        assert compose_moves(mv, identity_move(move_target(mv))) == mv


def test_strict_table_is_a_pseudo_functor(arrow):
    h = PsFunctor.from_table(nerve(arrow, 2))
    assert check_pseudo(h)
    assert is_segalic(h)


def test_nondiscrete_level_zero_is_not_segalic():
    h = PsFunctor.from_table(nondiscrete_catwg())
    assert not is_segalic(h)


def test_transport_of_strict_input_is_strict(arrow):
    x = nerve(arrow, 2)
    h, t = tr_n(x)
    assert check_pseudo(h) and is_segalic(h)
    assert find_table_isomorphism(h.generator_table(), x).verdict == "isomorphic"


def test_transport_of_corpus_instance():
    x = nondiscrete_catwg()
    h, t = tr_n(p_step(x))
    assert check_pseudo(h)
    assert is_segalic(h)
    assert t.check()
    for comp in t.components.values():
        assert equivalence_analysis(comp).equivalence


def test_transport_guards_dimension():
    with pytest.raises(GuardError):
        tr_n(generate(GenSpec(0, "catwg", 3)))


def test_strictify_strict_input(arrow):
    x = nerve(arrow, 2)
    st = strictify(PsFunctor.from_table(x))
    assert st.certify()
    assert is_catwg(st.output)


def test_strictify_transport_is_weakly_globular():
    h, _ = tr_n(p_step(nondiscrete_catwg()))
    st = strictify(h)
    assert is_catwg(st.output)
    for idx, g in st.comparisons.items():
        assert equivalence_analysis(g).equivalence, idx


def test_q_on_strict_two_category():
    x = suspension2(FinCat.cyclic_group(2), 2)
    rig = q_n(x)
    assert rig.certify().ok
    assert find_table_isomorphism(rig.output, x).verdict == "isomorphic"


def test_q_on_discrete_input():
    x = MultiSimp.constant(1, 2, FinCat.discrete(["a", "b"]))
    rig = q_n(x)
    assert rig.output == x and rig.comparison.is_identity()


def test_q_on_corpus_instance():
    x = nondiscrete_catwg()
    rig = q_n(x)
    assert is_catwg(rig.output)
    assert rig.comparison.check()
    cert = rig.certify()
    assert cert.ok and verify_certificate(rig.comparison, cert)


def test_psfunctor_json_round_trip():
    h, _ = tr_n(p_step(nondiscrete_catwg()))
    doc = h.to_json()
    back = PsFunctor.from_json(doc)
    assert check_pseudo(back)
    assert back.to_json() == doc
