import pytest

from wgcat.corpus import squares_double_category
from wgcat.fincat import FinCat, check_category
from wgcat.msimp import MultiSimp, SegalFailure, nerve
from wgcat.nfold import (NFold, corner_J, discrete_inclusion, discrete_nfold, from_levels,
                         is_discrete, multinerve, nerve_dir, nfold_from_json, validate_nfold,
                         xi_swap, xi_unswap)
from wgcat.report import PreconditionError


def test_validate_one_fold_matches_category_check(ef, arrow):
    for c in (ef, arrow, FinCat.cyclic_group(2)):
        assert bool(validate_nfold(NFold.from_category(c))) == bool(check_category(c))


def test_squares_double_category_validates(ef):
    x = squares_double_category(ef, 2)
    assert validate_nfold(x)


def test_broken_face_is_reported(ef):
    x = squares_double_category(ef, 2)
    gens = dict(x.gens)
    # make the source face of level 1 equal to its target face
    gens[((1,), 0, (1,))] = gens[((1,), 0, (0,))]
    rep = validate_nfold(MultiSimp(1, 2, dict(x.cells), gens))
    assert not rep
    assert rep.clause and rep.path


def test_xi_swap_last_direction_is_identity(ef):
    x = NFold(squares_double_category(ef, 2))
    assert xi_swap(x, 2) is x


def test_xi_swap_transposes_multinerve(arrow):
    x = NFold(MultiSimp.constant(1, 2, arrow))
    y = xi_swap(x, 1)
    mx, my = multinerve(x), multinerve(y)
    for (p, q), c in mx.cells.items():
        assert len(c.objects) == len(my.cells[(q, p)].objects)


def test_xi_swap_round_trip(ef):
    x = NFold(nerve(ef, 2))
    back = xi_unswap(xi_swap(x, 1), 1)
    assert multinerve(back).to_json() == multinerve(x).to_json()


def test_xi_swap_range():
    with pytest.raises(PreconditionError):
        xi_swap(discrete_nfold(["a"], 2), 3)


def test_nerve_dir_one_fold_is_nerve(arrow):
    t = nerve_dir(NFold.from_category(arrow), 1, 2)
    assert [len(t.cells[(k,)].objects) for k in range(3)] == [2, 3, 4]


def test_nerve_dir_of_discrete_is_constant():
    x = discrete_nfold(["a", "b"], 2, 2)
    t = nerve_dir(x, 2)
    assert all(len(c.objects) == 2 for c in t.cells.values())


def test_nerve_dir_level_two_is_pullback(ef):
    x = NFold(squares_double_category(ef, 2))
    t = nerve_dir(x, 1)
    assert t.cells[(2,)].size() == x.composable_pairs().base().size()


def test_corner_and_from_levels_round_trip(ef):
    t = squares_double_category(ef, 2)
    x = from_levels(t)
    assert corner_J(x) is t
    assert from_levels(corner_J(x)) == x


def test_from_levels_constant_table_is_discrete():
    x = from_levels(MultiSimp.constant(1, 2, FinCat.discrete(["s", "t"])))
    assert is_discrete(x)


def test_from_levels_names_failing_index(arrow):
    t = nerve(arrow, 2)
    cells = dict(t.cells)
    cells[(2,)] = FinCat.discrete(list(cells[(2,)].objects) + ["extra"])
    gens = {}
    from wgcat.fincat import FinFunctor
    first = t.cells[(2,)].objects[0]
    for (i, d, th), fn in t.gens.items():
        o = dict(fn.o)
        if i == (2,):
            o["extra"] = fn.o[first]
        gens[(i, d, th)] = FinFunctor(cells[i], cells[(len(th) - 1,)], o, o)
    with pytest.raises(SegalFailure) as err:
        from_levels(MultiSimp(1, 2, cells, gens))
    assert err.value.k == 2


def test_discrete_inclusion():
    pt = NFold.from_category(FinCat.discrete(["*"]))
    y = discrete_inclusion(pt, 2)
    assert y.n == 2 and is_discrete(y)


def test_discrete_inclusion_of_ef_is_constant_in_new_direction(ef):
    y = discrete_inclusion(NFold.from_category(ef), 2)
    assert y.n == 2
    assert not is_discrete(y)
    counts = {k: len(y.table.cells[(k,)].objects) for k in range(3)}
    assert counts == {0: 3, 1: 5, 2: 9}
    mx = multinerve(y)
    for (p, q), c in mx.cells.items():
        assert len(c.objects) == len(mx.cells[(p, 0)].objects)


def test_is_discrete_examples(arrow):
    assert is_discrete(discrete_nfold(["a", "b"], 2, 2))
    assert not is_discrete(NFold.from_category(arrow))


def test_recursive_json_round_trip(ef):
    x = NFold(squares_double_category(ef, 2))
    doc = x.to_json()
    assert doc["n"] == 2 and set(doc) >= {"obj", "arr", "d0", "d1", "s", "m"}
    assert nfold_from_json(doc).to_json() == doc
