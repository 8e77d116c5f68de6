import random

import pytest
from hypothesis import given, strategies as st

from conftest import mutate_witness, presentations, tree
from endscope.derivatives import Operator, derive
from endscope.errors import PreconditionError
from endscope.presentation import UNode, resolve
from endscope.witnesses import (
    BaireWitness,
    BinaryWitness,
    baire_witness,
    binary_witness,
    is_prefix,
    parse_word,
    verify_witness,
    witness_from_dict,
    word_str,
    words,
)


def bw(name, d):
    P = tree(name)
    return P, binary_witness(P, derive(P, Operator.SCATTER), d)


def kw(name, d, w=3):
    P = tree(name)
    return P, baire_witness(P, derive(P, Operator.COMPACT), d, w)


def test_words():
    assert list(words(2, 1)) == [(), (0,), (1,)]
    assert len(list(words(3, 2))) == 13
    assert word_str((1, 0)) == "10" and parse_word("10") == (1, 0)
    assert word_str((1, 12), ".") == "1.12" and parse_word("1.12", ".") == (1, 12)
    assert is_prefix((1,), (1, 0)) and not is_prefix((0,), (1, 0))


def test_bin_depth2():
    P, w = bw("bin", 2)
    got = {word_str(s): str(t) for s, t in w.map.items()}
    assert got == {
        "": "@", "0": "e0.0", "1": "e0.1",
        "00": "e0.0/e0.0", "01": "e0.0/e0.1", "10": "e0.1/e0.0", "11": "e0.1/e0.1",
    }
    assert verify_witness(P, w)


def test_baire_depth1():
    P, w = kw("baire", 1)
    assert {word_str(s, "."): str(t) for s, t in w.phi.items()} == {"": "@", "0": "e0.0", "1": "e0.1", "2": "e0.2"}
    assert {word_str(s, "."): str(t) for s, t in w.t_of.items()} == {"": "@"}
    assert verify_witness(P, w)


def test_baire_depth2():
    P, w = kw("baire", 2)
    assert str(w.phi[(2, 1)]) == "e0.2/e0.1"
    assert len(w.phi) == 13 and verify_witness(P, w)


def test_none_when_fixpoint_empty():
    assert bw("comb", 3)[1] is None
    assert kw("bin", 3)[1] is None
    assert kw("star", 2)[1] is None


def test_wrong_trace_operator():
    P = tree("bin")
    with pytest.raises(PreconditionError):
        binary_witness(P, derive(P, Operator.COMPACT), 2)
    with pytest.raises(PreconditionError):
        baire_witness(P, derive(P, Operator.SCATTER), 2, 3)


def test_baire_witness_in_star_of_baire():
    # the pattern starts above a finite stem
    from endscope.presentation import parse_tree

    P = parse_tree("tree t\nroot r\nedge r r 1\nedge r a 1\nedge a a *\n")
    w = baire_witness(P, derive(P, Operator.COMPACT), 2, 2)
    assert str(w.t_of[()]) == "e1.0"
    assert verify_witness(P, w)


def test_verify_rejects_finite_edge_children():
    P = tree("bin")
    w = BaireWitness(1, 2, {(): UNode.parse("@"), (0,): UNode.parse("e0.0"), (1,): UNode.parse("e0.1")},
                     {(): UNode.parse("@")})
    check = verify_witness(P, w)
    assert not check and "infinite edge" in check.reason


def test_verify_rejects_dead_nodes():
    from endscope.presentation import parse_tree

    P = parse_tree("tree t\nroot r\nnode d\nedge r r 2\nedge r d 1\n")
    w = BinaryWitness(1, {(): UNode.parse("@"), (0,): UNode.parse("e0.0"), (1,): UNode.parse("e1.0")})
    assert not verify_witness(P, w)


@given(presentations, st.integers(0, 4))
def test_emitted_witnesses_verify(P, d):
    b = binary_witness(P, derive(P, Operator.SCATTER), d)
    k = baire_witness(P, derive(P, Operator.COMPACT), d, 3)
    assert (b is None) == derive(P, Operator.SCATTER).fixpoint_empty
    assert (k is None) == derive(P, Operator.COMPACT).fixpoint_empty
    for w in (b, k):
        if w is not None:
            assert verify_witness(P, w), verify_witness(P, w).reason


@given(presentations, st.integers(1, 3))
def test_witness_images_carry_fixpoint_tags(P, d):
    tr = derive(P, Operator.SCATTER)
    b = binary_witness(P, tr, d)
    if b is not None:
        assert all(resolve(P, t) in tr.fixpoint for t in b.map.values())


@given(presentations, st.integers(1, 3))
def test_witness_json_round_trip(P, d):
    for w in (binary_witness(P, derive(P, Operator.SCATTER), d),
              baire_witness(P, derive(P, Operator.COMPACT), d, 3)):
        if w is not None:
            again = witness_from_dict(w.to_dict())
            assert again == w
            assert bool(verify_witness(P, again)) == bool(verify_witness(P, w))


@pytest.mark.parametrize("kind", range(4))
@pytest.mark.parametrize("which", ["bin", "baire"])
def test_mutations_fail(kind, which):
    rng = random.Random(kind)
    P, w = bw(which, 3)
    assert not verify_witness(P, mutate_witness(w, rng, kind))
    if which == "baire":
        P, w = kw(which, 3)
        assert not verify_witness(P, mutate_witness(w, rng, kind))
