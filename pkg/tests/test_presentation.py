import pytest
from hypothesis import given, strategies as st

from conftest import presentations, tree
from endscope.errors import IllegalNodeError, ParseError
from endscope.oracle import embedding_depth, baire_depth
from endscope.presentation import (
    ROOT,
    Cardinal,
    Multiplicity,
    UNode,
    children,
    format_tree,
    is_pruned,
    live_nodes,
    parse_tree,
    prune,
    resolve,
    truncate,
    truncate_shared,
)


def test_parse_bin():
    P = parse_tree("tree bin\nroot v\nedge v v 2\n")
    assert P.name == "bin" and P.root == "v"
    assert P.nodes == ("v",)
    assert P.edges[0].mult == Multiplicity.fin(2)


def test_parse_multiplicities_and_comments():
    P = parse_tree("# header\ntree t\nroot r\nedge r a *\nedge a a w2\nedge r r 3\n")
    assert [e.mult for e in P.edges] == [Multiplicity.aleph(0), Multiplicity.aleph(2), Multiplicity.fin(3)]


@pytest.mark.parametrize(
    "text, line",
    [
        ("tree t\nroot r\nedge r x 1\n", 3),  # unknown destination
        ("tree t\nroot r\nedge r r 0\n", 3),
        ("tree t\nedge r r 1\n", None),  # no root
        ("tree t\nroot r\nfoo r\n", 3),
        ("tree t\nroot r\nedge r r\n", 3),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        parse_tree(text)
    if line is not None:
        assert exc.value.line == line


def test_node_declarations_allow_dead_ends():
    P = parse_tree("tree t\nroot r\nnode d\nedge r d 1\nedge r r 1\n")
    assert live_nodes(P) == {"r"}


def test_format_round_trip():
    for name in ("bin", "baire", "star", "uncountable-star", "comb"):
        P = tree(name)
        assert parse_tree(format_tree(P)) == P


def test_multiplicity_order():
    assert Multiplicity.fin(5) < Multiplicity.aleph(0) < Multiplicity.aleph(1)
    assert str(Multiplicity.parse("*")) == "*"
    assert Cardinal.parse("aleph:1") == Cardinal.aleph(1)
    assert Cardinal.aleph(0).pretty() == "ℵ0"


def test_prune_example():
    P = parse_tree("tree t\nroot r\nnode d\nedge r c *\nedge c c 1\nedge r d 1\n")
    Q = prune(P)
    assert set(Q.nodes) == {"r", "c"}
    assert is_pruned(Q) and not is_pruned(P)


def test_prune_dead_root_is_empty():
    P = parse_tree("tree t\nroot r\nnode d\nedge r d 1\n")
    assert prune(P).is_empty
    assert live_nodes(P) == frozenset()


@given(presentations)
def test_prune_idempotent(P):
    Q = prune(P)
    assert prune(Q) == Q
    assert is_pruned(Q)


@given(presentations)
def test_prune_preserves_live_structure(P):
    Q = prune(P)
    assert set(Q.nodes) == set(live_nodes(P))


def test_unode_serialization():
    t = UNode.parse("e0.1/e0.0")
    assert str(t) == "e0.1/e0.0" and t.depth == 2
    assert str(ROOT) == "@"
    assert str(UNode.parse("e3.2+")) == "e3.2+"
    assert ROOT.lt(t) and t.parent.le(t) and not t.lt(t)
    with pytest.raises(ParseError):
        UNode.parse("e0.x")


def test_resolve_and_legality():
    P = tree("bin")
    assert resolve(P, UNode.parse("e0.1/e0.0")) == "v"
    with pytest.raises(IllegalNodeError):
        resolve(P, UNode.parse("e0.2"))
    with pytest.raises(IllegalNodeError):
        resolve(P, UNode.parse("e1.0"))
    assert resolve(tree("baire"), UNode.parse("e0.1000000")) == "v"


def test_children_truncation_flag():
    kids, truncated = children(tree("baire"), ROOT, 3)
    assert [str(k) for k in kids] == ["e0.0", "e0.1", "e0.2"] and truncated
    kids, truncated = children(tree("bin"), ROOT, 3)
    assert len(kids) == 2 and not truncated


def test_truncate_sizes():
    assert len(truncate(tree("baire"), 2, 3)) == 13
    assert len(truncate(tree("bin"), 3, 2)) == 15
    assert all(n.live for n in truncate(tree("baire"), 2, 3))


@given(presentations, st.integers(0, 4), st.integers(1, 3))
def test_truncate_prefix_property(P, d, w):
    if P.is_empty:
        return
    small = {n.unode for n in truncate(P, d, w)}
    big = {n.unode for n in truncate(P, d + 1, w) if n.depth <= d}
    assert small == big


@given(presentations, st.integers(1, 5), st.integers(1, 3))
def test_shared_truncation_matches_explicit(P, d, w):
    F = truncate(P, d, w)
    S = truncate_shared(P, d, w)
    assert embedding_depth(F) == embedding_depth(S)
    assert baire_depth(F, w) == baire_depth(S, w)


@given(presentations, st.integers(1, 4))
def test_equal_tags_give_isomorphic_subtrees(P, d):
    F = truncate(P, d + 1, 2)
    depth1 = [n for n in F if n.depth == 1]

    def shape(i, left):
        if left == 0:
            return ()
        return tuple(shape(c, left - 1) for c, _ in F.kids(i))

    by_tag = {}
    for n in depth1:
        by_tag.setdefault(n.tag, set()).add(shape(n.id, d))
    assert all(len(s) == 1 for s in by_tag.values())
