import itertools
import random

import pytest
from hypothesis import given, strategies as st

from conftest import tree
from endscope.corpus import fuzz_corpus, random_cover, random_partition
from endscope.errors import IllegalNodeError, PreconditionError
from endscope.partitions import (
    antichain_normalize,
    cone_cover_check,
    contains,
    d_kernel,
    is_partition,
    overlaps,
    parse_cones,
    refine_partition,
)
from endscope.presentation import UNode, live_nodes, parse_tree, resolve


def U(text):
    return parse_cones(text)


def strs(family):
    return sorted(str(m) for m in family)


CORPUS = [P for P in fuzz_corpus(200, seed=7, max_nodes=5) if live_nodes(P)]


def test_cover_check_examples():
    assert cone_cover_check(tree("bin"), U("e0.0,e0.1"))
    check = cone_cover_check(tree("bin"), U("e0.0"))
    assert not check and str(check.counterexample) == "e0.1"
    assert cone_cover_check(tree("star"), U("@"))


def test_cover_check_with_tail():
    assert cone_cover_check(tree("star"), U("e0.0,e0.1,e0.2+"))
    assert not cone_cover_check(tree("star"), U("e0.0,e0.2+"))


def test_cover_check_rejects_illegal():
    with pytest.raises(IllegalNodeError):
        cone_cover_check(tree("bin"), U("e0.5"))


def test_pattern_predicates():
    assert contains(UNode.parse("e0.2+"), UNode.parse("e0.7/e1.0"))
    assert not contains(UNode.parse("e0.2"), UNode.parse("e0.2+"))
    assert overlaps(UNode.parse("e0.1+"), UNode.parse("e0.3+"))
    assert not overlaps(UNode.parse("e0.1"), UNode.parse("e0.2+"))


def test_normalize_examples():
    assert strs(antichain_normalize(tree("bin"), U("@,e0.0"))) == ["@"]
    assert strs(antichain_normalize(tree("bin"), U("e0.0,e0.1,e0.0/e0.1"))) == ["e0.0", "e0.1"]
    assert strs(antichain_normalize(tree("star"), U("e0.0,e0.1,@"))) == ["@"]


def test_normalize_rejects_non_cover():
    with pytest.raises(PreconditionError):
        antichain_normalize(tree("bin"), U("e0.0"))


def test_normalize_splits_overlapping_tails():
    fam = antichain_normalize(tree("star"), U("e0.0+,e0.1+"))
    assert is_partition(tree("star"), list(fam))


def test_refine_examples():
    r = refine_partition(tree("bin"), U("@"), U("@"))
    assert strs(r.family) == ["e0.0", "e0.1"]
    assert {str(k): str(v) for k, v in r.parent.items()} == {"e0.0": "@", "e0.1": "@"}
    r = refine_partition(tree("bin"), U("@"), U("e0.0,e0.1/e0.0,e0.1/e0.1"))
    assert strs(r.family) == ["e0.0", "e0.1/e0.0", "e0.1/e0.1"]
    assert set(map(str, r.parent.values())) == {"@"}


def test_refine_star_cover_not_covering():
    with pytest.raises(PreconditionError, match="e0.2"):
        refine_partition(tree("star"), U("@"), U("e0.0,e0.1"))


def test_refine_star_uses_tail():
    r = refine_partition(tree("star"), U("@"), U("@"))
    assert strs(r.family) == ["e0.0+"]


def test_refine_rejects_overlapping_part():
    with pytest.raises(PreconditionError):
        refine_partition(tree("bin"), U("@,e0.0"), U("@"))


def test_kernel_examples():
    rays = d_kernel(tree("bin"), U("e0.0,e0.1"))
    assert [str(r.prefix()) for r in rays] == ["e0.0/e0.0/e0.0", "e0.1/e0.0/e0.0"]
    rays = d_kernel(tree("star"), U("@"))
    assert len(rays) == 1 and str(rays[0].prefix(1)) == "e0.0/e1.0"
    rays = d_kernel(tree("comb"), U("@"))
    assert len(rays) == 1 and str(rays[0].stem) == "@" and [str(s) for s in rays[0].cycle] == ["e0.0"]


def test_kernel_skips_dead_cones():
    P = parse_tree("tree t\nroot r\nnode d\nedge r r 1\nedge r d 1\n")
    rays = d_kernel(P, U("e0.0,e1.0"))
    assert [str(r.cone) for r in rays] == ["e0.0"]


def _refinement_ok(P, part, cover, r):
    members = list(r.family)
    for a, b in itertools.combinations(members, 2):
        assert not overlaps(a, b)
    assert cone_cover_check(P, members)
    for s in members:
        parents = [t for t in part if contains(t, s)]
        assert len(parents) == 1 and r.parent[s] == parents[0]
        assert s.depth > parents[0].depth
        assert any(contains(c, s) for c in cover)


@given(st.integers(0, 10**6))
def test_refine_contract(seed):
    rng = random.Random(seed)
    P = rng.choice(CORPUS)
    part = random_partition(rng, P)
    cover = random_partition(rng, P)
    r = refine_partition(P, part, cover)
    _refinement_ok(P, part, cover, r)


@given(st.integers(0, 10**6))
def test_normalize_idempotent_and_shrinking(seed):
    rng = random.Random(seed)
    P = rng.choice(CORPUS)
    S = random_cover(rng, P)
    if not cone_cover_check(P, S):
        return
    once = antichain_normalize(P, S)
    twice = antichain_normalize(P, list(once))
    assert strs(once) == strs(twice)
    assert is_partition(P, list(once))
    if not any(overlaps(a, b) and not (contains(a, b) or contains(b, a)) for a, b in itertools.combinations(S, 2)):
        assert len(once) <= len(S)


@given(st.integers(0, 10**6))
def test_kernel_rays_inside_cones(seed):
    rng = random.Random(seed)
    P = rng.choice(CORPUS)
    S = random_cover(rng, P)
    if not cone_cover_check(P, S):
        with pytest.raises(PreconditionError):
            d_kernel(P, S)
        return
    rays = d_kernel(P, S)
    cones = [r.cone for r in rays]
    assert cone_cover_check(P, cones)
    live = live_nodes(P)
    for r in rays:
        t = r.prefix(3)
        assert contains(r.cone, t) and resolve(P, t) in live
