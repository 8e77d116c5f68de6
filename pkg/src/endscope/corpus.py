"""Named presentations, documented graph generators and seeded random corpora."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graphs import FiniteGraph
from .presentation import ROOT, Edge, Multiplicity, Step, TreePresentation, UNode, live_nodes, parse_tree, resolve

NAMED_TEXT = {
    "bin": "tree bin\nroot v\nedge v v 2\n",
    "baire": "tree baire\nroot v\nedge v v *\n",
    "star": "tree star\nroot r\nedge r c *\nedge c c 1\n",
    "uncountable-star": "tree uncountable-star\nroot r\nedge r c w1\nedge c c 1\n",
    "single-loop": "tree single-loop\nroot v\nedge v v 1\n",
    "comb": "tree comb\nroot s\nedge s s 1\nedge s c 1\nedge c c 1\n",
    # K_omega hung on every node of the binary tree: edge-end space is the
    # Cantor set plus one isolated end per node, accumulating on the branches
    "not-roth-edge-ends": "tree not-roth-edge-ends\nroot v\nedge v v 2\nedge v c 1\nedge c c 1\n",
    # omega^{<omega} with sibling cliques: the end space is the Cantor space
    # (a finite sequence s is the limit of its extensions s^n)
    "menger-with-baire": "tree menger-with-baire\nroot v\nedge v v 2\n",
}

# Hand-derived expected verdicts for the named presentations.
EXPECTED = {
    "bin": dict(compact=True, lindelof="aleph:0", scattered=False, rothberger=False, menger=True),
    "baire": dict(compact=False, lindelof="aleph:0", scattered=False, rothberger=False, menger=False),
    "star": dict(compact=False, lindelof="aleph:0", scattered=True, rothberger=True, menger=True),
    "uncountable-star": dict(compact=False, lindelof="aleph:1", scattered=True, rothberger=False, menger=False),
    "single-loop": dict(compact=True, lindelof="aleph:0", scattered=True, rothberger=True, menger=True),
    "comb": dict(compact=True, lindelof="aleph:0", scattered=True, rothberger=True, menger=True),
    "not-roth-edge-ends": dict(compact=True, lindelof="aleph:0", scattered=False, rothberger=False, menger=True),
    "menger-with-baire": dict(compact=True, lindelof="aleph:0", scattered=False, rothberger=False, menger=True),
}


def named(name: str) -> TreePresentation:
    return parse_tree(NAMED_TEXT[name])


_MULTS = [
    (Multiplicity.fin(1), 50),
    (Multiplicity.fin(2), 18),
    (Multiplicity.fin(3), 4),
    (Multiplicity.aleph(0), 22),
    (Multiplicity.aleph(1), 6),
]


def random_presentation(
    rng: random.Random, max_nodes: int = 6, max_edges: int = 8, name: str = "fuzz"
) -> TreePresentation:
    n = rng.randint(1, max_nodes)
    nodes = tuple(f"n{i}" for i in range(n))
    m = rng.randint(1, max_edges)
    mults, weights = zip(*_MULTS)
    edges = tuple(
        Edge(rng.choice(nodes), rng.choice(nodes), rng.choices(mults, weights)[0]) for _ in range(m)
    )
    return TreePresentation(name, nodes, nodes[0], edges)


def fuzz_corpus(size: int = 500, seed: int = 0, **kw) -> list[TreePresentation]:
    rng = random.Random(seed)
    return [random_presentation(rng, name=f"fuzz{i}", **kw) for i in range(size)]


def random_connected_graph(rng: random.Random, max_vertices: int = 10, min_vertices: int = 1) -> FiniteGraph:
    n = rng.randint(min_vertices, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    rng.shuffle(vs)
    edges = {frozenset((vs[i], vs[rng.randrange(i)])) for i in range(1, n)}
    extra = rng.randint(0, n)
    for _ in range(extra):
        a, b = rng.sample(vs, 2) if n >= 2 else (None, None)
        if a is not None:
            edges.add(frozenset((a, b)))
    return FiniteGraph(frozenset(vs), frozenset(edges), "random")


def _split(rng: random.Random, P: TreePresentation, t: UNode, live: frozenset[str]) -> list[UNode]:
    """Children of a cone pattern whose cones partition its live part."""
    out = []
    for ordinal, e in P.out_edges[resolve(P, t)]:
        if e.dst not in live:
            continue
        if e.mult.infinite:
            b = rng.randint(0, 2)
            out += [t.child(ordinal, k) for k in range(b)] + [t.child(ordinal, b, tail=True)]
        else:
            out += [t.child(ordinal, k) for k in range(e.mult.value)]
    return out


def random_partition(rng: random.Random, P: TreePresentation, splits: int = 3, max_depth: int = 3) -> list[UNode]:
    """Cone partition of the ray space, grown from {@} by splitting random members."""
    live = live_nodes(P)
    family = [ROOT]
    for _ in range(rng.randint(0, splits)):
        i = rng.randrange(len(family))
        if family[i].depth >= max_depth:
            continue
        family[i:i + 1] = _split(rng, P, family[i], live)
    return family


def random_cover(rng: random.Random, P: TreePresentation, splits: int = 3, max_depth: int = 3) -> list[UNode]:
    """Random cone family: a partition, then possibly a member dropped and extra members added."""
    family = random_partition(rng, P, splits, max_depth)
    if len(family) > 1 and rng.random() < 0.4:
        family.pop(rng.randrange(len(family)))
    for _ in range(rng.choice([0, 0, 1, 2])):
        base = rng.choice(family)
        kids = _split(rng, P, base, live_nodes(P)) if base.depth < max_depth else []
        family.append(rng.choice(kids) if kids else base)
    rng.shuffle(family)
    return family


def lasso_rays(P: TreePresentation, aleph_width: int = 3, limit: int = 5000) -> list[tuple[UNode, tuple[Step, ...]]]:
    """First-return lassos (stem, cycle) through live nodes, infinite edges sampled at 0..aleph_width-1.

    A walk is cut at the first repeated tag; the cycle is the segment since
    that tag's earlier visit.  At most ``limit`` lassos are produced.
    """
    live = live_nodes(P)
    if P.root not in live:
        return []
    out: list[tuple[UNode, tuple[Step, ...]]] = []

    def walk(steps: list[Step], seen: dict[str, int], tag: str) -> None:
        for ordinal, e in P.out_edges[tag]:
            if e.dst not in live:
                continue
            for k in range(aleph_width if e.mult.infinite else e.mult.value):
                if len(out) >= limit:
                    return
                nxt = steps + [Step(ordinal, k)]
                if e.dst in seen:
                    cut = seen[e.dst]
                    out.append((UNode(tuple(nxt[:cut])), tuple(nxt[cut:])))
                else:
                    walk(nxt, {**seen, e.dst: len(nxt)}, e.dst)

    walk([], {P.root: 0}, P.root)
    return out


def unroll(stem: UNode, cycle: tuple[Step, ...], depth: int) -> UNode:
    steps = list(stem.steps)
    while len(steps) < depth:
        steps.extend(cycle)
    return UNode(tuple(steps[:depth]))


# --- documented graph generators (finite truncations of the infinite examples) ---


@dataclass(frozen=True)
class Generated:
    graph: FiniteGraph
    presentation: TreePresentation | None
    note: str


def one_point_compactification(k: int = 4, length: int = 3) -> Generated:
    """k disjoint paths whose initial vertices form a complete graph.

    With uncountably many infinite rays this is the one-point
    compactification of an uncountable discrete space (Lindelöf degree
    aleph_0, uncountable cellularity).  That space is compact but not
    metrizable, so no height-omega tree presentation exists.
    """
    edges = []
    starts = [f"p{i}_0" for i in range(k)]
    edges += [(a, b) for i, a in enumerate(starts) for b in starts[i + 1:]]
    for i in range(k):
        edges += [(f"p{i}_{j}", f"p{i}_{j + 1}") for j in range(length)]
    return Generated(FiniteGraph.from_edges(edges, name="one-point-compactification"), None,
                     "no height-omega presentation (end space not metrizable)")


def menger_with_baire_graph(width: int = 3, depth: int = 2) -> Generated:
    """omega^{<omega} truncated, tree edges plus a clique on every sibling set."""
    from itertools import combinations, product

    def nm(s):
        return "r" + "".join(f"_{x}" for x in s)

    edges = []
    for d in range(depth):
        for s in product(range(width), repeat=d):
            kids = [s + (n,) for n in range(width)]
            edges += [(nm(s), nm(c)) for c in kids]
            edges += [(nm(a), nm(b)) for a, b in combinations(kids, 2)]
    return Generated(FiniteGraph.from_edges(edges, name="menger-with-baire"),
                     named("menger-with-baire"), "end space homeomorphic to 2^omega: compact, not Rothberger")


def not_roth_edge_ends_graph(depth: int = 2, clique: int = 3) -> Generated:
    """Binary tree with a clique K_s attached to each node s, every clique vertex joined to s."""
    from itertools import combinations, product

    def nm(s):
        return "b" + "".join(map(str, s))

    edges = []
    for d in range(depth + 1):
        for s in product(range(2), repeat=d):
            if d < depth:
                edges += [(nm(s), nm(s + (b,))) for b in range(2)]
            ks = [f"{nm(s)}_k{i}" for i in range(clique)]
            edges += [(nm(s), k) for k in ks]
            edges += list(combinations(ks, 2))
    return Generated(FiniteGraph.from_edges(edges, name="not-roth-edge-ends"),
                     named("not-roth-edge-ends"), "edge-end space: Cantor set plus isolated ends; not Rothberger")
