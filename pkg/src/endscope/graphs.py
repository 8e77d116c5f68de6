"""Finite graphs: normal spanning trees, separators, and the H_G clique expansion."""

from __future__ import annotations

import itertools
import re
import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import AbstractSet, Iterable, Mapping

from .errors import ParseError, PreconditionError

__all__ = [
    "FiniteGraph",
    "RootedSpanTree",
    "HgResult",
    "NormalCheck",
    "parse_graph",
    "dfs_normal_tree",
    "is_normal",
    "separator_check",
    "extend_normal_tree",
    "hg_transform",
    "components",
    "clique_name",
]

SEP = "^"
_VID = re.compile(r"[A-Za-z0-9_.\-]+")


@dataclass(frozen=True)
class FiniteGraph:
    vertices: frozenset[str]
    edges: frozenset[frozenset[str]]
    name: str = "graph"

    def __post_init__(self) -> None:
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"self-loop or malformed edge {sorted(e)}")
            if not e <= self.vertices:
                raise ValueError(f"edge {sorted(e)} has an endpoint outside the vertex set")

    @classmethod
    def from_edges(cls, pairs: Iterable[tuple[str, str]], vertices: Iterable[str] = (), name: str = "graph"):
        es = frozenset(frozenset(p) for p in pairs)
        vs = frozenset(vertices) | frozenset(v for e in es for v in e)
        return cls(vs, es, name)

    @cached_property
    def adj(self) -> dict[str, tuple[str, ...]]:
        nbrs: dict[str, set[str]] = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            nbrs[a].add(b)
            nbrs[b].add(a)
        return {v: tuple(sorted(ns)) for v, ns in nbrs.items()}

    def has_edge(self, u: str, v: str) -> bool:
        return frozenset((u, v)) in self.edges

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def to_dict(self) -> dict:
        return {"name": self.name, "vertices": sorted(self.vertices), "edges": self.sorted_edges()}


def parse_graph(text: str) -> FiniteGraph:
    """`.graph` format: optional `graph <name>`, `edge <u> <v>` and `vertex <v>` lines, `#` comments."""
    name = "graph"
    vertices: list[str] = []
    edges: list[frozenset[str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        keyword, kcol = tokens[0]
        args = tokens[1:]
        for tok, col in args:
            if keyword != "graph" and not _VID.fullmatch(tok):
                raise ParseError(f"bad vertex identifier {tok!r}", lineno, col)
        if keyword == "graph":
            if len(args) != 1:
                raise ParseError("expected `graph <name>`", lineno, kcol)
            name = args[0][0]
        elif keyword == "vertex":
            if not args:
                raise ParseError("expected `vertex <id> ...`", lineno, kcol)
            vertices.extend(tok for tok, _ in args)
        elif keyword == "edge":
            if len(args) != 2:
                raise ParseError("expected `edge <u> <v>`", lineno, kcol)
            (u, _), (v, vcol) = args
            if u == v:
                raise ParseError(f"self-loop on {u!r}", lineno, vcol)
            e = frozenset((u, v))
            if e in edges:
                warnings.warn(f"line {lineno}: duplicate edge {u}-{v} ignored", stacklevel=2)
                continue
            edges.append(e)
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno, kcol)
    vs = frozenset(vertices) | frozenset(v for e in edges for v in e)
    return FiniteGraph(vs, frozenset(edges), name)


@dataclass(frozen=True)
class RootedSpanTree:
    root: str
    parent: Mapping[str, str] = field(default_factory=dict)

    @cached_property
    def vertices(self) -> frozenset[str]:
        return frozenset(self.parent) | {self.root}

    def down(self, x: str) -> list[str]:
        """⌄x: the vertices on the tree path from x down to the root, x included."""
        path = [x]
        while x != self.root:
            x = self.parent[x]
            path.append(x)
        return path

    def le(self, x: str, y: str) -> bool:
        return x in self.down(y)

    def comparable(self, x: str, y: str) -> bool:
        return self.le(x, y) or self.le(y, x)

    def tree_edges(self) -> list[tuple[str, str]]:
        return sorted((p, c) for c, p in self.parent.items())

    def to_dict(self) -> dict:
        return {"root": self.root, "parent": dict(sorted(self.parent.items()))}


def _component(G: FiniteGraph, r: str, removed: AbstractSet[str] = frozenset()) -> set[str]:
    seen = {r}
    queue = deque([r])
    while queue:
        v = queue.popleft()
        for w in G.adj[v]:
            if w not in seen and w not in removed:
                seen.add(w)
                queue.append(w)
    return seen


def dfs_normal_tree(G: FiniteGraph, r: str) -> RootedSpanTree:
    """Depth-first spanning tree of r's component, neighbours taken in sorted order."""
    if r not in G.vertices:
        raise PreconditionError(f"root {r!r} is not a vertex")
    parent: dict[str, str] = {}
    visited = {r}
    stack = [(r, iter(G.adj[r]))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if w not in visited:
                visited.add(w)
                parent[w] = v
                stack.append((w, iter(G.adj[w])))
                break
        else:
            stack.pop()
    return RootedSpanTree(r, parent)


def _check_tree(G: FiniteGraph, T: RootedSpanTree, spanning: bool) -> None:
    if T.root not in G.vertices:
        raise PreconditionError(f"tree root {T.root!r} is not a vertex")
    for c, p in T.parent.items():
        if c == T.root:
            raise PreconditionError("the root has a parent")
        if not G.has_edge(c, p):
            raise PreconditionError(f"tree edge {p}-{c} is not a graph edge")
    for v in T.parent:  # every vertex reaches the root without repeating
        seen = set()
        while v != T.root:
            if v in seen or v not in T.parent:
                raise PreconditionError(f"parent links from {v!r} do not reach the root")
            seen.add(v)
            v = T.parent[v]
    if spanning and T.vertices != _component(G, T.root):
        raise PreconditionError("tree does not span the root's component")


@dataclass(frozen=True)
class NormalCheck:
    ok: bool
    violation: tuple[str, ...] | None = None  # T-path between incomparable vertices

    def __bool__(self) -> bool:
        return self.ok


def is_normal(G: FiniteGraph, T: RootedSpanTree, spanning: bool = True) -> NormalCheck:
    """No T-path joins two tree-incomparable vertices of T.

    A T-path has both ends in T and every inner vertex outside T; with
    ``spanning=False`` T may be any rooted subtree, not just a spanning one.
    """
    _check_tree(G, T, spanning)
    inside = T.vertices
    for x in sorted(inside):
        # BFS from x through non-tree vertices, recording predecessor links
        prev: dict[str, str | None] = {x: None}
        queue = deque([x])
        while queue:
            v = queue.popleft()
            for w in G.adj[v]:
                if w in prev:
                    continue
                prev[w] = v
                if w in inside:
                    if w > x and not T.comparable(x, w):
                        path = [w]
                        while prev[path[-1]] is not None:
                            path.append(prev[path[-1]])
                        return NormalCheck(False, tuple(reversed(path)))
                else:
                    queue.append(w)
    return NormalCheck(True)


def separator_check(G: FiniteGraph, T: RootedSpanTree, x: str, y: str) -> bool:
    """⌄x ∩ ⌄y separates x from y in G (x, y must be incomparable in T)."""
    if x not in T.vertices or y not in T.vertices:
        raise PreconditionError("both vertices must lie in the tree")
    if T.comparable(x, y):
        raise PreconditionError(f"{x!r} and {y!r} are comparable in the tree order")
    sep = set(T.down(x)) & set(T.down(y))
    return y not in _component(G, x, sep)


def extend_normal_tree(
    G: FiniteGraph, S: RootedSpanTree, T: AbstractSet[str], H: AbstractSet[str]
) -> RootedSpanTree:
    """Smallest down-closed subtree of S containing T and H."""
    if not is_normal(G, S):
        raise PreconditionError("S is not a normal spanning tree")
    if S.root not in T:
        raise PreconditionError("T must contain the root")
    for t in T:
        if t not in S.vertices or not set(S.down(t)) <= set(T):
            raise PreconditionError(f"T is not down-closed in S (at {t!r})")
    if not set(H) <= S.vertices:
        raise PreconditionError("H must lie in S's component")
    keep = set(T)
    for x in H:
        keep.update(S.down(x))
    result = RootedSpanTree(S.root, {v: S.parent[v] for v in keep if v != S.root})

    assert is_normal(G, result, spanning=False), "subtree of a normal tree must be normal"
    extra = keep - set(T) - set(H)
    for v in extra:  # minimality: each extra vertex lies below something of H
        assert any(v in S.down(x) for x in H)
    return result


def clique_name(u: str, v: str) -> str:
    """Name of the vertex u^v of K_v standing for v's neighbour u."""
    return f"{u}{SEP}{v}"


@dataclass(frozen=True)
class HgResult:
    graph: FiniteGraph
    naming: Mapping[str, tuple[str, str | None]]

    def to_dict(self) -> dict:
        return {
            **self.graph.to_dict(),
            "naming": {k: list(v) for k, v in sorted(self.naming.items())},
        }


def hg_transform(G: FiniteGraph, D: AbstractSet[str]) -> HgResult:
    """Expand every vertex of D into a clique on its incidences.

    Rules: K_v is complete; edges between two vertices outside D stay; a
    neighbour u outside D is joined to u^v; neighbouring v, u in D give the
    edge {v^u, u^v}.
    """
    D = frozenset(D)
    if not D <= G.vertices:
        raise PreconditionError("D must be a set of vertices")
    naming: dict[str, tuple[str, str | None]] = {v: (v, None) for v in G.vertices - D}
    edges: set[frozenset[str]] = set()
    for v in D:
        clique = [clique_name(u, v) for u in G.adj[v]]
        for u in G.adj[v]:
            naming[clique_name(u, v)] = (v, u)
        edges.update(frozenset(p) for p in itertools.combinations(clique, 2))  # (i)
    for e in G.edges:
        u, v = sorted(e)
        if u not in D and v not in D:
            edges.add(e)  # (ii)
        elif u in D and v in D:
            edges.add(frozenset((clique_name(v, u), clique_name(u, v))))  # (iv)
        else:
            dom, other = (u, v) if u in D else (v, u)
            edges.add(frozenset((other, clique_name(other, dom))))  # (iii)
    graph = FiniteGraph(frozenset(naming), frozenset(edges), f"H_{G.name}")
    return HgResult(graph, naming)


def components(G: FiniteGraph, F: AbstractSet[str] = frozenset()) -> list[list[str]]:
    """Connected components of G - F, each sorted, ordered by least vertex."""
    F = set(F)
    out = []
    seen: set[str] = set()
    for v in sorted(G.vertices - F):
        if v in seen:
            continue
        comp = _component(G, v, F)
        seen |= comp
        out.append(sorted(comp))
    return out
