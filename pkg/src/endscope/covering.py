"""Covering-property decisions for ray spaces of regular trees."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .derivatives import DerivativeTrace, Operator, derive, rank
from .presentation import Cardinal, Edge, Multiplicity, TreePresentation, is_pruned, live_nodes
from .witnesses import BaireWitness, BinaryWitness, baire_witness, binary_witness

__all__ = [
    "PropertyReport",
    "is_compact",
    "lindelof_degree",
    "extent",
    "is_scattered",
    "is_rothberger",
    "is_menger",
    "is_sigma_compact",
    "sigma_cover",
    "report",
    "report_violations",
]


def _pruned_edges(P: TreePresentation) -> list[Edge]:
    live = live_nodes(P)
    return [e for e in P.edges if e.src in live and e.dst in live]


def is_compact(P: TreePresentation) -> bool:
    """No infinite edge survives pruning, i.e. every node has finitely many successors."""
    return not any(e.mult.infinite for e in _pruned_edges(P))


def lindelof_degree(P: TreePresentation) -> Cardinal:
    k = max((e.mult.value for e in _pruned_edges(P) if e.mult.infinite), default=0)
    return Cardinal.aleph(k)


extent = lindelof_degree


def is_scattered(P: TreePresentation) -> bool:
    return derive(P, Operator.SCATTER).fixpoint_empty


def is_rothberger(P: TreePresentation) -> bool:
    return lindelof_degree(P) == Cardinal.aleph(0) and is_scattered(P)


def is_menger(P: TreePresentation) -> bool:
    return lindelof_degree(P) == Cardinal.aleph(0) and derive(P, Operator.COMPACT).fixpoint_empty


is_sigma_compact = is_menger


def sigma_cover(P: TreePresentation, pieces: int) -> list[TreePresentation] | None:
    """Compact pieces Q_1..Q_pieces whose ray spaces exhaust R(T), or None if not Menger.

    Q_k caps every ALEPH(0) edge at FIN(k).  Under Menger no cycle of the
    pruned presentation contains an infinite edge (such a cycle would survive
    every compact-derivative stage), so each ray crosses infinite edges only
    finitely often and a ray whose largest infinite-branch index is m lies in
    Q_{m+1}.  Edge order is unchanged, so unfolding nodes keep their names.
    """
    if not is_menger(P):
        return None
    out = []
    for k in range(1, pieces + 1):
        edges = tuple(
            Edge(e.src, e.dst, Multiplicity.fin(k)) if e.mult == Multiplicity.aleph(0) else e
            for e in P.edges
        )
        out.append(replace(P, name=f"{P.name}-cap{k}", edges=edges))
    return out


@dataclass(frozen=True)
class PropertyReport:
    name: str
    pruned: bool
    empty: bool
    compact: bool
    lindelofDegree: Cardinal
    extent: Cardinal
    scattered: bool
    rothberger: bool
    menger: bool
    sigmaCompact: bool
    scatterRank: int | None
    kbRank: int | None
    binaryWitness: BinaryWitness | None = field(default=None, compare=False)
    baireWitness: BaireWitness | None = field(default=None, compare=False)
    traces: tuple[DerivativeTrace, ...] = field(default=(), compare=False, repr=False)

    def to_dict(self, with_traces: bool = False) -> dict:
        d = {
            "name": self.name,
            "pruned": self.pruned,
            "empty": self.empty,
            "compact": self.compact,
            "lindelofDegree": str(self.lindelofDegree),
            "extent": str(self.extent),
            "scattered": self.scattered,
            "rothberger": self.rothberger,
            "menger": self.menger,
            "sigmaCompact": self.sigmaCompact,
            "scatterRank": self.scatterRank,
            "kbRank": self.kbRank,
            "witnesses": {
                "binary": self.binaryWitness.to_dict() if self.binaryWitness else None,
                "baire": self.baireWitness.to_dict() if self.baireWitness else None,
            },
        }
        if with_traces:
            d["traces"] = [t.to_dict() for t in self.traces]
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> PropertyReport:
        from .witnesses import witness_from_dict

        wit = data.get("witnesses") or {}
        return cls(
            name=data["name"],
            pruned=data["pruned"],
            empty=data["empty"],
            compact=data["compact"],
            lindelofDegree=Cardinal.parse(data["lindelofDegree"]),
            extent=Cardinal.parse(data["extent"]),
            scattered=data["scattered"],
            rothberger=data["rothberger"],
            menger=data["menger"],
            sigmaCompact=data["sigmaCompact"],
            scatterRank=data["scatterRank"],
            kbRank=data["kbRank"],
            binaryWitness=witness_from_dict(wit["binary"]) if wit.get("binary") else None,
            baireWitness=witness_from_dict(wit["baire"]) if wit.get("baire") else None,
        )


def report(P: TreePresentation, witness_depth: int = 3, witness_width: int = 3) -> PropertyReport:
    scatter = derive(P, Operator.SCATTER)
    compact_trace = derive(P, Operator.COMPACT)
    degree = lindelof_degree(P)
    countable = degree == Cardinal.aleph(0)
    scattered = scatter.fixpoint_empty
    menger = countable and compact_trace.fixpoint_empty
    bw = None if scattered else binary_witness(P, scatter, witness_depth)
    # an uncountable branching is a cardinality obstruction; no pattern is attached for it
    kw = baire_witness(P, compact_trace, witness_depth, witness_width) if countable else None
    return PropertyReport(
        name=P.name,
        pruned=is_pruned(P),
        empty=not live_nodes(P),
        compact=is_compact(P),
        lindelofDegree=degree,
        extent=degree,
        scattered=scattered,
        rothberger=countable and scattered,
        menger=menger,
        sigmaCompact=menger,
        scatterRank=rank(scatter),
        kbRank=rank(compact_trace),
        binaryWitness=bw,
        baireWitness=kw,
        traces=(scatter, compact_trace),
    )


def report_violations(r: PropertyReport) -> list[str]:
    """Implication-chain invariants that ``r`` breaks (empty list when consistent)."""
    bad = []
    countable = r.lindelofDegree == Cardinal.aleph(0)
    if r.rothberger and not r.menger:
        bad.append("rothberger without menger")
    if r.menger and not countable:
        bad.append("menger without countable Lindelöf degree")
    if r.compact and not r.menger:
        bad.append("compact without menger")
    if r.menger != r.sigmaCompact:
        bad.append("menger differs from sigma-compactness")
    if r.extent != r.lindelofDegree:
        bad.append("extent differs from Lindelöf degree")
    if r.scattered == (r.binaryWitness is not None):
        bad.append("binary witness does not match scatteredness")
    if (not r.menger and countable) != (r.baireWitness is not None):
        bad.append("baire witness does not match non-Mengerness")
    return bad
