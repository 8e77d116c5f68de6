from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from endscope.corpus import NAMED_TEXT, random_presentation
from endscope.presentation import parse_tree

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture
def samples() -> Path:
    return SAMPLES


def tree(name: str):
    return parse_tree(NAMED_TEXT[name])


# a presentation drawn from the same generator as the fuzz corpus
presentations = st.integers(0, 2**32 - 1).map(lambda s: random_presentation(random.Random(s)))


def mutate_witness(w, rng: random.Random, kind: int):
    """Corrupt one field of a witness so that verification must fail.

    kind 0: a node copies its sibling's image; 1: a node copies its parent's
    image; 2: a node gets a step on a nonexistent edge; 3: depth + 1.
    """
    from dataclasses import replace

    from endscope.presentation import Step
    from endscope.witnesses import BinaryWitness

    field = "map" if isinstance(w, BinaryWitness) else "phi"
    images = dict(getattr(w, field))
    nonroot = sorted((s for s in images if s), key=lambda s: (len(s), s))
    s = rng.choice(nonroot)
    if kind == 0:
        sib = s[:-1] + ((s[-1] + 1) % (2 if field == "map" else w.width),)
        images[s] = images[sib]
    elif kind == 1:
        images[s] = images[s[:-1]]
    elif kind == 2:
        images[s] = images[s].extend([Step(10**6, 0)])
    else:
        return replace(w, depth=w.depth + 1)
    return replace(w, **{field: images})
