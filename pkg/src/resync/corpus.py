"""Hand-built machines shipped with the package (``machines/*.tw``)."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .core import TwoWayTransducer
from .textformat import parse_transducer

# machines whose runs are all 3-visit; usable by the flow pipeline with K=3
BOUNDED = (
    "identity", "t1", "t2", "reverse", "duplicate", "eraser", "letter_map",
    "three_pass", "first_to_end", "copy_reverse", "v_then_head", "copy_or_reverse",
)
# machines with vertical loops (unbounded visits)
UNBOUNDED = ("multipass", "bounce")
DEFAULT_K = 3


def names() -> tuple[str, ...]:
    return BOUNDED + UNBOUNDED


def source(name: str) -> str:
    return resources.files("resync").joinpath("machines").joinpath(f"{name}.tw").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load(name: str) -> TwoWayTransducer:
    return parse_transducer(source(name))
