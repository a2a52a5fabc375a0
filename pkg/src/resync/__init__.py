"""Origin-semantics analysis of two-way word transducers."""
from .core import (LEFT_MARK, RIGHT_MARK, Alphabet, Configuration, Interval, Run,
                   SynchronizedPair, Transition, TwoWayTransducer, origin_graph,
                   validate_transducer)
from .errors import (BoundExceeded, HasInversion, InvalidInterval, InvalidRun, MismatchedPair,
                     NotALoop, NotSuccessful, NotTotallyOrdered, ResyncError, TreeMismatch)

__all__ = [
    "LEFT_MARK", "RIGHT_MARK", "Alphabet", "Configuration", "Interval", "Run", "SynchronizedPair",
    "Transition", "TwoWayTransducer", "origin_graph", "validate_transducer", "BoundExceeded",
    "HasInversion", "InvalidInterval", "InvalidRun", "MismatchedPair", "NotALoop", "NotSuccessful",
    "NotTotallyOrdered", "ResyncError", "TreeMismatch",
]

__version__ = "0.1.0"
