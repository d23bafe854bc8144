"""percolab: a desk-scale laboratory for percolation on expander-like graphs.

Core pieces: exact rooted-ball certificates and the agreement-radius metric
(``graphs``), seeded graph families (``generators``), Cheeger/Menger
expansion machinery (``expansion``), Bernoulli bond percolation with pinned
randomness (``percolation``), and empirical local-weak-limit diagnostics
(``locallimit``).  The ``percolab`` CLI wires them into reproducible
experiments.
"""

from .errors import CapExceeded, PercolabError, ValidationError
from .graphs import (Graph, RootedBall, RootedDistance, ball_class_member,
                     canonical_certificate, distinguishing_radius, extract_ball,
                     metric_d, rooted_isomorphic)

__all__ = [
    "CapExceeded",
    "PercolabError",
    "ValidationError",
    "Graph",
    "RootedBall",
    "RootedDistance",
    "ball_class_member",
    "canonical_certificate",
    "distinguishing_radius",
    "extract_ball",
    "metric_d",
    "rooted_isomorphic",
]
