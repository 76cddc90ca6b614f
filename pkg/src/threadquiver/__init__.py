"""Computation in windows of derived categories of thread-quiver path algebras.

The package splits into:

    orders        symbolic linear orders and the completed thread chain
    quivers       thread quivers, their file format, expansion/contraction
    reps          exact quiver representations, Hom/Ext, tau, cones
    window        finite tau-closed slabs of the translation quiver
    metric        light-cone and round-trip distances with certificates
    sections      hereditary sections, hearts, tilts, condition (*)
    threads       thread/nonthread analysis, rays, anchors, marks
    cli           the `tq` command line tool
"""

from . import cli, errors, metric, orders, quivers, reps, sections, threads, window
from .orders import (Concat, Fin, INTS, Labeled, LexProd, NAT_DOWN, NAT_UP,
                     thread_completion)
from .quivers import Quiver, ThreadQuiver, quiver
from .sections import Section, ThreadSlicePolicy
from .window import DObj, Window, build_window

__all__ = [
    "Concat", "DObj", "Fin", "INTS", "Labeled", "LexProd", "NAT_DOWN",
    "NAT_UP", "Quiver", "Section", "ThreadQuiver", "ThreadSlicePolicy",
    "Window", "build_window", "cli", "errors", "metric", "orders", "quiver",
    "quivers", "reps", "sections", "threads", "thread_completion", "window",
]

__version__ = "0.1.0"
