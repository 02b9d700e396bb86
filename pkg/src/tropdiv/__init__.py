"""Divisor theory on metric graphs: chip-firing, rank, tropical Jacobians and Prym varieties."""

from .divisor import Divisor, PLFunction, canonical, div_of
from .errors import TropDivError
from .graph import Edge, MetricGraph, Point, betti1

__all__ = ["Divisor", "Edge", "MetricGraph", "PLFunction", "Point", "TropDivError",
           "betti1", "canonical", "div_of"]
