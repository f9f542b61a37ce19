"""Upper bounds on graph pebbling numbers from tree strategies and exact LP."""

from .graph import Graph, from_spec, gen
from .optimize import BoundReport, bound_pipeline
from .pebbling import Configuration, is_solvable, pebbling_number, pebbling_number_exact
from .strategy import Strategy, enumerate_basic, validate_strategy

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "Configuration", "Graph", "Strategy", "bound_pipeline", "enumerate_basic",
    "from_spec", "gen", "is_solvable", "pebbling_number", "pebbling_number_exact",
    "validate_strategy",
]
