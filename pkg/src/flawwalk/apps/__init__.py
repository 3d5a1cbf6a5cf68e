"""Built-in problem instances and their file formats."""

from .colorblind import ColorBlindProblem, colorblind_instance, max_class_count, palette_of_counts
from .coloring import ProperColoringProblem, delta_plus_one_instance
from .graph import SimpleGraph
from .latin import ColorMatrix, LatinProblem, latin_instance
from .matching import EdgeColoredComplete, RainbowMatchingProblem, rainbow_matching_instance

APP_NAMES = ("latin", "matching", "coloring", "colorblind")

__all__ = [
    "APP_NAMES",
    "ColorBlindProblem",
    "ColorMatrix",
    "EdgeColoredComplete",
    "LatinProblem",
    "ProperColoringProblem",
    "RainbowMatchingProblem",
    "SimpleGraph",
    "colorblind_instance",
    "delta_plus_one_instance",
    "latin_instance",
    "max_class_count",
    "palette_of_counts",
    "rainbow_matching_instance",
]
