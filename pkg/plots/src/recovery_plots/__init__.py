"""Figure rendering for latentgraph output files."""

from .render import render_curve, render_panels

__version__ = "0.1.0"

__all__ = ["render_panels", "render_curve", "__version__"]
