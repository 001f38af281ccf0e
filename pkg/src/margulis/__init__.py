"""Displacement bounds, certified scalar chains and tree ping-pong tools."""

__version__ = "0.1.0"

from . import certnum, errors, growth, gtree, hyp3, tester

__all__ = ["certnum", "errors", "growth", "gtree", "hyp3", "tester",
           "__version__"]
