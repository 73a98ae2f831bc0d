"""Decide whether a complex polynomial factors through one linear form, and
certify that generic fibers come arbitrarily close when it does not."""

__version__ = "0.1.0"

from .gaussian import GaussianRational, I  # noqa: E402
from .parser import ParseError, parse  # noqa: E402
from .poly import MultiPoly  # noqa: E402

__all__ = ["GaussianRational", "I", "MultiPoly", "ParseError", "parse", "__version__"]
