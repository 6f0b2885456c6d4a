"""Exact verification of fifth and seventh order mock theta function identities."""

from .series import TruncSeries

__version__ = "0.1.0"

__all__ = ["TruncSeries", "__version__"]
