"""Quickstep: a hybrid research-paper recommender.

Browsed papers are classified into a topic scheme by a boosted
nearest-neighbour committee, per-user interest profiles decay over time
(optionally crediting superclass topics in the hierarchical scheme), and
daily recommendations join profiles against classified papers. Feedback
flows back into the shared training set.
"""

from .config import RuntimeConfig, load_config
from .store import DataRoot

__version__ = "0.1.0"

__all__ = ["RuntimeConfig", "load_config", "DataRoot", "__version__"]
