"""Statistics on signed permutations and exact checks of their generating functions."""

from .group import (
    DClass, SignedPermutation, WindowError, b_stats, d_stats, enumerate_group,
    format_window, inverse, parse_window, r_stats,
)
from .encoding import (
    Composition, Partition, enumerate_sequences, psi, psi_d_variant,
    psi_inverse, seq_stats,
)
from .qseries import Caps, TruncatedSeries

__version__ = "0.1.0"
__all__ = [
    "DClass", "SignedPermutation", "WindowError", "b_stats", "d_stats", "enumerate_group",
    "format_window", "inverse", "parse_window", "r_stats", "Composition", "Partition",
    "enumerate_sequences", "psi", "psi_d_variant", "psi_inverse", "seq_stats",
    "Caps", "TruncatedSeries",
]
