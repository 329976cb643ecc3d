"""Size caps shared across modules."""

import os

MAX_PREFIX = 1 << 16
MAX_PERIOD = 1 << 16
SUBSET_CAP = 24
DEFAULT_WINDOW_CAP = 1 << 25
ENUM_CAP = 10**7


def window_cap():
    """Window cap, overridable through MINBASIS_WINDOW_CAP."""
    raw = os.environ.get("MINBASIS_WINDOW_CAP")
    if raw:
        return int(raw, 0)
    return DEFAULT_WINDOW_CAP
