"""Winner/loser separability analysis of stock-index components."""

from ._wlsep import *  # noqa: F401,F403
from ._wlsep import WlsepError, run_pipeline  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
