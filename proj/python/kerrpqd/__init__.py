"""Phase-space quasiprobabilities and classical-simulability thresholds for
Kerr-evolved single-mode states."""

from ._core import *  # noqa: F401,F403
from ._core import fock, run, verification_suite

__all__ = [name for name in dir() if not name.startswith("_")]
