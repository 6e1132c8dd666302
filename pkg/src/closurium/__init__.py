"""Model checking and proof checking for spatial logics over finite closure spaces."""

from __future__ import annotations

__version__ = "0.1.0"
