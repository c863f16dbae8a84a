"""Walks with small steps in three-quadrant and M-quadrant cones."""

from __future__ import annotations

__version__ = "0.1.0"
