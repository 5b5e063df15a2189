"""
Helper utilities used across fastcp.
"""

from __future__ import annotations

from typing import List, Sequence

from ..errors import ArgumentError


def parse_int_list(text: str, name: str = "value") -> List[int]:
    """Parse a comma-separated list of positive integers ("10,10,10")."""
    items = [part.strip() for part in str(text).split(",") if part.strip()]
    if not items:
        raise ArgumentError(f"{name} must be a non-empty comma-separated list")
    values = []
    for item in items:
        try:
            value = int(item)
        except ValueError:
            raise ArgumentError(f"{name}: {item!r} is not an integer")
        if value < 1:
            raise ArgumentError(f"{name}: {value} must be >= 1")
        values.append(value)
    return values


def parse_name_list(text: str, choices: Sequence[str], name: str = "value") -> List[str]:
    """Parse a comma-separated list of names restricted to ``choices``."""
    items = [part.strip().lower() for part in str(text).split(",") if part.strip()]
    unknown = [item for item in items if item not in choices]
    if not items or unknown:
        raise ArgumentError(f"{name}: expected names from {', '.join(choices)}, got {text!r}")
    return items


def format_dims(dims: Sequence[int]) -> str:
    """Render dims as "10x10x10"."""
    return "x".join(str(int(d)) for d in dims)
