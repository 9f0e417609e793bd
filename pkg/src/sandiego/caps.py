"""Exhaustive-enumeration caps.

Defaults can be overridden through the ``SANDIEGO_CAPS`` environment
variable, e.g. ``SANDIEGO_CAPS="suspect=11,entropy=10"``.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace

ENV_VAR = "SANDIEGO_CAPS"


@dataclass(frozen=True)
class Caps:
    suspect: int = 10  # suspect_set / strategy_complexity / search success
    exact_min: int = 3  # exact_game_complexity over all table strategies
    entropy: int = 9  # posterior_table / conditional_entropy
    subset: int = 4  # exhaustive min_max_degree
    parity: int = 16  # parity_success_set over 2^n inputs

    def override(self, spec: str) -> "Caps":
        """Return a copy with ``name=value`` pairs from a comma list applied."""
        known = {f.name for f in fields(self)}
        updates = {}
        for item in filter(None, (s.strip() for s in spec.split(","))):
            name, sep, value = item.partition("=")
            name = name.strip().replace("-", "_")
            if not sep or name not in known:
                raise ValueError(f"bad cap override {item!r}; known caps: {sorted(known)}")
            updates[name] = int(value)
        return replace(self, **updates)


_active: Caps | None = None


def get_caps() -> Caps:
    if _active is not None:
        return _active
    return Caps().override(os.environ.get(ENV_VAR, ""))


@contextmanager
def using(active: Caps):
    """Temporarily replace the process-wide caps (environment included)."""
    global _active
    saved, _active = _active, active
    try:
        yield active
    finally:
        _active = saved


def resolve(name: str, cap: int | None) -> int:
    return getattr(get_caps(), name) if cap is None else cap
