"""Size caps shared by the constructors and the lattice code.

``PERFCODE_CAP`` in the environment replaces the lattice cap and raises the
group cap to at least the same value.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

DEFAULT_GROUP_CAP = 20000
DEFAULT_LATTICE_CAP = 2000
DEFAULT_TRANSVERSAL_CAP = 512


@dataclass(frozen=True)
class Caps:
    group: int = DEFAULT_GROUP_CAP
    lattice: int = DEFAULT_LATTICE_CAP
    transversal: int = DEFAULT_TRANSVERSAL_CAP

    def with_override(self, value: int | None) -> "Caps":
        if value is None:
            return self
        return replace(self, lattice=value, group=max(self.group, value))


def _from_env() -> Caps:
    raw = os.environ.get("PERFCODE_CAP")
    caps = Caps()
    if raw:
        caps = caps.with_override(int(raw))
    return caps


_current = _from_env()


def caps() -> Caps:
    return _current


def set_caps(new: Caps) -> Caps:
    """Install ``new`` as the process-wide caps; returns the previous value."""
    global _current
    old, _current = _current, new
    return old
