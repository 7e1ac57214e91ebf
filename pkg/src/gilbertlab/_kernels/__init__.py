"""Kernel backend selection.

The compiled extension is preferred when importable; set
``GILBERTLAB_BACKEND=pure`` (or ``compiled``) to force a choice. Both
backends expose the same functions with identical semantics.
"""

from __future__ import annotations

import os

from . import pure as _pure

_requested = os.environ.get("GILBERTLAB_BACKEND", "auto").strip().lower()

if _requested in ("", "auto", "compiled"):
    try:
        from gilbertlab import _ckern as _impl

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = _pure
        BACKEND = "pure"
elif _requested == "pure":
    _impl = _pure
    BACKEND = "pure"
else:
    raise RuntimeError(
        f"GILBERTLAB_BACKEND={_requested!r} not recognized (use 'auto', 'compiled' or 'pure')"
    )


def get_backend(name: str):
    """Return a specific backend module ('pure' or 'compiled')."""
    if name == "pure":
        return _pure
    if name == "compiled":
        from gilbertlab import _ckern

        return _ckern
    raise ValueError(f"unknown backend {name!r}")


build_edges = _impl.build_edges
bfs_hits = _impl.bfs_hits
label_active = _impl.label_active
eligible_mask = _impl.eligible_mask
site_threshold = _impl.site_threshold
bond_threshold = _impl.bond_threshold
run_coupling_core = _impl.run_coupling_core
