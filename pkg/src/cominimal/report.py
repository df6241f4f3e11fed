"""Deterministic report files with a separate run-metadata sidecar."""

from __future__ import annotations

import json
import platform
import sys
from pathlib import Path

from . import __version__
from . import kernels


def dumps(body) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".meta.json")


def write_report(path, body, runtime_s: float = 0.0, extra=None) -> Path:
    """Write ``body`` byte-stably; timings and environment go to the sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(body), encoding="utf-8")
    meta = {
        "runtime_s": round(runtime_s, 6),
        "python": sys.version.split()[0],
        "platform": platform.platform(),
        "kernel_backend": kernels.BACKEND,
        "package_version": __version__,
    }
    if extra:
        meta.update(extra)
    sidecar_path(path).write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def write_layer_dump(path, points) -> Path:
    """One point per line, lex-sorted."""
    from .lattice import format_point

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = "".join(format_point(p) + "\n" for p in sorted(points))
    path.write_text(text, encoding="utf-8")
    return path
