"""Small helpers for writing CSV/JSON outputs to paths or open handles."""
from __future__ import annotations

import contextlib
import json


@contextlib.contextmanager
def text_sink(target):
    """Yield a writable text handle for a path, or ``target`` itself if it already has ``write``."""
    if hasattr(target, "write"):
        yield target
    else:
        with open(target, "w", newline="") as fh:
            yield fh


def write_config_line(fh, config: dict | None) -> None:
    if config is not None:
        fh.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
