"""Drop-directory ingestion: the file-based replacement for live notification.

Documents dropped into the watched directory are estimated exactly once per
(event id, version); duplicates are skipped with an audit log entry, and
malformed files are moved to an ``errors`` subdirectory so one bad document
never stalls the pipeline. Archive replays are just alphabetical drops.
"""

from __future__ import annotations

import logging
import shutil
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol

from .errors import DuplicateAlertError, EqlossError
from .ingest import IngestReport

logger = logging.getLogger(__name__)


class AlertHandler(Protocol):
    def __call__(self, document: str) -> object: ...


@dataclass
class WatchState:
    """Progress of a watch loop; reused across polls."""

    processed: list[str] = field(default_factory=list)
    report: IngestReport = field(default_factory=IngestReport)
    seen_files: set[str] = field(default_factory=set)


def poll_once(
    drop_dir: str | Path,
    handler: AlertHandler,
    state: WatchState | None = None,
    errors_dir: str | Path | None = None,
) -> WatchState:
    """Process every new XML document in the drop directory, oldest name first."""
    state = state if state is not None else WatchState()
    drop = Path(drop_dir)
    quarantine = Path(errors_dir) if errors_dir is not None else drop / "errors"
    for path in sorted(drop.glob("*.xml")):
        if path.name in state.seen_files:
            continue
        state.seen_files.add(path.name)
        try:
            handler(path.read_text(encoding="utf-8"))
            state.processed.append(path.name)
        except DuplicateAlertError as exc:
            state.report.duplicates_ignored += 1
            logger.info("audit: duplicate alert ignored (%s): %s", path.name, exc)
        except EqlossError as exc:
            state.report.quarantined += 1
            quarantine.mkdir(parents=True, exist_ok=True)
            shutil.move(str(path), quarantine / path.name)
            logger.warning("audit: quarantined %s: %s", path.name, exc)
    return state


def watch(
    drop_dir: str | Path,
    handler: AlertHandler,
    interval: float = 1.0,
    stop: threading.Event | None = None,
    on_poll: Callable[[WatchState], None] | None = None,
) -> WatchState:
    """Poll the drop directory until ``stop`` is set."""
    state = WatchState()
    stop = stop if stop is not None else threading.Event()
    while not stop.is_set():
        poll_once(drop_dir, handler, state)
        if on_poll is not None:
            on_poll(state)
        stop.wait(interval)
    return state
