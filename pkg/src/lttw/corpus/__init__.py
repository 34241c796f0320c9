"""Running the bundled proof-script corpus against a manifest.

A manifest lists scripts in load order, each with the outcome it must
produce: "accept", or "reject:<ErrorName>" naming an error class
(subclasses match). Scripts run through one cumulative checker so later
scripts can use names declared by earlier ones; a script expected to be
rejected must fail on its first command, which keeps the shared
signature clean for whatever follows.

Entries may carry an "extended" tag marking material beyond the core
corpus; the runner can skip those.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from ..checker import Checker
from ..errors import (
    CorpusError, LttwError, MismatchedOutcome, matches_error_name,
)
from ..kernel import DEFAULT_FUEL
from ..parser import parse_script
from ..stdlib import load_standard

CORPUS_DIR = Path(__file__).parent
MANIFEST = CORPUS_DIR / "manifest.txt"
MANIFEST_IMPREDICATIVE = CORPUS_DIR / "manifest_impredicative.txt"

ACCEPT = "accept"
REJECT_PREFIX = "reject:"


@dataclass
class CorpusEntry:
    path: Path
    outcome: str  # "accept" or "reject:<ErrorName>"
    extended: bool = False

    @property
    def name(self) -> str:
        return self.path.name


@dataclass
class CorpusResult:
    entry: CorpusEntry
    outcome: str  # what actually happened, manifest syntax
    seconds: float
    commands: int
    error: Optional[Exception] = None

    @property
    def ok(self) -> bool:
        expected = self.entry.outcome
        if expected == ACCEPT:
            return self.outcome == ACCEPT
        if not expected.startswith(REJECT_PREFIX):
            return False
        return (self.error is not None
                and matches_error_name(self.error,
                                       expected[len(REJECT_PREFIX):]))

    def line(self) -> str:
        mark = "ok" if self.ok else "MISMATCH"
        return (f"{self.entry.name:<28} expected {self.entry.outcome:<24} "
                f"got {self.outcome:<24} {self.commands:>3} cmds "
                f"{self.seconds * 1000:7.1f} ms  {mark}")


def parse_manifest(path: Union[str, Path]) -> list[CorpusEntry]:
    path = Path(path)
    base = path.parent
    entries = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8")
                                 .splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) not in (2, 3):
            raise CorpusError(
                f"{path}:{lineno}: manifest lines are "
                f"'file outcome [extended]', got {raw!r}")
        name, outcome = fields[0], fields[1]
        if outcome != ACCEPT and not outcome.startswith(REJECT_PREFIX):
            raise CorpusError(
                f"{path}:{lineno}: outcome must be 'accept' or "
                f"'reject:<ErrorName>', got {outcome!r}")
        extended = False
        if len(fields) == 3:
            if fields[2] != "extended":
                raise CorpusError(
                    f"{path}:{lineno}: unknown tag {fields[2]!r}")
            extended = True
        entries.append(CorpusEntry(base / name, outcome, extended))
    return entries


def _run_one(checker: Checker, entry: CorpusEntry) -> CorpusResult:
    text = entry.path.read_text(encoding="utf-8")
    commands = 0
    start = time.perf_counter()
    try:
        commands = len(parse_script(text, file=str(entry.path)))
        checker.run_text(text, file=str(entry.path))
    except LttwError as e:
        return CorpusResult(entry, f"{REJECT_PREFIX}{type(e).__name__}",
                            time.perf_counter() - start, commands, e)
    return CorpusResult(entry, ACCEPT, time.perf_counter() - start,
                        commands)


def check_corpus(manifest_path: Union[str, Path] = MANIFEST,
                 mode: str = "predicative",
                 prop_placement: str = "prop",
                 fuel: int = DEFAULT_FUEL,
                 include_extended: bool = True,
                 strict: bool = True) -> tuple[Checker, list[CorpusResult]]:
    """Load the standard signature, then run every manifest entry.

    Returns the cumulative checker (its log allows a kernel-only replay)
    and one result per entry run. With strict=True the first deviation
    from the manifest raises MismatchedOutcome instead.
    """
    entries = parse_manifest(manifest_path)
    checker = load_standard(mode=mode, prop_placement=prop_placement,
                            fuel=fuel)
    results = []
    for entry in entries:
        if entry.extended and not include_extended:
            continue
        result = _run_one(checker, entry)
        results.append(result)
        if strict and not result.ok:
            detail = f": {result.error}" if result.error is not None else ""
            raise MismatchedOutcome(
                f"{entry.name}: expected {entry.outcome}, "
                f"got {result.outcome}{detail}")
    return checker, results
