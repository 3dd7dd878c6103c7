"""Bundled sentence pairs and pair-file loading."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .core import AlignedPair, parse_pair_file
from .projection import prepare


def fixture_dir():
    return resources.files("csgen") / "data" / "pairs"


def fixture_names() -> list[str]:
    return sorted(p.name[:-4] for p in fixture_dir().iterdir() if p.name.endswith(".txt"))


def load_pair(path: str | Path, pair_id: str | None = None) -> AlignedPair:
    """Read a pair file and return it projected and linked.

    A bare fixture name such as ``pair1`` is accepted when no such file exists.
    """
    path = Path(path)
    if not path.exists() and path.name in fixture_names():
        text = (fixture_dir() / f"{path.name}.txt").read_text("utf-8")
    else:
        text = path.read_text(encoding="utf-8")
    return prepare(parse_pair_file(text, pair_id or path.stem))


def load_fixtures() -> dict[str, AlignedPair]:
    return {name: prepare(parse_pair_file((fixture_dir() / f"{name}.txt").read_text("utf-8"), name))
            for name in fixture_names()}


def corpus_files(directory: str | Path) -> list[tuple[str, str]]:
    """``(name, text)`` for every ``*.txt`` pair file in ``directory``, sorted by name.

    The name ``fixtures`` refers to the bundled corpus unless such a directory exists.
    """
    directory = Path(directory)
    if not directory.is_dir() and str(directory) == "fixtures":
        return [(n, (fixture_dir() / f"{n}.txt").read_text("utf-8")) for n in fixture_names()]
    if not directory.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {directory}")
    return [(p.stem, p.read_text(encoding="utf-8")) for p in sorted(directory.glob("*.txt"))]
