"""Named fixture diagrams shipped with the package.

Set ``MDL_CATALOG_DIR`` to read ``<name>.diag`` files from another directory.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from ..diagram import Diagram, parse_diagram
from ..errors import UnknownCatalogEntry

ENV_VAR = "MDL_CATALOG_DIR"


def _directory() -> Path | None:
    override = os.environ.get(ENV_VAR)
    return Path(override) if override else None


def names() -> list[str]:
    d = _directory()
    if d is not None:
        return sorted(p.stem for p in d.glob("*.diag"))
    return sorted(
        Path(entry.name).stem
        for entry in resources.files(__package__).iterdir()
        if entry.name.endswith(".diag")
    )


def source(name: str) -> str:
    d = _directory()
    try:
        if d is not None:
            return (d / f"{name}.diag").read_text(encoding="utf-8")
        return resources.files(__package__).joinpath(f"{name}.diag").read_text(encoding="utf-8")
    except (FileNotFoundError, OSError):
        raise UnknownCatalogEntry(f"no catalog diagram named {name!r}; known: {', '.join(names())}") from None


def load(name: str) -> Diagram:
    return parse_diagram(source(name))


def resolve(name_or_path: str) -> Diagram:
    """A catalog name, or a path to a diagram file."""
    path = Path(name_or_path)
    if path.suffix == ".diag" or path.exists():
        if not path.exists():
            raise UnknownCatalogEntry(f"no such diagram file {name_or_path!r}")
        return parse_diagram(path.read_text(encoding="utf-8"))
    return load(name_or_path)
