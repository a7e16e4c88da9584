"""Lookup of bundled configuration documents (``kb/default``, ``rules/default``, ...)."""

from __future__ import annotations

from importlib import resources as _res
from pathlib import Path
from typing import Union

_SUFFIXES = (".yaml", ".yml")


def bundled(name: str) -> Path | None:
    base = Path(str(_res.files("respmon") / "data"))
    for candidate in (base / name, *(base / f"{name}{s}" for s in _SUFFIXES)):
        if candidate.is_file():
            return candidate
    return None


def resolve(source: Union[str, Path]) -> Path:
    """Return a real file for ``source``.

    Filesystem paths win; otherwise ``source`` is looked up among the bundled
    documents, with or without a ``.yaml`` suffix.
    """
    path = Path(source)
    if path.is_file():
        return path
    for s in _SUFFIXES:
        if path.with_name(path.name + s).is_file():
            return path.with_name(path.name + s)
    found = bundled(str(source))
    if found is None:
        raise FileNotFoundError(f"no such file or bundled document: {source}")
    return found
