"""Matrices printed in the source literature, shipped as package data."""

from __future__ import annotations

from importlib import resources

from scldpc.core import SymbolicMatrix, parse_matrix


def names() -> list[str]:
    return sorted(p.name[:-4] for p in resources.files(__name__).iterdir() if p.name.endswith(".mtx"))


def load(name: str) -> SymbolicMatrix:
    path = resources.files(__name__) / f"{name}.mtx"
    if not path.is_file():
        raise KeyError(f"no corpus matrix named {name!r}")
    return parse_matrix(path.read_text())


def trinomial_groups() -> dict[int, list[tuple[int, int, int]]]:
    """Trinomial exponent triples keyed by the block length they serve."""
    groups = {}
    text = (resources.files(__name__) / "trinomials.txt").read_text()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, body = line.split(":")
        groups[int(key)] = [tuple(int(v) for v in tok.split(",")) for tok in body.split()]
    return groups


def modulus(name: str) -> int | None:
    """Circulant size recorded in a ``# modulus: p`` comment, if any."""
    path = resources.files(__name__) / f"{name}.mtx"
    if not path.is_file():
        raise KeyError(f"no corpus matrix named {name!r}")
    for line in path.read_text().splitlines():
        body = line.lstrip("# ").strip()
        if line.startswith("#") and body.startswith("modulus:"):
            return int(body.split(":", 1)[1])
    return None
