"""Precubical sets from explicit cell and face data."""

from __future__ import annotations

from typing import Iterable, Mapping

from ..dcat import MorId, ObjId, build_precube
from ..errors import CubicalIdentityViolation
from ..presheaf import Element, PresheafAutomaton, validate_automaton


def precubical_from_cells(
    cells: Mapping[int, Iterable[str]],
    faces: Mapping[tuple[str, int, int], str],
    starts: Iterable[str] = (),
    accepts: Iterable[str] = (),
    dmax: int | None = None,
) -> PresheafAutomaton:
    """Build and validate a cube-indexed automaton from face tables.

    ``cells`` lists cell names per dimension; ``faces`` maps
    (cell, eps, i) to the face obtained by evaluating the elementary face
    map with value eps at slot i.  Violated cubical identities reject the
    input with a witness.
    """
    dims = sorted(cells)
    top = dmax if dmax is not None else (max(dims) if dims else 0)
    frag = build_precube(top)
    elements: dict[str, Element] = {}
    for n in dims:
        for name in cells[n]:
            if name in elements:
                raise ValueError(f"duplicate cell name {name}")
            elements[name] = Element(name, ObjId(n))

    act = {}
    for (name, eps, i), image in faces.items():
        cell = elements.get(name)
        if cell is None:
            raise ValueError(f"face of unknown cell {name}")
        n = cell.base.payload
        gen = MorId(ObjId(n - 1), ObjId(n), ("d", ((i, eps),)))
        target = elements.get(image)
        if target is None:
            raise ValueError(f"face {name}->{image} hits an unknown cell")
        act[(gen, cell)] = target

    marks = elements
    auto = PresheafAutomaton(
        frag=frag,
        elements=tuple(elements.values()),
        act=act,
        start=frozenset(marks[s] for s in starts),
        accept=frozenset(marks[t] for t in accepts),
    )
    report = validate_automaton(auto)
    if not report.ok:
        first = report.violations[0]
        raise CubicalIdentityViolation(str(report), witness=first.witness)
    return auto
