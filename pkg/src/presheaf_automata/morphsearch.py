"""Backtracking search for morphisms of presheaf automata.

A morphism maps elements over an object to elements over the same object,
commutes with every generator action, and optionally preserves start and
accept marks.  The search is a plain CSP: variables are source elements
ordered by descending action degree, domains are base-compatible targets,
and consistency is checked against already-assigned action neighbours.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dcat import same_fragment
from .presheaf import Element, PresheafAutomaton


@dataclass(frozen=True)
class SearchOptions:
    preserve_marks: bool = True
    injective: bool = False
    bijective: bool = False
    limit: int | None = None

    def __post_init__(self):
        if self.bijective and not self.injective:
            object.__setattr__(self, "injective", True)


def _adjacency(auto: PresheafAutomaton):
    fwd: dict[Element, list] = {e: [] for e in auto.elements}
    bwd: dict[Element, list] = {e: [] for e in auto.elements}
    for (gen, x), y in auto.act.items():
        fwd[x].append((gen, y))
        bwd[y].append((gen, x))
    for table in (fwd, bwd):
        for edges in table.values():
            edges.sort(key=lambda it: (it[0].key, it[1].key))
    return fwd, bwd


def is_morphism(
    source: PresheafAutomaton,
    target: PresheafAutomaton,
    mapping: dict[Element, Element],
    preserve_marks: bool = True,
) -> bool:
    """Full re-check of naturality and marks; used to vet search output."""
    for y in source.elements:
        x = mapping.get(y)
        if x is None or x.base != y.base:
            return False
    for (gen, y), y2 in source.act.items():
        x2 = target.act.get((gen, mapping[y]))
        if x2 is None or x2 != mapping[y2]:
            return False
    if preserve_marks:
        if not all(mapping[y] in target.start for y in source.start):
            return False
        if not all(mapping[y] in target.accept for y in source.accept):
            return False
    return True


def find_morphisms(
    source: PresheafAutomaton,
    target: PresheafAutomaton,
    opts: SearchOptions = SearchOptions(),
) -> list[dict[Element, Element]]:
    """All element maps source -> target satisfying the requested options.

    Complete up to ``opts.limit``, in a canonical order independent of
    dictionary iteration order.
    """
    if not same_fragment(source.frag, target.frag):
        raise ValueError("morphism search needs a common fragment")
    if opts.bijective:
        from collections import Counter

        if Counter(e.base for e in source.elements) != Counter(
            e.base for e in target.elements
        ):
            return []

    fwd_s, bwd_s = _adjacency(source)
    fwd_t, bwd_t = _adjacency(target)
    variables = sorted(
        source.elements,
        key=lambda e: (-(len(fwd_s[e]) + len(bwd_s[e])), e.key),
    )

    domains: dict[Element, list[Element]] = {}
    for y in variables:
        cands = target.elements_over(y.base)
        if opts.preserve_marks:
            if y in source.start:
                cands = [c for c in cands if c in target.start]
            if y in source.accept:
                cands = [c for c in cands if c in target.accept]
        domains[y] = cands
        if not cands:
            return []

    act_t = target.act
    act_s = source.act
    results: list[dict[Element, Element]] = []
    assignment: dict[Element, Element] = {}
    used: set[Element] = set()

    def consistent(y: Element, x: Element) -> bool:
        for gen, y2 in fwd_s[y]:
            x2 = act_t.get((gen, x))
            if x2 is None:
                return False
            seen = assignment.get(y2)
            if seen is not None and seen != x2:
                return False
        for gen, y0 in bwd_s[y]:
            x0 = assignment.get(y0)
            if x0 is not None and act_t.get((gen, x0)) != x:
                return False
        return True

    def inverse_natural(mapping: dict[Element, Element]) -> bool:
        inverse = {x: y for y, x in mapping.items()}
        for (gen, x), x2 in act_t.items():
            y2 = act_s.get((gen, inverse[x]))
            if y2 is None or y2 != inverse[x2]:
                return False
        return True

    def search(i: int):
        if opts.limit is not None and len(results) >= opts.limit:
            return
        if i == len(variables):
            mapping = dict(assignment)
            if opts.bijective and not inverse_natural(mapping):
                return
            results.append(mapping)
            return
        y = variables[i]
        for x in domains[y]:
            if opts.injective and x in used:
                continue
            if not consistent(y, x):
                continue
            assignment[y] = x
            used.add(x)
            search(i + 1)
            del assignment[y]
            used.discard(x)
            if opts.limit is not None and len(results) >= opts.limit:
                return

    search(0)
    return results


def accepts(auto: PresheafAutomaton, track) -> bool:
    """Whether the track object embeds into the automaton marks-to-marks."""
    return bool(
        find_morphisms(track.auto, auto, SearchOptions(preserve_marks=True, limit=1))
    )


def subsumes(small, big) -> bool:
    """Whether ``big`` subsumes ``small``: a mark-preserving map small -> big."""
    return bool(
        find_morphisms(
            small.auto, big.auto, SearchOptions(preserve_marks=True, limit=1)
        )
    )
