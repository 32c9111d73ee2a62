"""Bounded language semantics for presheaf automata.

A language is a canonical set of track objects, deduplicated by
certificate, relative to an explicit budget: a maximal path length and
the fragment window.  Down-closure and the rational operations quantify
over a caller-supplied finite universe (all tracks of fragment paths
within the budget), which is the only computable reading of the
subsumption-closed semantics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .dcat import DCatFragment, ObjId, same_fragment
from .errors import StarOnInfiniteObjects
from .morphsearch import subsumes
from .path import enumerate_fragment_paths, enumerate_paths
from .presheaf import PresheafAutomaton
from .track import TrackObject, canonical_certificate, concat_tracks, identity_track, track_of


@dataclass(eq=False)
class Language:
    """Certificate-keyed set of track objects with its budget."""

    frag: DCatFragment
    maxlen: int
    tracks: dict[bytes, TrackObject] = field(default_factory=dict)

    def certificates(self) -> list[bytes]:
        return sorted(self.tracks)

    def members(self) -> list[TrackObject]:
        return [self.tracks[c] for c in self.certificates()]

    def add(self, track: TrackObject) -> bytes:
        cert = canonical_certificate(track)
        self.tracks.setdefault(cert, track)
        return cert

    def __len__(self):
        return len(self.tracks)

    def __contains__(self, track: TrackObject) -> bool:
        return canonical_certificate(track) in self.tracks

    def copy(self) -> "Language":
        return Language(self.frag, self.maxlen, dict(self.tracks))


def _check_compatible(*langs: Language):
    first = langs[0].frag
    if any(not same_fragment(first, lang.frag) for lang in langs[1:]):
        raise ValueError("languages live over different fragments")


def language_equal(left: Language, right: Language) -> bool:
    return set(left.tracks) == set(right.tracks)


def lang_of(auto: PresheafAutomaton, maxlen: int) -> Language:
    """Tracks of accepting paths with at most ``maxlen`` steps.

    Identity steps are skipped during enumeration: they never change the
    spanned track, so the language is unaffected.
    """
    lang = Language(auto.frag, maxlen)
    for path in enumerate_paths(
        auto, auto.start, maxlen, accepting_only=True, skip_identities=True
    ):
        lang.add(track_of(path.project(), auto.frag))
    return lang


def fragment_universe(
    frag: DCatFragment,
    maxlen: int,
    sources: Iterable[ObjId] | None = None,
) -> Language:
    """All tracks of fragment paths with at most ``maxlen`` steps."""
    lang = Language(frag, maxlen)
    for path in enumerate_fragment_paths(frag, sources, maxlen, skip_identities=True):
        lang.add(track_of(path, frag))
    return lang


def down_closure(lang: Language, universe: Language) -> Language:
    """Members of the universe subsumed by a member, plus the set itself."""
    _check_compatible(lang, universe)
    out = lang.copy()
    for candidate in universe.members():
        if candidate in out:
            continue
        if any(subsumes(candidate, big) for big in lang.members()):
            out.add(candidate)
    return out


def close_into_universe(tracks, universe: Language) -> Language:
    """The universe members subsumed by some track in the collection.

    This is the budget-relative reading of down-closure used by the
    rational operations: results always live inside the finite universe,
    so iterated operations stay bounded.  Tracks inside the budget appear
    in the result through their own universe representative.
    """
    pool = list(tracks)
    out = Language(universe.frag, universe.maxlen)
    for cert, candidate in universe.tracks.items():
        for big in pool:
            if canonical_certificate(big) == cert or subsumes(candidate, big):
                out.tracks[cert] = candidate
                break
    return out


def union(left: Language, right: Language) -> Language:
    _check_compatible(left, right)
    out = left.copy()
    for track in right.members():
        out.add(track)
    return out


def concat(left: Language, right: Language, universe: Language) -> Language:
    """Pairwise concatenation over matching endpoints, closed into the
    budget universe."""
    _check_compatible(left, right, universe)
    raw = {}
    for gamma in left.members():
        for delta in right.members():
            if gamma.tgt_obj == delta.src_obj:
                glued = concat_tracks(gamma, delta)
                raw[canonical_certificate(glued)] = glued
    return close_into_universe(raw.values(), universe)


def identity_language(frag: DCatFragment, universe: Language) -> Language:
    """Down-closure of all identity tracks; the quantale unit."""
    return close_into_universe(
        [identity_track(frag, obj) for obj in frag.objects], universe
    )


def plus(lang: Language, universe: Language, iters: int = 8) -> Language:
    """Iterated concatenation to a fixpoint or the iteration cap."""
    _check_compatible(lang, universe)
    acc = down_closure(lang, universe)
    for _ in range(iters):
        step = concat(lang, acc, universe)
        merged = union(acc, step)
        if set(merged.tracks) == set(acc.tracks):
            return acc
        acc = merged
    return acc


def star(lang: Language, universe: Language, iters: int = 8) -> Language:
    """Kleene star; only legal when the object window is complete."""
    if not lang.frag.window.objects_complete:
        raise StarOnInfiniteObjects(
            f"{lang.frag.name} is a proper object truncation; star is undefined"
        )
    return union(plus(lang, universe, iters), identity_language(lang.frag, universe))


def src_tgt(lang: Language) -> tuple[set[ObjId], set[ObjId]]:
    sources = {t.src_obj for t in lang.members()}
    targets = {t.tgt_obj for t in lang.members()}
    return sources, targets


def localize(lang: Language, src: ObjId, tgt: ObjId) -> Language:
    out = Language(lang.frag, lang.maxlen)
    for cert, track in lang.tracks.items():
        if track.src_obj == src and track.tgt_obj == tgt:
            out.tracks[cert] = track
    return out


def is_down_closed(lang: Language, universe: Language) -> bool:
    """No universe member subsumed by a member is missing."""
    closure = down_closure(lang, universe)
    return set(closure.tracks) == set(lang.tracks)


# -- rational expressions -----------------------------------------------------


@dataclass(frozen=True)
class RationalExpr:
    """Expression tree over atoms: empty | atom | union | concat | plus | star."""

    node: str
    children: tuple = ()
    atom: TrackObject | None = None

    @staticmethod
    def empty() -> "RationalExpr":
        return RationalExpr("empty")

    @staticmethod
    def of(track: TrackObject) -> "RationalExpr":
        return RationalExpr("atom", atom=track)

    def __add__(self, other: "RationalExpr") -> "RationalExpr":
        return RationalExpr("union", (self, other))

    def __mul__(self, other: "RationalExpr") -> "RationalExpr":
        return RationalExpr("concat", (self, other))

    def plus(self) -> "RationalExpr":
        return RationalExpr("plus", (self,))

    def star(self) -> "RationalExpr":
        return RationalExpr("star", (self,))


def eval_rational(
    expr: RationalExpr,
    universe: Language,
    iters: int = 8,
) -> Language:
    """Recursive evaluation with per-node down-closure in the universe."""
    frag = universe.frag
    if expr.node == "empty":
        return Language(frag, universe.maxlen)
    if expr.node == "atom":
        return close_into_universe([expr.atom], universe)
    if expr.node == "union":
        return union(
            eval_rational(expr.children[0], universe, iters),
            eval_rational(expr.children[1], universe, iters),
        )
    if expr.node == "concat":
        return concat(
            eval_rational(expr.children[0], universe, iters),
            eval_rational(expr.children[1], universe, iters),
            universe,
        )
    if expr.node == "plus":
        return plus(eval_rational(expr.children[0], universe, iters), universe, iters)
    if expr.node == "star":
        return star(eval_rational(expr.children[0], universe, iters), universe, iters)
    raise ValueError(f"unknown node {expr.node}")
