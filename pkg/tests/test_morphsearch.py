from __future__ import annotations

import itertools

import presheaf_automata as pa
from presheaf_automata.dcat import EMPTY, ObjId
from presheaf_automata.fixtures import two_state_fsa
from presheaf_automata.models.fsa import word_track
from presheaf_automata.morphsearch import (
    SearchOptions,
    accepts,
    find_morphisms,
    is_morphism,
    subsumes,
)
from presheaf_automata.presheaf import PresheafAutomaton
from presheaf_automata.track import elementary_track, identity_track, track_of


def brute_force_morphisms(source, target, preserve_marks):
    """Reference enumeration over all base-respecting element maps."""
    pools = []
    for y in source.elements:
        pools.append([(y, x) for x in target.elements_over(y.base)])
    out = []
    for combo in itertools.product(*pools) if pools else [()]:
        mapping = dict(combo)
        if is_morphism(source, target, mapping, preserve_marks):
            out.append(mapping)
    return out


class TestFindMorphisms:
    def test_soundness(self, fsa, square):
        for auto in (fsa, square):
            maps = find_morphisms(auto, auto, SearchOptions(preserve_marks=True))
            assert maps
            for m in maps:
                assert is_morphism(auto, auto, m, preserve_marks=True)

    def test_completeness_against_brute_force(self, fsa, square):
        track = word_track(fsa.frag, ["a", "b"])
        for source, target, marks in [
            (track.auto, fsa, True),
            (track.auto, fsa, False),
            (fsa, fsa, True),
            (square, square, False),
        ]:
            fast = find_morphisms(source, target, SearchOptions(preserve_marks=marks))
            slow = brute_force_morphisms(source, target, marks)
            as_sets = lambda maps: {tuple(sorted((y.name, x.name) for y, x in m.items())) for m in maps}
            assert as_sets(fast) == as_sets(slow)

    def test_empty_source(self, fsa):
        empty = PresheafAutomaton(frag=fsa.frag, elements=(), act={})
        assert find_morphisms(empty, fsa, SearchOptions()) == [{}]

    def test_point_track_has_two_images(self, fsa):
        ident = identity_track(fsa.frag, ObjId(EMPTY))
        maps = find_morphisms(ident.auto, fsa, SearchOptions(preserve_marks=False))
        assert len(maps) == 2

    def test_limit(self, fsa):
        ident = identity_track(fsa.frag, ObjId(EMPTY))
        maps = find_morphisms(ident.auto, fsa, SearchOptions(preserve_marks=False, limit=1))
        assert len(maps) == 1


class TestAccepts:
    def test_word_abb(self, fsa):
        assert accepts(fsa, word_track(fsa.frag, ["a", "b", "b"]))

    def test_track_into_its_coproduct(self, fsa):
        track = word_track(fsa.frag, ["a"])
        lump = pa.coproduct([track.auto, fsa])
        assert accepts(lump, track)

    def test_word_ba_rejected(self, fsa):
        assert not accepts(fsa, word_track(fsa.frag, ["b", "a"]))


class TestSubsumes:
    def test_reflexive(self, fsa):
        track = word_track(fsa.frag, ["a", "b"])
        assert subsumes(track, track)

    def test_boundary_into_square(self, square, square_paths):
        frag = square.frag
        zeta = track_of(square_paths["zeta"].project(), frag)
        alpha = track_of(square_paths["alpha"].project(), frag)
        assert subsumes(zeta, alpha)
        assert not subsumes(alpha, zeta)

    def test_precongruence(self, square, square_paths, cube2):
        frag = square.frag
        zeta = track_of(square_paths["zeta"].project(), frag)
        alpha = track_of(square_paths["alpha"].project(), frag)
        from presheaf_automata.fixtures import cube_mor

        tail = elementary_track(frag, cube_mor(frag, 0, 1, [(1, 0)]), "up")
        assert subsumes(pa.concat_tracks(zeta, tail), pa.concat_tracks(alpha, tail))

    def test_monotonicity_of_languages(self, fsa):
        # a subautomaton inclusion gives Lang(sub) <= Lang(full) at budget
        keep = [e for e in fsa.elements if e.name != "e3"]
        act = {k: v for k, v in fsa.act.items() if k[1].name != "e3"}
        sub = PresheafAutomaton(
            frag=fsa.frag, elements=tuple(keep), act=act,
            start=fsa.start, accept=fsa.accept,
        )
        small = pa.lang_of(sub, 6)
        big = pa.lang_of(fsa, 6)
        assert set(small.tracks) <= set(big.tracks)
