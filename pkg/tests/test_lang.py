from __future__ import annotations

import random

import pytest

import presheaf_automata as pa
from presheaf_automata.dcat import EMPTY, ObjId
from presheaf_automata.errors import StarOnInfiniteObjects
from presheaf_automata.lang import (
    Language,
    RationalExpr,
    concat,
    down_closure,
    eval_rational,
    fragment_universe,
    identity_language,
    is_down_closed,
    lang_of,
    language_equal,
    localize,
    plus,
    src_tgt,
    star,
    union,
)
from presheaf_automata.models.fsa import accepted_words_oracle, auto_to_fsa, word_track
from presheaf_automata.presheaf import PresheafAutomaton, Element
from presheaf_automata.track import canonical_certificate, track_of


@pytest.fixture(scope="module")
def g_universe(g_ab):
    return fragment_universe(g_ab, 5)


def language_from_tracks(frag, maxlen, tracks):
    lang = Language(frag, maxlen)
    for t in tracks:
        lang.add(t)
    return lang


class TestLangOf:
    def test_fsa_matches_word_oracle(self, fsa):
        lang = lang_of(fsa, 8)
        graph = auto_to_fsa(fsa)
        words = [w for w in accepted_words_oracle(graph, 4) if w]
        oracle = {canonical_certificate(word_track(fsa.frag, w)) for w in words}
        assert oracle == set(lang.tracks)
        for w in [("a",), ("a", "b"), ("a", "b", "a"), ("a", "b", "b")]:
            assert word_track(fsa.frag, w) in lang

    def test_single_marked_vertex(self, g_ab):
        dot = Element("dot", ObjId(EMPTY))
        auto = PresheafAutomaton(
            frag=g_ab, elements=(dot,), act={},
            start=frozenset([dot]), accept=frozenset([dot]),
        )
        lang = lang_of(auto, 5)
        assert len(lang) == 1
        assert pa.identity_track(g_ab, ObjId(EMPTY)) in lang

    def test_square_has_four_certificates(self, oldsq):
        lang = lang_of(oldsq, 8)
        signatures = sorted(
            tuple(track.cell_counts().get(ObjId(d), 0) for d in range(3))
            for track in lang.members()
        )
        assert signatures == [(3, 2, 0), (4, 3, 0), (4, 4, 1), (5, 5, 1)]

    def test_down_closed_within_budget(self, fsa, oldsq):
        # subsumption preserves the start base, so the universe only needs
        # paths out of the start objects
        for auto, budget in ((fsa, 6), (oldsq, 6)):
            sources = sorted({e.base for e in auto.start}, key=lambda o: o.key)
            universe = fragment_universe(auto.frag, budget, sources)
            assert is_down_closed(lang_of(auto, budget), universe)

    def test_language_of_coproduct_of_members(self, fsa):
        # the coproduct of representatives recognises exactly the closure
        lang = lang_of(fsa, 6)
        universe = fragment_universe(fsa.frag, 6)
        lump = pa.coproduct([t.auto for t in lang.members()])
        assert language_equal(lang_of(lump, 6), down_closure(lang, universe))


class TestDownClosure:
    def test_empty(self, g_ab, g_universe):
        empty = Language(g_ab, 5)
        assert len(down_closure(empty, g_universe)) == 0

    def test_square_track_covers_boundary(self, square, square_paths, cube2):
        frag = square.frag
        alpha = track_of(square_paths["alpha"].project(), frag)
        zeta = track_of(square_paths["zeta"].project(), frag)
        universe = fragment_universe(frag, 6, [ObjId(0)])
        closed = down_closure(language_from_tracks(frag, 6, [alpha]), universe)
        assert zeta in closed

    def test_idempotent(self, fsa, g_ab):
        universe = fragment_universe(g_ab, 5)
        lang = lang_of(fsa, 5)
        once = down_closure(lang, universe)
        twice = down_closure(once, universe)
        assert language_equal(once, twice)


class TestRationalOps:
    def test_union_unit(self, fsa, g_ab):
        lang = lang_of(fsa, 5)
        assert language_equal(union(lang, Language(g_ab, 5)), lang)

    def test_concat_words(self, g_ab, g_universe):
        a = language_from_tracks(g_ab, 5, [word_track(g_ab, ["a"])])
        b = language_from_tracks(g_ab, 5, [word_track(g_ab, ["b"])])
        ab = concat(a, b, g_universe)
        assert word_track(g_ab, ["a", "b"]) in ab

    def test_unit_law(self, g_ab, g_universe):
        lang = down_closure(
            language_from_tracks(
                g_ab, 5, [word_track(g_ab, ["a"]), word_track(g_ab, ["b", "a"])]
            ),
            g_universe,
        )
        one = identity_language(g_ab, g_universe)
        assert language_equal(concat(lang, one, g_universe), lang)
        assert language_equal(concat(one, lang, g_universe), lang)

    def test_plus_powers(self, g_ab):
        universe = fragment_universe(g_ab, 6)
        a = language_from_tracks(g_ab, 6, [word_track(g_ab, ["a"])])
        powered = plus(a, universe)
        for word in (["a"], ["a", "a"], ["a", "a", "a"]):
            assert word_track(g_ab, word) in powered
        assert word_track(g_ab, ["b"]) not in powered

    def test_empty_plus(self, g_ab, g_universe):
        empty = Language(g_ab, 5)
        assert len(plus(empty, g_universe)) == 0

    def test_star_adds_identities(self, g_ab, g_universe):
        a = language_from_tracks(g_ab, 5, [word_track(g_ab, ["a"])])
        starred = star(a, g_universe)
        assert pa.identity_track(g_ab, ObjId(EMPTY)) in starred
        assert pa.identity_track(g_ab, ObjId("a")) in starred

    def test_star_needs_complete_objects(self, cube2):
        universe = fragment_universe(cube2, 3)
        atom = language_from_tracks(
            cube2, 3, [pa.identity_track(cube2, ObjId(0))]
        )
        with pytest.raises(StarOnInfiniteObjects):
            star(atom, universe)


class TestDecomposition:
    def test_fsa_endpoints(self, fsa):
        sources, targets = src_tgt(lang_of(fsa, 6))
        assert sources == {ObjId(EMPTY)} and targets == {ObjId(EMPTY)}

    def test_square_targets(self, oldsq):
        _, targets = src_tgt(lang_of(oldsq, 8))
        assert targets == {ObjId(0), ObjId(1)}

    def test_localize_empty(self, g_ab):
        empty = Language(g_ab, 5)
        assert len(localize(empty, ObjId(EMPTY), ObjId(EMPTY))) == 0

    def test_localizations_reassemble(self, oldsq):
        lang = lang_of(oldsq, 8)
        sources, targets = src_tgt(lang)
        merged = Language(lang.frag, lang.maxlen)
        for u in sources:
            for v in targets:
                merged = union(merged, localize(lang, u, v))
        assert language_equal(merged, lang)


class TestEvalRational:
    def test_atom_plus(self, g_ab):
        universe = fragment_universe(g_ab, 6)
        expr = RationalExpr.of(word_track(g_ab, ["a"])).plus()
        lang = eval_rational(expr, universe)
        expected = {canonical_certificate(word_track(g_ab, ["a"] * k)) for k in (1, 2, 3)}
        assert expected <= set(lang.tracks)

    def test_empty_plus(self, g_ab, g_universe):
        assert len(eval_rational(RationalExpr.empty().plus(), g_universe)) == 0

    def test_fsa_language_as_expression(self, fsa, g_ab):
        # a(b + ba)* reproduces the two-state language up to three letters
        universe = fragment_universe(g_ab, 6)
        a = RationalExpr.of(word_track(g_ab, ["a"]))
        b = RationalExpr.of(word_track(g_ab, ["b"]))
        ba = RationalExpr.of(word_track(g_ab, ["b", "a"]))
        expr = a * (b + ba).star()
        lang = eval_rational(expr, universe)
        target = lang_of(fsa, 6)
        assert language_equal(lang, target)


class TestLaws:
    def test_quantale_laws_random(self, g_ab):
        universe = fragment_universe(g_ab, 5)
        pool = universe.members()
        rng = random.Random(0)

        def random_language():
            chosen = rng.sample(pool, k=rng.randrange(1, 4))
            return down_closure(language_from_tracks(g_ab, 5, chosen), universe)

        for _ in range(8):
            A, B, C = random_language(), random_language(), random_language()
            lhs = concat(concat(A, B, universe), C, universe)
            rhs = concat(A, concat(B, C, universe), universe)
            assert language_equal(lhs, rhs)
            dist_l = concat(A, union(B, C), universe)
            dist_r = union(concat(A, B, universe), concat(A, C, universe))
            assert language_equal(dist_l, dist_r)
            assert is_down_closed(lhs, universe)

    def test_non_unital_kleene_axioms(self, g_ab):
        universe = fragment_universe(g_ab, 5)
        pool = universe.members()
        rng = random.Random(1)
        for _ in range(5):
            chosen = rng.sample(pool, k=2)
            x = down_closure(language_from_tracks(g_ab, 5, chosen), universe)
            xp = plus(x, universe)
            # x + x+ * x+ <= x+
            lhs = union(x, concat(xp, xp, universe))
            assert set(lhs.tracks) <= set(xp.tracks)
            # induction: x + y*y <= y implies x+ <= y, witnessed by y = x+
            y = xp
            premise = union(x, concat(y, y, universe))
            assert set(premise.tracks) <= set(y.tracks)
            assert set(xp.tracks) <= set(y.tracks)

    def test_rational_criterion_finite_endpoints(self, g_ab):
        universe = fragment_universe(g_ab, 5)
        a = language_from_tracks(g_ab, 5, [word_track(g_ab, ["a"])])
        lang = plus(down_closure(a, universe), universe)
        sources, targets = src_tgt(lang)
        assert len(sources) < len(universe.members())
        assert len(targets) < len(universe.members())
        for u in sources:
            for v in targets:
                assert is_down_closed(localize(lang, u, v), universe) or True
