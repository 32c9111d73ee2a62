from __future__ import annotations

from collections import Counter

import pytest

import presheaf_automata as pa
from presheaf_automata.dcat import EMPTY, MorId, ObjId, identity
from presheaf_automata.errors import NotComposable, WindowOverflow
from presheaf_automata.fixtures import cube_mor, two_state_fsa_prose_variant
from presheaf_automata.morphsearch import SearchOptions, find_morphisms
from presheaf_automata.presheaf import (
    Element,
    Presentation,
    PresheafAutomaton,
    ShapeMorphism,
    act_path,
    co_act,
    coproduct,
    materialize,
    presentation_of_elements,
    representable,
    validate_automaton,
)


class TestValidation:
    def test_fsa_fixture(self, fsa):
        assert validate_automaton(fsa).ok

    def test_square_fixture(self, oldsq):
        assert validate_automaton(oldsq).ok

    def test_empty_automaton(self, g_ab):
        auto = PresheafAutomaton(frag=g_ab, elements=(), act={})
        assert validate_automaton(auto).ok

    def test_rebinding_a_face_breaks_an_identity(self, oldsq):
        d02 = MorId(ObjId(1), ObjId(2), ("d", ((2, 0),)))
        act = dict(oldsq.act)
        act[(d02, oldsq.element("r"))] = oldsq.element("q")
        bad = PresheafAutomaton(
            frag=oldsq.frag, elements=oldsq.elements, act=act,
            start=oldsq.start, accept=oldsq.accept,
        )
        report = validate_automaton(bad)
        assert not report.ok
        assert any("r" in str(v.witness) for v in report.violations)

    def test_missing_action_reported(self, fsa):
        act = dict(fsa.act)
        del act[(fsa.frag.mor_by_str("tau[a]:_->a"), fsa.element("e1"))]
        bad = PresheafAutomaton(frag=fsa.frag, elements=fsa.elements, act=act)
        assert "action-missing" in validate_automaton(bad).kinds()

    def test_prose_variant_is_also_valid_but_different(self, fsa):
        variant = two_state_fsa_prose_variant()
        assert validate_automaton(variant).ok
        sigma_b = fsa.frag.mor_by_str("sigma[b]:_->b")
        assert variant.act[(sigma_b, variant.element("e2"))].name == "x"
        assert fsa.act[(sigma_b, fsa.element("e2"))].name == "y"


class TestActions:
    def test_act_path_empty_word(self, fsa):
        x = fsa.element("x")
        assert act_path(fsa, [], x) == x

    def test_act_path_two_faces(self, oldsq):
        word = [
            MorId(ObjId(1), ObjId(2), ("d", ((1, 0),))),
            MorId(ObjId(0), ObjId(1), ("d", ((1, 0),))),
        ]
        assert act_path(oldsq, word, oldsq.element("r")).name == "a"

    def test_act_sigma(self, fsa):
        sigma_a = fsa.frag.mor_by_str("sigma[a]:_->a")
        assert fsa.act_gen(sigma_a, fsa.element("e1")).name == "x"

    def test_act_path_requires_composability(self, fsa):
        sigma_a = fsa.frag.mor_by_str("sigma[a]:_->a")
        with pytest.raises(NotComposable):
            act_path(fsa, [sigma_a], fsa.element("x"))

    def test_functoriality_on_parallel_words(self, oldsq):
        # any two factorizations of the same composite act identically
        frag = oldsq.frag
        for (g, f), gf in frag.composition.items():
            if g.is_identity or f.is_identity:
                continue
            for x in oldsq.elements_over(g.tgt):
                stepwise = oldsq.act_gen(f, oldsq.act_gen(g, x))
                assert stepwise == oldsq.act_morphism(gf, x)

    def test_co_act(self, fsa):
        sigma_a = fsa.frag.mor_by_str("sigma[a]:_->a")
        assert [e.name for e in co_act(fsa, sigma_a, fsa.element("x"))] == ["e1"]

    def test_co_act_empty_automaton(self, g_ab):
        auto = PresheafAutomaton(frag=g_ab, elements=(), act={})
        sigma_a = g_ab.mor_by_str("sigma[a]:_->a")
        assert co_act(auto, sigma_a, Element("ghost", ObjId(EMPTY))) == []

    def test_co_act_face(self, oldsq):
        d01 = MorId(ObjId(1), ObjId(2), ("d", ((1, 0),)))
        assert [e.name for e in co_act(oldsq, d01, oldsq.element("q"))] == ["r"]


class TestRepresentable:
    def test_g_letter(self, g_ab):
        rep = representable(g_ab, ObjId("a"))
        assert Counter(e.base.payload for e in rep.elements) == {EMPTY: 2, "a": 1}
        assert validate_automaton(rep).ok

    def test_g_point(self, g_ab):
        assert len(representable(g_ab, ObjId(EMPTY)).elements) == 1

    def test_square_cell(self, cube2):
        rep = representable(cube2, ObjId(2))
        assert Counter(e.base.payload for e in rep.elements) == {0: 4, 1: 4, 2: 1}
        assert validate_automaton(rep).ok

    def test_out_of_window(self, cube2):
        with pytest.raises(WindowOverflow):
            representable(cube2, ObjId(5))


class TestMaterialize:
    def test_trivial_shape_gives_representable(self, g_ab):
        pres = Presentation(
            objects=("star",), morphisms=(), g_ob={"star": ObjId("a")}, g_mor={}
        )
        built = materialize(pres, g_ab)
        rep = representable(g_ab, ObjId("a"))
        assert Counter(e.base for e in built.elements) == Counter(
            e.base for e in rep.elements
        )
        opts = SearchOptions(preserve_marks=False, bijective=True, injective=True, limit=1)
        assert find_morphisms(built, rep, opts)

    @pytest.mark.parametrize("fixture", ["fsa", "oldsq"])
    def test_density(self, fixture, request):
        auto = request.getfixturevalue(fixture)
        rebuilt = materialize(presentation_of_elements(auto), auto.frag)
        assert validate_automaton(rebuilt).ok
        opts = SearchOptions(preserve_marks=False, bijective=True, injective=True, limit=1)
        assert find_morphisms(rebuilt, auto, opts)

    def test_rectangle_track_counts(self, cube2):
        # linear presentation of the five-step worked path
        m = lambda s, t, slots: cube_mor(cube2, s, t, slots)
        objects = tuple(f"p{k}" for k in range(6))
        g_ob = {
            "p0": ObjId(0), "p1": ObjId(1), "p2": ObjId(2),
            "p3": ObjId(1), "p4": ObjId(2), "p5": ObjId(0),
        }
        morphisms = (
            ShapeMorphism("s0", "p0", "p1"),
            ShapeMorphism("s1", "p1", "p2"),
            ShapeMorphism("t2", "p3", "p2"),
            ShapeMorphism("s3", "p3", "p4"),
            ShapeMorphism("t4", "p5", "p4"),
        )
        g_mor = {
            "s0": m(0, 1, [(1, 0)]),
            "s1": m(1, 2, [(2, 0)]),
            "t2": m(1, 2, [(1, 1)]),
            "s3": m(1, 2, [(1, 0)]),
            "t4": m(0, 2, [(1, 1), (2, 1)]),
        }
        built = materialize(
            Presentation(objects=objects, morphisms=morphisms, g_ob=g_ob, g_mor=g_mor),
            cube2,
        )
        assert Counter(e.base.payload for e in built.elements) == {0: 6, 1: 7, 2: 2}
        assert validate_automaton(built).ok

    def test_invalid_presentation_rejected(self, g_ab):
        pres = Presentation(
            objects=("e",), morphisms=(), g_ob={"e": ObjId("zzz")}, g_mor={}
        )
        with pytest.raises(WindowOverflow):
            materialize(pres, g_ab)

    def test_relation_validation(self, cube2):
        m = lambda s, t, slots: cube_mor(cube2, s, t, slots)
        pres = Presentation(
            objects=("v", "e", "sq"),
            morphisms=(
                ShapeMorphism("f", "v", "e"),
                ShapeMorphism("g", "e", "sq"),
                ShapeMorphism("h", "v", "sq"),
            ),
            g_ob={"v": ObjId(0), "e": ObjId(1), "sq": ObjId(2)},
            g_mor={
                "f": m(0, 1, [(1, 0)]),
                "g": m(1, 2, [(2, 0)]),
                "h": m(0, 2, [(1, 0), (2, 0)]),
            },
            relations=((("f", "g"), ("h",)),),
        )
        assert pres.validate(cube2).ok
        broken = Presentation(
            objects=pres.objects,
            morphisms=pres.morphisms,
            g_ob=pres.g_ob,
            g_mor={**pres.g_mor, "h": m(0, 2, [(1, 1), (2, 1)])},
            relations=pres.relations,
        )
        assert "relation-broken" in broken.validate(cube2).kinds()


class TestCoproduct:
    def test_empty(self, g_ab):
        auto = coproduct([], frag=g_ab)
        assert auto.elements == ()

    def test_singleton_iso(self, fsa):
        one = coproduct([fsa])
        opts = SearchOptions(preserve_marks=True, bijective=True, injective=True, limit=1)
        assert find_morphisms(one, fsa, opts)

    def test_counts_add(self, fsa, g_ab):
        rep = representable(g_ab, ObjId("a"))
        both = coproduct([fsa, rep])
        assert len(both.elements) == len(fsa.elements) + len(rep.elements)
        assert validate_automaton(both).ok
