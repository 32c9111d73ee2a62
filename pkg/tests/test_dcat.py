from __future__ import annotations

import itertools

import pytest

import presheaf_automata as pa
from presheaf_automata.dcat import (
    EMPTY,
    DCatFragment,
    MorId,
    ObjId,
    build_G,
    build_labeled_precube,
    build_precube,
    build_V,
    identity,
    product_with_counter,
    validate_fragment,
)
from presheaf_automata.errors import (
    AlphabetContainsEmptySymbol,
    NotComposable,
    NotInWindow,
)
from presheaf_automata.fixtures import cube_mor


# -- independent oracle for precube hom sets ---------------------------------
#
# A generator word acts on symbolic coordinate tuples by insertion; two
# words are equal in the category iff they act identically.  This never
# touches MorId tags or the composition table.


def _insert(tup, pos, eps):
    return tup[: pos - 1] + (eps,) + tup[pos - 1:]


def cube_words_oracle(m: int, n: int) -> set:
    base = tuple(f"x{i}" for i in range(m))
    results = set()

    def walk(tup, level):
        if level == n:
            results.add(tup)
            return
        for pos in range(1, level + 2):
            for eps in (0, 1):
                walk(_insert(tup, pos, eps), level + 1)

    walk(base, m)
    return results


class TestBuildG:
    def test_two_letters(self, g_ab):
        assert len(g_ab.objects) == 3
        assert len(g_ab.morphisms) == 7
        assert validate_fragment(g_ab).ok

    def test_empty_alphabet(self):
        g = build_G([])
        assert len(g.objects) == 1
        assert len(g.morphisms) == 1
        assert validate_fragment(g).ok

    def test_hom_counts(self):
        g = build_G(["a"])
        empty, a = ObjId(EMPTY), ObjId("a")
        assert [str(m) for m in g.hom(empty, a)] == ["sigma[a]:_->a", "tau[a]:_->a"]
        assert g.hom(a, empty) == []
        assert len(g.hom(empty, empty)) == 1

    def test_reserved_symbol(self):
        with pytest.raises(AlphabetContainsEmptySymbol):
            build_G(["a", EMPTY])

    def test_polarity_flip_is_still_a_d_structure(self):
        # Reassigning sigma to the backmorphisms yields another legal
        # d-structure (nothing composes non-trivially), so the axioms
        # accept it; only the builder contract pins the polarity.
        g = build_G(["a"])
        sigma = g.mor_by_str("sigma[a]:_->a")
        flipped = DCatFragment(
            name="flipped",
            objects=g.objects,
            morphisms=g.morphisms,
            composition=dict(g.composition),
            for_morphisms=g.for_morphisms - {sigma},
            back_morphisms=g.back_morphisms | {sigma},
            window=g.window,
        )
        assert validate_fragment(flipped).ok
        assert sigma in g.for_morphisms and sigma not in g.back_morphisms

    def test_polarity_violation_is_reported(self, g_ab):
        broken = DCatFragment(
            name="broken",
            objects=g_ab.objects,
            morphisms=g_ab.morphisms,
            composition=dict(g_ab.composition),
            for_morphisms=g_ab.for_morphisms - {identity(ObjId("a"))},
            back_morphisms=g_ab.back_morphisms,
            window=g_ab.window,
        )
        report = validate_fragment(broken)
        assert not report.ok
        assert "polarity-identity-for" in report.kinds()


class TestCompose:
    def test_normal_form_composite(self, cube2):
        d01 = cube_mor(cube2, 0, 1, [(1, 0)])
        d02 = cube_mor(cube2, 1, 2, [(2, 0)])
        assert cube2.compose(d02, d01) == cube_mor(cube2, 0, 2, [(1, 0), (2, 0)])

    def test_unit_law(self, cube2):
        d01 = cube_mor(cube2, 0, 1, [(1, 0)])
        assert cube2.compose(d01, identity(ObjId(0))) == d01
        assert cube2.compose(identity(ObjId(1)), d01) == d01

    def test_mixed_relation(self, cube2):
        # two factorizations of the same corner inclusion
        left = cube2.compose(cube_mor(cube2, 1, 2, [(2, 1)]), cube_mor(cube2, 0, 1, [(1, 0)]))
        right = cube2.compose(cube_mor(cube2, 1, 2, [(1, 0)]), cube_mor(cube2, 0, 1, [(1, 1)]))
        assert left == right == cube_mor(cube2, 0, 2, [(1, 0), (2, 1)])

    def test_not_composable(self, cube2):
        d01 = cube_mor(cube2, 0, 1, [(1, 0)])
        with pytest.raises(NotComposable):
            cube2.compose(d01, d01)

    def test_counter_overflow(self):
        prod = product_with_counter(build_G(["a"]), 1, (1,))
        shift = MorId(ObjId(EMPTY), ObjId(EMPTY), ("ct", ("id",), (1,)))
        with pytest.raises(NotInWindow):
            prod.compose(shift, shift)


class TestPrecube:
    @pytest.mark.parametrize("dmax", [0, 1, 2, 3])
    def test_valid(self, dmax):
        assert validate_fragment(build_precube(dmax)).ok

    @pytest.mark.parametrize("m,n", [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)])
    def test_hom_counts_match_word_oracle(self, m, n):
        frag = build_precube(3)
        assert len(frag.hom(ObjId(m), ObjId(n))) == len(cube_words_oracle(m, n))

    def test_codimension_one(self):
        frag = build_precube(3)
        for n in range(1, 4):
            assert len(frag.hom(ObjId(n - 1), ObjId(n))) == 2 * n

    def test_no_endomorphisms(self, cube2):
        for n in range(3):
            assert [str(m) for m in cube2.hom(ObjId(n), ObjId(n))] == ["id:" + f"{n}->{n}"]

    def test_corner_count(self, cube2):
        assert len(cube2.hom(ObjId(0), ObjId(2))) == 4

    def test_decomposition_round_trip(self, cube2):
        for m in cube2.morphisms:
            assert cube2.compose_word(cube2.decomposition[m], m.src) == m

    def test_polarity(self, cube2):
        for m in cube2.morphisms:
            values = {eps for _, eps in m.tag[1]} if not m.is_identity else set()
            assert cube2.is_for(m) == (values <= {0})
            assert cube2.is_back(m) == (values <= {1})


class TestLabeledPrecube:
    def test_valid(self):
        assert validate_fragment(build_labeled_precube(["a", "b"], 2)).ok

    def test_word_faces(self):
        frag = build_labeled_precube(["a", "b"], 2)
        ab = ObjId(("a", "b"))
        to_b = {str(m) for m in frag.hom(ObjId(("b",)), ab)}
        to_a = {str(m) for m in frag.hom(ObjId(("a",)), ab)}
        assert to_b == {"d[1^0]:(b)->(a,b)", "d[1^1]:(b)->(a,b)"}
        assert to_a == {"d[2^0]:(a)->(a,b)", "d[2^1]:(a)->(a,b)"}

    def test_empty_word_only_identity(self):
        frag = build_labeled_precube(["a"], 2)
        eps = ObjId(())
        assert len(frag.hom(eps, eps)) == 1

    def test_one_letter_matches_precube(self):
        lab = build_labeled_precube(["a"], 2)
        cub = build_precube(2)
        to_word = {n: ObjId(("a",) * n) for n in range(3)}
        assert len(lab.objects) == len(cub.objects)
        for m in range(3):
            for n in range(3):
                lab_hom = lab.hom(to_word[m], to_word[n])
                cub_hom = cub.hom(ObjId(m), ObjId(n))
                assert [x.tag for x in lab_hom] == [x.tag for x in cub_hom]
        # composition tables agree under the relabeling
        relabel = {
            m: MorId(to_word[m.src.payload], to_word[m.tgt.payload], m.tag)
            for m in cub.morphisms
        }
        for (g, f), gf in cub.composition.items():
            assert lab.composition[(relabel[g], relabel[f])] == relabel[gf]

    def test_decomposition_round_trip(self):
        frag = build_labeled_precube(["a", "b"], 2)
        for m in frag.morphisms:
            assert frag.compose_word(frag.decomposition[m], m.src) == m


class TestProductWithCounter:
    def test_valid_and_associative(self):
        prod = product_with_counter(build_G(["a"]), 1, (2,))
        # validate_fragment checks associativity on every in-window triple
        assert validate_fragment(prod).ok

    def test_counter_addition(self):
        prod = product_with_counter(build_G(["a"]), 1, (3,))
        sigma1 = MorId(ObjId(EMPTY), ObjId("a"), ("ct", ("sigma", "a"), (1,)))
        shift2 = MorId(ObjId(EMPTY), ObjId(EMPTY), ("ct", ("id",), (2,)))
        assert prod.compose(sigma1, shift2).tag == ("ct", ("sigma", "a"), (3,))

    def test_identity_pair_is_identity(self):
        prod = product_with_counter(build_G(["a"]), 1, (1,))
        assert identity(ObjId(EMPTY)) in set(prod.morphisms)

    def test_hom_count_multiplies(self):
        g = build_G(["a"])
        prod = product_with_counter(g, 1, (2,))
        empty, a = ObjId(EMPTY), ObjId("a")
        assert len(prod.hom(empty, a)) == len(g.hom(empty, a)) * 3

    def test_polarity_zero_counter_only(self):
        prod = product_with_counter(build_G(["a"]), 1, (2,))
        for m in prod.for_morphisms | prod.back_morphisms:
            if not m.is_identity:
                assert m.tag[2] == (0,)


class TestBuildV:
    def test_valid(self):
        assert validate_fragment(build_V(1, (3,), [(2,), (-1,)])).ok

    def test_positive_vector_sources(self):
        frag = build_V(1, (3,), [(2,)])
        fors = {
            (m.src.payload, m.tgt.payload)
            for m in frag.for_morphisms
            if not m.is_identity
        }
        backs = {
            (m.src.payload, m.tgt.payload)
            for m in frag.back_morphisms
            if not m.is_identity
        }
        assert fors == {((EMPTY, (v,)), ((2,), (v,))) for v in range(4)}
        assert backs == {((EMPTY, (v + 2,)), ((2,), (v,))) for v in range(2)}

    def test_zero_vector_sources_coincide(self):
        frag = build_V(1, (2,), [(0,)])
        for v in range(3):
            tgt = ObjId(((0,), (v,)))
            fors = [m for m in frag.for_morphisms if m.tgt == tgt and not m.is_identity]
            backs = [m for m in frag.back_morphisms if m.tgt == tgt and not m.is_identity]
            assert {m.src for m in fors} == {m.src for m in backs} == {ObjId((EMPTY, (v,)))}

    def test_negative_vector_sources(self):
        frag = build_V(1, (3,), [(-1,)])
        fors = {
            (m.src.payload[1], m.tgt.payload[1])
            for m in frag.for_morphisms
            if not m.is_identity
        }
        assert fors == {((v + 1,), (v,)) for v in range(3)}

    def test_polarities_disjoint_except_identities(self):
        frag = build_V(1, (2,), [(1,), (-1,)])
        both = frag.for_morphisms & frag.back_morphisms
        assert all(m.is_identity for m in both)

    def test_window_records_omissions(self):
        frag = build_V(1, (1,), [(2,)])
        assert frag.window.omitted
        assert not frag.window.morphisms_complete
