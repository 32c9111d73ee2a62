"""Small worked automata used by the test suite, demos and docs."""

from __future__ import annotations

from .dcat import EMPTY, DCatFragment, MorId, ObjId, build_G, build_precube
from .presheaf import Element, PresheafAutomaton


def two_state_fsa() -> PresheafAutomaton:
    """A two-state automaton over {a,b}: x --a--> y, y --b--> x, y --b--> y.

    Start x, accept y; its language is a, ab, aba, abb, abab, abba, abbb, ...
    The b-edge sources follow the category-of-elements picture (e2 runs
    from y back to x); see ``two_state_fsa_prose_variant`` for the other
    reading, which produces a different language.
    """
    frag = build_G(["a", "b"])
    v0 = ObjId(EMPTY)
    x = Element("x", v0)
    y = Element("y", v0)
    e1 = Element("e1", ObjId("a"))
    e2 = Element("e2", ObjId("b"))
    e3 = Element("e3", ObjId("b"))

    def mor(head, letter):
        return frag.mor_by_str(f"{head}[{letter}]:_->{letter}")

    act = {
        (mor("sigma", "a"), e1): x,
        (mor("tau", "a"), e1): y,
        (mor("sigma", "b"), e2): y,
        (mor("tau", "b"), e2): x,
        (mor("sigma", "b"), e3): y,
        (mor("tau", "b"), e3): y,
    }
    return PresheafAutomaton(
        frag=frag,
        elements=(x, y, e1, e2, e3),
        act=act,
        start=frozenset([x]),
        accept=frozenset([y]),
    )


def two_state_fsa_prose_variant() -> PresheafAutomaton:
    """Alternative fixture with both b-edges read as x->... sources.

    # (sigma_b: e2 -> x, tau_b: e2 -> x): kept for comparison only; the
    # shipped fixture above is the one whose language matches the worked
    # word list.
    """
    auto = two_state_fsa()
    frag = auto.frag
    x = auto.element("x")
    e2 = auto.element("e2")
    sigma_b = frag.mor_by_str("sigma[b]:_->b")
    act = dict(auto.act)
    act[(sigma_b, e2)] = x
    return PresheafAutomaton(
        frag=frag,
        elements=auto.elements,
        act=act,
        start=auto.start,
        accept=auto.accept,
    )


def square_with_tail(dmax: int = 2) -> PresheafAutomaton:
    """A filled square abcd with square cell r, plus an edge u from d to e.

    Cells: vertices a,b,c,d,e; edges p:a->b, q:a->c, s:b->d, t:c->d,
    u:d->e; one square r with faces d01=q, d02=p, d11=s, d12=t.
    Start a; accepts are the vertex e and the edge t.
    """
    frag = build_precube(dmax)
    v, ed, sq = ObjId(0), ObjId(1), ObjId(2)
    a, b, c, d, e = (Element(n, v) for n in "abcde")
    p, q, s, t, u = (Element(n, ed) for n in "pqstu")
    r = Element("r", sq)

    def gen(eps, i, src, tgt):
        return MorId(ObjId(src), ObjId(tgt), ("d", ((i, eps),)))

    d01, d11 = gen(0, 1, 0, 1), gen(1, 1, 0, 1)
    d01_2, d02_2 = gen(0, 1, 1, 2), gen(0, 2, 1, 2)
    d11_2, d12_2 = gen(1, 1, 1, 2), gen(1, 2, 1, 2)

    act = {
        (d01, p): a, (d11, p): b,
        (d01, q): a, (d11, q): c,
        (d01, s): b, (d11, s): d,
        (d01, t): c, (d11, t): d,
        (d01, u): d, (d11, u): e,
        (d01_2, r): q, (d02_2, r): p,
        (d11_2, r): s, (d12_2, r): t,
    }
    return PresheafAutomaton(
        frag=frag,
        elements=(a, b, c, d, e, p, q, s, t, u, r),
        act=act,
        start=frozenset([a]),
        accept=frozenset([e, t]),
    )


def unit_square(dmax: int = 2) -> PresheafAutomaton:
    """A single filled square: vertices a,b,c,d, edges p,q,r,s, cell u.

    p:a->b, q:a->c, r:c->d, s:b->d; faces of u: d01=q, d02=p, d11=s, d12=r.
    Start a, accept d.
    """
    frag = build_precube(dmax)
    v, ed, sq = ObjId(0), ObjId(1), ObjId(2)
    a, b, c, d = (Element(n, v) for n in "abcd")
    p, q, r, s = (Element(n, ed) for n in "pqrs")
    u = Element("u", sq)

    def gen(eps, i, src, tgt):
        return MorId(ObjId(src), ObjId(tgt), ("d", ((i, eps),)))

    d01, d11 = gen(0, 1, 0, 1), gen(1, 1, 0, 1)
    d01_2, d02_2 = gen(0, 1, 1, 2), gen(0, 2, 1, 2)
    d11_2, d12_2 = gen(1, 1, 1, 2), gen(1, 2, 1, 2)
    act = {
        (d01, p): a, (d11, p): b,
        (d01, q): a, (d11, q): c,
        (d01, r): c, (d11, r): d,
        (d01, s): b, (d11, s): d,
        (d01_2, u): q, (d02_2, u): p,
        (d11_2, u): s, (d12_2, u): r,
    }
    return PresheafAutomaton(
        frag=frag,
        elements=(a, b, c, d, p, q, r, s, u),
        act=act,
        start=frozenset([a]),
        accept=frozenset([d]),
    )


def cube_mor(frag: DCatFragment, src: int, tgt: int, slots) -> MorId:
    """Convenience lookup for precube morphisms by slot list."""
    tag = ("d", tuple(slots)) if slots else ("id",)
    for m in frag.hom(ObjId(src), ObjId(tgt)):
        if m.tag == tag:
            return m
    raise KeyError(f"no morphism {tag} from [{src}] to [{tgt}]")
