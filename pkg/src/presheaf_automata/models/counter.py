"""Digraph automata with counters, and VASS recovery from them.

A counter automaton indexes a one-letter digraph category by a counter
monoid: configurations are vertices, edge instances carry the slack above
the vector's negative part.  Not every counter automaton arises from a
VASS; recovery checks that the counter shifts act freely and reports
NotAVassImage otherwise (quotienting or saturating counters breaks
freeness).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..dcat import EMPTY, MorId, ObjId, build_G, product_with_counter
from ..errors import NotAVassImage, NotComposable, NotInWindow, WindowOverflow
from ..presheaf import Element, PresheafAutomaton
from .vass import Vass, _neg, _pos


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vec_le(a, b):
    return all(x <= y for x, y in zip(a, b))


def _counters(bound):
    return itertools.product(*(range(b + 1) for b in bound))


def _name(base: str, ctr) -> str:
    return f"{base}#{','.join(map(str, ctr))}"


def vass_to_counter_auto(
    vass: Vass, elem_bound: tuple[int, ...], mor_bound: tuple[int, ...] | None = None
) -> PresheafAutomaton:
    """Encode a VASS as a one-letter digraph automaton with counters.

    Vertices are configurations, edges are edge instances; the sigma
    action of an edge instance lands on the source configuration raised by
    the vector's negative part, tau on the target raised by the positive
    part.  Actions that leave the element bound are clipped and recorded.
    """
    r = len(elem_bound)
    base = build_G(["a"])
    frag = product_with_counter(base, r, mor_bound if mor_bound is not None else elem_bound)
    point, letter = ObjId(EMPTY), ObjId("a")
    edge_names = {e: f"{e[0]}>{','.join(map(str, e[1]))}>{e[2]}" for e in vass.edges}

    elements: dict[tuple, Element] = {}
    for v in _counters(elem_bound):
        for q in vass.states:
            elements[(q, v)] = Element(_name(q, v), point)
        for e in vass.edges:
            elements[(e, v)] = Element(_name(edge_names[e], v), letter)

    zero = (0,) * r
    act: dict[tuple[MorId, Element], Element] = {}
    clipped: set[tuple[MorId, Element]] = set()

    def put(gen, key, target_key):
        if target_key in elements:
            act[(gen, elements[key])] = elements[target_key]
        else:
            clipped.add((gen, elements[key]))

    for gen in frag.generators:
        head, w = gen.tag[1], gen.tag[2]
        if head == ("sigma", "a"):
            for e in vass.edges:
                for v in _counters(elem_bound):
                    put(gen, (e, v), (e[0], _vec_add(_vec_add(v, _neg(e[1])), w)))
        elif head == ("tau", "a"):
            for e in vass.edges:
                for v in _counters(elem_bound):
                    put(gen, (e, v), (e[2], _vec_add(_vec_add(v, _pos(e[1])), w)))
        elif head == ("id",):
            if gen.tgt == point:
                for q in vass.states:
                    for v in _counters(elem_bound):
                        put(gen, (q, v), (q, _vec_add(v, w)))
            else:
                for e in vass.edges:
                    for v in _counters(elem_bound):
                        put(gen, (e, v), (e, _vec_add(v, w)))

    return PresheafAutomaton(
        frag=frag,
        elements=tuple(elements.values()),
        act=act,
        clipped=frozenset(clipped),
    )


def quotient_counter_example(n: int, m: int, cap: int) -> PresheafAutomaton:
    """A counter automaton that is not a VASS image.

    Obtained from a two-state, one-edge machine by identifying source
    configurations modulo n and saturating target configurations at m; the
    finite vertex fibre makes recovery impossible.
    """
    if n <= 0 or m <= 0:
        raise ValueError("n and m must be positive")
    base = build_G(["a"])
    frag = product_with_counter(base, 1, (cap,))
    point, letter = ObjId(EMPTY), ObjId("a")
    xs = {j: Element(_name("x", (j,)), point) for j in range(n)}
    ys = {j: Element(_name("y", (j,)), point) for j in range(m + 1)}
    vs = {k: Element(_name("v", (k,)), letter) for k in range(cap + 1)}

    act: dict[tuple[MorId, Element], Element] = {}
    clipped: set[tuple[MorId, Element]] = set()
    for gen in frag.generators:
        head, w = gen.tag[1], gen.tag[2]
        shift = w[0]
        if head == ("sigma", "a"):
            for k, v in vs.items():
                act[(gen, v)] = xs[(k + shift) % n]
        elif head == ("tau", "a"):
            for k, v in vs.items():
                act[(gen, v)] = ys[min(k + shift, m)]
        elif head == ("id",):
            if gen.tgt == point:
                for j, x in xs.items():
                    act[(gen, x)] = xs[(j + shift) % n]
                for j, y in ys.items():
                    act[(gen, y)] = ys[min(j + shift, m)]
            else:
                for k, v in vs.items():
                    if k + shift <= cap:
                        act[(gen, v)] = vs[k + shift]
                    else:
                        clipped.add((gen, v))

    elements = tuple(list(xs.values()) + list(ys.values()) + list(vs.values()))
    return PresheafAutomaton(
        frag=frag, elements=elements, act=act, clipped=frozenset(clipped)
    )


def counter_auto_to_vass(auto: PresheafAutomaton) -> Vass:
    """Recover the VASS whose encoding produced this counter automaton.

    The unit counter shifts must act injectively and without cycles, and
    every element must sit at a unique shift depth above a root; the roots
    are the zero-counter configurations.  Violations raise NotAVassImage.
    """
    frag = auto.frag
    r = sum(1 for g in frag.generators if g.tag[1] == ("id",) and g.src.payload == EMPTY)
    point = ObjId(EMPTY)
    units = []
    for j in range(r):
        e_j = tuple(1 if i == j else 0 for i in range(r))
        units.append(
            {
                obj: MorId(obj, obj, ("ct", ("id",), e_j))
                for obj in frag.objects
            }
        )

    shift_maps: list[dict[Element, Element]] = []
    for j in range(r):
        table = {}
        for x in auto.elements:
            gen = units[j][x.base]
            image = auto.act.get((gen, x))
            if image is not None:
                table[x] = image
        shift_maps.append(table)

    for j, table in enumerate(shift_maps):
        images: dict[Element, Element] = {}
        for x, y in table.items():
            if y in images:
                raise NotAVassImage(f"unit shift {j} is not injective at {y}")
            images[y] = x
        for x in table:
            node, steps = x, 0
            while node in table and steps <= len(table):
                node = table[node]
                steps += 1
                if node == x:
                    raise NotAVassImage(f"unit shift {j} has a cycle through {x}")

    shifted = {y for table in shift_maps for y in table.values()}
    roots = [x for x in auto.elements if x not in shifted]
    depth: dict[Element, tuple[int, ...]] = {}
    origin: dict[Element, Element] = {}
    zero = (0,) * r
    frontier = [(x, zero, x) for x in roots]
    while frontier:
        x, d, root = frontier.pop()
        if x in depth:
            if depth[x] != d or origin[x] != root:
                raise NotAVassImage(f"element {x} has inconsistent shift depth")
            continue
        depth[x] = d
        origin[x] = root
        for j, table in enumerate(shift_maps):
            y = table.get(x)
            if y is not None:
                d2 = tuple(c + (1 if i == j else 0) for i, c in enumerate(d))
                frontier.append((y, d2, root))

    if set(depth) != set(auto.elements):
        missing = sorted(set(auto.elements) - set(depth), key=lambda e: e.key)
        raise NotAVassImage(f"elements {missing[:3]} are not shift-reachable from a root")

    states = tuple(sorted(x.name.split("#")[0] for x in roots if x.base == point))
    sigma = None
    tau = None
    for g in frag.generators:
        if g.tag[1][0] == "sigma":
            sigma = g
        if g.tag[1][0] == "tau":
            tau = g
    edges = []
    for e0 in roots:
        if e0.base == point:
            continue
        try:
            s = auto.act_gen(sigma, e0)
            t = auto.act_gen(tau, e0)
        except (NotInWindow, NotComposable) as exc:  # bound too small
            raise WindowOverflow(f"cannot read edge {e0} at the window edge") from exc
        vec = tuple(b - a for a, b in zip(depth[s], depth[t]))
        edges.append((origin[s].name.split("#")[0], vec, origin[t].name.split("#")[0]))
    return Vass(states=states, edges=tuple(sorted(set(edges))))
