"""Labelled Petri nets as higher-dimensional automata with counters.

The translation follows the span presentation: one shape object per
admissible transition tuple, one apex per (tuple, slot, value) whose two
legs add the slot transition's consumption or production to the counter
and delete the slot from the word.  Restricting tuples to pairwise
distinct transitions (no autoconcurrency) or to a parallelism cap keeps
the shape finite for every net.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..dcat import DCatFragment, MorId, ObjId, build_labeled_precube, identity, product_with_counter
from ..errors import FullModeInfinite, WindowOverflow
from ..path import DOWN, UP, enumerate_paths
from ..presheaf import Element, Presentation, PresheafAutomaton, ShapeMorphism, materialize


@dataclass(eq=False)
class PetriNet:
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    flows: frozenset[tuple[str, str]]
    labels: Mapping[str, str]

    def __post_init__(self):
        if set(self.places) & set(self.transitions):
            raise ValueError("places and transitions must use distinct names")
        known = set(self.places) | set(self.transitions)
        for a, b in self.flows:
            if a not in known or b not in known:
                raise ValueError(f"flow {(a, b)} uses an unknown node")
            if (a in self.places) == (b in self.places):
                raise ValueError(f"flow {(a, b)} must join a place and a transition")
        for t in self.transitions:
            if t not in self.labels:
                raise ValueError(f"transition {t} has no label")

    def consumption(self, t: str) -> tuple[int, ...]:
        return tuple(1 if (p, t) in self.flows else 0 for p in self.places)

    def production(self, t: str) -> tuple[int, ...]:
        return tuple(1 if (t, p) in self.flows else 0 for p in self.places)


@dataclass(frozen=True)
class Blocked:
    at: int
    transition: str


def petri_fire_oracle(net: PetriNet, marking: tuple[int, ...], seq: Iterable[str]):
    """Token game: fold firing over the sequence, Blocked on first disable."""
    m = tuple(marking)
    for i, t in enumerate(seq):
        a, b = net.consumption(t), net.production(t)
        if any(x < y for x, y in zip(m, a)):
            return Blocked(i, t)
        m = tuple(x - y + z for x, y, z in zip(m, a, b))
    return m


def firing_sequences(net: PetriNet, marking: tuple[int, ...], maxlen: int) -> list[tuple[str, ...]]:
    """All enabled firing sequences up to the length bound."""
    out: list[tuple[str, ...]] = []

    def walk(m, seq):
        out.append(seq)
        if len(seq) >= maxlen:
            return
        for t in sorted(net.transitions):
            nxt = petri_fire_oracle(net, m, [t])
            if not isinstance(nxt, Blocked):
                walk(nxt, seq + (t,))

    walk(tuple(marking), ())
    return out


def _tuples(net: PetriNet, mode: str, d: int, dim_bound: int):
    cap = dim_bound
    if mode == "nac":
        cap = min(cap, len(net.transitions))
    if mode == "le_d":
        cap = min(cap, d)
    for n in range(cap + 1):
        for combo in itertools.product(sorted(net.transitions), repeat=n):
            if mode == "nac" and len(set(combo)) != n:
                continue
            yield combo


def _tuple_name(combo: tuple[str, ...]) -> str:
    return "w:" + "|".join(combo)


def _apex_name(combo, i, eps) -> str:
    return f"x:{'|'.join(combo)};{i};{eps}"


@dataclass(eq=False)
class HdacTranslation:
    presentation: Presentation
    automaton: PresheafAutomaton
    frag: DCatFragment
    net: PetriNet
    counter_bound: tuple[int, ...]
    tuple_elements: Mapping[tuple, Element] = field(default_factory=dict)

    def decode(self) -> dict[Element, tuple]:
        return {el: key for key, el in self.tuple_elements.items()}


def petri_to_hdac(
    net: PetriNet,
    mode: str = "nac",
    d: int = 1,
    counter_bound: tuple[int, ...] | None = None,
    dim_bound: int | None = None,
    m0: tuple[int, ...] | None = None,
    accepts: Iterable[tuple[tuple[str, ...], tuple[int, ...]]] = (),
    restrict_by_labels: bool = False,
) -> HdacTranslation:
    """Translate a net into a counter HDA via its span presentation.

    ``mode`` is "nac" (pairwise distinct transitions), "le_d" (tuples of
    at most d transitions) or "full"; full mode has no finite shape and
    demands an explicit ``dim_bound``.  The presentation is materialized
    inside the window given by ``counter_bound`` on counters and the tuple
    length cap on words.  ``restrict_by_labels`` switches the
    no-autoconcurrency restriction from distinct transitions to distinct
    labels.

    Start mark: the empty tuple at the initial marking ``m0`` (the
    translation itself fixes no marks).  ``accepts`` lists (tuple, counter)
    pairs to mark as accepting.
    """
    if mode not in ("nac", "le_d", "full"):
        raise ValueError("mode must be nac, le_d or full")
    if mode == "full" and dim_bound is None:
        raise FullModeInfinite(
            "the unrestricted translation is not of finite type; give dim_bound"
        )
    if mode == "le_d" and d > len(net.transitions):
        d = len(net.transitions)
    if counter_bound is None:
        counter_bound = tuple(3 for _ in net.places)
    if dim_bound is None:
        dim_bound = len(net.transitions) if mode == "nac" else d
    counter_bound = tuple(counter_bound)

    needed = [net.consumption(t) for t in net.transitions]
    needed += [net.production(t) for t in net.transitions]
    for vec in needed:
        if not all(x <= b for x, b in zip(vec, counter_bound)):
            raise WindowOverflow(
                "counter_bound must dominate every consumption and production vector"
            )

    alphabet = sorted(set(net.labels.values()))
    base = build_labeled_precube(alphabet, dim_bound)
    frag = product_with_counter(base, len(net.places), counter_bound)
    zero = (0,) * len(net.places)

    tuples = list(_tuples(net, mode, d, dim_bound))
    if restrict_by_labels and mode == "nac":
        tuples = [
            c for c in tuples if len({net.labels[t] for t in c}) == len(c)
        ]

    def word_obj(combo) -> ObjId:
        return ObjId(tuple(net.labels[t] for t in combo))

    def counter_id(obj: ObjId, vec: tuple[int, ...]) -> MorId:
        if vec == zero:
            return identity(obj)
        return MorId(obj, obj, ("ct", ("id",), vec))

    objects = [_tuple_name(c) for c in tuples]
    g_ob = {_tuple_name(c): word_obj(c) for c in tuples}
    morphisms: list[ShapeMorphism] = []
    g_mor: dict[str, MorId] = {}
    tuple_set = set(tuples)
    for combo in tuples:
        for i in range(1, len(combo) + 1):
            boundary = combo[: i - 1] + combo[i:]
            if boundary not in tuple_set:
                continue
            for eps in (0, 1):
                apex = _apex_name(combo, i, eps)
                objects.append(apex)
                g_ob[apex] = word_obj(boundary)
                phi = f"phi:{apex}"
                psi = f"psi:{apex}"
                morphisms.append(ShapeMorphism(phi, apex, _tuple_name(boundary)))
                morphisms.append(ShapeMorphism(psi, apex, _tuple_name(combo)))
                vec = net.consumption(combo[i - 1]) if eps == 0 else net.production(combo[i - 1])
                img = word_obj(boundary)
                g_mor[phi] = counter_id(img, vec)
                g_mor[psi] = MorId(
                    img, word_obj(combo), ("ct", ("d", ((i, eps),)), zero)
                )

    pres = Presentation(
        objects=tuple(objects),
        morphisms=tuple(morphisms),
        g_ob=g_ob,
        g_mor=g_mor,
    )
    colim = materialize(pres, frag)

    tuple_elements: dict[tuple, Element] = {}
    for combo in tuples:
        for v in itertools.product(*(range(b + 1) for b in counter_bound)):
            el = colim.colimit_class(_tuple_name(combo), counter_id(word_obj(combo), v))
            if el is not None:
                tuple_elements[(combo, v)] = el

    start = []
    if m0 is not None:
        key = ((), tuple(m0))
        if key not in tuple_elements:
            raise WindowOverflow(f"initial marking {m0} is outside the counter window")
        start.append(tuple_elements[key])
    accept = []
    for combo, v in accepts:
        accept.append(tuple_elements[(tuple(combo), tuple(v))])
    auto = colim.with_marks(start, accept)
    auto.colimit_class = colim.colimit_class

    return HdacTranslation(
        presentation=pres,
        automaton=auto,
        frag=frag,
        net=net,
        counter_bound=counter_bound,
        tuple_elements=tuple_elements,
    )


def interleaving_paths(trans: HdacTranslation, maxlen: int) -> list[tuple[str, ...]]:
    """Accepting-free interleaving runs read off the translated automaton.

    Paths of shape (up, down)^k from the start element whose nodes stay in
    dimensions 0 and 1; each up/down pair fires one transition, and the
    fired sequence is returned.
    """
    auto = trans.automaton
    if not auto.start:
        raise ValueError("translation has no start mark; pass m0")
    decode = trans.decode()
    start = next(iter(auto.start))
    out: list[tuple[str, ...]] = []
    for path in enumerate_paths(auto, [start], maxlen, skip_identities=True):
        if len(path) % 2 != 0 or path.shape != (UP + DOWN) * (len(path) // 2):
            continue
        seq = []
        good = True
        for idx, node in enumerate(path.nodes):
            key = decode.get(node)
            if key is None:
                good = False
                break
            combo, _ = key
            if idx % 2 == 0 and combo != ():
                good = False
                break
            if idx % 2 == 1:
                if len(combo) != 1:
                    good = False
                    break
                seq.append(combo[0])
        if good:
            out.append(tuple(seq))
    return out
