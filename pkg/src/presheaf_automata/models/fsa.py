"""Standard automata as labelled digraphs and their presheaf encoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..dcat import EMPTY, DCatFragment, ObjId, build_G
from ..errors import UnknownLabel
from ..path import DOWN, UP, Path
from ..presheaf import Element, PresheafAutomaton
from ..track import TrackObject, track_of


@dataclass(eq=False)
class LabeledDigraphAutomaton:
    """Vertices, labelled edges, and start/accept marks on either."""

    vertices: tuple[str, ...]
    edges: tuple[str, ...]
    label: Mapping[str, str]
    src: Mapping[str, str]
    tgt: Mapping[str, str]
    starts: frozenset[str] = frozenset()
    accepts: frozenset[str] = frozenset()

    def __post_init__(self):
        vs = set(self.vertices)
        for e in self.edges:
            if self.src[e] not in vs or self.tgt[e] not in vs:
                raise ValueError(f"edge {e} has an endpoint outside the vertex set")

    def alphabet(self) -> list[str]:
        return sorted(set(self.label.values()))


def fsa_to_auto(
    graph: LabeledDigraphAutomaton, alphabet: Iterable[str] | None = None
) -> PresheafAutomaton:
    """Encode a labelled digraph: vertices over the point object, each edge
    over its letter, sources along sigma and targets along tau."""
    letters = sorted(set(alphabet)) if alphabet is not None else graph.alphabet()
    missing = set(graph.label.values()) - set(letters)
    if missing:
        raise UnknownLabel(f"labels {sorted(missing)} not in alphabet")
    frag = build_G(letters)
    point = ObjId(EMPTY)
    v_elems = {v: Element(v, point) for v in graph.vertices}
    e_elems = {e: Element(e, ObjId(graph.label[e])) for e in graph.edges}
    act = {}
    for e in graph.edges:
        a = graph.label[e]
        act[(frag.mor_by_str(f"sigma[{a}]:_->{a}"), e_elems[e])] = v_elems[graph.src[e]]
        act[(frag.mor_by_str(f"tau[{a}]:_->{a}"), e_elems[e])] = v_elems[graph.tgt[e]]
    marks = {**v_elems, **e_elems}
    return PresheafAutomaton(
        frag=frag,
        elements=tuple(list(v_elems.values()) + list(e_elems.values())),
        act=act,
        start=frozenset(marks[s] for s in graph.starts),
        accept=frozenset(marks[t] for t in graph.accepts),
    )


def auto_to_fsa(auto: PresheafAutomaton) -> LabeledDigraphAutomaton:
    """Decode the presheaf back into a labelled digraph, keeping names."""
    point = ObjId(EMPTY)
    vertices = tuple(e.name for e in auto.elements_over(point))
    edges, label, src, tgt = [], {}, {}, {}
    for obj in auto.frag.objects:
        if obj == point:
            continue
        letter = obj.payload
        sigma = auto.frag.mor_by_str(f"sigma[{letter}]:_->{letter}")
        tau = auto.frag.mor_by_str(f"tau[{letter}]:_->{letter}")
        for e in auto.elements_over(obj):
            edges.append(e.name)
            label[e.name] = letter
            src[e.name] = auto.act_gen(sigma, e).name
            tgt[e.name] = auto.act_gen(tau, e).name
    marks = {e.name: e for e in auto.elements}
    return LabeledDigraphAutomaton(
        vertices=vertices,
        edges=tuple(edges),
        label=label,
        src=src,
        tgt=tgt,
        starts=frozenset(e.name for e in auto.start),
        accepts=frozenset(e.name for e in auto.accept),
    )


def accepted_words_oracle(
    graph: LabeledDigraphAutomaton, max_letters: int
) -> set[tuple[str, ...]]:
    """Words accepted by the digraph, by direct path enumeration.

    Independent of the presheaf machinery: walks edges from start vertices
    and records label sequences that end in an accept vertex.
    """
    out_edges: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for e in graph.edges:
        out_edges[graph.src[e]].append(e)
    for v in out_edges:
        out_edges[v].sort()
    words: set[tuple[str, ...]] = set()

    def walk(vertex: str, word: tuple[str, ...]):
        if vertex in graph.accepts:
            words.add(word)
        if len(word) >= max_letters:
            return
        for e in out_edges[vertex]:
            walk(graph.tgt[e], word + (graph.label[e],))

    for v in sorted(graph.starts):
        if v in graph.vertices:
            walk(v, ())
    return words


def word_path(frag: DCatFragment, word: Iterable[str]) -> Path:
    """The fragment path of a word: up into each letter, back down."""
    point = ObjId(EMPTY)
    nodes: list[ObjId] = [point]
    steps = []
    shape = ""
    for a in word:
        sigma = frag.mor_by_str(f"sigma[{a}]:_->{a}")
        tau = frag.mor_by_str(f"tau[{a}]:_->{a}")
        nodes.extend([ObjId(a), point])
        steps.extend([sigma, tau])
        shape += UP + DOWN
    return Path(shape, tuple(nodes), tuple(steps))


def word_track(frag: DCatFragment, word: Iterable[str]) -> TrackObject:
    """The linear track recognising exactly the given word."""
    return track_of(word_path(frag, word), frag)
