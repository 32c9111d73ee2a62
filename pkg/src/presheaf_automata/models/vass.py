"""Vector addition systems with states and their presheaf encoding.

A VASS edge carries an integer vector; runs keep the counter in the
naturals.  The index category pairs a vertex/edge base with a counter
value; an edge element at counter v is entered from the counter raised by
the vector's negative part and left at the counter raised by its positive
part, which reproduces run semantics exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..dcat import EMPTY, DCatFragment, MorId, ObjId, build_V
from ..errors import WindowOverflow
from ..path import DOWN, UP, enumerate_paths
from ..presheaf import Element, PresheafAutomaton


@dataclass(frozen=True)
class Vass:
    states: tuple[str, ...]
    edges: tuple[tuple[str, tuple[int, ...], str], ...]

    def __post_init__(self):
        names = set(self.states)
        for q, vec, q2 in self.edges:
            if q not in names or q2 not in names:
                raise ValueError(f"edge {(q, vec, q2)} uses an unknown state")

    @property
    def dim(self) -> int:
        return len(self.edges[0][1]) if self.edges else 0

    def vectors(self) -> list[tuple[int, ...]]:
        return sorted({vec for _, vec, _ in self.edges})


@dataclass(frozen=True)
class VassConfig:
    state: str
    counter: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counter):
            raise ValueError("counters live in the naturals")


def _pos(u):
    return tuple(x if x > 0 else 0 for x in u)


def _neg(u):
    return tuple(-x if x < 0 else 0 for x in u)


def _cfg_name(base: str, counter) -> str:
    return f"{base}#{','.join(map(str, counter))}"


def _counters(bound):
    return itertools.product(*(range(b + 1) for b in bound))


def vass_to_presheaf(vass: Vass, counter_bound: tuple[int, ...]) -> PresheafAutomaton:
    """Encode a VASS over its index fragment within a counter bound."""
    r = len(counter_bound)
    if vass.edges and vass.dim != r:
        raise ValueError("counter bound has the wrong dimension")
    frag = build_V(r, counter_bound, vass.vectors())
    edge_name = {e: _edge_label(e) for e in vass.edges}

    elements: dict[tuple, Element] = {}
    for v in _counters(counter_bound):
        for q in vass.states:
            elements[(q, v)] = Element(_cfg_name(q, v), ObjId((EMPTY, tuple(v))))
        for e in vass.edges:
            elements[(e, v)] = Element(
                _cfg_name(edge_name[e], v), ObjId((e[1], tuple(v)))
            )

    act: dict[tuple[MorId, Element], Element] = {}
    for mor in frag.generators:
        head = mor.tag[0]
        src_base, src_ctr = mor.src.payload
        tgt_base, tgt_ctr = mor.tgt.payload
        if head == "v_shift":
            if tgt_base == EMPTY:
                for q in vass.states:
                    act[(mor, elements[(q, tgt_ctr)])] = elements[(q, src_ctr)]
            else:
                for e in vass.edges:
                    if e[1] == tgt_base:
                        act[(mor, elements[(e, tgt_ctr)])] = elements[(e, src_ctr)]
        elif head in ("v_sigma", "v_tau"):
            pick = 0 if head == "v_sigma" else 2
            for e in vass.edges:
                if e[1] == tgt_base:
                    act[(mor, elements[(e, tgt_ctr)])] = elements[(e[pick], src_ctr)]
    return PresheafAutomaton(
        frag=frag, elements=tuple(elements.values()), act=act
    )


def _edge_label(e) -> str:
    q, vec, q2 = e
    return f"{q}>{','.join(map(str, vec))}>{q2}"


def presheaf_to_vass(auto: PresheafAutomaton) -> Vass:
    """Recover states and edges from the zero-counter fibres."""
    frag = auto.frag
    r = len(frag.window.bounds)
    zero = (0,) * r
    states = tuple(
        sorted(e.name.split("#")[0] for e in auto.elements_over(ObjId((EMPTY, zero))))
    )
    edges = []
    for obj in frag.objects:
        base, ctr = obj.payload
        if base == EMPTY or ctr != zero:
            continue
        sigma = _mor_into(frag, obj, "v_sigma", zero)
        tau = _mor_into(frag, obj, "v_tau", zero)
        for e in auto.elements_over(obj):
            src = auto.act_morphism(sigma, e).name.split("#")[0]
            tgt = auto.act_morphism(tau, e).name.split("#")[0]
            edges.append((src, tuple(base), tgt))
    return Vass(states=states, edges=tuple(sorted(set(edges))))


def _mor_into(frag: DCatFragment, obj: ObjId, head: str, counter) -> MorId:
    src = ObjId((EMPTY, tuple(counter)))
    for m in frag.hom(src, obj):
        if m.tag[0] == head:
            return m
    raise WindowOverflow(f"no {head} morphism into {obj} at counter {counter}")


# -- oracles and path semantics ---------------------------------------------


def vass_run_oracle(
    vass: Vass, start: VassConfig, maxlen: int
) -> list[tuple[tuple[VassConfig, ...], tuple]]:
    """All runs of length <= maxlen by direct simulation.

    A run is (configs, edges) with len(configs) == len(edges) + 1; counters
    never leave the naturals.  Independent of the presheaf machinery.
    """
    runs = []
    edges = sorted(vass.edges)

    def walk(configs: tuple[VassConfig, ...], used: tuple):
        runs.append((configs, used))
        if len(used) >= maxlen:
            return
        current = configs[-1]
        for e in edges:
            if e[0] != current.state:
                continue
            nxt = tuple(c + d for c, d in zip(current.counter, e[1]))
            if any(c < 0 for c in nxt):
                continue
            walk(configs + (VassConfig(e[2], nxt),), used + (e,))

    walk((start,), ())
    return runs


def presheaf_runs(
    auto: PresheafAutomaton, start: VassConfig, maxlen: int
) -> list[tuple[tuple[VassConfig, ...], tuple]]:
    """Runs read off the encoded presheaf through its path semantics.

    Each run step is an upstep into an edge element followed by the
    downstep out of it; paths that stop inside an edge are dropped.
    """
    start_elem = auto.element(_cfg_name(start.state, start.counter))
    runs = []
    for path in enumerate_paths(auto, [start_elem], 2 * maxlen, skip_identities=True):
        if len(path) % 2 != 0 or path.shape != (UP + DOWN) * (len(path) // 2):
            continue
        configs = []
        edges = []
        good = True
        for idx, node in enumerate(path.nodes):
            base, ctr = node.base.payload
            if idx % 2 == 0:
                if base != EMPTY:
                    good = False
                    break
                configs.append(VassConfig(node.name.split("#")[0], ctr))
            else:
                head = node.name.split("#")[0]
                src, vec, tgt = head.split(">")
                edges.append((src, tuple(int(x) for x in vec.split(",")), tgt))
        if good:
            runs.append((tuple(configs), tuple(edges)))
    return runs
