"""JSON schemas for fragments, automata, paths, tracks, maps and models.

Payloads and tags are encoded as nested lists; loading converts them back
to tuples.  Dumps are deterministic: sorted keys, canonical member order.
"""

from __future__ import annotations

import json
from typing import Any

from .dcat import (
    DCatFragment,
    MorId,
    ObjId,
    Window,
    build_G,
    build_labeled_precube,
    build_precube,
    build_V,
    identity,
    product_with_counter,
)
from .errors import SchemaError
from .lang import Language, RationalExpr
from .models.fsa import LabeledDigraphAutomaton
from .models.petri import PetriNet
from .models.vass import Vass
from .path import Path
from .presheaf import Element, PresheafAutomaton
from .track import TrackObject


def _encode(value):
    if isinstance(value, tuple):
        return [_encode(v) for v in value]
    return value


def _decode(value):
    if isinstance(value, list):
        return tuple(_decode(v) for v in value)
    return value


def dump(data: dict, path: str | None = None) -> str:
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def load_file(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", pointer="/") from None


def _need(data: dict, key: str, pointer: str):
    if key not in data:
        raise SchemaError(f"missing key '{key}'", pointer=pointer)
    return data[key]


# -- fragments ---------------------------------------------------------------


def fragment_to_json(frag: DCatFragment) -> dict:
    return {
        "name": frag.name,
        "objects": [_encode(o.payload) for o in frag.objects],
        "morphisms": [
            {
                "id": str(m),
                "src": _encode(m.src.payload),
                "tgt": _encode(m.tgt.payload),
                "tag": _encode(m.tag),
                "for": frag.is_for(m),
                "back": frag.is_back(m),
            }
            for m in frag.morphisms
        ],
        "compose": sorted(
            [str(g), str(f), str(gf)] for (g, f), gf in frag.composition.items()
        ),
        "generators": [str(g) for g in frag.generators],
        "decomposition": {
            str(m): [str(g) for g in word]
            for m, word in sorted(frag.decomposition.items(), key=lambda kv: kv[0].key)
        },
        "window": frag.window.describe(),
    }


def fragment_from_json(data: dict) -> DCatFragment:
    if "kind" in data:
        return fragment_from_descriptor(data)
    objects = [ObjId(_decode(o)) for o in _need(data, "objects", "/objects")]
    morphisms = {}
    polarity_for, polarity_back = set(), set()
    for i, md in enumerate(_need(data, "morphisms", "/morphisms")):
        mor = MorId(
            ObjId(_decode(md["src"])), ObjId(_decode(md["tgt"])), _decode(md["tag"])
        )
        morphisms[md["id"]] = mor
        if md.get("for"):
            polarity_for.add(mor)
        if md.get("back"):
            polarity_back.add(mor)
    table = {}
    for g, f, gf in data.get("compose", []):
        try:
            table[(morphisms[g], morphisms[f])] = morphisms[gf]
        except KeyError as exc:
            raise SchemaError(f"unknown morphism id {exc}", pointer="/compose")
    win = data.get("window", {})
    window = Window(
        kind=win.get("kind", "custom"),
        bounds=tuple(win.get("bounds", ())),
        objects_complete=win.get("objects_complete", True),
        morphisms_complete=win.get("morphisms_complete", True),
        omitted=tuple(win.get("omitted", ())),
    )
    generators = tuple(morphisms[g] for g in data.get("generators", []))
    decomposition = {
        morphisms[m]: tuple(morphisms[g] for g in word)
        for m, word in data.get("decomposition", {}).items()
    }
    return DCatFragment(
        name=data.get("name", "custom"),
        objects=tuple(objects),
        morphisms=tuple(morphisms.values()),
        composition=table,
        for_morphisms=frozenset(polarity_for),
        back_morphisms=frozenset(polarity_back),
        window=window,
        generators=generators,
        decomposition=decomposition,
    )


def fragment_from_descriptor(data: dict) -> DCatFragment:
    kind = data["kind"]
    if kind == "G":
        return build_G(data["alphabet"])
    if kind == "precube":
        return build_precube(data["dmax"])
    if kind == "labeled_precube":
        return build_labeled_precube(data["alphabet"], data["dmax"])
    if kind == "V":
        return build_V(
            data["r"],
            tuple(data["bound"]),
            [tuple(v) for v in data["vectors"]],
        )
    if kind == "counter_product":
        base = fragment_from_descriptor(data["base"])
        return product_with_counter(base, data["r"], tuple(data["bound"]))
    raise SchemaError(f"unknown fragment kind {kind}", pointer="/kind")


# -- automata ----------------------------------------------------------------


def automaton_to_json(auto: PresheafAutomaton, inline_fragment: bool = False) -> dict:
    frag = auto.frag
    data = {
        "fragment": fragment_to_json(frag) if inline_fragment else _descriptor_of(frag),
        "elements": [
            {"id": e.name, "base": _encode(e.base.payload)} for e in auto.elements
        ],
        "act": sorted(
            [str(gen), x.name, y.name] for (gen, x), y in auto.act.items()
        ),
        "clipped": sorted([str(gen), x.name] for gen, x in auto.clipped),
        "start": sorted(e.name for e in auto.start),
        "accept": sorted(e.name for e in auto.accept),
    }
    return data


def _descriptor_of(frag: DCatFragment) -> dict:
    kind = frag.window.kind
    bounds = frag.window.bounds
    if kind == "G":
        return {"kind": "G", "alphabet": [o.payload for o in frag.objects if o.payload]}
    if kind == "precube":
        return {"kind": "precube", "dmax": bounds[0]}
    if kind == "labeled_precube":
        letters = sorted({o.payload[0] for o in frag.objects if o.payload})
        return {"kind": "labeled_precube", "alphabet": letters, "dmax": bounds[0]}
    if kind == "V":
        vectors = sorted(
            {o.payload[0] for o in frag.objects if o.payload[0] != ""}
        )
        return {
            "kind": "V",
            "r": len(bounds),
            "bound": list(bounds),
            "vectors": [list(v) for v in vectors],
        }
    if kind.endswith("*counter"):
        base_kind = kind[: -len("*counter")]
        if base_kind == "G":
            alphabet = [o.payload for o in frag.objects if o.payload]
            r = len(bounds) - 1
            return {
                "kind": "counter_product",
                "base": {"kind": "G", "alphabet": alphabet},
                "r": r,
                "bound": list(bounds[1:]),
            }
        if base_kind == "labeled_precube":
            letters = sorted(
                {c for o in frag.objects for c in (o.payload or ())}
            )
            dmax = max(len(o.payload) for o in frag.objects)
            r = len(bounds) - 1
            return {
                "kind": "counter_product",
                "base": {"kind": "labeled_precube", "alphabet": letters, "dmax": dmax},
                "r": r,
                "bound": list(bounds[1:]),
            }
    return fragment_to_json(frag)


def automaton_from_json(data: dict, frag: DCatFragment | None = None) -> PresheafAutomaton:
    if frag is None:
        spec = _need(data, "fragment", "/fragment")
        frag = fragment_from_json(spec) if "objects" in spec else fragment_from_descriptor(spec)
    mor_index = {str(m): m for m in frag.morphisms}
    elements = {}
    for ed in _need(data, "elements", "/elements"):
        elements[ed["id"]] = Element(ed["id"], ObjId(_decode(ed["base"])))
    act = {}
    for gen, x, y in data.get("act", []):
        try:
            act[(mor_index[gen], elements[x])] = elements[y]
        except KeyError as exc:
            raise SchemaError(f"unknown reference {exc}", pointer="/act")
    clipped = set()
    for gen, x in data.get("clipped", []):
        clipped.add((mor_index[gen], elements[x]))
    try:
        start = frozenset(elements[e] for e in data.get("start", []))
        accept = frozenset(elements[e] for e in data.get("accept", []))
    except KeyError as exc:
        raise SchemaError(f"unknown element {exc}", pointer="/start")
    return PresheafAutomaton(
        frag=frag,
        elements=tuple(elements.values()),
        act=act,
        start=start,
        accept=accept,
        clipped=frozenset(clipped),
    )


# -- paths, tracks, maps ------------------------------------------------------


def path_to_json(path: Path) -> dict:
    nodes = []
    for n in path.nodes:
        nodes.append(n.name if isinstance(n, Element) else {"obj": _encode(n.payload)})
    return {
        "shape": path.shape,
        "nodes": nodes,
        "steps": [str(s) for s in path.steps],
    }


def path_from_json(data: dict, context) -> Path:
    """Load a path; ``context`` is the automaton (element nodes) or fragment."""
    frag = context.frag if isinstance(context, PresheafAutomaton) else context
    mor_index = {str(m): m for m in frag.morphisms}
    nodes = []
    for n in _need(data, "nodes", "/nodes"):
        if isinstance(n, dict):
            nodes.append(ObjId(_decode(n["obj"])))
        else:
            if not isinstance(context, PresheafAutomaton):
                raise SchemaError("element nodes need an automaton context", "/nodes")
            nodes.append(context.element(n))
    try:
        steps = tuple(mor_index[s] for s in data.get("steps", []))
    except KeyError as exc:
        raise SchemaError(f"unknown morphism {exc}", pointer="/steps")
    return Path(_need(data, "shape", "/shape"), tuple(nodes), steps)


def track_to_json(track: TrackObject, inline_fragment: bool = False) -> dict:
    data = automaton_to_json(track.auto, inline_fragment)
    data["src_obj"] = _encode(track.src_obj.payload)
    data["tgt_obj"] = _encode(track.tgt_obj.payload)
    return data


def track_from_json(data: dict, frag: DCatFragment | None = None) -> TrackObject:
    auto = automaton_from_json(data, frag)
    return TrackObject(
        auto=auto,
        src_obj=ObjId(_decode(_need(data, "src_obj", "/src_obj"))),
        tgt_obj=ObjId(_decode(_need(data, "tgt_obj", "/tgt_obj"))),
    )


def map_to_json(source: PresheafAutomaton, target: PresheafAutomaton, assign) -> dict:
    return {
        "from": automaton_to_json(source),
        "to": automaton_to_json(target),
        "assign": sorted([y.name, x.name] for y, x in assign.items()),
    }


def map_from_json(data: dict):
    from .openmap import PresheafMap

    source = automaton_from_json(_need(data, "from", "/from"))
    target = automaton_from_json(_need(data, "to", "/to"), frag=source.frag)
    assign = {}
    for y, x in _need(data, "assign", "/assign"):
        assign[source.element(y)] = target.element(x)
    return PresheafMap(source=source, target=target, assign=assign)


# -- languages ----------------------------------------------------------------


def language_to_json(lang: Language) -> dict:
    return {
        "budget": {
            "maxlen": lang.maxlen,
            "window": lang.frag.window.describe(),
            "fragment": lang.frag.name,
        },
        "certificates": [c.hex() for c in lang.certificates()],
        "tracks": {
            c.hex(): track_to_json(lang.tracks[c]) for c in lang.certificates()
        },
    }


# -- models -------------------------------------------------------------------


def vass_to_json(vass: Vass) -> dict:
    return {
        "Q": sorted(vass.states),
        "E": sorted([q, list(vec), q2] for q, vec, q2 in vass.edges),
    }


def vass_from_json(data: dict) -> Vass:
    states = tuple(sorted(_need(data, "Q", "/Q")))
    edges = tuple(
        sorted((q, tuple(vec), q2) for q, vec, q2 in _need(data, "E", "/E"))
    )
    return Vass(states=states, edges=edges)


def petri_to_json(net: PetriNet, m0=None) -> dict:
    data = {
        "places": sorted(net.places),
        "transitions": sorted(net.transitions),
        "flows": sorted([a, b] for a, b in net.flows),
        "labels": dict(sorted(net.labels.items())),
    }
    if m0 is not None:
        data["m0"] = list(m0)
    return data


def petri_from_json(data: dict) -> tuple[PetriNet, tuple[int, ...] | None]:
    net = PetriNet(
        places=tuple(sorted(_need(data, "places", "/places"))),
        transitions=tuple(sorted(_need(data, "transitions", "/transitions"))),
        flows=frozenset((a, b) for a, b in _need(data, "flows", "/flows")),
        labels=dict(_need(data, "labels", "/labels")),
    )
    m0 = tuple(data["m0"]) if "m0" in data else None
    return net, m0


def digraph_to_json(graph: LabeledDigraphAutomaton) -> dict:
    return {
        "vertices": sorted(graph.vertices),
        "edges": [
            {
                "id": e,
                "label": graph.label[e],
                "src": graph.src[e],
                "tgt": graph.tgt[e],
            }
            for e in sorted(graph.edges)
        ],
        "starts": sorted(graph.starts),
        "accepts": sorted(graph.accepts),
    }


def digraph_from_json(data: dict) -> LabeledDigraphAutomaton:
    edges = _need(data, "edges", "/edges")
    return LabeledDigraphAutomaton(
        vertices=tuple(sorted(_need(data, "vertices", "/vertices"))),
        edges=tuple(sorted(e["id"] for e in edges)),
        label={e["id"]: e["label"] for e in edges},
        src={e["id"]: e["src"] for e in edges},
        tgt={e["id"]: e["tgt"] for e in edges},
        starts=frozenset(data.get("starts", [])),
        accepts=frozenset(data.get("accepts", [])),
    )


# -- rational expressions ------------------------------------------------------


def parse_rational(text: str, atom_resolver) -> RationalExpr:
    """Parse a prefix rational expression.

    Grammar: expr := (empty) | (atom NAME) | (union e e) | (concat e e)
    | (plus e) | (star e).  ``atom_resolver(NAME)`` supplies the track.
    """
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()

    def parse(pos: int) -> tuple[RationalExpr, int]:
        if tokens[pos] != "(":
            raise SchemaError(f"expected ( at token {pos}", pointer="/expr")
        head = tokens[pos + 1]
        if head == "empty":
            return RationalExpr.empty(), _expect(pos + 2)
        if head == "atom":
            name = tokens[pos + 2]
            return RationalExpr.of(atom_resolver(name)), _expect(pos + 3)
        if head in ("union", "concat", "+", "*"):
            left, nxt = parse(pos + 2)
            right, nxt = parse(nxt)
            node = "union" if head in ("union", "+") else "concat"
            return RationalExpr(node, (left, right)), _expect(nxt)
        if head in ("plus", "star"):
            inner, nxt = parse(pos + 2)
            return RationalExpr(head, (inner,)), _expect(nxt)
        raise SchemaError(f"unknown operator {head}", pointer="/expr")

    def _expect(pos: int) -> int:
        if pos >= len(tokens) or tokens[pos] != ")":
            raise SchemaError(f"expected ) at token {pos}", pointer="/expr")
        return pos + 1

    expr, end = parse(0)
    if end != len(tokens):
        raise SchemaError("trailing tokens", pointer="/expr")
    return expr


# -- dot export ----------------------------------------------------------------


def elements_dot(auto: PresheafAutomaton) -> str:
    """Graphviz export of the category of elements (generator actions)."""
    lines = ["digraph elements {"]
    for e in auto.elements:
        shape = "doublecircle" if e in auto.accept else "ellipse"
        prefix = "start " if e in auto.start else ""
        lines.append(f'  "{e}" [shape={shape}, label="{prefix}{e}"];')
    for (gen, x), y in sorted(auto.act.items(), key=lambda kv: (kv[0][0].key, kv[0][1].key)):
        lines.append(f'  "{y}" -> "{x}" [label="{gen}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
