"""Command-line frontend: load artifacts, run operations, emit reports.

Every verb prints one JSON (or text) report on stdout and exits with
0 on success or a positive verdict, 1 on a negative verdict, 2 on input
errors, 3 when a bounded search was exhausted without an answer.
Output is byte-identical across runs for identical inputs.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io_json
from .dcat import validate_fragment
from .errors import PresheafAutomataError, SchemaError
from .lang import Language, eval_rational, fragment_universe, lang_of
from .models.counter import counter_auto_to_vass, vass_to_counter_auto
from .models.fsa import auto_to_fsa, fsa_to_auto
from .models.petri import firing_sequences, petri_fire_oracle, petri_to_hdac
from .models.vass import presheaf_to_vass, vass_run_oracle, vass_to_presheaf, VassConfig
from .morphsearch import SearchOptions, find_morphisms
from .openmap import check_lang_preservation, is_future_open, is_past_open
from .path import UNKNOWN, YES, enumerate_paths, path_equivalent, refines, validate_path
from .presheaf import validate_automaton
from .track import canonical_certificate, concat_tracks, iso_tracks

OK, FALSE, INPUT_ERROR, EXHAUSTED = 0, 1, 2, 3


def _load_auto(path: str):
    return io_json.automaton_from_json(io_json.load_file(path))


def _load_track(path: str, frag=None):
    return io_json.track_from_json(io_json.load_file(path), frag)


def cmd_validate(args) -> tuple[int, dict]:
    data = io_json.load_file(args.input)
    if "elements" in data:
        auto = io_json.automaton_from_json(data)
        report = validate_automaton(auto)
        kind = "automaton"
    elif "objects" in data or "kind" in data:
        frag = io_json.fragment_from_json(data)
        report = validate_fragment(frag)
        kind = "fragment"
    else:
        raise SchemaError("neither an automaton nor a fragment", pointer="/")
    payload = {
        "kind": kind,
        "ok": report.ok,
        "violations": sorted(str(v) for v in report.violations),
    }
    return (OK if report.ok else FALSE), payload


def cmd_paths(args) -> tuple[int, dict]:
    auto = _load_auto(args.auto)
    sources = auto.start if args.source is None else [auto.element(args.source)]
    paths = enumerate_paths(
        auto,
        sources,
        args.maxlen,
        accepting_only=args.accepting,
        skip_identities=not args.identity_steps,
    )
    return OK, {"count": len(paths), "paths": [io_json.path_to_json(p) for p in paths]}


def cmd_lang(args) -> tuple[int, dict]:
    auto = _load_auto(args.auto)
    lang = lang_of(auto, args.maxlen)
    payload = io_json.language_to_json(lang)
    if args.out:
        io_json.dump(payload, args.out)
    return OK, payload


def cmd_member(args) -> tuple[int, dict]:
    auto = _load_auto(args.auto)
    track = _load_track(args.track, auto.frag)
    maps = find_morphisms(track.auto, auto, SearchOptions(preserve_marks=True, limit=1))
    return (OK if maps else FALSE), {"member": bool(maps)}


def cmd_subsumes(args) -> tuple[int, dict]:
    left = _load_track(args.left)
    right = _load_track(args.right, left.auto.frag)
    maps = find_morphisms(
        left.auto, right.auto, SearchOptions(preserve_marks=True, limit=1)
    )
    return (OK if maps else FALSE), {"subsumes": bool(maps)}


def cmd_iso(args) -> tuple[int, dict]:
    left = _load_track(args.left)
    right = _load_track(args.right, left.auto.frag)
    same = iso_tracks(left, right)
    payload = {
        "isomorphic": same,
        "left_certificate": canonical_certificate(left).hex(),
        "right_certificate": canonical_certificate(right).hex(),
    }
    return (OK if same else FALSE), payload


def cmd_refines(args) -> tuple[int, dict]:
    auto = _load_auto(args.auto)
    sparse = io_json.path_from_json(io_json.load_file(args.p), auto)
    dense = io_json.path_from_json(io_json.load_file(args.q), auto)
    for name, path in (("p", sparse), ("q", dense)):
        report = validate_path(auto, path)
        if not report.ok:
            return INPUT_ERROR, {"error": f"path {name} invalid: {report}"}
    verdict = refines(sparse, dense, auto)
    return (OK if verdict else FALSE), {"refines": verdict}


def cmd_equiv(args) -> tuple[int, dict]:
    auto = _load_auto(args.auto)
    left = io_json.path_from_json(io_json.load_file(args.p), auto)
    right = io_json.path_from_json(io_json.load_file(args.q), auto)
    verdict = path_equivalent(left, right, auto, budget=args.budget)
    payload = {"equivalent": verdict}
    if verdict == "NO":
        payload["reason"] = "endpoints differ or tracks non-isomorphic"
    code = OK if verdict == YES else (EXHAUSTED if verdict == UNKNOWN else FALSE)
    return code, payload


def cmd_concat(args) -> tuple[int, dict]:
    left = _load_track(args.left)
    right = _load_track(args.right, left.auto.frag)
    track = concat_tracks(left, right)
    payload = io_json.track_to_json(track)
    if args.out:
        io_json.dump(payload, args.out)
    return OK, payload


def cmd_open_check(args) -> tuple[int, dict]:
    fmap = io_json.map_from_json(io_json.load_file(args.map))
    report = fmap.validate()
    if not report.ok:
        return INPUT_ERROR, {"error": f"not a presheaf map: {report}"}
    payload = {}
    verdicts = []
    if args.dir in ("future", "both"):
        res = is_future_open(fmap)
        payload["future_open"] = res.open
        if res.counterexample:
            phi, y, x = res.counterexample
            payload["future_counterexample"] = [str(phi), str(y), str(x)]
        verdicts.append(res.open)
    if args.dir in ("past", "both"):
        res = is_past_open(fmap)
        payload["past_open"] = res.open
        payload["past_note"] = "conjectured mirror of the future-open statement"
        if res.counterexample:
            phi, y, x = res.counterexample
            payload["past_counterexample"] = [str(phi), str(y), str(x)]
        verdicts.append(res.open)
    if args.lang_budget is not None:
        pres = check_lang_preservation(fmap, args.lang_budget)
        payload["lang_preservation"] = {
            "hypotheses_hold": pres.hypotheses_hold,
            "languages_equal": pres.languages_equal,
            "note": pres.note,
        }
    return (OK if all(verdicts) else FALSE), payload


def cmd_convert(args) -> tuple[int, dict]:
    kind = args.kind
    data = io_json.load_file(args.input)
    if kind == "fsa2auto":
        auto = fsa_to_auto(io_json.digraph_from_json(data))
        payload = io_json.automaton_to_json(auto)
    elif kind == "auto2fsa":
        payload = io_json.digraph_to_json(auto_to_fsa(io_json.automaton_from_json(data)))
    elif kind == "vass2auto":
        vass = io_json.vass_from_json(data)
        auto = vass_to_presheaf(vass, tuple(args.bound))
        payload = io_json.automaton_to_json(auto)
    elif kind == "auto2vass":
        vass = presheaf_to_vass(io_json.automaton_from_json(data))
        payload = io_json.vass_to_json(vass)
    elif kind == "vass2counter":
        vass = io_json.vass_from_json(data)
        auto = vass_to_counter_auto(vass, tuple(args.bound))
        payload = io_json.automaton_to_json(auto)
    elif kind == "counter2vass":
        vass = counter_auto_to_vass(io_json.automaton_from_json(data))
        payload = io_json.vass_to_json(vass)
    elif kind == "petri2hdac":
        net, m0 = io_json.petri_from_json(data)
        trans = petri_to_hdac(
            net,
            mode=args.mode,
            d=args.d,
            counter_bound=tuple(args.bound) if args.bound else None,
            m0=m0,
        )
        payload = io_json.automaton_to_json(trans.automaton, inline_fragment=True)
    else:
        raise SchemaError(f"unknown conversion {kind}", pointer="/kind")
    if args.out:
        io_json.dump(payload, args.out)
    if args.dot:
        auto_obj = io_json.automaton_from_json(payload) if "elements" in payload else None
        if auto_obj is not None:
            with open(args.dot, "w") as fh:
                fh.write(io_json.elements_dot(auto_obj))
    return OK, payload


def cmd_oracle(args) -> tuple[int, dict]:
    data = io_json.load_file(args.input)
    if args.kind == "vass":
        vass = io_json.vass_from_json(data)
        start = VassConfig(args.state, tuple(args.counter))
        runs = vass_run_oracle(vass, start, args.maxlen)
        payload = {
            "runs": [
                {
                    "configs": [[c.state, list(c.counter)] for c in configs],
                    "edges": [[q, list(v), q2] for q, v, q2 in edges],
                }
                for configs, edges in runs
            ]
        }
    elif args.kind == "petri":
        net, m0 = io_json.petri_from_json(data)
        marking = tuple(args.counter) if args.counter else m0
        if args.fire:
            result = petri_fire_oracle(net, marking, args.fire)
            if hasattr(result, "at"):
                payload = {"blocked_at": result.at, "transition": result.transition}
                return FALSE, payload
            payload = {"marking": list(result)}
        else:
            seqs = firing_sequences(net, marking, args.maxlen)
            payload = {"sequences": [list(s) for s in seqs]}
    else:
        raise SchemaError(f"unknown oracle {args.kind}", pointer="/kind")
    return OK, payload


def cmd_rational(args) -> tuple[int, dict]:
    frag = io_json.fragment_from_json(io_json.load_file(args.fragment))
    universe = fragment_universe(frag, args.maxlen)

    def resolver(name: str):
        return _load_track(name, frag)

    expr = io_json.parse_rational(args.expr, resolver)
    lang = eval_rational(expr, universe)
    payload = io_json.language_to_json(lang)
    if args.out:
        io_json.dump(payload, args.out)
    return OK, payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="presheaf-automata",
        description="Presheaf automata over directed categories",
    )
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--seed", type=int, default=0, help="seed for search heuristics")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate", help="validate a fragment or automaton file")
    p.add_argument("input")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("paths", help="enumerate paths of an automaton")
    p.add_argument("--auto", required=True)
    p.add_argument("--maxlen", type=int, default=4)
    p.add_argument("--source", default=None)
    p.add_argument("--accepting", action="store_true")
    p.add_argument("--identity-steps", action="store_true")
    p.set_defaults(run=cmd_paths)

    p = sub.add_parser("lang", help="bounded language of an automaton")
    p.add_argument("--auto", required=True)
    p.add_argument("--maxlen", type=int, default=6)
    p.add_argument("--out", default=None)
    p.set_defaults(run=cmd_lang)

    p = sub.add_parser("member", help="does the automaton accept the track")
    p.add_argument("--track", required=True)
    p.add_argument("--auto", required=True)
    p.set_defaults(run=cmd_member)

    p = sub.add_parser("subsumes", help="is the left track subsumed by the right")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(run=cmd_subsumes)

    p = sub.add_parser("iso", help="are two tracks isomorphic")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(run=cmd_iso)

    p = sub.add_parser("refines", help="is path p sparser than path q")
    p.add_argument("--auto", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(run=cmd_refines)

    p = sub.add_parser("equiv", help="bounded path equivalence")
    p.add_argument("--auto", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--budget", type=int, default=64)
    p.set_defaults(run=cmd_equiv)

    p = sub.add_parser("concat", help="concatenate two tracks")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(run=cmd_concat)

    p = sub.add_parser("open-check", help="future/past openness of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--dir", choices=("future", "past", "both"), default="future")
    p.add_argument("--lang-budget", type=int, default=None)
    p.set_defaults(run=cmd_open_check)

    p = sub.add_parser("convert", help="translate between models")
    p.add_argument("--kind", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--bound", type=int, nargs="*", default=None)
    p.add_argument("--mode", default="nac")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--dot", default=None)
    p.set_defaults(run=cmd_convert)

    p = sub.add_parser("oracle", help="run model oracles directly")
    p.add_argument("--kind", required=True, choices=("vass", "petri"))
    p.add_argument("--input", required=True)
    p.add_argument("--state", default=None)
    p.add_argument("--counter", type=int, nargs="*", default=None)
    p.add_argument("--maxlen", type=int, default=4)
    p.add_argument("--fire", nargs="*", default=None)
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("rational", help="evaluate a rational expression")
    p.add_argument("--fragment", required=True)
    p.add_argument("--expr", required=True)
    p.add_argument("--maxlen", type=int, default=6)
    p.add_argument("--out", default=None)
    p.set_defaults(run=cmd_rational)

    return parser


def _render_text(payload: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_render_text(value, indent + 1))
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: {json.dumps(value, sort_keys=True)}")
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, payload = args.run(args)
    except SchemaError as exc:
        code, payload = INPUT_ERROR, {"error": str(exc), "pointer": exc.pointer}
    except FileNotFoundError as exc:
        code, payload = INPUT_ERROR, {"error": str(exc)}
    except PresheafAutomataError as exc:
        code, payload = INPUT_ERROR, {"error": f"{type(exc).__name__}: {exc}"}
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(_render_text(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
