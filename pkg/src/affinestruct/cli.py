"""Command-line front end.

Every subcommand reads a JSON document (file argument or standard input) and
writes JSON to standard output, except ``tile`` which writes SVG.  Exit codes:
0 success, 1 validation error, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

import numpy as np

from . import __version__
from .affine_core import TOL, AffineMap, GroupPresentation, apply, fixed_points
from .dev_chart import ChartComplex, DevPath, develop, loop_holonomy
from .errors import AffineStructError
from .fixtures import ExampleId, build_example
from .flows import Ball, forward_absorbing, line_avoidance_check, radial_saturation_contains
from .line_groups import block_decompose, classify_cyclic, radiant_conjugator, shear_normal_form
from .tiling import DEFAULT_VIEWPORT, TilingJob, render_tiling


class InputError(AffineStructError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_json(path: str) -> Any:
    name = "<stdin>" if path == "-" else path
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {name}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{name}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _decode(kind: str, fn, data):
    try:
        return fn(data)
    except AffineStructError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"invalid {kind}: {exc!r}") from None


def _load_map(doc) -> AffineMap:
    return _decode("affine map", AffineMap.from_dict, doc)


def _load_presentation(doc) -> GroupPresentation:
    if isinstance(doc, dict) and "presentation" in doc:
        doc = doc["presentation"]
    return _decode("group presentation", GroupPresentation.from_dict, doc)


def _is_map(doc) -> bool:
    return isinstance(doc, dict) and "linear" in doc


def _parse_floats(text: str, count: int | None = None) -> list[float]:
    try:
        vals = [float(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise InputError(f"expected {count} numbers, got {len(vals)}")
    return vals


def _verdict_entry(name, g, args):
    try:
        v = classify_cyclic(g, tol=args.tolerance, horizon=args.max_iter)
    except AffineStructError as exc:
        return {"name": name, "error": type(exc).__name__, "message": str(exc)}
    return {"name": name, **v.to_dict()}


def cmd_classify(args):
    doc = _read_json(args.input)
    if _is_map(doc):
        g = _load_map(doc)
        return classify_cyclic(g, tol=args.tolerance, horizon=args.max_iter).to_dict()
    G = _load_presentation(doc)
    return {"generators": [_verdict_entry(name, g, args) for name, g in G.generators]}


def cmd_block(args):
    return block_decompose(_load_map(_read_json(args.input)), tol=args.tolerance).to_dict()


def cmd_normal_form(args):
    conj, normalized = shear_normal_form(_load_map(_read_json(args.input)), tol=args.tolerance)
    return {"conjugator": conj.to_dict(), "normalized": normalized.to_dict()}


def cmd_fixed_point(args):
    doc = _read_json(args.input)
    if _is_map(doc):
        return fixed_points(_load_map(doc), tol=args.tolerance).to_dict()
    found = radiant_conjugator(_load_presentation(doc), tol=args.tolerance)
    if found is None:
        return {"fixed_point": None}
    p, conj, linearized = found
    return {"fixed_point": p.tolist(), "conjugator": conj.to_dict(), "linearized": linearized.to_dict()}


def cmd_orbit(args):
    f = _load_map(_read_json(args.input))
    p = np.array(_parse_floats(args.point, f.dim))
    traj = [p]
    for _ in range(args.steps if args.steps is not None else args.max_iter):
        p = apply(f, p)
        traj.append(p)
    return {"trajectory": np.array(traj).tolist()}


def _complex_and_path(doc, key="path"):
    if not isinstance(doc, dict) or "complex" not in doc:
        raise InputError('expected {"complex": ..., "path": ...}')
    cc = _decode("chart complex", ChartComplex.from_dict, doc["complex"])
    raw = doc.get(key, doc.get("loop") if key == "path" else None)
    if raw is None:
        raise InputError(f"missing {key!r}")
    return cc, _decode("path", DevPath.from_dict, raw)


def cmd_develop(args):
    cc, path = _complex_and_path(_read_json(args.input))
    return develop(cc, path, seam_tol=args.seam_tolerance).to_dict()


def cmd_holonomy(args):
    cc, path = _complex_and_path(_read_json(args.input))
    return loop_holonomy(cc, path, seam_tol=args.seam_tolerance).to_dict()


def cmd_avoid_line(args):
    G = _load_presentation(_read_json(args.input))
    report = line_avoidance_check(
        G, samples=args.samples, max_word_length=args.max_word_length, seed=args.seed, tol=args.tolerance
    )
    return report.to_dict()


def cmd_saturate(args):
    doc = _read_json(args.input)
    try:
        ball = Ball(doc["ball"]["center"], doc["ball"]["radius"])
        points = doc["points"]
    except (KeyError, TypeError) as exc:
        raise InputError(f'expected {{"ball": {{"center", "radius"}}, "points": [...]}}: {exc!r}') from None
    return {
        "contains": [radial_saturation_contains(ball, q) for q in points],
        "forward_absorbing": forward_absorbing(ball, tol=args.tolerance),
    }


def cmd_tile(args):
    doc = _read_json(args.input)
    G = _load_presentation(doc)
    meta = doc.get("metadata", {}) if isinstance(doc, dict) else {}
    if args.polygon:
        polygon = np.array(_parse_floats(args.polygon)).reshape(-1, 2)
    else:
        polygon = doc.get("polygon") or meta.get("polygon") or [[0.5, 0.5], [1.5, 0.5], [1.5, 1.5], [0.5, 1.5]]
    vp = _parse_floats(args.viewport, 4) if args.viewport else None
    viewport = ((vp[0], vp[1]), (vp[2], vp[3])) if vp else DEFAULT_VIEWPORT
    labels = meta.get("edge_labels")
    job = TilingJob(polygon, G, args.max_word_length, viewport, args.output, tuple(labels) if labels else None)
    svg = render_tiling(job)
    return None if args.output else svg


def cmd_example(args):
    G, meta = build_example(args.name, lam=args.lam, theta=args.theta, n=args.n)
    return {"id": meta["id"], "presentation": G.to_dict(), "metadata": meta}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=TOL, help="numeric tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized harnesses")
    common.add_argument("--max-iter", type=int, default=60, help="iteration horizon for orbit witnesses")
    common.add_argument("--output", "-o", help="write the result here instead of standard output")

    parser = _Parser(prog="affinestruct", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help_text, takes_input=True):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if takes_input:
            p.add_argument("input", nargs="?", default="-", help="JSON input file (default: stdin)")
        p.set_defaults(func=fn)
        return p

    add("classify", cmd_classify, "classify the cyclic group of a line-preserving map (or each generator)")
    add("block", cmd_block, "block decomposition (r, w, A, d) of a line-preserving map")
    add("normal-form", cmd_normal_form, "conjugate away the shear row of an r = 1 map")
    add("fixed-point", cmd_fixed_point, "fixed points of a map, or a common fixed point of a presentation")
    p = add("orbit", cmd_orbit, "iterate a map on a point")
    p.add_argument("--point", required=True, help="comma-separated coordinates")
    p.add_argument("--steps", type=int, help="number of iterations (default: --max-iter)")
    for name, fn, text in (
        ("develop", cmd_develop, "develop a path over a chart complex"),
        ("holonomy", cmd_holonomy, "holonomy of a loop in a chart complex"),
    ):
        p = add(name, fn, text)
        p.add_argument("--seam-tolerance", type=float, default=1e-6)
    p = add("avoid-line", cmd_avoid_line, "random-word check that orbits of off-line points avoid the invariant line")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--max-word-length", type=int, default=8)
    add("saturate", cmd_saturate, "radial saturation membership for a batch of points")
    p = add("tile", cmd_tile, "render the orbit tiling of a fundamental polygon as SVG")
    p.add_argument("--max-word-length", type=int, default=6)
    p.add_argument("--viewport", help="xmin,ymin,xmax,ymax (default -1,-1,5,3)")
    p.add_argument("--polygon", help="flat comma-separated vertex list, counterclockwise")
    p = add("example", cmd_example, "emit a built-in example group as JSON", takes_input=False)
    p.add_argument("name", choices=[e.value for e in ExampleId])
    p.add_argument("--lam", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--n", type=int)
    return parser


def _clean(obj):
    # drop the sign of negative zeros so equal results print identically
    if isinstance(obj, float):
        return obj + 0.0
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _emit(result, args):
    if result is None:
        return
    text = result if isinstance(result, str) else json.dumps(_clean(result), indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _emit(args.func(args), args)
    except AffineStructError as exc:
        print(f"affinestruct {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"affinestruct {args.command}: cannot write output: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"affinestruct {args.command}: internal error: {exc!r}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
