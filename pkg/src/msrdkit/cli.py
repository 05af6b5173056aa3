"""Command-line front end: ``msrdkit field|construct|verify|weights|scan``.

Every command reads JSON with ``--in`` (default: standard input) where it
needs input, and writes JSON (or CSV for ``scan --format csv``) to ``--out``
(default: standard output). Exit codes: 0 success, 1 formula/brute-force
disagreement or internal failure, 2 invalid parameters, 3 enumeration cap
exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from typing import Optional, Sequence

import numpy as np
import sympy

from .codes import DEFAULT_CAP, LinearCode, max_weight_codeword, min_distance, weight_distribution
from .errors import EnumerationCapExceeded, MsrdError, ParameterError
from .extend import ExtensionSpec, build_lattice, extended_distance_formula
from .field import make_tower
from .metrics import Composite
from .moore import (
    MooreSpec,
    check_msrd_conditions,
    doubly_extend,
    doubly_tail_rows,
    make_spec,
    moore_code,
    rank_tail_code,
    rank_tail_criterion,
    shifted_code,
    triple_extension_prediction,
    triply_extend,
)

TYPES = ("moore", "shifted", "doubly", "triply", "ranktail")
CSV_HEADER = ["q", "m", "mu", "r", "k", "type", "n", "len", "d_formula", "d_brute",
              "msrd", "predicted", "one_weight", "error"]


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _read_input(args) -> dict:
    if args.inp:
        with open(args.inp, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"input is not valid JSON: {exc}") from exc


def _tower(p: int, e: int, m: int):
    return make_tower(p, e, m)


def _prime_power(q: int) -> tuple[int, int]:
    fac = sympy.factorint(q)
    if q < 2 or len(fac) != 1:
        raise ParameterError(f"q = {q} is not a prime power")
    (p, e), = fac.items()
    return int(p), int(e)


# ---------------------------------------------------------------------------
# construction plumbing
# ---------------------------------------------------------------------------


def build(kind: str, spec: MooreSpec, tail: Optional[Sequence[int]] = None) -> tuple[LinearCode, Optional[dict]]:
    """Code for ``kind`` plus the extension record (t, tail rows, tail metric)."""
    if kind == "moore":
        return moore_code(spec), None
    if kind == "shifted":
        return shifted_code(spec), None
    if kind == "doubly":
        return doubly_extend(spec), {"t": 2, "tail_rows": doubly_tail_rows(spec.k), "tail": "hamming"}
    if kind == "triply":
        return triply_extend(spec), {"t": 3, "tail_rows": [0, 1, 2], "tail": "hamming"}
    if kind == "ranktail":
        if tail is None or len(tail) != 4:
            raise ParameterError("ranktail needs --tail a,b,c,d")
        return rank_tail_code(spec, *tail), {"t": 2, "tail_rows": [0, 1], "tail": "rank"}
    raise ParameterError(f"unknown construction type {kind!r}")


def construction_record(kind: str, spec: MooreSpec, tail=None) -> dict:
    code, ext = build(kind, spec, tail)
    out = code.to_json()
    rec = {"type": kind, "spec": spec.to_json()}
    if tail is not None:
        rec["tail"] = [spec.tower.element_to_json(x) for x in tail]
    out["construction"] = rec
    out["extension"] = ext
    return out


def _extension_spec(code: LinearCode, ext: dict) -> ExtensionSpec:
    t = int(ext["t"])
    rows = [int(i) for i in ext["tail_rows"]]
    if not isinstance(code.weight, Composite) or len(code.weight.parts) < 2:
        raise ParameterError("extended code must carry a composite weight")
    parts = code.weight.parts[:-1]
    base_w = parts[0] if len(parts) == 1 else Composite.of(parts)
    base = np.asarray(code.generator[:, : code.length - t])
    order = rows + [i for i in range(code.k) if i not in rows]
    return ExtensionSpec(code.tower, base[order], t, base_w, ext.get("tail", "hamming"))


def _predicted(kind: str, spec: MooreSpec, tail=None) -> Optional[bool]:
    if kind == "triply":
        return triple_extension_prediction(spec)
    if kind == "ranktail":
        return rank_tail_criterion(spec, *tail).msrd
    if spec.ell > spec.tower.q - 1:
        return None
    return check_msrd_conditions(spec).ok


def _parse_construction(data: dict):
    rec = data.get("construction")
    if not rec:
        return None, None, None
    spec = MooreSpec.from_json(rec["spec"])
    tail = None
    if "tail" in rec:
        tail = [spec.tower.element_from_json(x) for x in rec["tail"]]
    return rec["type"], spec, tail


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_field(args) -> int:
    T = _tower(args.p, args.e, args.m)
    out = T.to_json()
    out.update({"q": T.q, "order": T.order,
                "primitive": T.element_to_json(T.primitive_element())})
    _emit(args, _dump(out))
    return 0


def _spec_from_args(args) -> MooreSpec:
    if args.inp:
        with open(args.inp, encoding="utf-8") as fh:
            data = json.load(fh)
        return MooreSpec.from_json(data.get("spec", data))
    if args.p is None or args.mu is None or args.r is None:
        raise ParameterError("construct needs --p, --mu, --r (or --in SPEC.json)")
    T = _tower(args.p, args.e, args.m)
    k = args.k if args.k is not None else (3 if args.type == "triply" else 2)
    return make_spec(T, args.mu, args.r, k, ell=args.ell)


def cmd_construct(args) -> int:
    spec = _spec_from_args(args)
    tail = None
    if args.tail is not None:
        tail = [spec.tower.check(int(x)) for x in args.tail.split(",")]
    _emit(args, _dump(construction_record(args.type, spec, tail)))
    return 0


def cmd_verify(args) -> int:
    data = _read_input(args)
    code = LinearCode.from_json(data)
    ext = data.get("extension")
    out: dict = {}
    status = 0
    if args.mode in ("formula", "both"):
        if not ext:
            raise ParameterError("formula mode needs an extended code")
        es = _extension_spec(code, ext)
        lat = build_lattice(es, args.cap, args.jobs)
        out["formula"] = extended_distance_formula(lat, es.tail)
    if args.mode in ("bruteforce", "both", "verdict"):
        d = min_distance(code, args.cap, args.jobs)
        if args.mode != "verdict":
            out["bruteforce"] = d
        out["msrd"] = d == code.length - code.k + 1
    if args.mode == "verdict":
        kind, spec, tail = _parse_construction(data)
        out["predicted"] = None if kind is None else _predicted(kind, spec, tail)
    if args.mode == "both" and out["formula"] != out["bruteforce"]:
        status = 1
    _emit(args, _dump(out))
    return status


def cmd_weights(args) -> int:
    code = LinearCode.from_json(_read_input(args))
    dist = weight_distribution(code, args.cap, args.jobs)
    out = {"distribution": dist.to_json(), "one_weight": dist.is_one_weight,
           "min": dist.min_nonzero}
    if code.k:
        w, word = max_weight_codeword(code, args.cap, args.jobs)
        out["max"] = w
        out["max_codeword"] = [code.tower.element_to_json(int(x)) for x in word]
    _emit(args, _dump(out))
    return 0


def scan_row(q: int, m: int, mu: int, r: int, k: int, kind: str, cap: int, jobs: int) -> dict:
    row = dict.fromkeys(CSV_HEADER, None)
    row.update(q=q, m=m, mu=mu, r=r, k=k, type=kind)
    try:
        p, e = _prime_power(q)
        spec = make_spec(_tower(p, e, m), mu, r, k)
        code, ext = build(kind, spec)
        row["n"], row["len"] = spec.n, code.length
        d = min_distance(code, cap, jobs)
        row["d_brute"] = d
        row["msrd"] = d == code.length - code.k + 1
        row["predicted"] = _predicted(kind, spec)
        if ext and ext["tail"] == "hamming" and k <= spec.n:
            lat = build_lattice(_extension_spec(code, ext), cap, jobs)
            row["d_formula"] = extended_distance_formula(lat)
        if (kind == "doubly" and k == 2) or (kind == "triply" and q == 2):
            row["one_weight"] = weight_distribution(code, cap, jobs).is_one_weight
    except EnumerationCapExceeded as exc:
        row["error"] = f"cap exceeded ({exc.required} > {exc.cap})"
    except MsrdError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _q_values(args) -> list[int]:
    if args.q is not None:
        return list(args.q)
    return [p**e for p in (args.p or []) for e in (args.e or [1])]


def cmd_scan(args) -> int:
    kind = args.type
    ks = args.k if args.k is not None else [3 if kind == "triply" else 2]
    rows = []
    for q, m, mu, k in itertools.product(_q_values(args), args.m, args.mu, ks):
        for r in (args.r if args.r is not None else [m]):
            rows.append(scan_row(q, m, mu, r, k, kind, args.cap, args.jobs))
    if args.format == "json":
        _emit(args, _dump(rows))
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(["" if row[c] is None else str(row[c]).lower() if isinstance(row[c], bool) else row[c]
                    for c in CSV_HEADER])
    _emit(args, buf.getvalue().rstrip("\n"))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common(sp: argparse.ArgumentParser, needs_input: bool = True):
    if needs_input:
        sp.add_argument("--in", dest="inp", metavar="FILE", help="input JSON (default: stdin)")
    sp.add_argument("--out", metavar="FILE", help="output file (default: stdout)")
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP,
                    help="maximum number of codewords to enumerate (default: 2^22)")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msrdkit", description="Construct and verify doubly and triply extended MSRD codes."
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("field", help="describe the tower F_p < F_q < F_q^m")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--e", type=int, default=1)
    sp.add_argument("--m", type=int, default=1)
    _common(sp, needs_input=False)
    sp.set_defaults(func=cmd_field)

    sp = sub.add_parser("construct", help="build a Moore-type code")
    sp.add_argument("--type", choices=TYPES, default="moore")
    sp.add_argument("--p", type=int)
    sp.add_argument("--e", type=int, default=1)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--mu", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--k", type=int, help="dimension (default 2, or 3 for triply)")
    sp.add_argument("--ell", type=int, help="number of a-blocks (default q - 1)")
    sp.add_argument("--tail", help="rank tail a,b,c,d as integer element codes")
    _common(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="check the Singleton bound for a code")
    sp.add_argument("--mode", choices=("verdict", "formula", "bruteforce", "both"), default="verdict")
    _common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("weights", help="exact weight distribution")
    _common(sp)
    sp.set_defaults(func=cmd_weights)

    sp = sub.add_parser("scan", help="tabulate constructions over parameter ranges")
    sp.add_argument("--type", choices=TYPES[:4], default="doubly")
    sp.add_argument("--q", type=int, nargs="*")
    sp.add_argument("--p", type=int, nargs="*")
    sp.add_argument("--e", type=int, nargs="*")
    sp.add_argument("--m", type=int, nargs="*", default=[])
    sp.add_argument("--mu", type=int, nargs="*", default=[1])
    sp.add_argument("--r", type=int, nargs="*", help="default: r = m")
    sp.add_argument("--k", type=int, nargs="*")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    _common(sp, needs_input=False)
    sp.set_defaults(func=cmd_scan)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EnumerationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MsrdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed input: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
