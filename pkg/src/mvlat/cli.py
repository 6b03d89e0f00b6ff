"""Command-line entry point.

Exit codes: 0 success, 2 domain error, 1 internal invariant failure, 64 usage.
Relative ``--out`` paths are resolved against ``$MVLAT_OUT`` when it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import complex as cxm
from . import diagram as dg
from . import geocode, minima, stabilize, words, xilist
from .errors import DomainError, InvariantError, MVError

EXIT_OK, EXIT_INVARIANT, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _lattice_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--a", type=int, required=required)
    p.add_argument("--b", type=int, required=required)
    p.add_argument("--N", type=int, required=required)


def _source_args(p: argparse.ArgumentParser) -> None:
    _lattice_args(p, required=False)
    p.add_argument("--set", dest="set_file", help="axial set JSON with 'points' (and optional 'anchors')")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", default=None, help="output format (text, json, csv, svg, dot)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps and audits")
    common.add_argument("--seedless", action="store_true", help="accepted for compatibility; runs are deterministic")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")

    p = _Parser(prog="mvlat", description="Minkowski-Voronoi complexes of rank-1 lattices.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("vrm", parents=[common], help="relative minima of a lattice or axial set")
    _source_args(s)
    s.add_argument("--method", choices=("brute", "fast"), default="brute")

    s = sub.add_parser("complex", parents=[common], help="Minkowski-Voronoi complex as JSON")
    _source_args(s)
    s.add_argument("--mode", choices=("open_interior", "literal"), default="open_interior")

    s = sub.add_parser("diagram", parents=[common], help="canonical diagram (svg, dot or json)")
    _source_args(s)
    s.add_argument("--mode", choices=("open_interior", "literal"), default="open_interior")

    s = sub.add_parser("encode", parents=[common], help="geometric code of a triple")
    _lattice_args(s)

    s = sub.add_parser("decode", parents=[common], help="triple of a geometric code")
    for name in ("alpha", "beta", "gamma", "a", "t", "u"):
        s.add_argument(f"--{name}", type=int, required=True)

    s = sub.add_parser("xi", parents=[common], help="dump the candidate list")
    _lattice_args(s)

    s = sub.add_parser("sweep", parents=[common], help="stabilization grid of a combinatorial part")
    s.add_argument("--comb", required=True, help="alpha,beta,gamma,a")
    s.add_argument("--t-max", type=int, default=6)
    s.add_argument("--u-max", type=int, default=6)

    s = sub.add_parser("word", parents=[common], help="diagram word of a lattice")
    _lattice_args(s)
    s.add_argument("--names", action="store_true", help="show calibrated character names")

    s = sub.add_parser("audit", parents=[common], help="letter audit over a = 2 lattices")
    s.add_argument("--b-max", type=int, default=11)
    s.add_argument("--n-max", type=int, default=1000)
    s.add_argument("--dictionary", default=None, help="write the letter dictionary JSON here")
    return p


# -- helpers ------------------------------------------------------------------


def _spec(args) -> minima.LatticeSpec:
    spec = minima.LatticeSpec(args.a, args.b, args.N)
    spec.require_coprime()
    return spec


def _source(args):
    """``(axial set or None, lattice spec or None)`` from --set or --a/--b/--N."""
    have_lattice = any(getattr(args, k) is not None for k in ("a", "b", "N"))
    if args.set_file and have_lattice:
        raise UsageError("give either --set or --a/--b/--N, not both")
    if args.set_file:
        data = json.loads(Path(args.set_file).read_text())
        return minima.AxialSet.from_points(data["points"], data.get("anchors")), None
    if not all(getattr(args, k) is not None for k in ("a", "b", "N")):
        raise UsageError("need --set or all of --a, --b, --N")
    return None, _spec(args)


def _complex(args) -> cxm.MVComplex:
    s, spec = _source(args)
    if spec is not None:
        if args.mode == "literal":
            return cxm.build_complex(minima.fold_rank1(spec)[0], mode="literal")
        return cxm.complex_from_minima(minima.lattice_vrm(spec), (spec.N,) * 3)
    return cxm.build_complex(s, mode=args.mode)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _fmt(args, default: str, allowed: tuple[str, ...]) -> str:
    fmt = args.format or default
    if fmt not in allowed:
        raise UsageError(f"--format must be one of {', '.join(allowed)} for {args.command}")
    return fmt


# -- commands -----------------------------------------------------------------


def cmd_vrm(args) -> str:
    fmt = _fmt(args, "text", ("text", "json"))
    s, spec = _source(args)
    if spec is not None:
        pts = xilist.vrm_fast(spec) if args.method == "fast" else minima.lattice_vrm(spec)
    else:
        pts = minima.vrm_bruteforce(s)
    pts = sorted(pts)
    if fmt == "json":
        return _dump({"minima": [list(p) for p in pts]})
    return "".join(" ".join(map(str, p)) + "\n" for p in pts)


def cmd_complex(args) -> str:
    _fmt(args, "json", ("json",))
    cx = _complex(args)
    out = cx.to_json()
    out["signature"] = cxm.signature(cx)
    return _dump(out)


def cmd_diagram(args):
    fmt = _fmt(args, "svg", ("svg", "dot", "json"))
    d = dg.layout(_complex(args))
    rep = dg.validate_diagram(d)
    if not rep.ok:
        raise InvariantError(f"diagram has {len(rep.violations)} violations: {rep.violations[:3]}")
    return dg.render(d, fmt)


def cmd_encode(args) -> str:
    fmt = _fmt(args, "text", ("text", "json"))
    code = geocode.encode_triple(args.a, args.b, args.N)
    if fmt == "json":
        return _dump({**code.to_json(), **geocode.check_conditions(code)})
    return str(code) + "\n"


def cmd_decode(args) -> str:
    fmt = _fmt(args, "text", ("text", "json"))
    code = geocode.GeometricCode(args.alpha, args.beta, args.gamma, args.a, args.t, args.u)
    a, b, n = geocode.decode_code(code)
    if fmt == "json":
        return _dump({"a": a, "b": b, "N": n, **geocode.check_conditions(code)})
    return f"a={a} b={b} N={n}\n"


def cmd_xi(args) -> str:
    fmt = _fmt(args, "text", ("text", "json"))
    _spec(args)
    code = geocode.encode_triple(args.a, args.b, args.N)
    entries = xilist.xi_list(code)
    if fmt == "json":
        return _dump(
            {
                "code": code.to_json(),
                "entries": [
                    {
                        "slot": e.slot,
                        "kind": e.kind,
                        "provenance": list(e.provenance),
                        "raw_x": e.raw_x,
                        "point": list(e.point) if e.point else None,
                    }
                    for e in entries
                ],
            }
        )
    lines = []
    for e in entries:
        pt = " ".join(map(str, e.point)) if e.point else "invalid"
        prov = ",".join(map(str, e.provenance))
        lines.append(f"{e.slot}\t{e.kind}\t{prov}\t{e.raw_x if e.raw_x is not None else '-'}\t{pt}")
    return "\n".join(lines) + "\n"


def _comb(text: str) -> tuple[int, int, int, int]:
    try:
        parts = tuple(int(x) for x in text.replace("(", "").replace(")", "").split(","))
    except ValueError as exc:
        raise UsageError(f"--comb must be four integers, got {text!r}") from exc
    if len(parts) != 4:
        raise UsageError(f"--comb must be four integers, got {text!r}")
    return parts


def cmd_sweep(args) -> str:
    fmt = _fmt(args, "csv", ("csv", "json"))
    grid = stabilize.sweep(_comb(args.comb), args.t_max, args.u_max, jobs=args.jobs)
    if fmt == "json":
        return _dump(stabilize.detect_thresholds(grid).to_json())
    return stabilize.FamilyReport({grid.comb: grid}, {}).csv()


def cmd_word(args) -> str:
    fmt = _fmt(args, "text", ("text", "json"))
    spec = _spec(args)
    d = words.lattice_diagram(spec)
    dictionary = words.LetterDictionary()
    w = words.word_of(d, dictionary, spec.key())
    if args.names:
        words.load_names(dictionary)
    if fmt == "json":
        return _dump({"lattice": spec.key(), "convention": words.CONVENTION, "letters": w.text(dictionary).split(), "serials": w.serials})
    return w.text(dictionary) + "\n"


def cmd_audit(args) -> str:
    fmt = _fmt(args, "text", ("text", "json"))
    rep = words.alphabet_audit(words.a2_corpus(args.b_max, args.n_max), jobs=args.jobs)
    if args.dictionary:
        rep.dictionary.save(_out_path(args.dictionary))
    summary = {
        "lattices": rep.lattices,
        "classes": rep.classes,
        "head_classes": sorted(rep.head_classes),
        "consistent": rep.consistent,
        "occurrences": {str(k): v for k, v in sorted(rep.occurrences.items())},
    }
    if fmt == "json":
        return _dump(summary)
    return (
        f"lattices={rep.lattices} classes={rep.classes} head_classes={len(rep.head_classes)} "
        f"within_fourteen={rep.consistent}\n"
    )


COMMANDS = {
    "vrm": cmd_vrm,
    "complex": cmd_complex,
    "diagram": cmd_diagram,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "xi": cmd_xi,
    "sweep": cmd_sweep,
    "word": cmd_word,
    "audit": cmd_audit,
}


def _out_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get("MVLAT_OUT")
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        stderr.write(str(exc).rstrip("\n") + "\n")
        return EXIT_USAGE
    except DomainError as exc:
        stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except MVError as exc:
        stderr.write(f"invariant failure: {exc}\n")
        return EXIT_INVARIANT
    except FileNotFoundError as exc:
        stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    data = result if isinstance(result, bytes) else result.encode()
    if args.out:
        p = _out_path(args.out)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_bytes(data)
    elif hasattr(stdout, "buffer"):
        stdout.flush()
        stdout.buffer.write(data)
        stdout.buffer.flush()
    else:
        stdout.write(data.decode())
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
