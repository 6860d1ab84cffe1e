"""Command-line front end.

Exit codes: 0 success, 2 usage or input error, 3 geometry error, 4 shape
mismatch. Errors are written to stderr as one line, ``<token>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .adapter import load_weights
from .delta import delta_hyperbolicity, metric_from_point_set
from .errors import HS2SDError, InputError
from .io import dump_point_sets, load_point_sets, matrix_csv, read_matrix_csv, rounded
from .pointset import merge
from .setdist import DistanceConfig, hs2sd_distance, nearest_prototype_classify, pairwise_distance_matrix
from .synth import split_supports, synthesize
from .trees import SURVEY_LIMIT, WORD_PRESETS, signature_collision_survey


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(f"input: {message}\n")
        raise SystemExit(2)


def _threads(args) -> int:
    if args.threads is not None:
        n = args.threads
    elif os.environ.get("HS2SD_THREADS"):
        try:
            n = int(os.environ["HS2SD_THREADS"])
        except ValueError:
            raise InputError(f"HS2SD_THREADS must be an integer, got {os.environ['HS2SD_THREADS']!r}") from None
    else:
        n = os.cpu_count() or 1
    if n < 1:
        raise InputError(f"thread count must be >= 1, got {n}")
    return n


def _config(args) -> DistanceConfig:
    adapter = None
    if args.lam == "adapter":
        if not args.adapter:
            raise InputError("--lambda adapter needs --adapter WEIGHTS.json")
        adapter = load_weights(args.adapter)
        lam = 0.5
    else:
        try:
            lam = float(args.lam)
        except ValueError:
            raise InputError(f"--lambda must be a number in [0, 1] or 'adapter', got {args.lam!r}") from None
    return DistanceConfig(
        lam=lam,
        tm_terms=args.tm_terms,
        adapter=adapter,
        symmetrize_adapter=args.symmetrize_adapter,
        normalize_adjacency=args.normalize_adjacency,
        canonical_order=args.canonical_order,
    )


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _by_id(sets, sid):
    for s in sets:
        if s.id == sid:
            return s
    raise InputError(f"unknown set id {sid!r}")


def cmd_dist(args) -> int:
    cfg = _config(args)
    sets = load_point_sets(args.file, args.curvature)
    report = hs2sd_distance(_by_id(sets, args.a), _by_id(sets, args.b), cfg)
    _emit({k: rounded(v) for k, v in report.as_dict().items()})
    return 0


def cmd_matrix(args) -> int:
    cfg = _config(args)
    sets = load_point_sets(args.file, args.curvature)
    if not sets:
        raise InputError("file holds no sets")
    m = pairwise_distance_matrix(sets, cfg, threads=_threads(args))
    sys.stdout.write(matrix_csv([s.id for s in sets], m))
    return 0


def cmd_classify(args) -> int:
    cfg = _config(args)
    supports = load_point_sets(args.support_file, args.curvature)
    queries = load_point_sets(args.query_file, args.curvature)
    result = nearest_prototype_classify(queries, supports, cfg, threads=_threads(args))
    doc = {
        "classes": result.classes,
        "predictions": [
            {
                "id": q.id,
                "label": q.label,
                "predicted": p,
                "logits": [rounded(v) for v in row],
            }
            for q, p, row in zip(queries, result.predicted, result.logits)
        ],
    }
    if queries and all(q.label is not None for q in queries):
        doc["accuracy"] = rounded(result.accuracy(q.label for q in queries))
    _emit(doc)
    return 0


def cmd_delta(args) -> int:
    path = args.file
    if path.lower().endswith(".csv"):
        d = read_matrix_csv(path)
    else:
        sets = load_point_sets(path, args.curvature)
        if args.set_id is not None:
            s = _by_id(sets, args.set_id)
        elif not sets:
            raise InputError("file holds no sets")
        else:
            s = merge(sets)
        d = metric_from_point_set(s)
    est = delta_hyperbolicity(d, args.mode, args.samples, args.seed, threads=_threads(args))
    doc = est.as_dict()
    doc["delta"] = rounded(doc["delta"])
    doc["relative"] = rounded(doc["relative"])
    _emit(doc)
    return 0


def cmd_tree_survey(args) -> int:
    if not 1 <= args.n <= SURVEY_LIMIT:
        raise InputError(f"tree survey is capped at n={SURVEY_LIMIT}, got {args.n}")
    words = args.words.split(",") if args.words else args.preset
    _emit(signature_collision_survey(args.n, words, args.max_power))
    return 0


def cmd_synth(args) -> int:
    sets = synthesize(
        args.classes,
        args.sets_per_class,
        args.points_per_set,
        args.dimension,
        args.curvature,
        args.spread,
        args.seed,
        min_separation=args.min_separation,
    )
    c = sets[0].curvature
    if args.query_out:
        supports, queries = split_supports(sets, args.supports_per_class)
        _write(args.output, dump_point_sets(supports, c))
        _write(args.query_out, dump_point_sets(queries, c))
    else:
        _write(args.output, dump_point_sets(sets, c))
    return 0


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _distance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", default="0.5",
                   help="weight of the geodesic term in [0, 1], or 'adapter' (default 0.5)")
    p.add_argument("--adapter", help="adapter weight file, used with --lambda adapter")
    p.add_argument("--symmetrize-adapter", action="store_true",
                   help="average the adapter output over both argument orders")
    p.add_argument("--tm-terms", type=int, default=4,
                   help="index of the last Thue-Morse word; n gives n+1 terms (default 4)")
    p.add_argument("--curvature", type=float, help="override the file's curvature")
    p.add_argument("--canonical-order", action="store_true",
                   help="sort each set by distance to its Einstein midpoint before the topological term")
    p.add_argument("--normalize-adjacency", action="store_true",
                   help="divide adjacency by its largest row sum before word evaluation")
    p.add_argument("--threads", type=int, help="worker threads (default: HS2SD_THREADS or all cores)")
    p.add_argument("--seed", type=int, default=0, help="accepted for uniformity; distance commands are not random")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hs2sd", description="Hyperbolic set-to-set distances and diagnostics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dist", help="distance between two sets of one file")
    p.add_argument("file")
    p.add_argument("a", help="first set id")
    p.add_argument("b", help="second set id")
    _distance_flags(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("matrix", help="CSV matrix of distances between all sets in a file")
    p.add_argument("file")
    _distance_flags(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser(
        "classify",
        help="nearest-prototype classification of query sets",
        description="Support sets sharing a label are concatenated into one prototype. "
        "When a query and a prototype differ in size the topological term is dropped "
        "(lambda forced to 1) for that pair. Ties go to the class seen first in the support file.",
    )
    p.add_argument("support_file")
    p.add_argument("query_file")
    _distance_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("delta", help="Gromov delta-hyperbolicity of a point-set file or CSV matrix")
    p.add_argument("file", help="point-set JSON or distance-matrix CSV (.csv)")
    p.add_argument("--set-id", help="use one set of a JSON file (default: all points pooled)")
    p.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    p.add_argument("--samples", type=int, default=10_000, help="quadruples drawn in sampled mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--curvature", type=float, help="override the file's curvature")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("tree-survey", help="word-trace signature collisions among trees on n vertices")
    p.add_argument("n", type=int)
    p.add_argument("--preset", choices=sorted(WORD_PRESETS), default="tm4",
                   help="word set (default tm4: the first four Thue-Morse words)")
    p.add_argument("--words", help="comma-separated explicit words over A/D, overrides --preset")
    p.add_argument("--max-power", type=int, help="highest power traced (default n)")
    p.set_defaults(func=cmd_tree_survey)

    p = sub.add_parser("synth", help="generate a labeled synthetic point-set file")
    p.add_argument("--classes", type=int, default=3)
    p.add_argument("--sets-per-class", type=int, default=10)
    p.add_argument("--points-per-set", type=int, default=25)
    p.add_argument("--dimension", type=int, default=8)
    p.add_argument("--curvature", type=float, default=0.05)
    p.add_argument("--spread", type=float, default=0.01, help="geodesic size of the per-coordinate perturbation")
    p.add_argument("--min-separation", type=float, default=0.5, help="minimum anchor distance, in ball radii")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("-o", "--output", default="-", help="output file (default stdout)")
    p.add_argument("--query-out", help="also split: supports go to --output, the rest here")
    p.add_argument("--supports-per-class", type=int, default=1)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HS2SDError as exc:
        msg = " ".join(str(exc).split())
        sys.stderr.write(f"{exc.token}: {msg}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
