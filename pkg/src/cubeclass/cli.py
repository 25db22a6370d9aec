"""Command-line surface: analyze, closure, kcube, spc, scheme, verify,
roundtrip, generate and bench subcommands over .cls class files.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
All outputs are deterministic for fixed inputs, flags and seeds; the one
exception is the ``seconds`` column of the bench CSV.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

from . import analysis, closure, compression, core, embedding, gen

THREADS_ENV = "CUBECLASS_THREADS"
ROUNDTRIP_N_CAP = 12

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2


class _UsageError(Exception):
    pass


def _load_class(path) -> core.ConceptClass:
    try:
        return core.read_cls(path)
    except FileNotFoundError:
        raise _UsageError(f"no such file: {path}")
    except core.FormatError as exc:
        raise _UsageError(f"{path}: {exc}")


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def cmd_analyze(args) -> int:
    C = _load_class(args.input)
    report = analysis.classify(C)
    text = _json_text(report.to_json_dict()) if args.json else report.to_text()
    _emit(text, args.output)
    return EXIT_OK


def cmd_closure(args) -> int:
    C = _load_class(args.input)
    if not len(C):
        raise _UsageError("the empty class has no intersection closure")
    closed = closure.intersection_closure(C)
    if args.output:
        core.write_cls(closed, args.output)
    else:
        sys.stdout.write(core.dumps_cls(closed))
    info: dict = {"input_size": len(C), "closure_size": len(closed)}
    if args.min_origin:
        if C.n > closure.SWEEP_CAP and not args.force:
            raise _UsageError(
                f"origin sweep needs 2^{C.n} closures; pass --force to insist"
            )
        d, origin = closure.min_closure_vc_bruteforce(C, force=True)
        info["min_closure_vc"] = d
        info["min_origin"] = str(origin)
    if args.json:
        sys.stdout.write(_json_text(info))
    else:
        for key, value in info.items():
            sys.stdout.write(f"{key}={value}\n")
    return EXIT_OK


def cmd_kcube(args) -> int:
    C = _load_class(args.input)
    if C.n > closure.SWEEP_CAP and not args.force:
        raise _UsageError(f"centre sweep needs 2^{C.n} centres; pass --force to insist")
    if args.k is not None:
        cert = closure.k_close_condition(C, args.k, force=True)
        if cert is None:
            sys.stdout.write(f"no certificate at k={args.k}\n")
            return EXIT_VERIFY
        payload = cert.to_json_dict()
    else:
        k = closure.min_k_close(C, force=True)
        cert = closure.k_close_condition(C, k, force=True)
        assert cert is not None
        payload = cert.to_json_dict()
    text = _json_text(payload) if args.json else (
        f"k={payload['k']}\nv={payload['v']}\ncubes={len(payload['cubes'])}\n"
    )
    _emit(text, args.output)
    return EXIT_OK


def cmd_spc(args) -> int:
    C = _load_class(args.input)
    if args.ordering == "random":
        ordering = embedding.CoordinateOrdering.shuffled(C.n, args.seed)
    else:
        ordering = embedding.CoordinateOrdering.identity(C.n)
    try:
        enlarged = embedding.shortest_path_closure(C, ordering)
    except embedding.NotIntersectionClosed as exc:
        raise _UsageError(str(exc))
    if args.output:
        core.write_cls(enlarged, args.output)
    report = embedding.verify_embedding(C, enlarged, strict=False)
    text = _json_text(report.to_json_dict()) if args.json else report.to_text()
    sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_scheme(args) -> int:
    C = _load_class(args.input)
    if args.method == "peel":
        scheme = compression.corner_peel(C)
        if scheme is None:
            sys.stderr.write("corner peeling got stuck\n")
            return EXIT_VERIFY
    else:
        try:
            scheme = compression.build_scheme(C)
        except compression.SchemeChainError as exc:
            sys.stderr.write(f"{exc}\n")
            return EXIT_VERIFY
        except ValueError as exc:
            raise _UsageError(str(exc))
    _emit(_json_text(scheme.to_json_dict()), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    C = _load_class(args.cls)
    try:
        with open(args.scheme, "r", encoding="utf-8") as fh:
            scheme = compression.RepresentationMap.from_json_dict(json.load(fh))
    except FileNotFoundError:
        raise _UsageError(f"no such file: {args.scheme}")
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise _UsageError(f"{args.scheme}: bad scheme file ({exc})")
    k = args.k if args.k is not None else scheme.size_bound
    try:
        ok, witness = compression.verify_scheme(C, scheme, k)
    except ValueError as exc:
        raise _UsageError(str(exc))
    if ok:
        sys.stdout.write(f"ok: scheme of size {scheme.size_bound} verifies at k={k}\n")
        return EXIT_OK
    sys.stdout.write(f"FAIL: {witness[0]} witness "
                     f"{' '.join(str(w) for w in witness[1:])}\n")
    return EXIT_VERIFY


def cmd_roundtrip(args) -> int:
    C = _load_class(args.input)
    n = C.n
    domains: list[tuple[int, ...]]
    if args.all_domains:
        if n > ROUNDTRIP_N_CAP and not args.force:
            raise _UsageError(
                f"exhaustive roundtrip over 2^{n} domains; pass --force to insist"
            )
        domains = [
            J
            for size in range(1, n + 1)
            for J in combinations(range(1, n + 1), size)
        ]
    else:
        rng = random.Random(args.seed)
        domains = []
        for _ in range(args.samples):
            size = rng.randint(1, n)
            domains.append(tuple(sorted(rng.sample(range(1, n + 1), size))))
    checked = 0
    try:
        for J in domains:
            projected = core.project(C, J)
            for labels in projected:
                rep = compression.compress_sample(C, J, labels)
                back = compression.reconstruct(C, J, rep)
                if back != labels:
                    sys.stdout.write(
                        f"FAIL: domain {list(J)} labels {labels} -> {sorted(rep)} -> {back}\n"
                    )
                    return EXIT_VERIFY
                checked += 1
    except compression.SchemeChainError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_VERIFY
    except ValueError as exc:
        raise _UsageError(str(exc))
    sys.stdout.write(f"ok: {checked} compress/reconstruct round trips\n")
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                spec = gen.GenSpec.from_json_dict(json.load(fh))
        except FileNotFoundError:
            raise _UsageError(f"no such file: {args.config}")
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise _UsageError(f"{args.config}: bad generator config ({exc})")
    else:
        if not args.family:
            raise _UsageError("give a family or --config")
        points = None
        n = args.n
        if args.points:
            points = gen.read_points_csv(args.points)
            n = len(points)
        if n is None:
            raise _UsageError("--n is required without --points")
        spec = gen.GenSpec(
            family=args.family,
            n=n,
            seed=args.seed,
            d=args.d,
            density=args.density,
            size=args.size,
            count=args.count,
            points=points,
        )
    try:
        C = gen.generate(spec)
    except ValueError as exc:
        raise _UsageError(str(exc))
    if args.output:
        core.write_cls(C, args.output)
        sys.stdout.write(f"wrote {len(C)} concepts (n={C.n}) to {args.output}\n")
    else:
        sys.stdout.write(core.dumps_cls(C))
    return EXIT_OK


_BENCH_FAMILIES = (
    "downward_closed",
    "random_intersection_closed",
    "monomial_union",
    "hamming_ball",
    "hyperrectangle",
)


def _bench_row(item: gen.GeneratedClass) -> tuple:
    C = item.cls
    t0 = time.perf_counter()
    enlarged = embedding.shortest_path_closure(C)
    seconds = time.perf_counter() - t0
    d = analysis.classify(C).vc_dimension
    d_star = analysis.classify(enlarged).vc_dimension
    ratio = 1.0 if d == 0 and d_star == 0 else (d_star / d if d > 0 else float("inf"))
    return (
        item.spec.family,
        C.n,
        d,
        len(C),
        len(enlarged),
        d_star,
        ratio,
        seconds,
    )


def cmd_bench(args) -> int:
    if args.bounds:
        lines = []
        for d in range(1, 5):
            bound = embedding.projection_cardinality_bound(d)
            threshold = 2 ** (11 * d)
            lines.append(
                f"d={d} bound={bound} threshold={threshold} "
                f"ok={'true' if bound < threshold else 'false'}"
            )
        sys.stdout.write("\n".join(lines) + "\n")
        return EXIT_OK
    families = args.families or list(_BENCH_FAMILIES)
    unknown = [f for f in families if f not in gen.FAMILIES]
    if unknown:
        raise _UsageError(f"unknown families: {unknown}")
    suite = gen.generate_suite(
        args.seed,
        {f: args.count for f in families},
        n_range=(args.n_min, args.n_max),
        d_max=args.d_max,
    )
    threads = max(1, int(os.environ.get(THREADS_ENV, "1")))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_bench_row, suite))
    else:
        rows = [_bench_row(item) for item in suite]
    lines = ["family,n,d,|C|,|C*|,d*,ratio,seconds"]
    max_ratio = 0.0
    for family, n, d, size, size_star, d_star, ratio, seconds in rows:
        if d > 0:
            max_ratio = max(max_ratio, ratio)
        lines.append(
            f"{family},{n},{d},{size},{size_star},{d_star},{ratio:.4f},{seconds:.4f}"
        )
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    sys.stdout.write(f"rows={len(rows)} max_ratio={max_ratio:.4f}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubeclass",
        description="Concept classes on the binary n-cube: analysis, closures, "
        "embeddings and unlabelled compression schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify a class file")
    p.add_argument("input")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("closure", help="intersection closure, optional origin sweep")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="write the closure as .cls here")
    p.add_argument("--min-origin", action="store_true",
                   help="also sweep all origins for the least closure VC")
    p.add_argument("--json", action="store_true")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("kcube", help="least k with a k-close cube certificate")
    p.add_argument("input")
    p.add_argument("--k", type=int, help="check this k instead of minimising")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_kcube)

    p = sub.add_parser("spc", help="shortest-path closure of an intersection-closed class")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="write the enlarged class as .cls here")
    p.add_argument("--ordering", choices=["identity", "random"], default="identity")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_spc)

    p = sub.add_parser("scheme", help="build an unlabelled compression scheme")
    p.add_argument("input")
    p.add_argument("--method", choices=["ccc", "peel"], default="ccc")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_scheme)

    p = sub.add_parser("verify", help="check a scheme file against a class file")
    p.add_argument("cls")
    p.add_argument("scheme")
    p.add_argument("--k", type=int, help="size bound to enforce (default: the file's)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("roundtrip", help="compress/reconstruct round trips")
    p.add_argument("input")
    p.add_argument("--all-domains", action="store_true")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("generate", help="write a generated class as .cls")
    p.add_argument("family", nargs="?", choices=list(gen.FAMILIES))
    p.add_argument("--config", help="JSON file with the generator spec")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--density", type=float)
    p.add_argument("--size", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", help="CSV of integer points (hyperrectangle)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="closure-growth sweep to CSV, or bound table")
    p.add_argument("--families", nargs="*")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--d-max", type=int, default=3)
    p.add_argument("--bounds", action="store_true",
                   help="print the projected-size bound table instead")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
