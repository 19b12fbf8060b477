"""Command-line interface.

Exit codes: 0 success (and EMBEDS), 3 NOT_EMBEDS from ``embed``, 2 usage
errors and guarded refusals, 1 internal check failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import cache, f2mod
from .cohomology import (
    DEFAULT_GUARD,
    PSL2Context,
    embedding_decide,
    h1,
    h2_bar,
    witness_verify,
)
from .errors import CohomlabError, GuardError, UsageError
from .field import check_odd_prime_power
from .matgroup import PSL, SL
from .report import SCHEMA, build_report, detail_lines, report_json, summary_table

log = logging.getLogger("cohomlab")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_NOT_EMBEDS = 3
WITNESS_FORMAT = "cohomlab-witness"
MODULES = ("I", "V", "W", "U", "borel-T")


def _dump(obj: dict) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, sort_keys=True, indent=2)


def parse_q_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            q = int(part)
        except ValueError:
            raise UsageError(f"not an integer: {part!r}") from None
        check_odd_prime_power(q)
        out.append(q)
    if not out:
        raise UsageError("empty q list")
    return out


def single_q(text: str) -> int:
    qs = parse_q_list(text)
    if len(qs) != 1:
        raise UsageError("this command takes exactly one q")
    return qs[0]


def make_context(q: int, args) -> PSL2Context:
    """Context for q, backed by the on-disk cache when a cache directory is configured."""
    directory = cache.cache_dir_from(getattr(args, "cache_dir", None))
    if directory is None:
        return PSL2Context(q)
    psl, pres = cache.load_or_build(directory, q, PSL)
    sl, _ = cache.load_or_build(directory, q, SL)
    ctx = PSL2Context(q, psl=psl, sl=sl)
    ctx.__dict__["pres"] = pres
    return ctx


def cmd_embed(args) -> int:
    q = single_q(args.q)
    ctx = make_context(q, args)
    verdict = embedding_decide(ctx)
    out = {"q": q, "verdict": verdict.verdict, "witness_digest": verdict.witness_digest()}
    if verdict.embeds:
        report = witness_verify(ctx, verdict.witness)
        if not report.passed:
            log.error("witness failed verification: %s", report.failure)
            return EXIT_INTERNAL
        out["closure_size"] = report.closure_size
        out["transcript_digest"] = report.digest()
        if args.witness_out:
            G = ctx.psl
            doc = {
                "format": WITNESS_FORMAT,
                "version": 1,
                "q": q,
                "field_modulus": list(ctx.field.modulus),
                "generator_matrices": [list(G.elements[g]) for g in G.generators],
                "witness": [v.hex() for v in verdict.witness],
                "vector_length": ctx.V.dim,
                "relator_count": ctx.pres.nrel,
                "transcript_digest": report.digest(),
            }
            Path(args.witness_out).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        out["certificate"] = {"rank": verdict.certificate[0], "augmented_rank": verdict.certificate[1]}
    if args.json:
        print(_dump(out))
    else:
        print(verdict.verdict)
    return EXIT_OK if verdict.embeds else EXIT_NOT_EMBEDS


def cohomology_dim(ctx: PSL2Context, module: str, degree: int, method: str, guard: int) -> tuple[int, str]:
    if module == "borel-T":
        group, m, pres = ctx.borel, ctx.T, ctx.borel_pres
    else:
        group, m, pres = ctx.psl, ctx.module(module), ctx.pres
    if method == "shapiro":
        if module != "V":
            raise UsageError("the shapiro method applies to module V only")
        group, m, pres = ctx.borel, ctx.T, ctx.borel_pres
    if degree == 0:
        return f2mod.fixed_points(m).dim, "fixed-points"
    if degree == 1:
        system = ctx.system(m) if pres is ctx.pres else None
        return h1(pres, m, system).dim, "presentation"
    if degree == 2:
        return h2_bar(group, m, guard).dim, "bar"
    raise UsageError("degree must be 0, 1 or 2")


def cmd_cohomology(args) -> int:
    q = single_q(args.q)
    ctx = make_context(q, args)
    dim, method = cohomology_dim(ctx, args.module, args.degree, args.method, args.guard_order)
    if args.method == "shapiro":
        method = f"shapiro/{method}"
    out = {"q": q, "module": args.module, "degree": args.degree, "dim": dim, "method": method}
    if args.json:
        print(_dump(out))
    else:
        group = "Borel" if args.module == "borel-T" else "G"
        name = "T" if args.module == "borel-T" else args.module
        print(f"dim H^{args.degree}({group}, {name}) = {dim}  [q={q}, method={method}]")
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    text = args.q_list or args.q
    if not text:
        raise UsageError("give --q or --q-list")
    qs = parse_q_list(text)
    reports = []
    for q in qs:
        try:
            ctx = make_context(q, args)
        except CohomlabError as exc:
            log.error("q=%s: %s", q, exc)
            ctx = None
        reports.append(build_report(q, args.guard_order, ctx))
    if args.json:
        print(json.dumps(report_json(reports), sort_keys=True, indent=2))
    else:
        print(summary_table(reports))
        for r in reports:
            print()
            print("\n".join(detail_lines(r)))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_INTERNAL


def cmd_module_structure(args) -> int:
    q = single_q(args.q)
    ctx = make_context(q, args)
    V, W, U = ctx.V, ctx.W, ctx.U
    mode = lambda d: "exhaustive" if d <= f2mod.EXHAUSTIVE_MAX_DIM else "sampled"  # noqa: E731
    minimal = f2mod.unique_minimal_check(V, mode(V.dim), ctx.I_in_V)
    irr = f2mod.is_irreducible(U, mode(U.dim))
    dec = f2mod.decompose_two_dim_commutant(U, mode(U.dim))
    out = {
        "q": q,
        "dim_V": V.dim,
        "dim_W": W.dim,
        "dim_U": U.dim,
        "fixed_points_V": f2mod.fixed_points(V).dim,
        "fixed_points_W": f2mod.fixed_points(W).dim,
        "I_unique_minimal": {"passed": minimal.passed, "mode": minimal.mode, "checked": minimal.checked},
        "End_V_dim": f2mod.endomorphism_dim(V),
        "End_U_dim": f2mod.endomorphism_dim(U),
        "U_irreducible": {"passed": irr.passed, "mode": irr.mode},
        "U_commutant": dec.kind,
        "U_summand_dims": dec.summand_dims,
        "U_summands_absolutely_irreducible": dec.summands_absolutely_irreducible,
    }
    if args.json:
        print(_dump(out))
    else:
        for key in sorted(out):
            print(f"{key}: {out[key]}")
    return EXIT_OK


def cmd_cache(args) -> int:
    directory = cache.cache_dir_from(args.cache_dir)
    if directory is None:
        raise UsageError(f"give --cache-dir or set {cache.ENV_VAR}")
    if args.action == "clear":
        n = cache.clear(directory) if directory.exists() else 0
        print(f"removed {n} cache files")
        return EXIT_OK
    qs = parse_q_list(args.q) if args.q else None
    if args.action == "build":
        if not qs:
            raise UsageError("cache build needs --q")
        for q in qs:
            for kind in (PSL, SL):
                cache.load_or_build(directory, q, kind)
                print(f"built {cache.cache_path(directory, q, kind)}")
        return EXIT_OK
    paths = sorted(directory.glob("*.cache")) if directory.exists() else []
    if qs:
        paths = [cache.cache_path(directory, q, k) for q in qs for k in (PSL, SL)]
    infos = []
    for p in paths:
        try:
            info = cache.inspect(p)
            info["file"] = p.name
        except (OSError, CohomlabError) as exc:
            info = {"file": p.name, "error": str(exc)}
        infos.append(info)
    if args.json:
        print(_dump({"entries": infos}))
    else:
        for info in infos:
            if "error" in info:
                print(f"{info['file']}: unreadable ({info['error']})")
            else:
                rel = "-" if info["relators"] is None else info["relators"]
                print(f"{info['file']}: {info['kind']} q={info['q']} order {info['order']}, "
                      f"{info['generators']} generators, {rel} relators")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cohomlab", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=None, help=f"group cache directory (default: ${cache.ENV_VAR})")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--guard-order", type=int, default=DEFAULT_GUARD,
                        help="largest group order allowed for bar-complex H^2 (default %(default)s)")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("embed", parents=[common], help="does Z2 wr PSL2(q) contain SL2(q)?")
    e.add_argument("--q", required=True)
    e.add_argument("--witness-out", default=None, help="write the embedding witness as JSON")
    e.set_defaults(func=cmd_embed)

    c = sub.add_parser("cohomology", parents=[common], help="dimension of a low-degree cohomology group")
    c.add_argument("--q", required=True)
    c.add_argument("--module", choices=MODULES, required=True)
    c.add_argument("--degree", type=int, choices=(0, 1, 2), required=True)
    c.add_argument("--method", choices=("direct", "shapiro"), default="direct")
    c.set_defaults(func=cmd_cohomology)

    v = sub.add_parser("verify-paper", parents=[common], help="full verification ledger per q")
    v.add_argument("--q", default=None, help="comma-separated q values")
    v.add_argument("--q-list", default=None, help="comma-separated q values")
    v.set_defaults(func=cmd_verify_paper)

    m = sub.add_parser("module-structure", parents=[common], help="submodule structure of V, W and U")
    m.add_argument("--q", required=True)
    m.set_defaults(func=cmd_module_structure)

    k = sub.add_parser("cache", parents=[common], help="manage the group cache")
    k.add_argument("action", choices=("build", "inspect", "clear"))
    k.add_argument("--q", default=None)
    k.set_defaults(func=cmd_cache)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except GuardError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CohomlabError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
