"""Command-line driver: one subcommand per experiment.

Exit codes: 0 success, 1 configuration error, 2 resource cap, 3 an
acceptance check failed under ``--assert``. Logs go to standard error;
results go to standard output or to ``--out`` (written atomically).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from . import __version__
from .config import SCHEMA_VERSION, ConfigError, atomic_write, derive_seed, load_config, options_for

log = logging.getLogger("diagprod")

# subcommand -> acceptance checks run by --assert
ASSERTS = {
    "chartable": [1, 2],
    "bekka": [3],
    "null": [4],
    "limitprod": [5],
    "wn": [6],
    "chabauty": [7],
    "stability": [8],
    "traces": [9],
    "growth": [10],
    "acceptance": list(range(1, 11)),
}


class ResourceCap(RuntimeError):
    pass


def parse_range(text: str) -> list[int]:
    """``"7-15"`` or ``"5,7,9"``."""
    text = str(text).strip()
    if "-" in text and "," not in text:
        lo, hi = text.split("-")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x.strip()]


def parse_floats(text) -> list[float]:
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, list):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x.strip()]


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        atomic_write(args.out, text)
        log.info("wrote %s", args.out)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json(data) -> str:
    return json.dumps(data, indent=1, sort_keys=True, default=str) + "\n"


def _spec(args):
    from .diagonal import DiagProductSpec

    r = args.r if args.r is not None else "const:1"
    return DiagProductSpec(args.base, args.d, r, args.max_index)


def _base_element(spec, args):
    from .basegroups import AZElement, LampElement
    from .markedgroups import evaluate_word

    if args.element:
        return AZElement.parse(args.element) if spec.base == "classical" else LampElement.parse(args.element)
    word = args.word or ("t" if spec.base == "classical" else "b")
    return evaluate_word(spec.base_marking(), word)


# -- subcommands --


def cmd_ball(args) -> int:
    from .markedgroups import ball
    from .diagonal import DiagMarking
    from .growth import level_marking

    if args.group == "diagonal":
        m = DiagMarking(_spec(args))
    elif args.group == "base":
        m = _spec(args).base_marking()
    else:
        m = level_marking(_spec(args), args.level)
    B = ball(m, args.radius, args.budget)
    _emit(args, B.growth_csv())
    if args.relations:
        atomic_write(args.relations, B.relations_json())
    return 0


def cmd_chabauty(args) -> int:
    from .growth import level_marking
    from .markedgroups import local_embedding_radius

    spec = _spec(args)
    top = args.levels or spec.finite_levels or 5
    rows = ["m,d,radius"]
    for m in range(1, top + 1):
        rad = local_embedding_radius(spec.base_marking(), level_marking(spec, m), args.horizon, args.budget)
        rows.append(f"{m},{spec.d(m)},{rad}")
    _emit(args, "\n".join(rows) + "\n")
    return 0


def cmd_chartable(args) -> int:
    from .characters import alt_table_csv, sym_table_csv, table_json

    if args.n < 1:
        raise ValueError("n must be positive")
    if args.format == "json":
        _emit(args, table_json(args.n))
    elif args.group == "sym":
        _emit(args, sym_table_csv(args.n))
    else:
        if args.n < 3:
            raise ValueError("alternating tables need n >= 3")
        _emit(args, alt_table_csv(args.n))
    return 0


def cmd_charbound(args) -> int:
    from .characters import max_nontrivial_value

    cyc = parse_range(args.cycle)
    rows = ["n,value,abs_value,character"]
    for n in parse_range(args.n_range):
        q = sum(c for c in cyc if c > 1)
        v, chi = max_nontrivial_value(n, tuple(cyc) + (1,) * (n - q), args.cap)
        rows.append(f"{n},{v},{abs(complex(v)):.12g},{chi}")
    _emit(args, "\n".join(rows) + "\n")
    return 0


def cmd_null(args) -> int:
    from .limits import CharFamily, classify_null, partial_products

    spec = _spec(args)
    g = _base_element(spec, args)
    fam = CharFamily.parse(args.chars)
    verdict = classify_null(g, fam, spec, args.N, args.eps_zero)
    if args.csv:
        start = verdict.certificate.get("start", 1) if isinstance(verdict.certificate, dict) else 1
        pp = partial_products(g, fam, spec, args.N, start=start or 1, skip_zero=True)
        atomic_write(args.csv, pp.to_csv())
    out = {"element": g.to_text(), "family": fam.describe(), "spec": spec.describe(), **verdict.to_json()}
    _emit(args, _json(out))
    return 0


def cmd_limitprod(args) -> int:
    from .limits import limit_product_signed

    ns = parse_range(args.n)
    cyc = parse_range(args.cycle)
    runs = []
    for i in range(args.trials):
        seed = derive_seed(args.seed, i) if args.chars == "random" else None
        run = limit_product_signed(cyc, ns, args.chars, seed=seed)
        d = run.to_json()
        d["trial"] = i
        d["seed"] = seed
        d["cauchy_gap_K"] = run.cauchy_gap(args.K)
        d["abs_K"] = run.abs_at(args.K)
        runs.append(d)
    _emit(args, _json({"master_seed": args.seed, "seed_scheme": "derive_seed(master_seed, trial)",
                       "K": args.K, "runs": runs}))
    return 0


def cmd_accscan(args) -> int:
    from .limits import accumulation_scan

    recs = accumulation_scan(parse_range(args.n_range), parse_range(args.cycle), args.eps_near, args.cap)
    rows = ["n,character,re,im,abs,flagged"]
    for r in recs:
        rows.append(f"{r.n},{r.character},{r.value.real:.12g},{r.value.imag:.12g},{abs(r.value):.12g},{int(r.flagged)}")
    _emit(args, "\n".join(rows) + "\n")
    return 0


def _group_marking(text: str):
    from .markedgroups import neumann_marking

    kind, _, arg = text.partition(":")
    if kind != "alt" or not arg.isdigit():
        raise ValueError(f"group must look like alt:N, got {text!r}")
    return neumann_marking(arg, [1], 1)


def cmd_stability(args) -> int:
    from .almostrep import RepSpec, correct, d_hs, defect, make_rep, perturb, trial_rng
    from .markedgroups import ball

    marking = _group_marking(args.group)
    rho = make_rep(RepSpec(args.rep, marking))
    orig = rho.generator_images()
    B = ball(marking, args.radius)
    summary = []
    for eps in parse_floats(args.eps):
        rows = []
        for i in range(args.trials):
            phi = perturb(rho, eps, trial_rng(args.seed, i), horizon=args.radius)
            res = correct(phi, max_iters=args.max_iters)
            rows.append(
                {
                    "trial": i,
                    "input_defect": defect(phi, B),
                    "converged": res.converged,
                    "status": res.status,
                    "iterations": res.iterations,
                    "defect": res.defect,
                    "distance_to_original": max(d_hs(res.images[l], orig[l]) for l in orig),
                }
            )
        conv = sum(r["converged"] for r in rows)
        within = sum(r["converged"] and r["distance_to_original"] <= 3 * eps for r in rows)
        summary.append({"eps": eps, "converged": conv, "within_3eps": within, "trials": rows})
    out = {"group": args.group, "rep": args.rep, "dim": rho.dim, "radius": args.radius,
           "master_seed": args.seed, "seed_scheme": "numpy default_rng([master_seed, trial])", "runs": summary}
    _emit(args, _json(out))
    return 0


def cmd_growth(args) -> int:
    from pathlib import Path

    from .growth import lef_upper, map_below_rf, map_lower, rf_upper, sr_lower, verify_curve

    spec = _spec(args)
    mc = map_lower(spec, args.levels, args.radius_budget, args.budget)
    lc = lef_upper(spec, args.n_max, args.level_horizon, args.budget, source=args.lef_source)
    rc = rf_upper(spec, args.n_max, args.level_horizon, args.budget)
    sc = sr_lower(mc, lc)
    curves = {"MAP_lower": mc, "LEF_upper": lc, "RF_upper": rc, "SR_lower": sc}
    report = {"spec": spec.describe(), "curves": {}}
    for k, c in curves.items():
        report["curves"][k] = {
            "points": [[p.n, p.value, round(p.log2, 6), p.cert_id] for p in c.points],
            "gaps": c.gaps,
            "failed_certificates": verify_curve(c, spec, mc, lc),
        }
        if args.out_dir:
            d = Path(args.out_dir)
            atomic_write(d / f"{k}.csv", c.to_csv())
            atomic_write(d / f"{k}.certificates.json", c.certificates_json())
    report["map_above_rf"] = map_below_rf(mc, rc)
    _emit(args, _json(report))
    return 0


def cmd_wn(args) -> int:
    from .diagonal import find_wn, verify_witness

    spec = _spec(args)
    res = find_wn(spec, args.level, args.R, args.budget)
    out = res.to_json()
    out["verified"] = res.found and verify_witness(spec, args.level, res.word, args.R)
    out["dimension_bound"] = spec.d(args.level) - 1 if res.found else None
    _emit(args, _json(out))
    return 0


def cmd_pik(args) -> int:
    from .diagonal import from_word, pi_k

    spec = _spec(args)
    a = from_word(spec, args.word)
    b = pi_k(a, args.k, args.domain, args.inclusion)
    _emit(args, _json({"input": a.to_json(), "output": b.to_json()}))
    return 0


def cmd_bekka(args) -> int:
    from .acceptance import bekka_windows

    ks = parse_range(args.k)
    win = bekka_windows(ks)
    if args.format == "json":
        _emit(args, _json({str(k): v for k, v in win.items()}))
    else:
        _emit(args, "".join(f"k={k}: {{{v[0]}..{v[-1]}}} size {len(v)}\n" for k, v in win.items()))
    return 0


def cmd_params(args) -> int:
    from .growth import admissible_params, check_admissible
    from .sequences import parse_sequence

    f = parse_sequence(args.f)
    d, r = admissible_params(f, args.horizon)
    out = {"f": f.take(args.horizon), "d": d, "r": r, "violations": check_admissible(d, r, f.take(args.horizon))}
    _emit(args, _json(out))
    return 0


def cmd_traces(args) -> int:
    from .characters import alt_characters, alt_class_function, alt_elements, gram_min_eigenvalue, gram_psd_check

    if not 3 <= args.n <= 7:
        raise ValueError("traces needs 3 <= n <= 7 (the Gram matrix is |Alt(n)| square)")
    G = alt_elements(args.n)
    rows = []
    for chi in alt_characters(args.n):
        f = alt_class_function(chi)
        rows.append({"character": str(chi), "min_eigenvalue": gram_min_eigenvalue(f, G), "psd": gram_psd_check(f, G)})
    _emit(args, _json({"group": f"Alt({args.n})", "order": len(G), "characters": rows}))
    return 0


def cmd_acceptance(args) -> int:
    return 0


COMMANDS = {
    "ball": cmd_ball,
    "chabauty": cmd_chabauty,
    "chartable": cmd_chartable,
    "charbound": cmd_charbound,
    "null": cmd_null,
    "limitprod": cmd_limitprod,
    "accscan": cmd_accscan,
    "stability": cmd_stability,
    "growth": cmd_growth,
    "wn": cmd_wn,
    "pik": cmd_pik,
    "bekka": cmd_bekka,
    "params": cmd_params,
    "traces": cmd_traces,
    "acceptance": cmd_acceptance,
}


def _add_spec(p, d="5,7,9"):
    p.add_argument("--base", choices=("classical", "lamplighter"), default="classical")
    p.add_argument("--d", default=d, help="list or rule: 5,7,9 | arith:2n+3 | primes-geq:5 | doubling:7")
    p.add_argument("--r", default=None, help="list or rule (default const:1)")
    p.add_argument("--max-index", type=int, default=32)


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors (exit 1); exit 2 is the resource cap
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = _Parser(prog="diagprod", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"diagprod {__version__} (config schema {SCHEMA_VERSION})")
    parser.add_argument("--config", help="JSON or TOML file with option values")
    parser.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--out", help="write the main output here instead of stdout")
        if name in ASSERTS:
            checks = ",".join(map(str, ASSERTS[name]))
            p.add_argument("--assert", dest="assert_", action="store_true",
                           help=f"also run acceptance checks {checks}; exit 3 on failure")
        subs[name] = p
        return p

    p = add("ball", "ball growth CSV")
    _add_spec(p)
    p.add_argument("--group", choices=("diagonal", "base", "level"), default="diagonal")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--radius", type=int, default=4)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--relations", help="also write the relation words as JSON")

    p = add("chabauty", "embedding radius of the base group against each level")
    _add_spec(p, "5,7,9,11,13")
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--horizon", type=int, default=10)
    p.add_argument("--budget", type=int, default=10**7)

    p = add("chartable", "symmetric or alternating character table")
    p.add_argument("--n", type=int, required=False, default=5)
    p.add_argument("--group", choices=("alt", "sym"), default="alt")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("charbound", "largest nontrivial normalized value at a cycle type")
    p.add_argument("--n-range", default="5-12")
    p.add_argument("--cycle", default="3")
    p.add_argument("--cap", type=int, default=16)

    p = add("null", "null classification of a base element")
    _add_spec(p, "arith:2n+3")
    p.add_argument("--element", help="e.g. 'shift=0; perm=(1 2 3)' or 'shift=0; lamps={0:1}'")
    p.add_argument("--word", help="word in the base generators (default t or b)")
    p.add_argument("--chars", default="standard")
    p.add_argument("--N", type=int, default=10_000)
    p.add_argument("--eps-zero", type=float, default=1e-9)
    p.add_argument("--csv", help="also write the partial products")

    p = add("limitprod", "products of normalized character values at a fixed cycle type")
    p.add_argument("--cycle", default="3")
    p.add_argument("--n", default="7-15")
    p.add_argument("--chars", default="random", choices=("random", "standard", "trivial"))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--K", type=int, default=9)

    p = add("accscan", "nontrivial normalized values close to 1")
    p.add_argument("--n-range", default="5-12")
    p.add_argument("--cycle", default="3")
    p.add_argument("--eps-near", type=float, default=0.05)
    p.add_argument("--cap", type=int, default=16)

    p = add("stability", "perturb and correct representations of a finite group")
    p.add_argument("--group", default="alt:5")
    p.add_argument("--rep", default="standard", choices=("trivial", "permutation", "standard", "regular"))
    p.add_argument("--eps", default="0.01,0.05")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=int, default=4)
    p.add_argument("--max-iters", type=int, default=50)

    p = add("growth", "MAP, LEF, RF and SR bound curves with certificates")
    _add_spec(p)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--radius-budget", type=int, default=8)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--level-horizon", type=int, default=3)
    p.add_argument("--lef-source", choices=("diagonal", "base"), default="diagonal")
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--out-dir", help="write one CSV and certificate sidecar per curve")

    p = add("wn", "shortest single-level kernel element")
    _add_spec(p)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--R", type=int, default=8)
    p.add_argument("--budget", type=int, default=10**7)

    p = add("pik", "apply the level-k endomorphism to a word")
    _add_spec(p)
    p.add_argument("--word", required=False, default="")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--domain", choices=("kernel", "finitary"), default="kernel")
    p.add_argument("--inclusion", choices=("natural", "symmetric"), default="natural")

    p = add("bekka", "support windows of the shift commutators")
    p.add_argument("--k", default="1,3,5,7,9")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("params", "admissible (d, r) for a target growth")
    p.add_argument("--f", default="linear:1", help="target values as a list or rule")
    p.add_argument("--horizon", type=int, default=5)

    p = add("traces", "positivity checks of traces (acceptance check 9 under --assert)")
    p.add_argument("--n", type=int, default=5)

    p = add("acceptance", "run the acceptance checks")
    p.add_argument("--only", default=None, help="comma-separated check numbers")
    return parser, subs


def _configure(parser, subs, argv) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if args.config:
        cfg = load_config(args.config)
        opts = options_for(cfg, args.command, subs)
        sp = subs[args.command]
        known = {a.dest for a in sp._actions}
        unknown = sorted(set(opts) - known - {"config", "log_level"})
        if unknown:
            raise ConfigError(f"unknown config keys for {args.command}: {unknown}")
        sp.set_defaults(**{k: v for k, v in opts.items() if k in known})
        args = parser.parse_args(argv)
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    from .markedgroups import BudgetExceeded

    parser, subs = build_parser()
    try:
        args = _configure(parser, subs, argv)
    except ConfigError as exc:
        print(f"diagprod: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(level=args.log_level.upper(), stream=sys.stderr, format="%(levelname)s %(message)s")
    try:
        code = COMMANDS[args.command](args)
        if getattr(args, "assert_", False) or args.command == "acceptance":
            from .acceptance import run_all

            only = ASSERTS[args.command]
            if args.command == "acceptance" and args.only:
                only = parse_range(args.only)
            results = run_all(only)
            for r in results:
                print(r.line(), file=sys.stderr if not args.command == "acceptance" else sys.stdout)
            if not all(r.passed for r in results):
                code = 3
        return code
    except (BudgetExceeded, ResourceWarning, MemoryError, ResourceCap) as exc:
        print(f"diagprod: resource cap: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, IndexError) as exc:
        print(f"diagprod: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
