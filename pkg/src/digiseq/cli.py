"""Command line entry point: ``digiseq <verb> ...``.

Structured results go to stdout as JSON (or CSV for point sets); with
``--out DIR`` the same output is also written to a file there.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import recipes
from .config import RECIPES, ConfigError, ExperimentConfig
from .discrepancy import l2_warnock, lp_quadrature, star_disc_exact, weighted_star
from .finite_field import FieldError, parse_matrices
from .haar import bmo_seminorm_dyadic, haar_energy, littlewood_paley_rhs, orlicz_estimate
from .laurent import PrecisionError
from .nets import block_net_scan, d_admissibility, exact_t, verify_net
from .pointset import read_csv, write_csv
from .sequences import GeneratorSet, generate_points, halton_points, preset

log = logging.getLogger("digiseq")


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _source_args(p, points=True):
    g = p.add_argument_group("point source")
    g.add_argument("--preset", default="vdc", help="vdc | identity | umatrix | faure | random | random(<seed>)")
    g.add_argument("--matrices", metavar="FILE", help="generating matrices, one block per coordinate")
    if points:
        g.add_argument("--halton", metavar="B1,B2,...", type=_int_list, help="Halton bases")
        g.add_argument("--points", metavar="FILE", help="read a point-set CSV instead of generating")
        g.add_argument("-N", type=int, default=16, help="number of points")
        g.add_argument("--start", type=int, default=0)
    g.add_argument("-s", type=int, default=1, help="dimension")
    g.add_argument("-b", type=int, default=2, help="prime base")
    g.add_argument("-m", type=int, default=None, help="digits of precision")


def _generator(a) -> GeneratorSet:
    if a.matrices:
        with open(a.matrices) as fh:
            return GeneratorSet(tuple(parse_matrices(fh.read())))
    m = a.m
    if m is None:
        n = getattr(a, "N", 1) + getattr(a, "start", 0)
        m = 1
        while a.b**m < n:
            m += 1
    return preset(a.preset, a.s, a.b, m, seed=a.seed)


def _points(a):
    if getattr(a, "points", None):
        return read_csv(a.points)
    if getattr(a, "halton", None):
        m = a.m
        if m is None:
            m = 1
            while min(a.halton) ** m < a.N + a.start:
                m += 1
        P = halton_points(a.N + a.start, a.halton, m)
        return P.slice(a.start, a.start + a.N) if a.start else P
    return generate_points(_generator(a), a.N, start=a.start, tag=a.preset)


def _emit(a, name, payload):
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if a.out:
        os.makedirs(a.out, exist_ok=True)
        ext = "csv" if isinstance(payload, str) else "json"
        with open(os.path.join(a.out, f"{name}.{ext}"), "w") as fh:
            fh.write(text)


def cmd_generate(a):
    P = _points(a)
    _emit(a, "points", write_csv(P, exact=not a.decimal))
    return 0


def cmd_tvalue(a):
    G = _generator(a)
    m_max = a.m_max if a.m_max is not None else G.precision
    _emit(a, "tvalue", exact_t(G, m_max).to_dict())
    return 0


def cmd_net(a):
    out = {}
    if a.verify_net:
        t, m = a.verify_net
        chk = verify_net(_points(a), t, m)
        out["verify_net"] = chk.to_dict()
    if a.blocks:
        t, m, k_max = a.blocks
        res = block_net_scan(_generator(a), m, k_max, t)
        out["blocks"] = [{"k": k, **r.to_dict()} for k, r in enumerate(res)]
    if not out:
        raise SystemExit("net: give --verify-net T M and/or --blocks T M K")
    _emit(a, "net", out)
    ok = out.get("verify_net", {}).get("ok", True) and all(r["ok"] for r in out.get("blocks", []))
    return 0 if ok else 1


def cmd_admissibility(a):
    P = _points(a)
    _emit(a, "admissibility", d_admissibility(P, a.prefix).to_dict())
    return 0


def cmd_disc(a):
    P = _points(a)
    out = []
    if a.star:
        out.append(star_disc_exact(P).to_dict())
    if a.l2:
        sq, val = l2_warnock(P, exact=True)
        out.append({"norm": "L2", "value": val, "exact_fraction": None,
                    "certificate": {"method": "warnock", "squared": str(sq)}})
    for p in a.lp or ():
        out.append(lp_quadrature(P, p, order=a.order, mc=a.mc, seed=a.seed).to_dict())
    if a.weighted:
        out.append(weighted_star(P, recipes.load_gammas(a.weighted)).to_dict())
    if not out:
        out.append(star_disc_exact(P).to_dict())
    _emit(a, "disc", out[0] if len(out) == 1 else out)
    return 0


def cmd_haar(a):
    P = _points(a)
    out = {}
    if a.haar is not None:
        out["energy"] = {"j_max": a.haar, "value": haar_energy(P, a.haar), "l2_squared": float(l2_warnock(P, exact=True)[0])}
    if a.lp_bound:
        p, j = a.lp_bound
        out["lp_bound"] = littlewood_paley_rhs(P, p, int(j))
    if a.bmo:
        out["bmo"] = bmo_seminorm_dyadic(P, *a.bmo)
    if a.orlicz is not None:
        out["orlicz"] = orlicz_estimate(P, a.orlicz, a.p_grid)
    if not out:
        raise SystemExit("haar: give --haar, --lp-bound, --bmo or --orlicz")
    _emit(a, "haar", out)
    return 0


def _run_recipe(cfg: ExperimentConfig, kronecker: bool = False):
    out, fmt = cfg.out, cfg.fmt
    if cfg.recipe == "figure1":
        return recipes.recipe_figure1(cfg.n_max, out, fmt)
    if cfg.recipe == "vdc-limsup":
        if len(cfg.p_list) > 1:
            log.warning("vdc-limsup uses the first p only (%g)", cfg.p_list[0])
        return recipes.recipe_vdc_lp_limsup(cfg.p_list[0], cfg.n_max, out, fmt)
    if cfg.recipe == "interlaced":
        return recipes.recipe_interlaced_l2(cfg.s, cfg.n_max, base_preset=cfg.base_preset, out_dir=out, fmt=fmt)
    if cfg.recipe == "metrical":
        if kronecker:
            res = recipes.recipe_kronecker_subsequence(cfg.s, cfg.b, cfg.m, cfg.n_max, cfg.reps, cfg.seed)
            res.save(out, fmt)
            return res
        return recipes.recipe_metrical(cfg.s, cfg.b, cfg.m, cfg.n_max, cfg.reps, cfg.seed, out, fmt)
    return recipes.recipe_weighted(cfg.s, cfg.n_list, cfg.delta, gamma_file=cfg.gamma_file, out_dir=out, fmt=fmt)


def cmd_recipe(a):
    overrides = dict(
        recipe=a.name, s=a.dim, b=a.base, m=a.prec, n_min=a.n_min, n_max=a.n_max,
        p_list=tuple(a.p) if a.p else None, n_list=tuple(a.n_list) if a.n_list else None,
        gamma_file=a.gamma_file, delta=a.delta, reps=a.reps, base_preset=a.base_preset,
        seed=a.seed_set, out=a.out, fmt=a.format_set,
    )
    try:
        cfg = ExperimentConfig.load(a.config, **overrides) if a.config else ExperimentConfig.from_text("", **overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    res = _run_recipe(cfg, a.kronecker)
    summary = res.summary()
    summary["config"] = cfg.to_text()
    json.dump(summary, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    for c in res.checks:
        tag = "PASS" if c.passed else "FAIL"
        note = "" if c.asserted else " (not asserted)"
        print(f"{tag} {c.name}{note}", file=sys.stderr)
    return 0 if res.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="digiseq", description="Digital sequences and their discrepancy.")
    ap.add_argument("--out", metavar="DIR", help="also write results into DIR")
    ap.add_argument("--format", choices=("csv", "json"), default=None, help="table format for recipes")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("generate", help="emit points as CSV")
    _source_args(p)
    p.add_argument("--decimal", action="store_true", help="17-digit decimals instead of fractions")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("tvalue", help="exact t-values from the rank condition")
    _source_args(p, points=False)
    p.add_argument("--m-max", type=int)
    p.set_defaults(func=cmd_tvalue)

    p = sub.add_parser("net", help="net verification by counting")
    _source_args(p)
    p.add_argument("--verify-net", nargs=2, type=int, metavar=("T", "M"))
    p.add_argument("--blocks", nargs=3, type=int, metavar=("T", "M", "K"), help="check blocks k=0..K")
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("admissibility", help="d-admissibility of a prefix")
    _source_args(p)
    p.add_argument("--prefix", type=int, help="use the first N points (default: all)")
    p.set_defaults(func=cmd_admissibility)

    p = sub.add_parser("disc", help="discrepancy norms")
    _source_args(p)
    p.add_argument("--star", action="store_true")
    p.add_argument("--l2", action="store_true")
    p.add_argument("--lp", type=str, action="append", metavar="P")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--mc", type=int, metavar="SAMPLES")
    p.add_argument("--weighted", metavar="GAMMAS")
    p.set_defaults(func=cmd_disc)

    p = sub.add_parser("haar", help="Haar-based norms")
    _source_args(p)
    p.add_argument("--haar", type=int, metavar="JMAX", help="truncated Parseval energy")
    p.add_argument("--lp-bound", nargs=2, type=float, metavar=("P", "JMAX"))
    p.add_argument("--bmo", nargs=2, type=int, metavar=("JMAX", "L"))
    p.add_argument("--orlicz", type=float, metavar="BETA")
    p.add_argument("--p-grid", type=_float_list, default=[2.0, 4.0, 8.0, 16.0])
    p.set_defaults(func=cmd_haar)

    p = sub.add_parser("recipe", help="run an experiment recipe")
    p.add_argument("name", choices=RECIPES)
    p.add_argument("--config", metavar="FILE")
    p.add_argument("--s", dest="dim", type=int)
    p.add_argument("--b", dest="base", type=int)
    p.add_argument("--m", dest="prec", type=int)
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--p", type=_float_list)
    p.add_argument("--n-list", type=_int_list)
    p.add_argument("--gamma-file")
    p.add_argument("--delta", type=float)
    p.add_argument("--reps", type=int)
    p.add_argument("--base-preset")
    p.add_argument("--kronecker", action="store_true", help="metrical: digital Kronecker subsequence variant")
    p.set_defaults(func=cmd_recipe)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    # recipe overrides must stay None when the flag is absent
    a.seed_set, a.format_set = a.seed, a.format
    if a.seed is None:
        a.seed = 0
    try:
        return a.func(a)
    except (ValueError, FieldError, PrecisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
