"""Batch front door: experiment configs in, deterministic reports out.

Reports are JSON (CSV for series), written under the output directory with
the subcommand name and a hash of the config in the filename.  Identical
(config, seed, version) triples produce byte-identical reports regardless of
the worker count.  Exit codes: 0 success, 2 validation error, 3 work-limit
abort.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .bounds import (BoundParameters, RamificationMode, census_count_bounds,
                     choose_m, gamma_count_bound, kappa_constants,
                     prop_composition_height_bound)
from .config import ExperimentConfig, load_config
from .errors import ConfigError, WorkLimitExceeded
from .heights import (canonical_height_system, canonical_height_word,
                      hmin_estimate, system_bounds)
from .integrality import (averaged_ratio, gamma_set, ratio_series,
                          s_integral_census)
from .orbits import enumerate_tree, hypothesis_check, orbit_csv_rows
from .places import FactorizationError
from .ratmap import MapError, system_height
from .verify import run_all


def _report_meta(sub: str, config: ExperimentConfig | None, seed: int, prec: int) -> dict:
    meta = {"version": __version__, "subcommand": sub, "seed": seed,
            "precisionBits": prec}
    if config is not None:
        meta["configHash"] = config.canonical_hash()
    return meta


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    blob = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    path.write_text(blob, encoding="utf-8")


def _write_csv(path: Path, header: tuple, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _cmd_orbit(config: ExperimentConfig, out: Path, seed: int, workers: int) -> dict:
    prec = config.precision_bits
    records = enumerate_tree(config.system, config.point, config.depth,
                             dedupe=config.dedupe, limits=config.limits,
                             workers=workers)
    stem = f"orbit_{config.canonical_hash()}"
    _write_csv(out / f"{stem}.csv", ("word", "n", "x", "y", "height_nats"),
               orbit_csv_rows(records, prec))
    hypotheses = hypothesis_check(config.system, config.point_a, config.depth,
                                  limits=config.limits)
    report = {
        "meta": _report_meta("orbit", config, seed, prec),
        "recordCount": len(records),
        "dedupe": config.dedupe,
        "depth": config.depth,
        "hypotheses": hypotheses.to_json(),
        "csv": f"{stem}.csv",
    }
    _write_json(out / f"{stem}.json", report)
    print(f"orbit: {len(records)} records to depth {config.depth} "
          f"(hypotheses verified to depth {hypotheses.depth_checked}, "
          f"not a proof) -> {out / (stem + '.json')}")
    return report


def _cmd_canonical(config: ExperimentConfig, out: Path, seed: int, workers: int) -> dict:
    prec = config.precision_bits
    bounds = system_bounds(config.system, config.c_mode)
    est = canonical_height_word(config.system, config.word, config.point,
                                depth=config.height_depth, bounds=bounds,
                                prec=prec, bit_cap=config.limits.bit_cap)
    stem = f"canonical_{config.canonical_hash()}"
    report = {
        "meta": _report_meta("canonical", config, seed, prec),
        "word": config.word.to_json(),
        "point": config.point.to_json(),
        "cMode": config.c_mode,
        "estimate": est.to_json(prec),
        "degreeProduct": str(est.degree_product),
    }
    _write_json(out / f"{stem}.json", report)
    print(f"canonical: [{est.lo(prec):.12g}, {est.hi(prec):.12g}] at depth "
          f"{est.depth} -> {out / (stem + '.json')}")
    return report


def _cmd_system_height(config: ExperimentConfig, out: Path, seed: int, workers: int) -> dict:
    prec = config.precision_bits
    bounds = system_bounds(config.system, config.c_mode)
    est = canonical_height_system(config.system, config.point, config.depth,
                                  bounds=bounds, node_cap=config.limits.node_cap,
                                  bit_cap=config.limits.bit_cap, prec=prec,
                                  workers=workers)
    stem = f"system-height_{config.canonical_hash()}"
    report = {
        "meta": _report_meta("system-height", config, seed, prec),
        "point": config.point.to_json(),
        "cMode": config.c_mode,
        "estimate": est.to_json(prec),
    }
    _write_json(out / f"{stem}.json", report)
    print(f"system-height: [{est.lo(prec):.12g}, {est.hi(prec):.12g}] at depth "
          f"{est.depth} -> {out / (stem + '.json')}")
    return report


def _cmd_gamma(config: ExperimentConfig, out: Path, seed: int, workers: int) -> dict:
    prec = config.precision_bits
    bounds = system_bounds(config.system, config.c_mode)
    record = gamma_set(config.system, config.word, config.places,
                       config.point_a, config.point, config.epsilon,
                       config.depth, bounds=bounds, prec=prec,
                       limits=config.limits)
    stem = f"gamma_{config.canonical_hash()}"
    report = {"meta": _report_meta("gamma", config, seed, prec),
              **record.to_json(prec)}
    _write_json(out / f"{stem}.json", report)
    verdicts = "".join({"in": "I", "out": "O", "ambiguous": "?"}[v.value]
                       for _, v in record.members)
    print(f"gamma: verdicts {verdicts} (n=0..{record.depth}) -> {out / (stem + '.json')}")
    return report


def _cmd_census(config: ExperimentConfig, out: Path, seed: int, workers: int) -> dict:
    prec = config.precision_bits
    census = s_integral_census(config.system, config.point, config.places,
                               config.depth, limits=config.limits,
                               workers=workers)
    bound_detail = None
    if config.bound_parameters is not None:
        hmin = hmin_estimate(config.system, config.point,
                             config.hmin_period_bound, config.height_depth,
                             prec=prec)
        lo = hmin.estimate.lo(prec)
        if not hmin.preperiodic and lo > 0:
            h_f = system_height(config.system).to_float(prec)
            cors = census_count_bounds(config.system, len(config.places), h_f, lo,
                                    config.bound_parameters)
            census = replace(census, bound_value=cors.tree_count)
            bound_detail = cors.to_json()
    payload = census.to_json(prec)
    if bound_detail is not None:
        payload["boundDetail"] = bound_detail
    stem = f"census_{config.canonical_hash()}"
    report = {"meta": _report_meta("census", config, seed, prec), **payload}
    _write_json(out / f"{stem}.json", report)
    print(f"census: {census.count} S-integral points to depth {config.depth} "
          f"-> {out / (stem + '.json')}")
    return report


def _cmd_ratios(config: ExperimentConfig, out: Path, seed: int, workers: int) -> dict:
    prec = config.precision_bits
    terms = ratio_series(config.system, config.word, config.point,
                         config.depth, prec=prec, limits=config.limits)
    stem = f"ratios_{config.canonical_hash()}"
    _write_csv(out / f"{stem}.csv", ("n", "a_bits", "b_bits", "ratio", "verdict"),
               [t.to_csv_row() for t in terms])
    payload = {
        "meta": _report_meta("ratios", config, seed, prec),
        "terms": [{"n": t.n, "ratio": t.ratio, "verdict": t.verdict} for t in terms],
        "csv": f"{stem}.csv",
    }
    if config.averaged_level is not None:
        avg = averaged_ratio(config.system, config.point, config.averaged_level,
                             prec=prec, limits=config.limits)
        payload["averaged"] = avg.to_json()
    _write_json(out / f"{stem}.json", payload)
    defined = [t.ratio for t in terms if t.ratio is not None]
    last = f"{defined[-1]:.6g}" if defined else "none"
    print(f"ratios: {len(terms)} terms, last defined ratio {last} "
          f"-> {out / (stem + '.json')}")
    return payload


def _cmd_bounds(config: ExperimentConfig, out: Path, seed: int, workers: int) -> dict:
    prec = config.precision_bits
    params = config.bound_parameters or BoundParameters()
    system = config.system
    bounds_list = system_bounds(system, config.c_mode)
    h_f = system_height(system).to_float(prec)

    est_p = canonical_height_word(system, config.word, config.point,
                                  depth=config.height_depth, bounds=bounds_list,
                                  prec=prec, bit_cap=config.limits.bit_cap)
    est_a = canonical_height_system(system, config.point_a,
                                    depth=min(config.depth, 6),
                                    bounds=bounds_list,
                                    node_cap=config.limits.node_cap,
                                    bit_cap=config.limits.bit_cap, prec=prec)
    hmin = hmin_estimate(system, config.point, config.hmin_period_bound,
                         config.height_depth, bounds=bounds_list, prec=prec)

    kappa_nt = kappa_constants(system, RamificationMode.NOT_TOTALLY_RAMIFIED)
    kappa_do = kappa_constants(system, RamificationMode.DISTINCT_ORBIT)
    chosen = choose_m(config.epsilon, kappa_nt)
    payload = {
        "meta": _report_meta("bounds", config, seed, prec),
        "systemHeight": h_f,
        "kappa": {"notTotallyRamified": kappa_nt.to_json(),
                  "distinctOrbit": kappa_do.to_json()},
        "thresholdM": {"m": chosen.m, "smallCaseBound": chosen.small_case_bound},
        "compositionHeightBound": {
            str(n): prop_composition_height_bound(n, system.max_degree,
                                                  system_height(system)).to_float(prec)
            for n in range(1, 5)
        },
        "heightP": est_p.to_json(prec),
        "heightA": est_a.to_json(prec),
        "hmin": {"lo": hmin.estimate.lo(prec), "hi": hmin.estimate.hi(prec),
                 "witnessWord": hmin.witness_word.to_json(),
                 "preperiodic": hmin.preperiodic,
                 "wordsScanned": hmin.words_scanned},
        "parameters": params.to_json(),
    }
    if est_p.lo(prec) > 0:
        gamma_bound = gamma_count_bound(system, len(config.places),
                                        config.epsilon, est_a.hi(prec), h_f,
                                        est_p.lo(prec), params)
        payload["gammaBound"] = gamma_bound.to_json()
    if not hmin.preperiodic and hmin.estimate.lo(prec) > 0:
        cors = census_count_bounds(system, len(config.places), h_f,
                                hmin.estimate.lo(prec), params)
        payload["censusBounds"] = cors.to_json()
    stem = f"bounds_{config.canonical_hash()}"
    _write_json(out / f"{stem}.json", payload)
    print(f"bounds: m={chosen.m}, hmin lo={payload['hmin']['lo']:.6g} "
          f"-> {out / (stem + '.json')}")
    return payload


def _cmd_verify(out: Path, seed: int, prec: int) -> int:
    results = run_all(seed=seed, prec=prec)
    width = max(len(name) for name, _, _ in results)
    failures = 0
    for name, ok, detail in results:
        status = "pass" if ok else "FAIL"
        print(f"{name:<{width}}  {status}  {detail}")
        if not ok:
            failures += 1
    payload = {
        "meta": _report_meta("verify", None, seed, prec),
        "results": [{"suite": name, "passed": ok, "detail": detail}
                    for name, ok, detail in results],
    }
    _write_json(out / f"verify_seed{seed}.json", payload)
    print(f"verify: {len(results) - failures}/{len(results)} suites passed")
    return 0 if failures == 0 else 1


_SUBCOMMANDS = {
    "orbit": _cmd_orbit,
    "canonical": _cmd_canonical,
    "system-height": _cmd_system_height,
    "gamma": _cmd_gamma,
    "census": _cmd_census,
    "ratios": _cmd_ratios,
    "bounds": _cmd_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitint",
        description="Exact heights, semigroup orbits, and integral-point censuses over Q")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in list(_SUBCOMMANDS) + ["verify"]:
        p = sub.add_parser(name)
        if name != "verify":
            p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--depth", type=int, default=None, help="override config depth")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--precision", type=int, default=None,
                       help="override precision bits")
        p.add_argument("--out", default="reports", help="report directory")
    return parser


def _error_json(kind: str, exc: Exception) -> str:
    payload = {"error": str(exc), "kind": kind}
    witness = getattr(exc, "witness", None)
    if witness is not None:
        payload["witness"] = str(witness)
    return json.dumps(payload, sort_keys=True)


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(2_000_000)  # orbit dumps print big integers
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    try:
        if args.subcommand == "verify":
            prec = args.precision or 128
            return _cmd_verify(out, args.seed, prec)
        config = load_config(args.config)
        if args.depth is not None or args.precision is not None:
            raw = dict(config.raw)
            if args.depth is not None:
                raw["depth"] = args.depth
            if args.precision is not None:
                raw["precisionBits"] = args.precision
            from .config import parse_config
            config = parse_config(raw)
        handler = _SUBCOMMANDS[args.subcommand]
        handler(config, out, args.seed, max(1, args.workers))
        return 0
    except (ConfigError, MapError, FactorizationError, ValueError) as exc:
        print(_error_json("validation", exc), file=sys.stderr)
        return 2
    except WorkLimitExceeded as exc:
        print(_error_json("work-limit", exc), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
