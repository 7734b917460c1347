"""Command line front end: normaliser runs, subdirect benchmarks, self test."""

import argparse
import hashlib
import json
import math
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .driver import ChainConfig, symmetric_normaliser
from .errors import BudgetExceededError, DegreeCapError, GroupParseError
from .families import family_group, oracle_corpus
from .group import Group, parse_group_file, symmetric_group
from .perm import Permutation
from .search import normaliser_in, oracle_normaliser

# below this order the emitted generator list is canonicalised, so equal
# groups print the same generators no matter which method found them
CANONICAL_ORDER_CAP = 5000


def _default_seed():
    return int(os.environ.get("SYMNORM_SEED", "0"))


def _config(args):
    return ChainConfig(transitive_cutoff=args.cutoff_transitive,
                       intransitive_cutoff=args.cutoff_intransitive,
                       large_index=args.large_index,
                       node_limit=args.node_limit,
                       time_limit=args.time_limit,
                       seed=args.seed)


def _config_flags(parser):
    base = ChainConfig()
    parser.add_argument("--seed", type=int, default=_default_seed())
    parser.add_argument("--cutoff-transitive", type=int,
                        default=base.transitive_cutoff)
    parser.add_argument("--cutoff-intransitive", type=int,
                        default=base.intransitive_cutoff)
    parser.add_argument("--large-index", type=int, default=base.large_index)
    parser.add_argument("--node-limit", type=int, default=base.node_limit)
    parser.add_argument("--time-limit", type=float, default=base.time_limit)


def _compute(group, method, config):
    if method == "chain":
        return symmetric_normaliser(group, config=config)
    if method == "backtrack":
        return normaliser_in(symmetric_group(group.degree), group,
                             budget=config.budget()), None
    return oracle_normaliser(group), None


def _canonical_generators(group):
    if group.order() > CANONICAL_ORDER_CAP:
        return [p.cycle_string() for p in group.generators]
    chosen = []
    cur = Group(group.degree, [])
    for raw in sorted(p._img for p in group.elements()):
        perm = Permutation._from_raw(raw)
        if cur.contains(perm):
            continue
        chosen.append(perm)
        cur = Group(group.degree, chosen)
        if cur.order() == group.order():
            break
    return [p.cycle_string() for p in chosen]


def _result_json(group, res, method, trace, with_trace, time_ms):
    n = group.degree
    if res.order() % group.order() != 0 \
            or math.factorial(n) % res.order() != 0 \
            or not res.contains_group(group):
        raise RuntimeError("result fails the containment checks")
    out = {
        "degree": n,
        "input_order": str(group.order()),
        "normalizer_order": str(res.order()),
        "generators": _canonical_generators(res),
        "method": method,
        "time_ms": time_ms,
    }
    if with_trace and trace is not None:
        out["trace"] = [[label, str(order), str(index)]
                        for label, order, index in trace.steps]
    return out


def cmd_normalizer(args):
    if args.file == "-":
        text = sys.stdin.read()
    else:
        with open(args.file, "r", encoding="utf-8") as fh:
            text = fh.read()
    group = parse_group_file(text)
    config = _config(args)
    t0 = time.monotonic()
    res, trace = _compute(group, args.method, config)
    time_ms = int((time.monotonic() - t0) * 1000)
    out = _result_json(group, res, args.method, trace, args.trace, time_ms)
    print(json.dumps(out))
    return 0


def _case_seed(master, index):
    digest = hashlib.sha256(("%d:%d" % (master, index)).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _family_spec(args):
    if ":" in args.family:
        return args.family
    if args.family in ("klein", "klein-regular"):
        return args.family
    if args.deg is None:
        raise ValueError("--deg is required for family %r" % args.family)
    return "%s:%d" % (args.family, args.deg)


def _bench_case(payload):
    (index, spec, copies, gens, seed, method, config) = payload
    base = family_group(spec)
    d = base.degree
    rng = random.Random(seed)
    perms = []
    for _ in range(gens):
        raw = []
        for i in range(copies):
            raw.extend(v + d * i for v in base.random_element(rng)._img)
        perms.append(Permutation._from_raw(tuple(raw)))
    sub = Group(d * copies, perms)
    t0 = time.monotonic()
    res, _ = _compute(sub, method, config)
    time_ms = int((time.monotonic() - t0) * 1000)
    if not res.contains_group(sub) or res.order() % sub.order() != 0:
        raise RuntimeError("case %d fails the containment checks" % index)
    return {
        "case": index,
        "family": spec,
        "copies": copies,
        "gens": gens,
        "seed": seed,
        "method": method,
        "degree": sub.degree,
        "input_order": str(sub.order()),
        "normalizer_order": str(res.order()),
        "time_ms": time_ms,
    }


def cmd_bench_subdirect(args):
    try:
        spec = _family_spec(args)
        family_group(spec)
    except ValueError as exc:
        raise GroupParseError(str(exc)) from None
    config = _config(args)
    payloads = [(i, spec, args.copies, args.gens,
                 _case_seed(args.seed, i), args.method, config)
                for i in range(args.count)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_case, payloads))
    else:
        rows = [_bench_case(p) for p in payloads]
    times = []
    for row in rows:
        print(json.dumps(row))
        times.append(row["time_ms"])
    avg = sum(times) / len(times) if times else 0.0
    top = max(times) if times else 0
    summary = {
        "summary": True,
        "count": len(rows),
        "avg_ms": round(avg, 3),
        "max_ms": top,
        "max_avg_ratio": round(top / avg, 3) if avg else None,
    }
    print(json.dumps(summary))
    return 0


def cmd_selftest(args):
    corpus = oracle_corpus(args.seed)
    if args.limit:
        corpus = corpus[: args.limit]
    passed = failed = 0
    for label, group in corpus:
        want = oracle_normaliser(group)
        try:
            got, trace = symmetric_normaliser(group)
        except (BudgetExceededError, DegreeCapError) as exc:
            print("FAIL %s: %s" % (label, exc))
            failed += 1
            continue
        ok = (got.order() == want.order()
              and got.contains_group(want)
              and got.contains_group(group)
              and math.factorial(group.degree) % got.order() == 0
              and all(order <= prev for (_, prev, _), (_, order, _)
                      in zip(trace.steps, trace.steps[1:])))
        if ok:
            passed += 1
        else:
            failed += 1
            print("FAIL %s: chain %d, oracle %d"
                  % (label, got.order(), want.order()))
    codes = sum(1 for label, _ in corpus if label.startswith("code2"))
    print("corpus size: %d (code-subdirect cases: %d)" % (len(corpus), codes))
    print("passed: %d failed: %d" % (passed, failed))
    return 0 if failed == 0 else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="symnorm",
        description="normaliser of a permutation group in the full "
                    "symmetric group on its domain")
    sub = parser.add_subparsers(dest="command", required=True)

    norm = sub.add_parser("normalizer",
                          help="compute the normaliser of the group in a file")
    norm.add_argument("file", help="group file path, or - for stdin")
    norm.add_argument("--method", choices=("chain", "backtrack", "oracle"),
                      default="chain")
    norm.add_argument("--trace", action="store_true",
                      help="include the chain steps in the JSON output")
    _config_flags(norm)

    bench = sub.add_parser("bench-subdirect",
                           help="time normalisers of random subdirect "
                                "products of a family group")
    bench.add_argument("--family", default="cyclic",
                       help="family name, optionally with arguments after "
                            "a colon, e.g. dihedral or wreath:2,3")
    bench.add_argument("--deg", type=int, default=None,
                       help="family parameter when not given after a colon")
    bench.add_argument("--copies", type=int, default=2)
    bench.add_argument("--gens", type=int, default=2)
    bench.add_argument("--count", type=int, default=10)
    bench.add_argument("--method", choices=("chain", "backtrack", "oracle"),
                       default="chain")
    bench.add_argument("--jobs", type=int, default=1)
    _config_flags(bench)

    self_ = sub.add_parser("selftest",
                           help="check the chain against the exhaustive "
                                "oracle over the built-in corpus")
    self_.add_argument("--limit", type=int, default=0,
                       help="only run the first N corpus groups")
    self_.add_argument("--seed", type=int, default=_default_seed())

    args = parser.parse_args(argv)
    try:
        if args.command == "normalizer":
            return cmd_normalizer(args)
        if args.command == "bench-subdirect":
            return cmd_bench_subdirect(args)
        return cmd_selftest(args)
    except GroupParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return 1
    except BudgetExceededError as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return 2
    except DegreeCapError as exc:
        print("degree cap: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
