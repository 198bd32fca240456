"""Command-line surface.

Knapsack files are plain text: one instance per line, whitespace-separated
positive integers; `#` starts a comment; an optional leading token `n=<count>`
declares (and is validated against) the number of weights on the line.

Exit codes: 0 ok, 1 usage error, 2 parse error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from math import lcm

from . import oracle, pipeline, poleposet
from .steppoly import StepPolynomial


class ParseError(Exception):
    pass


def parse_knapsack_text(text: str) -> list[list[int]]:
    instances = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        declared = None
        if tokens[0].startswith("n="):
            try:
                declared = int(tokens[0][2:])
            except ValueError:
                raise ParseError(f"line {lineno}: bad count token {tokens[0]!r}")
            tokens = tokens[1:]
        try:
            values = [int(t) for t in tokens]
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}")
        if declared is not None and declared != len(values):
            raise ParseError(f"line {lineno}: declared n={declared} but found {len(values)} values")
        if len(values) < 2:
            raise ParseError(f"line {lineno}: need at least two weights")
        if any(v < 1 for v in values):
            raise ParseError(f"line {lineno}: weights must be positive")
        instances.append(values)
    if not instances:
        raise ParseError("no instances found")
    return instances


def load_knapsack_file(path: str) -> list[list[int]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_knapsack_text(fh.read())


def render_result_text(res: pipeline.TopKResult) -> str:
    lines = [f"# instance {list(res.original)}  (N={res.N}, k={res.k}, period bound {res.period_bound})"]
    if res.input_gcd != 1:
        lines.append(
            f"# input gcd {res.input_gcd} > 1: coefficients are for the reduced list "
            f"{list(res.alphas)}; counts vanish off {res.input_gcd}*Z and "
            f"E(a)({res.input_gcd}*t) = E(a/{res.input_gcd})(t)"
        )
    for m in sorted(res.coefficients, reverse=True):
        lines.append(f"t^{m}: {res.coefficients[m]}")
    return "\n".join(lines)


def _emit(res: pipeline.TopKResult, fmt: str, out) -> None:
    if fmt == "json":
        print(json.dumps(res.to_json_obj(), sort_keys=True), file=out)
    else:
        print(render_result_text(res), file=out)


def _clamped_k(k: int, n_weights: int) -> int:
    N = n_weights - 1
    if k > N:
        print(f"warning: k={k} exceeds N={N}; clamping to {N}", file=sys.stderr)
        return N
    return k


def cmd_topk(args) -> int:
    instances = load_knapsack_file(args.file)
    for alphas in instances:
        res = pipeline.top_k(
            alphas,
            _clamped_k(args.k, len(alphas)),
            time_limit=args.time_limit,
        )
        _emit(res, args.format, sys.stdout)
    return 0


def cmd_full(args) -> int:
    instances = load_knapsack_file(args.file)
    for alphas in instances:
        res = pipeline.full_quasipolynomial(alphas)
        _emit(res, args.format, sys.stdout)
        if args.cosets:
            for q, coeffs in res.coset_polynomials().items():
                poly = " + ".join(f"{c}*t^{m}" for m, c in enumerate(coeffs) if c) or "0"
                print(f"t = {q} mod {res.period_bound}: {poly}")
    return 0


def cmd_eval(args) -> int:
    instances = load_knapsack_file(args.file)
    for alphas in instances:
        res = pipeline.full_quasipolynomial(alphas)
        value = pipeline.evaluate(res, args.t)
        print(value.numerator if value.denominator == 1 else value)
    return 0


def cmd_predict(args) -> int:
    instances = load_knapsack_file(args.file)
    factored_lines = None
    if args.factored_file:
        with open(args.factored_file, "r", encoding="utf-8") as fh:
            factored_lines = [l.split("#", 1)[0].split() for l in fh.read().splitlines() if l.split("#", 1)[0].strip()]
        if len(factored_lines) != len(instances):
            raise ParseError("factored file must have one line per instance")
    for idx, alphas in enumerate(instances):
        inst = pipeline.KnapsackInstance(alphas)
        if factored_lines is not None:
            factored = [poleposet.parse_factored(tok) for tok in factored_lines[idx]]
            if len(factored) != len(inst.alphas):
                raise ParseError(f"instance {idx + 1}: factored entry count mismatch")
            fans = poleposet.largest_nontrivial_sublists(factored, inst.alphas)
        else:
            factored = [poleposet.factorize(a) for a in inst.alphas]
            fans = poleposet.largest_nontrivial_sublists(factored, inst.alphas)
            print("# weights factored internally (input model assumes factorizations given)", file=sys.stderr)
        print(f"instance {list(alphas)}")
        print(f"  largest sublist size with gcd > 1: ell = {fans.ell}")
        print(f"  highest non-constant coefficient degree: {fans.ell - 1}")
        print(f"  spectrum at threshold: {list(fans.values)}")
        print(f"  mobius: {{{', '.join(f'{f}: {fans.mu[f]}' for f in fans.values)}}}")
        nontrivial = [f for f in fans.values if f != 1]
        period = 1
        for f in nontrivial:
            period *= f
        print(f"  minimal period of that coefficient: {period}")
    return 0


def cmd_check(args) -> int:
    instances = load_knapsack_file(args.file)
    all_ok = True
    for alphas in instances:
        k = _clamped_k(args.k, len(alphas))
        res = pipeline.top_k(alphas, k)
        if args.corrupt:
            _apply_corruption(res, args.corrupt)
        report = oracle.compare(res, alphas, t_max=args.t_max)
        print(f"instance {alphas}:")
        for line in report.lines:
            print(f"  {line}")
        all_ok = all_ok and report.passed
    return 0 if all_ok else 3


def _apply_corruption(res: pipeline.TopKResult, spec: str) -> None:
    """Negative-control hook: damage one coefficient or one Mobius weight."""
    kind, _, payload = spec.partition(":")
    if kind == "coeff":
        m = int(payload) if payload else max(res.coefficients)
        if m not in res.coefficients:
            raise ParseError(f"no coefficient of degree {m} to corrupt")
        res.coefficients[m] = res.coefficients[m] + Fraction(1, 7)
    elif kind == "mobius":
        # recompute one coefficient with a damaged Mobius weight
        from .poleposet import gcd_spectrum, mobius
        from .pipeline import coefficient_extract, contribution_series, KnapsackInstance
        from .steppoly import sp_sum

        inst = KnapsackInstance(res.original)
        m = min(res.coefficients)
        spec_all = gcd_spectrum(inst.alphas, res.k)
        values = spec_all.at_threshold(m)
        mob = mobius(values)
        target = int(payload) if payload else max(values)
        if target not in mob:
            raise ParseError(f"{target} not in the spectrum at threshold {m}")
        mob[target] += 1
        parts = []
        for f in values:
            if mob[f] == 0:
                continue
            series = contribution_series(inst, f, -(m + 1))
            parts.append(coefficient_extract(series, m) * (-mob[f]))
        res.coefficients[m] = sp_sum(parts)
    else:
        raise ParseError(f"unknown corruption {spec!r} (use coeff[:m] or mobius[:f])")


_FAMILIES = ("random-3", "random-15", "repeat", "partition")


def generate_family(family: str, dim: int, seed: int, count: int) -> list[list[int]]:
    """Benchmark families; deterministic in (family, dim, seed) via the
    Mersenne-Twister generator seeded once per call."""
    rng = random.Random(seed)
    if dim < 2:
        raise ParseError("dim must be at least 2")
    out = []
    if family == "partition":
        out.append(list(range(1, dim + 1)))
    elif family == "random-3":
        for _ in range(count):
            out.append([1] + [rng.randint(100, 999) for _ in range(dim - 1)])
    elif family == "random-15":
        for _ in range(count):
            out.append([1] + [rng.randint(10**14, 10**15 - 1) for _ in range(dim - 1)])
    elif family == "repeat":
        for _ in range(count):
            v = rng.randint(100, 999)
            out.append([1] + [v] * (dim - 1))
    else:
        raise ParseError(f"unknown family {family!r}")
    return out


def cmd_bench_gen(args) -> int:
    instances = generate_family(args.family, args.dim, args.seed, args.count)
    lines = [f"# family={args.family} dim={args.dim} seed={args.seed}"]
    for inst in instances:
        lines.append(f"n={len(inst)} " + " ".join(str(v) for v in inst))
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="denumerant",
        description="Exact top coefficients of knapsack counting quasi-polynomials "
        "as step polynomials of the right-hand side.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("topk", help="top k+1 coefficients")
    sp.add_argument("file")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--time-limit", type=float, default=None, help="per-coefficient time budget in seconds")
    sp.set_defaults(func=cmd_topk)

    sp = sub.add_parser("full", help="entire quasi-polynomial")
    sp.add_argument("file")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--cosets", action="store_true", help="also print per-coset polynomials")
    sp.set_defaults(func=cmd_full)

    sp = sub.add_parser("eval", help="exact count at a single t")
    sp.add_argument("file")
    sp.add_argument("-t", type=int, required=True)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("predict", help="highest non-constant coefficient degree and its period")
    sp.add_argument("file")
    sp.add_argument("--factored-file", default=None, help='per-instance "p^e*q^f" tokens, one line per instance')
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("check", help="verify against the counting oracles (exit 3 on failure)")
    sp.add_argument("file")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("--t-max", type=int, default=None)
    sp.add_argument("--corrupt", default=None, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("bench-gen", help="write a benchmark knapsack file")
    sp.add_argument("--family", choices=_FAMILIES, required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_bench_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
