"""Command-line front end: ``extremal-lcs {align,gen,bounds,sweep,table1}``.

Exit codes: 0 success, 2 bad input, 3 DP tables over the memory cap.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .alignment import (
    DEFAULT_MEMORY_CAP,
    MemoryCapExceeded,
    Sequence,
    alignment_to_json,
)
from .bounds import NoRootError, chvatal_sankoff_bounds
from .experiments import (
    DEFAULT_SEED,
    ModelSpec,
    estimate_gamma,
    growth_sweep,
    records_to_csv,
    table1,
    trial_metrics,
    write_atomic,
)
from .metrics import default_alpha, restricted_hausdorff
from .models import (
    PRESETS,
    ModelParams,
    derived_stats,
    gen_independent,
    gen_related_fixed,
    gen_related_random,
    load_params,
)

EXIT_BAD_INPUT = 2
EXIT_MEMORY = 3
LARGE_N = 4000


class UsageError(Exception):
    pass


def default_seed() -> int:
    env = os.environ.get("LCS_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"LCS_SEED must be an integer, got {env!r}") from None


def parse_alpha(text: str):
    if text in ("auto", "off"):
        return text
    if text.startswith("fixed:"):
        try:
            v = float(text.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad alpha {text!r}") from None
        if not 0.0 < v < 1.0:
            raise UsageError("fixed alpha must lie in (0, 1)")
        return v
    raise UsageError("alpha must be auto, off or fixed:<value>")


def parse_n_list(text: str) -> list[int]:
    try:
        ns = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad n list {text!r}") from None
    if not ns or any(n < 1 for n in ns):
        raise UsageError("n values must be positive")
    return sorted(ns)


def model_spec(name: str, k: int | None, random_length: bool = False) -> ModelSpec:
    if name == "independent":
        return ModelSpec.independent(k or 4)
    try:
        params = load_params(name)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load model {name!r}: {exc}") from None
    return ModelSpec.related(params, random_length=random_length)


def _read_seq_file(path: str) -> str:
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise UsageError(str(exc)) from None
    if len(lines) > 1:
        raise UsageError(f"{path}: expected one sequence line, found {len(lines)}")
    text = lines[0] if lines else ""
    if not text.isascii() or not (text.isalpha() or text == ""):
        raise UsageError(f"{path}: sequences must be ASCII letters")
    return text


def cmd_align(args) -> dict:
    tx, ty = _read_seq_file(args.x_file), _read_seq_file(args.y_file)
    alphabet = args.alphabet or "".join(dict.fromkeys(tx + ty))
    try:
        x = Sequence.from_text(tx, alphabet)
        y = Sequence.from_text(ty, alphabet)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    alpha = parse_alpha(args.alpha)
    n = len(x)
    if alpha == "auto":
        alpha = default_alpha(n, args.keep_prob).value if n >= 2 else float("nan")
    elif alpha == "off":
        alpha = float("nan")
    cap = (1 << 62) if args.allow_large else args.memory_cap
    m = trial_metrics(x.symbols, y.symbols, alpha, memory_cap=cap)
    na = lambda v: None if isinstance(v, float) and math.isnan(v) else v
    haus = m["haus_max"] if args.norm == "max" else m["haus_l2"]
    report = {
        "L": m["L_n"],
        "n_x": len(x),
        "n_y": len(y),
        "highest": json.loads(alignment_to_json(m["highest"])),
        "lowest": json.loads(alignment_to_json(m["lowest"])),
        "norm": args.norm,
        "hausdorff": na(haus),
        "hausdorff_max": na(m["haus_max"]),
        "hausdorff_l2": na(m["haus_l2"]),
        "alpha": na(alpha),
        "restricted_hausdorff": None,
        "max_vertical": na(m["vert"]),
        "max_horizontal": na(m["horiz"]),
        "stretch": na(m["stretch"]),
    }
    if m["L_n"] and not math.isnan(alpha):
        report["restricted_hausdorff"] = restricted_hausdorff(m["highest"], m["lowest"], n, alpha,
                                                              args.norm)
    text = json.dumps(report, indent=2)
    if args.out:
        write_atomic(args.out, text + "\n")
    print(text)
    return report


def _distribution(args) -> np.ndarray:
    if args.k is not None:
        if args.k < 2:
            raise UsageError("--k must be >= 2")
        return np.full(args.k, 1.0 / args.k)
    spec = args.dist
    if spec.startswith("uniform-"):
        try:
            K = int(spec.split("-", 1)[1])
        except ValueError:
            raise UsageError(f"bad distribution {spec!r}") from None
        if K < 2:
            raise UsageError("uniform-K needs K >= 2")
        return np.full(K, 1.0 / K)
    try:
        with open(spec) as fh:
            raw = fh.read()
        try:
            p = np.asarray(json.loads(raw), dtype=float)
        except json.JSONDecodeError:
            p = np.asarray(raw.split(), dtype=float)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read distribution {spec!r}: {exc}") from None
    if p.ndim != 1 or p.size < 2 or np.any(p < 0) or not math.isclose(p.sum(), 1.0, abs_tol=1e-9):
        raise UsageError("distribution must be a probability vector with >= 2 entries")
    return p


def cmd_bounds(args) -> dict:
    p = _distribution(args)
    stats = derived_stats(ModelParams.independent(p))
    p_o, q = stats.p_o, stats.q
    try:
        lower, upper = chvatal_sankoff_bounds(p_o, q)
    except (NoRootError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    out = {"p_o": p_o, "q": q, "lower": lower, "upper": upper}
    line = f"p_o={p_o:.6f} q={q:.6f} lower={lower:.6f} upper={upper:.6f}"
    if args.estimate:
        est = estimate_gamma(ModelSpec.independent(p), args.n, 1.0, args.trials, args.seed, args.jobs)
        out.update(gamma_hat=est.mean, std_error=est.std_error)
        line += f" gamma_hat={est.mean:.4f} se={est.std_error:.4f}"
    print(line)
    return out


def cmd_sweep(args) -> None:
    spec = model_spec(args.model, args.k, args.random_length)
    ns = parse_n_list(args.n)
    if max(ns) > LARGE_N and not args.allow_large:
        raise UsageError(f"n above {LARGE_N} needs --allow-large")
    alpha = parse_alpha(args.alpha)
    cap = (1 << 62) if args.allow_large else args.memory_cap
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    summary, records = growth_sweep(spec, ns, args.trials, args.seed, args.jobs, alpha,
                                    allow_large=args.allow_large, memory_cap=cap)
    written = []
    try:
        write_atomic(args.out, records_to_csv(records))
        written.append(args.out)
        if args.summary:
            write_atomic(args.summary, summary.to_json() + "\n")
    except BaseException:
        for path in written:
            os.remove(path)
        raise
    for row in summary.per_n:
        print(f"n={row['n']} L_n={row['L_n']['mean']:.2f} haus={_f(row['haus_max']['mean'])} "
              f"vert={_f(row['vert']['mean'])} stretch={_f(row['stretch']['mean'])}")


def _f(v):
    return "NA" if v is None else f"{v:.3f}"


def cmd_gen(args) -> None:
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    letters = args.alphabet
    if args.model == "independent":
        K = args.k or 4
        x, y = gen_independent(args.n, np.full(K, 1.0 / K), args.seed)
        pair = None
    else:
        spec = model_spec(args.model, args.k, args.random_length)
        K = spec.params.alphabet_size
        gen = gen_related_random if args.random_length else gen_related_fixed
        pair = gen(args.n, spec.params, args.seed)
        x, y = pair.x, pair.y
    if letters is None:
        letters = "ACGT" if K <= 4 else "ABCDEFGHIJKLMNOPQRSTUVWXYZ"[:K]
    if len(letters) < K:
        raise UsageError(f"alphabet {letters!r} has fewer than {K} letters")
    write_atomic(f"{args.out}_x.txt", "".join(letters[c] for c in x) + "\n")
    write_atomic(f"{args.out}_y.txt", "".join(letters[c] for c in y) + "\n")
    if pair is not None:
        write_atomic(f"{args.out}_ancestry.json", json.dumps(pair.sidecar()) + "\n")
    print(f"wrote {args.out}_x.txt ({len(x)}) {args.out}_y.txt ({len(y)})"
          + (f" {args.out}_ancestry.json ({len(pair.related_pairs)} related pairs)" if pair else ""))


def cmd_table1(args) -> None:
    ks = [int(k) for k in args.k_list.replace(",", " ").split()]
    if any(k < 2 for k in ks):
        raise UsageError("K values must be >= 2")
    rows = table1(ks, args.n, args.trials, args.seed, args.jobs, estimate=not args.no_estimate)
    print("K\tlower\tupper\tgamma_hat")
    for r in rows:
        g = "" if r.gamma_hat is None else f"{r.gamma_hat:.4f}"
        print(f"{r.K}\t{r.lower:.6f}\t{r.upper:.6f}\t{g}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="extremal-lcs", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def seeded(p):
        p.add_argument("--seed", type=int, default=None, help=f"base seed (default $LCS_SEED or {DEFAULT_SEED})")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")

    def capped(p):
        p.add_argument("--memory-cap", type=int, default=DEFAULT_MEMORY_CAP, help="bytes for DP tables")
        p.add_argument("--allow-large", action="store_true", help="lift the memory / n caps")

    p = sub.add_parser("align", help="extremal alignments and distances of two sequence files")
    p.add_argument("x_file")
    p.add_argument("y_file")
    p.add_argument("--alphabet", help="letter order, e.g. ACGT (default: first appearance)")
    p.add_argument("--norm", choices=("max", "l2"), default="max")
    p.add_argument("--alpha", default="auto", help="auto | off | fixed:<value>")
    p.add_argument("--keep-prob", type=float, default=1.0, help="p used by --alpha auto")
    p.add_argument("--out", help="also write the JSON report here")
    capped(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("gen", help="generate a sequence pair")
    p.add_argument("--model", default="independent", help=f"independent, {', '.join(PRESETS)} or a JSON config")
    p.add_argument("--k", type=int, help="alphabet size for --model independent")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--random-length", action="store_true")
    p.add_argument("--alphabet")
    p.add_argument("--out", required=True, help="output prefix")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bounds", help="root bounds on the Chvatal-Sankoff constant")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--dist", help="uniform-K or a file with a probability vector")
    p.add_argument("--estimate", action="store_true", help="add a Monte Carlo estimate")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--trials", type=int, default=50)
    seeded(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", help="growth sweep over n, CSV + JSON summary")
    p.add_argument("--model", default="paper-sec7")
    p.add_argument("--k", type=int)
    p.add_argument("--random-length", action="store_true")
    p.add_argument("--n", default="250,500,1000,2000", help="comma-separated n values")
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--alpha", default="auto")
    p.add_argument("--out", required=True, help="trial CSV path")
    p.add_argument("--summary", help="summary JSON path")
    seeded(p)
    capped(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table1", help="bounds and estimates for uniform alphabets")
    p.add_argument("--k-list", default="2,3,4,5,6,7,8")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--no-estimate", action="store_true")
    seeded(p)
    p.set_defaults(func=cmd_table1)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = default_seed()
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except MemoryCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MEMORY
    return 0


if __name__ == "__main__":
    sys.exit(main())
