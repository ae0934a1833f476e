"""Monte Carlo harness: constant estimates, per-trial statistics, growth sweeps.

Every trial draws from its own stream ``SeedSequence([base_seed, n, trial])``
so results do not depend on how trials are scheduled across workers.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .alignment import DEFAULT_MEMORY_CAP, extremal_alignments, lcs_length
from .bounds import chvatal_sankoff_bounds
from .metrics import (
    alignment_graph,
    default_alpha,
    hausdorff,
    max_horizontal_distance,
    max_vertical_distance,
    nonuniqueness_stretch,
    restricted_hausdorff,
)
from .models import (
    PRESETS,
    ModelParams,
    gen_independent,
    gen_related_fixed,
    gen_related_random,
    trial_rng,
)

KINDS = ("independent", "related-fixed", "related-random")
STATS = ("L_n", "haus_max", "haus_l2", "haus_restricted", "vert", "horiz", "stretch")
CSV_HEADER = ["n", "model", "seed", "trial", "L_n", "haus_max", "haus_l2", "haus_restricted",
              "alpha", "vert", "horiz", "stretch", "n_x", "n_y", "related_pairs"]
DEFAULT_SEED = 1729
DEFAULT_MAX_SWEEP_N = 4000


@dataclass(frozen=True)
class ModelSpec:
    """Which generator a trial uses.

    For ``independent`` the two strings are i.i.d. with the marginal letter
    law of ``params`` and ``keep_prob`` is ignored.
    """

    kind: str
    params: ModelParams

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"model kind must be one of {KINDS}")

    @classmethod
    def independent(cls, k_or_dist) -> "ModelSpec":
        dist = np.full(k_or_dist, 1.0 / k_or_dist) if np.isscalar(k_or_dist) else k_or_dist
        return cls("independent", ModelParams.independent(dist))

    @classmethod
    def related(cls, params: ModelParams | str = "paper-sec7", random_length: bool = False) -> "ModelSpec":
        if isinstance(params, str):
            params = PRESETS[params]
        return cls("related-random" if random_length else "related-fixed", params)

    @property
    def keep_prob(self) -> float:
        return 1.0 if self.kind == "independent" else self.params.keep_prob


def _draw(spec: ModelSpec, n: int, rng, n_y: int | None = None):
    """(x, y, related pair count or -1)."""
    if spec.kind == "independent":
        x, y = gen_independent(n, spec.params.marginal, rng, n_y=n_y)
        return x, y, -1
    if spec.kind == "related-fixed":
        if n_y is None or n_y == n:
            g = gen_related_fixed(n, spec.params, rng)
            return g.x, g.y, len(g.related_pairs)
        g = gen_related_fixed(max(n, n_y), spec.params, rng)
        return g.x[:n], g.y[:n_y], -1
    if n_y not in (None, n):
        raise ValueError("random-length pairs have no fixed length ratio")
    g = gen_related_random(n, spec.params, rng)
    return g.x, g.y, len(g.related_pairs)


@dataclass
class GammaEstimate:
    mean: float
    std_error: float
    trials: int
    n: int
    length_ratio: float
    samples: list[float] = field(default_factory=list, repr=False)


def _gamma_sample(args):
    spec, n, a, base_seed, t = args
    rng = trial_rng(base_seed, n, t)
    x, y, _ = _draw(spec, n, rng, n_y=int(math.floor(n * a)))
    return lcs_length(x, y) / n


def _map(fn, tasks, jobs):
    if jobs is None or jobs <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def estimate_gamma(spec: ModelSpec, n: int, length_ratio: float = 1.0, trials: int = 50,
                   base_seed: int = DEFAULT_SEED, jobs: int = 1) -> GammaEstimate:
    """Mean and standard error of ``L(x_1..x_n; y_1..y_floor(n a)) / n``."""
    if n < 1 or trials < 1 or length_ratio <= 0:
        raise ValueError("need n >= 1, trials >= 1, length_ratio > 0")
    tasks = [(spec, n, length_ratio, base_seed, t) for t in range(trials)]
    s = np.array(_map(_gamma_sample, tasks, jobs))
    se = float(s.std(ddof=1) / math.sqrt(trials)) if trials > 1 else float("nan")
    return GammaEstimate(float(s.mean()), se, trials, n, length_ratio, s.tolist())


@dataclass
class TrialRecord:
    n: int
    model: str
    seed: int
    trial: int
    L_n: int
    haus_max: float
    haus_l2: float
    haus_restricted: float
    alpha: float
    vert: float
    horiz: float
    stretch: float
    n_x: int
    n_y: int
    related_pairs: int

    def csv_row(self) -> list[str]:
        return [_fmt(getattr(self, name)) for name in CSV_HEADER]


def _fmt(v) -> str:
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def _alpha_for(policy, n: int, p: float) -> float:
    if policy is None or policy == "off":
        return float("nan")
    if policy == "auto":
        return default_alpha(max(n, 2), p).value
    alpha = float(policy)
    if not 0.0 < alpha < 1.0:
        raise ValueError("fixed alpha must lie in (0, 1)")
    return alpha


def trial_metrics(x, y, alpha: float = float("nan"), *, memory_cap: int = DEFAULT_MEMORY_CAP,
                  max_length: int = 65535) -> dict:
    """Extremal alignments of (x, y) and every distance between them."""
    n_x, n_y = len(x), len(y)
    hi, lo = extremal_alignments(x, y, max_length=max_length, memory_cap=memory_cap)
    out = {"L_n": len(hi), "highest": hi, "lowest": lo}
    nan = float("nan")
    if len(hi) == 0:
        out.update(haus_max=nan, haus_l2=nan, haus_restricted=nan, vert=nan, horiz=nan, stretch=nan)
        return out
    h = alignment_graph(hi, n_x, n_y)
    l = alignment_graph(lo, n_x, n_y)
    out["haus_max"] = hausdorff(hi, lo, "max")
    out["haus_l2"] = hausdorff(hi, lo, "euclidean")
    out["haus_restricted"] = nan if math.isnan(alpha) else restricted_hausdorff(hi, lo, n_x, alpha, "max")
    out["vert"] = max_vertical_distance(h, l)
    out["horiz"] = max_horizontal_distance(h, l)
    out["stretch"] = nonuniqueness_stretch(hi, lo, n_x, n_y)
    return out


def run_trial(spec: ModelSpec, n: int, base_seed: int = DEFAULT_SEED, trial_index: int = 0,
              alpha_policy="auto", memory_cap: int = DEFAULT_MEMORY_CAP) -> TrialRecord:
    """Generate one pair and measure its extremal alignments.

    ``alpha_policy``: ``"auto"`` (trimming formula with M=1 and the model's
    keep probability), a fixed float in (0, 1), or ``"off"``/None.
    """
    rng = trial_rng(base_seed, n, trial_index)
    x, y, related = _draw(spec, n, rng)
    alpha = _alpha_for(alpha_policy, len(x), spec.keep_prob)
    m = trial_metrics(x, y, alpha, memory_cap=memory_cap)
    return TrialRecord(n=n, model=spec.kind, seed=base_seed, trial=trial_index, L_n=m["L_n"],
                       haus_max=m["haus_max"], haus_l2=m["haus_l2"],
                       haus_restricted=m["haus_restricted"], alpha=alpha, vert=m["vert"],
                       horiz=m["horiz"], stretch=m["stretch"], n_x=len(x), n_y=len(y),
                       related_pairs=related)


def _run_trial_task(args):
    return run_trial(*args)


def fit_models(points) -> dict:
    """Least-squares fits through the origin of ``y = c ln n`` and ``y = c n``.

    R^2 is the usual ``1 - SS_res / SS_tot`` with ``SS_tot`` about the mean,
    so the two fits are comparable (and either can go negative).
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 2 or np.any(pts[:, 0] < 2) or not np.all(np.isfinite(pts)):
        raise ValueError("need at least two finite points with n >= 2")
    n, y = pts[:, 0], pts[:, 1]
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    out = {}
    for name, f in (("log_fit", np.log(n)), ("linear_fit", n)):
        c = float(f @ y / (f @ f))
        ss_res = float(np.sum((y - c * f) ** 2))
        if ss_tot > 0:
            r2 = 1.0 - ss_res / ss_tot
        else:
            r2 = 1.0 if ss_res == 0 else float("nan")
        out[name] = {"c": c, "r2": r2}
    return out


@dataclass
class SweepSummary:
    per_n: list[dict]
    fits: dict

    def to_json(self) -> str:
        return json.dumps({"per_n": self.per_n, "fits": self.fits}, indent=2, allow_nan=False,
                          default=_json_default)

    def mean(self, stat: str) -> dict[int, float]:
        return {row["n"]: row[stat]["mean"] for row in self.per_n}


def _json_default(o):
    raise TypeError(type(o))


def _nan_to_none(v: float):
    return None if v is None or (isinstance(v, float) and math.isnan(v)) else v


def summarize(records: list[TrialRecord]) -> SweepSummary:
    ns = sorted({r.n for r in records})
    per_n = []
    for n in ns:
        rows = [r for r in records if r.n == n]
        row = {"n": n, "trials": len(rows)}
        for stat in STATS:
            vals = np.array([getattr(r, stat) for r in rows], dtype=float)
            vals = vals[~np.isnan(vals)]
            mean = float(vals.mean()) if len(vals) else float("nan")
            std = float(vals.std(ddof=1)) if len(vals) >= 2 else float("nan")
            row[stat] = {"mean": _nan_to_none(mean), "std": _nan_to_none(std)}
        per_n.append(row)
    fits = {}
    for stat in STATS:
        pts = [(row["n"], row[stat]["mean"]) for row in per_n if row[stat]["mean"] is not None]
        if len(pts) >= 2 and min(p[0] for p in pts) >= 2:
            fits[stat] = fit_models(pts)
    return SweepSummary(per_n, fits)


def growth_sweep(spec: ModelSpec, n_list, trials: int = 30, base_seed: int = DEFAULT_SEED,
                 jobs: int = 1, alpha_policy="auto", allow_large: bool = False,
                 memory_cap: int = DEFAULT_MEMORY_CAP) -> tuple[SweepSummary, list[TrialRecord]]:
    """``trials`` trials at each n, per-n mean/std of every statistic and growth fits."""
    n_list = [int(n) for n in n_list]
    if not n_list or n_list != sorted(n_list):
        raise ValueError("n_list must be non-empty and ascending")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if max(n_list) > DEFAULT_MAX_SWEEP_N and not allow_large:
        raise ValueError(f"n above {DEFAULT_MAX_SWEEP_N} needs allow_large=True")
    tasks = [(spec, n, base_seed, t, alpha_policy, memory_cap) for n in n_list for t in range(trials)]
    records = _map(_run_trial_task, tasks, jobs)
    records.sort(key=lambda r: (r.n, r.trial))
    return summarize(records), records


def records_to_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def records_from_csv(text: str) -> list[TrialRecord]:
    types = {f.name: f.type for f in fields(TrialRecord)}
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        kw = {}
        for k, v in row.items():
            if types[k] in ("int", int):
                kw[k] = int(v)
            elif types[k] in ("float", float):
                kw[k] = float(v) if v != "" else float("nan")
            else:
                kw[k] = v
        out.append(TrialRecord(**kw))
    return out


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary sibling so a failure leaves no partial file."""
    tmp = f"{os.fspath(path)}.partial"
    try:
        with open(tmp, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)


@dataclass
class Table1Row:
    K: int
    lower: float
    upper: float
    gamma_hat: float | None
    std_error: float | None


def table1(k_list=range(2, 9), n: int = 2000, trials: int = 50, base_seed: int = DEFAULT_SEED,
           jobs: int = 1, estimate: bool = True) -> list[Table1Row]:
    """Root bounds for uniform K-letter alphabets, with Monte Carlo estimates."""
    rows = []
    for K in k_list:
        if K < 2:
            raise ValueError("K must be >= 2")
        lo, up = chvatal_sankoff_bounds(1.0 / K, 1.0 - 1.0 / K)
        g = se = None
        if estimate:
            est = estimate_gamma(ModelSpec.independent(K), n, 1.0, trials, base_seed, jobs)
            g, se = est.mean, est.std_error
        rows.append(Table1Row(K, lo, up, g, se))
    return rows


def table1_rows_as_dicts(rows: list[Table1Row]) -> list[dict]:
    return [asdict(r) for r in rows]
