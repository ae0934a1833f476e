"""How far apart are the highest and lowest alignments as n grows?

For related sequences (a common ancestor, point mutations, deletions) the
distances grow roughly like ln n.  For independent sequences they grow much
faster.  Run:  python demos/03_related_vs_independent.py
"""
from extremal_lcs import PRESETS, condition_threshold, derived_stats
from extremal_lcs.experiments import ModelSpec, growth_sweep

params = PRESETS["paper-sec7"]
stats = derived_stats(params)
print(f"related model: p_o={stats.p_o} q={stats.q} q_bar={stats.q_bar:.2f} rho={stats.rho:.4f}")
print(f"the relatedness condition holds for gamma_R above {condition_threshold(stats):.6f}\n")

ns = [250, 500, 1000, 2000]
for label, spec in [("related", ModelSpec.related(params)),
                    ("independent", ModelSpec("independent", params))]:
    summary, _ = growth_sweep(spec, ns, trials=10, jobs=2)
    print(label)
    for row in summary.per_n:
        print(f"  n={row['n']:>5}  L/n={row['L_n']['mean'] / row['n']:.3f}"
              f"  hausdorff={row['haus_max']['mean']:7.2f}  vertical={row['vert']['mean']:7.2f}"
              f"  stretch={row['stretch']['mean']:8.2f}")
    fit = summary.fits["haus_max"]
    print(f"  hausdorff ~ {fit['log_fit']['c']:.3f} ln n (R2 {fit['log_fit']['r2']:.3f})"
          f" vs {fit['linear_fit']['c']:.5f} n (R2 {fit['linear_fit']['r2']:.3f})\n")
