"""Generate a related pair and compare the optimal alignments with the truth.

The generator remembers which positions of X and Y descend from the same
ancestor letter.  Run:  python demos/04_ancestry.py
"""
import numpy as np

from extremal_lcs import PRESETS, extremal_alignments, gen_related_fixed

pair = gen_related_fixed(949, PRESETS["paper-sec7"], seed=7)
truth = {tuple(p) for p in pair.related_pairs.tolist()}
print(f"n = {pair.n_x}, ancestors used = {len(pair.ancestor_letters)}, related pairs = {len(truth)}")

hi, lo = extremal_alignments(pair.x, pair.y)
print(f"LCS length = {len(hi)}  (L/n = {len(hi) / pair.n_x:.3f})")
for name, a in [("highest", hi), ("lowest", lo)]:
    hits = sum(tuple(p) in truth for p in a.tolist())
    print(f"{name:>8}: {hits} of {len(a)} aligned pairs are true homologies ({hits / len(a):.1%})")

# Where the two extremal alignments disagree, the data alone cannot decide.
differ = np.count_nonzero(np.any(hi != lo, axis=1))
print(f"ranks where highest and lowest differ: {differ} of {len(hi)}")
