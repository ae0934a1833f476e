"""Extremal alignments of a seven-letter pair, step by step.

Run:  python demos/01_worked_example.py
"""
from extremal_lcs import (
    alignment_graph,
    co_optimal_cells,
    enumerate_optimal_alignments,
    extremal_alignments,
    hausdorff,
    max_horizontal_distance,
    max_vertical_distance,
    nonuniqueness_stretch,
)

x, y = "ATACCGT", "CAACATG"
print(f"X = {x}\nY = {y}\n")

# Every optimal alignment, by brute-force backtracking (fine for toy inputs).
alignments = enumerate_optimal_alignments(x, y)
print(f"{len(alignments)} optimal alignments of length {len(alignments[0])}:")
for a in alignments:
    print("  ", list(a), "->", "".join(x[i - 1] for i, _ in a))

# The same information, rank by rank, without enumerating anything.
cells = co_optimal_cells(x, y)
for t in range(1, cells.k + 1):
    print(f"rank {t}: cells {sorted(cells.rank(t))}")

# The highest alignment takes the largest j at each rank (then the smallest i);
# the lowest takes the smallest j (then the largest i).
hi, lo = extremal_alignments(x, y)
print("\nhighest:", hi.tolist())
print("lowest: ", lo.tolist())

h = alignment_graph(hi, len(x), len(y))
l = alignment_graph(lo, len(x), len(y))
print("\nHausdorff (max norm):  ", hausdorff(hi, lo))
print("Hausdorff (euclidean): ", round(hausdorff(hi, lo, "euclidean"), 4))
print("max vertical distance: ", max_vertical_distance(h, l))
print("max horizontal distance:", round(max_horizontal_distance(h, l), 4))
print("non-uniqueness stretch:", nonuniqueness_stretch(hi, lo, len(x), len(y)))
