"""Root bounds on the Chvatal-Sankoff constant next to Monte Carlo estimates.

Run:  python demos/02_bounds_table.py [n] [trials]
"""
import sys

from extremal_lcs.experiments import table1

n = int(sys.argv[1]) if len(sys.argv) > 1 else 1000
trials = int(sys.argv[2]) if len(sys.argv) > 2 else 20

# For uniform K-letter alphabets the upper root is a rigorous upper bound on
# lim L_n / n; the estimate below should sit between the two roots.
print(f"uniform alphabets, n={n}, {trials} trials each\n")
print(f"{'K':>2} {'lower':>9} {'upper':>9} {'estimate':>9} {'s.e.':>7}")
for row in table1(range(2, 9), n=n, trials=trials, jobs=2):
    print(f"{row.K:>2} {row.lower:9.6f} {row.upper:9.6f} {row.gamma_hat:9.4f} {row.std_error:7.4f}")
