"""Elementary earthquakes along (1/n, inf) distort a log-2 box by a fixed amount.

Run: python3 scripts/elementary_earthquake.py
"""
import math

from earthquake_lab import LOG2
from earthquake_lab.experiments import elementary_distortion

expected = math.log(math.e + 1) - 1
print(f"log 2 = {LOG2:.12f}, predicted L(h(Q_n)) = {expected:.12f}")
print(f"{'n':>6} {'L(h(Q_n))':>16} {'|L - log 2|':>14}")
for n in (1, 10, 100, 1000, 10000):
    L = elementary_distortion(n)
    print(f"{n:>6} {L:16.12f} {abs(L - LOG2):14.6e}")
print("The distortion does not shrink with n, so h_n does not approach h_inf in the Teichmüller metric.")
