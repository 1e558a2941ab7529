"""The leaves (1/n, inf) converge weakly to (0, inf) but stay apart in the Fréchet norms.

Run: python3 scripts/example1_separation.py
"""
from earthquake_lab.corpus import example1, example1_limit
from earthquake_lab.experiments import FRECHET_FLOOR, WEAK_PROFILES
from earthquake_lab.norms import frechet_norm_grid, weak_pairing
from earthquake_lab.search import SearchBudget

limit = example1_limit()
budget = SearchBudget()
print(f"floor for the Fréchet lower bound: {FRECHET_FLOOR:.4f}")
print(f"{'n':>5} {'weak pairings':>36} {'Fréchet lower (nu = 0.1 .. 1)':>40}")
for n in (2, 8, 32, 128):
    lam = example1(n)
    weak = [weak_pairing(lam, limit, f) for f in WEAK_PROFILES]
    fr = frechet_norm_grid(lam, limit, (0.1, 0.25, 0.5, 1.0), budget)
    print(f"{n:>5} " + " ".join(f"{w:11.3e}" for w in weak) + "   " + " ".join(f"{r.lower:8.4f}" for r in fr))
