"""Thurston norm, box sup and the Fréchet lower bounds on a small random corpus.

Run: python3 scripts/norm_sandwiches.py
"""
from earthquake_lab import box_sup, thurston_norm
from earthquake_lab.corpus import discrete_corpus
from earthquake_lab.norms import frechet_norm, box_frechet_constant

nu = 0.5
c1 = box_frechet_constant(nu)
print(f"nu = {nu}, upper constant {c1:.3f}")
print(f"{'name':>20} {'leaves':>6} {'Thurston':>17} {'box sup':>8} {'Fréchet lower':>14} {'ratio':>7}")
for name, lam in discrete_corpus(seed=0, count=4):
    th = thurston_norm(lam)
    bs = box_sup(lam).value
    fr = frechet_norm(lam, nu=nu, profiles=("bump",)).lower
    print(f"{name:>20} {len(lam):>6} [{th.lower:6.3f}, {th.upper:6.3f}] {bs:8.3f} {fr:14.4f} {bs / fr:7.2f}")
