"""Discretize a smooth band of leaves and watch the uniform weak distance fall.

Run: python3 scripts/discretize_band.py
"""
from earthquake_lab.approx import discretize
from earthquake_lab.corpus import band_fixture
from earthquake_lab.norms import BUMP, uweak_distance

band = band_fixture()
print(f"band mass {band.total_mass():.6f}")
print(f"{'n':>5} {'leaves':>7} {'max box mass':>14} {'box sup n':>10} {'bound':>8} {'uweak':>10}")
for n in (4, 16, 64):
    rep = discretize(band, n)
    uw = uweak_distance(rep.lam_n, band, BUMP)
    top = max(r.mass for r in rep.ledger)
    print(f"{n:>5} {len(rep.lam_n):>7} {top:14.6f} {rep.box_sup_n:10.4f} {rep.box_sup_bound:8.4f} {uw.value:10.4e}")
