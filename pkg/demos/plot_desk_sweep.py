"""
Sweeping a range of discriminants and levels
============================================

Construct and verify an order for every admissible pair with
discriminant at most 30 and level at most 500.  Pairs that cannot be
reached carry a certificate explaining why.
"""

import time

from quatorders import sweep

start = time.perf_counter()
report = sweep(30, 500, workers=4)
elapsed = time.perf_counter() - start

print(f"attempted {report.attempted}, passed {report.passed}, "
      f"skipped {report.skipped_not_constructible}, failed {len(report.failures)} "
      f"in {elapsed:.1f}s")

# Every skip has v2(N) = 2, 2 | disc and an odd part that is 3 mod 4.
for s in report.skipped[:5]:
    print("  skipped", (s.disc, s.N), s.certificate)
