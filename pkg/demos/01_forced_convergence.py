"""Temporal convergence of both schemes on the forced benchmark.

A known solution exp(-t) sin(x) sin(y) is imposed through a source term,
and the final-time maximum-norm error is measured while the time grid is
refined.  The first-order scheme halves its error per refinement, the
second-order one quarters it.  The spatial grid is kept coarse here so the
study runs in seconds; the full-resolution version (M = 400) lives behind
`allencahn converge convergence_forced --ns 20,40,80,160,320`.
"""

from allencahn.config import convergence_error
from allencahn.diagnostics import ConvergenceTable, estimate_order

CELLS = 64
NS = [10, 20, 40, 80]

for scheme, label in (("dsbe", "first-order"), ("dscn", "second-order")):
    for mobility in ("constant", "two_sided"):
        errors = [
            convergence_error(
                "convergence_forced", scheme, mobility, "uniform", n, cells=CELLS
            )
            for n in NS
        ]
        orders = estimate_order(ConvergenceTable(NS, errors))
        print(f"\n{label} scheme, {mobility} mobility (M = {CELLS}):")
        print(f"  {'N':>4}  {'error':>10}  order")
        for i, n in enumerate(NS):
            order = f"{orders[i - 1]:5.2f}" if i else "  ---"
            print(f"  {n:>4}  {errors[i]:>10.3e}  {order}")
