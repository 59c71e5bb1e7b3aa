"""How the mobility law shapes the dynamics of a flower-shaped interface.

The same six-petal initial shape evolves under mobilities with increasing
degeneracy at the pure phases: constant, (1 - phi^2)^m, and the one-sided
(1 + phi)/2.  Degenerate laws slow the approach to the pure phases
dramatically (the bulk obeys u' ~ -2^{m+1} u^{m+1} near saturation), while
the shape itself relaxes toward a disk in every case.  A short horizon
keeps this demo brisk; the acceptance suite runs the long version.
"""

import dataclasses

from allencahn.config import build_setup, preset_experiment
from allencahn.diagnostics import (
    convex_hull_area_ratio,
    count_level_set_components,
    time_to_reach_max_norm,
)
from allencahn.timestepping import run_simulation

HORIZON = 20.0
CASES = [
    ("constant", None),
    ("two_sided", 1.0),
    ("two_sided", 3.0),
    ("one_sided", None),
]

print(f"{'mobility':<16} {'saturation':<14} {'max@T':<8} blob")
for mobility, exponent in CASES:
    cfg = preset_experiment("mobility_effect_2d")
    physics = dataclasses.replace(
        cfg.physics,
        mobility=mobility,
        exponent=exponent,
        value=1.0 if mobility == "constant" else None,
    )
    cfg = dataclasses.replace(
        cfg, physics=physics, time=dataclasses.replace(cfg.time, horizon=HORIZON)
    )
    result = run_simulation(build_setup(cfg))

    hit = time_to_reach_max_norm(result.records, 1.0 - 1e-3)
    label = f"t = {hit:.2f}" if hit is not None else f"not by T={HORIZON:g}"
    blob = (
        f"{count_level_set_components(result.final)} component(s), "
        f"hull ratio {convex_hull_area_ratio(result.final):.2f}"
    )
    name = mobility if exponent is None else f"{mobility} m={exponent:g}"
    print(f"{name:<16} {label:<14} {result.records[-1].max_norm:<8.4f} {blob}")

print(
    "\nstronger degeneracy = slower saturation; note the one-sided law races to"
    "\nthe positive pure phase while its negative phase lags.  At this short"
    "\nhorizon the petals are still visible (hull ratio well below 1); the"
    "\nlong-horizon run in the acceptance suite rounds the shape into a disk."
)
