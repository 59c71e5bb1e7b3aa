"""Time-grid generation, manufactured-solution forcing, and the run loop."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from .diagnostics import StepRecord
from .grid import Field, GridSpec
from .linsolve import KrylovConfig
from .physics import Mobility, discrete_energy
from .schemes import SchemeParams, StepInput, dsbe_step, dscn_step

__all__ = [
    "UniformSteps",
    "RandomPerturbedSteps",
    "AdaptiveSteps",
    "StepController",
    "next_tau_adaptive",
    "build_random_steps",
    "ManufacturedSolution",
    "forcing_eval",
    "MonitorConfig",
    "MonitorAbort",
    "SimulationSetup",
    "SimulationResult",
    "run_simulation",
]

log = logging.getLogger(__name__)

# relative tolerance for "the remaining time is zero"; guards against a
# spurious final micro-step from accumulated rounding
_TIME_EPS = 1e-12


@dataclass(frozen=True)
class UniformSteps:
    tau: float

    def __post_init__(self):
        if not (self.tau > 0):
            raise ValueError(f"tau must be positive, got {self.tau}")


@dataclass(frozen=True)
class RandomPerturbedSteps:
    """Uniform steps perturbed by +-amplitude, rescaled to land on T exactly."""

    tau_mean: float
    amplitude: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if not (self.tau_mean > 0):
            raise ValueError(f"tau_mean must be positive, got {self.tau_mean}")
        if not (0 <= self.amplitude < 1):
            raise ValueError(f"amplitude must lie in [0, 1), got {self.amplitude}")


@dataclass(frozen=True)
class AdaptiveSteps:
    """Energy-variation controlled steps, clamped to [tau_min, tau_max]."""

    tau_max: float
    tau_min: float
    alpha: float

    def __post_init__(self):
        if not (0 < self.tau_min <= self.tau_max):
            raise ValueError("need 0 < tau_min <= tau_max")
        if self.alpha < 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")


StepController = Union[UniformSteps, RandomPerturbedSteps, AdaptiveSteps]


def next_tau_adaptive(tau_max: float, tau_min: float, alpha: float, dE_dt: float) -> float:
    """Proposed step tau_max / sqrt(1 + alpha*dE_dt^2), clamped to [tau_min, tau_max]."""
    tau = tau_max / math.sqrt(1.0 + alpha * dE_dt * dE_dt)
    return min(tau_max, max(tau_min, tau))


def build_random_steps(tau_mean: float, amplitude: float, t_final: float, seed: int) -> np.ndarray:
    """Seeded random step sequence with exact total t_final.

    Draws u_k uniform in [-1, 1], sets tau_k = tau_mean*(1 + amplitude*u_k),
    then rescales all steps by a common factor so they sum to t_final.
    """
    if not (0 <= amplitude < 1):
        raise ValueError(f"amplitude must lie in [0, 1), got {amplitude}")
    if not (t_final > 0 and tau_mean > 0):
        raise ValueError("t_final and tau_mean must be positive")
    n = max(1, round(t_final / tau_mean))
    u = np.random.default_rng(seed).uniform(-1.0, 1.0, n)
    raw = tau_mean * (1.0 + amplitude * u)
    return raw * (t_final / raw.sum())


# ---------------------------------------------------------------------------
# manufactured-solution forcing


@lru_cache(maxsize=8)
def _sinsin(grid: GridSpec) -> np.ndarray:
    x, y = grid.node_coords()
    return np.sin(x) * np.sin(y)


@dataclass(frozen=True)
class ManufacturedSolution:
    """Forced 2D problem with exact solution phi = exp(-t) sin(x) sin(y).

    The source makes the exact solution satisfy phi_t = -M(phi)*mu + g with
    mu = -eps^2*Lap(phi) - f(phi).  Since Lap(phi) = -2 phi here,

        g(x, t) = -phi + M(phi) * ( (2 eps^2 - 1) phi + phi^3 ).
    """

    eps: float
    mobility: Mobility

    @classmethod
    def from_name(cls, name: str, eps: float, mobility: Mobility) -> "ManufacturedSolution":
        if name != "exp_decay_sinsin":
            raise ValueError(f"unsupported exact-solution selector {name!r}")
        return cls(eps, mobility)

    def _check_grid(self, grid: GridSpec) -> None:
        if grid.dim != 2:
            raise ValueError("the manufactured solution is two-dimensional")

    def exact_values(self, grid: GridSpec, t: float) -> np.ndarray:
        self._check_grid(grid)
        return math.exp(-t) * _sinsin(grid)

    def exact_field(self, grid: GridSpec, t: float) -> Field:
        return Field(grid, self.exact_values(grid, t))

    def exact_at(self, x, y, t: float):
        return math.exp(-t) * np.sin(x) * np.sin(y)

    def _source(self, phi):
        return -phi + self.mobility(phi) * ((2.0 * self.eps**2 - 1.0) * phi + phi**3)

    def source_values(self, grid: GridSpec, t: float) -> np.ndarray:
        self._check_grid(grid)
        return self._source(math.exp(-t) * _sinsin(grid))

    def source_at(self, x, y, t: float):
        return self._source(self.exact_at(x, y, t))


def forcing_eval(spec: ManufacturedSolution, mobility: Mobility, x, y, t: float):
    """Pointwise source evaluation; the mobility must match the spec's."""
    if mobility != spec.mobility:
        raise ValueError("forcing was derived for a different mobility model")
    return spec.source_at(x, y, t)


# ---------------------------------------------------------------------------
# simulation driver


@dataclass
class MonitorConfig:
    """Structure-preservation monitor policy: warn (default), abort, or off."""

    mbp: str = "warn"
    energy: str = "warn"
    mbp_slack: float = 1e-8
    energy_slack: float = 1e-8

    _MODES = ("warn", "abort", "off")

    def __post_init__(self):
        for name in ("mbp", "energy"):
            if getattr(self, name) not in self._MODES:
                raise ValueError(f"{name} monitor must be one of {self._MODES}")


class MonitorAbort(RuntimeError):
    """Raised when a monitor in abort mode detects a violation."""


@dataclass
class SimulationSetup:
    """Everything needed to advance an initial state to a final time."""

    grid: GridSpec
    params: SchemeParams
    mobility: Mobility
    phi0: Field
    controller: StepController
    t_final: float
    forcing: Optional[ManufacturedSolution] = None
    solver: KrylovConfig = dc_field(default_factory=KrylovConfig)
    monitors: MonitorConfig = dc_field(default_factory=MonitorConfig)

    def __post_init__(self):
        if self.t_final < 0:
            raise ValueError(f"t_final must be nonnegative, got {self.t_final}")
        if self.phi0.spec != self.grid:
            raise ValueError("initial state lives on a different grid")


@dataclass
class SimulationResult:
    final: Field
    records: list[StepRecord]
    initial_energy: float


def _propose_tau(controller, step_index, pregenerated, dE_dt):
    if isinstance(controller, UniformSteps):
        return controller.tau
    if isinstance(controller, RandomPerturbedSteps):
        if step_index < len(pregenerated):
            return float(pregenerated[step_index])
        return float(pregenerated[-1])  # horizon reached; truncation ends the run
    if dE_dt is None:
        return controller.tau_max  # no energy history yet
    return next_tau_adaptive(controller.tau_max, controller.tau_min, controller.alpha, dE_dt)


def _monitor(policy: str, kind: str, message: str) -> None:
    if policy == "warn":
        log.warning("%s: %s", kind, message)
    elif policy == "abort":
        raise MonitorAbort(f"{kind}: {message}")


def run_simulation(setup: SimulationSetup, observer=None) -> SimulationResult:
    """Advance phi0 from t = 0 to t_final, recording diagnostics per step.

    The second-order scheme bootstraps its first step with the first-order
    one.  The final step is truncated so the run lands on t_final exactly.
    ``observer(step_index, t, field)`` is called after each step when given.
    Bound monitoring is skipped while forcing is active (forced solutions
    need not stay in [-1, 1]).
    """
    grid = setup.grid
    use_cn = setup.params.scheme == "dscn"
    mon = setup.monitors

    forcing_fn = None
    if setup.forcing is not None:
        forcing_fn = lambda t: setup.forcing.source_values(grid, t)  # noqa: E731

    pregenerated = ()
    if isinstance(setup.controller, RandomPerturbedSteps) and setup.t_final > 0:
        pregenerated = build_random_steps(
            setup.controller.tau_mean,
            setup.controller.amplitude,
            setup.t_final,
            setup.controller.seed,
        )

    energy_prev = discrete_energy(setup.phi0, setup.params.eps)
    initial_energy = energy_prev
    records: list[StepRecord] = []

    phi = setup.phi0
    phi_prev: Optional[Field] = None
    tau_prev: Optional[float] = None
    t = 0.0
    n = 0
    dE_dt: Optional[float] = None

    while setup.t_final - t > _TIME_EPS * max(setup.t_final, 1.0):
        tau = min(_propose_tau(setup.controller, n, pregenerated, dE_dt), setup.t_final - t)
        if use_cn and phi_prev is not None:
            step = StepInput(phi, tau, phi_prev, tau_prev, forcing_fn, t)
            phi_new, _, report = dscn_step(setup.params, setup.mobility, step, setup.solver)
        else:
            step = StepInput(phi, tau, forcing=forcing_fn, t_n=t)
            phi_new, report = dsbe_step(setup.params, setup.mobility, step, setup.solver)

        t += tau
        n += 1
        energy = discrete_energy(phi_new, setup.params.eps)
        hi = float(phi_new.values.max())
        lo = float(phi_new.values.min())
        norm = max(abs(hi), abs(lo))
        record = StepRecord(
            n=n,
            t=t,
            tau=tau,
            energy=energy,
            max_val=hi,
            min_val=lo,
            max_norm=norm,
            solver_iters=report.iterations,
            solver_residual=report.final_residual,
            mbp_violation=max(0.0, norm - 1.0),
            energy_increase=max(0.0, energy - energy_prev),
        )
        records.append(record)

        if mon.mbp != "off" and setup.forcing is None and record.mbp_violation > mon.mbp_slack:
            _monitor(mon.mbp, "bound violation", f"max norm {norm:.15g} at step {n} (t={t:.6g})")
        if mon.energy != "off" and energy > energy_prev + mon.energy_slack * (1.0 + abs(energy_prev)):
            _monitor(
                mon.energy,
                "energy increase",
                f"{energy_prev:.15g} -> {energy:.15g} at step {n} (t={t:.6g})",
            )

        dE_dt = (energy - energy_prev) / tau
        energy_prev = energy
        phi_prev, phi = phi, phi_new
        tau_prev = tau
        if observer is not None:
            observer(n, t, phi)

    return SimulationResult(final=phi, records=records, initial_energy=initial_energy)
