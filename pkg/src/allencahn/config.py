"""Run configuration: INI-style files, validation, and experiment presets.

The on-disk format is a flat-sections key-value document (configparser
syntax).  Sections ``grid``, ``physics``, ``scheme``, ``time`` and
``initial_condition`` are required; ``solver``, ``forcing``, ``monitors``
and ``output`` are optional with defaults.  Unknown sections or keys are
rejected.  See the README for the full grammar.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass
from typing import Optional, Union

from . import initial_conditions as ics
from .grid import Field, GridSpec
from .linsolve import KrylovConfig
from .physics import ConstantMobility, Mobility, OneSidedMobility, TwoSidedMobility
from .schemes import SchemeParams
from .timestepping import (
    AdaptiveSteps,
    ManufacturedSolution,
    MonitorConfig,
    RandomPerturbedSteps,
    SimulationSetup,
    StepController,
    UniformSteps,
)

__all__ = [
    "ConfigError",
    "RunConfig",
    "parse_config",
    "serialize_config",
    "preset_experiment",
    "PRESET_NAMES",
    "build_setup",
    "build_mobility",
    "convergence_error",
]


class ConfigError(ValueError):
    """Malformed or invalid run configuration."""


@dataclass(frozen=True)
class GridSection:
    dim: int
    cells: int
    length: float


@dataclass(frozen=True)
class PhysicsSection:
    eps: float
    mobility: str  # constant | two_sided | one_sided
    value: Optional[float] = None  # constant only
    exponent: Optional[float] = None  # two_sided only


@dataclass(frozen=True)
class SchemeSection:
    kind: str  # dsbe | dscn
    s1: float = 2.0
    s2: Union[float, str] = "auto"


@dataclass(frozen=True)
class TimeSection:
    horizon: float
    controller: str  # uniform | random | adaptive
    tau: Optional[float] = None
    tau_mean: Optional[float] = None
    amplitude: Optional[float] = None
    seed: Optional[int] = None
    tau_max: Optional[float] = None
    tau_min: Optional[float] = None
    alpha: Optional[float] = None


@dataclass(frozen=True)
class SolverSection:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_iter: int = 500


@dataclass(frozen=True)
class InitialSection:
    kind: str  # random_uniform | flower | bubbles3d | manufactured | constant
    lo: Optional[float] = None
    hi: Optional[float] = None
    seed: Optional[int] = None
    lam: Optional[float] = None
    value: Optional[float] = None


@dataclass(frozen=True)
class ForcingSection:
    enabled: bool = False
    exact: str = "exp_decay_sinsin"


@dataclass(frozen=True)
class MonitorsSection:
    mbp: str = "warn"
    energy: str = "warn"
    mbp_slack: float = 1e-8
    energy_slack: float = 1e-8


@dataclass(frozen=True)
class OutputSection:
    dir: str = "out"
    csv_every: int = 1
    snapshot_every: int = 0


@dataclass(frozen=True)
class RunConfig:
    grid: GridSection
    physics: PhysicsSection
    scheme: SchemeSection
    time: TimeSection
    initial: InitialSection
    solver: SolverSection = SolverSection()
    forcing: ForcingSection = ForcingSection()
    monitors: MonitorsSection = MonitorsSection()
    output: OutputSection = OutputSection()


# ---------------------------------------------------------------------------
# parsing


def _float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: expected a number, got {raw!r}") from None


def _int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: expected an integer, got {raw!r}") from None


def _bool(section: str, key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{section}.{key}: expected a boolean, got {raw!r}")


def _choice(section: str, key: str, raw: str, choices: tuple[str, ...]) -> str:
    if raw not in choices:
        raise ConfigError(f"{section}.{key}: must be one of {choices}, got {raw!r}")
    return raw


_MISSING = object()


class _Section:
    """One parsed section; tracks consumed keys so leftovers can be rejected."""

    def __init__(self, name: str, raw: dict[str, str]):
        self.name = name
        self.raw = dict(raw)

    def take(self, key: str, kind, default=_MISSING, choices=None):
        if key not in self.raw:
            if default is _MISSING:
                raise ConfigError(f"{self.name}.{key}: required key is missing")
            return default
        raw = self.raw.pop(key)
        if choices is not None:
            return _choice(self.name, key, raw, choices)
        if kind is float:
            return _float(self.name, key, raw)
        if kind is int:
            return _int(self.name, key, raw)
        if kind is bool:
            return _bool(self.name, key, raw)
        return raw

    def finish(self) -> None:
        if self.raw:
            key = sorted(self.raw)[0]
            raise ConfigError(f"{self.name}.{key}: unknown key")


def _parse_grid(sec: _Section) -> GridSection:
    grid = GridSection(
        dim=sec.take("dim", int),
        cells=sec.take("cells", int),
        length=sec.take("length", float),
    )
    sec.finish()
    if grid.dim not in (1, 2, 3):
        raise ConfigError(f"grid.dim: must be 1, 2 or 3, got {grid.dim}")
    if grid.cells < 1:
        raise ConfigError(f"grid.cells: must be positive, got {grid.cells}")
    if not (grid.length > 0):
        raise ConfigError(f"grid.length: must be positive, got {grid.length}")
    return grid


def _parse_physics(sec: _Section) -> PhysicsSection:
    eps = sec.take("eps", float)
    mobility = sec.take("mobility", str, choices=("constant", "two_sided", "one_sided"))
    value = sec.take("value", float, None) if mobility == "constant" else None
    exponent = sec.take("exponent", float, None) if mobility == "two_sided" else None
    sec.finish()
    if not (eps > 0):
        raise ConfigError(f"physics.eps: must be positive, got {eps}")
    if mobility == "constant":
        value = 1.0 if value is None else value
        if value < 0:
            raise ConfigError(f"physics.value: must be nonnegative, got {value}")
    if mobility == "two_sided":
        exponent = 1.0 if exponent is None else exponent
        if not (exponent > 0):
            raise ConfigError(f"physics.exponent: must be positive, got {exponent}")
    return PhysicsSection(eps=eps, mobility=mobility, value=value, exponent=exponent)


def _parse_scheme(sec: _Section) -> SchemeSection:
    kind = sec.take("kind", str, choices=("dsbe", "dscn"))
    s1 = sec.take("s1", float, 2.0)
    s2_raw = sec.take("s2", str, "auto")
    sec.finish()
    if s1 < 2.0:
        raise ConfigError(f"scheme.s1: must satisfy s1 >= 2, got {s1}")
    s2: Union[float, str]
    if s2_raw == "auto":
        s2 = "auto"
    else:
        s2 = _float("scheme", "s2", s2_raw)
        if s2 < 0:
            raise ConfigError(f"scheme.s2: must be nonnegative, got {s2}")
    return SchemeSection(kind=kind, s1=s1, s2=s2)


def _parse_time(sec: _Section) -> TimeSection:
    horizon = sec.take("horizon", float)
    controller = sec.take("controller", str, choices=("uniform", "random", "adaptive"))
    fields: dict = dict(horizon=horizon, controller=controller)
    if controller == "uniform":
        fields["tau"] = sec.take("tau", float)
        if not (fields["tau"] > 0):
            raise ConfigError(f"time.tau: must be positive, got {fields['tau']}")
    elif controller == "random":
        fields["tau_mean"] = sec.take("tau_mean", float)
        fields["amplitude"] = sec.take("amplitude", float, 0.3)
        fields["seed"] = sec.take("seed", int, 0)
        if not (fields["tau_mean"] > 0):
            raise ConfigError(f"time.tau_mean: must be positive, got {fields['tau_mean']}")
        if not (0 <= fields["amplitude"] < 1):
            raise ConfigError(f"time.amplitude: must lie in [0, 1), got {fields['amplitude']}")
    else:
        fields["tau_max"] = sec.take("tau_max", float)
        fields["tau_min"] = sec.take("tau_min", float)
        fields["alpha"] = sec.take("alpha", float)
        if not (0 < fields["tau_min"] <= fields["tau_max"]):
            raise ConfigError("time.tau_min: need 0 < tau_min <= tau_max")
        if fields["alpha"] < 0:
            raise ConfigError(f"time.alpha: must be nonnegative, got {fields['alpha']}")
    sec.finish()
    if horizon < 0:
        raise ConfigError(f"time.horizon: must be nonnegative, got {horizon}")
    return TimeSection(**fields)


def _parse_solver(sec: _Section) -> SolverSection:
    out = SolverSection(
        rel_tol=sec.take("rel_tol", float, 1e-10),
        abs_tol=sec.take("abs_tol", float, 1e-14),
        max_iter=sec.take("max_iter", int, 500),
    )
    sec.finish()
    if not (out.rel_tol > 0 and out.abs_tol > 0):
        raise ConfigError("solver.rel_tol: tolerances must be positive")
    if out.max_iter < 1:
        raise ConfigError(f"solver.max_iter: must be at least 1, got {out.max_iter}")
    return out


def _parse_initial(sec: _Section) -> InitialSection:
    kind = sec.take(
        "kind", str, choices=("random_uniform", "flower", "bubbles3d", "manufactured", "constant")
    )
    fields: dict = dict(kind=kind)
    if kind == "random_uniform":
        fields["lo"] = sec.take("lo", float)
        fields["hi"] = sec.take("hi", float)
        fields["seed"] = sec.take("seed", int)
        if fields["lo"] > fields["hi"]:
            raise ConfigError("initial_condition.lo: need lo <= hi")
    elif kind == "flower":
        fields["lam"] = sec.take("lam", float)
        if not (fields["lam"] > 0):
            raise ConfigError(f"initial_condition.lam: must be positive, got {fields['lam']}")
    elif kind == "constant":
        fields["value"] = sec.take("value", float)
    sec.finish()
    return InitialSection(**fields)


def _parse_forcing(sec: _Section) -> ForcingSection:
    out = ForcingSection(
        enabled=sec.take("enabled", bool, False),
        exact=sec.take("exact", str, "exp_decay_sinsin"),
    )
    sec.finish()
    return out


def _parse_monitors(sec: _Section) -> MonitorsSection:
    modes = ("warn", "abort", "off")
    out = MonitorsSection(
        mbp=sec.take("mbp", str, "warn", choices=modes),
        energy=sec.take("energy", str, "warn", choices=modes),
        mbp_slack=sec.take("mbp_slack", float, 1e-8),
        energy_slack=sec.take("energy_slack", float, 1e-8),
    )
    sec.finish()
    return out


def _parse_output(sec: _Section) -> OutputSection:
    out = OutputSection(
        dir=sec.take("dir", str, "out"),
        csv_every=sec.take("csv_every", int, 1),
        snapshot_every=sec.take("snapshot_every", int, 0),
    )
    sec.finish()
    if out.csv_every < 0 or out.snapshot_every < 0:
        raise ConfigError("output.csv_every: write frequencies must be nonnegative")
    return out


_SECTION_PARSERS = {
    "grid": _parse_grid,
    "physics": _parse_physics,
    "scheme": _parse_scheme,
    "time": _parse_time,
    "solver": _parse_solver,
    "initial_condition": _parse_initial,
    "forcing": _parse_forcing,
    "monitors": _parse_monitors,
    "output": _parse_output,
}
_REQUIRED_SECTIONS = ("grid", "physics", "scheme", "time", "initial_condition")
_ATTR_FOR_SECTION = {
    "grid": "grid",
    "physics": "physics",
    "scheme": "scheme",
    "time": "time",
    "solver": "solver",
    "initial_condition": "initial",
    "forcing": "forcing",
    "monitors": "monitors",
    "output": "output",
}


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document.

    Raises ConfigError with the offending section.key (or the parser's
    line information for syntax errors).
    """
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from None

    for section in cp.sections():
        if section not in _SECTION_PARSERS:
            raise ConfigError(f"{section}: unknown section")
    for section in _REQUIRED_SECTIONS:
        if not cp.has_section(section):
            raise ConfigError(f"{section}: required section is missing")

    kwargs = {}
    for section, parser in _SECTION_PARSERS.items():
        if cp.has_section(section):
            kwargs[_ATTR_FOR_SECTION[section]] = parser(_Section(section, dict(cp[section])))
    return RunConfig(**kwargs)


# ---------------------------------------------------------------------------
# serialization


def _emit(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(cfg: RunConfig) -> str:
    """Render a config back to its file form; parse(serialize(c)) == c."""
    lines: list[str] = []

    def section(name: str, obj, skip_none=True) -> None:
        lines.append(f"[{name}]")
        for f in dataclasses.fields(obj):
            value = getattr(obj, f.name)
            if value is None and skip_none:
                continue
            lines.append(f"{f.name} = {_emit(value)}")
        lines.append("")

    section("grid", cfg.grid)
    section("physics", cfg.physics)
    section("scheme", cfg.scheme)
    section("time", cfg.time)
    section("solver", cfg.solver)
    section("initial_condition", cfg.initial)
    section("forcing", cfg.forcing)
    section("monitors", cfg.monitors)
    section("output", cfg.output)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# building runnable setups


def build_mobility(physics: PhysicsSection) -> Mobility:
    if physics.mobility == "constant":
        return ConstantMobility(physics.value if physics.value is not None else 1.0)
    if physics.mobility == "two_sided":
        return TwoSidedMobility(physics.exponent if physics.exponent is not None else 1.0)
    return OneSidedMobility()


def _build_controller(time: TimeSection) -> StepController:
    if time.controller == "uniform":
        return UniformSteps(time.tau)
    if time.controller == "random":
        return RandomPerturbedSteps(time.tau_mean, time.amplitude, time.seed)
    return AdaptiveSteps(time.tau_max, time.tau_min, time.alpha)


def _build_initial(cfg: RunConfig, grid: GridSpec) -> Field:
    init = cfg.initial
    if init.kind == "random_uniform":
        return ics.random_uniform(grid, init.lo, init.hi, init.seed)
    if init.kind == "flower":
        return ics.flower(grid, init.lam)
    if init.kind == "bubbles3d":
        return ics.two_bubbles(grid, cfg.physics.eps)
    if init.kind == "manufactured":
        return ics.manufactured_initial(grid)
    return ics.constant(grid, init.value)


def build_setup(cfg: RunConfig) -> SimulationSetup:
    """Materialize a validated config into a runnable simulation setup."""
    grid = GridSpec(cfg.grid.dim, cfg.grid.cells, cfg.grid.length)
    mobility = build_mobility(cfg.physics)
    params = SchemeParams(
        eps=cfg.physics.eps, s1=cfg.scheme.s1, s2=cfg.scheme.s2, scheme=cfg.scheme.kind
    )
    forcing = None
    if cfg.forcing.enabled:
        if grid.dim != 2:
            raise ConfigError("forcing.enabled: the manufactured solution is two-dimensional")
        forcing = ManufacturedSolution.from_name(cfg.forcing.exact, cfg.physics.eps, mobility)
    try:
        phi0 = _build_initial(cfg, grid)
    except ValueError as exc:
        raise ConfigError(f"initial_condition.kind: {exc}") from None
    return SimulationSetup(
        grid=grid,
        params=params,
        mobility=mobility,
        phi0=phi0,
        controller=_build_controller(cfg.time),
        t_final=cfg.time.horizon,
        forcing=forcing,
        solver=KrylovConfig(cfg.solver.rel_tol, cfg.solver.abs_tol, cfg.solver.max_iter),
        monitors=MonitorConfig(
            cfg.monitors.mbp, cfg.monitors.energy, cfg.monitors.mbp_slack, cfg.monitors.energy_slack
        ),
    )


# ---------------------------------------------------------------------------
# experiment presets


def _convergence_forced() -> RunConfig:
    return RunConfig(
        grid=GridSection(dim=2, cells=400, length=2.0 * 3.141592653589793),
        physics=PhysicsSection(eps=0.01, mobility="constant", value=1.0),
        scheme=SchemeSection(kind="dscn", s1=2.0, s2="auto"),
        time=TimeSection(horizon=1.0, controller="uniform", tau=1.0 / 80.0),
        initial=InitialSection(kind="manufactured"),
        forcing=ForcingSection(enabled=True),
        monitors=MonitorsSection(mbp="off", energy="off"),
        output=OutputSection(dir="out/convergence_forced"),
    )


def _coarsening_2d() -> RunConfig:
    return RunConfig(
        grid=GridSection(dim=2, cells=128, length=1.0),
        physics=PhysicsSection(eps=0.01, mobility="two_sided", exponent=1.0),
        scheme=SchemeSection(kind="dscn", s1=2.0, s2="auto"),
        time=TimeSection(horizon=5.0, controller="uniform", tau=0.025),
        initial=InitialSection(kind="random_uniform", lo=-0.8, hi=0.8, seed=1234),
        output=OutputSection(dir="out/coarsening_2d"),
    )


def _adaptive_2d() -> RunConfig:
    return RunConfig(
        grid=GridSection(dim=2, cells=128, length=1.0),
        physics=PhysicsSection(eps=0.01, mobility="two_sided", exponent=1.0),
        scheme=SchemeSection(kind="dscn", s1=2.0, s2="auto"),
        time=TimeSection(
            horizon=1000.0, controller="adaptive", tau_max=0.25, tau_min=0.025, alpha=1e10
        ),
        initial=InitialSection(kind="random_uniform", lo=-0.8, hi=0.8, seed=1234),
        output=OutputSection(dir="out/adaptive_2d", csv_every=1, snapshot_every=0),
    )


def _mobility_effect_2d() -> RunConfig:
    return RunConfig(
        grid=GridSection(dim=2, cells=128, length=1.0),
        physics=PhysicsSection(eps=0.01, mobility="two_sided", exponent=1.0),
        scheme=SchemeSection(kind="dscn", s1=2.0, s2="auto"),
        time=TimeSection(
            horizon=200.0, controller="adaptive", tau_max=0.25, tau_min=0.025, alpha=1e7
        ),
        initial=InitialSection(kind="flower", lam=0.01**2),
        output=OutputSection(dir="out/mobility_effect_2d"),
    )


def _bubbles_3d() -> RunConfig:
    return RunConfig(
        grid=GridSection(dim=3, cells=64, length=1.0),
        physics=PhysicsSection(eps=0.03, mobility="constant", value=1.0),
        scheme=SchemeSection(kind="dscn", s1=2.0, s2="auto"),
        time=TimeSection(
            horizon=20.0, controller="adaptive", tau_max=0.1, tau_min=0.01, alpha=1e7
        ),
        initial=InitialSection(kind="bubbles3d"),
        output=OutputSection(dir="out/bubbles_3d", snapshot_every=50),
    )


_PRESETS = {
    "convergence_forced": _convergence_forced,
    "coarsening_2d": _coarsening_2d,
    "adaptive_2d": _adaptive_2d,
    "mobility_effect_2d": _mobility_effect_2d,
    "bubbles_3d": _bubbles_3d,
}
PRESET_NAMES = tuple(sorted(_PRESETS))


def preset_experiment(name: str) -> RunConfig:
    """Benchmark configuration by name; raises ConfigError on unknown names."""
    try:
        factory = _PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}") from None
    return factory()


# ---------------------------------------------------------------------------
# temporal convergence studies (used by the CLI and the acceptance suite)


def convergence_error(
    preset: str,
    scheme: str,
    mobility: str,
    steps: str,
    n: int,
    cells: int | None = None,
    seed: int = 0,
) -> float:
    """Final-time maximum-norm error of one forced run with N time steps.

    ``steps`` is "uniform" or "random"; random sequences use ``seed + n``
    so refinement levels draw independent perturbations.  ``cells``
    optionally overrides the preset's spatial resolution (useful for quick
    smoke runs).
    """
    from .diagnostics import error_vs_exact
    from .timestepping import run_simulation

    cfg = preset_experiment(preset)
    if not cfg.forcing.enabled:
        raise ConfigError(f"preset {preset!r} has no exact solution to converge against")
    if steps not in ("uniform", "random"):
        raise ConfigError(f'steps must be "uniform" or "random", got {steps!r}')
    if n < 1:
        raise ConfigError(f"step count must be positive, got {n}")

    exponent = 1.0 if mobility == "two_sided" else None
    value = 1.0 if mobility == "constant" else None
    physics = dataclasses.replace(cfg.physics, mobility=mobility, exponent=exponent, value=value)
    if mobility not in ("constant", "two_sided", "one_sided"):
        raise ConfigError(f"unknown mobility {mobility!r}")

    tau = cfg.time.horizon / n
    if steps == "uniform":
        time = TimeSection(horizon=cfg.time.horizon, controller="uniform", tau=tau)
    else:
        time = TimeSection(
            horizon=cfg.time.horizon,
            controller="random",
            tau_mean=tau,
            amplitude=0.3,
            seed=seed + n,
        )
    grid = cfg.grid if cells is None else dataclasses.replace(cfg.grid, cells=cells)
    scheme_sec = dataclasses.replace(cfg.scheme, kind=scheme)
    cfg = dataclasses.replace(cfg, grid=grid, physics=physics, scheme=scheme_sec, time=time)

    setup = build_setup(cfg)
    result = run_simulation(setup)
    return error_vs_exact(result.final, setup.forcing.exact_at, cfg.time.horizon)
