"""One time step of the two dynamically stabilized linear schemes.

DsBE (first order, backward Euler based) advances phi^n to phi^{n+1} by
solving

    [ I/tau + S1*M(phi^n) - eps^2*M(phi^n)*Lap ] phi^{n+1}
        = phi^n/tau + M(phi^n) * ( f(phi^n) + S1*phi^n )  (+ g at t_{n+1}),

where M(.) acts as pointwise multiplication.  DsCN (second order,
Crank-Nicolson based) first forms the cut-off extrapolation predictor

    phihat = clamp( (1 + r/2)*phi^n - (r/2)*phi^{n-1}, -1, 1 ),
    r = tau_{n+1}/tau_n,

and then solves

    [ (1/tau + S2*tau) I + (S1/2)*M(phihat) - (eps^2/2)*M(phihat)*Lap ] phi^{n+1}
        = Q phi^n + M(phihat) * ( f(phihat) + S1*phihat )  (+ g at t_{n+1/2}),

    Q phi^n = (1/tau + S2*tau)*phi^n - (S1/2)*M(phihat)*phi^n
              + (eps^2/2)*M(phihat)*(Lap phi^n).

With S1 >= 2 the DsBE scheme keeps max|phi| <= 1 for any step size; DsCN
does so either for steps below ``mbp_tau_bound`` (S2 = 0) or for any step
once S2 >= ``compute_s2_min``.  Cells where the mobility vanishes stay
well-posed: their rows reduce to (1/tau + ...) * phi = rhs, with no
division by the mobility anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .grid import Field, GridSpec, laplacian_array
from .linsolve import KrylovConfig, SolveReport, StencilOperator, krylov_solve
from .physics import DOUBLE_WELL_LIPSCHITZ, Mobility, reaction

__all__ = [
    "SchemeParams",
    "StepInput",
    "dsbe_step",
    "dscn_predict",
    "dscn_step",
    "first_step",
    "compute_s2_min",
    "resolve_s2",
    "mbp_tau_bound",
    "energy_stable_tau_bound",
]

# forcing evaluators map a time to the source sampled on the grid
ForcingFn = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class SchemeParams:
    """Interface width and stabilization coefficients.

    ``s1`` must be at least 2 (the Lipschitz bound of the double-well
    reaction term on [-1, 1]); smaller values void the bound-preservation
    guarantee and are rejected.  ``s2`` applies to the second-order scheme
    only; "auto" resolves to ``compute_s2_min`` for the grid in use.
    """

    eps: float
    s1: float = 2.0
    s2: Union[float, str] = "auto"
    scheme: str = "dsbe"

    def __post_init__(self):
        if not (self.eps > 0):
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not (self.s1 >= DOUBLE_WELL_LIPSCHITZ):
            raise ValueError(
                f"s1 must be >= {DOUBLE_WELL_LIPSCHITZ} (max |f'| on [-1,1]), got {self.s1}"
            )
        if isinstance(self.s2, str):
            if self.s2 != "auto":
                raise ValueError(f's2 must be a nonnegative number or "auto", got {self.s2!r}')
        elif not (self.s2 >= 0):
            raise ValueError(f"s2 must be nonnegative, got {self.s2}")
        if self.scheme not in ("dsbe", "dscn"):
            raise ValueError(f'scheme must be "dsbe" or "dscn", got {self.scheme!r}')


@dataclass
class StepInput:
    """State entering one time step.

    ``phi_nm1``/``tau_prev`` are required by the second-order scheme from
    its second step on.  ``t_n`` is the time at ``phi_n``; it is only used
    to evaluate the forcing term at the scheme's consistency point.
    """

    phi_n: Field
    tau: float
    phi_nm1: Optional[Field] = None
    tau_prev: Optional[float] = None
    forcing: Optional[ForcingFn] = None
    t_n: float = 0.0

    def __post_init__(self):
        if not (self.tau > 0):
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.phi_nm1 is not None:
            if self.tau_prev is None or not (self.tau_prev > 0):
                raise ValueError("tau_prev must be positive when phi_nm1 is given")


def _solve(op, rhs, warm_start, solver):
    b = Field(op.spec, rhs)
    phi_new, report = krylov_solve(op, b, x0=warm_start, config=solver)
    if not np.all(np.isfinite(phi_new.values)):  # Field validates, but be explicit
        raise FloatingPointError("non-finite state after linear solve")
    return phi_new, report


def dsbe_step(
    params: SchemeParams,
    mobility: Mobility,
    step: StepInput,
    solver: KrylovConfig | None = None,
) -> tuple[Field, SolveReport]:
    """Advance one step of the first-order dynamically stabilized scheme."""
    phi = step.phi_n.values
    spec = step.phi_n.spec
    m = mobility(phi)
    op = StencilOperator(
        spec,
        shift=1.0 / step.tau,
        reaction=params.s1 * m,
        diffusion=params.eps**2 * m,
    )
    rhs = phi / step.tau + m * (reaction(phi) + params.s1 * phi)
    if step.forcing is not None:
        rhs = rhs + step.forcing(step.t_n + step.tau)
    return _solve(op, rhs, step.phi_n, solver)


def first_step(
    params: SchemeParams,
    mobility: Mobility,
    phi0: Field,
    tau1: float,
    forcing: ForcingFn | None = None,
    solver: KrylovConfig | None = None,
) -> tuple[Field, SolveReport]:
    """Bootstrap step for the second-order scheme: a plain DsBE step."""
    return dsbe_step(params, mobility, StepInput(phi0, tau1, forcing=forcing, t_n=0.0), solver)


def dscn_predict(phi_n: Field, phi_nm1: Field, ratio: float) -> Field:
    """Cut-off extrapolation predictor, always bounded by 1 in magnitude."""
    if phi_n.spec != phi_nm1.spec:
        raise ValueError("predictor inputs must share a grid")
    if not (ratio > 0):
        raise ValueError(f"step ratio must be positive, got {ratio}")
    # written as phi + (r/2)(phi - phi_prev) so a steady state extrapolates
    # to itself exactly
    raw = phi_n.values + (0.5 * ratio) * (phi_n.values - phi_nm1.values)
    return Field(phi_n.spec, np.clip(raw, -1.0, 1.0))


def dscn_step(
    params: SchemeParams,
    mobility: Mobility,
    step: StepInput,
    solver: KrylovConfig | None = None,
) -> tuple[Field, Field, SolveReport]:
    """Advance one step of the second-order scheme.

    Returns the new state, the predictor (useful for diagnostics), and the
    solve report.
    """
    if step.phi_nm1 is None or step.tau_prev is None:
        raise ValueError("second-order step needs the previous state and step size")
    spec = step.phi_n.spec
    s2 = resolve_s2(params, mobility, spec)
    phihat = dscn_predict(step.phi_n, step.phi_nm1, step.tau / step.tau_prev)

    phi = step.phi_n.values
    mhat = mobility(phihat.values)
    shift = 1.0 / step.tau + s2 * step.tau
    half_s1_m = 0.5 * params.s1 * mhat
    half_eps2_m = 0.5 * params.eps**2 * mhat

    op = StencilOperator(spec, shift=shift, reaction=half_s1_m, diffusion=half_eps2_m)
    rhs = (
        shift * phi
        - half_s1_m * phi
        + half_eps2_m * laplacian_array(spec, phi)
        + mhat * (reaction(phihat.values) + params.s1 * phihat.values)
    )
    if step.forcing is not None:
        rhs = rhs + step.forcing(step.t_n + 0.5 * step.tau)
    phi_new, report = _solve(op, rhs, step.phi_n, solver)
    return phi_new, phihat, report


def compute_s2_min(params: SchemeParams, mobility: Mobility, grid: GridSpec) -> float:
    """Smallest S2 making the second-order scheme bound-preserving for any step.

    Equals (S1*K/4 + d*eps^2*K/(2 h^2))^2 with K the mobility's supremum
    over [-1, 1].
    """
    k = mobility.bound
    return (params.s1 * k / 4.0 + grid.dim * params.eps**2 * k / (2.0 * grid.spacing**2)) ** 2


def resolve_s2(params: SchemeParams, mobility: Mobility, grid: GridSpec) -> float:
    """Numeric S2 for a run: the configured value, or the minimal bound for "auto"."""
    if params.s2 == "auto":
        return compute_s2_min(params, mobility, grid)
    return float(params.s2)


def mbp_tau_bound(params: SchemeParams, mobility: Mobility, grid: GridSpec) -> float:
    """Largest step keeping the S2 = 0 second-order scheme bound-preserving.

    Equals 2 / (S1*K + 2*d*K*eps^2/h^2); infinite for vanishing mobility
    (no dynamics, no restriction).
    """
    k = mobility.bound
    if k == 0.0:
        return math.inf
    return 2.0 / (params.s1 * k + 2.0 * grid.dim * k * params.eps**2 / grid.spacing**2)


def energy_stable_tau_bound(
    params: SchemeParams,
    mobility: Mobility,
    grid: GridSpec | None = None,
) -> float:
    """Step bound min{1, 1/(4K(1+S2))} for energy stability of the second-order scheme.

    Needs a grid only when ``params.s2`` is "auto".
    """
    k = mobility.bound
    if k == 0.0:
        return math.inf
    if params.s2 == "auto":
        if grid is None:
            raise ValueError('s2 is "auto"; a grid is needed to resolve it')
        s2 = compute_s2_min(params, mobility, grid)
    else:
        s2 = float(params.s2)
    return min(1.0, 1.0 / (4.0 * k * (1.0 + s2)))
