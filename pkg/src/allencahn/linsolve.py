"""Matrix-free linear algebra for the time-stepping schemes.

Both schemes lead to nonsymmetric variable-coefficient systems of the form

    (shift + reaction_i) v_i - diffusion_i (Lap v)_i = b_i

with strictly positive diagonal.  They are solved by BiCGStab with Jacobi
(diagonal) preconditioning; a dense direct solve is provided as a testing
oracle.  All reductions use numpy's fixed-order dot, so repeated solves of
identical inputs are bitwise reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, GridSpec, laplacian_array

__all__ = [
    "KrylovConfig",
    "SolveReport",
    "KrylovError",
    "StencilOperator",
    "krylov_solve",
    "dense_solve_oracle",
]


@dataclass(frozen=True)
class KrylovConfig:
    """Stopping rule for the iterative solver.

    A solve is converged once ||b - Ax||_2 <= max(rel_tol*||b||_2, abs_tol).
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_iter: int = 500

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class SolveReport:
    iterations: int
    final_residual: float  # ||b - Ax||_2 / ||b||_2, recomputed from scratch
    converged: bool


class KrylovError(RuntimeError):
    """Raised when the iterative solve does not reach its tolerance."""

    def __init__(self, message: str, report: SolveReport):
        super().__init__(message)
        self.report = report


class StencilOperator:
    """Matrix-free operator v -> (shift + reaction)*v - diffusion*(Lap v).

    ``reaction`` and ``diffusion`` are pointwise (flat) coefficient arrays;
    ``shift`` is a scalar.  Setting ``diffusion`` to zeros yields a pure
    diagonal operator.
    """

    __slots__ = ("spec", "shift", "reaction", "diffusion", "_mass", "_diag", "_coupled")

    def __init__(self, spec: GridSpec, shift: float, reaction: np.ndarray, diffusion: np.ndarray):
        self.spec = spec
        self.shift = float(shift)
        self.reaction = np.asarray(reaction, dtype=np.float64)
        self.diffusion = np.asarray(diffusion, dtype=np.float64)
        if self.reaction.shape != (spec.num_cells,) or self.diffusion.shape != (spec.num_cells,):
            raise ValueError("coefficient arrays must be flat with one entry per cell")
        self._mass = self.shift + self.reaction
        self._diag = self._mass + self.diffusion * (2.0 * spec.dim / spec.spacing**2)
        self._coupled = bool(np.any(self.diffusion))

    def apply(self, v: np.ndarray) -> np.ndarray:
        out = self._mass * v
        if self._coupled:
            out -= self.diffusion * laplacian_array(self.spec, v)
        return out

    def diagonal(self) -> np.ndarray:
        return self._diag


def _l2(v: np.ndarray) -> float:
    return float(np.sqrt(np.dot(v, v)))


def krylov_solve(
    op,
    b: Field,
    x0: Field | None = None,
    config: KrylovConfig | None = None,
) -> tuple[Field, SolveReport]:
    """Solve op(x) = b by Jacobi-preconditioned BiCGStab.

    ``op`` needs ``apply(values) -> values``, ``diagonal() -> values`` with
    strictly positive entries, and a ``spec``.  The returned report carries
    the true residual ||b - Ax||/||b|| recomputed after the final iterate,
    so a converged report always satisfies the stopping rule.

    Raises
    ------
    KrylovError
        If the tolerance is not met within ``max_iter`` iterations (the
        report is attached; callers may retry with a smaller time step).
    """
    cfg = config or KrylovConfig()
    spec = op.spec
    bv = b.values
    x = np.array(x0.values if x0 is not None else np.zeros_like(bv))
    diag = op.diagonal()

    b_norm = _l2(bv)
    tol = max(cfg.rel_tol * b_norm, cfg.abs_tol)

    def rel(res: float) -> float:
        return res / b_norm if b_norm > 0 else res

    r = bv - op.apply(x)
    res = _l2(r)
    if res <= tol:
        return Field(spec, x), SolveReport(0, rel(res), True)

    r0 = r.copy()
    rho = alpha = omega = 1.0
    v = np.zeros_like(bv)
    p = np.zeros_like(bv)
    restarts = 0
    iters = 0

    def restart_state() -> float:
        # rebuild the Krylov recurrence from the current iterate; returns
        # the fresh true-residual norm so callers can stop if converged
        nonlocal r, r0, rho, alpha, omega, v, p
        r = bv - op.apply(x)
        r0 = r.copy()
        rho = alpha = omega = 1.0
        v[:] = 0.0
        p[:] = 0.0
        return _l2(r)

    def breakdown(reason: str) -> float:
        # restart once from the current iterate, then give up
        nonlocal restarts
        restarts += 1
        if restarts > 1:
            report = SolveReport(iters, rel(_l2(bv - op.apply(x))), False)
            raise KrylovError(f"BiCGStab breakdown ({reason})", report)
        return restart_state()

    while iters < cfg.max_iter:
        rho_new = float(np.dot(r0, r))
        if not np.isfinite(rho_new):
            report = SolveReport(iters, rel(_l2(bv - op.apply(x))), False)
            raise KrylovError("BiCGStab diverged", report)
        if rho_new == 0.0 or omega == 0.0:
            if breakdown("rho") <= tol:
                return Field(spec, x), SolveReport(iters, rel(_l2(r)), True)
            continue
        beta = (rho_new / rho) * (alpha / omega)
        rho = rho_new
        p = r + beta * (p - omega * v)
        ph = p / diag
        v = op.apply(ph)
        gamma = float(np.dot(r0, v))
        if gamma == 0.0:
            if breakdown("orthogonality") <= tol:
                return Field(spec, x), SolveReport(iters, rel(_l2(r)), True)
            continue
        alpha = rho_new / gamma
        s = r - alpha * v
        iters += 1
        if _l2(s) <= tol:
            x += alpha * ph
            res = _l2(bv - op.apply(x))
            if res <= tol:
                return Field(spec, x), SolveReport(iters, rel(res), True)
            restart_state()
            continue
        sh = s / diag
        t = op.apply(sh)
        tt = float(np.dot(t, t))
        if tt == 0.0:
            if breakdown("stagnation") <= tol:
                return Field(spec, x), SolveReport(iters, rel(_l2(r)), True)
            continue
        omega = float(np.dot(t, s)) / tt
        x += alpha * ph + omega * sh
        r = s - omega * t
        res = _l2(r)
        if not np.isfinite(res):
            report = SolveReport(iters, float("inf"), False)
            raise KrylovError("BiCGStab diverged", report)
        if res <= tol:
            # the recurrence residual can drift from the true one; verify
            res = _l2(bv - op.apply(x))
            if res <= tol:
                return Field(spec, x), SolveReport(iters, rel(res), True)
            restart_state()

    report = SolveReport(iters, rel(_l2(bv - op.apply(x))), False)
    raise KrylovError(
        f"BiCGStab did not converge in {cfg.max_iter} iterations "
        f"(relative residual {report.final_residual:.3e})",
        report,
    )


def dense_solve_oracle(op, b: Field) -> Field:
    """Direct solve for testing: assemble op column-by-column, then LU.

    Guarded to small grids; uses partial-pivoting Gaussian elimination via
    numpy.linalg.solve.  Raises on singular matrices (scheme operators are
    diagonally dominant, so this indicates a bug).
    """
    n = b.spec.num_cells
    if n > 4096:
        raise ValueError(f"dense oracle limited to 4096 cells, got {n}")
    a = np.empty((n, n))
    e = np.zeros(n)
    for j in range(n):
        e[j] = 1.0
        a[:, j] = op.apply(e)
        e[j] = 0.0
    return Field(b.spec, np.linalg.solve(a, b.values))
