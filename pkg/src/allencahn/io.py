"""File output: per-step CSV diagnostics and binary field snapshots."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .diagnostics import StepRecord
from .grid import Field, GridSpec

__all__ = [
    "CSV_HEADER",
    "write_csv",
    "read_csv_records",
    "write_snapshot",
    "read_snapshot",
]

# frozen: downstream tooling keys on these exact column names
CSV_HEADER = "n,t,tau,energy,max_norm,max_val,min_val,solver_iters,solver_residual"


def write_csv(records: list[StepRecord], path) -> None:
    """One row per step; floats are written in shortest round-trip form."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.n},{r.t!r},{r.tau!r},{r.energy!r},{r.max_norm!r},"
            f"{r.max_val!r},{r.min_val!r},{r.solver_iters},{r.solver_residual!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv_records(path) -> list[StepRecord]:
    """Read rows back; derived monitor columns are recomputed from the data."""
    text = Path(path).read_text()
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: unrecognized CSV header")
    records = []
    prev_energy = None
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 9:
            raise ValueError(f"{path}: malformed row {line!r}")
        n, t, tau, energy, max_nrm, max_val, min_val, iters, resid = parts
        energy = float(energy)
        max_nrm = float(max_nrm)
        records.append(
            StepRecord(
                n=int(n),
                t=float(t),
                tau=float(tau),
                energy=energy,
                max_val=float(max_val),
                min_val=float(min_val),
                max_norm=max_nrm,
                solver_iters=int(iters),
                solver_residual=float(resid),
                mbp_violation=max(0.0, max_nrm - 1.0),
                energy_increase=(
                    0.0 if prev_energy is None else max(0.0, energy - prev_energy)
                ),
            )
        )
        prev_energy = energy
    return records


def write_snapshot(field: Field, t: float, eps: float, path) -> None:
    """Plain-text header line, then little-endian float64 values.

    Header: ``dim=<d> cells=<M> length=<L> t=<t> eps=<eps>`` with floats in
    round-trip form; payload in lexicographic (x fastest) order.
    """
    spec = field.spec
    header = (
        f"dim={spec.dim} cells={spec.cells_per_dim} length={spec.domain_length!r} "
        f"t={t!r} eps={eps!r}\n"
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())


def read_snapshot(path) -> tuple[Field, dict]:
    """Inverse of write_snapshot; values round-trip bitwise."""
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").strip()
        payload = fh.read()
    meta: dict = {}
    try:
        for item in header.split():
            key, raw = item.split("=", 1)
            meta[key] = raw
        spec = GridSpec(int(meta["dim"]), int(meta["cells"]), float(meta["length"]))
        info = {"t": float(meta["t"]), "eps": float(meta["eps"])}
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{path}: malformed snapshot header {header!r}") from exc
    values = np.frombuffer(payload, dtype="<f8")
    if values.size != spec.num_cells:
        raise ValueError(
            f"{path}: payload has {values.size} values, expected {spec.num_cells}"
        )
    return Field(spec, values.astype(np.float64)), info
