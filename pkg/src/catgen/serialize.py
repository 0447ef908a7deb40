"""JSON and CSV round-trips for states and grids.

Numbers are written with repr-faithful precision ("%.17g" in CSV) so a
rerun with identical inputs produces byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO

import numpy as np

from .errors import DomainError
from .states import FockDensityMatrix, FockVector, WignerGrid

__all__ = [
    "fock_vector_to_json",
    "fock_vector_from_json",
    "density_matrix_to_json",
    "density_matrix_from_json",
    "wigner_to_csv",
    "wigner_from_csv",
]

FLOAT_FMT = "%.17g"


def _fmt(x: float) -> str:
    return FLOAT_FMT % x


def fock_vector_to_json(state: FockVector) -> str:
    payload = {
        "cutoff": state.cutoff,
        "re": state.amps.real.tolist(),
        "im": state.amps.imag.tolist(),
    }
    return json.dumps(payload)


def fock_vector_from_json(text: str) -> FockVector:
    d = json.loads(text)
    amps = np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)
    if amps.size != d["cutoff"] + 1:
        raise DomainError("cutoff field disagrees with amplitude length")
    return FockVector(amps)


def density_matrix_to_json(rho: FockDensityMatrix) -> str:
    payload = {
        "cutoff": rho.cutoff,
        "re": rho.mat.real.tolist(),
        "im": rho.mat.imag.tolist(),
    }
    return json.dumps(payload)


def density_matrix_from_json(text: str) -> FockDensityMatrix:
    d = json.loads(text)
    mat = np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)
    if mat.shape[0] != d["cutoff"] + 1:
        raise DomainError("cutoff field disagrees with matrix shape")
    return FockDensityMatrix(mat)


def wigner_to_csv(grid: WignerGrid, stream: IO[str], header_lines: list[str] | None = None) -> None:
    """Write `x,p,w` rows in x-major order, one row per grid point."""
    for line in header_lines or []:
        stream.write(f"# {line}\n")
    stream.write("x,p,w\n")
    for i, x in enumerate(grid.x_axis):
        for j, p in enumerate(grid.p_axis):
            stream.write(f"{_fmt(x)},{_fmt(p)},{_fmt(grid.values[i, j])}\n")


def wigner_from_csv(path: str | Path) -> WignerGrid:
    rows = np.loadtxt(path, delimiter=",", skiprows=_count_header(path), comments="#")
    x = np.unique(rows[:, 0])
    p = np.unique(rows[:, 1])
    vals = rows[:, 2].reshape(x.size, p.size)
    return WignerGrid(x, p, vals)


def _count_header(path: str | Path) -> int:
    with open(path) as fh:
        n = 0
        for line in fh:
            if line.startswith("#"):
                n += 1
            else:
                return n + 1  # the x,p,w header row itself
    return n
