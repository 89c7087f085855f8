"""Built-in example distributions and the experiment harness.

The harness produces deterministic result tables (CSV or JSON lines) with
corner points, frontier sweeps, and block-length simulation rows, suitable
for plotting rate regions downstream.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .decomp import (
    MODEL_ADVERSARIAL,
    MODEL_COLLABORATIVE,
    AuxDecomposition,
    OptimizerConfig,
)
from .dist import JointDist, make_joint
from .errors import BadParamsError, UnknownIdError, ValidationError

TABLE_SCHEMA_VERSION = 1

# Fixed column order of result tables.  runtime_ms is informational and is
# the one column excluded from reproducibility guarantees.
TABLE_COLUMNS = (
    "distribution",
    "model",
    "lambda_or_corner",
    "r_p",
    "r_k",
    "n",
    "seed",
    "l1",
    "runtime_ms",
)


def _uniform_cells(variables, alphabets, cells) -> JointDist:
    p = Fraction(1, len(cells))
    return make_joint(variables, alphabets, {tuple(c): float(p) for c in cells})


def example2() -> JointDist:
    """Five-point L-shaped distribution over {0,1,2}^3, each cell mass 1/5."""
    cells = [(2, 2, 0), (2, 2, 1), (2, 2, 2), (0, 0, 2), (1, 1, 2)]
    return _uniform_cells(("X", "Y", "Z"), {v: (0, 1, 2) for v in "XYZ"}, cells)


def xor3() -> JointDist:
    """X, Y i.i.d. uniform bits, Z = X xor Y."""
    cells = {(x, y, x ^ y): 0.25 for x in (0, 1) for y in (0, 1)}
    return make_joint(("X", "Y", "Z"), {v: (0, 1) for v in "XYZ"}, cells)


def and3() -> JointDist:
    """X, Y i.i.d. uniform bits, Z = X and Y."""
    cells = {(x, y, x & y): 0.25 for x in (0, 1) for y in (0, 1)}
    return make_joint(("X", "Y", "Z"), {v: (0, 1) for v in "XYZ"}, cells)


def lshape(row_arm: int, col_arm: int, weights: Optional[Sequence[float]] = None) -> JointDist:
    """L-shaped family generalizing :func:`example2`.

    X = Y ranges over {0..row_arm}; Z over {0..col_arm}.  Support is the
    column (K, K, z) for z in {0..col_arm} plus the row (x, x, col_arm) for
    x in {0..row_arm-1}, K = row_arm.  ``weights`` (optional) assigns cell
    masses in that order; default is uniform.
    """
    if row_arm < 1 or col_arm < 1:
        raise BadParamsError("lshape arms must be >= 1")
    k = row_arm
    cells = [(k, k, z) for z in range(col_arm + 1)]
    cells += [(x, x, col_arm) for x in range(row_arm)]
    if weights is None:
        masses = [1.0 / len(cells)] * len(cells)
    else:
        if len(weights) != len(cells):
            raise BadParamsError(
                f"lshape needs {len(cells)} weights, got {len(weights)}"
            )
        tot = float(sum(weights))
        if tot <= 0:
            raise BadParamsError("lshape weights must have positive sum")
        masses = [float(w) / tot for w in weights]
    xy_alpha = tuple(range(row_arm + 1))
    z_alpha = tuple(range(col_arm + 1))
    return make_joint(
        ("X", "Y", "Z"),
        {"X": xy_alpha, "Y": xy_alpha, "Z": z_alpha},
        {c: m for c, m in zip(cells, masses) if m > 0},
    )


def random_joint(seed: int, sizes: tuple[int, int, int] = (2, 2, 2)) -> JointDist:
    """Full-support Dirichlet(1) random distribution over given alphabet sizes."""
    rng = np.random.default_rng(seed)
    if len(sizes) != 3 or any(s < 1 for s in sizes):
        raise BadParamsError(f"sizes must be three positive ints, got {sizes}")
    mass = rng.dirichlet(np.ones(int(np.prod(sizes))))
    pts = [
        (x, y, z)
        for x in range(sizes[0])
        for y in range(sizes[1])
        for z in range(sizes[2])
    ]
    return make_joint(
        ("X", "Y", "Z"),
        {"X": tuple(range(sizes[0])), "Y": tuple(range(sizes[1])), "Z": tuple(range(sizes[2]))},
        {pt: float(m) for pt, m in zip(pts, mass)},
    )


def random_deterministic_z(seed: int, sizes: tuple[int, int, int] = (2, 2, 2)) -> JointDist:
    """Random Q(XY) with Z = f(X, Y) for a seeded random function f."""
    rng = np.random.default_rng(seed)
    if len(sizes) != 3 or any(s < 1 for s in sizes):
        raise BadParamsError(f"sizes must be three positive ints, got {sizes}")
    nx, ny, nz = sizes
    q_xy = rng.dirichlet(np.ones(nx * ny))
    f = rng.integers(0, nz, size=(nx, ny))
    mass = {}
    for i, (x, y) in enumerate((x, y) for x in range(nx) for y in range(ny)):
        mass[(x, y, int(f[x, y]))] = float(q_xy[i])
    return make_joint(
        ("X", "Y", "Z"),
        {"X": tuple(range(nx)), "Y": tuple(range(ny)), "Z": tuple(range(nz))},
        mass,
    )


_BUILTINS = {
    "example2": lambda params: example2(),
    "xor3": lambda params: xor3(),
    "and3": lambda params: and3(),
    "lshape": lambda params: lshape(*params),
    "random": lambda params: random_joint(*params),
    "random_deterministic_z": lambda params: random_deterministic_z(*params),
}


def example_distributions(dist_id: str, params=None) -> JointDist:
    """Look up a built-in distribution by id.

    ids: ``example2``, ``xor3``, ``and3``, ``lshape(row_arm, col_arm)``,
    ``random(seed, sizes)``, ``random_deterministic_z(seed, sizes)``.
    """
    if dist_id not in _BUILTINS:
        raise UnknownIdError(
            f"unknown distribution id {dist_id!r}; known: {sorted(_BUILTINS)}"
        )
    try:
        return _BUILTINS[dist_id](tuple(params or ()))
    except TypeError as exc:
        raise BadParamsError(f"bad params for {dist_id!r}: {exc}") from exc


def example2_witness() -> AuxDecomposition:
    """The binary-U decomposition of :func:`example2` achieving its corner.

    U splits the L into its two maximal product components; V resolves the
    residual X = Y correlation inside each component (V is the pair value
    index when U = 0 and constant when U = 1).
    """
    f = Fraction
    cells = {
        # (x, y, z, u, v): mass
        (0, 0, 2, 0, 0): f(1, 5),
        (1, 1, 2, 0, 1): f(1, 5),
        (2, 2, 2, 0, 2): f(1, 10),
        (2, 2, 0, 1, 2): f(1, 5),
        (2, 2, 1, 1, 2): f(1, 5),
        (2, 2, 2, 1, 2): f(1, 10),
    }
    joint = make_joint(
        ("X", "Y", "Z", "U", "V"),
        {
            "X": (0, 1, 2),
            "Y": (0, 1, 2),
            "Z": (0, 1, 2),
            "U": (0, 1),
            "V": (0, 1, 2),
        },
        {pt: float(m) for pt, m in cells.items()},
    )
    return AuxDecomposition(
        joint=joint,
        base=example2(),
        model=MODEL_COLLABORATIVE,
        u_var="U",
        v_var="V",
        roles=("X", "Y", "Z"),
    )
