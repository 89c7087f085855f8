"""Auxiliary-variable decompositions and rate points.

An :class:`AuxDecomposition` is a candidate augmentation of a base
distribution Q with auxiliaries (public U and, except for the plain
common-information models, private V), satisfying the Markov chains of its
model:

* ``collaborative``: X - VU - Y and XY - U - Z
* ``adversarial``:   XY - Z - U and X - UV - Y
* ``wyner2``:        groupA - W - groupB
* ``wyner3``:        X, Y, Z mutually independent given W

The decomposition is stored as the full augmented joint, the single source
of truth; the conditional views used by code constructions (P(U),
P(XY|U,V), P(Z|U)) are derived on demand.  Rates are always recomputed
from the joint with :func:`corrcost.dist.measures`, so every reported rate
pair is reproducible from its witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .dist import (
    Channel,
    JointDist,
    entropy_nats,
    measures,
    variational_distance,
)
from .errors import ChainViolationError, ValidationError

MODEL_COLLABORATIVE = "collaborative"
MODEL_ADVERSARIAL = "adversarial"
MODEL_WYNER2 = "wyner2"
MODEL_WYNER3 = "wyner3"

_MODELS = (MODEL_COLLABORATIVE, MODEL_ADVERSARIAL, MODEL_WYNER2, MODEL_WYNER3)


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for the restart-based decomposition optimizers.

    ``penalty_weight`` is the peak weight of the feasibility penalty (the
    schedule ramps up to it geometrically).  ``tol_constraint`` is the
    feasibility tolerance during optimization; final witnesses are
    validated at 1e-7.  ``u_card``/``v_card`` override the default
    auxiliary cardinalities (bounded by the model's Caratheodory limits).
    """

    restarts: int = 64
    max_iters: int = 600
    penalty_weight: float = 1e5
    tol_objective: float = 1e-6
    tol_constraint: float = 1e-9
    seed: int = 0
    u_card: Optional[int] = None
    v_card: Optional[int] = None
    polish_iters: int = 2000
    inner_restarts: int = 12
    inner_max_iters: int = 350

    def __post_init__(self):
        if self.restarts < 1:
            raise ValidationError(f"restarts must be >= 1, got {self.restarts}")
        for name in ("tol_objective", "tol_constraint"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be > 0")
        if self.max_iters < 0 or self.polish_iters < 0:
            raise ValidationError("iteration counts must be >= 0")


@dataclass(frozen=True)
class AuxDecomposition:
    """A (U, V) augmentation of a base distribution, with model tag.

    ``joint`` ranges over the base variables plus ``u_var`` (and ``v_var``
    unless the model is a plain common-information one).  ``roles`` names
    the (X, Y, Z) variables for the tripartite models; for ``wyner2`` the
    two groups are given in ``groups``.
    """

    joint: JointDist
    base: JointDist
    model: str
    u_var: str = "U"
    v_var: Optional[str] = "V"
    roles: Optional[tuple[str, str, str]] = None
    groups: Optional[tuple[tuple[str, ...], tuple[str, ...]]] = None

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ValidationError(f"unknown model tag {self.model!r}")
        if self.model == MODEL_WYNER2 and self.groups is None:
            raise ValidationError("wyner2 decomposition needs its two groups")

    # ----- derived views ---------------------------------------------------

    @property
    def base_vars(self) -> tuple[str, ...]:
        return self.base.variables

    def _xyz(self) -> tuple[str, str, str]:
        if self.roles is not None:
            return self.roles
        if len(self.base_vars) != 3:
            raise ValidationError("roles required when base is not three variables")
        return (self.base_vars[0], self.base_vars[1], self.base_vars[2])

    @property
    def u_dist(self) -> dict:
        return dict(self.joint.marginal(self.u_var).mass)

    @property
    def u_card(self) -> int:
        return len(self.u_dist)

    @property
    def v_card(self) -> int:
        if self.v_var is None:
            return 0
        return self.joint.marginal(self.v_var).support_size()

    @property
    def cond_xy_given_uv(self) -> Channel:
        x, y, _ = self._xyz()
        given = (self.u_var,) if self.v_var is None else (self.u_var, self.v_var)
        return self.joint.conditional((x, y), given)

    @property
    def cond_z_given_u(self) -> Channel:
        _, _, z = self._xyz()
        return self.joint.conditional((z,), (self.u_var,))

    # ----- chains and rates ------------------------------------------------

    def chain_residuals(self) -> dict[str, float]:
        """Conditional mutual informations that must vanish for this model."""
        u, v = self.u_var, self.v_var
        if self.model == MODEL_WYNER2:
            ga, gb = self.groups
            return {"A-W-B": measures(self.joint, ga, gb, u)}
        if self.model == MODEL_WYNER3:
            x, y, z = self._xyz()
            return {
                "X-W-Y": measures(self.joint, x, y, u),
                "XY-W-Z": measures(self.joint, (x, y), z, u),
            }
        x, y, z = self._xyz()
        if self.model == MODEL_COLLABORATIVE:
            return {
                "X-VU-Y": measures(self.joint, x, y, (v, u)),
                "XY-U-Z": measures(self.joint, (x, y), z, u),
            }
        return {
            "XY-Z-U": measures(self.joint, (x, y), u, z),
            "X-UV-Y": measures(self.joint, x, y, (u, v)),
        }

    def marginal_error(self) -> float:
        """L1 distance between the joint's base marginal and the base."""
        return variational_distance(self.joint.marginal(self.base_vars), self.base)

    def rate_pair(self) -> tuple[float, float]:
        """(public rate, private rate) in nats, from the joint."""
        u, v = self.u_var, self.v_var
        if self.model == MODEL_WYNER2:
            ga, gb = self.groups
            return (measures(self.joint, ga + gb, u), 0.0)
        x, y, z = self._xyz()
        if self.model == MODEL_WYNER3:
            return (measures(self.joint, (x, y, z), u), 0.0)
        if self.model == MODEL_COLLABORATIVE:
            r_p = measures(self.joint, (x, y, z), u)
        else:
            r_p = measures(self.joint, (z,), u)
        r_k = measures(self.joint, (x, y), v, u)
        return (r_p, r_k)

    def _card_bounds(self) -> tuple[int, Optional[int]]:
        sizes = {v: len(self.base.alphabets[v]) for v in self.base_vars}
        if self.model == MODEL_WYNER2:
            ga, gb = self.groups
            prod = 1
            for v in ga + gb:
                prod *= sizes[v]
            return (prod, None)
        x, y, z = self._xyz()
        xyz = sizes[x] * sizes[y] * sizes[z]
        if self.model == MODEL_WYNER3:
            return (xyz + 1, None)
        if self.model == MODEL_COLLABORATIVE:
            return (xyz + 1, sizes[x] * sizes[y])
        return (sizes[z] + 1, sizes[x] * sizes[y])

    def validate(self, tol: float = 1e-9) -> "AuxDecomposition":
        """Check marginal match, model chains, and cardinality bounds.

        Returns self so calls can be chained; raises on violation.
        """
        err = self.marginal_error()
        if err > tol:
            raise ValidationError(
                f"reconstructed base marginal off by L1={err:.3e} > {tol:.1e}"
            )
        for name, resid in self.chain_residuals().items():
            if resid > tol:
                raise ChainViolationError(
                    f"chain {name} violated: I = {resid:.3e} > {tol:.1e}"
                )
        u_bound, v_bound = self._card_bounds()
        if self.u_card > u_bound:
            raise ValidationError(
                f"|U| = {self.u_card} exceeds bound {u_bound} for {self.model}"
            )
        if v_bound is not None and self.v_card > v_bound:
            raise ValidationError(
                f"|V| = {self.v_card} exceeds bound {v_bound} for {self.model}"
            )
        return self


@dataclass(frozen=True)
class RatePoint:
    """An achievable (public, private) rate pair with its witness."""

    r_p: float
    r_k: float
    witness: AuxDecomposition
    label: Optional[str] = None  # "alpha" | "beta" | "interior"

    def __post_init__(self):
        if self.r_p < 0 or self.r_k < 0:
            raise ValidationError(
                f"rates must be nonnegative, got ({self.r_p}, {self.r_k})"
            )

    @classmethod
    def from_witness(cls, witness: AuxDecomposition, label=None) -> "RatePoint":
        r_p, r_k = witness.rate_pair()
        return cls(r_p=max(r_p, 0.0), r_k=max(r_k, 0.0), witness=witness, label=label)

    def reproduction_error(self) -> float:
        """Max deviation between stored rates and the witness recomputation."""
        r_p, r_k = self.witness.rate_pair()
        return max(abs(r_p - self.r_p), abs(r_k - self.r_k))


@dataclass(frozen=True)
class Frontier:
    """Rate points on the lower envelope of an achievable region.

    ``points`` is sorted by increasing public rate with nonincreasing
    private rate.  ``per_lambda`` keeps the scalarization winner for each
    requested weight.  ``key_cost`` is set for the adversarial model only:
    the infimum private rate with unconstrained public rate.
    """

    points: tuple[RatePoint, ...]
    per_lambda: dict[float, RatePoint]
    key_cost: Optional[float] = None
    key_point: Optional[RatePoint] = None


def lower_envelope(points: list[RatePoint]) -> tuple[RatePoint, ...]:
    """Lower-left convex envelope of achieved points.

    Keeps only achieved (witnessed) points: first a Pareto filter, then the
    lower convex hull; time-sharing convexity justifies discarding points
    above the hull.  The result is sorted by r_p with r_k nonincreasing.
    """
    if not points:
        return ()
    pts = sorted(points, key=lambda r: (r.r_p, r.r_k))
    pareto: list[RatePoint] = [pts[0]]
    for rp in pts[1:]:
        if rp.r_k < pareto[-1].r_k - 1e-12:
            pareto.append(rp)
    hull: list[RatePoint] = []
    for rp in pareto:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # pop b unless (a, b, rp) makes a strict counterclockwise turn,
            # i.e. unless b lies strictly below the segment a -> rp
            cross = (b.r_p - a.r_p) * (rp.r_k - a.r_k) - (b.r_k - a.r_k) * (
                rp.r_p - a.r_p
            )
            if cross <= 1e-15:
                hull.pop()
            else:
                break
        hull.append(rp)
    return tuple(hull)
