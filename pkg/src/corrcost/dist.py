"""Exact finite-probability engine.

Joint distributions over named variables, conditional channels, entropy and
mutual-information measures, Markov-chain tests, variational distance, and
lazy n-fold product handles.

Conventions
-----------
* Every information quantity is in nats (natural log).  Presentation layers
  convert to bits by dividing by ln 2.
* Zero cells are pruned at construction; conditionals are defined only on
  positive-probability conditioning events.  This avoids 0/0 when forming
  mutual informations and simulation channels.
* Conditional mutual information is an entropy difference with clamping:
  values in [-1e-9, 0] caused by floating-point cancellation are reported
  as exactly 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    AlphabetMismatchError,
    ArityMismatchError,
    NegativeMassError,
    NotNormalizedError,
    OverlappingGroupsError,
    UnknownLabelError,
    UnknownVariableError,
)

MASS_TOL = 1e-12
PRUNE_EPS = 1e-15
CMI_CLAMP = 1e-9

Label = object
Point = tuple


def _as_group(group) -> tuple[str, ...]:
    """Normalize a single name or a sequence of names into a tuple."""
    if isinstance(group, str):
        return (group,)
    return tuple(group)


def entropy_nats(probs: Iterable[float]) -> float:
    """Shannon entropy of a collection of probabilities, in nats.

    Zeros are skipped; uses fsum for stable accumulation at 1e-12 scales.
    """
    return -math.fsum(p * math.log(p) for p in probs if p > 0.0)


@dataclass(frozen=True)
class JointDist:
    """A finite joint probability distribution with named variables.

    Treat instances as immutable values; ``mass`` maps full label tuples
    (one label per variable, in ``variables`` order) to probabilities.
    All stored probabilities are strictly positive and sum to 1 within
    1e-12.  Use :func:`make_joint` to construct with validation.
    """

    variables: tuple[str, ...]
    alphabets: Mapping[str, tuple]
    mass: Mapping[Point, float]

    def prob(self, point: Point) -> float:
        return self.mass.get(tuple(point), 0.0)

    def support(self) -> Iterator[Point]:
        return iter(self.mass)

    def support_size(self) -> int:
        return len(self.mass)

    def alphabet_signature(self):
        return tuple((v, tuple(self.alphabets[v])) for v in self.variables)

    def indices(self, group) -> tuple[int, ...]:
        group = _as_group(group)
        pos = {v: i for i, v in enumerate(self.variables)}
        missing = [v for v in group if v not in pos]
        if missing:
            raise UnknownVariableError(f"unknown variable(s): {missing}")
        return tuple(pos[v] for v in group)

    def marginal(self, group) -> "JointDist":
        """Marginal distribution on ``group`` (order as given)."""
        group = _as_group(group)
        idx = self.indices(group)
        acc: dict[Point, float] = {}
        for pt, p in self.mass.items():
            key = tuple(pt[i] for i in idx)
            acc[key] = acc.get(key, 0.0) + p
        return JointDist(
            variables=group,
            alphabets={v: tuple(self.alphabets[v]) for v in group},
            mass=acc,
        )

    def conditional(self, target, given) -> "Channel":
        """Channel from ``given`` to ``target`` on positive-mass inputs."""
        target = _as_group(target)
        given = _as_group(given)
        if set(target) & set(given):
            raise OverlappingGroupsError(
                f"target {target} and conditioning {given} overlap"
            )
        t_idx = self.indices(target)
        g_idx = self.indices(given)
        joint: dict[Point, dict[Point, float]] = {}
        norm: dict[Point, float] = {}
        for pt, p in self.mass.items():
            g = tuple(pt[i] for i in g_idx)
            t = tuple(pt[i] for i in t_idx)
            joint.setdefault(g, {})
            joint[g][t] = joint[g].get(t, 0.0) + p
            norm[g] = norm.get(g, 0.0) + p
        rows = {
            g: {t: p / norm[g] for t, p in row.items()}
            for g, row in joint.items()
        }
        return Channel(
            in_variables=given,
            in_alphabets={v: tuple(self.alphabets[v]) for v in given},
            out_variables=target,
            out_alphabets={v: tuple(self.alphabets[v]) for v in target},
            rows=rows,
        )

    def restrict_labels(self) -> "JointDist":
        """Shrink alphabets to the letters actually present in the support."""
        seen: dict[str, set] = {v: set() for v in self.variables}
        for pt in self.mass:
            for v, lab in zip(self.variables, pt):
                seen[v].add(lab)
        alphas = {
            v: tuple(lab for lab in self.alphabets[v] if lab in seen[v])
            for v in self.variables
        }
        return JointDist(self.variables, alphas, dict(self.mass))


@dataclass(frozen=True)
class Channel:
    """Conditional distribution from one variable group to another.

    ``rows`` maps each reachable input tuple to a distribution over output
    tuples; every row sums to 1 within 1e-12.
    """

    in_variables: tuple[str, ...]
    in_alphabets: Mapping[str, tuple]
    out_variables: tuple[str, ...]
    out_alphabets: Mapping[str, tuple]
    rows: Mapping[Point, Mapping[Point, float]]

    def __post_init__(self):
        for inp, row in self.rows.items():
            tot = math.fsum(row.values())
            if abs(tot - 1.0) > MASS_TOL:
                raise NotNormalizedError(
                    f"channel row {inp!r} sums to {tot!r}, expected 1"
                )
            if any(p < 0.0 for p in row.values()):
                raise NegativeMassError(f"negative entry in channel row {inp!r}")

    def prob(self, out_point: Point, in_point: Point) -> float:
        row = self.rows.get(tuple(in_point))
        if row is None:
            return 0.0
        return row.get(tuple(out_point), 0.0)

    def row(self, in_point: Point) -> Mapping[Point, float]:
        return self.rows[tuple(in_point)]


def make_joint(variables, alphabets, entries) -> JointDist:
    """Validate and build a :class:`JointDist`.

    ``entries`` is a mapping from label tuples to probabilities (or an
    iterable of ``(point, p)`` pairs).  Entries below 1e-15 are dropped and
    the remainder renormalized, so stored mass sums to 1 exactly up to
    floating point.

    Raises
    ------
    NotNormalizedError   if \\|sum - 1\\| > 1e-12 before pruning.
    NegativeMassError    on any negative entry.
    ArityMismatchError   if a point's length differs from len(variables).
    UnknownLabelError    if a point uses a label outside its alphabet.
    """
    variables = tuple(variables)
    if len(set(variables)) != len(variables):
        raise UnknownVariableError(f"duplicate variable names in {variables}")
    alphabets = {v: tuple(alphabets[v]) for v in variables}
    if isinstance(entries, Mapping):
        items = entries.items()
    else:
        items = list(entries)
    label_sets = {v: set(alphabets[v]) for v in variables}
    cleaned: dict[Point, float] = {}
    for pt, p in items:
        pt = tuple(pt)
        if len(pt) != len(variables):
            raise ArityMismatchError(
                f"point {pt!r} has arity {len(pt)}, expected {len(variables)}"
            )
        if p < 0.0:
            raise NegativeMassError(f"negative mass {p!r} at {pt!r}")
        for v, lab in zip(variables, pt):
            if lab not in label_sets[v]:
                raise UnknownLabelError(f"label {lab!r} not in alphabet of {v!r}")
        if p > 0.0:
            cleaned[pt] = cleaned.get(pt, 0.0) + p
    total = math.fsum(cleaned.values())
    if abs(total - 1.0) > MASS_TOL:
        raise NotNormalizedError(f"total mass {total!r} is not 1 within {MASS_TOL}")
    pruned = {pt: p for pt, p in cleaned.items() if p >= PRUNE_EPS}
    kept = math.fsum(pruned.values())
    mass = {pt: p / kept for pt, p in pruned.items()}
    return JointDist(variables=variables, alphabets=alphabets, mass=mass)


def chain_joint(base: JointDist, channel: Channel) -> JointDist:
    """Extend ``base`` with ``channel`` applied to a subset of its variables.

    The channel's input variables must be variables of ``base``; output
    variables must be new.  Returns the joint over base variables followed
    by channel outputs.  Handy for building e.g. P(W) P(X|W) P(Y|W) joints.
    """
    for v in channel.out_variables:
        if v in base.variables:
            raise UnknownVariableError(f"output variable {v!r} already present")
    g_idx = base.indices(channel.in_variables)
    variables = base.variables + channel.out_variables
    alphabets = {v: tuple(base.alphabets[v]) for v in base.variables}
    alphabets.update({v: tuple(channel.out_alphabets[v]) for v in channel.out_variables})
    mass: dict[Point, float] = {}
    for pt, p in base.mass.items():
        g = tuple(pt[i] for i in g_idx)
        row = channel.rows.get(g)
        if row is None:
            raise UnknownVariableError(f"channel has no row for input {g!r}")
        for out, q in row.items():
            if q <= 0.0:
                continue
            mass[pt + out] = mass.get(pt + out, 0.0) + p * q
    return JointDist(variables=variables, alphabets=alphabets, mass=mass)


def _check_groups(joint: JointDist, *groups):
    seen: set[str] = set()
    for g in groups:
        if g is None:
            continue
        g = _as_group(g)
        joint.indices(g)  # raises UnknownVariableError on bad names
        if seen & set(g):
            raise OverlappingGroupsError(f"groups overlap at {sorted(seen & set(g))}")
        seen |= set(g)


def _entropy_of(joint: JointDist, group) -> float:
    return entropy_nats(joint.marginal(group).mass.values())


def measures(joint: JointDist, group_a, group_b=None, group_c=None) -> float:
    """Entropy or (conditional) mutual information, in nats.

    * ``measures(J, A)``        ->  H(A)
    * ``measures(J, A, B)``     ->  I(A;B)
    * ``measures(J, A, B, C)``  ->  I(A;B|C)

    Groups are variable names or sequences of names and must be disjoint.
    Small negatives from cancellation (within 1e-9) are clamped to 0.
    """
    _check_groups(joint, group_a, group_b, group_c)
    a = _as_group(group_a)
    if group_b is None:
        return _entropy_of(joint, a)
    b = _as_group(group_b)
    if group_c is None:
        value = (
            _entropy_of(joint, a)
            + _entropy_of(joint, b)
            - _entropy_of(joint, a + b)
        )
    else:
        c = _as_group(group_c)
        value = (
            _entropy_of(joint, a + c)
            + _entropy_of(joint, b + c)
            - _entropy_of(joint, a + b + c)
            - _entropy_of(joint, c)
        )
    if -CMI_CLAMP <= value < 0.0:
        return 0.0
    return value


def conditional_entropy(joint: JointDist, group_a, given) -> float:
    """H(A | B) in nats."""
    _check_groups(joint, group_a, given)
    a = _as_group(group_a)
    b = _as_group(given)
    value = _entropy_of(joint, a + b) - _entropy_of(joint, b)
    if -CMI_CLAMP <= value < 0.0:
        return 0.0
    return value


def is_markov(joint: JointDist, group_a, group_b, group_c, tol: float = 1e-9) -> bool:
    """True iff the chain A - B - C holds, i.e. I(A;C|B) <= tol."""
    return measures(joint, group_a, group_c, group_b) <= tol


@dataclass(frozen=True)
class ProductHandle:
    """Lazy n-fold product of a base distribution.

    Points are tuples of n base points; the evaluator multiplies per-letter
    base probabilities.  Supports enumeration of the (possibly large)
    product support; callers are responsible for budget checks.
    """

    base: JointDist
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ArityMismatchError(f"block length must be >= 1, got {self.n}")

    def prob(self, point) -> float:
        if len(point) != self.n:
            raise ArityMismatchError(
                f"sequence length {len(point)} != block length {self.n}"
            )
        out = 1.0
        for letter in point:
            out *= self.base.prob(letter)
            if out == 0.0:
                return 0.0
        return out

    def support(self) -> Iterator[tuple]:
        return itertools.product(list(self.base.support()), repeat=self.n)

    def support_size(self) -> int:
        return self.base.support_size() ** self.n

    def alphabet_signature(self):
        return ("product", self.base.alphabet_signature(), self.n)


def variational_distance(p, q) -> float:
    """L1 distance sum(\\|P - Q\\|) over a common alphabet, in [0, 2].

    Accepts any pair of handles exposing ``support()``, ``prob(point)`` and
    ``alphabet_signature()`` (JointDist, ProductHandle, mixture handles).
    Enumerates the union of both supports; callers must ensure the supports
    are enumerable within their budget.
    """
    if p.alphabet_signature() != q.alphabet_signature():
        raise AlphabetMismatchError(
            "handles do not share a common alphabet/variable signature"
        )
    terms = []
    seen = set()
    for pt in p.support():
        seen.add(pt)
        terms.append(abs(p.prob(pt) - q.prob(pt)))
    for pt in q.support():
        if pt not in seen:
            terms.append(abs(p.prob(pt) - q.prob(pt)))
    return min(math.fsum(terms), 2.0)
