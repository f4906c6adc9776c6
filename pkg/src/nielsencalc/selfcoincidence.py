"""Looseness trichotomy for self-pairs (f, f) into projective spaces.

For a class with lift component [f~] in pi_m(S^{d n' + d - 1}) the
verdict is read off two exact evaluations:

* loose by a small deformation  <=>  boundary([f~]) = 0, and for
  projective targets this already decides looseness outright and
  whether f is coincidence producing;
* the obstruction invariant vanishes  <=>  E(boundary([f~])) = 0.

The interesting phenomenon is the gap: the obstruction can vanish while
the pair is not loose by any deformation.  The structural criteria at
the bottom predict exactly when such gap witnesses exist, via paired
injectivity on pi_{m-1}(S^{n-1}).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .fgab import GroupElement, Homomorphism, paired_injective
from .homotopy_db import Database, SpaceId
from .classifier import ClassificationError, _FIELD_DIMS

__all__ = [
    "LoosenessVerdict",
    "StructuralCriterion",
    "self_verdict",
    "criteria_equivalence_iii",
    "criteria_equivalence_iii_prime",
]


@dataclass(frozen=True)
class LoosenessVerdict:
    """Booleans describing how removable the self-coincidence of (f, f) is.

    The implication chain small_deformation => loose =>
    (not coincidence_producing and omega_sharp_zero) is checked on
    construction; gap_witness records the omega-blind situation where
    the invariant vanishes but the pair is not loose.
    """

    K: str
    m: int
    nprime: int
    small_deformation: bool
    loose: bool
    coincidence_producing: bool
    omega_sharp_zero: bool
    lifted_pair_loose: bool
    gap_witness: bool

    def __post_init__(self):
        if self.small_deformation and not self.loose:
            raise ClassificationError("small deformation looseness implies looseness")
        if self.loose and self.coincidence_producing:
            raise ClassificationError("a loose self-pair is not coincidence producing")
        if self.loose and not self.omega_sharp_zero:
            raise ClassificationError("looseness forces the invariant to vanish")
        if self.gap_witness != (self.omega_sharp_zero and not self.loose):
            raise ClassificationError("gap_witness must equal omega_sharp_zero "
                                      "and not loose")


@dataclass(frozen=True)
class StructuralCriterion:
    """The maps out of pi_{m-1}(S^{n-1}) that control the two equivalences:
    j into the punctured target, the fiber inclusion into the unit
    tangent/frame space, and the suspension."""

    j_star: Optional[Homomorphism] = None
    incl_star: Optional[Homomorphism] = None
    suspension: Optional[Homomorphism] = None

    def __post_init__(self):
        sources = {h.source for h in (self.j_star, self.incl_star, self.suspension)
                   if h is not None}
        if len(sources) > 1:
            raise ClassificationError(
                "all structural maps must share the source pi_{m-1}(S^{n-1})")


def self_verdict(db: Database, K: str, m: int, nprime: int,
                 lift: GroupElement) -> LoosenessVerdict:
    """Looseness verdict for the self-pair of a class with the given lift.

    For projective targets, loose by small deformation, loose, and not
    coincidence producing all coincide with boundary(lift) = 0; the
    invariant vanishes iff E(boundary(lift)) = 0.  For K = R the lifted
    self-pair on the sphere is loose exactly when the invariant
    vanishes; for K = C or H the lift sphere is odd-dimensional and the
    lifted pair is always loose.
    """
    if K not in _FIELD_DIMS:
        raise ClassificationError(f"K must be R, C or H, got {K!r}")
    if m < 2 or nprime < 2:
        raise ClassificationError("the verdict needs m >= 2 and n' >= 2")
    d = _FIELD_DIMS[K]
    n = d * nprime
    lift_key = (SpaceId.sphere(n + d - 1), m)
    lift_group = db.require_group(*lift_key)
    if lift.parent != lift_group:
        raise ClassificationError(
            f"lift must live in pi_{m}(S({n + d - 1})) = {lift_group}")
    boundary = db.require_hom("boundary_K", lift_key,
                              (SpaceId.sphere(n - 1), m - 1))
    susp = db.require_hom("suspension_E", (SpaceId.sphere(n - 1), m - 1),
                          (SpaceId.sphere(n), m))
    b = boundary(lift)
    small = b.is_zero
    omega_zero = susp(b).is_zero
    lifted_loose = omega_zero if K == "R" else True
    return LoosenessVerdict(
        K=K, m=m, nprime=nprime,
        small_deformation=small,
        loose=small,
        coincidence_producing=not small,
        omega_sharp_zero=omega_zero,
        lifted_pair_loose=lifted_loose,
        gap_witness=omega_zero and not small,
    )


def criteria_equivalence_iii(criterion: StructuralCriterion) -> bool:
    """Does 'loose by small deformation' coincide with 'not coincidence
    producing' for every class in this dimension pair?  Holds iff the
    pairing (j, incl) is injective."""
    if criterion.j_star is None or criterion.incl_star is None:
        raise ClassificationError("criterion needs j_star and incl_star")
    return paired_injective(criterion.j_star, criterion.incl_star)


def criteria_equivalence_iii_prime(criterion: StructuralCriterion) -> bool:
    """Does 'loose by small deformation' coincide with vanishing of the
    obstruction invariant for every class in this dimension pair?  Holds
    iff the pairing (E, incl) is injective; a False here predicts the
    existence of gap witnesses."""
    if criterion.suspension is None or criterion.incl_star is None:
        raise ClassificationError("criterion needs suspension and incl_star")
    return paired_injective(criterion.suspension, criterion.incl_star)
