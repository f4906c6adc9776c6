"""Decision engine for strong Nielsen and minimum coincidence numbers.

Covers three settings, all driven by exact homotopy-group data from a
validated database:

* pairs of maps S^m -> KP(n') with K in {R, C, H} and m, n' >= 2,
  classified into seven mutually exclusive cases with their
  (N#, MCC, MC) triples;
* pairs of maps S^m -> S^n, where the answer is controlled by the
  antipodal action (with a degree count on the circle);
* maps into spherical space forms S^n/G, where the deck group order
  controls the counts.

The classification consumes only the lift component of a projective
class: the complementary residue component never changes the numbers
and is merely echoed back as a note.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Optional, Union

from .fgab import GroupElement, in_image
from .homotopy_db import Database, SpaceId

__all__ = [
    "INF",
    "Infinity",
    "ProjectiveClass",
    "CoincidenceAnswer",
    "SpaceFormQuery",
    "ClassificationError",
    "CASE_CONDITIONS",
    "table_conditions",
    "classify_projective",
    "classify_sphere_target",
    "classify_space_form",
    "nielsen_via_liftings",
    "reidemeister_count",
    "reidemeister_count_covering",
]

_FIELD_DIMS = {"R": 1, "C": 2, "H": 4}


class Infinity:
    """Exact stand-in for an infinite minimum coincidence number.

    Compares above every integer; the artifact never touches floats.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __hash__(self):
        return hash("Infinity")

    def __gt__(self, other):
        if not isinstance(other, (int, Infinity)):
            return NotImplemented
        return not isinstance(other, Infinity)

    def __ge__(self, other):
        if not isinstance(other, (int, Infinity)):
            return NotImplemented
        return True

    def __lt__(self, other):
        if not isinstance(other, (int, Infinity)):
            return NotImplemented
        return False

    def __le__(self, other):
        if not isinstance(other, (int, Infinity)):
            return NotImplemented
        return isinstance(other, Infinity)


INF = Infinity()

Count = Union[int, Infinity]


class ClassificationError(ValueError):
    """A precondition of the classification was violated."""


CASE_CONDITIONS = {
    1: "f'_1 ~ f'_2, [f~_2] in ker ∂_K",
    2: "f'_1 ~ f'_2, [f~_2] in ker E∘∂_K - ker ∂_K",
    3: "K = R, f'_1 ~ f'_2, f~_2 !~ A∘f~_2",
    4: "K = R, f'_1 !~ f'_2, [f~_1] - [f~_2] in E(pi_{m-1}(S^{n-1}))",
    5: "K = R, [f~_1] - [f~_2] not in E(pi_{m-1}(S^{n-1}))",
    6: "K = C or H, [f~_1] = [f~_2] not in ker E∘∂_K",
    7: "K = C or H, [f~_1] != [f~_2]",
}

_CASE_TRIPLES: dict[int, tuple[Count, Count, Count]] = {
    1: (0, 0, 0),
    2: (0, 1, 1),
    3: (1, 1, 1),
    4: (2, 2, 2),
    5: (2, 2, INF),
    6: (1, 1, 1),
    7: (1, 1, INF),
}


@dataclass(frozen=True)
class ProjectiveClass:
    """A homotopy class in pi_m(KP(n')), split as lift plus residue.

    The lift lives in pi_m(S^{d n' + d - 1}); the residue is the
    component coming from KP(n'-1) and lives in pi_{m-1}(S^{d-1}) (a
    trivial group for K = R, and for K = C once m > 2).
    """

    K: str
    m: int
    nprime: int
    lift: GroupElement
    residue: Optional[GroupElement] = None

    def __post_init__(self):
        if self.K not in _FIELD_DIMS:
            raise ClassificationError(f"K must be R, C or H, got {self.K!r}")
        if self.m < 1 or self.nprime < 1:
            raise ClassificationError("m and n' must be >= 1")
        if self.K == "R" and self.residue is not None and not self.residue.is_zero:
            raise ClassificationError(
                "for K = R the residue group is trivial; drop the residue")

    @property
    def d(self) -> int:
        return _FIELD_DIMS[self.K]

    @property
    def base_dim(self) -> int:
        """Real dimension n of KP(n')."""
        return self.d * self.nprime

    @property
    def lift_sphere(self) -> SpaceId:
        return SpaceId.sphere(self.base_dim + self.d - 1)


@dataclass(frozen=True)
class CoincidenceAnswer:
    """(case, N#, MCC, MC) plus looseness flags where determinable.

    None marks a genuinely undetermined value (the space-form cases can
    leave fields open); INF is the exact answer infinity.
    """

    case_id: Union[int, str]
    condition: str
    nielsen: Optional[int]
    mcc: Optional[int]
    mc: Optional[Count]
    omega_sharp_zero: Optional[bool] = None
    loose: Optional[bool] = None
    loose_small: Optional[bool] = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.nielsen is not None and self.mcc is not None:
            if not self.nielsen <= self.mcc:
                raise ClassificationError("invariant violated: N# <= MCC")
        if self.mcc is not None and self.mc is not None:
            if not self.mcc <= self.mc:
                raise ClassificationError("invariant violated: MCC <= MC")

    @property
    def triple(self):
        return (self.nielsen, self.mcc, self.mc)


@dataclass(frozen=True)
class SpaceFormQuery:
    """Inputs for the spherical space form S^n/G setting.

    domain_case records which hypothesis the caller asserts: a sphere
    domain of dimension >= 2, or a simply connected domain of dimension
    m < 2n - 2.
    """

    group_order: int
    n: int
    homotopic: bool
    domain_case: str = "sphere"

    def __post_init__(self):
        if not isinstance(self.group_order, int) or self.group_order < 2:
            raise ClassificationError("group order must be a finite integer >= 2")
        if self.n < 1:
            raise ClassificationError("n must be >= 1")
        if self.domain_case not in ("sphere", "simply-connected"):
            raise ClassificationError(
                "domain_case must be 'sphere' or 'simply-connected'")
        if self.n % 2 == 0 and self.group_order != 2:
            raise ClassificationError(
                "no nontrivial finite group of order > 2 acts freely on an "
                "even sphere")


# ---------------------------------------------------------------------------
# the seven-case classification

def _projective_data(db: Database, f1: ProjectiveClass, f2: ProjectiveClass):
    """Resolve and sanity-check everything the table evaluation needs."""
    if (f1.K, f1.m, f1.nprime) != (f2.K, f2.m, f2.nprime):
        raise ClassificationError("the two classes must share (K, m, n')")
    if f1.m < 2 or f1.nprime < 2:
        raise ClassificationError("the classification needs m >= 2 and n' >= 2")
    K, m, d, n = f1.K, f1.m, f1.d, f1.base_dim
    lift_key = (f1.lift_sphere, m)
    lift_group = db.require_group(*lift_key)
    for f in (f1, f2):
        if f.lift.parent != lift_group:
            raise ClassificationError(
                f"lift must live in pi_{m}({f1.lift_sphere}) = {lift_group}")
    boundary = db.require_hom("boundary_K", lift_key,
                              (SpaceId.sphere(n - 1), m - 1))
    susp = db.require_hom("suspension_E", (SpaceId.sphere(n - 1), m - 1),
                          (SpaceId.sphere(n), m))
    antipodal = None
    if K == "R":
        antipodal = db.require_hom("antipodal_A", lift_key, lift_key)
    for f in (f1, f2):
        if f.residue is not None:
            residue_group = db.require_group(SpaceId.sphere(d - 1), m - 1)
            if f.residue.parent != residue_group:
                raise ClassificationError(
                    f"residue must live in pi_{m - 1}(S({d - 1})) = {residue_group}")
    return lift_group, boundary, susp, antipodal


def table_conditions(db: Database, f1: ProjectiveClass,
                     f2: ProjectiveClass) -> tuple[bool, ...]:
    """Evaluate the seven case conditions literally, in table order."""
    _, boundary, susp, antipodal = _projective_data(db, f1, f2)
    K = f1.K
    lift1, lift2 = f1.lift, f2.lift
    b2 = boundary(lift2)
    eb2 = susp(b2)
    if K == "R":
        free_homotopic = lift1 == lift2 or lift1 == antipodal(lift2)
        diff_in_im_e = in_image(susp, lift1 - lift2)[0]
        fixed_by_a = lift2 == antipodal(lift2)
        return (
            free_homotopic and b2.is_zero,
            free_homotopic and eb2.is_zero and not b2.is_zero,
            free_homotopic and not fixed_by_a,
            not free_homotopic and diff_in_im_e,
            not diff_in_im_e,
            False,
            False,
        )
    equal = lift1 == lift2
    return (
        equal and b2.is_zero,
        equal and eb2.is_zero and not b2.is_zero,
        False,
        False,
        False,
        equal and not eb2.is_zero,
        not equal,
    )


def classify_projective(db: Database, f1: ProjectiveClass, f2: ProjectiveClass,
                        check_exclusive: bool = False) -> CoincidenceAnswer:
    """Classify a pair of classes in pi_m(KP(n')), m, n' >= 2.

    Returns the matching case with its exact (N#, MCC, MC) triple.  With
    check_exclusive=True all seven conditions are evaluated and exactly
    one must hold (a runtime check of the classification's
    mutual-exclusivity claim); otherwise the first match in table order
    is returned.
    """
    conditions = table_conditions(db, f1, f2)
    if check_exclusive and sum(conditions) != 1:
        fired = [i + 1 for i, c in enumerate(conditions) if c]
        raise ClassificationError(
            f"conditions {fired or 'none'} fired for "
            f"(K={f1.K}, m={f1.m}, n'={f1.nprime}, lifts "
            f"{f1.lift.coords}/{f2.lift.coords}); the seven cases must be "
            f"mutually exclusive and exhaustive")
    for index, holds in enumerate(conditions):
        if holds:
            case = index + 1
            break
    else:
        raise ClassificationError("no case condition fired; database data "
                                  "is inconsistent with the classification")
    nielsen, mcc, mc = _CASE_TRIPLES[case]
    notes = []
    if any(f.residue is not None and not f.residue.is_zero for f in (f1, f2)):
        notes.append("residue present, numbers unaffected")
    return CoincidenceAnswer(
        case_id=case,
        condition=CASE_CONDITIONS[case],
        nielsen=nielsen,
        mcc=mcc,
        mc=mc,
        omega_sharp_zero=case in (1, 2),
        loose=case == 1,
        loose_small=case == 1,
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# sphere targets

def classify_sphere_target(db: Database, m: int, n: int,
                           class1: GroupElement, class2: GroupElement,
                           antipodally_related: Optional[bool] = None
                           ) -> CoincidenceAnswer:
    """Coincidence numbers for a pair of classes in pi_m(S^n).

    The pair is loose exactly when class1 agrees with the antipodal
    image of class2; otherwise all three numbers equal the number of
    Reidemeister classes (1 for n >= 2, and the degree difference on the
    circle, where N#, MCC and MC coincide).
    """
    if m < 1 or n < 1:
        raise ClassificationError("m and n must be >= 1")
    group = db.require_group(SpaceId.sphere(n), m)
    for c in (class1, class2):
        if c.parent != group:
            raise ClassificationError(
                f"classes must live in pi_{m}(S({n})) = {group}")
    if antipodally_related is None:
        if group.is_trivial:
            related = True
        else:
            key = (SpaceId.sphere(n), m)
            antipodal = db.require_hom("antipodal_A", key, key)
            related = class1 == antipodal(class2)
    else:
        related = bool(antipodally_related)
    if related:
        return CoincidenceAnswer(
            case_id="sphere-loose",
            condition="f_1 ~ A∘f_2",
            nielsen=0, mcc=0, mc=0,
            omega_sharp_zero=True, loose=True, loose_small=None)
    if m == 1 and n == 1:
        count = abs(class1.coords[0] - class2.coords[0])
        return CoincidenceAnswer(
            case_id="circle",
            condition="f_1 !~ A∘f_2 on the circle: |deg f_1 - deg f_2| points",
            nielsen=count, mcc=count, mc=count,
            omega_sharp_zero=count == 0, loose=count == 0, loose_small=None)
    if n == 1:
        # pi_m(S^1) = 0 for m >= 2: every pair is antipodally related, so
        # an asserted 'not related' contradicts the inputs
        raise ClassificationError(
            "maps S^m -> S^1 with m >= 2 are nullhomotopic and always "
            "antipodally related")
    # m = 1 with n > 1 only carries trivial (hence related) classes, so
    # here m, n >= 2 and the Reidemeister set is a singleton
    return CoincidenceAnswer(
        case_id="sphere-essential",
        condition="f_1 !~ A∘f_2: one Reidemeister class, strongly essential",
        nielsen=1, mcc=1, mc=1,
        omega_sharp_zero=False, loose=False, loose_small=None)


# ---------------------------------------------------------------------------
# spherical space forms

def classify_space_form(query: SpaceFormQuery) -> CoincidenceAnswer:
    """Nielsen and MCC counts for maps into S^n/G.

    Odd n gives the full dichotomy 0 versus #G.  Even n forces #G = 2;
    a non-homotopic pair pins N# = MCC = #G by contradiction, while a
    homotopic pair stays indeterminate (carried in the notes).
    """
    g = query.group_order
    if query.n % 2 == 1:
        if query.homotopic:
            return CoincidenceAnswer(
                case_id="spaceform-loose",
                condition="odd n, f_1 ~ f_2",
                nielsen=0, mcc=0, mc=0,
                omega_sharp_zero=True, loose=True,
                notes=("MC = 0 forced: MCC = 0 means the pair is loose",))
        return CoincidenceAnswer(
            case_id="spaceform-full",
            condition="odd n, f_1 !~ f_2",
            nielsen=g, mcc=g, mc=None,
            omega_sharp_zero=False, loose=False,
            notes=("MC not determined in this setting",))
    if not query.homotopic:
        return CoincidenceAnswer(
            case_id="spaceform-even-full",
            condition="even n, f_1 !~ f_2",
            nielsen=g, mcc=g, mc=None,
            omega_sharp_zero=False, loose=False,
            notes=(
                f"N# in {{0,...,{g}}}; N# != {g} would force f_1 ~ f_2, "
                f"contradicting homotopic=false; hence N# = {g}",
                f"MCC = {g}: N# <= MCC <= #pi_0(E) = #G = {g}",
            ))
    return CoincidenceAnswer(
        case_id="spaceform-even-indeterminate",
        condition="even n, f_1 ~ f_2",
        nielsen=None, mcc=None, mc=None,
        omega_sharp_zero=None, loose=None,
        notes=(
            "indeterminate: for a homotopic pair on an even space form "
            "N# and MCC lie in {0, 1} but are not fixed by the inputs",
        ))


# ---------------------------------------------------------------------------
# covering-space Nielsen counts and Reidemeister cardinalities

def nielsen_via_liftings(vanishing: Mapping[Any, bool]) -> int:
    """Count deck transformations whose lifted pair has nonvanishing
    obstruction; the caller asserts the covering-space hypotheses
    (transitive deck action and the path-component condition)."""
    if not vanishing:
        raise ClassificationError("empty deck transformation set")
    return sum(1 for vanishes in vanishing.values() if not vanishes)


def reidemeister_count(K: str, m: int) -> int:
    """Number of Reidemeister classes for maps S^m -> KP(n'), m >= 2."""
    if K not in _FIELD_DIMS:
        raise ClassificationError(f"K must be R, C or H, got {K!r}")
    if m < 2:
        raise ClassificationError("Reidemeister count needs m >= 2")
    return 2 if K == "R" else 1


def reidemeister_count_covering(deck_order: int) -> int:
    """General covering form: the deck group order, under the
    transitivity and path-component hypotheses."""
    if not isinstance(deck_order, int) or deck_order < 1:
        raise ClassificationError("deck group order must be a positive integer")
    return deck_order
