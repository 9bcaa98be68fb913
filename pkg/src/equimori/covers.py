"""Branched-cover arithmetic: ramified quotients, genus bounds, and the
Euler-characteristic case analysis for antisymplectic double covers.

The core identity is the ramified-cover Euler-characteristic count

    2 - 2 g(X) = |G| * ( (2 - 2 g(Y)) - sum_b (1 - 1/n(b)) ),

evaluated exactly over the rationals.  On top of it sit the order bound
84(g - 1) for g >= 2, the plane-curve genus formula (d-1)(d-2)/2, and the
case solver for a K3 double cover of a rational surface Y carrying a
dihedral action of order 16: given the Euler number of the minimal model and
the admissible counts of contracted fibers, it enumerates every branch shape
consistent with e(K3) = 24 and the combinatorial side constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

__all__ = [
    "BranchProfile",
    "HurwitzResult",
    "riemann_hurwitz",
    "hurwitz_bound",
    "genus_degree",
    "platonic_catalog",
    "platonic_order",
    "K3Case",
    "k3_euler_solve",
    "BranchVerdict",
    "branch_type_check",
    "check_fiber_incidences",
]

K3_EULER_NUMBER = 24
MAX_BRANCH_COMPONENTS = 10
# self-intersection of a rational branch curve on the quotient surface: its
# preimage upstairs is a (-2)-curve and the covering is 2:1
RATIONAL_BRANCH_SELF_INT = -4


@dataclass(frozen=True)
class BranchProfile:
    """A quotient covering datum: group order, base genus, branch orders n(b).

    Each n(b) is the order of the (cyclic) stabilizer over that branch point,
    so it must divide the group order and be at least 2.
    """

    group_order: int
    base_genus: int
    branch_orders: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.group_order < 1:
            raise ValueError("group order must be positive")
        if self.base_genus < 0:
            raise ValueError("base genus must be non-negative")
        object.__setattr__(self, "branch_orders", tuple(int(n) for n in self.branch_orders))
        for n in self.branch_orders:
            if n < 2:
                raise ValueError(f"branch order {n} < 2")
            if self.group_order % n != 0:
                raise ValueError(f"branch order {n} does not divide |G| = {self.group_order}")


@dataclass(frozen=True)
class HurwitzResult:
    chi: Fraction
    genus: Fraction
    feasible: bool
    reason: str = ""


def riemann_hurwitz(profile: BranchProfile) -> HurwitzResult:
    """Exact Euler characteristic of the cover, flagged when it is not the
    Euler characteristic of any closed surface (non-integral or genus < 0)."""
    ramification = sum(
        Fraction(1) - Fraction(1, n) for n in profile.branch_orders
    )
    chi = profile.group_order * (Fraction(2 - 2 * profile.base_genus) - ramification)
    genus = (2 - chi) / 2
    if chi.denominator != 1:
        return HurwitzResult(chi, genus, False, "Euler characteristic is not an integer")
    if genus.denominator != 1 or genus < 0:
        return HurwitzResult(chi, genus, False, "genus is not a non-negative integer")
    return HurwitzResult(chi, genus, True)


def hurwitz_bound(genus: int) -> int:
    """The automorphism-order bound 84(g - 1), defined for genus >= 2."""
    if genus < 2:
        raise ValueError("the bound applies to genus >= 2")
    return 84 * (genus - 1)


def genus_degree(degree: int) -> int:
    """Genus (d-1)(d-2)/2 of a smooth plane curve of degree d."""
    if degree < 1:
        raise ValueError("degree must be positive")
    return (degree - 1) * (degree - 2) // 2


_PLATONIC_FIXED = (
    ("tetrahedral", 12),
    ("octahedral", 24),
    ("icosahedral", 60),
)


def platonic_catalog() -> List[Tuple[str, object]]:
    """Finite rotation groups of the sphere: the cyclic and dihedral families
    (parameterized) and the three polyhedral groups with their orders."""
    return [("cyclic(n)", "n"), ("dihedral(n)", "2n")] + [
        (name, order) for name, order in _PLATONIC_FIXED
    ]


def platonic_order(name: str, n: Optional[int] = None) -> int:
    if name == "cyclic":
        if n is None or n < 1:
            raise ValueError("cyclic requires n >= 1")
        return n
    if name == "dihedral":
        if n is None or n < 2:
            raise ValueError("dihedral requires n >= 2")
        return 2 * n
    for fixed, order in _PLATONIC_FIXED:
        if name == fixed:
            return order
    raise ValueError(f"unknown rotation group {name!r}")


# ---------------------------------------------------------------------------
# the K3 double-cover case solver


@dataclass(frozen=True)
class K3Case:
    """One consistent branch shape for the double cover.

    ``m``: contracted fibers in the reduction to the minimal model;
    ``n``: rational branch curves; ``genus_curve``: genus of the one
    non-rational branch component, if present (1 means an elliptic curve);
    ``elliptic_pair``: branch is two disjoint elliptic curves instead.
    """

    m: int
    n: int
    e_y: int
    genus_curve: Optional[int] = None
    elliptic_pair: bool = False

    @property
    def delta(self) -> int:
        return self.m - self.n

    @property
    def components(self) -> int:
        if self.elliptic_pair:
            return self.n + 2
        return self.n + (1 if self.genus_curve is not None else 0)

    @property
    def branch_label(self) -> str:
        if self.elliptic_pair:
            return "two elliptic curves"
        if self.genus_curve is None:
            return f"{self.n} rational curves"
        kind = "elliptic curve" if self.genus_curve == 1 else f"genus {self.genus_curve} curve"
        if self.n:
            return f"{self.n} rational curves + {kind}"
        return kind

    def validate(self) -> None:
        """Re-check every invariant independently of the solver."""
        if self.delta < 0 or self.delta % 4 != 0:
            raise ValueError("delta = m - n must be a non-negative multiple of 4")
        if self.m > self.n + 9:
            raise ValueError("m <= n + 9 violated")
        if self.n % 4 != 0:
            raise ValueError("rational branch count must be a multiple of 4")
        if self.components > MAX_BRANCH_COMPONENTS:
            raise ValueError("more than ten branch components")
        if self.genus_curve is not None and self.genus_curve < 1:
            raise ValueError("non-rational branch component needs genus >= 1")
        e_branch = 2 * self.n
        if self.genus_curve is not None:
            e_branch += 2 - 2 * self.genus_curve
        if 2 * self.e_y - e_branch != K3_EULER_NUMBER:
            raise ValueError("Euler characteristic bookkeeping fails")


def _ruled_minimal_bookkeeping(m: int, n: int, genus: Optional[int]) -> bool:
    """Extra combinatorial constraints valid when the minimal model is the
    quadric (Euler number 4).

    Rational branch curves have self-intersection -4 and map to ruling
    fibers, so each absorbs four transversal fiber hits and the factor swap
    splits them evenly between the rulings (n <= 8).  A non-rational
    component then occupies an invariant curve of bidegree (s, s) with
    s = 4 - n/2; its image acquires one double point per contracted fiber
    meeting it twice, so its genus is (s-1)^2 - d.  Every contracted fiber
    meets the branch locus in at most two points, which caps the total
    incidence budget at 2m.
    """
    if n % 2 != 0 or n > 8:
        return False
    s = 4 - n // 2
    if genus is None:
        return 4 * n <= 2 * m
    if s < 1:
        return False
    d = (s - 1) ** 2 - genus
    if d < 0:
        return False
    return 4 * n + 2 * d <= 2 * m


def k3_euler_solve(
    e_ymin: int,
    m_allowed: Iterable[int],
    hsigma_acts_freely: bool = True,
) -> List[K3Case]:
    """Enumerate branch shapes with e(K3) = 24 over the admissible fiber counts.

    For every m the quotient has e(Y) = e(Ymin) + m.  Shapes considered: n
    rational curves alone, n rational curves plus one curve of genus g >= 1
    (g is solved for, never supplied; parity of its Euler number must allow
    the free order-4 action on it, forcing g odd), and, only when
    ``hsigma_acts_freely`` is False, a pair of disjoint elliptic curves.
    The branch locus is never empty here (the involution has fixed points).
    """
    if not 3 <= e_ymin <= 11:
        raise ValueError("minimal-model Euler number must be between 3 and 11")
    out: List[K3Case] = []
    for m in sorted(set(int(v) for v in m_allowed)):
        if m < 0:
            raise ValueError("fiber counts must be non-negative")
        e_y = e_ymin + m
        for n in range(0, MAX_BRANCH_COMPONENTS + 1, 4):
            # rational components only
            if n >= 1 and 2 * e_y - 2 * n == K3_EULER_NUMBER:
                case = K3Case(m=m, n=n, e_y=e_y)
                if _admissible(case, e_ymin):
                    out.append(case)
            # rational components plus one solved-for genus curve
            g = 13 - e_y + n
            if g >= 1 and (2 - 2 * g) % 4 == 0:
                case = K3Case(m=m, n=n, e_y=e_y, genus_curve=g)
                if _admissible(case, e_ymin):
                    out.append(case)
            # two disjoint elliptic curves (e contribution zero)
            if n == 0 and not hsigma_acts_freely and 2 * e_y == K3_EULER_NUMBER:
                case = K3Case(m=m, n=0, e_y=e_y, elliptic_pair=True)
                if _admissible(case, e_ymin):
                    out.append(case)
    out.sort(key=lambda c: (c.m, c.n, c.genus_curve is not None, c.elliptic_pair))
    return out


def _admissible(case: K3Case, e_ymin: int) -> bool:
    try:
        case.validate()
    except ValueError:
        return False
    if case.components == 0:
        return False
    if e_ymin == 4 and not case.elliptic_pair:
        if not _ruled_minimal_bookkeeping(case.m, case.n, case.genus_curve):
            return False
    return True


# ---------------------------------------------------------------------------
# branch-shape classification and fiber incidence rules


@dataclass(frozen=True)
class BranchVerdict:
    valid: bool
    reason: str


def branch_type_check(component_genera: Sequence[int]) -> BranchVerdict:
    """Classify a branch-component multiset against the allowed shapes.

    Allowed: empty; exactly two elliptic curves and nothing else; rational
    curves only; rational curves plus exactly one component of genus >= 1.
    At most ten components in total.
    """
    genera = sorted(int(g) for g in component_genera)
    if any(g < 0 for g in genera):
        raise ValueError("component genus must be non-negative")
    if len(genera) > MAX_BRANCH_COMPONENTS:
        return BranchVerdict(False, f"{len(genera)} components exceed the bound of ten")
    if not genera:
        return BranchVerdict(True, "empty branch locus (Enriques quotient case)")
    positive = [g for g in genera if g >= 1]
    rational = len(genera) - len(positive)
    if positive == [1, 1] and rational == 0:
        return BranchVerdict(True, "two disjoint elliptic curves")
    if not positive:
        return BranchVerdict(True, f"{rational} rational curves")
    if len(positive) == 1:
        kind = "an elliptic curve" if positive[0] == 1 else f"a genus {positive[0]} curve"
        if rational:
            return BranchVerdict(True, f"{rational} rational curves and {kind}")
        return BranchVerdict(True, kind)
    return BranchVerdict(
        False, "more than one non-rational component (and not the elliptic pair)"
    )


def check_fiber_incidences(
    incidences: Sequence[Sequence[Tuple[int, int]]],
) -> BranchVerdict:
    """Validate contracted-fiber/branch incidence data.

    Each entry lists (branch point id, local multiplicity) for one fiber.  A
    fiber meets the branch locus in at most two points counted with
    multiplicity, and a tangential contact (multiplicity 2) must be the only
    contact point.
    """
    for idx, contacts in enumerate(incidences):
        total = sum(mult for _, mult in contacts)
        if any(mult < 1 for _, mult in contacts):
            raise ValueError("contact multiplicities must be positive")
        if total > 2:
            return BranchVerdict(
                False, f"fiber {idx} meets the branch locus in {total} > 2 points"
            )
        if any(mult == 2 for _, mult in contacts) and len(contacts) != 1:
            return BranchVerdict(
                False,
                f"fiber {idx} has a multiplicity-2 contact but more than one contact point",
            )
    return BranchVerdict(True, "incidence data consistent")
