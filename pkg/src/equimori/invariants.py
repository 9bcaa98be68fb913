"""The dihedral-invariant (4,4)-curve analysis on P^1 x P^1.

A dihedral group of order 16 acts by the substitutions

    c:   ([z0:z1],[w0:w1]) -> ([i z0 : z1], [-i w0 : w1])
    tau: ([z0:z1],[w0:w1]) -> ([z1 : z0], [i w1 : w0])
    g:   swap the two factors,

with the order-8 cyclic part generated by the composite of g and tau and the
commutator subgroup generated by c.  A curve of bidegree (4,4) invariant
under the full group is cut out by an eigenvector of the induced action on
the 25-dimensional space of (4,4)-forms; since the commutator acts trivially
on such an eigenvector, everything happens inside the 7-dimensional span of
the c-invariant monomials z0^a z1^(4-a) w0^b w1^(4-b), a = b (mod 4).

That span splits under (tau, g) into three character families of dimensions
3, 3, 1.  Canonical bases are fixed by Gaussian elimination in descending
lexicographic monomial order with leading coefficients normalized to 1; the
fully invariant family is named (f1, f2, f3) and the other two (g1, g3, g4)
and (g2).  All downstream computations (the one-parameter singular family
through the diagonal points ([1:x],[1:x]), its Hessian node/cusp
classification, the degree-24 cusp-locus polynomial and the reducibility
locus) are pinned to these bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .cyclo import BiForm, CycNumber, CycPoly, PointPP, RatFunc, cyc_matrix_det
from .errors import InternalConsistencyError

__all__ = [
    "Substitution",
    "HAction",
    "InvariantFamily",
    "SingularSolve",
    "FS5Verdict",
    "build_h_action",
    "invariant_monomials",
    "eigen_families",
    "family_curve",
    "singular_solve_at",
    "cusp_locus_poly",
    "reducibility_locus",
    "cusp_locus_factors",
    "fs5_singularity_check",
    "fiber_factors",
]

BIDEG = (4, 4)
# all 25 monomial exponent pairs (a, b), descending lexicographic
_ALL_MONOS: Tuple[Tuple[int, int], ...] = tuple(
    sorted(((a, b) for a in range(5) for b in range(5)), key=lambda t: (-t[0], -t[1]))
)


def _mono(a: int, b: int) -> BiForm:
    return BiForm.monomial(BIDEG, a, b)


@dataclass(frozen=True)
class Substitution:
    """A coordinate substitution given by the images of z0, z1, w0, w1.

    Each image is a linear form (bidegree (1,0) or (0,1)); acting on a form
    means substituting the images for the variables.
    """

    name: str
    images: Tuple[BiForm, BiForm, BiForm, BiForm]

    def act(self, f: BiForm) -> BiForm:
        p, q = f.bidegree
        z0, z1, w0, w1 = self.images
        out: Optional[BiForm] = None
        for (a, b), coeff in f.coeffs.items():
            term = (z0 ** a) * (z1 ** (p - a)) * (w0 ** b) * (w1 ** (q - b)) * coeff
            out = term if out is None else out + term
        if out is None:
            return BiForm.zero(f.bidegree)
        return out


def _linear(bidegree, c0, c1) -> BiForm:
    coeffs = {}
    if not CycNumber.coerce(c0).is_zero():
        coeffs[(1, 0) if bidegree == (1, 0) else (0, 1)] = CycNumber.coerce(c0)
    if not CycNumber.coerce(c1).is_zero():
        coeffs[(0, 0)] = CycNumber.coerce(c1)
    return BiForm(bidegree, coeffs)


def _generator_c() -> Substitution:
    i = CycNumber.i()
    return Substitution(
        "c",
        (
            _linear((1, 0), i, 0),  # z0 -> i z0
            _linear((1, 0), 0, 1),  # z1 -> z1
            _linear((0, 1), -i, 0),  # w0 -> -i w0
            _linear((0, 1), 0, 1),  # w1 -> w1
        ),
    )


def _generator_tau() -> Substitution:
    i = CycNumber.i()
    return Substitution(
        "tau",
        (
            _linear((1, 0), 0, 1),  # z0 -> z1
            _linear((1, 0), 1, 0),  # z1 -> z0
            _linear((0, 1), 0, 1) * i,  # w0 -> i w1
            _linear((0, 1), 1, 0),  # w1 -> w0
        ),
    )


def _generator_g() -> Substitution:
    return Substitution(
        "g",
        (
            _linear((0, 1), 1, 0),  # z0 -> w0
            _linear((0, 1), 0, 1),  # z1 -> w1
            _linear((1, 0), 1, 0),  # w0 -> z0
            _linear((1, 0), 0, 1),  # w1 -> z1
        ),
    )


# a linear map on (4,4)-forms, recorded by the images of all 25 monomials
FormMap = Tuple[BiForm, ...]

_MONO_INDEX = {ab: k for k, ab in enumerate(_ALL_MONOS)}


def _map_of(sub: Substitution) -> FormMap:
    return tuple(sub.act(_mono(a, b)) for a, b in _ALL_MONOS)


def _apply_map(fm: FormMap, f: BiForm) -> BiForm:
    out = BiForm.zero(BIDEG)
    for ab, coeff in f.coeffs.items():
        out = out + fm[_MONO_INDEX[ab]].scale(coeff)
    return out


def _compose(outer: FormMap, inner: FormMap) -> FormMap:
    return tuple(_apply_map(outer, img) for img in inner)


def _map_order(fm: FormMap, identity: FormMap, cap: int = 64) -> int:
    cur = fm
    for k in range(1, cap + 1):
        if cur == identity:
            return k
        cur = _compose(fm, cur)
    raise InternalConsistencyError("form-map order exceeds cap")


@dataclass(frozen=True)
class HAction:
    """The three generating substitutions and the induced group on (4,4)-forms."""

    c: Substitution
    tau: Substitution
    g: Substitution
    form_group_order: int

    def act(self, name: str, f: BiForm) -> BiForm:
        return {"c": self.c, "tau": self.tau, "g": self.g}[name].act(f)


@lru_cache(maxsize=1)
def build_h_action() -> HAction:
    """Construct the generators and verify the dihedral relations on forms.

    Verified facts: the induced group on the 25-dimensional (4,4)-space has
    order 16; the composite of g and tau induces a map of order 8; tau
    squares to the identity on (4,4)-forms; c has order 4 and acts trivially
    composed four times.  Any failure means the hard-coded data is wrong.
    """
    c, tau, g = _generator_c(), _generator_tau(), _generator_g()
    mc, mtau, mg = _map_of(c), _map_of(tau), _map_of(g)
    identity = tuple(_mono(a, b) for a, b in _ALL_MONOS)

    if _map_order(mc, identity) != 4:
        raise InternalConsistencyError("c does not have order 4 on (4,4)-forms")
    if _map_order(mtau, identity) != 2:
        raise InternalConsistencyError("tau is not an involution on (4,4)-forms")
    tg = _compose(mtau, mg)
    if _map_order(tg, identity) != 8:
        raise InternalConsistencyError("tau*g does not have order 8 on (4,4)-forms")

    elements = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for cur in frontier:
            for gen in (mc, mtau, mg):
                new = _compose(gen, cur)
                if new not in elements:
                    elements.add(new)
                    nxt.append(new)
        frontier = nxt
        if len(elements) > 16:
            raise InternalConsistencyError("induced form group exceeds order 16")
    if len(elements) != 16:
        raise InternalConsistencyError(
            f"induced form group has order {len(elements)}, expected 16"
        )
    return HAction(c=c, tau=tau, g=g, form_group_order=len(elements))


@lru_cache(maxsize=1)
def invariant_monomials() -> Tuple[Tuple[int, int], ...]:
    """Exponent pairs of the c-invariant (4,4)-monomials, descending lex.

    Derived by applying c to all 25 monomials rather than trusting the
    character rule a = b (mod 4); the two must agree.
    """
    action = build_h_action()
    fixed = []
    for a, b in _ALL_MONOS:
        if action.c.act(_mono(a, b)) == _mono(a, b):
            fixed.append((a, b))
    rule = [(a, b) for a, b in _ALL_MONOS if (a - b) % 4 == 0]
    if fixed != rule:
        raise InternalConsistencyError("c-invariant monomials disagree with the character rule")
    return tuple(fixed)


@dataclass(frozen=True)
class InvariantFamily:
    label: str  # "C_a" | "C_b" | "C_0"
    names: Tuple[str, ...]
    basis: Tuple[BiForm, ...]
    character: Tuple[Tuple[str, int], ...]  # (("tau", +/-1), ("g", +/-1))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def member(self, coefficients: Sequence[CycNumber]) -> BiForm:
        if len(coefficients) != len(self.basis):
            raise ValueError("coefficient count does not match family dimension")
        out = BiForm.zero(BIDEG)
        for c, f in zip(coefficients, self.basis):
            out = out + f.scale(CycNumber.coerce(c))
        return out


def _rref_rows(rows: List[List[CycNumber]]) -> List[List[CycNumber]]:
    mat = [row[:] for row in rows]
    r = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if not mat[i][c].is_zero()), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][c].inverse()
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][c].is_zero():
                f = mat[i][c]
                mat[i] = [v - f * w for v, w in zip(mat[i], mat[r])]
        r += 1
    return [row for row in mat if any(not v.is_zero() for v in row)]


@lru_cache(maxsize=1)
def eigen_families() -> Tuple[InvariantFamily, InvariantFamily, InvariantFamily]:
    """Split the 7-dimensional c-invariant span into its character families.

    The involutions induced by tau and g commute there; the sign pairs
    (+,+), (-,+), (-,-) carry dimensions 3, 3, 1 and the pair (+,-) is
    empty.  The fully invariant family is C_a; the family with tau-sign -1
    and g-sign +1 is C_b; the remaining line is C_0.
    """
    action = build_h_action()
    monos = invariant_monomials()
    dim = len(monos)
    index = {ab: k for k, ab in enumerate(monos)}

    def restricted_matrix(sub: Substitution) -> List[List[CycNumber]]:
        cols = []
        for ab in monos:
            img = sub.act(_mono(*ab))
            col = [CycNumber.zero()] * dim
            for key, coeff in img.coeffs.items():
                if key not in index:
                    raise InternalConsistencyError(
                        "induced action leaves the c-invariant span"
                    )
                col[index[key]] = coeff
            cols.append(col)
        return [[cols[j][i] for j in range(dim)] for i in range(dim)]

    t_mat = restricted_matrix(action.tau)
    g_mat = restricted_matrix(action.g)

    def project(signs: Tuple[int, int]) -> List[List[CycNumber]]:
        st, sg = signs
        vectors = []
        for k in range(dim):
            v = [CycNumber.one() if j == k else CycNumber.zero() for j in range(dim)]
            v1 = _mat_vec_cyc(t_mat, v)
            v = [a + (b * st) for a, b in zip(v, v1)]
            v2 = _mat_vec_cyc(g_mat, v)
            v = [(a + (b * sg)) * Fraction(1, 4) for a, b in zip(v, v2)]
            if any(not x.is_zero() for x in v):
                vectors.append(v)
        return _rref_rows(vectors) if vectors else []

    spans = {signs: project(signs) for signs in ((1, 1), (-1, 1), (1, -1), (-1, -1))}
    dims = {s: len(v) for s, v in spans.items()}
    if dims != {(1, 1): 3, (-1, 1): 3, (1, -1): 0, (-1, -1): 1}:
        raise InternalConsistencyError(f"unexpected eigenfamily dimensions {dims}")

    def to_forms(rows: List[List[CycNumber]]) -> Tuple[BiForm, ...]:
        forms = []
        for row in rows:
            f = BiForm.zero(BIDEG)
            for coeff, ab in zip(row, monos):
                if not coeff.is_zero():
                    f = f + _mono(*ab).scale(coeff)
            forms.append(f)
        return tuple(forms)

    fam_a = InvariantFamily(
        label="C_a",
        names=("f1", "f2", "f3"),
        basis=to_forms(spans[(1, 1)]),
        character=(("tau", 1), ("g", 1)),
    )
    fam_b = InvariantFamily(
        label="C_b",
        names=("g1", "g3", "g4"),
        basis=to_forms(spans[(-1, 1)]),
        character=(("tau", -1), ("g", 1)),
    )
    fam_0 = InvariantFamily(
        label="C_0",
        names=("g2",),
        basis=to_forms(spans[(-1, -1)]),
        character=(("tau", -1), ("g", -1)),
    )
    return fam_a, fam_b, fam_0


def _mat_vec_cyc(m: List[List[CycNumber]], v: List[CycNumber]) -> List[CycNumber]:
    n = len(v)
    out = []
    for i in range(n):
        acc = CycNumber.zero()
        for j in range(n):
            if not m[i][j].is_zero() and not v[j].is_zero():
                acc = acc + m[i][j] * v[j]
        out.append(acc)
    return out


def family_curve(a1, a2, a3=1) -> BiForm:
    """The member a1*f1 + a2*f2 + a3*f3 of the fully invariant family."""
    fam_a = eigen_families()[0]
    return fam_a.member([CycNumber.coerce(a1), CycNumber.coerce(a2), CycNumber.coerce(a3)])


# ---------------------------------------------------------------------------
# the singular one-parameter family through the diagonal fixed points


@dataclass(frozen=True)
class SingularSolve:
    """Result of forcing a singularity at the diagonal point ([1:x],[1:x])."""

    x: CycNumber
    coefficients: Optional[Tuple[CycNumber, CycNumber, CycNumber]]  # (a1, a2, 1)
    hessian: Optional[Tuple[CycNumber, CycNumber, CycNumber]]  # (h_zz, h_zw, h_ww)
    hessian_rank: Optional[int]
    kind: str  # "node" | "cusp" | "smooth"


def _partial_values_at_diagonal(point) -> List[List]:
    """Values of the four partials of f1, f2, f3 at the given diagonal point.

    Returns rows [v1, v2, v3] per partial; ring-generic (CycNumber or
    CycPoly coordinates).
    """
    fam_a = eigen_families()[0]
    partials = [f.partials() for f in fam_a.basis]
    rows = []
    for k in range(4):
        rows.append([partials[j][k].evaluate(point) for j in range(3)])
    return rows


def singular_solve_at(x: CycNumber) -> SingularSolve:
    """Choose (a1, a2) with a3 = 1 making the member singular at ([1:x],[1:x]).

    The linear system asks all four partials to vanish at the point; it is
    solvable exactly when x^8 != 1 (x = 0 is rejected).  When solvable, the
    affine-chart Hessian at the point classifies the singularity: rank 2 is a
    node, rank 1 a cusp.
    """
    x = CycNumber.coerce(x)
    if x.is_zero():
        raise ValueError("x = 0 is outside the family's parameter domain")
    one = CycNumber.one()
    point = (one, x, one, x)
    rows = _partial_values_at_diagonal(point)
    solution = _solve_two_unknowns(rows)
    if solution is None:
        return SingularSolve(x=x, coefficients=None, hessian=None, hessian_rank=None, kind="smooth")
    a1, a2 = solution
    coeffs = (a1, a2, one)
    curve = family_curve(a1, a2)
    if not curve.evaluate(PointPP.diagonal(x)).is_zero():
        raise InternalConsistencyError("solved member does not pass through the point")
    # affine chart z0 = w0 = 1; the chart coordinates are z1 and w1
    h_zz = curve.second_partial(1, 1).evaluate(point)
    h_zw = curve.second_partial(1, 3).evaluate(point)
    h_ww = curve.second_partial(3, 3).evaluate(point)
    det = h_zz * h_ww - h_zw * h_zw
    if not det.is_zero():
        rank = 2
    elif not (h_zz.is_zero() and h_zw.is_zero() and h_ww.is_zero()):
        rank = 1
    else:
        rank = 0
    if rank == 0:
        raise InternalConsistencyError("totally degenerate Hessian in the singular family")
    return SingularSolve(
        x=x,
        coefficients=coeffs,
        hessian=(h_zz, h_zw, h_ww),
        hessian_rank=rank,
        kind="node" if rank == 2 else "cusp",
    )


def _solve_two_unknowns(rows):
    """Solve a1*v1 + a2*v2 + v3 = 0 over the field; None when inconsistent."""
    aug = [[r[0], r[1], -r[2]] for r in rows]
    pivots = []
    r = 0
    for c in range(2):
        piv = next((i for i in range(r, len(aug)) if not aug[i][c].is_zero()), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][c].inverse()
        aug[r] = [v * inv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(aug)):
        if not aug[i][2].is_zero():
            return None  # inconsistent
    if len(pivots) != 2:
        raise InternalConsistencyError("singular system is underdetermined")
    return aug[0][2], aug[1][2]


# ---------------------------------------------------------------------------
# symbolic elimination in the parameter x


@lru_cache(maxsize=1)
def _symbolic_family() -> Tuple[RatFunc, RatFunc]:
    """The coefficients (a1(x), a2(x)) as exact rational functions."""
    x = CycPoly.x()
    one = CycPoly.one()
    rows = _partial_values_at_diagonal((one, x, one, x))
    # Cramer on the first two equations; the last two repeat them at the
    # diagonal point, which is re-verified below.
    r1, r2 = rows[0], rows[1]
    det = RatFunc(r1[0] * r2[1] - r2[0] * r1[1])
    if det.is_zero():
        raise InternalConsistencyError("singular system degenerates identically")
    a1 = RatFunc((-r1[2]) * r2[1] - (-r2[2]) * r1[1]) / det
    a2 = RatFunc(r1[0] * (-r2[2]) - r2[0] * (-r1[2])) / det
    for row in rows:
        check = a1 * RatFunc(row[0]) + a2 * RatFunc(row[1]) + RatFunc(row[2])
        if not check.is_zero():
            raise InternalConsistencyError("redundant singular equations fail symbolically")
    return a1, a2


@lru_cache(maxsize=1)
def _hessian_det_symbolic() -> RatFunc:
    a1, a2 = _symbolic_family()
    fam_a = eigen_families()[0]
    x = CycPoly.x()
    one = CycPoly.one()
    point = (one, x, one, x)
    entries = {}
    for key, (v1, v2) in {"zz": (1, 1), "zw": (1, 3), "ww": (3, 3)}.items():
        vals = [f.second_partial(v1, v2).evaluate(point) for f in fam_a.basis]
        entries[key] = a1 * RatFunc(vals[0]) + a2 * RatFunc(vals[1]) + RatFunc(vals[2])
    return entries["zz"] * entries["ww"] - entries["zw"] * entries["zw"]


def _strip_parameter_degeneracies(p: CycPoly) -> CycPoly:
    """Remove factors supported on the degenerate parameters x = 0, x^8 = 1."""
    x = CycPoly.x()
    wheel = CycPoly([CycNumber.rational(-1)] + [CycNumber.zero()] * 7 + [CycNumber.one()])
    for factor in (x, wheel):
        while True:
            q, r = p.divmod(factor)
            if r.is_zero() and not q.is_zero():
                p = q
            else:
                break
    return p


@lru_cache(maxsize=1)
def cusp_locus_poly() -> CycPoly:
    """The polynomial q(x) that vanishes exactly where the Hessian rank drops to 1.

    Computed by eliminating (a1, a2) symbolically and taking the numerator of
    the Hessian determinant along the family, cleaned of the degenerate
    parameters and normalized to a content-free integral form.  Its degree is
    24; its coefficients land in the Gaussian subfield Q(i).
    """
    det = _hessian_det_symbolic()
    num = _strip_parameter_degeneracies(det.num)
    return num.canonical_integral()


def hessian_entry_numerator(which: str = "zz") -> CycPoly:
    """Numerator of one Hessian entry along the family (for rank-1 checks)."""
    a1, a2 = _symbolic_family()
    fam_a = eigen_families()[0]
    x = CycPoly.x()
    one = CycPoly.one()
    point = (one, x, one, x)
    v1, v2 = {"zz": (1, 1), "zw": (1, 3), "ww": (3, 3)}[which]
    vals = [f.second_partial(v1, v2).evaluate(point) for f in fam_a.basis]
    entry = a1 * RatFunc(vals[0]) + a2 * RatFunc(vals[1]) + RatFunc(vals[2])
    return entry.num.canonical_integral()


# -- reducibility ------------------------------------------------------------


@lru_cache(maxsize=1)
def _cleared_family() -> Dict[Tuple[int, int], CycPoly]:
    """The family with denominators cleared: a polynomial (4,4)-form in x.

    Multiplying by the common denominator does not change divisibility away
    from the degenerate parameters, where the cleared form vanishes
    identically; those parameters therefore join the locus by convention.
    """
    a1, a2 = _symbolic_family()
    fam_a = eigen_families()[0]
    den_lcm = a1.den * a2.den.exact_div(a1.den.gcd(a2.den))
    cleared = [
        (a1 * RatFunc(den_lcm)),
        (a2 * RatFunc(den_lcm)),
        RatFunc(den_lcm),
    ]
    coeffs_poly: Dict[Tuple[int, int], CycPoly] = {}
    for rf, form in zip(cleared, fam_a.basis):
        if rf.den != CycPoly.one():
            raise InternalConsistencyError("clearing denominators failed")
        poly = rf.num
        for ab, c in form.coeffs.items():
            coeffs_poly[ab] = coeffs_poly.get(ab, CycPoly.zero()) + poly * c
    return coeffs_poly


def _poly_matrix_det(rows: List[List[CycPoly]]) -> CycPoly:
    """Determinant of a CycPoly matrix by evaluation and Newton interpolation.

    Nodes are small symmetric integers (0, 1, -1, 2, ...) to keep the
    evaluated values small; the Newton form keeps reconstruction at O(n^2)
    coefficient operations without large intermediate polynomials.
    """
    n = len(rows)
    bound = sum(max((e.degree() for e in row if not e.is_zero()), default=0) for row in rows)
    nodes: List[CycNumber] = []
    while len(nodes) < bound + 1:
        # 0, 1, -1, 2, -2, ...
        idx = len(nodes)
        val = (idx + 1) // 2 if idx % 2 else -(idx // 2)
        nodes.append(CycNumber.rational(val))
    values = []
    for pt in nodes:
        mat = [[e.evaluate(pt) for e in row] for row in rows]
        values.append(cyc_matrix_det(mat))
    # Newton divided differences
    coeffs = list(values)
    for level in range(1, len(nodes)):
        for j in range(len(nodes) - 1, level - 1, -1):
            denom = nodes[j] - nodes[j - level]
            coeffs[j] = (coeffs[j] - coeffs[j - 1]) * denom.inverse()
    result = CycPoly.constant(coeffs[-1])
    for j in range(len(nodes) - 2, -1, -1):
        result = result * CycPoly([-nodes[j], CycNumber.one()]) + CycPoly.constant(coeffs[j])
    return result


def _formal_resultant(a: List[CycPoly], b: List[CycPoly]) -> CycPoly:
    """Resultant of two binary quartics given by coefficient lists (p0^4 .. p1^4),
    treated at formal degree 4 so common zeros at the boundary count too."""
    da = db = 4
    zero = CycPoly.zero()
    rows = []
    for sh in range(db):
        rows.append([zero] * sh + list(a) + [zero] * (db - 1 - sh))
    for sh in range(da):
        rows.append([zero] * sh + list(b) + [zero] * (da - 1 - sh))
    return _poly_matrix_det(rows)


def _eliminate(quartics: List[List[CycPoly]]) -> CycPoly:
    """Monic gcd of the pairwise formal resultants of a quartic system.

    Vanishes wherever the system has a common projective root (p0 : p1).
    """
    live = [q for q in quartics if any(not c.is_zero() for c in q)]
    if len(live) < 2:
        return CycPoly.zero()
    gcd: Optional[CycPoly] = None
    for i in range(len(live)):
        for j in range(i + 1, len(live)):
            res = _formal_resultant(live[i], live[j])
            gcd = res if gcd is None else gcd.gcd(res)
            if gcd is not None and gcd.degree() == 0:
                return CycPoly.one()
    return gcd.monic()


def _shape_quartics(kind: str) -> List[List[CycPoly]]:
    """Coefficient system for one candidate-factor shape.

    Substituting the parameterized zero locus of the candidate factor into
    the cleared family gives a binary octic (or quartic) in the surviving
    coordinates; divisibility means every coefficient vanishes, and each
    coefficient is a binary quartic in the factor parameters (p0 : p1).

    Shapes: "diag" is p0*z0*w0 + p1*z1*w1 (zero locus w = (-p1 z1 : p0 z0)),
    "anti" is p0*z0*w1 + p1*z1*w0, and "fiber-z"/"fiber-w" are the ruling
    fibers through (p0 : p1).
    """
    fam = _cleared_family()
    zero = CycPoly.zero()
    if kind in ("diag", "anti"):
        gammas = [[zero] * 5 for _ in range(9)]
        for (a, b), poly in fam.items():
            if kind == "diag":
                # w0 -> -p1 z1, w1 -> p0 z0: z0-degree a + 4 - b, p1-degree b
                k, jp, sign = a + 4 - b, b, (-1) ** b
            else:
                # w0 -> -p0 z0, w1 -> p1 z1: z0-degree a + b, p1-degree 4 - b
                k, jp, sign = a + b, 4 - b, (-1) ** b
            gammas[k][jp] = gammas[k][jp] + poly * sign
        return gammas
    if kind == "fiber-z":
        gammas = [[zero] * 5 for _ in range(5)]
        for (a, b), poly in fam.items():
            gammas[b][4 - a] = gammas[b][4 - a] + poly
        return gammas
    if kind == "fiber-w":
        gammas = [[zero] * 5 for _ in range(5)]
        for (a, b), poly in fam.items():
            gammas[a][4 - b] = gammas[a][4 - b] + poly
        return gammas
    raise ValueError(f"unknown factor shape {kind!r}")


@lru_cache(maxsize=1)
def reducibility_locus() -> CycPoly:
    """Polynomial in x vanishing exactly where the family member is divisible
    by a factor of bidegree (1,1) (or, equivalently here, (2,2)) or by a fiber.

    The candidate (1,1)-shapes compatible with the commutator-invariance of
    the family are the diagonal pencil p0*z0*w0 + p1*z1*w1 and the
    antidiagonal pencil p0*z0*w1 + p1*z1*w0; a (2,2)-factor invariant under
    the commutator is a product of two diagonal factors, so it contributes no
    further locus.  Each shape is eliminated by linear algebra on the
    coefficient system with indeterminate (p0 : p1).  The degenerate
    parameters (x = 0, x^8 = 1), where the cleared family vanishes
    identically, sit inside the locus by convention.
    """
    parts = [_eliminate(_shape_quartics(kind)) for kind in ("diag", "anti", "fiber-z", "fiber-w")]
    product = CycPoly.one()
    for p in parts:
        if p.is_zero():
            raise InternalConsistencyError("a factor-shape system is identically solvable")
        product = product * p
    return product.canonical_integral()


def cusp_locus_factors() -> Tuple[CycPoly, CycPoly, CycPoly]:
    """(q, gcd(q, reducibility locus), q with the reducible part removed)."""
    q = cusp_locus_poly()
    red = reducibility_locus()
    common = q.gcd(red)
    remaining = q.exact_div(common)
    return q, common.canonical_integral(), remaining.canonical_integral()


# -- concrete-form factor helpers ---------------------------------------------


def fiber_factors(f: BiForm) -> Tuple[List[Tuple[str, Tuple[CycNumber, CycNumber]]], BiForm]:
    """Split off all field-rational fiber components of a nonzero form.

    Returns (factors, cofactor) where each factor is (axis, (alpha, beta))
    for the fiber through the point [alpha:beta] of that axis.  Every
    division is verified by multiplying back.  Fibers over points outside
    Q(zeta_8) stay inside the cofactor; ``fiber_content`` still detects them.
    """
    if f.is_zero():
        raise ValueError("the zero form has no factor decomposition")
    factors: List[Tuple[str, Tuple[CycNumber, CycNumber]]] = []
    current = f
    progress = True
    while progress:
        progress = False
        for axis in ("z", "w"):
            root = _find_fiber_root(current, axis)
            if root is not None:
                current = _divide_fiber(current, axis, root)
                factors.append((axis, root))
                progress = True
                break
    return factors, current


def fiber_content(f: BiForm, axis: str) -> Tuple[int, CycPoly]:
    """Fiber divisibility data on one axis.

    Returns (k, g): f is divisible by the k-th power of the coordinate fiber
    z0 (resp. w0), and by every fiber over a root of the gcd polynomial g in
    the affine coordinate z1/z0 (resp. w1/w0).  f has a fiber component on
    this axis iff k >= 1 or deg g >= 1; this detection is complete even when
    the roots of g live outside the field.
    """
    p, q = f.bidegree
    deg = p if axis == "z" else q
    groups: Dict[int, List[CycNumber]] = {}
    for (a, b), c in f.coeffs.items():
        main, other = (a, b) if axis == "z" else (b, a)
        groups.setdefault(other, [CycNumber.zero()] * (deg + 1))[deg - main] = c
    k = min(_low_index(col) for col in groups.values())
    gcd: Optional[CycPoly] = None
    for col in groups.values():
        poly = CycPoly(col[k:] if k else col)
        gcd = poly if gcd is None else gcd.gcd(poly)
        if gcd.degree() == 0:
            break
    return k, gcd if gcd is not None else CycPoly.zero()


def _low_index(col: List[CycNumber]) -> int:
    for idx, c in enumerate(col):
        if not c.is_zero():
            return idx
    return len(col)


def _find_fiber_root(f: BiForm, axis: str) -> Optional[Tuple[CycNumber, CycNumber]]:
    deg = f.bidegree[0] if axis == "z" else f.bidegree[1]
    if deg == 0:
        return None
    k, gcd = fiber_content(f, axis)
    if k >= 1:
        return (CycNumber.zero(), CycNumber.one())  # the coordinate fiber z0 / w0
    if gcd.degree() >= 1:
        roots = _field_roots(gcd)
        if roots:
            return (CycNumber.one(), roots[0])
    return None


def _field_roots(poly: CycPoly) -> List[CycNumber]:
    """Roots of a univariate polynomial found inside Q(zeta_8).

    Scans a deterministic candidate set: 0, the sixteen torsion multiples
    +/- zeta^k, their small rational multiples generated from coefficient
    ratios, and the negated constant/leading ratio.  Complete for the split
    configurations exercised here (eighth roots of unity and small
    rationals); anything else stays unsplit.
    """
    if poly.degree() < 1:
        return []
    zeta = CycNumber.zeta()
    units = [zeta ** k for k in range(8)]
    candidates: List[CycNumber] = [CycNumber.zero()]
    base_rationals = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(1, 3)]
    if not poly.coeffs[0].is_zero():
        ratio = poly.coeffs[0] * poly.leading().inverse()
        candidates += [ratio, -ratio]
    for s in base_rationals:
        for u in units:
            candidates.append(u * s)
            candidates.append(-(u * s))
    roots: List[CycNumber] = []
    progress = True
    while progress and poly.degree() >= 1:
        progress = False
        for cand in candidates:
            if poly.evaluate(cand).is_zero():
                poly = poly.exact_div(CycPoly([-cand, CycNumber.one()]))
                roots.append(cand)
                progress = True
                break
    return roots


def _divide_fiber(f: BiForm, axis: str, root: Tuple[CycNumber, CycNumber]) -> BiForm:
    """Exact division by the fiber over [alpha:beta]; verified by multiplying back."""
    alpha, beta = root
    p, q = f.bidegree
    # the fiber through [alpha:beta] is beta*z0 - alpha*z1 (resp. in w)
    if axis == "z":
        fiber = BiForm((1, 0), {(1, 0): beta, (0, 0): -alpha})
        out_bideg = (p - 1, q)
    else:
        fiber = BiForm((0, 1), {(0, 1): beta, (0, 0): -alpha})
        out_bideg = (p, q - 1)
    quotient: Dict[Tuple[int, int], CycNumber] = {}
    if alpha.is_zero():
        # fiber is the coordinate z0 (resp. w0): shift the main exponent down
        inv = beta.inverse()
        for (a, b), c in f.coeffs.items():
            if axis == "z":
                if a == 0:
                    raise InternalConsistencyError("coordinate fiber does not divide")
                quotient[(a - 1, b)] = c * inv
            else:
                if b == 0:
                    raise InternalConsistencyError("coordinate fiber does not divide")
                quotient[(a, b - 1)] = c * inv
    else:
        # synthetic division in the graded main coordinate pair: with the
        # fiber beta*main0 - alpha*main1 the coefficient recursion is
        # col[m] = beta*quot[m-1] - alpha*quot[m]
        cols: Dict[int, List[CycNumber]] = {}
        deg = p if axis == "z" else q
        for (a, b), c in f.coeffs.items():
            main, other = (a, b) if axis == "z" else (b, a)
            cols.setdefault(other, [CycNumber.zero()] * (deg + 1))[main] = c
        alpha_inv = alpha.inverse()
        for other, col in cols.items():
            quot = [CycNumber.zero()] * deg
            prev = CycNumber.zero()
            for m in range(deg):
                quot[m] = (beta * prev - col[m]) * alpha_inv
                prev = quot[m]
            for m, c in enumerate(quot):
                if not c.is_zero():
                    key = (m, other) if axis == "z" else (other, m)
                    quotient[key] = c
    candidate = BiForm(out_bideg, quotient)
    if not (candidate * fiber - f).is_zero():
        raise InternalConsistencyError("inexact fiber division")
    return candidate


def diagonal_binary_form(f: BiForm) -> Optional[CycPoly]:
    """If f is supported on the diagonal monomials z0^k z1^(p-k) w0^k w1^(q-k),
    return it as the binary form in (u, v) = (z0*w0, z1*w1), dehomogenized to
    the polynomial sum c_k t^k with t = u/v.  Otherwise None.
    """
    p, q = f.bidegree
    if p != q:
        return None
    coeffs = [CycNumber.zero()] * (p + 1)
    for (a, b), c in f.coeffs.items():
        if a != b:
            return None
        coeffs[a] = c
    return CycPoly(coeffs)


def diagonal_factor_roots(f: BiForm) -> List[CycNumber]:
    """Field-rational roots t of the diagonal binary form of f.

    Each root t corresponds to the (1,1)-factor z0*w0 - t * z1*w1 of f.
    """
    poly = diagonal_binary_form(f)
    if poly is None:
        return []
    return _field_roots(poly)


# ---------------------------------------------------------------------------
# the invariant plane sextic with four prescribed double points


# Ternary sextic invariant under the degree-five symmetric group acting on the
# quintic Del Pezzo surface; its curve has double points exactly at the four
# base points of the blow-up.  The (3,2,1)-exponent orbit enters with
# coefficient 1 on all six monomials, which the singularity at [1:1:1] forces.
_FS5_TERMS: Dict[Tuple[int, int, int], int] = {
    (4, 1, 1): 2, (1, 4, 1): 2, (1, 1, 4): 2,
    (4, 2, 0): -2, (4, 0, 2): -2, (2, 4, 0): -2,
    (2, 0, 4): -2, (0, 4, 2): -2, (0, 2, 4): -2,
    (3, 3, 0): 2, (3, 0, 3): 2, (0, 3, 3): 2,
    (3, 2, 1): 1, (3, 1, 2): 1, (2, 3, 1): 1,
    (1, 3, 2): 1, (2, 1, 3): 1, (1, 2, 3): 1,
    (2, 2, 2): -6,
}

_FS5_SINGULAR_POINTS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))
_FS5_CONTROL_POINT = (1, 1, 0)


def _ternary_partial(terms: Dict[Tuple[int, int, int], int], var: int):
    out: Dict[Tuple[int, int, int], int] = {}
    for expo, coeff in terms.items():
        if expo[var] == 0:
            continue
        new = list(expo)
        new[var] -= 1
        key = tuple(new)
        out[key] = out.get(key, 0) + coeff * expo[var]
    return out


def _ternary_eval(terms: Dict[Tuple[int, int, int], int], pt) -> int:
    total = 0
    for (i, j, k), coeff in terms.items():
        total += coeff * (pt[0] ** i) * (pt[1] ** j) * (pt[2] ** k)
    return total


@dataclass(frozen=True)
class FS5Verdict:
    valid: bool
    gradient_at_points: Tuple[Tuple[int, int, int], ...]
    gradient_at_control: Tuple[int, int, int]


def fs5_singularity_check() -> FS5Verdict:
    """All three partials of the stored sextic vanish at the four marked
    points, and not all of them vanish at the control point [1:1:0]."""
    partials = [_ternary_partial(_FS5_TERMS, v) for v in range(3)]
    grads = tuple(
        tuple(_ternary_eval(p, pt) for p in partials) for pt in _FS5_SINGULAR_POINTS
    )
    control = tuple(_ternary_eval(p, _FS5_CONTROL_POINT) for p in partials)
    valid = all(all(v == 0 for v in g) for g in grads) and any(v != 0 for v in control)
    return FS5Verdict(valid=valid, gradient_at_points=grads, gradient_at_control=control)
