"""Finite groups acting on surface lattices as isometries.

A group is given by integer generator matrices (column-vector convention)
that preserve the Gram matrix, fix the canonical class, and stabilize the
declared curve catalog setwise.  Closures are computed breadth-first with a
hard element cap; every scenario in the test-suite stays below order 120.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import CapExceededError, IsometryError, ModelMismatchError
from .picard import (
    DivisorClass,
    SurfaceModel,
    surface_from_dict,
)

__all__ = [
    "LatticeIsometry",
    "GroupAction",
    "MukaiEntry",
    "validate_generator",
    "identity_isometry",
    "permutation_of_exceptionals",
    "generate_closure",
    "trivial_action",
    "orbits",
    "invariant_subspace",
    "mukai_catalog",
    "group_from_dict",
    "group_from_json",
]

Matrix = Tuple[Tuple[int, ...], ...]


def _freeze(matrix: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in matrix)


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


def _mat_vec(m: Matrix, v: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


def _int_det(matrix: Matrix) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    n = len(matrix)
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


@dataclass(frozen=True)
class LatticeIsometry:
    """An integer matrix preserving the Gram form and fixing K."""

    model: SurfaceModel
    matrix: Matrix
    name: Optional[str] = None

    def apply(self, cls: DivisorClass) -> DivisorClass:
        if cls.model != self.model:
            raise ModelMismatchError("class and isometry live on different models")
        return DivisorClass(self.model, _mat_vec(self.matrix, cls.coords))

    def compose(self, other: "LatticeIsometry") -> "LatticeIsometry":
        if other.model != self.model:
            raise ModelMismatchError("isometries live on different models")
        return LatticeIsometry(self.model, _mat_mul(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix)

    def __eq__(self, other):
        if not isinstance(other, LatticeIsometry):
            return NotImplemented
        return self.model == other.model and self.matrix == other.matrix


def validate_generator(
    matrix: Sequence[Sequence[int]], model: SurfaceModel, name: Optional[str] = None
) -> LatticeIsometry:
    """Check all isometry invariants, naming every violated one on failure."""
    m = _freeze(matrix)
    rank = model.rank
    violations = []
    if len(m) != rank or any(len(row) != rank for row in m):
        raise IsometryError([f"matrix is not {rank}x{rank}"])
    g = model.gram
    mt_g_m = _mat_mul(_mat_mul(_transpose(m), g), m)
    if mt_g_m != g:
        violations.append("Gram matrix not preserved (M^T G M != G)")
    if _mat_vec(m, model.canonical_coords) != model.canonical_coords:
        violations.append("canonical class not fixed (M K != K)")
    det = _int_det(m)
    if det not in (1, -1):
        violations.append(f"determinant is {det}, not +/-1")
    if model.catalog_coords:
        cat = set(model.catalog_coords)
        if {_mat_vec(m, c) for c in cat} != cat:
            violations.append("catalog not stabilized setwise")
    if violations:
        raise IsometryError(violations)
    return LatticeIsometry(model, m, name)


def _transpose(m: Matrix) -> Matrix:
    n = len(m)
    return tuple(tuple(m[j][i] for j in range(n)) for i in range(n))


def identity_isometry(model: SurfaceModel) -> LatticeIsometry:
    n = model.rank
    return LatticeIsometry(
        model, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), "id"
    )


def permutation_of_exceptionals(model: SurfaceModel, perm: Sequence[int]) -> LatticeIsometry:
    """The isometry permuting the exceptional basis vectors E_i by ``perm``.

    ``perm`` maps exceptional slot i to slot perm[i], zero-based among the
    exceptional indices.
    """
    exc = model.exceptional_indices()
    if sorted(perm) != list(range(len(exc))):
        raise ValueError("perm must be a permutation of the exceptional slots")
    n = model.rank
    cols: List[List[int]] = [[0] * n for _ in range(n)]
    for i in range(n):
        if i in exc:
            target = exc[perm[exc.index(i)]]
            cols[i][target] = 1
        else:
            cols[i][i] = 1
    matrix = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    return validate_generator(matrix, model)


@dataclass(frozen=True)
class GroupAction:
    """A closed finite set of lattice isometries of one model."""

    model: SurfaceModel
    elements: Tuple[LatticeIsometry, ...]
    generator_names: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def order(self) -> int:
        return len(self.elements)

    def apply_all(self, cls: DivisorClass) -> List[DivisorClass]:
        return [iso.apply(cls) for iso in self.elements]


def trivial_action(model: SurfaceModel) -> GroupAction:
    return GroupAction(model, (identity_isometry(model),), ("id",))


def generate_closure(
    generators: Sequence[LatticeIsometry], cap: int = 10_000
) -> GroupAction:
    """Breadth-first multiplicative closure of validated generators.

    In a finite matrix group the closure automatically contains the identity
    and all inverses; exceeding ``cap`` raises (the group is likely infinite
    or the generators misconfigured).
    """
    if not generators:
        raise ValueError("need at least one generator")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    model = generators[0].model
    for g in generators[1:]:
        if g.model != model:
            raise ModelMismatchError("generators live on different models")
    ident = identity_isometry(model)
    elements = {ident.matrix: ident}
    frontier = [ident]
    while frontier:
        new_frontier = []
        for cur in frontier:
            for gen in generators:
                nxt = cur.compose(gen)
                if nxt.matrix not in elements:
                    elements[nxt.matrix] = nxt
                    if len(elements) > cap:
                        raise CapExceededError(
                            f"closure exceeded cap {cap}; group may be infinite"
                        )
                    new_frontier.append(nxt)
        frontier = new_frontier
    ordered = tuple(elements[m] for m in sorted(elements))
    names = tuple(g.name for g in generators if g.name)
    return GroupAction(model, ordered, names)


def orbits(action: GroupAction, classes: Sequence[DivisorClass]) -> List[List[DivisorClass]]:
    """Partition the classes into group orbits; each orbit is sorted.

    Orbits may leave the input set (the action is applied to each class in
    full); sizes always divide the group order.
    """
    for c in classes:
        if c.model != action.model:
            raise ModelMismatchError("class does not live on the action's model")
    seen = set()
    out: List[List[DivisorClass]] = []
    for c in sorted(classes, key=lambda d: d.coords):
        if c.coords in seen:
            continue
        orbit_coords = {iso.apply(c).coords for iso in action.elements}
        seen |= orbit_coords
        out.append([DivisorClass(action.model, x) for x in sorted(orbit_coords)])
    return out


def invariant_subspace(action: GroupAction) -> List[Tuple[Fraction, ...]]:
    """Basis (reduced row echelon form) of the rational fixed subspace.

    This is the kernel of the stacked (M - I) over all group elements; it
    always contains the direction of K since every element fixes K.
    """
    n = action.model.rank
    rows: List[List[Fraction]] = []
    for iso in action.elements:
        for i in range(n):
            row = [Fraction(iso.matrix[i][j] - (1 if i == j else 0)) for j in range(n)]
            if any(row):
                rows.append(row)
    return _nullspace_rref(rows, n)


def _nullspace_rref(rows: List[List[Fraction]], n: int) -> List[Tuple[Fraction, ...]]:
    # row-reduce the constraint matrix, then read off the kernel basis and
    # put *it* into reduced echelon form for a canonical answer
    mat = [row[:] for row in rows]
    pivots: List[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        f = mat[r][c]
        mat[r] = [v / f for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                factor = mat[i][c]
                mat[i] = [v - factor * w for v, w in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][fc]
        basis.append(vec)
    # canonical form: echelonize the kernel basis itself
    basis_rref: List[List[Fraction]] = [v[:] for v in basis]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(basis_rref)) if basis_rref[i][c] != 0), None)
        if piv is None:
            continue
        basis_rref[r], basis_rref[piv] = basis_rref[piv], basis_rref[r]
        f = basis_rref[r][c]
        basis_rref[r] = [v / f for v in basis_rref[r]]
        for i in range(len(basis_rref)):
            if i != r and basis_rref[i][c] != 0:
                factor = basis_rref[i][c]
                basis_rref[i] = [v - factor * w for v, w in zip(basis_rref[i], basis_rref[r])]
        r += 1
    return [tuple(v) for v in basis_rref]


# ---------------------------------------------------------------------------
# reference data: the maximal symplectic groups table


@dataclass(frozen=True)
class MukaiEntry:
    index: int
    name: str
    order: int
    structure: str
    structure_order: Optional[int]
    consistent: bool


_ATOM_ORDERS: Dict[str, int] = {
    "L_2(7)": 168,
    "PSL_2(F_7)": 168,
    "GL_3(F_2)": 168,
    "A_3": 3,
    "A_4": 12,
    "A_5": 60,
    "A_6": 360,
    "S_3": 6,
    "S_4": 24,
    "S_5": 120,
    "D_8": 8,
    "D_12": 12,
    "Q_8": 8,
    "Q_8*Q_8": 32,  # central product, |Q8 x Q8| / |C2|
    "A_{3,3}": 18,  # (A_3 x A_3) . 2
    "even permutations": 360,
}


def _structure_order(structure: str) -> Optional[int]:
    """Order implied by a structure string like ``C_2^4 : A_5``.

    Semidirect (':'), direct ('x') and already-central-product atoms multiply;
    ``C_n^k`` contributes n^k.  Returns None when an atom is unknown.
    """
    s = structure.strip()
    if s in _ATOM_ORDERS:
        return _ATOM_ORDERS[s]
    if "=" in s:
        parts = [p.strip() for p in s.split("=")]
        orders = {_ATOM_ORDERS.get(p) for p in parts}
        orders.discard(None)
        return orders.pop() if len(orders) == 1 else None
    total = 1
    for factor in (f.strip() for part in s.split(":") for f in part.split(" x ")):
        if factor in _ATOM_ORDERS:
            total *= _ATOM_ORDERS[factor]
            continue
        if factor.startswith("C_"):
            body = factor[2:]
            if "^" in body:
                base, exp = body.split("^")
                total *= int(base) ** int(exp)
            else:
                total *= int(body)
            continue
        return None
    return total


_MUKAI_ROWS = (
    ("L_2(7)", 168, "PSL_2(F_7) = GL_3(F_2)"),
    ("A_6", 360, "even permutations"),
    ("S_5", 120, "A_6 : C_2"),
    ("M_20", 960, "C_2^4 : A_5"),
    ("F_384", 384, "C_2^4 : S_4"),
    ("A_{4,4}", 288, "C_2^4 : A_{3,3}"),
    ("T_192", 192, "Q_8*Q_8 : S_3"),
    ("H_192", 192, "C_2^4 : D_12"),
    ("N_72", 72, "C_3^2 : D_8"),
    ("M_9", 72, "C_3^2 : Q_8"),
    ("T_48", 48, "Q_8 : S_3"),
)


def mukai_catalog() -> List[MukaiEntry]:
    """The eleven maximal symplectic groups, each with a consistency flag.

    The flag records whether the structure string's factors multiply to the
    stated order.  Row 3 is flagged inconsistent as printed: the order-120
    group carries the structure string ``A_6 : C_2`` of order 720; the
    discrepancy is preserved, not corrected.
    """
    out = []
    for idx, (name, order, structure) in enumerate(_MUKAI_ROWS, start=1):
        so = _structure_order(structure)
        out.append(
            MukaiEntry(
                index=idx,
                name=name,
                order=order,
                structure=structure,
                structure_order=so,
                consistent=(so == order),
            )
        )
    return out


# ---------------------------------------------------------------------------
# config loading


def group_from_dict(d: dict, base_dir: Optional[Path] = None) -> GroupAction:
    """Load ``{"surface": ..., "generators": [{"name", "matrix"}], "cap"?}``.

    The surface may be an inline object or a path (resolved against
    ``base_dir``) to a surface JSON file.
    """
    surf = d["surface"]
    if isinstance(surf, str):
        path = Path(surf)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        model = surface_from_dict(json.loads(path.read_text()))
    else:
        model = surface_from_dict(surf)
    gens = [
        validate_generator(g["matrix"], model, g.get("name"))
        for g in d.get("generators", [])
    ]
    if not gens:
        return trivial_action(model)
    return generate_closure(gens, cap=int(d.get("cap", 10_000)))


def group_from_json(text: str, base_dir: Optional[Path] = None) -> GroupAction:
    return group_from_dict(json.loads(text), base_dir)
