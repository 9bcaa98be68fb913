"""Integer intersection lattices of rational surfaces.

A ``SurfaceModel`` is a marked lattice standing in for the group of 1-cycles
modulo numerical equivalence: a basis, a symmetric Gram matrix of signature
(1, rank-1), the canonical class K, and a catalog of classes declared to be
irreducible effective curves.  Two marked families cover everything the
reduction engine needs:

* ``BLOWUP_P2(m)``   basis (H, E1..Em), Gram diag(1, -1, .., -1),
  K = -3H + E1 + .. + Em, K^2 = 9 - m;
* ``BLOWUP_P1XP1(m)`` basis (F1, F2, E1..Em), Gram [[0,1],[1,0]] + diag(-1..),
  K = -2F1 - 2F2 + E1 + .. + Em, K^2 = 8 - m.

Effectivity is declarative: the catalog lists which classes are curves, and
the default catalog is the general-position one (no three of the blown-up
points collinear), consisting of all box solutions of the low-degree
rational-curve equations.  All arithmetic is exact; no floats anywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import (
    AbstractModelError,
    EquimoriError,
    ModelMismatchError,
    NonStandardContraction,
)

__all__ = [
    "ModelKind",
    "SurfaceModel",
    "DivisorClass",
    "EndpointLabel",
    "Pushforward",
    "blowup_p2",
    "blowup_p1xp1",
    "abstract_model",
    "intersect",
    "adjunction_genus",
    "blow_up",
    "blow_down_orbit",
    "recognize_endpoint",
    "surface_to_dict",
    "surface_from_dict",
    "surface_to_json",
    "surface_from_json",
]


class ModelKind(str, Enum):
    BLOWUP_P2 = "blowup-p2"
    BLOWUP_P1XP1 = "blowup-p1xp1"
    ABSTRACT = "abstract"


Coords = Tuple[int, ...]


@dataclass(frozen=True)
class SurfaceModel:
    kind: ModelKind
    m: Optional[int]
    gram: Tuple[Tuple[int, ...], ...]
    canonical_coords: Coords
    catalog_coords: Tuple[Coords, ...]
    polarization_coords: Optional[Coords] = None

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def canonical(self) -> "DivisorClass":
        return DivisorClass(self, self.canonical_coords)

    @property
    def catalog(self) -> Tuple["DivisorClass", ...]:
        return tuple(DivisorClass(self, c) for c in self.catalog_coords)

    @property
    def polarization(self) -> Optional["DivisorClass"]:
        if self.polarization_coords is None:
            return None
        return DivisorClass(self, self.polarization_coords)

    def k_squared(self) -> int:
        return intersect(self.canonical, self.canonical)

    def divisor(self, coords: Sequence[int]) -> "DivisorClass":
        return DivisorClass(self, tuple(int(c) for c in coords))

    def basis_vector(self, i: int) -> "DivisorClass":
        coords = [0] * self.rank
        coords[i] = 1
        return self.divisor(coords)

    def exceptional_indices(self) -> Tuple[int, ...]:
        """Basis positions holding the exceptional (-1)-vectors of a marked model."""
        if self.kind == ModelKind.BLOWUP_P2:
            return tuple(range(1, self.rank))
        if self.kind == ModelKind.BLOWUP_P1XP1:
            return tuple(range(2, self.rank))
        raise AbstractModelError("abstract models carry no marked exceptional basis")

    def __repr__(self):
        if self.kind is ModelKind.ABSTRACT:
            return f"SurfaceModel(abstract, rank={self.rank})"
        return f"SurfaceModel({self.kind.value}, m={self.m})"


@dataclass(frozen=True)
class DivisorClass:
    model: SurfaceModel
    coords: Coords

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != self.model.rank:
            raise ValueError(
                f"coordinate length {len(coords)} does not match rank {self.model.rank}"
            )
        object.__setattr__(self, "coords", coords)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        _require_same_model(self, other)
        return DivisorClass(self.model, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        _require_same_model(self, other)
        return DivisorClass(self.model, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.model, tuple(-a for a in self.coords))

    def __mul__(self, n: int) -> "DivisorClass":
        if not isinstance(n, int):
            return NotImplemented
        return DivisorClass(self.model, tuple(n * a for a in self.coords))

    __rmul__ = __mul__

    def dot(self, other: "DivisorClass") -> int:
        return intersect(self, other)

    def __repr__(self):
        return f"DivisorClass{self.coords}"


def _require_same_model(a: DivisorClass, b: DivisorClass):
    if a.model != b.model:
        raise ModelMismatchError("divisor classes belong to different surface models")


# ---------------------------------------------------------------------------
# constructors


def _p2_gram(m: int) -> Tuple[Tuple[int, ...], ...]:
    rank = 1 + m
    return tuple(
        tuple((1 if i == j == 0 else (-1 if i == j else 0)) for j in range(rank))
        for i in range(rank)
    )


def _p1xp1_gram(m: int) -> Tuple[Tuple[int, ...], ...]:
    rank = 2 + m
    rows = []
    for i in range(rank):
        row = [0] * rank
        if i == 0:
            row[1] = 1
        elif i == 1:
            row[0] = 1
        else:
            row[i] = -1
        rows.append(tuple(row))
    return tuple(rows)


def blowup_p2(m: int, catalog: Optional[Iterable[Sequence[int]]] = None) -> SurfaceModel:
    """The plane blown up in m general points, with its marked basis (H, E1..Em)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    model = SurfaceModel(
        kind=ModelKind.BLOWUP_P2,
        m=m,
        gram=_p2_gram(m),
        canonical_coords=tuple([-3] + [1] * m),
        catalog_coords=(),
    )
    cat = _freeze_catalog(model, catalog) if catalog is not None else default_catalog(model)
    return SurfaceModel(model.kind, m, model.gram, model.canonical_coords, cat)


def blowup_p1xp1(m: int, catalog: Optional[Iterable[Sequence[int]]] = None) -> SurfaceModel:
    """The quadric P1 x P1 blown up in m general points, basis (F1, F2, E1..Em)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    model = SurfaceModel(
        kind=ModelKind.BLOWUP_P1XP1,
        m=m,
        gram=_p1xp1_gram(m),
        canonical_coords=tuple([-2, -2] + [1] * m),
        catalog_coords=(),
    )
    cat = _freeze_catalog(model, catalog) if catalog is not None else default_catalog(model)
    return SurfaceModel(model.kind, m, model.gram, model.canonical_coords, cat)


def abstract_model(
    gram: Sequence[Sequence[int]],
    canonical: Sequence[int],
    catalog: Iterable[Sequence[int]] = (),
    polarization: Optional[Sequence[int]] = None,
) -> SurfaceModel:
    g = tuple(tuple(int(v) for v in row) for row in gram)
    rank = len(g)
    if any(len(row) != rank for row in g):
        raise ValueError("Gram matrix must be square")
    if any(g[i][j] != g[j][i] for i in range(rank) for j in range(rank)):
        raise ValueError("Gram matrix must be symmetric")
    model = SurfaceModel(
        kind=ModelKind.ABSTRACT,
        m=None,
        gram=g,
        canonical_coords=tuple(int(c) for c in canonical),
        catalog_coords=(),
        polarization_coords=tuple(int(c) for c in polarization) if polarization else None,
    )
    cat = _freeze_catalog(model, catalog)
    return SurfaceModel(model.kind, None, g, model.canonical_coords, cat, model.polarization_coords)


def _freeze_catalog(model: SurfaceModel, catalog: Iterable[Sequence[int]]) -> Tuple[Coords, ...]:
    seen = []
    for entry in catalog:
        coords = tuple(int(c) for c in entry)
        if len(coords) != model.rank:
            raise ValueError("catalog entry has wrong length")
        cls = DivisorClass(model, coords)
        if adjunction_genus(cls) < 0:
            raise ValueError(f"catalog class {coords} has negative adjunction genus")
        if coords not in seen:
            seen.append(coords)
    return tuple(sorted(seen))


def default_catalog(model: SurfaceModel) -> Tuple[Coords, ...]:
    """General-position catalog: rational classes with C.C in {-1, 0, 1}, K.C < 0.

    On marked models this collects the exceptional curves, the lines/rulings
    and the low-degree pencil classes inside the standard enumeration box.
    Abstract models start with an empty catalog.
    """
    if model.kind is ModelKind.ABSTRACT:
        return ()
    from .curves import _box_solutions

    out = []
    for self_int in (-1, 0, 1):
        k_deg = -2 - self_int  # adjunction genus zero forces K.C = -2 - C.C
        out.extend(_box_solutions(model, self_int, k_deg))
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# core operations


def intersect(a: DivisorClass, b: DivisorClass) -> int:
    """The intersection number a . b, i.e. a^T (gram) b."""
    _require_same_model(a, b)
    g = a.model.gram
    total = 0
    for i, ai in enumerate(a.coords):
        if not ai:
            continue
        row = g[i]
        total += ai * sum(row[j] * bj for j, bj in enumerate(b.coords) if bj)
    return total


def adjunction_genus(c: DivisorClass) -> Fraction:
    """Arithmetic genus 1 + (C.C + K.C)/2 as an exact rational.

    Non-integral or negative outputs are legal for classes that are not
    curves; callers that care should check.
    """
    k = c.model.canonical
    return 1 + Fraction(intersect(c, c) + intersect(k, c), 2)


def blow_up(model: SurfaceModel, k: int = 1) -> SurfaceModel:
    """Blow up k further (general) points: k new (-1)-basis vectors, K^2 drops by k."""
    if model.kind is ModelKind.ABSTRACT:
        raise AbstractModelError("blow_up requires a marked model")
    if k < 0:
        raise ValueError("k must be non-negative")
    if model.kind is ModelKind.BLOWUP_P2:
        return blowup_p2(model.m + k)
    return blowup_p1xp1(model.m + k)


@dataclass(frozen=True)
class Pushforward:
    """Linear data of a contraction: normalize, then drop the orbit coordinates.

    ``normalizer`` is a Gram- and K-preserving integer matrix (a product of
    reflections in (-2)-classes); ``dropped`` are the basis positions removed.
    The map is intersection-preserving on the orthogonal complement of the
    contracted orbit.
    """

    source: SurfaceModel
    target: SurfaceModel
    normalizer: Tuple[Tuple[int, ...], ...]
    dropped: Tuple[int, ...]

    def apply_coords(self, coords: Sequence[int]) -> Coords:
        n = _mat_vec(self.normalizer, coords)
        return tuple(v for i, v in enumerate(n) if i not in self.dropped)

    def apply(self, cls: DivisorClass) -> DivisorClass:
        if cls.model != self.source:
            raise ModelMismatchError("class does not live on the contraction source")
        return DivisorClass(self.target, self.apply_coords(cls.coords))

    def section_coords(self, coords: Sequence[int]) -> Coords:
        """Lift target coordinates back along the kept basis positions."""
        kept = [i for i in range(self.source.rank) if i not in self.dropped]
        lifted = [0] * self.source.rank
        for v, i in zip(coords, kept):
            lifted[i] = v
        inv = _mat_inverse_int(self.normalizer)
        return _mat_vec(inv, lifted)


def _mat_vec(m: Sequence[Sequence[int]], v: Sequence[int]) -> Coords:
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


def _identity(n: int):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _mat_inverse_int(m) -> Tuple[Tuple[int, ...], ...]:
    """Inverse of a unimodular integer matrix via exact Gauss-Jordan."""
    n = len(m)
    a = [[Fraction(v) for v in row] for row in m]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        f = a[col][col]
        a[col] = [v / f for v in a[col]]
        inv[col] = [v / f for v in inv[col]]
        for r in range(n):
            if r == col or a[r][col] == 0:
                continue
            factor = a[r][col]
            a[r] = [v - factor * w for v, w in zip(a[r], a[col])]
            inv[r] = [v - factor * w for v, w in zip(inv[r], inv[col])]
    out = []
    for row in inv:
        int_row = []
        for v in row:
            if v.denominator != 1:
                raise ValueError("matrix is not unimodular over the integers")
            int_row.append(int(v))
        out.append(tuple(int_row))
    return tuple(out)


def _is_exceptional_basis_vector(model: SurfaceModel, coords: Coords) -> Optional[int]:
    nonzero = [i for i, c in enumerate(coords) if c]
    if len(nonzero) != 1 or coords[nonzero[0]] != 1:
        return None
    i = nonzero[0]
    if i in model.exceptional_indices():
        return i
    return None


def _reflection_matrix(model: SurfaceModel, root: Coords) -> Tuple[Tuple[int, ...], ...]:
    # x -> x + (x . C) C for a (-2)-class C; preserves the Gram matrix and K
    rank = model.rank
    g = model.gram
    rows = []
    for i in range(rank):
        e = [0] * rank
        e[i] = 1
        pairing = sum(g[i][j] * root[j] for j in range(rank))
        rows.append(tuple(e[j] + pairing * root[j] for j in range(rank)))
    # engine convention: matrices act on column vectors, so transpose the
    # row-built image list into column form
    return tuple(tuple(rows[j][i] for j in range(rank)) for i in range(rank))


def _find_normalizer(model: SurfaceModel, orbit_coords: List[Coords], depth: int):
    """Search products of (-2)-reflections taking every orbit member to a
    distinct exceptional basis vector.  Breadth-first, depth-limited."""
    from .curves import enumerate_minus_two_classes

    def normalized(coords_list):
        hit = []
        for c in coords_list:
            i = _is_exceptional_basis_vector(model, c)
            if i is None or i in hit:
                return False
            hit.append(i)
        return True

    if normalized(orbit_coords):
        return _identity(model.rank)

    roots = [c.coords for c in enumerate_minus_two_classes(model)]
    if not roots:
        return None
    reflections = [_reflection_matrix(model, r) for r in roots]
    state0 = tuple(orbit_coords)
    frontier = {state0: _identity(model.rank)}
    seen = {state0}
    for _ in range(depth):
        nxt = {}
        for state, mat in frontier.items():
            for refl in reflections:
                new_state = tuple(_mat_vec(refl, c) for c in state)
                if new_state in seen:
                    continue
                seen.add(new_state)
                new_mat = _mat_mul(refl, mat)
                if normalized(list(new_state)):
                    return new_mat
                nxt[new_state] = new_mat
        if not nxt:
            return None
        frontier = nxt
    return None


def blow_down_orbit(
    model: SurfaceModel,
    orbit: Sequence[DivisorClass],
    reflection_depth: int = 8,
) -> Tuple[SurfaceModel, Pushforward]:
    """Contract a disjoint orbit of (-1)-classes, possibly after Weyl normalization.

    The orbit members must be pairwise orthogonal with C.C = -1 and K.C = -1.
    If some member is not already an exceptional basis vector, a product of at
    most ``reflection_depth`` reflections in (-2)-classes is searched for; on
    failure a ``NonStandardContraction`` is raised rather than silently
    refusing.
    """
    if not orbit:
        raise ValueError("empty contraction orbit")
    k_class = model.canonical
    coords_list = []
    for cls in orbit:
        if cls.model != model:
            raise ModelMismatchError("orbit member lives on a different model")
        if intersect(cls, cls) != -1:
            raise NonStandardContraction(f"orbit member {cls.coords} has self-intersection != -1")
        if intersect(k_class, cls) != -1:
            raise NonStandardContraction(f"orbit member {cls.coords} has K-degree != -1")
        if cls.coords in coords_list:
            raise NonStandardContraction("orbit members are not distinct")
        coords_list.append(cls.coords)
    for a, b in combinations(orbit, 2):
        if intersect(a, b) != 0:
            raise NonStandardContraction("orbit members are not pairwise disjoint")
    if model.kind is ModelKind.ABSTRACT:
        raise AbstractModelError("contraction requires a marked model")

    normalizer = _find_normalizer(model, coords_list, reflection_depth)
    if normalizer is None:
        raise NonStandardContraction(
            "orbit cannot be moved onto exceptional basis vectors by "
            f"{reflection_depth} or fewer (-2)-reflections"
        )
    dropped = tuple(
        sorted(
            _is_exceptional_basis_vector(model, _mat_vec(normalizer, c)) for c in coords_list
        )
    )
    k = len(dropped)
    if model.kind is ModelKind.BLOWUP_P2:
        target = blowup_p2(model.m - k)
    else:
        target = blowup_p1xp1(model.m - k)
    push = Pushforward(source=model, target=target, normalizer=normalizer, dropped=dropped)
    return target, push


@dataclass(frozen=True)
class EndpointLabel:
    """Label of a reduction endpoint, recognized from lattice data alone."""

    kind: str  # P2 | P1xP1 | HirzebruchOrBl1P2 | DelPezzoDegree | KNef | ConicBundleBase
    degree: Optional[int] = None

    def __str__(self):
        if self.kind == "DelPezzoDegree":
            return f"DelPezzoDegree({self.degree})"
        return self.kind


def recognize_endpoint(model: SurfaceModel) -> EndpointLabel:
    """Recognize the surface type of a (normalized) model.

    Rank 1 with K^2 = 9 is the plane; rank 2 with K^2 = 8 splits by lattice
    parity into the quadric (even) and the odd ruled surfaces; a rank-r model
    with K^2 = 10 - r >= 1 is a Del Pezzo of that degree.  Otherwise the
    catalog decides between K-nef and a conic-bundle total space.
    """
    k2 = model.k_squared()
    rank = model.rank
    if rank == 1 and k2 == 9:
        return EndpointLabel("P2")
    if rank == 2 and k2 == 8:
        even = all(model.gram[i][i] % 2 == 0 for i in range(rank))
        return EndpointLabel("P1xP1" if even else "HirzebruchOrBl1P2")
    if 3 <= rank <= 9 and k2 == 10 - rank:
        return EndpointLabel("DelPezzoDegree", degree=k2)
    k_class = model.canonical
    if all(intersect(k_class, c) >= 0 for c in model.catalog):
        return EndpointLabel("KNef")
    if any(
        intersect(c, c) == 0 and intersect(k_class, c) == -2 for c in model.catalog
    ):
        return EndpointLabel("ConicBundleBase")
    raise EquimoriError(f"inconsistent rank/K^2 pair: rank={rank}, K^2={k2}")


# ---------------------------------------------------------------------------
# serialization (see docs/formats.md and docs/surface.schema.json)


def surface_to_dict(model: SurfaceModel) -> dict:
    d = {"kind": model.kind.value}
    if model.kind is not ModelKind.ABSTRACT:
        d["m"] = model.m
    d["gram"] = [list(row) for row in model.gram]
    d["canonical"] = list(model.canonical_coords)
    d["catalog"] = [list(c) for c in model.catalog_coords]
    if model.polarization_coords is not None:
        d["polarization"] = list(model.polarization_coords)
    return d


def surface_from_dict(d: dict) -> SurfaceModel:
    kind = d.get("kind")
    if kind == ModelKind.BLOWUP_P2.value:
        model = blowup_p2(int(d["m"]), catalog=d.get("catalog"))
    elif kind == ModelKind.BLOWUP_P1XP1.value:
        model = blowup_p1xp1(int(d["m"]), catalog=d.get("catalog"))
    elif kind == ModelKind.ABSTRACT.value:
        return abstract_model(
            d["gram"], d["canonical"], d.get("catalog", ()), d.get("polarization")
        )
    else:
        raise ValueError(f"unknown surface kind {kind!r}")
    if "gram" in d and tuple(tuple(r) for r in d["gram"]) != model.gram:
        raise ValueError("explicit gram contradicts the marked form")
    if "canonical" in d and tuple(d["canonical"]) != model.canonical_coords:
        raise ValueError("explicit canonical class contradicts the marked form")
    return model


def surface_to_json(model: SurfaceModel) -> str:
    return json.dumps(surface_to_dict(model), sort_keys=True, indent=2)


def surface_from_json(text: str) -> SurfaceModel:
    return surface_from_dict(json.loads(text))
