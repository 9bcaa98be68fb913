"""The equivariant reduction engine.

Candidates for contraction are group orbits of catalog curves whose orbit sum
is K-negative.  The sign of the orbit sum's self-intersection sorts each
candidate into the contraction trichotomy:

* negative and the members pairwise-disjoint (-1)-curves: blow the orbit down;
* zero with every member rational: the invariant class of a conic-bundle fiber;
* positive with a one-dimensional invariant subspace: the model is a
  G-minimal Del Pezzo surface.

``reduce`` iterates blow-downs (rank strictly drops, so the loop terminates)
and stops at one of the three terminal states.  For rational-surface inputs
the K-nef terminal state never occurs; the tests assert this on every run.
Reduction order is a deterministic tie-break (smallest orbit, then lex-min
member); endpoints are order-independent but step sequences need not be.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from .errors import InternalConsistencyError, ModelMismatchError
from .groups import GroupAction, LatticeIsometry, orbits, invariant_subspace, validate_generator
from .picard import (
    DivisorClass,
    EndpointLabel,
    Pushforward,
    SurfaceModel,
    adjunction_genus,
    blow_down_orbit,
    intersect,
    recognize_endpoint,
)

__all__ = [
    "CaseTag",
    "ExtremalCandidate",
    "ReductionStep",
    "ReductionTrace",
    "FiberVerdict",
    "find_candidates",
    "contract",
    "reduce_model",
    "singular_fiber_check",
    "trace_to_dict",
]


class CaseTag(str, Enum):
    BLOW_DOWN = "BlowDown"
    CONIC_BUNDLE = "ConicBundle"
    DEL_PEZZO = "DelPezzo"
    NOT_EXTREMAL = "NotExtremal"


@dataclass(frozen=True)
class ExtremalCandidate:
    orbit: Tuple[DivisorClass, ...]
    orbit_sum: DivisorClass
    self_int: int
    k_degree: int
    case_tag: CaseTag


def find_candidates(model: SurfaceModel, action: GroupAction) -> List[ExtremalCandidate]:
    """One candidate per K-negative catalog orbit, deterministically ordered.

    An empty list means K pairs non-negatively with the whole catalog.
    """
    if action.model != model:
        raise ModelMismatchError("action does not act on the given model")
    k = model.canonical
    inv_rank: Optional[int] = None
    out: List[ExtremalCandidate] = []
    for orbit in orbits(action, list(model.catalog)):
        total = orbit[0]
        for c in orbit[1:]:
            total = total + c
        k_deg = intersect(k, total)
        if k_deg >= 0:
            continue
        self_int = intersect(total, total)
        tag = CaseTag.NOT_EXTREMAL
        if self_int < 0 and _disjoint_minus_ones(k, orbit):
            tag = CaseTag.BLOW_DOWN
        elif self_int == 0 and all(adjunction_genus(c) == 0 for c in orbit):
            tag = CaseTag.CONIC_BUNDLE
        elif self_int > 0:
            if inv_rank is None:
                inv_rank = len(invariant_subspace(action))
            if inv_rank == 1:
                tag = CaseTag.DEL_PEZZO
        out.append(
            ExtremalCandidate(
                orbit=tuple(orbit),
                orbit_sum=total,
                self_int=self_int,
                k_degree=k_deg,
                case_tag=tag,
            )
        )
    out.sort(key=lambda c: (len(c.orbit), c.orbit[0].coords))
    return out


def _disjoint_minus_ones(k: DivisorClass, orbit: Sequence[DivisorClass]) -> bool:
    for i, a in enumerate(orbit):
        if intersect(a, a) != -1 or intersect(k, a) != -1:
            return False
        for b in orbit[i + 1 :]:
            if intersect(a, b) != 0:
                return False
    return True


def contract(
    model: SurfaceModel, action: GroupAction, candidate: ExtremalCandidate
) -> Tuple[SurfaceModel, GroupAction, Pushforward]:
    """Blow down a BlowDown candidate and push the group action forward.

    Every pushed-forward matrix is re-validated as an isometry of the new
    model; failure indicates an internal inconsistency, not bad user input.
    """
    if candidate.case_tag is not CaseTag.BLOW_DOWN:
        raise ValueError("only BlowDown candidates can be contracted")
    new_model, push = blow_down_orbit(model, list(candidate.orbit))
    kept = [i for i in range(model.rank) if i not in push.dropped]
    n_inv = _int_inverse(push.normalizer)
    new_elements = []
    seen = set()
    for iso in action.elements:
        conj = _mat_mul(_mat_mul(push.normalizer, iso.matrix), n_inv)
        sub = tuple(tuple(conj[i][j] for j in kept) for i in kept)
        if sub in seen:
            continue
        seen.add(sub)
        try:
            new_elements.append(validate_generator(sub, new_model, iso.name))
        except Exception as exc:  # noqa: BLE001 - re-raise with context
            raise InternalConsistencyError(
                f"pushed-forward action is not an isometry of the new model: {exc}"
            ) from exc
    new_action = GroupAction(
        new_model, tuple(sorted(new_elements, key=lambda e: e.matrix)), action.generator_names
    )
    return new_model, new_action, push


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


def _int_inverse(m):
    from .picard import _mat_inverse_int

    return _mat_inverse_int(m)


@dataclass(frozen=True)
class ReductionStep:
    model_before: SurfaceModel
    orbit: Tuple[DivisorClass, ...]
    case: CaseTag


@dataclass(frozen=True)
class ReductionTrace:
    steps: Tuple[ReductionStep, ...]
    final_model: SurfaceModel
    final_action: GroupAction
    endpoint: EndpointLabel
    endpoint_detail: str  # GMinimalDelPezzo | ConicBundleOverP1 | KNef


def reduce_model(model: SurfaceModel, action: GroupAction) -> ReductionTrace:
    """Run the reduction to a terminal state.

    While a BlowDown candidate exists the deterministically-first one is
    contracted.  Otherwise the run stops: at a conic-bundle candidate, at a
    Del Pezzo candidate, or with K nef on the catalog.
    """
    steps: List[ReductionStep] = []
    while True:
        candidates = find_candidates(model, action)
        blow_downs = [c for c in candidates if c.case_tag is CaseTag.BLOW_DOWN]
        if blow_downs:
            chosen = blow_downs[0]
            steps.append(
                ReductionStep(model_before=model, orbit=chosen.orbit, case=chosen.case_tag)
            )
            model, action, _ = contract(model, action, chosen)
            continue
        if any(c.case_tag is CaseTag.CONIC_BUNDLE for c in candidates):
            detail = "ConicBundleOverP1"
        elif any(c.case_tag is CaseTag.DEL_PEZZO for c in candidates):
            detail = "GMinimalDelPezzo"
        else:
            detail = "KNef"
        return ReductionTrace(
            steps=tuple(steps),
            final_model=model,
            final_action=action,
            endpoint=recognize_endpoint(model),
            endpoint_detail=detail,
        )


@dataclass(frozen=True)
class FiberVerdict:
    valid: bool
    reason: str


def singular_fiber_check(components: Sequence[DivisorClass]) -> FiberVerdict:
    """Check a conic-bundle fiber decomposition.

    The total class must be a fiber class (F.F = 0, K.F = -2); the
    decomposition is valid iff it is a single rational class or exactly two
    (-1)-classes crossing transversally in one point.
    """
    if not components:
        raise ValueError("no fiber components given")
    model = components[0].model
    total = components[0]
    for c in components[1:]:
        total = total + c
    k = model.canonical
    if intersect(total, total) != 0 or intersect(k, total) != -2:
        raise ValueError("total class is not a fiber class (needs F.F = 0, K.F = -2)")
    if len(components) == 1:
        if adjunction_genus(components[0]) == 0:
            return FiberVerdict(True, "irreducible rational fiber")
        return FiberVerdict(False, "irreducible fiber has positive genus")
    if len(components) == 2:
        a, b = components
        if intersect(a, a) != -1 or intersect(b, b) != -1:
            return FiberVerdict(False, "reducible fiber components must be (-1)-classes")
        if intersect(a, b) != 1:
            return FiberVerdict(False, "the two components must meet transversally once")
        return FiberVerdict(True, "two (-1)-curves crossing transversally")
    return FiberVerdict(
        False, f"a singular fiber has exactly two components, got {len(components)}"
    )


def trace_to_dict(trace: ReductionTrace) -> dict:
    """JSON-facing description of a reduction run."""
    return {
        "steps": [
            {
                "rank_before": step.model_before.rank,
                "orbit": [list(c.coords) for c in step.orbit],
                "case": step.case.value,
            }
            for step in trace.steps
        ],
        "terminal": {
            "endpoint": str(trace.endpoint),
            "endpoint_detail": trace.endpoint_detail,
            "K2": trace.final_model.k_squared(),
            "rank": trace.final_model.rank,
            "invariant_rank": len(invariant_subspace(trace.final_action)),
        },
    }
