"""Direct checkers for the properties that descend along crisp maps, and
the consistency harness asserting 'holds after base change ⇒ holds before'.

A VIOLATION from the harness is a soundness failure of the whole system
(it would contradict a proved descent statement), so the test suite treats
it as fatal, not as a finding.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Union

from .algebras import FPAlgebra, RingMap, pushout
from .differentials import is_unramified, kaehler_differentials
from .fitting import fitting_ideal, fitting_is_unit, fitting_is_zero
from .fpmodules import FPModule, base_change_module, module_presentation_of_target
from .ideals import Ideal
from .poly import Poly
from .primes import PrimePoint
from .verdicts import Certificate


class ScopeError(ValueError):
    """The requested check is outside the decidable scope for this instance."""


# -- flatness / projectivity via Fitting ideals ---------------------------


@dataclass
class FlatnessResult:
    kind: str                       # ProjectiveConstRank | NotFlat | Inconclusive
    rank: Optional[int] = None
    obstruction_index: Optional[int] = None
    obstruction: Optional[list[str]] = None

    @property
    def flat(self) -> Optional[bool]:
        if self.kind == "ProjectiveConstRank":
            return True
        if self.kind == "NotFlat":
            return False
        return None


def check_flat_fp(m: FPModule) -> FlatnessResult:
    """Projectivity of constant rank via Fitting ideals: rank r iff
    Fitt_{r-1} = 0 and Fitt_r = (1).  A proper nonzero Fitting ideal over a
    connected base refutes flatness; over a base not known to be connected
    the verdict is Inconclusive (the rank may just be non-constant)."""
    for i in range(m.rank + 1):
        if fitting_is_zero(m, i):
            continue
        if fitting_is_unit(m, i):
            return FlatnessResult("ProjectiveConstRank", rank=i)
        obstruction = [str(g) for g in fitting_ideal(m, i).generators]
        if m.base.connected:
            return FlatnessResult("NotFlat", obstruction_index=i,
                                  obstruction=obstruction)
        return FlatnessResult("Inconclusive", obstruction_index=i,
                              obstruction=obstruction)
    return FlatnessResult("ProjectiveConstRank", rank=m.rank)


# -- algebra-level checkers ------------------------------------------------


def finite_over_base(phi: RingMap):
    """Module-finiteness of the target over the source (= integrality for
    finitely presented algebras)."""
    return phi.finiteness()


def algebra_flatness(phi: RingMap) -> FlatnessResult:
    """Flatness of B as an A-module: Fitting test in the module-finite case,
    a structural localization test otherwise."""
    if phi.finiteness().finite:
        bam = module_presentation_of_target(phi)
        return check_flat_fp(bam.module)
    from .engine import _localization_piece_defect
    a, b = phi.source, phi.target
    extra = [v for v in b.ambient.variables if v not in set(a.ambient.variables)]
    if len(extra) == 1:
        # invertibility relations w·f - 1 present localizations, which are flat
        for rel in b.relations.generators:
            candidate = _extract_inverted_element(phi, rel, extra[0])
            if candidate is not None and _localization_piece_defect(phi, candidate) is None:
                return FlatnessResult("ProjectiveConstRank", rank=None)
    return FlatnessResult("Inconclusive")


def _extract_inverted_element(phi: RingMap, rel: Poly, w: str) -> Optional[Poly]:
    """If rel = w·f - 1 with f free of w, return f (in the source ring)."""
    b = phi.target.ambient
    w_idx = b._var_index[w]
    f_terms = {}
    const_seen = False
    for exp, c in rel.terms.items():
        if exp[w_idx] == 1:
            reduced = list(exp)
            reduced[w_idx] = 0
            f_terms[tuple(reduced)] = c
        elif sum(exp) == 0:
            const_seen = c == b.field.neg(b.field.one())
        else:
            return None
    if not const_seen or not f_terms:
        return None
    from .poly import Poly as P
    f_in_b = P(b, f_terms)
    try:
        return f_in_b.rename_into(phi.source.ambient)
    except Exception:
        return None


def check_unramified(phi: RingMap) -> bool:
    return is_unramified(phi)


def check_etale(phi: RingMap) -> Optional[bool]:
    """Étale = unramified + flat (finite presentation is built in); None when
    flatness is out of decidable scope."""
    if not is_unramified(phi):
        return False
    flat = algebra_flatness(phi).flat
    if flat is None:
        return None
    return flat


# -- smoothness at a fiber ---------------------------------------------------


def krull_dimension(a: FPAlgebra) -> int:
    """Combinatorial dimension of the staircase: the largest set of
    variables meeting no leading monomial's support."""
    leads = [g.lead()[0] for g in a.relations.groebner()]
    n = a.ambient.nvars
    supports = [frozenset(i for i, e in enumerate(exp) if e > 0) for exp in leads]
    if any(not s for s in supports):      # 1 in the ideal: empty scheme
        return -1
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            chosen = set(subset)
            if all(not s <= chosen for s in supports):
                return size
    return 0


@dataclass
class SmoothnessResult:
    kind: str            # Smooth | NotSmooth | Inconclusive
    fiber_dimension: Optional[int] = None
    detail: str = ""


class UnsupportedResidueField(ValueError):
    pass


def check_smooth_at_fiber(phi: RingMap, p: PrimePoint) -> SmoothnessResult:
    """Smoothness of the fiber over an asserted prime, via projectivity of
    the fiber's Kähler differentials at the expected rank.  Supported:
    maximal primes with finite residue algebra, and the generic point of a
    relation-free source."""
    a = phi.source
    zero_ideal = all(a.is_zero_elt(g) for g in p.generators)
    if zero_ideal and not a.relations.generators:
        fiber_map = phi
        expected = krull_dimension(phi.target) - krull_dimension(a)
    else:
        residue = FPAlgebra(a.ambient,
                            Ideal(a.ambient, list(a.relations.generators)
                                  + list(p.generators)), allow_zero=False)
        if residue.vector_space_basis() is None:
            raise UnsupportedResidueField(
                "fiber checks need a finite residue algebra or a generic point")
        quotient = RingMap(a, residue, residue.gens(), check=False)
        po = pushout(phi, quotient)
        fiber_map = po.from_base
        expected = krull_dimension(po.algebra)
        if po.algebra.is_zero_ring():
            return SmoothnessResult("NotSmooth", detail="empty fiber")
    omega = kaehler_differentials(fiber_map)
    if fiber_map.target.connected is None:
        fiber_map.target.connected = True      # fiber instances are asserted connected
    flat = check_flat_fp(omega)
    if flat.kind == "ProjectiveConstRank" and flat.rank == expected:
        return SmoothnessResult("Smooth", fiber_dimension=expected)
    if flat.kind == "NotFlat" or (flat.kind == "ProjectiveConstRank"
                                  and flat.rank != expected):
        return SmoothnessResult("NotSmooth", fiber_dimension=expected,
                                detail=f"differentials: {flat.kind} rank {flat.rank}")
    return SmoothnessResult("Inconclusive", fiber_dimension=expected)


# -- the consistency harness --------------------------------------------------


MODULE_TAGS = ("FinitelyGenerated", "FinitelyPresented", "Flat", "Projective",
               "VectorBundleConstRank")
ALGEBRA_TAGS = ("FiniteAlgebra", "FiniteTypeAlgebra", "FinitePresentationAlgebra",
                "Integral", "Unramified", "Etale", "SmoothAtFiber")


@dataclass
class ConsistencyReport:
    tag: str
    holds_after: Optional[bool]
    holds_before: Optional[bool]
    passed: bool                 # (after ⇒ before); vacuous when after is False
    violation: bool
    detail: str = ""

    def to_json(self):
        return {"tag": self.tag, "holds_after": self.holds_after,
                "holds_before": self.holds_before, "passed": self.passed,
                "violation": self.violation, "detail": self.detail}


def descent_consistency(phi: RingMap, certificate: Certificate,
                        subject: Union[FPModule, RingMap], tag: str,
                        rank: Optional[int] = None,
                        fiber: Optional[tuple[PrimePoint, PrimePoint]] = None
                        ) -> ConsistencyReport:
    """Check 'property after crisp base change ⇒ property before' on one
    instance.  A VIOLATION is a test failure of the whole system."""
    from .engine import verify_certificate
    ok, why = verify_certificate(certificate)
    if not ok:
        raise ScopeError(f"certificate does not verify: {why}")
    if isinstance(subject, FPModule):
        after = _module_property(base_change_module(subject, phi), tag, rank)
        before = _module_property(subject, tag, rank)
    else:
        po = pushout(subject, phi)
        after = _algebra_property(po.from_base, tag, fiber[1] if fiber else None)
        before = _algebra_property(subject, tag, fiber[0] if fiber else None)
    if after is None or not after:
        # antecedent not established (false or undecided): vacuous pass
        detail = "antecedent undecided" if after is None else "antecedent false"
        return ConsistencyReport(tag, after, before, True, False,
                                 f"implication vacuous: {detail}")
    if before is None:
        raise ScopeError(f"{tag} holds after base change but is undecidable before")
    violation = not before
    return ConsistencyReport(tag, after, before, not violation, violation)


def _module_property(m: FPModule, tag: str, rank: Optional[int]) -> Optional[bool]:
    if tag in ("FinitelyGenerated", "FinitelyPresented"):
        return True                      # representable modules are f.p.
    if tag in ("Flat", "Projective"):
        return check_flat_fp(m).flat
    if tag == "VectorBundleConstRank":
        result = check_flat_fp(m)
        if result.kind == "Inconclusive":
            return None
        return result.kind == "ProjectiveConstRank" and result.rank == rank
    raise ScopeError(f"unknown module tag {tag}")


def _algebra_property(structure: RingMap, tag: str,
                      at: Optional[PrimePoint]) -> Optional[bool]:
    if tag in ("FiniteAlgebra", "Integral"):
        return structure.finiteness().finite
    if tag in ("FiniteTypeAlgebra", "FinitePresentationAlgebra"):
        return True                      # f.p. by construction
    if tag == "Unramified":
        return check_unramified(structure)
    if tag == "Etale":
        return check_etale(structure)
    if tag == "SmoothAtFiber":
        if at is None:
            raise ScopeError("SmoothAtFiber needs a prime on each side")
        result = check_smooth_at_fiber(structure, at)
        if result.kind == "Inconclusive":
            return None
        return result.kind == "Smooth"
    raise ScopeError(f"unknown algebra tag {tag}")
