"""Verdicts, certificates, witnesses and their canonical JSON form.

Every crispness query returns Crisp(certificate) | NotCrisp(witness) |
Unknown(budget report).  Certificates and witnesses are self-contained:
they embed full presentations so a third party can re-verify without this
tool, and `engine.verify_certificate` / `engine.verify_witness` re-check
them from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebras import FPAlgebra, RingMap
from .fpmodules import FPModule, ModuleMap
from .poly import Poly
from .primes import PrimePoint
from .vectors import Vec


@dataclass(frozen=True)
class SearchBudget:
    """Bounds for refutation searches; the paper quantifies over all modules,
    the artifact bounds the hunt."""
    max_rank: int = 3
    max_degree: int = 3
    max_candidates: int = 500
    time_limit_ms: int = 30000

    def __post_init__(self):
        if min(self.max_rank, self.max_degree, self.max_candidates,
               self.time_limit_ms) <= 0:
            raise ValueError("budget components must be positive")

    def to_json(self):
        return {"max_rank": self.max_rank, "max_degree": self.max_degree,
                "max_candidates": self.max_candidates,
                "time_limit_ms": self.time_limit_ms}


DEFAULT_BUDGET = SearchBudget()


# -- serialization helpers ----------------------------------------------


def algebra_json(a: FPAlgebra) -> dict:
    return {
        "field": str(a.field),
        "variables": list(a.ambient.variables),
        "relations": [str(g) for g in a.relations.generators],
    }


def map_json(phi: RingMap) -> dict:
    return {
        "source": algebra_json(phi.source),
        "target": algebra_json(phi.target),
        "images": [str(im) for im in phi.images],
    }


def module_json(m: FPModule) -> dict:
    return {
        "base": algebra_json(m.base),
        "rank": m.rank,
        "relation_columns": [[str(c.component(i)) for i in range(m.rank)]
                             for c in m.relations],
    }


def vec_json(v: Vec) -> list[str]:
    return [str(p) for p in v.components()]


def prime_json(p: PrimePoint) -> dict:
    return {
        "generators": [str(g) for g in p.generators],
        "primality_asserted": p.primality_asserted,
        "name": p.name,
    }


# -- certificates --------------------------------------------------------


class Certificate:
    """A re-checkable crispness certificate for a ring map."""

    kind: str = "?"

    def __init__(self, subject: RingMap, trace: str):
        self.subject = subject
        self.trace = trace

    def payload_json(self) -> dict:
        return {}

    def to_json(self) -> dict:
        return {"kind": self.kind, "subject": map_json(self.subject),
                "trace": self.trace, **self.payload_json()}


class SplitRetractionCert(Certificate):
    """Either a ring retraction ψ with ψ∘φ = id, or an A-module retraction
    of B presented as an A-module (values on the module generators)."""

    kind = "SplitRetraction"

    def __init__(self, subject: RingMap, trace: str,
                 ring_retraction: Optional[RingMap] = None,
                 module_values: Optional[list[Poly]] = None):
        super().__init__(subject, trace)
        if (ring_retraction is None) == (module_values is None):
            raise ValueError("exactly one retraction form required")
        self.ring_retraction = ring_retraction
        self.module_values = module_values

    def payload_json(self):
        if self.ring_retraction is not None:
            return {"mode": "ring", "retraction": map_json(self.ring_retraction)}
        return {"mode": "module",
                "retraction_values": [str(v) for v in self.module_values]}


class FaithfullyFlatCert(Certificate):
    kind = "FaithfullyFlat"

    def __init__(self, subject: RingMap, trace: str,
                 free_basis: Optional[list[Poly]] = None,
                 zariski: Optional[list[Poly]] = None,
                 pieces: Optional[list[RingMap]] = None):
        super().__init__(subject, trace)
        if (free_basis is None) == (zariski is None):
            raise ValueError("exactly one evidence form required")
        self.free_basis = free_basis
        self.zariski = zariski
        self.pieces = pieces          # the one-element localizations A -> B_i

    def payload_json(self):
        if self.free_basis is not None:
            return {"evidence": "free_basis",
                    "basis": [str(b) for b in self.free_basis]}
        return {"evidence": "zariski_cover",
                "cover_elements": [str(f) for f in self.zariski],
                "pieces": [map_json(m) for m in (self.pieces or [])]}


class CompositionCert(Certificate):
    kind = "Composition"

    def __init__(self, subject: RingMap, trace: str,
                 first: Certificate, second: Certificate):
        super().__init__(subject, trace)
        self.first = first
        self.second = second

    def payload_json(self):
        return {"first": self.first.to_json(), "second": self.second.to_json()}


class BaseChangeCert(Certificate):
    kind = "BaseChange"

    def __init__(self, subject: RingMap, trace: str,
                 inner: Certificate, along: RingMap):
        super().__init__(subject, trace)
        self.inner = inner
        self.along = along

    def payload_json(self):
        return {"inner": self.inner.to_json(), "along": map_json(self.along)}


class ProductGarbageCert(Certificate):
    """A -> B_1×...×B_n is crisp when A -> B_i is for one factor; the other
    factors are arbitrary garbage."""

    kind = "ProductGarbage"

    def __init__(self, subject: RingMap, trace: str, inner: Certificate,
                 others: Sequence[RingMap], index: int):
        super().__init__(subject, trace)
        self.inner = inner
        self.others = list(others)    # structure maps of the garbage factors
        self.index = index            # slot of the certified factor

    def payload_json(self):
        return {"inner": self.inner.to_json(),
                "others": [map_json(m) for m in self.others],
                "certified_slot": self.index}


class FiniteDirectSumCert(Certificate):
    """prod A_i -> prod B_i from certified factors (finite products of
    crisp maps are crisp)."""

    kind = "FiniteDirectSum"

    def __init__(self, subject: RingMap, trace: str, parts: Sequence[Certificate]):
        super().__init__(subject, trace)
        self.parts = list(parts)

    def payload_json(self):
        return {"parts": [c.to_json() for c in self.parts]}


class DescendedAlongCert(Certificate):
    """ψ: A -> R is crisp because some crisp φ: A -> B base-changes it to a
    certified map B -> B⊗R."""

    kind = "DescendedAlong"

    def __init__(self, subject: RingMap, trace: str,
                 descent_cert: Certificate, pushed_cert: Certificate):
        super().__init__(subject, trace)
        self.descent_cert = descent_cert
        self.pushed_cert = pushed_cert

    def payload_json(self):
        return {"descent": self.descent_cert.to_json(),
                "pushed": self.pushed_cert.to_json()}


class CancelLeftCert(Certificate):
    """u is crisp because a composite v∘u is (left cancellation)."""

    kind = "CancelLeft"

    def __init__(self, subject: RingMap, trace: str,
                 whole: Certificate, right: RingMap):
        super().__init__(subject, trace)
        self.whole = whole            # certificate for v∘u
        self.right = right            # v

    def payload_json(self):
        return {"whole": self.whole.to_json(), "right_factor": map_json(self.right)}


class LocalizationStableCert(Certificate):
    """Crispness of A_p -> A_p⊗B inherited from a global certificate by
    stability under base change."""

    kind = "LocalizationStable"

    def __init__(self, subject: RingMap, trace: str,
                 inner: Certificate, prime: PrimePoint):
        super().__init__(subject, trace)
        self.inner = inner
        self.prime = prime

    def payload_json(self):
        return {"inner": self.inner.to_json(), "prime": prime_json(self.prime)}


# -- witnesses ------------------------------------------------------------


class Witness:
    kind: str = "?"

    def __init__(self, subject: RingMap):
        self.subject = subject

    def payload_json(self) -> dict:
        return {}

    def to_json(self) -> dict:
        return {"kind": self.kind, "subject": map_json(self.subject),
                **self.payload_json()}


class ModuleWitness(Witness):
    """M ≠ 0 with a nonzero z mapping to 0 in M⊗B."""

    kind = "ModuleWitness"

    def __init__(self, subject: RingMap, module: FPModule, z: Vec):
        super().__init__(subject)
        self.module = module
        self.z = z

    def payload_json(self):
        return {"module": module_json(self.module), "element": vec_json(self.z)}


class AlgebraWitness(Witness):
    """An A-algebra R = A/J with R -> R⊗B not injective at z."""

    kind = "AlgebraWitness"

    def __init__(self, subject: RingMap, ideal_gens: list[Poly], z: Poly):
        super().__init__(subject)
        self.ideal_gens = ideal_gens
        self.z = z

    def payload_json(self):
        return {"quotient_ideal": [str(g) for g in self.ideal_gens],
                "element": str(self.z)}


class LinearSystemWitness(Witness):
    """A system C·x = a over A, solvable over B but not over A."""

    kind = "LinearSystemWitness"

    def __init__(self, subject: RingMap, rows: list[list[Poly]], rhs: list[Poly],
                 solution_over_target: list[Poly]):
        super().__init__(subject)
        self.rows = rows
        self.rhs = rhs
        self.solution_over_target = solution_over_target

    def payload_json(self):
        return {"matrix": [[str(c) for c in row] for row in self.rows],
                "rhs": [str(b) for b in self.rhs],
                "solution_over_target": [str(s) for s in self.solution_over_target]}


class EmptyFiberWitness(Witness):
    """κ(p)⊗B = 0: the spectrum map misses p, so the map cannot be crisp."""

    kind = "EmptyFiberWitness"

    def __init__(self, subject: RingMap, prime: PrimePoint, multiplier: Poly):
        super().__init__(subject)
        self.prime = prime
        self.multiplier = multiplier      # s outside p with phi(s) in p·B

    def payload_json(self):
        return {"prime": prime_json(self.prime), "multiplier": str(self.multiplier)}


class NotInjectiveWitness(Witness):
    kind = "NotInjectiveWitness"

    def __init__(self, subject: RingMap, element: Poly):
        super().__init__(subject)
        self.element = element

    def payload_json(self):
        return {"element": str(self.element)}


# -- the verdict -----------------------------------------------------------


@dataclass
class CrispVerdict:
    kind: str                               # "Crisp" | "NotCrisp" | "Unknown"
    certificate: Optional[Certificate] = None
    witness: Optional[Witness] = None
    budget_report: Optional[dict] = None

    @staticmethod
    def crisp(cert: Certificate) -> "CrispVerdict":
        return CrispVerdict("Crisp", certificate=cert)

    @staticmethod
    def not_crisp(witness: Witness) -> "CrispVerdict":
        return CrispVerdict("NotCrisp", witness=witness)

    @staticmethod
    def unknown(report: dict) -> "CrispVerdict":
        return CrispVerdict("Unknown", budget_report=report)

    def to_json(self) -> dict:
        out: dict = {"verdict": self.kind}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.budget_report is not None:
            out["budget_report"] = self.budget_report
        return out
