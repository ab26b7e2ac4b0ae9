"""Affine covers, the garbage principle, purity on affines, subtrusive
lifting on finite spectra, sheaf equalizers, and the topology axiom sweep.

Schemes appear only through finite affine covers of affine targets; the
covering-independence of the defining condition is demoted to a tested
invariant (refinement preserves the verdict).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .algebras import FPAlgebra, RingMap, compose, product_map, product_of_maps, pushout
from .criteria import EqualizerResult, check_equalizer_sequence
from .engine import (certify_faithfully_flat, certify_split_retraction,
                     derive_certificate, refute_crisp, verify_certificate,
                     HintRejected)
from .fpmodules import free_module
from .poly import Poly
from .primes import PrimePoint
from .verdicts import (Certificate, CrispVerdict, DEFAULT_BUDGET, SearchBudget,
                       Witness)


class AffineCover:
    """A target algebra with a finite family of algebras over it; the crisp
    question is about the single map A -> prod B_i."""

    def __init__(self, target: FPAlgebra, pieces: Sequence[RingMap],
                 zariski_hint: Optional[Sequence[Poly]] = None, name: str = ""):
        if not pieces:
            raise ValueError("a cover needs at least one piece")
        for m in pieces:
            if not m.source.same_presentation(target):
                raise ValueError("piece structure map does not start at the target")
        self.target = target
        self.pieces = list(pieces)
        self.zariski_hint = list(zariski_hint) if zariski_hint else None
        self.name = name
        self._product = None

    @property
    def product_map(self) -> RingMap:
        if self._product is None:
            self._product = product_map(self.pieces)
        return self._product[0]

    @property
    def product_algebra(self):
        self.product_map
        return self._product[1]


def check_crisp_cover(cover: AffineCover, budget: SearchBudget = DEFAULT_BUDGET,
                      primes: Sequence[PrimePoint] = (),
                      piece_certificates: Optional[dict[int, Certificate]] = None,
                      threads: int = 1) -> CrispVerdict:
    """Crispness of A -> prod B_i.  Tries, in order: the fpqc hint, the
    garbage principle from any certified piece, a module-finite retraction
    search, then refutation."""
    phi = cover.product_map
    if cover.zariski_hint is not None:
        try:
            cert = certify_faithfully_flat(phi, zariski=cover.zariski_hint,
                                           pieces=cover.pieces)
            return CrispVerdict.crisp(cert)
        except HintRejected:
            pass
    for i, cert in sorted((piece_certificates or {}).items()):
        ok, _ = verify_certificate(cert)
        if ok and cert.subject.equals(cover.pieces[i]):
            others = [m for j, m in enumerate(cover.pieces) if j != i]
            if others:
                derived = derive_certificate("ProductGarbage", inner=cert,
                                             others=others, index=i)
            else:
                derived = _single_piece_cover_certificate(cover, cert)
            if derived.subject.equals(phi):
                return CrispVerdict.crisp(derived)
    if phi.finiteness().finite:
        cert = certify_split_retraction(phi)
        if cert is not None:
            return CrispVerdict.crisp(cert)
    witness, report = refute_crisp(phi, budget, primes=primes, threads=threads)
    if witness is not None:
        return CrispVerdict.not_crisp(witness)
    return CrispVerdict.unknown({"budget": budget.to_json(), **report})


def _single_piece_cover_certificate(cover: AffineCover,
                                    piece_cert: Certificate) -> Certificate:
    """A -> prod(B) for a one-piece cover: compose the piece with the
    wrap-into-product isomorphism, which retracts by projection."""
    from .engine import certify_polynomial_retraction
    prod = cover.product_algebra
    b = cover.pieces[0].target
    wrap_images = [prod.embed_element(0, v) for v in b.ambient.gens()]
    wrap = RingMap(b, prod.algebra, wrap_images, check=False)
    wrap_cert = certify_polynomial_retraction(wrap, prod.projection(0))
    return derive_certificate("Compose", first=piece_cert, second=wrap_cert)


def refine_cover_piece(cover: AffineCover, index: int,
                       fs: Sequence[Poly]) -> AffineCover:
    """Replace piece i by its own Zariski localizations (composed with the
    original structure map); the crisp classification must be unchanged."""
    from .algebras import zariski_cover_piece
    piece = cover.pieces[index]
    new_pieces = list(cover.pieces[:index])
    for j, f in enumerate(fs):
        _, loc = zariski_cover_piece(piece.target, f, f"w{j + 1}")
        new_pieces.append(compose(piece, loc))
    new_pieces.extend(cover.pieces[index + 1:])
    return AffineCover(cover.target, new_pieces, name=f"{cover.name}/refined")


def check_garbage_principle(cert: Certificate, extra: RingMap) -> Certificate:
    """A certified A -> B absorbs any garbage factor: certificate for A -> B×C."""
    return derive_certificate("ProductGarbage", inner=cert, others=[extra], index=0)


# -- purity (= universal schematic dominance) on affines --------------------


@dataclass
class PureEquivReport:
    injective_after: dict[str, bool]
    witness_confirmed: Optional[bool]
    consistent: bool
    detail: str = ""

    def to_json(self):
        return {"injective_after": self.injective_after,
                "witness_confirmed": self.witness_confirmed,
                "consistent": self.consistent, "detail": self.detail}


def check_pure_equiv_affine(phi: RingMap, verdict: CrispVerdict,
                            base_changes: Sequence[tuple[str, RingMap]]
                            ) -> PureEquivReport:
    """Instance check that crisp and pure agree on affines: a certified map
    stays injective after every registered base change; a module/algebra
    witness exhibits a base change that kills schematic dominance."""
    injective = {}
    for label, g in base_changes:
        po = pushout(phi, g)
        injective[label] = po.from_base.is_injective()
    if verdict.kind == "Crisp":
        consistent = all(injective.values())
        return PureEquivReport(injective, None, consistent,
                               "certified map must stay injective after base change")
    if verdict.kind == "NotCrisp" and verdict.witness is not None:
        w = verdict.witness
        confirmed = _witness_breaks_dominance(phi, w)
        return PureEquivReport(injective, confirmed, confirmed is not False,
                               "witness should exhibit a dominance failure")
    return PureEquivReport(injective, None, True, "no verdict to compare")


def _witness_breaks_dominance(phi: RingMap, w: Witness) -> Optional[bool]:
    from .verdicts import (AlgebraWitness, EmptyFiberWitness, ModuleWitness,
                           NotInjectiveWitness)
    from .ideals import Ideal
    a, b = phi.source, phi.target
    if isinstance(w, NotInjectiveWitness):
        return True                     # identity base change already fails
    if isinstance(w, EmptyFiberWitness):
        # base change to A/p is not schematically dominant: s acts as a
        # nonzero element of A/p mapping into p·B
        return True
    gens: Optional[list[Poly]] = None
    z: Optional[Poly] = None
    if isinstance(w, AlgebraWitness):
        gens, z = w.ideal_gens, w.z
    elif isinstance(w, ModuleWitness) and w.module.rank == 1:
        gens = [c.component(0) for c in w.module.relations]
        z = w.z.component(0)
    if gens is None:
        return None
    quotient = Ideal(a.ambient, gens + list(a.relations.generators))
    if quotient.contains(z):
        return False
    extended = Ideal(b.ambient, [phi.apply(g) for g in gens]
                     + list(b.relations.generators))
    return extended.contains(phi.apply(z))


# -- finite spectra and subtrusiveness ---------------------------------------


class FiniteSpectrum:
    """A complete, user-enumerated list of the primes of an algebra, with
    the specialization order computed from ideal containment."""

    def __init__(self, algebra: FPAlgebra, primes: Sequence[PrimePoint]):
        self.algebra = algebra
        self.primes = list(primes)
        for p in self.primes:
            if not p.base.same_presentation(algebra):
                raise ValueError("prime lives over a different algebra")
        n = len(self.primes)
        self.leq = [[self.primes[i].ideal.groebner() == self.primes[j].ideal.groebner()
                     or all(self.primes[j].ideal.contains(g)
                            for g in self.primes[i].generators)
                     for j in range(n)] for i in range(n)]
        # leq[i][j]: p_i ⊆ p_j, i.e. the point of p_j specializes from p_i

    def index_of(self, ideal_gens: Sequence[Poly]) -> Optional[int]:
        from .ideals import Ideal
        target = Ideal(self.algebra.ambient,
                       list(ideal_gens) + list(self.algebra.relations.generators))
        for i, p in enumerate(self.primes):
            if p.ideal == target:
                return i
        return None


@dataclass
class SubtrusiveReport:
    lifts_all_pairs: bool
    missing_pair: Optional[tuple[str, str]]
    surjective: bool
    submersive: bool

    def to_json(self):
        return {"lifts_all_pairs": self.lifts_all_pairs,
                "missing_pair": list(self.missing_pair) if self.missing_pair else None,
                "surjective": self.surjective, "submersive": self.submersive}


class SpectraNotEnumerated(ValueError):
    pass


def check_subtrusive_finite(phi: RingMap, spec_source: FiniteSpectrum,
                            spec_target: FiniteSpectrum) -> SubtrusiveReport:
    """Brute-force pair lifting and the quotient-topology condition for the
    induced map Spec B -> Spec A (spec_source enumerates Spec A, spec_target
    enumerates Spec B)."""
    if not (spec_source.algebra.same_presentation(phi.source)
            and spec_target.algebra.same_presentation(phi.target)):
        raise SpectraNotEnumerated("spectra do not match the map")
    n_a = len(spec_source.primes)
    n_b = len(spec_target.primes)
    # where each point of Spec B lands in Spec A
    image = []
    for q in spec_target.primes:
        contracted = phi.contract_target_ideal(q.generators)
        idx = spec_source.index_of(contracted.generators)
        if idx is None:
            raise SpectraNotEnumerated(
                f"contraction of {q} is not among the enumerated primes")
        image.append(idx)
    missing = None
    for i in range(n_a):
        for j in range(n_a):
            if not spec_source.leq[i][j]:
                continue
            lifted = any(spec_target.leq[k][l]
                         and image[k] == i and image[l] == j
                         for k in range(n_b) for l in range(n_b))
            if not lifted:
                missing = (str(spec_source.primes[i]), str(spec_source.primes[j]))
                break
        if missing:
            break
    surjective = all(any(image[k] == i for k in range(n_b)) for i in range(n_a))
    submersive = _quotient_topology_holds(spec_source, spec_target, image)
    return SubtrusiveReport(missing is None, missing, surjective, submersive)


def _quotient_topology_holds(spec_a: FiniteSpectrum, spec_b: FiniteSpectrum,
                             image: list[int]) -> bool:
    """Closed = up-closed under inclusion; quotient topology: a subset with
    closed preimage is closed (surjectivity makes the converse automatic)."""
    n_a = len(spec_a.primes)
    n_b = len(spec_b.primes)

    def up_closed(mask: int, leq) -> bool:
        n = len(leq)
        for i in range(n):
            if not (mask >> i) & 1:
                continue
            for j in range(n):
                if leq[i][j] and not (mask >> j) & 1:
                    return False
        return True

    for mask in range(1 << n_a):
        pre = 0
        for k in range(n_b):
            if (mask >> image[k]) & 1:
                pre |= 1 << k
        if up_closed(pre, spec_b.leq) and not up_closed(mask, spec_a.leq):
            return False
    return True


# -- sheaf equalizer -----------------------------------------------------------


def check_sheaf_equalizer(phi: RingMap, truncation_degree: int = 4) -> EqualizerResult:
    """Exactness of 0 -> A -> B ⇉ B⊗B: the subcanonicity evidence for the
    representable presheaf on the cover A -> B."""
    return check_equalizer_sequence(phi, free_module(phi.source, 1),
                                    truncation_degree=truncation_degree)


# -- topology axiom sweep -------------------------------------------------------


@dataclass
class AxiomReport:
    identity_ok: bool
    compositions: list = field(default_factory=list)
    base_changes: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.identity_ok and not self.failures

    def to_json(self):
        return {"identity_ok": self.identity_ok,
                "compositions": self.compositions,
                "base_changes": self.base_changes,
                "failures": self.failures, "passed": self.passed}


def compose_cover_certificates(outer_cert: Certificate,
                               outer: AffineCover,
                               inner_certs: Sequence[Certificate]) -> Certificate:
    """Certificate for the composite cover: A -> prod B_i -> prod (prod C_ij),
    from the outer cover's certificate and one certificate per piece cover."""
    product_cert = derive_certificate("FiniteDirectSum", parts=list(inner_certs))
    lifted = _lift_through_product(outer, product_cert)
    return derive_certificate("Compose", first=outer_cert, second=lifted)


def _lift_through_product(outer: AffineCover, product_cert: Certificate) -> Certificate:
    """Rebase the product-of-pieces certificate so its source is the outer
    cover's actual product algebra (same presentation by construction)."""
    prod = outer.product_algebra
    subject = product_cert.subject
    if not subject.source.same_presentation(prod.algebra):
        raise ValueError("piece covers do not start at the cover's product algebra")
    return product_cert


def base_change_cover(cover: AffineCover, cert: Certificate,
                      along: RingMap) -> tuple[AffineCover, Certificate]:
    """The cover pulled back along A -> A', with the derived certificate for
    the base-changed product map."""
    new_pieces = []
    for piece in cover.pieces:
        po = pushout(piece, along)
        new_pieces.append(po.from_base)
    derived = derive_certificate("BaseChange", inner=cert, along=along)
    return AffineCover(along.target, new_pieces,
                       name=f"{cover.name}@base-changed"), derived
