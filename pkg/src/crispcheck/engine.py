"""The crisp engine: certificates, witnesses, refutation search, and the
permanence calculus for deriving new certificates from old ones.

Every certificate this module emits re-verifies from scratch through
`verify_certificate`; every witness through `verify_witness`.  A NotFound
from a certificate search is never interpreted as NotCrisp: split
retractions are sufficient for crispness, not necessary.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

from .algebras import (FPAlgebra, RingMap, compose, identity_map,
                       product_algebra, product_map, product_of_maps, pushout,
                       zariski_cover_piece)
from .fpmodules import (FPModule, ModuleMap, NotFiniteOverBase, cyclic_module,
                        free_module, kernel_of_map, cokernel_of_map,
                        module_presentation_of_target, submodule_membership,
                        tensor_kernel)
from .ideals import Ideal
from .poly import Poly
from .primes import PrimePoint
from .vectors import Vec
from .verdicts import (BaseChangeCert, CancelLeftCert, Certificate,
                       CompositionCert, CrispVerdict, DEFAULT_BUDGET,
                       DescendedAlongCert, EmptyFiberWitness,
                       FaithfullyFlatCert, FiniteDirectSumCert,
                       LinearSystemWitness, LocalizationStableCert,
                       ModuleWitness, NotInjectiveWitness, ProductGarbageCert,
                       SearchBudget, SplitRetractionCert, Witness)


class NotARetraction(ValueError):
    pass


class HintRejected(ValueError):
    pass


class RuleSideConditionFailed(ValueError):
    pass


# -- certification ---------------------------------------------------------


def certify_polynomial_retraction(phi: RingMap, psi: RingMap) -> SplitRetractionCert:
    """User supplies a ring retraction ψ: B -> A; the engine verifies
    ψ∘φ = id on generators (a ring retraction is in particular an A-module
    retraction, so split injective and hence crisp)."""
    if not (psi.source.same_presentation(phi.target)
            and psi.target.same_presentation(phi.source)):
        raise NotARetraction("retraction endpoints do not match the map")
    composite = compose(phi, psi)
    for image, gen in zip(composite.images, phi.source.gens()):
        if not phi.source.elements_equal(image, gen):
            raise NotARetraction(f"psi∘phi sends {gen} to {image}")
    return SplitRetractionCert(phi, "user-supplied ring retraction verified on generators",
                               ring_retraction=psi)


def _retraction_system(phi: RingMap):
    """The A-linear system whose solvability is existence of an A-module
    retraction of a module-finite phi.  Rows: one per relation column of
    B-as-A-module (transposed), plus the row sending the coordinates of 1_B
    to 1.  Unknowns: the retraction's values on the module generators."""
    bam = module_presentation_of_target(phi)
    a = phi.source
    s = bam.module.rank
    rows: list[list[Poly]] = []
    rhs: list[Poly] = []
    for rho in bam.module.relations:
        rows.append([rho.component(i) for i in range(s)])
        rhs.append(a.zero())
    unit = bam.unit_map.columns[0]
    rows.append([unit.component(i) for i in range(s)])
    rhs.append(a.one())
    return bam, rows, rhs


def solve_linear_system(rows: list[list[Poly]], rhs: list[Poly],
                        base: FPAlgebra) -> list[Poly] | None:
    """One solution over the algebra of C·x = b, or None (decided exactly by
    module membership of b in the column module of C)."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    ring = base.ambient
    if m == 0:
        return [base.zero()] * n
    cols = []
    for j in range(n):
        cols.append(Vec.from_polys([rows[i][j] for i in range(m)], m))
    target = free_module(base, m)
    b_vec = Vec.from_polys(rhs, m)
    return submodule_membership(b_vec, cols, target.full_relations(), base)


def certify_split_retraction(phi: RingMap) -> SplitRetractionCert | None:
    """Search for an A-module retraction of B along a module-finite phi by
    solving the retraction system over A.  NotFound (None) is not NotCrisp."""
    bam, rows, rhs = _retraction_system(phi)
    solution = solve_linear_system(rows, rhs, phi.source)
    if solution is None:
        return None
    return SplitRetractionCert(
        phi, "module retraction found by solving the retraction system",
        module_values=solution)


def certify_faithfully_flat(phi: RingMap,
                            free_basis: Optional[Sequence[Poly]] = None,
                            zariski: Optional[Sequence[Poly]] = None,
                            pieces: Optional[Sequence[RingMap]] = None
                            ) -> FaithfullyFlatCert:
    """Verify a faithful-flatness hint.  FreeBasis: the elements are an
    A-module basis of B.  ZariskiCover: B is the product of the one-element
    localizations A[u_i]/(u_i f_i - 1) and the f_i generate the unit ideal."""
    if (free_basis is None) == (zariski is None):
        raise HintRejected("supply exactly one of free_basis / zariski")
    a = phi.source
    if free_basis is not None:
        basis = [b if b.ring == phi.target.ambient else b.rename_into(phi.target.ambient)
                 for b in free_basis]
        if not basis:
            raise HintRejected("a free basis must be nonempty")
        bam = module_presentation_of_target(phi)
        if bam.module.rank == 0:
            raise HintRejected("target is the zero ring")
        cols = [bam.coordinates(b) for b in basis]
        free_src = free_module(a, len(basis))
        u = ModuleMap(free_src, bam.module, cols, check=False)
        k, _ = kernel_of_map(u)
        if not k.is_zero_module():
            raise HintRejected("claimed basis is not independent over the source")
        if not cokernel_of_map(u).is_zero_module():
            raise HintRejected("claimed basis does not generate the target")
        return FaithfullyFlatCert(phi, f"free module basis of rank {len(basis)} verified",
                                  free_basis=basis)
    fs = [f if f.ring == a.ambient else f.rename_into(a.ambient) for f in zariski]
    unit_test = Ideal(a.ambient, fs + list(a.relations.generators))
    if not unit_test.contains_one():
        raise HintRejected("cover elements do not generate the unit ideal")
    if pieces is None:
        piece_maps = [zariski_cover_piece(a, f, f"u{i + 1}")[1]
                      for i, f in enumerate(fs)]
        canonical_map, _ = product_map(piece_maps)
        if not phi.equals(canonical_map):
            raise HintRejected("map differs from the canonical cover structure map")
    else:
        piece_maps = list(pieces)
        if len(piece_maps) != len(fs):
            raise HintRejected("one localization piece per cover element required")
        for m, f in zip(piece_maps, fs):
            problem = _localization_piece_defect(m, f)
            if problem:
                raise HintRejected(problem)
        canonical_map, _ = product_map(piece_maps)
        if not phi.equals(canonical_map):
            raise HintRejected("map is not the product of the given pieces")
    return FaithfullyFlatCert(phi, "Zariski cover: unit ideal and product structure verified",
                              zariski=fs, pieces=piece_maps)


def _localization_piece_defect(m: RingMap, f: Poly) -> str | None:
    """None when m is structurally A -> A[w]/(I + (w·f - 1)); else a reason."""
    a, b = m.source, m.target
    a_vars = set(a.ambient.variables)
    extra = [v for v in b.ambient.variables if v not in a_vars]
    if len(extra) != 1 or b.ambient.nvars != a.ambient.nvars + 1:
        return "piece does not adjoin exactly one inverse variable"
    w = extra[0]
    expected = [g.rename_into(b.ambient) for g in a.relations.generators]
    expected.append(b.ambient.var(w) * f.rename_into(b.ambient) - b.ambient.one())
    if Ideal(b.ambient, expected).groebner() != b.relations.groebner():
        return "piece relations are not (w·f - 1) over the source"
    for im, v in zip(m.images, a.ambient.variables):
        if not b.elements_equal(im, b.ambient.var(v)):
            return "piece structure map does not fix the source generators"
    return None


def zariski_cover(a: FPAlgebra, fs: Sequence[Poly]):
    """The canonical cover A -> prod A[u_i]/(u_i f_i - 1)."""
    maps = []
    for i, f in enumerate(fs):
        _, m = zariski_cover_piece(a, f, f"u{i + 1}")
        maps.append(m)
    the_map, prod = product_map(maps)
    return prod, the_map


def identity_certificate(phi: RingMap) -> SplitRetractionCert:
    if not phi.is_identity():
        raise NotARetraction("map is not the identity")
    return SplitRetractionCert(phi, "identity map retracts itself",
                               ring_retraction=identity_map(phi.source))


# -- verification -----------------------------------------------------------


def verify_certificate(cert: Certificate) -> tuple[bool, str]:
    """Re-check a certificate from scratch, recursing through derived ones."""
    try:
        return _verify_cert(cert)
    except Exception as exc:        # any structural failure invalidates
        return False, f"verification error: {exc}"


def _verify_cert(cert: Certificate) -> tuple[bool, str]:
    phi = cert.subject
    if isinstance(cert, SplitRetractionCert):
        if cert.ring_retraction is not None:
            psi = cert.ring_retraction
            composite = compose(phi, psi)
            for image, gen in zip(composite.images, phi.source.gens()):
                if not phi.source.elements_equal(image, gen):
                    return False, "ring retraction fails psi∘phi = id"
            return True, "ring retraction re-checked"
        bam = module_presentation_of_target(phi)
        values = cert.module_values
        if len(values) != bam.module.rank:
            return False, "retraction has the wrong number of values"
        a = phi.source
        for rho in bam.module.relations:
            total = a.zero()
            for i, v in enumerate(values):
                total = total + rho.component(i) * v
            if not a.is_zero_elt(total):
                return False, "module retraction is not A-linear on a relation"
        unit = bam.unit_map.columns[0]
        total = a.zero()
        for i, v in enumerate(values):
            total = total + unit.component(i) * v
        if not a.elements_equal(total, a.one()):
            return False, "module retraction does not send 1 to 1"
        return True, "module retraction re-checked"
    if isinstance(cert, FaithfullyFlatCert):
        try:
            certify_faithfully_flat(phi, free_basis=cert.free_basis,
                                    zariski=cert.zariski, pieces=cert.pieces)
        except HintRejected as exc:
            return False, str(exc)
        return True, "faithful flatness evidence re-checked"
    if isinstance(cert, CompositionCert):
        ok, why = _verify_cert(cert.first)
        if not ok:
            return False, f"first factor: {why}"
        ok, why = _verify_cert(cert.second)
        if not ok:
            return False, f"second factor: {why}"
        if not cert.first.subject.target.same_presentation(cert.second.subject.source):
            return False, "factors are not composable"
        if not phi.equals(compose(cert.first.subject, cert.second.subject)):
            return False, "subject is not the composite of the factors"
        return True, "composition re-checked"
    if isinstance(cert, BaseChangeCert):
        ok, why = _verify_cert(cert.inner)
        if not ok:
            return False, f"inner: {why}"
        po = pushout(cert.inner.subject, cert.along)
        if not phi.equals(po.from_base):
            return False, "subject is not the pushout of the inner map"
        return True, "base change re-checked"
    if isinstance(cert, ProductGarbageCert):
        ok, why = _verify_cert(cert.inner)
        if not ok:
            return False, f"inner: {why}"
        factors = list(cert.others)
        factors.insert(cert.index, cert.inner.subject)
        canonical, _ = product_map(factors)
        if not phi.equals(canonical):
            return False, "subject is not the canonical map into the product"
        return True, "garbage principle re-checked"
    if isinstance(cert, FiniteDirectSumCert):
        for i, part in enumerate(cert.parts):
            ok, why = _verify_cert(part)
            if not ok:
                return False, f"factor {i}: {why}"
        canonical, _, _ = product_of_maps([p.subject for p in cert.parts])
        if not phi.equals(canonical):
            return False, "subject is not the product of the factors"
        return True, "finite product re-checked"
    if isinstance(cert, DescendedAlongCert):
        ok, why = _verify_cert(cert.descent_cert)
        if not ok:
            return False, f"descent map: {why}"
        ok, why = _verify_cert(cert.pushed_cert)
        if not ok:
            return False, f"pushed map: {why}"
        po = pushout(phi, cert.descent_cert.subject)
        if not cert.pushed_cert.subject.equals(po.from_base):
            return False, "pushed certificate is not about the base-changed map"
        return True, "descent along a crisp map re-checked"
    if isinstance(cert, CancelLeftCert):
        ok, why = _verify_cert(cert.whole)
        if not ok:
            return False, f"composite: {why}"
        if not cert.whole.subject.equals(compose(phi, cert.right)):
            return False, "stored factorisation does not recompose"
        return True, "left cancellation re-checked"
    if isinstance(cert, LocalizationStableCert):
        ok, why = _verify_cert(cert.inner)
        if not ok:
            return False, f"global certificate: {why}"
        return True, "localization of a certified map (stable under base change)"
    return False, f"unknown certificate kind {cert.kind}"


def verify_witness(witness: Witness) -> tuple[bool, str]:
    try:
        return _verify_witness(witness)
    except Exception as exc:
        return False, f"verification error: {exc}"


def _verify_witness(witness: Witness) -> tuple[bool, str]:
    phi = witness.subject
    a, b = phi.source, phi.target
    if isinstance(witness, NotInjectiveWitness):
        if a.is_zero_elt(witness.element):
            return False, "element is zero in the source"
        if not b.is_zero_elt(phi.apply(witness.element)):
            return False, "element does not map to zero"
        return True, "kernel element re-checked"
    if isinstance(witness, EmptyFiberWitness):
        p = witness.prime
        s = witness.multiplier
        if p.contains(s):
            return False, "multiplier lies in the prime"
        extended = Ideal(b.ambient,
                         [phi.apply(g) for g in p.generators]
                         + list(b.relations.generators))
        if not extended.contains(phi.apply(s)):
            return False, "multiplier does not kill the fiber"
        return True, "empty fiber re-checked: kappa(p)⊗B = 0"
    if isinstance(witness, ModuleWitness):
        m = witness.module
        if m.is_zero_element(witness.z):
            return False, "witness element is zero in M"
        image = Vec.from_polys([phi.apply(p) for p in witness.z.components()],
                               m.rank)
        from .fpmodules import base_change_module
        mb = base_change_module(m, phi)
        if not mb.is_zero_element(image):
            return False, "witness element does not die in M⊗B"
        return True, "module witness re-checked: z ≠ 0 and z⊗1 = 0"
    if isinstance(witness, AlgebraWitness):
        quot = Ideal(a.ambient, witness.ideal_gens + list(a.relations.generators))
        if quot.contains(witness.z):
            return False, "element is zero in the quotient algebra"
        extended = Ideal(b.ambient,
                         [phi.apply(g) for g in witness.ideal_gens]
                         + list(b.relations.generators))
        if not extended.contains(phi.apply(witness.z)):
            return False, "element does not die after tensoring"
        return True, "algebra witness re-checked"
    if isinstance(witness, LinearSystemWitness):
        sol = witness.solution_over_target
        for row, rhs in zip(witness.rows, witness.rhs):
            total = b.zero()
            for c, x in zip(row, sol):
                total = total + phi.apply(c) * x
            if not b.elements_equal(total, phi.apply(rhs)):
                return False, "stored solution fails over the target"
        if solve_linear_system(witness.rows, witness.rhs, a) is not None:
            return False, "system is solvable over the source after all"
        return True, "linear system witness re-checked"
    return False, f"unknown witness kind {witness.kind}"


# -- refutation search -------------------------------------------------------


def _monomial_ideals(ring, max_degree: int):
    """Single-monomial ideals in a documented deterministic order:
    by total degree, then by the ring order."""
    n = ring.nvars

    def monomials(total: int, nvars: int):
        if nvars == 0:
            if total == 0:
                yield ()
            return
        for head in range(total + 1):
            for tail in monomials(total - head, nvars - 1):
                yield (head,) + tail

    for d in range(1, max_degree + 1):
        for exp in sorted(monomials(d, n), key=ring.order.key):
            yield [ring.monomial(exp)]


def fiber_multiplier(phi: RingMap, p: PrimePoint) -> Poly | None:
    """s outside p with phi(s) in p·B, i.e. a certificate that the fiber
    algebra kappa(p)⊗B is the zero ring; None when the fiber is nonempty."""
    contraction = phi.contract_extended_ideal(p.generators)
    for g in contraction.generators:
        if not p.contains(g):
            return phi.source.nf(g)
    return None


def cyclic_quotient_witness(phi: RingMap, ideal_gens: list[Poly]) -> Poly | None:
    """z with z ≠ 0 in A/J and z ↦ 0 in B/JB, via the contraction of J·B."""
    a = phi.source
    quot = Ideal(a.ambient, ideal_gens + list(a.relations.generators))
    if quot.contains_one():
        return None               # A/J is the zero module
    contraction = phi.contract_extended_ideal(ideal_gens)
    for g in contraction.generators:
        if not quot.contains(g):
            return a.nf(g)
    return None


def refute_crisp(phi: RingMap, budget: SearchBudget = DEFAULT_BUDGET,
                 primes: Sequence[PrimePoint] = (),
                 modules: Sequence[FPModule] = (),
                 ideals: Sequence[list[Poly]] = (),
                 threads: int = 1) -> tuple[Optional[Witness], dict]:
    """Budgeted search for a NotCrisp witness.  Stages, in order:
    (a) fiber emptiness at the supplied primes, (b) injectivity of phi,
    (c) cyclic quotients A/J for monomial ideals up to the degree budget and
    any supplied ideals, (d) supplied modules.  Returns the first certified
    witness in candidate order; NotFound is an explicit budget report."""
    deadline = time.monotonic() + budget.time_limit_ms / 1000.0
    report = {"stages": [], "candidates_tried": 0, "exhausted": False}

    def out_of_time() -> bool:
        return time.monotonic() > deadline

    # stage (a): fibers at the supplied primes
    for p in primes:
        report["candidates_tried"] += 1
        s = fiber_multiplier(phi, p)
        if s is not None:
            report["stages"].append("fiber")
            return EmptyFiberWitness(phi, p, s), report
        if out_of_time():
            return None, _exhausted(report, "fiber")
    report["stages"].append("fiber")

    # stage (b): injectivity of phi itself
    report["candidates_tried"] += 1
    ker = phi.kernel_witness()
    if ker is not None:
        report["stages"].append("injectivity")
        return NotInjectiveWitness(phi, ker), report
    report["stages"].append("injectivity")
    if out_of_time():
        return None, _exhausted(report, "injectivity")

    # stage (c): cyclic monomial quotients, then supplied ideals
    candidates: list[list[Poly]] = []
    for gens in _monomial_ideals(phi.source.ambient, budget.max_degree):
        if report["candidates_tried"] + len(candidates) >= budget.max_candidates:
            break
        candidates.append(gens)
    for gens in ideals:
        if report["candidates_tried"] + len(candidates) >= budget.max_candidates:
            break
        candidates.append(list(gens))

    def try_cyclic(gens: list[Poly]):
        return cyclic_quotient_witness(phi, gens)

    results = _run_indexed(try_cyclic, candidates, threads)
    for gens, z in results:
        report["candidates_tried"] += 1
        if z is not None:
            report["stages"].append("cyclic")
            witness_module = cyclic_module(phi.source, gens)
            return ModuleWitness(phi, witness_module, Vec.from_poly(z)), report
        if out_of_time():
            return None, _exhausted(report, "cyclic")
    report["stages"].append("cyclic")

    # stage (d): supplied modules, exact kernel computation
    for m in modules:
        if m.rank > budget.max_rank:
            continue
        if report["candidates_tried"] >= budget.max_candidates:
            return None, _exhausted(report, "modules")
        report["candidates_tried"] += 1
        gens = tensor_kernel(m, phi)
        if gens:
            report["stages"].append("modules")
            return ModuleWitness(phi, m, gens[0]), report
        if out_of_time():
            return None, _exhausted(report, "modules")
    report["stages"].append("modules")
    return None, report


def _exhausted(report: dict, stage: str) -> dict:
    report["exhausted"] = True
    report["exhausted_at"] = stage
    return report


def _run_indexed(fn: Callable, items: list, threads: int):
    """Evaluate fn over items, merging by index so the first hit is
    schedule-independent."""
    if threads <= 1 or len(items) <= 1:
        return [(item, fn(item)) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        values = list(pool.map(fn, items))
    return list(zip(items, values))


# -- the standard decision pipeline ------------------------------------------


def check_crisp(phi: RingMap, budget: SearchBudget = DEFAULT_BUDGET,
                primes: Sequence[PrimePoint] = (),
                modules: Sequence[FPModule] = (),
                threads: int = 1) -> CrispVerdict:
    """Certify or refute within budget: identity, then the finite-dimensional
    decision procedure, then a module-finite retraction search, then the
    refutation stages; Unknown carries the exhausted budget."""
    if phi.is_identity():
        return CrispVerdict.crisp(identity_certificate(phi))
    from .artinian import decide_crisp_artinian, is_finite_dimensional
    if is_finite_dimensional(phi.source) and is_finite_dimensional(phi.target):
        return decide_crisp_artinian(phi)
    if phi.finiteness().finite:
        cert = certify_split_retraction(phi)
        if cert is not None:
            return CrispVerdict.crisp(cert)
    witness, report = refute_crisp(phi, budget, primes=primes, modules=modules,
                                   threads=threads)
    if witness is not None:
        return CrispVerdict.not_crisp(witness)
    return CrispVerdict.unknown({"budget": budget.to_json(), **report})


def localize_and_check(phi: RingMap, p: PrimePoint,
                       budget: SearchBudget = DEFAULT_BUDGET,
                       certificate: Optional[Certificate] = None) -> CrispVerdict:
    """Crispness of A_p -> A_p ⊗ B.  A local NotCrisp upgrades to a global
    witness (crispness is local); a local Crisp needs a global certificate
    and does not upgrade on its own."""
    s = fiber_multiplier(phi, p)
    if s is not None:
        return CrispVerdict.not_crisp(EmptyFiberWitness(phi, p, s))
    a = phi.source
    tried = 0
    for gens in _monomial_ideals(a.ambient, budget.max_degree):
        if tried >= budget.max_candidates:
            break
        if not all(p.contains(g) for g in gens):
            continue              # only ideals inside p localize nontrivially
        tried += 1
        z = cyclic_quotient_witness_local(phi, gens, p)
        if z is not None:
            return CrispVerdict.not_crisp(
                ModuleWitness(phi, cyclic_module(a, gens), Vec.from_poly(z)))
    if certificate is not None:
        ok, _ = verify_certificate(certificate)
        if ok:
            local = LocalizationStableCert(phi, f"certified map localized at {p}",
                                           certificate, p)
            return CrispVerdict.crisp(local)
    return CrispVerdict.unknown({"budget": budget.to_json(),
                                 "prime": str(p), "candidates": tried})


def cyclic_quotient_witness_local(phi: RingMap, ideal_gens: list[Poly],
                                  p: PrimePoint) -> Poly | None:
    """s outside p with s·1 = 0 in (B/JB)_p for J inside p; such an s is
    also a certified global witness element in A/J."""
    contraction = phi.contract_extended_ideal(ideal_gens)
    for g in contraction.generators:
        if not p.contains(g):
            return phi.source.nf(g)
    return None


# -- the permanence calculus --------------------------------------------------


def derive_certificate(rule: str, **inputs) -> Certificate:
    """Emit a derived certificate whose trace records the rule.  Rules:
    Compose, CancelLeft, BaseChange, TensorStability (base change in
    algebra form), FiniteDirectSum, DescendAlong, ProductGarbage."""
    if rule == "Compose":
        first: Certificate = inputs["first"]
        second: Certificate = inputs["second"]
        if not first.subject.target.same_presentation(second.subject.source):
            raise RuleSideConditionFailed("certificates are not composable")
        subject = compose(first.subject, second.subject)
        return CompositionCert(subject, "composition of crisp maps is crisp",
                               first, second)
    if rule in ("BaseChange", "TensorStability"):
        inner: Certificate = inputs["inner"]
        along: RingMap = inputs["along"]
        if not along.source.same_presentation(inner.subject.source):
            raise RuleSideConditionFailed("base change must share the source")
        po = pushout(inner.subject, along)
        trace = ("crispness is stable under base change" if rule == "BaseChange"
                 else "tensor stability: base change in algebra form")
        return BaseChangeCert(po.from_base, trace, inner, along)
    if rule == "ProductGarbage":
        inner = inputs["inner"]
        others: list[RingMap] = list(inputs.get("others") or [inputs["extra"]])
        index: int = inputs.get("index", 0)
        for extra in others:
            if not extra.source.same_presentation(inner.subject.source):
                raise RuleSideConditionFailed("garbage factor must share the source")
        factors = list(others)
        factors.insert(index, inner.subject)
        subject, _ = product_map(factors)
        return ProductGarbageCert(subject, "garbage principle: one crisp factor "
                                  "certifies the whole product", inner, others, index)
    if rule == "FiniteDirectSum":
        parts: list[Certificate] = list(inputs["parts"])
        if not parts:
            raise RuleSideConditionFailed("empty product")
        subject, _, _ = product_of_maps([p.subject for p in parts])
        return FiniteDirectSumCert(subject, "finite product of crisp maps is crisp",
                                   parts)
    if rule == "CancelLeft":
        whole: Certificate = inputs["whole"]          # certificate for v∘u
        left: RingMap = inputs["left"]                # u
        right: RingMap = inputs["right"]              # v
        composite = compose(left, right)
        if not whole.subject.equals(composite):
            raise RuleSideConditionFailed("certified map is not the given composite")
        return CancelLeftCert(left, "left factor of a crisp composite is crisp",
                              whole, right)
    if rule == "DescendAlong":
        descent: Certificate = inputs["descent"]      # certificate for phi: A -> B
        subject: RingMap = inputs["subject"]          # psi: A -> R
        pushed: Certificate = inputs["pushed"]        # certificate for B -> B⊗R
        if not descent.subject.source.same_presentation(subject.source):
            raise RuleSideConditionFailed("descent map must share the source")
        po = pushout(subject, descent.subject)
        if not pushed.subject.equals(po.from_base):
            raise RuleSideConditionFailed("pushed certificate is about a different map")
        return DescendedAlongCert(subject, "crispness descends along crisp maps",
                                  descent, pushed)
    raise ValueError(f"unknown rule {rule!r}")
