"""Executable forms of the equivalent characterisations of crispness:
tensor injectivity, equalizer sequences, complex transfer, cohomology
injectivity, Hom-exactness and linear-system solvability.

Each check is a necessary condition (or consequence) of the map's verdict;
the clause-coherence suite asserts that none of them ever contradicts a
verified certificate or witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebras import RingMap, pushout
from .complexes import ComplexOfModules, cohomology, induced_on_cohomology
from .engine import solve_linear_system
from .fpmodules import (FPModule, ModuleMap, cokernel_of_map, free_module,
                        hom_induced, hom_module, identity_module_map,
                        image_equals_kernel, kernel_of_map,
                        module_presentation_of_target, restrict_scalars,
                        tensor_kernel, tensor_map, tensor_maps,
                        tensor_modules, vec_tensor)
from . import linalg
from .orders import exp_divides
from .poly import Poly
from .vectors import Vec
from .verdicts import NotInjectiveWitness, LinearSystemWitness, Witness


# -- clause (i)/(iii): tensor injectivity --------------------------------


@dataclass
class TensorInjectivityResult:
    injective: bool
    kernel_element: Optional[Vec] = None


def check_tensor_injectivity(u: ModuleMap, p: FPModule) -> TensorInjectivityResult:
    """Exact decision for injectivity of u ⊗ id_P."""
    up = tensor_map(u, p)
    k, incl = kernel_of_map(up)
    if k.is_zero_module():
        return TensorInjectivityResult(True)
    return TensorInjectivityResult(False, incl.columns[0])


def module_probe(phi: RingMap, m: FPModule) -> Optional[Vec]:
    """A nonzero kernel element of M -> M⊗B, or None (clause (iii) probe)."""
    gens = tensor_kernel(m, phi)
    return gens[0] if gens else None


def algebra_probe(phi: RingMap, r_map: RingMap) -> Optional[Poly]:
    """Kernel element of R -> R⊗B for an algebra R given by its structure
    map A -> R (clause (ii) probe); None if injective."""
    po = pushout(phi, r_map)
    return po.from_base.kernel_witness()


# -- clause (xiv): linear systems -----------------------------------------


@dataclass
class LinearSystemResult:
    kind: str                                  # SolvableBoth | SolvableNeither
    witness: Optional[Witness] = None          # | WitnessNotCrisp | NotInjective
    solution_source: Optional[list[Poly]] = None
    solution_target: Optional[list[Poly]] = None


def check_linear_system_criterion(phi: RingMap, rows: list[list[Poly]],
                                  rhs: list[Poly]) -> LinearSystemResult:
    """Solvability of C·x = a over A and over B; solvable over B but not
    over A witnesses failure of crispness."""
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise ValueError("ragged system matrix")
    ker = phi.kernel_witness()
    if ker is not None:
        return LinearSystemResult("NotInjective",
                                  witness=NotInjectiveWitness(phi, ker))
    source_solution = solve_linear_system(rows, rhs, phi.source)
    rows_b = [[phi.apply(c) for c in row] for row in rows]
    rhs_b = [phi.apply(c) for c in rhs]
    target_solution = solve_linear_system(rows_b, rhs_b, phi.target)
    if source_solution is not None:
        # a source solution maps to a target one; recompute anyway
        assert target_solution is not None, "solvable over A but not over B"
        return LinearSystemResult("SolvableBoth",
                                  solution_source=source_solution,
                                  solution_target=target_solution)
    if target_solution is None:
        return LinearSystemResult("SolvableNeither")
    witness = LinearSystemWitness(phi, rows, rhs, target_solution)
    return LinearSystemResult("WitnessNotCrisp", witness=witness,
                              solution_target=target_solution)


# -- clauses (ix)/(x): equalizer sequences --------------------------------


@dataclass
class EqualizerResult:
    kind: str                  # Exact | FailsInjectivity | FailsEqualizer | Undecided
    element: Optional[Vec] = None
    mode: str = "exact"
    truncation_degree: Optional[int] = None
    note: str = ""


def check_equalizer_sequence(phi: RingMap, m: FPModule,
                             truncation_degree: int = 4) -> EqualizerResult:
    """Exactness of M -> M⊗B ⇉ M⊗B⊗B.  Injectivity at M is decided exactly
    for any f.p. map; the equalizer spot is exact for module-finite maps and
    degree-truncated (for M = A) otherwise."""
    gens = tensor_kernel(m, phi)
    if gens:
        return EqualizerResult("FailsInjectivity", gens[0])
    if phi.finiteness().finite:
        return _equalizer_module_finite(phi, m)
    if m.rank == 1 and not m.relations:
        return _equalizer_truncated(phi, truncation_degree)
    return EqualizerResult(
        "Undecided", mode="unsupported",
        note="equalizer spot needs a module-finite map for general modules")


def _equalizer_module_finite(phi: RingMap, m: FPModule) -> EqualizerResult:
    bam = module_presentation_of_target(phi)
    bmod = bam.module
    s = bmod.rank
    if s == 0:
        # target is the zero ring; injectivity must have failed unless M = 0
        return EqualizerResult("Exact", note="zero target and zero module")
    unit = bam.unit_map.columns[0]
    t1 = tensor_modules(m, bmod)
    b2 = tensor_modules(bmod, bmod)
    t2 = tensor_modules(m, b2)
    alpha = ModuleMap(m, t1,
                      [vec_tensor(m.unit(j), unit, s) for j in range(m.rank)],
                      check=False)
    delta_cols = []
    for j in range(m.rank):
        for i in range(s):
            e1_col = vec_tensor(bmod.unit(i), unit, s)
            e2_col = vec_tensor(unit, bmod.unit(i), s)
            delta_cols.append(vec_tensor(m.unit(j), e1_col - e2_col, s * s))
    delta = ModuleMap(t1, t2, delta_cols, check=False)
    exact, bad = image_equals_kernel(alpha, delta)
    if exact:
        return EqualizerResult("Exact")
    if bad is None:
        raise RuntimeError("equalizer composite is nonzero (internal error)")
    return EqualizerResult("FailsEqualizer", bad)


def _standard_monomials_up_to(algebra, degree: int, cap: int = 600) -> list[tuple] | None:
    leads = [g.lead()[0] for g in algebra.relations.groebner()]
    ring = algebra.ambient
    n = ring.nvars

    def monomials(total, nvars):
        if nvars == 0:
            if total == 0:
                yield ()
            return
        for head in range(total + 1):
            for tail in monomials(total - head, nvars - 1):
                yield (head,) + tail

    out = []
    for d in range(degree + 1):
        for exp in sorted(monomials(d, n), key=ring.order.key):
            if not any(exp_divides(le, exp) for le in leads):
                out.append(exp)
                if len(out) > cap:
                    return None
    return out


def _equalizer_truncated(phi: RingMap, degree: int) -> EqualizerResult:
    """Check ker(e1 - e2) = phi(A) on the span of normal-form monomials of
    bounded degree.  Exact on the truncation; cannot certify failure."""
    b = phi.target
    field = b.field
    monos = _standard_monomials_up_to(b, degree)
    if monos is None:
        return EqualizerResult("Undecided", mode="truncated",
                               truncation_degree=degree,
                               note="monomial budget exceeded")
    po = pushout(phi, phi)
    bb = po.algebra
    diffs = []
    support: dict[tuple, int] = {}
    for exp in monos:
        mono = b.ambient.monomial(exp)
        diff = bb.nf(po.from_base.apply(mono) - po.from_other.apply(mono))
        diffs.append(diff)
        for e in diff.terms:
            support.setdefault(e, len(support))
    rows = [[field.zero()] * len(monos) for _ in range(len(support))]
    for j, diff in enumerate(diffs):
        for e, c in diff.terms.items():
            rows[support[e]][j] = c
    kernel = linalg.nullspace(rows, len(monos), field)
    if not kernel:
        return EqualizerResult("Exact", mode="truncated", truncation_degree=degree,
                               note="equalizer is trivial on the truncation")
    # the image side: phi of source monomials up to a matching degree
    img_degree = degree * max([1] + [im.total_degree() for im in phi.images
                                     if im.total_degree() > 0])
    src_monos = _standard_monomials_up_to(phi.source, img_degree)
    if src_monos is None:
        return EqualizerResult("Undecided", mode="truncated",
                               truncation_degree=degree,
                               note="source monomial budget exceeded")
    b_index: dict[tuple, int] = {}
    images = []
    for exp in src_monos:
        img = phi.apply(phi.source.ambient.monomial(exp))
        images.append(img)
        for e in img.terms:
            b_index.setdefault(e, len(b_index))
    for c_vec in kernel:
        target = {}
        for j, c in enumerate(c_vec):
            if c == field.zero():
                continue
            for e, v in b.nf(b.ambient.monomial(monos[j])).terms.items():
                target[e] = field.add(target.get(e, field.zero()), field.mul(c, v))
        for e in target:
            if e not in b_index:
                b_index[e] = len(b_index)
        sys_rows = [[field.zero()] * len(images) for _ in range(len(b_index))]
        for j, img in enumerate(images):
            for e, v in img.terms.items():
                sys_rows[b_index[e]][j] = v
        rhs = [field.zero()] * len(b_index)
        for e, v in target.items():
            rhs[b_index[e]] = v
        if linalg.solve(sys_rows, rhs, field) is None:
            return EqualizerResult("Undecided", mode="truncated",
                                   truncation_degree=degree,
                                   note="an equalizer element had no preimage "
                                        "within the search degree")
    return EqualizerResult("Exact", mode="truncated", truncation_degree=degree,
                           note=f"{len(kernel)} equalizer elements all lifted")


# -- clauses (xi)/(xii): complexes and cohomology --------------------------


@dataclass
class ComplexCriteriaReport:
    source_is_complex: bool
    base_changed_is_complex: bool
    complex_transfer_consistent: bool          # clause (xi) vs the verdict
    cohomology_injective: Optional[dict] = None   # index -> bool (clause (xii))
    cohomology_consistent: Optional[bool] = None
    note: str = ""


def check_complex_criteria(phi: RingMap, cx: ComplexOfModules,
                           certified_crisp: bool) -> ComplexCriteriaReport:
    src_complex = cx.is_complex()
    cb = cx.base_change(phi)
    bc_complex = cb.is_complex()
    transfer_ok = not (certified_crisp and bc_complex and not src_complex)
    report = ComplexCriteriaReport(src_complex, bc_complex, transfer_ok)
    if not src_complex:
        report.note = "source family is not a complex; cohomology skipped"
        return report
    if not phi.finiteness().finite:
        report.note = "cohomology comparison needs a module-finite map"
        return report
    bam = module_presentation_of_target(phi)
    bmod = bam.module
    unit = bam.unit_map.columns[0]
    s = bmod.rank
    tensored = cx.tensor_with(bmod)
    chain = {}
    for i in range(cx.lo, cx.hi + 1):
        m_i = cx.module(i)
        chain[i] = ModuleMap(m_i, tensored.module(i),
                             [vec_tensor(m_i.unit(j), unit, s)
                              for j in range(m_i.rank)], check=False)
    injective = {}
    for i in range(cx.lo, cx.hi + 1):
        h_map = induced_on_cohomology(cx, tensored, chain, i)
        k, _ = kernel_of_map(h_map)
        injective[i] = k.is_zero_module()
    report.cohomology_injective = injective
    report.cohomology_consistent = not (certified_crisp and
                                        not all(injective.values()))
    return report


# -- clause (xiii): Hom exactness ------------------------------------------


@dataclass
class HomExactnessResult:
    preserved: bool
    failures: list = field(default_factory=list)


def check_hom_exactness(phi: RingMap, f_over_b: FPModule) -> HomExactnessResult:
    """Does Hom_A(F, -) keep 0 -> A -> B -> B/A -> 0 exact?  F is an f.p.
    B-module restricted to A along a module-finite injective phi."""
    if not phi.is_injective():
        raise ValueError("clause needs an injective map")
    bam = module_presentation_of_target(phi)
    bmod = bam.module
    a_free = free_module(phi.source, 1)
    u = bam.unit_map
    b_over_a = cokernel_of_map(u)
    pi = ModuleMap(bmod, b_over_a,
                   [b_over_a.unit(i) for i in range(bmod.rank)], check=False)
    f_a, _ = restrict_scalars(f_over_b, phi)
    hom_a = hom_module(f_a, a_free)
    hom_b = hom_module(f_a, bmod)
    hom_q = hom_module(f_a, b_over_a)
    hom_u = hom_induced(f_a, u, hom_a, hom_b)
    hom_pi = hom_induced(f_a, pi, hom_b, hom_q)
    failures = []
    k, _ = kernel_of_map(hom_u)
    if not k.is_zero_module():
        failures.append("Hom(F, A) -> Hom(F, B) is not injective")
    exact, _ = image_equals_kernel(hom_u, hom_pi)
    if not exact:
        failures.append("exactness fails at Hom(F, B)")
    if not cokernel_of_map(hom_pi).is_zero_module():
        failures.append("Hom(F, B) -> Hom(F, B/A) is not surjective")
    return HomExactnessResult(not failures, failures)


# -- clauses (v)-(viii): transfer along a certified map ---------------------


@dataclass
class TransferReport:
    injective_after: bool
    injective_before: Optional[bool]
    surjective_after: bool
    surjective_before: Optional[bool]
    zero_after: bool
    zero_before: Optional[bool]
    violations: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations


def transfer_along_crisp(phi: RingMap, u: ModuleMap) -> TransferReport:
    """Compute injectivity/surjectivity of u⊗id_B and of u, and flag any
    failed implication (inj after ⇒ inj before, etc.) as a soundness
    violation of the supplied certificate."""
    from .fpmodules import base_change_map
    ub = base_change_map(u, phi)
    k_after, _ = kernel_of_map(ub)
    inj_after = k_after.is_zero_module()
    surj_after = cokernel_of_map(ub).is_zero_module()
    zero_after = ub.is_zero_map()
    k_before, _ = kernel_of_map(u)
    inj_before = k_before.is_zero_module()
    surj_before = cokernel_of_map(u).is_zero_module()
    zero_before = u.is_zero_map()
    report = TransferReport(inj_after, inj_before, surj_after, surj_before,
                            zero_after, zero_before)
    if inj_after and not inj_before:
        report.violations.append("u⊗id injective but u is not")
    if surj_after and not surj_before:
        report.violations.append("u⊗id surjective but u is not")
    if zero_after and not zero_before:
        report.violations.append("u⊗id zero but u is not (faithfulness)")
    return report


def exact_sequence_transfer(phi: RingMap, u: ModuleMap, v: ModuleMap) -> tuple[bool, bool, list]:
    """Short-exactness of 0 -> X -> Y -> Z -> 0 after and before base change;
    returns (exact_after, exact_before, violations-under-certificate)."""
    from .fpmodules import base_change_map
    ub = base_change_map(u, phi)
    vb = base_change_map(v, phi)
    after = _is_short_exact(ub, vb)
    before = _is_short_exact(u, v)
    violations = []
    if after and not before:
        violations.append("sequence exact after base change but not before")
    return after, before, violations


def _is_short_exact(u: ModuleMap, v: ModuleMap) -> bool:
    k, _ = kernel_of_map(u)
    if not k.is_zero_module():
        return False
    if not cokernel_of_map(v).is_zero_module():
        return False
    exact, _ = image_equals_kernel(u, v)
    return exact
