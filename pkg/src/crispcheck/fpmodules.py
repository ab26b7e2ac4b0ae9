"""Finitely presented modules over f.p. algebras and the functors on them.

A module is coker(relations: A^c -> A^rank); relations are columns.  Maps
act on the left and are stored as columns too.  Everything reduces to module
Gröbner bases over the ambient polynomial ring, with the base algebra's
relation ideal adjoined in every coordinate.
"""

from __future__ import annotations

from .algebras import FPAlgebra, RingMap
from .groebner import groebner_module, normal_form, normal_form_with_coeffs
from .orders import EliminationModuleOrder, GREVLEX, PositionOver
from .poly import Poly, RingMismatch
from .vectors import Vec


class BaseMismatch(ValueError):
    pass


class NotFiniteOverBase(ValueError):
    pass


class FPModule:
    def __init__(self, base: FPAlgebra, rank: int, relations: list[Vec] | None = None):
        self.base = base
        self.rank = rank
        rels = []
        for v in (relations or []):
            if v.ring != base.ambient or v.rank != rank:
                raise BaseMismatch("relation column does not match the module")
            if not v.is_zero():
                rels.append(v)
        self.relations = rels
        self._gb = None
        self._zero: bool | None = None

    def __repr__(self):
        return f"FPModule(rank {self.rank} over {self.base}, {len(self.relations)} relations)"

    @property
    def morder(self):
        return PositionOver(self.base.ambient.order)

    def full_relations(self) -> list[Vec]:
        """Stored relations plus the base ideal in every coordinate."""
        out = list(self.relations)
        ring = self.base.ambient
        for g in self.base.relations.groebner():
            vec_g = Vec.from_poly(g)
            for i in range(self.rank):
                out.append(Vec(ring, self.rank,
                               {(i, exp): c for (_, exp), c in vec_g.terms.items()}))
        return out

    def relation_gb(self) -> list[Vec]:
        if self._gb is None:
            self._gb = groebner_module(self.full_relations(), self.morder,
                                       self.rank, self.base.ambient)
        return self._gb

    def nf_vector(self, v: Vec) -> Vec:
        if v.ring != self.base.ambient or v.rank != self.rank:
            raise BaseMismatch("vector does not match the module")
        return normal_form(v, self.relation_gb(), self.morder)

    def is_zero_element(self, v: Vec) -> bool:
        return self.nf_vector(v).is_zero()

    def elements_equal(self, v: Vec, w: Vec) -> bool:
        return self.is_zero_element(v - w)

    def is_zero_module(self) -> bool:
        if self._zero is None:
            self._zero = all(
                self.is_zero_element(Vec.unit(self.base.ambient, self.rank, i))
                for i in range(self.rank))
        return self._zero

    def unit(self, pos: int) -> Vec:
        return Vec.unit(self.base.ambient, self.rank, pos)

    def element(self, polys: list[Poly]) -> Vec:
        return Vec.from_polys(polys, self.rank) if polys else Vec.zero(self.base.ambient, self.rank)

    def same_presentation(self, other: "FPModule") -> bool:
        return (self.base.same_presentation(other.base) and self.rank == other.rank
                and self.relation_gb() == other.relation_gb())


def free_module(base: FPAlgebra, rank: int) -> FPModule:
    return FPModule(base, rank, [])


def cyclic_module(base: FPAlgebra, ideal_gens: list[Poly]) -> FPModule:
    """A/J presented on a single generator."""
    cols = [Vec.from_poly(g) for g in ideal_gens if not g.is_zero()]
    return FPModule(base, 1, cols)


class ModuleMap:
    """source -> target, stored as columns: column j is the image of e_j."""

    def __init__(self, source: FPModule, target: FPModule, columns: list[Vec],
                 check: bool = True):
        if source.base is not target.base and not source.base.same_presentation(target.base):
            raise BaseMismatch("module map across different bases")
        if len(columns) != source.rank:
            raise ValueError("one column per source generator required")
        self.source = source
        self.target = target
        self.columns = [target.nf_vector(c) for c in columns]
        if check:
            for rel in source.relations:
                if not target.is_zero_element(self.apply_raw(rel)):
                    raise ValueError("matrix does not carry source relations into target relations")

    def __repr__(self):
        return f"ModuleMap({self.source.rank} -> {self.target.rank})"

    def apply_raw(self, v: Vec) -> Vec:
        out = Vec.zero(self.target.base.ambient, self.target.rank)
        for i, col in enumerate(self.columns):
            comp = v.component(i)
            if not comp.is_zero():
                out = out + col.mul_poly(comp)
        return out

    def apply(self, v: Vec) -> Vec:
        return self.target.nf_vector(self.apply_raw(v))

    def compose(self, then: "ModuleMap") -> "ModuleMap":
        """then ∘ self."""
        if self.target.rank != then.source.rank:
            raise ValueError("maps not composable")
        return ModuleMap(self.source, then.target,
                         [then.apply_raw(c) for c in self.columns], check=False)

    def is_zero_map(self) -> bool:
        return all(self.target.is_zero_element(c) for c in self.columns)

    def matrix_entries(self) -> list[list[Poly]]:
        """Rows of the matrix (target.rank x source.rank)."""
        return [[col.component(i) for col in self.columns] for i in range(self.target.rank)]


def identity_module_map(m: FPModule) -> ModuleMap:
    return ModuleMap(m, m, [m.unit(i) for i in range(m.rank)], check=False)


def zero_module_map(source: FPModule, target: FPModule) -> ModuleMap:
    zero = Vec.zero(target.base.ambient, target.rank)
    return ModuleMap(source, target, [zero] * source.rank, check=False)


# -- syzygies and kernels ----------------------------------------------


def syzygies_mod(tracked: list[Vec], modulo: list[Vec], rank: int,
                 base: FPAlgebra) -> list[Vec]:
    """Generators of {a : sum a_t * tracked_t lies in span(modulo)} as
    vectors of length len(tracked), coefficients reduced mod the base ideal."""
    ring = base.ambient
    s = len(tracked)
    big = rank + s
    elements = []
    for t, v in enumerate(tracked):
        e = v.embed(big, 0) + Vec.unit(ring, big, rank + t)
        elements.append(e)
    for m in modulo:
        elements.append(m.embed(big, 0))
    gb = groebner_module(elements, PositionOver(ring.order), big, ring)
    out = []
    for g in gb:
        if any(pos < rank for (pos, _) in g.terms):
            continue
        vec = g.slice_positions(rank, big)
        comps = [base.nf(p) for p in vec.components()]
        reduced = Vec.from_polys(comps, s) if s else Vec.zero(ring, 0)
        if not reduced.is_zero():
            out.append(reduced)
    return out


def kernel_of_map(u: ModuleMap) -> tuple[FPModule, ModuleMap]:
    """Kernel presented as a module with its inclusion; the kernel is the
    zero module iff u is injective."""
    base = u.source.base
    syz = syzygies_mod(u.columns, u.target.full_relations(), u.target.rank, base)
    gens = [g for g in syz if not u.source.is_zero_element(g)]
    rels = syzygies_mod(gens, u.source.full_relations(), u.source.rank, base) if gens else []
    k = FPModule(base, len(gens), rels)
    incl = ModuleMap(k, u.source, gens, check=False)
    return k, incl


def cokernel_of_map(u: ModuleMap) -> FPModule:
    return FPModule(u.target.base, u.target.rank,
                    list(u.target.relations) + list(u.columns))


def submodule_membership(v: Vec, gens: list[Vec], modulo: list[Vec],
                         base: FPAlgebra) -> list[Poly] | None:
    """Coefficients c with v = sum c_i * gens_i modulo span(modulo), or None."""
    ring = base.ambient
    rank = v.rank
    s = len(gens)
    big = rank + s
    elements = [g.embed(big, 0) + Vec.unit(ring, big, rank + t)
                for t, g in enumerate(gens)]
    elements += [m.embed(big, 0) for m in modulo]
    gb = groebner_module(elements, PositionOver(ring.order), big, ring)
    nf = normal_form(v.embed(big, 0), gb, PositionOver(ring.order))
    if any(pos < rank for (pos, _) in nf.terms):
        return None
    tail = nf.slice_positions(rank, big)
    return [base.nf(-p) for p in tail.components()]


def element_in_submodule(v: Vec, gens: list[Vec], modulo: list[Vec],
                         base: FPAlgebra) -> bool:
    return submodule_membership(v, gens, modulo, base) is not None


def image_equals_kernel(u: ModuleMap, v: ModuleMap) -> tuple[bool, Vec | None]:
    """Exactness at the middle of source --u--> M --v--> target.
    Returns (exact, offending kernel element if not)."""
    if u.target is not v.source and not u.target.same_presentation(v.source):
        raise BaseMismatch("maps do not share the middle module")
    mid = v.source
    for col in u.columns:
        if not v.target.is_zero_element(v.apply_raw(col)):
            return False, None    # composition not even zero
    _, incl = kernel_of_map(v)
    for g in incl.columns:
        if not element_in_submodule(g, u.columns, mid.full_relations(), mid.base):
            return False, g
    return True, None


# -- tensor, direct sum, base change ------------------------------------


def vec_tensor(a: Vec, b: Vec, rank_b: int) -> Vec:
    """a ⊗ b inside A^{rank_a * rank_b}, index (i, j) -> i*rank_b + j."""
    ring = a.ring
    field = ring.field
    zero = field.zero()
    terms: dict = {}
    from .orders import exp_mul
    for (i, ea), ca in a.terms.items():
        for (j, eb), cb in b.terms.items():
            key = (i * rank_b + j, exp_mul(ea, eb))
            s = field.add(terms.get(key, zero), field.mul(ca, cb))
            if s == zero:
                terms.pop(key, None)
            else:
                terms[key] = s
    return Vec(ring, a.rank * rank_b, terms)


def tensor_modules(m: FPModule, n: FPModule) -> FPModule:
    if not m.base.same_presentation(n.base):
        raise BaseMismatch("tensor of modules over different bases")
    rels = []
    for rho in m.relations:
        for j in range(n.rank):
            rels.append(vec_tensor(rho, n.unit(j), n.rank))
    for i in range(m.rank):
        for sigma in n.relations:
            rels.append(vec_tensor(m.unit(i), sigma, n.rank))
    return FPModule(m.base, m.rank * n.rank, rels)


def tensor_maps(u: ModuleMap, v: ModuleMap,
                source: FPModule | None = None,
                target: FPModule | None = None) -> ModuleMap:
    """u ⊗ v on the tensor presentations."""
    source = source or tensor_modules(u.source, v.source)
    target = target or tensor_modules(u.target, v.target)
    cols = []
    for i in range(u.source.rank):
        for j in range(v.source.rank):
            cols.append(vec_tensor(u.columns[i], v.columns[j], v.target.rank))
    return ModuleMap(source, target, cols, check=False)


def tensor_map(u: ModuleMap, p: FPModule) -> ModuleMap:
    """u ⊗ id_P."""
    return tensor_maps(u, identity_module_map(p))


def direct_sum_modules(parts: list[FPModule]) -> FPModule:
    base = parts[0].base
    rank = sum(p.rank for p in parts)
    rels = []
    offset = 0
    for p in parts:
        if not p.base.same_presentation(base):
            raise BaseMismatch("direct sum over different bases")
        for rho in p.relations:
            rels.append(rho.embed(rank, offset))
        offset += p.rank
    return FPModule(base, rank, rels)


def direct_sum_maps(maps: list[ModuleMap]) -> ModuleMap:
    source = direct_sum_modules([u.source for u in maps])
    target = direct_sum_modules([u.target for u in maps])
    cols = []
    offset = 0
    for u in maps:
        for c in u.columns:
            cols.append(c.embed(target.rank, offset))
        offset += u.target.rank
    return ModuleMap(source, target, cols, check=False)


def base_change_module(m: FPModule, phi: RingMap) -> FPModule:
    """M ⊗_A B as a module over B (the functor phi^* on objects)."""
    if not m.base.same_presentation(phi.source):
        raise BaseMismatch("module does not live over the map's source")
    target_ring = phi.target.ambient
    rels = []
    for rho in m.relations:
        rels.append(Vec.from_polys([phi.apply(p) for p in rho.components()], m.rank)
                    if m.rank else Vec.zero(target_ring, 0))
    return FPModule(phi.target, m.rank, rels)


def base_change_map(u: ModuleMap, phi: RingMap,
                    source: FPModule | None = None,
                    target: FPModule | None = None) -> ModuleMap:
    source = source or base_change_module(u.source, phi)
    target = target or base_change_module(u.target, phi)
    cols = []
    for c in u.columns:
        cols.append(Vec.from_polys([phi.apply(p) for p in c.components()], target.rank)
                    if target.rank else Vec.zero(phi.target.ambient, 0))
    return ModuleMap(source, target, cols, check=False)


# -- Hom ----------------------------------------------------------------


def hom_module(m: FPModule, n: FPModule) -> tuple[FPModule, ModuleMap]:
    """Hom_A(M, N) presented as the kernel of N^{rank M} -> N^{#rel M}.
    Returns (module, inclusion into N^{rank M}); a generator's block i is
    the image of M's generator i."""
    if not m.base.same_presentation(n.base):
        raise BaseMismatch("Hom of modules over different bases")
    rM, cM, rN = m.rank, len(m.relations), n.rank
    ring = m.base.ambient
    source_rels = []
    for i in range(rM):
        for sigma in n.relations:
            source_rels.append(sigma.embed(rM * rN, i * rN))
    source = FPModule(m.base, rM * rN, source_rels)
    target_rels = []
    for j in range(cM):
        for sigma in n.relations:
            target_rels.append(sigma.embed(cM * rN, j * rN))
    target = FPModule(m.base, cM * rN, target_rels)
    cols = []
    for i in range(rM):
        for a in range(rN):
            terms = {}
            for j in range(cM):
                comp = m.relations[j].component(i)
                for exp, c in comp.terms.items():
                    terms[(j * rN + a, exp)] = c
            cols.append(Vec(ring, cM * rN, terms))
    phi = ModuleMap(source, target, cols, check=False)
    return kernel_of_map(phi)


def hom_generator_as_map(m: FPModule, n: FPModule, incl: ModuleMap, idx: int) -> ModuleMap:
    """Reinterpret generator idx of Hom(M, N) as an actual map M -> N."""
    h = incl.columns[idx]
    cols = [h.slice_positions(i * n.rank, (i + 1) * n.rank) for i in range(m.rank)]
    return ModuleMap(m, n, cols, check=False)


def hom_induced(f: FPModule, w: ModuleMap,
                hom_src: tuple[FPModule, ModuleMap],
                hom_tgt: tuple[FPModule, ModuleMap]) -> ModuleMap:
    """Hom(F, w) : Hom(F, X) -> Hom(F, Y) for w : X -> Y."""
    hx, incl_x = hom_src
    hy, incl_y = hom_tgt
    rF = f.rank
    y_amb = FPModule(w.target.base, rF * w.target.rank,
                     [sig.embed(rF * w.target.rank, i * w.target.rank)
                      for i in range(rF) for sig in w.target.relations])
    cols = []
    for g in incl_x.columns:
        blocks = [g.slice_positions(i * w.source.rank, (i + 1) * w.source.rank)
                  for i in range(rF)]
        mapped = [w.apply_raw(b) for b in blocks]
        big = Vec.zero(w.target.base.ambient, rF * w.target.rank)
        for i, b in enumerate(mapped):
            big = big + b.embed(rF * w.target.rank, i * w.target.rank)
        coeffs = submodule_membership(big, incl_y.columns, y_amb.full_relations(),
                                      w.target.base)
        if coeffs is None:
            raise RuntimeError("induced Hom element failed to lift (internal error)")
        cols.append(Vec.from_polys(coeffs, hy.rank) if hy.rank
                    else Vec.zero(w.target.base.ambient, 0))
    return ModuleMap(hx, hy, cols, check=False)


# -- the target of a ring map as a module over the source ----------------


class AlgebraAsModule:
    """B as an A-module along a module-finite phi: A -> B: generators are
    the standard target monomials, with computed A-relations."""

    def __init__(self, phi: RingMap, module: FPModule, gens: list[tuple],
                 unit_map: ModuleMap):
        self.phi = phi
        self.module = module
        self.gens = gens                  # target-monomial exponents, 1 first
        self.unit_map = unit_map          # A^1 -> module, 1 |-> coords of 1_B

    def coordinates(self, b: Poly) -> Vec:
        """A-coordinates of an element of B in the chosen generators."""
        coords = self.phi.graph.coordinates(b)
        terms = {}
        index = {g: i for i, g in enumerate(self.gens)}
        for y_exp, poly in coords.items():
            i = index.get(y_exp)
            if i is None:
                raise RuntimeError("normal form left the standard monomial box")
            for exp, c in poly.terms.items():
                terms[(i, exp)] = c
        return Vec(self.phi.source.ambient, len(self.gens), terms)

    def multiply_generator(self, i: int, b: Poly) -> Vec:
        """Coordinates of (generator i) * b."""
        ring = self.phi.target.ambient
        gen_poly = ring.monomial(self.gens[i])
        return self.coordinates(gen_poly * b)


def module_presentation_of_target(phi: RingMap) -> AlgebraAsModule:
    """Present B as an f.p. A-module (requires module-finiteness)."""
    if phi._module_presentation is not None:
        return phi._module_presentation
    fin = phi.finiteness()
    if not fin.finite:
        raise NotFiniteOverBase(
            f"target is not module-finite over the source (variable {fin.obstruction})")
    a = phi.source
    graph = phi.graph
    s_ring = graph.ring
    gens = fin.generators
    s = len(gens)
    if s == 0:
        module = FPModule(a, 0, [])
        unit = ModuleMap(free_module(a, 1), module,
                         [Vec.zero(a.ambient, 0)], check=False)
        phi._module_presentation = AlgebraAsModule(phi, module, [], unit)
        return phi._module_presentation
    n_src = s_ring.nvars - graph.n_target
    big = 1 + s
    elements = []
    one = s_ring.field.one()
    for i, y_exp in enumerate(gens):
        full_exp = tuple(y_exp) + (0,) * n_src
        vec = Vec(s_ring, big, {(0, full_exp): one,
                                (1 + i, (0,) * s_ring.nvars): one})
        elements.append(vec)
    for k in graph.ideal.groebner():
        elements.append(Vec(s_ring, big, {(0, exp): c for exp, c in k.terms.items()}))
    gb1 = groebner_module(elements, PositionOver(s_ring.order), big, s_ring)
    stage1 = [g.slice_positions(1, big) for g in gb1
              if not any(pos == 0 for (pos, _) in g.terms)]
    morder2 = EliminationModuleOrder(graph.n_target)
    gb2 = groebner_module(stage1, morder2, s, s_ring)
    rel_cols = []
    for g in gb2:
        if any(any(exp[i] != 0 for i in range(graph.n_target)) for (_, exp) in g.terms):
            continue
        comps = [a.nf(graph.graph_to_source(p)) for p in g.components()]
        col = Vec.from_polys(comps, s)
        if not col.is_zero():
            rel_cols.append(col)
    module = FPModule(a, s, rel_cols)
    assert gens[0] == (0,) * phi.target.ambient.nvars, "unit monomial must come first"
    unit = ModuleMap(free_module(a, 1), module, [module.unit(0)], check=False)
    result = AlgebraAsModule(phi, module, gens, unit)
    phi._module_presentation = result
    return result


def restrict_scalars(n: FPModule, phi: RingMap) -> tuple[FPModule, AlgebraAsModule]:
    """An f.p. B-module as an f.p. A-module along a module-finite phi.
    Generator (l, i) = (N generator l) * (B generator i) sits at l*s + i."""
    bam = module_presentation_of_target(phi)
    s = len(bam.gens)
    rN = n.rank
    a = phi.source
    rank = rN * s
    rels: list[Vec] = []
    for l in range(rN):
        for rho in bam.module.relations:
            rels.append(rho.embed(rank, l * s))
    ring_b = phi.target.ambient
    for sigma in n.relations:
        for i in range(s):
            gen_poly = ring_b.monomial(bam.gens[i])
            terms = {}
            for l in range(rN):
                comp = sigma.component(l)
                if comp.is_zero():
                    continue
                coords = bam.coordinates(gen_poly * comp)
                for (j, exp), c in coords.terms.items():
                    terms[(l * s + j, exp)] = c
            vec = Vec(a.ambient, rank, terms)
            if not vec.is_zero():
                rels.append(vec)
    return FPModule(a, rank, rels), bam


def restrict_element(v: Vec, n: FPModule, bam: AlgebraAsModule) -> Vec:
    """Rewrite an element of N (over B) in the restricted-scalars generators."""
    s = len(bam.gens)
    terms = {}
    for l in range(n.rank):
        comp = v.component(l)
        if comp.is_zero():
            continue
        coords = bam.coordinates(comp)
        for (j, exp), c in coords.terms.items():
            terms[(l * s + j, exp)] = c
    return Vec(bam.phi.source.ambient, n.rank * s, terms)


# -- exact kernel of M -> M ⊗_A B for arbitrary f.p. maps -----------------


def tensor_kernel(m: FPModule, phi: RingMap) -> list[Vec]:
    """Generators of ker(M -> M ⊗_A B), computed exactly by eliminating the
    target variables in the graph ring; empty iff the map is injective."""
    if not m.base.same_presentation(phi.source):
        raise BaseMismatch("module does not live over the map's source")
    graph = phi.graph
    s_ring = graph.ring
    r = m.rank
    if r == 0:
        return []
    w: list[Vec] = []
    for rho in m.relations:
        comps = [graph.source_to_graph(p) for p in rho.components()]
        w.append(Vec.from_polys(comps, r))
    for k in graph.ideal.groebner():
        vec_k = Vec.from_poly(k)
        for l in range(r):
            w.append(Vec(s_ring, r, {(l, exp): c for (_, exp), c in vec_k.terms.items()}))
    morder = EliminationModuleOrder(graph.n_target)
    gb = groebner_module(w, morder, r, s_ring)
    out = []
    for g in gb:
        if any(any(exp[i] != 0 for i in range(graph.n_target)) for (_, exp) in g.terms):
            continue
        comps = [m.base.nf(graph.graph_to_source(p)) for p in g.components()]
        vec = Vec.from_polys(comps, r)
        if not m.is_zero_element(vec):
            out.append(vec)
    return out
