"""Finitely presented algebras A = k[x_1..x_n]/I and maps between them.

A ring map A -> B carries a cached "graph ring" S = k[y's, $x's] with the
ideal J + ($x_i - image_i); elimination of the target variables in S gives
kernels, ideal contractions and module-finiteness tests, which nearly every
higher-level check reduces to.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .ideals import Ideal
from .orders import BlockOrder, GREVLEX, exp_divides
from .poly import Poly, PolyRing, RingMismatch


class ZeroRingError(ValueError):
    pass


class InvalidRingMap(ValueError):
    pass


_SRC_PREFIX = "$"


class FPAlgebra:
    """ambient / relations, with element equality decided by normal form."""

    def __init__(self, ambient: PolyRing, relations: Ideal | Sequence[Poly] | None = None,
                 allow_zero: bool = False, connected: Optional[bool] = None):
        self.ambient = ambient
        if relations is None:
            relations = Ideal(ambient, [])
        if not isinstance(relations, Ideal):
            relations = Ideal(ambient, list(relations))
        if relations.ring != ambient:
            raise RingMismatch("relations live in a different ring")
        self.relations = relations
        self.allow_zero = allow_zero
        if connected is None and not relations.generators:
            connected = True        # polynomial ring over a field
        self.connected = connected
        self._vs_basis: list[tuple] | None | str = "?"
        if not allow_zero and self.is_zero_ring():
            raise ZeroRingError("relations generate (1); pass allow_zero to build the zero ring")

    @property
    def field(self):
        return self.ambient.field

    def __repr__(self):
        rels = ", ".join(str(g) for g in self.relations.generators)
        return f"{self.ambient}/({rels})" if rels else f"{self.ambient}"

    def nf(self, f: Poly) -> Poly:
        return self.relations.reduce(f)

    def is_zero_elt(self, f: Poly) -> bool:
        return self.nf(f).is_zero()

    def elements_equal(self, f: Poly, g: Poly) -> bool:
        return self.nf(f - g).is_zero()

    def is_zero_ring(self) -> bool:
        return self.relations.contains_one()

    def gens(self) -> list[Poly]:
        return self.ambient.gens()

    def one(self) -> Poly:
        return self.ambient.one()

    def zero(self) -> Poly:
        return self.ambient.zero()

    def poly(self, text: str) -> Poly:
        return self.ambient.poly(text)

    def same_presentation(self, other: "FPAlgebra") -> bool:
        return (self.field is other.field
                and self.ambient.variables == other.ambient.variables
                and self.relations.groebner() == other.relations.groebner())

    def vector_space_basis(self) -> list[tuple] | None:
        """Monomial k-basis when the algebra is finite-dimensional over its
        field, else None.  The basis is sorted with 1 first."""
        if self._vs_basis == "?":
            self._vs_basis = _standard_monomial_box(
                self.relations.groebner(), self.ambient.nvars,
                range(self.ambient.nvars))
        return self._vs_basis

    def assert_connected(self) -> "FPAlgebra":
        self.connected = True
        return self


def _standard_monomial_box(gb: list[Poly], nvars: int, var_indices) -> list[tuple] | None:
    """Standard monomials below the staircase when every variable in
    `var_indices` has a pure-power leading monomial; None otherwise.
    Leading monomials involving other variables never divide these, so the
    box enumeration is exhaustive."""
    var_indices = list(var_indices)
    leads = [g.lead()[0] for g in gb]
    bounds = {}
    for j in var_indices:
        n_j = None
        for exp in leads:
            if exp[j] > 0 and all(exp[i] == 0 for i in range(nvars) if i != j):
                n_j = exp[j] if n_j is None else min(n_j, exp[j])
        if n_j is None:
            return None
        bounds[j] = n_j
    pure_leads = [exp for exp in leads
                  if all(exp[i] == 0 for i in range(nvars) if i not in var_indices)]
    basis: list[tuple] = []
    stack = [(0, [0] * nvars)]
    # depth-first over the bounded box, in variable order
    def rec(pos: int, current: list[int]):
        if pos == len(var_indices):
            exp = tuple(current)
            if not any(exp_divides(le, exp) for le in pure_leads):
                basis.append(exp)
            return
        j = var_indices[pos]
        for e in range(bounds[j]):
            current[j] = e
            rec(pos + 1, current)
        current[j] = 0
    rec(0, [0] * nvars)
    basis.sort(key=GREVLEX.key)
    return basis


class RingMap:
    """A -> B given by one target element per source generator; images are
    checked against the source relations at construction."""

    def __init__(self, source: FPAlgebra, target: FPAlgebra, images: Sequence[Poly],
                 check: bool = True):
        if len(images) != source.ambient.nvars:
            raise InvalidRingMap("one image per source generator required")
        self.source = source
        self.target = target
        self.images = [target.nf(im if im.ring == target.ambient
                                 else im.rename_into(target.ambient))
                       for im in images]
        self._graph = None
        self._kernel: Ideal | None = None
        self._finiteness = None
        self._module_presentation = None
        if check:
            for rel in source.relations.generators:
                if not target.is_zero_elt(rel.substitute(target.ambient, self.images)):
                    raise InvalidRingMap(
                        f"relation {rel} does not map to zero in the target")

    def __repr__(self):
        ims = ", ".join(f"{v} -> {im}" for v, im in
                        zip(self.source.ambient.variables, self.images))
        return f"RingMap({self.source} -> {self.target}; {ims})"

    def apply(self, f: Poly) -> Poly:
        if f.ring != self.source.ambient:
            raise RingMismatch("element outside the source ring")
        return self.target.nf(f.substitute(self.target.ambient, self.images))

    def apply_vec(self, polys: list[Poly]) -> list[Poly]:
        return [self.apply(p) for p in polys]

    def equals(self, other: "RingMap") -> bool:
        return (self.source.same_presentation(other.source)
                and self.target.same_presentation(other.target)
                and all(self.target.elements_equal(a, b)
                        for a, b in zip(self.images, other.images)))

    def is_identity(self) -> bool:
        if not self.source.same_presentation(self.target):
            return False
        return all(self.target.elements_equal(im, g)
                   for im, g in zip(self.images, self.target.gens()))

    # -- graph ring ----------------------------------------------------

    @property
    def graph(self) -> "GraphRing":
        if self._graph is None:
            self._graph = GraphRing(self)
        return self._graph

    def ring_kernel(self) -> Ideal:
        """ker(A -> B) as an ideal of A's ambient ring (contains A's relations)."""
        if self._kernel is None:
            self._kernel = self.graph.contract([])
        return self._kernel

    def is_injective(self) -> bool:
        ker = self.ring_kernel()
        return all(self.source.is_zero_elt(g) for g in ker.generators)

    def kernel_witness(self) -> Poly | None:
        """A nonzero element of ker(A -> B), or None if injective."""
        for g in self.ring_kernel().generators:
            nf = self.source.nf(g)
            if not nf.is_zero():
                return nf
        return None

    def contract_extended_ideal(self, gens_in_source: Sequence[Poly]) -> Ideal:
        """phi^{-1}(J·B) for J = (gens) an ideal of A, as an ideal of A."""
        return self.graph.contract([self.graph.source_to_graph(g) for g in gens_in_source])

    def contract_target_ideal(self, gens_in_target: Sequence[Poly]) -> Ideal:
        """phi^{-1}(J) for J an ideal of B given by target-ambient generators."""
        return self.graph.contract([self.graph.target_to_graph(g) for g in gens_in_target])

    def finiteness(self):
        if self._finiteness is None:
            self._finiteness = self.graph.finiteness()
        return self._finiteness


@dataclass
class ModuleFiniteness:
    finite: bool
    generators: list[tuple] | None    # target-monomial exponents, 1 first
    obstruction: str | None           # target variable lacking a pure power


class GraphRing:
    """S = k[target vars, $source vars] with the graph ideal, in a block
    order eliminating the target variables."""

    def __init__(self, phi: RingMap):
        self.phi = phi
        tvars = phi.target.ambient.variables
        prefix = _SRC_PREFIX
        while any((prefix + v) in tvars for v in phi.source.ambient.variables):
            prefix += _SRC_PREFIX
        self.svar_names = tuple(prefix + v for v in phi.source.ambient.variables)
        self.n_target = len(tvars)
        self.ring = PolyRing(phi.source.field, tvars + self.svar_names,
                             BlockOrder(self.n_target))
        self._src_map = dict(zip(phi.source.ambient.variables, self.svar_names))
        gens = [g.rename_into(self.ring) for g in phi.target.relations.generators]
        for name, image in zip(self.svar_names, phi.images):
            gens.append(self.ring.var(name) - image.rename_into(self.ring))
        self.ideal = Ideal(self.ring, gens)

    def source_to_graph(self, f: Poly) -> Poly:
        return f.rename_into(self.ring, self._src_map)

    def target_to_graph(self, f: Poly) -> Poly:
        return f.rename_into(self.ring)

    def graph_to_source(self, f: Poly) -> Poly:
        back = {v: w for w, v in self._src_map.items()}
        return f.rename_into(self.phi.source.ambient, back)

    def contract(self, extra: list[Poly]) -> Ideal:
        """(graph ideal + extra) ∩ k[$source vars], mapped back to A."""
        working = Ideal(self.ring, list(self.ideal.groebner()) + list(extra))
        kept = []
        for g in working.groebner():
            if all(all(exp[i] == 0 for i in range(self.n_target)) for exp in g.terms):
                kept.append(self.graph_to_source(g))
        kept.extend(self.phi.source.relations.generators)
        return Ideal(self.phi.source.ambient, kept)

    def nf(self, f: Poly) -> Poly:
        return self.ideal.reduce(f)

    def finiteness(self) -> ModuleFiniteness:
        gb = self.ideal.groebner()
        gens = _standard_monomial_box(gb, self.ring.nvars, range(self.n_target))
        if gens is None:
            leads = [g.lead()[0] for g in gb]
            missing = None
            for j in range(self.n_target):
                if not any(exp[j] > 0 and all(exp[i] == 0 for i in range(self.ring.nvars)
                                              if i != j) for exp in leads):
                    missing = self.phi.target.ambient.variables[j]
                    break
            return ModuleFiniteness(False, None, missing)
        # re-encode in the target's exponent space
        out = [exp[:self.n_target] for exp in gens]
        return ModuleFiniteness(True, out, None)

    def coordinates(self, f_target: Poly) -> dict[tuple, Poly]:
        """Write an element of B as sum coeff(x) * monomial(y) over the
        module generators; coefficients land in A's ambient ring."""
        nf = self.nf(f_target.rename_into(self.ring))
        grouped: dict[tuple, dict] = {}
        for exp, c in nf.terms.items():
            y_part = exp[:self.n_target]
            x_part = (0,) * self.n_target + exp[self.n_target:]
            grouped.setdefault(y_part, {})[x_part] = c
        out = {}
        for y_part, terms in grouped.items():
            poly = self.graph_to_source(Poly(self.ring, terms))
            out[y_part] = self.phi.source.nf(poly)
        return out


def identity_map(a: FPAlgebra) -> RingMap:
    return RingMap(a, a, a.gens(), check=False)


def compose(first: RingMap, second: RingMap) -> RingMap:
    """second ∘ first, requiring first.target == second.source."""
    if not first.target.same_presentation(second.source):
        raise InvalidRingMap("maps are not composable")
    return RingMap(first.source, second.target,
                   [second.apply(im.rename_into(second.source.ambient))
                    for im in first.images], check=False)


# -- products and pushouts ---------------------------------------------


def _fresh_names(wanted: Sequence[str], taken: set[str]) -> list[str]:
    out = []
    for name in wanted:
        candidate = name
        while candidate in taken:
            candidate += "'"
        taken.add(candidate)
        out.append(candidate)
    return out


@dataclass
class ProductAlgebra:
    algebra: FPAlgebra
    factors: list[FPAlgebra]
    e_names: list[str]
    idempotents: list[Poly]           # e_i in the product's ambient ring
    factor_renames: list[dict[str, str]]

    def embed_element(self, i: int, f: Poly) -> Poly:
        """(0, .., f, .., 0) with f in slot i."""
        moved = f.rename_into(self.algebra.ambient, self.factor_renames[i])
        return self.algebra.nf(self.idempotents[i] * moved)

    def projection(self, i: int) -> RingMap:
        """prod B_j -> B_i killing the other slots."""
        factor = self.factors[i]
        reverse: dict[str, tuple[int, str]] = {}
        for j, ren in enumerate(self.factor_renames):
            for orig, new in ren.items():
                reverse[new] = (j, orig)
        images = []
        for v in self.algebra.ambient.variables:
            if v in self.e_names:
                images.append(factor.one() if self.e_names.index(v) == i
                              else factor.zero())
            else:
                j, orig = reverse[v]
                images.append(factor.ambient.var(orig) if j == i else factor.zero())
        return RingMap(self.algebra, factor, images, check=False)


def product_algebra(factors: Sequence[FPAlgebra]) -> ProductAlgebra:
    """Finite product of f.p. algebras, presented with explicit orthogonal
    idempotents e_1..e_n summing to 1."""
    if not factors:
        raise ValueError("empty product")
    field = factors[0].field
    for f in factors:
        if f.field is not field:
            raise RingMismatch("factors over different fields")
    n = len(factors)
    taken: set[str] = set()
    e_names = _fresh_names([f"e{i+1}" for i in range(n)], taken)
    renames: list[dict[str, str]] = []
    var_names: list[str] = list(e_names)
    for f in factors:
        fresh = _fresh_names(f.ambient.variables, taken)
        renames.append(dict(zip(f.ambient.variables, fresh)))
        var_names.extend(fresh)
    ring = PolyRing(field, var_names)
    es = [ring.var(e) for e in e_names]
    rels: list[Poly] = []
    for i in range(n):
        rels.append(es[i] * es[i] - es[i])
        for j in range(i + 1, n):
            rels.append(es[i] * es[j])
    rels.append(sum(es[1:], es[0]) - ring.one())
    for i, f in enumerate(factors):
        for v in f.ambient.variables:
            w = ring.var(renames[i][v])
            rels.append(w - es[i] * w)    # variables supported in their slot
        for g in f.relations.generators:
            rels.append(es[i] * g.rename_into(ring, renames[i]))
    nonzero = sum(0 if f.is_zero_ring() else 1 for f in factors)
    if n == 1:
        connected = factors[0].connected
    else:
        connected = False if nonzero > 1 else None
    algebra = FPAlgebra(ring, rels, allow_zero=(nonzero == 0), connected=connected)
    return ProductAlgebra(algebra, list(factors), e_names, es, renames)


def product_map(maps: Sequence[RingMap], product: ProductAlgebra | None = None):
    """A -> prod B_i from maps phi_i: A -> B_i with a shared source."""
    if not maps:
        raise ValueError("empty product map")
    source = maps[0].source
    for m in maps:
        if not m.source.same_presentation(source):
            raise InvalidRingMap("product map needs a shared source")
    if product is None:
        product = product_algebra([m.target for m in maps])
    images = []
    for i in range(source.ambient.nvars):
        total = product.algebra.zero()
        for j, m in enumerate(maps):
            total = total + product.embed_element(j, m.images[i])
        images.append(total)
    return RingMap(source, product.algebra, images), product


def product_of_maps(maps: Sequence[RingMap],
                    src_prod: ProductAlgebra | None = None,
                    tgt_prod: ProductAlgebra | None = None
                    ) -> tuple[RingMap, ProductAlgebra, ProductAlgebra]:
    """prod A_i -> prod B_i acting factorwise."""
    if not maps:
        raise ValueError("empty product of maps")
    src_prod = src_prod or product_algebra([m.source for m in maps])
    tgt_prod = tgt_prod or product_algebra([m.target for m in maps])
    images = []
    for v in src_prod.algebra.ambient.variables:
        if v in src_prod.e_names:
            i = src_prod.e_names.index(v)
            images.append(tgt_prod.idempotents[i])
            continue
        hit = None
        for i, ren in enumerate(src_prod.factor_renames):
            for orig, new in ren.items():
                if new == v:
                    hit = (i, orig)
        i, orig = hit
        im_i = maps[i].images[maps[i].source.ambient._var_index[orig]]
        images.append(tgt_prod.embed_element(i, im_i))
    return (RingMap(src_prod.algebra, tgt_prod.algebra, images, check=False),
            src_prod, tgt_prod)


@dataclass
class Pushout:
    algebra: FPAlgebra                 # A' ⊗_A B
    from_base: RingMap                 # A' -> A'⊗B   (the base-changed map)
    from_other: RingMap                # B  -> A'⊗B


def pushout(phi: RingMap, along: RingMap) -> Pushout:
    """A'⊗_A B for phi: A -> B and along: A -> A'."""
    if not phi.source.same_presentation(along.source):
        raise InvalidRingMap("pushout needs a shared source")
    field = phi.source.field
    taken: set[str] = set()
    left_names = _fresh_names(along.target.ambient.variables, taken)
    right_names = _fresh_names(phi.target.ambient.variables, taken)
    left_map = dict(zip(along.target.ambient.variables, left_names))
    right_map = dict(zip(phi.target.ambient.variables, right_names))
    ring = PolyRing(field, left_names + right_names)
    rels = [g.rename_into(ring, left_map) for g in along.target.relations.generators]
    rels += [g.rename_into(ring, right_map) for g in phi.target.relations.generators]
    for im_left, im_right in zip(along.images, phi.images):
        rels.append(im_left.rename_into(ring, left_map)
                    - im_right.rename_into(ring, right_map))
    algebra = FPAlgebra(ring, rels, allow_zero=True)
    from_base = RingMap(along.target, algebra,
                        [ring.var(left_map[v]) for v in along.target.ambient.variables],
                        check=False)
    from_other = RingMap(phi.target, algebra,
                         [ring.var(right_map[v]) for v in phi.target.ambient.variables],
                         check=False)
    return Pushout(algebra, from_base, from_other)


def zariski_cover_piece(a: FPAlgebra, f: Poly, inverse_name: str) -> tuple[FPAlgebra, RingMap]:
    """A[u]/(u·f − 1) with its structure map."""
    taken = set(a.ambient.variables)
    name = _fresh_names([inverse_name], taken)[0]
    ring = PolyRing(a.field, a.ambient.variables + (name,))
    rels = [g.rename_into(ring) for g in a.relations.generators]
    rels.append(ring.var(name) * f.rename_into(ring) - ring.one())
    piece = FPAlgebra(ring, rels, allow_zero=True)
    return piece, RingMap(a, piece, [ring.var(v) for v in a.ambient.variables], check=False)
