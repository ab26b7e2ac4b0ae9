"""User-asserted prime points and behavioural localizations.

Primality is trusted, never checked (that would need primary decomposition);
every report downstream carries the assertion.  Localizations at a prime are
membership oracles with witness budgets, not rings: Yes answers return a
certified multiplier, No answers are explicit budget exhaustions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Optional, Sequence

from .algebras import FPAlgebra
from .fpmodules import FPModule
from .ideals import Ideal
from .poly import Poly
from .vectors import Vec


class NotProper(ValueError):
    pass


class PrimePoint:
    def __init__(self, base: FPAlgebra, generators: Sequence[Poly],
                 primality_asserted: bool = True, name: str = ""):
        self.base = base
        self.generators = [g if g.ring == base.ambient else g.rename_into(base.ambient)
                           for g in generators]
        self.primality_asserted = primality_asserted
        self.name = name
        self.ideal = Ideal(base.ambient,
                           self.generators + list(base.relations.generators))
        if self.ideal.contains_one():
            raise NotProper("the asserted prime is the unit ideal")

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"Prime({gens})" + ("" if self.primality_asserted else " [unasserted]")

    def contains(self, f: Poly) -> bool:
        return self.ideal.contains(f)

    def contains_ideal(self, other: Ideal) -> bool:
        return all(self.contains(g) for g in other.generators)

    def equals(self, other: "PrimePoint") -> bool:
        return self.base.same_presentation(other.base) and self.ideal == other.ideal


@dataclass
class LocalKernelAnswer:
    killed: bool                       # s·z = 0 for some s outside the prime
    witness: Optional[Poly] = None     # the multiplier s
    tried: int = 0

    @property
    def no_witness_found(self) -> bool:
        return not self.killed


class LocalizationOracle:
    """Answers 'is z in the kernel of M -> M_p?' by a budget-bounded search
    for a multiplier s outside p with s·z = 0.  Yes answers are certified;
    No answers only report an exhausted budget."""

    def __init__(self, module: FPModule, prime: PrimePoint,
                 max_degree: int = 3, extra_multipliers: Sequence[Poly] = ()):
        if not module.base.same_presentation(prime.base):
            raise ValueError("prime lives over a different base")
        self.module = module
        self.prime = prime
        self.max_degree = max_degree
        self.extra = list(extra_multipliers)

    def _candidates(self):
        ring = self.module.base.ambient
        yield ring.one()
        for s in self.extra:
            yield s
        # normal-form monomials by total degree, then order key
        n = ring.nvars
        def monomials(total: int, nvars: int):
            if nvars == 0:
                if total == 0:
                    yield ()
                return
            for head in range(total + 1):
                for tail in monomials(total - head, nvars - 1):
                    yield (head,) + tail
        for d in range(1, self.max_degree + 1):
            exps = sorted(monomials(d, n), key=ring.order.key)
            for exp in exps:
                yield ring.monomial(exp)

    def query(self, z: Vec) -> LocalKernelAnswer:
        tried = 0
        seen: set = set()
        for s in self._candidates():
            s_nf = self.module.base.nf(s)
            if s_nf.is_zero() or s_nf in seen:
                continue
            seen.add(s_nf)
            if self.prime.contains(s_nf):
                continue
            tried += 1
            if self.module.is_zero_element(z.mul_poly(s_nf)):
                return LocalKernelAnswer(True, s_nf, tried)
        return LocalKernelAnswer(False, None, tried)

    def query_ring_element(self, z: Poly) -> LocalKernelAnswer:
        if self.module.rank != 1:
            raise ValueError("ring-element query needs a rank-1 module")
        return self.query(Vec.from_poly(self.module.base.nf(z)))
