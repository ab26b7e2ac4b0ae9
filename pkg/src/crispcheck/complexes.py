"""Bounded families of modules with differentials, and their cohomology.

A family need not square to zero: whether d∘d = 0 transfers along a crisp
map is itself one of the checked criteria, so the complex property is
tested, never assumed.
"""

from __future__ import annotations

from .algebras import RingMap
from .fpmodules import (FPModule, ModuleMap, base_change_map,
                        base_change_module, kernel_of_map,
                        submodule_membership, tensor_map, tensor_modules)
from .vectors import Vec


class NotAComplexAt(ValueError):
    def __init__(self, index: int):
        super().__init__(f"d∘d is nonzero at index {index}")
        self.index = index


class ComplexOfModules:
    """Modules indexed on a consecutive range with maps d_i: M_i -> M_{i+1}."""

    def __init__(self, base, modules: dict[int, FPModule],
                 differentials: dict[int, ModuleMap]):
        self.base = base
        if not modules:
            raise ValueError("empty complex")
        indices = sorted(modules)
        if indices != list(range(indices[0], indices[-1] + 1)):
            raise ValueError("indices must be consecutive")
        self.lo, self.hi = indices[0], indices[-1]
        self.modules = dict(modules)
        self.differentials = dict(differentials)
        for i, d in differentials.items():
            if d.source is not modules[i] or d.target is not modules.get(i + 1):
                raise ValueError(f"differential at {i} does not match the modules")

    def module(self, i: int) -> FPModule:
        m = self.modules.get(i)
        if m is None:
            from .fpmodules import free_module
            m = free_module(self.base, 0)
        return m

    def diff(self, i: int) -> ModuleMap:
        d = self.differentials.get(i)
        if d is None:
            from .fpmodules import zero_module_map
            d = zero_module_map(self.module(i), self.module(i + 1))
        return d

    def is_complex_at(self, i: int) -> bool:
        """d_i ∘ d_{i-1} = 0."""
        lower = self.differentials.get(i - 1)
        upper = self.differentials.get(i)
        if lower is None or upper is None:
            return True
        return lower.compose(upper).is_zero_map()

    def is_complex(self) -> bool:
        return all(self.is_complex_at(i) for i in range(self.lo, self.hi + 1))

    def base_change(self, phi: RingMap) -> "ComplexOfModules":
        modules = {i: base_change_module(m, phi) for i, m in self.modules.items()}
        diffs = {i: base_change_map(d, phi, modules[i], modules[i + 1])
                 for i, d in self.differentials.items()}
        return ComplexOfModules(phi.target, modules, diffs)

    def tensor_with(self, p: FPModule) -> "ComplexOfModules":
        from .fpmodules import identity_module_map, tensor_maps
        modules = {i: tensor_modules(m, p) for i, m in self.modules.items()}
        idp = identity_module_map(p)
        diffs = {i: tensor_maps(d, idp, modules[i], modules[i + 1])
                 for i, d in self.differentials.items()}
        return ComplexOfModules(self.base, modules, diffs)


class CohomologyData:
    """H^i plus the data needed to map classes around: generators of H^i are
    the kernel generators, held as vectors in M_i."""

    def __init__(self, module: FPModule, kernel: FPModule, incl: ModuleMap):
        self.module = module
        self.kernel = kernel
        self.incl = incl


def cohomology(cx: ComplexOfModules, i: int) -> CohomologyData:
    """ker(d_i)/im(d_{i-1}); requires d∘d = 0 at index i."""
    if not cx.is_complex_at(i):
        raise NotAComplexAt(i)
    d_i = cx.diff(i)
    kernel, incl = kernel_of_map(d_i)
    d_prev = cx.differentials.get(i - 1)
    extra = []
    if d_prev is not None:
        mid = cx.module(i)
        for col in d_prev.columns:
            coeffs = submodule_membership(col, incl.columns, mid.full_relations(),
                                          cx.base)
            if coeffs is None:
                raise RuntimeError("image column escaped the kernel (internal error)")
            vec = Vec.from_polys(coeffs, kernel.rank) if kernel.rank else \
                Vec.zero(cx.base.ambient, 0)
            if not vec.is_zero():
                extra.append(vec)
    h = FPModule(cx.base, kernel.rank, list(kernel.relations) + extra)
    return CohomologyData(h, kernel, incl)


def induced_on_cohomology(cx: ComplexOfModules, dx: ComplexOfModules,
                          chain_maps: dict[int, ModuleMap], i: int) -> ModuleMap:
    """H^i(f) for a chain map f: cx -> dx (both complexes over one base)."""
    hc = cohomology(cx, i)
    hd = cohomology(dx, i)
    f_i = chain_maps[i]
    cols = []
    for g in hc.incl.columns:
        image = f_i.apply_raw(g)
        coeffs = submodule_membership(image, hd.incl.columns,
                                      dx.module(i).full_relations(), dx.base)
        if coeffs is None:
            raise RuntimeError("chain map does not preserve kernels (internal error)")
        cols.append(Vec.from_polys(coeffs, hd.kernel.rank) if hd.kernel.rank
                    else Vec.zero(dx.base.ambient, 0))
    return ModuleMap(hc.module, hd.module, cols, check=False)
