"""Standard splitting towers and patterns.

Given an anisotropic kernel of dimension >= 2, its function field is
presented homogeneously: fresh transcendentals x_2..x_n, one per coefficient
past the pivot, followed by the degree-p root of
u = (a_2 x_2^p + ... + a_n x_n^p) / a_1.  This is the function field of the
affine cone, a purely transcendental extension of the projective one, which
leaves every defect and norm-degree computation unchanged while avoiding a
distinguished affine chart (the sign of u is irrelevant because -1 is a p-th
power in characteristic p).

Iterating kernel -> function field -> anisotropic part until dimension 1
yields the splitting pattern along with the per-level classification
(quasi-Pfister neighbour flags, first neighbour level, maximal splitting).
The height is also available directly as log_p of the norm degree, and the
tower construction cross-checks itself against that cheap path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CompletelySplit, DimensionOne, ResourceCap, ZeroForm
from .fieldtower import FieldTower
from .forms import QuasilinearForm, anisotropic_part, norm_degree


@dataclass(frozen=True)
class ResourceCaps:
    """Presentation-size limits for tower construction."""
    max_vars: int = 24
    max_roots: int = 8


DEFAULT_CAPS = ResourceCaps()


@dataclass(frozen=True)
class TowerLevel:
    field: FieldTower
    form: QuasilinearForm  # the anisotropic kernel over `field`


@dataclass(frozen=True)
class SplittingReport:
    dim: int
    i0: int
    pattern: tuple
    indices: tuple
    height: int
    ndeg: int
    hqp: int | None
    qpn_flags: tuple
    izh_dim: int | None
    maximal: bool | None

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "i0": self.i0,
            "pattern": list(self.pattern),
            "indices": list(self.indices),
            "height": self.height,
            "ndeg": self.ndeg,
            "hqp": self.hqp,
            "qpn": self.qpn_flags[0] if self.qpn_flags else None,
            "izh_dim": self.izh_dim,
            "maximal": self.maximal,
        }


def _power_floor(p: int, d: int) -> int:
    """The unique n with p^n < d <= p^(n+1), for d >= 2."""
    n = 0
    while p ** (n + 1) < d:
        n += 1
    return n


def _fresh(tower: FieldTower, base: str) -> str:
    name = base
    taken = set(tower.all_names())
    while name in taken:
        name += "_"
    return name


def function_field(phi: QuasilinearForm, caps: ResourceCaps = DEFAULT_CAPS):
    """(tower, lifted form) for the function field of {phi = 0}."""
    if phi.dim < 2:
        raise DimensionOne("the zero locus of a unary form has no points")
    if phi.is_zero_form():
        raise ZeroForm("the zero form has no function field")
    an = anisotropic_part(phi)
    if an.dim < 2:
        raise CompletelySplit(
            "completely split form: the zero locus is not integral")
    tower = phi.tower
    n = an.dim
    need_vars = len(tower.vars) + n - 1
    if need_vars > caps.max_vars:
        raise ResourceCap("max_vars", caps.max_vars, need_vars)
    if len(tower.roots) + 1 > caps.max_roots:
        raise ResourceCap("max_roots", caps.max_roots, len(tower.roots) + 1)

    level = len(tower.roots) + 1
    big = tower
    fresh_names = []
    for i in range(2, n + 1):
        name = _fresh(big, f"x{level}_{i}")
        fresh_names.append(name)
        big = big.adjoin_transcendental(name)
    pivot = big.embed(an.coeffs[0])
    acc = big.zero()
    for name, c in zip(fresh_names, an.coeffs[1:]):
        x = big.var(name)
        acc = acc + big.embed(c) * x.frobenius()
    # (sum a_i x_i^p)/a_1 scaled by the p-th power a_1^p keeps the radicand
    # denominator-free; the extension, and with it every invariant, is the same
    u = acc
    for _ in range(tower.p - 1):
        u = u * pivot
    extended = big.adjoin_pth_root(u, _fresh(big, f"r{level}"))
    return extended, phi.lift_to(extended)


def splitting_tower(phi: QuasilinearForm, caps: ResourceCaps = DEFAULT_CAPS):
    """Iterate function fields until the kernel is completely split.

    Returns (levels, report) where levels[r] holds the r-th field and its
    anisotropic kernel; levels[0] is the base field with phi's anisotropic
    part.
    """
    if phi.dim == 0 or phi.is_zero_form():
        raise ZeroForm("splitting tower of the zero form is undefined")
    p = phi.tower.p
    kernel = anisotropic_part(phi)
    ndeg0 = norm_degree(kernel)
    levels = [TowerLevel(phi.tower, kernel)]
    pattern = [kernel.dim]
    while kernel.dim > 1:
        extended, lifted = function_field(kernel, caps)
        kernel = anisotropic_part(lifted)
        levels.append(TowerLevel(extended, kernel))
        pattern.append(kernel.dim)

    height = len(pattern) - 1
    if p ** height != ndeg0:
        raise AssertionError(
            f"tower height {height} disagrees with norm degree {ndeg0}")
    indices = tuple(pattern[r - 1] - pattern[r] for r in range(1, height + 1))
    qpn_flags = tuple(
        (height - r) == _power_floor(p, pattern[r]) + 1
        for r in range(height))
    hqp_level = next((r for r, f in enumerate(qpn_flags) if f), None)
    if height >= 1:
        izh = pattern[1] + 1
        m = pattern[0] - p ** _power_floor(p, pattern[0])
        maximal = indices[0] == m
    else:
        izh = None
        maximal = None
    report = SplittingReport(
        dim=phi.dim,
        i0=phi.dim - pattern[0],
        pattern=tuple(pattern),
        indices=indices,
        height=height,
        ndeg=ndeg0,
        hqp=hqp_level,
        qpn_flags=qpn_flags,
        izh_dim=izh,
        maximal=maximal,
    )
    return levels, report


def height(phi: QuasilinearForm) -> int:
    """log_p of the norm degree; no tower is built."""
    p = phi.tower.p
    ndeg = norm_degree(phi)
    h = 0
    while ndeg > 1:
        ndeg //= p
        h += 1
    return h


def qpn_test(phi: QuasilinearForm) -> bool:
    """Anisotropic part is a quasi-Pfister neighbour (smallest height)."""
    an = anisotropic_part(phi)
    if an.dim < 2:
        raise DimensionOne("neighbour classification needs dimension >= 2")
    return height(an) == _power_floor(phi.tower.p, an.dim) + 1


def hqp(phi: QuasilinearForm, caps: ResourceCaps = DEFAULT_CAPS) -> int:
    """First splitting level whose kernel is a quasi-Pfister neighbour."""
    an = anisotropic_part(phi)
    if an.dim < 2:
        raise DimensionOne("neighbour classification needs dimension >= 2")
    _, report = splitting_tower(an, caps)
    return report.hqp


def first_index(phi: QuasilinearForm, caps: ResourceCaps = DEFAULT_CAPS) -> int:
    """i_1: the defect picked up over the form's own function field."""
    an = anisotropic_part(phi)
    if an.dim < 2:
        raise DimensionOne("i_1 needs anisotropic dimension >= 2")
    extended, lifted = function_field(an, caps)
    return an.dim - anisotropic_part(lifted).dim


def max_splitting_test(phi: QuasilinearForm,
                       caps: ResourceCaps = DEFAULT_CAPS) -> bool:
    """i_1 reaches its Hoffmann bound m, where dim = p^n + m."""
    an = anisotropic_part(phi)
    if an.dim < 2:
        raise DimensionOne("maximal splitting needs dimension >= 2")
    p = phi.tower.p
    m = an.dim - p ** _power_floor(p, an.dim)
    return first_index(an, caps) == m
