"""Diagonal p-power forms <a_1, ..., a_n> and their invariants.

A form evaluates as phi(x) = sum_i a_i * x_i^p, so it is determined by its
coefficient list over a field tower.  Additivity of p-th powers makes every
linear change of basis diagonal again (phi(sum y_i w_i) = sum y_i^p phi(w_i)),
which keeps all subform construction purely coefficient-based.

Zero coefficients are allowed; they only ever contribute to the defect index.
The empty (dimension-0) form exists solely as a degenerate result of
`divisibility_extract` and is accepted back only by `direct_sum` / `tensor`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IsotropicInput, PthPowerRadicand, TowerMismatch, ZeroForm
from .fieldtower import (FieldTower, TowerElement, dependent_indices,
                         in_ppower_span, independent_vectors, is_pth_power,
                         ppower_span_rank, semilinear_kernel,
                         span_intersection)


@dataclass(frozen=True)
class QuasilinearForm:
    tower: FieldTower
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        for c in self.coeffs:
            if not (c.tower is self.tower or c.tower == self.tower):
                raise TowerMismatch("coefficient from a different tower")

    @classmethod
    def of(cls, tower: FieldTower, coeffs) -> "QuasilinearForm":
        return cls(tower, tuple(coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def is_zero_form(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def evaluate(self, vector) -> TowerElement:
        acc = self.tower.zero()
        for c, x in zip(self.coeffs, vector):
            if not c.is_zero() and not x.is_zero():
                acc = acc + c * x.frobenius()
        return acc

    def lift_to(self, tower: FieldTower) -> "QuasilinearForm":
        if tower == self.tower:
            return self
        return QuasilinearForm(tower, tuple(tower.embed(c) for c in self.coeffs))

    def render(self) -> str:
        return "<" + ", ".join(c.render() for c in self.coeffs) + ">"

    def __repr__(self):
        return f"Form[{self.tower!r}]{self.render()}"


# -- basic invariants ----------------------------------------------------------


def defect_index(phi: QuasilinearForm) -> int:
    """Dimension of the subspace of isotropic vectors."""
    if phi.dim == 0:
        return 0
    return phi.dim - ppower_span_rank(phi.coeffs)


def is_anisotropic(phi: QuasilinearForm) -> bool:
    return defect_index(phi) == 0


def anisotropic_part(phi: QuasilinearForm) -> QuasilinearForm:
    """Greedy left-to-right subform with the same value span and defect 0."""
    if phi.dim == 0:
        return phi
    dep = dependent_indices(phi.coeffs)
    kept = tuple(c for i, c in enumerate(phi.coeffs) if i not in dep)
    return QuasilinearForm(phi.tower, kept)


# -- constructions --------------------------------------------------------------


def direct_sum(phi: QuasilinearForm, psi: QuasilinearForm) -> QuasilinearForm:
    if phi.tower != psi.tower:
        raise TowerMismatch("direct sum across different towers")
    return QuasilinearForm(phi.tower, phi.coeffs + psi.coeffs)


def tensor(phi: QuasilinearForm, psi: QuasilinearForm) -> QuasilinearForm:
    if phi.tower != psi.tower:
        raise TowerMismatch("tensor product across different towers")
    out = []
    for a in phi.coeffs:
        for b in psi.coeffs:
            out.append(a * b)
    return QuasilinearForm(phi.tower, tuple(out))


def scale(a: TowerElement, phi: QuasilinearForm) -> QuasilinearForm:
    if a.is_zero():
        raise ValueError("scaling by zero")
    if a.tower != phi.tower:
        raise TowerMismatch("scalar from a different tower")
    return QuasilinearForm(phi.tower, tuple(a * c for c in phi.coeffs))


def pfister_factor(tower: FieldTower, g: TowerElement) -> QuasilinearForm:
    """<1, g, g^2, ..., g^(p-1)>."""
    coeffs = [tower.one()]
    for _ in range(tower.p - 1):
        coeffs.append(coeffs[-1] * g)
    return QuasilinearForm(tower, tuple(coeffs))


def quasi_pfister(tower: FieldTower, gens) -> QuasilinearForm:
    """<<g_1, ..., g_n>>, the tensor product of the p-element factors."""
    acc = QuasilinearForm(tower, (tower.one(),))
    for g in gens:
        acc = tensor(acc, pfister_factor(tower, g))
    return acc


# -- norm form -------------------------------------------------------------------


def _norm_generators(phi: QuasilinearForm) -> list:
    """Greedy p-independent generators of the value field of phi (scaled)."""
    pivot = next((c for c in phi.coeffs if not c.is_zero()), None)
    if pivot is None:
        raise ZeroForm("norm form of the zero form is undefined")
    inv_pivot = pivot.inv()
    gens = []
    monomials = [phi.tower.one()]
    for c in phi.coeffs:
        if c.is_zero():
            continue
        g = c * inv_pivot
        if in_ppower_span(g, monomials):
            continue
        gens.append(g)
        gpow = [phi.tower.one()]
        for _ in range(phi.tower.p - 1):
            gpow.append(gpow[-1] * g)
        monomials = [m * ge for ge in gpow for m in monomials]
    return gens


def norm_form(phi: QuasilinearForm) -> QuasilinearForm:
    """Smallest anisotropic <<...>> containing a scalar multiple of phi_an."""
    return quasi_pfister(phi.tower, _norm_generators(phi))


def norm_degree(phi: QuasilinearForm) -> int:
    return phi.tower.p ** len(_norm_generators(phi))


# -- subform tests ----------------------------------------------------------------


def _require_anisotropic(phi: QuasilinearForm, name: str):
    if defect_index(phi) != 0:
        raise IsotropicInput(f"{name} must be anisotropic")


def is_subform(psi: QuasilinearForm, phi: QuasilinearForm) -> bool:
    """psi embeds in phi; valid for anisotropic forms (value-span test)."""
    if psi.tower != phi.tower:
        raise TowerMismatch("subform test across different towers")
    _require_anisotropic(psi, "subform candidate")
    _require_anisotropic(phi, "ambient form")
    if psi.dim > phi.dim:
        return False
    gens = list(phi.coeffs)
    return all(in_ppower_span(c, gens) for c in psi.coeffs)


def is_isomorphic(psi: QuasilinearForm, phi: QuasilinearForm) -> bool:
    if psi.tower != phi.tower:
        raise TowerMismatch("isomorphism test across different towers")
    _require_anisotropic(psi, "first form")
    _require_anisotropic(phi, "second form")
    return psi.dim == phi.dim and is_subform(psi, phi)


# -- behaviour under K(a^(1/p)) ----------------------------------------------------


def _check_radicand(phi: QuasilinearForm, a: TowerElement):
    if a.tower != phi.tower:
        raise TowerMismatch("radicand from a different tower")
    if a.is_zero() or is_pth_power(a):
        raise PthPowerRadicand(
            "a must lie outside K^p for K(a^(1/p)) to be a proper extension")


def pinsep_index(phi: QuasilinearForm, a: TowerElement) -> int:
    """Defect index of phi over K(a^(1/p)), computed entirely in K."""
    _check_radicand(phi, a)
    total = defect_index(tensor(pfister_factor(phi.tower, a), phi))
    if total % phi.tower.p:
        raise AssertionError("defect of <<a>> (x) phi not divisible by p")
    return total // phi.tower.p


def _fa_independent_subset(coeffs, a: TowerElement, tower: FieldTower) -> list:
    """Greedy subset of coeffs staying independent over K^p(a).

    These coefficients present the anisotropic part of the form over
    K(a^(1/p)) without ever leaving K: the value span there is the
    K^p(a)-span of the original coefficients, and K^p(a) has 1, a, ...,
    a^(p-1) as a K^p-basis.
    """
    apow = [tower.one()]
    for _ in range(tower.p - 1):
        apow.append(apow[-1] * a)
    kept = []
    membership = []
    for c in coeffs:
        if c.is_zero():
            continue
        if membership and in_ppower_span(c, membership):
            continue
        kept.append(c)
        membership.extend(ae * c for ae in apow)
    return kept


def pinsep_small_subform(phi: QuasilinearForm, a: TowerElement,
                         m: int) -> QuasilinearForm:
    """Subform psi of phi with dim <= p*m and defect >= m over K(a^(1/p))."""
    _check_radicand(phi, a)
    _require_anisotropic(phi, "form")
    if m < 1:
        raise ValueError("m must be at least 1")
    if pinsep_index(phi, a) < m:
        raise ValueError(f"form has defect < {m} over the extension")
    tower = phi.tower
    p = tower.p
    apow = [tower.one()]
    for _ in range(p - 1):
        apow.append(apow[-1] * a)

    def recurse(coeffs, need):
        n = len(coeffs)
        kernel = semilinear_kernel([(apow[e] * c,)
                                    for c in coeffs for e in range(p)])
        if not kernel:
            raise AssertionError("expected an isotropic vector over K(a^(1/p))")
        d = kernel[0]
        support = []
        for e in range(p):
            vec = tuple(d[j * p + e] for j in range(n))
            if any(not x.is_zero() for x in vec):
                support.append(vec)
        zero, one = tower.zero(), tower.one()
        unit = [tuple(one if i == j else zero for i in range(n))
                for j in range(n)]
        kept_idx = independent_vectors(support + unit)
        basis = [(support + unit)[i] for i in kept_idx][:n]
        form = QuasilinearForm(tower, coeffs)
        values = [form.evaluate(w) for w in basis]
        k = len([i for i in kept_idx if i < len(support)])
        sigma, rest = values[:k], values[k:]
        if need == 1:
            return sigma
        eta = _fa_independent_subset(sigma, a, tower)
        drop = k - len(eta)
        remaining = need - drop
        if remaining <= 0:
            return sigma
        sub = recurse(tuple(eta) + tuple(rest), remaining)
        merged = anisotropic_part(QuasilinearForm(tower, tuple(sub) + tuple(sigma)))
        return list(merged.coeffs)

    psi = recurse(phi.coeffs, m)
    return QuasilinearForm(tower, tuple(psi))


def divisibility_extract(phi: QuasilinearForm, a: TowerElement) -> QuasilinearForm:
    """tau with <<a>> (x) tau a subform of phi; maximal for p = 2.

    For p = 2 the result has dimension exactly the defect of phi over
    K(a^(1/2)); for larger p only the generic lower bound
    (p^2-p-1)*i - (p^2-2p)*dim(phi) is certified (when it is positive),
    so a small tau never disproves divisibility.
    """
    _check_radicand(phi, a)
    _require_anisotropic(phi, "form")
    tower = phi.tower
    p = tower.p
    index = pinsep_index(phi, a)
    psi = _fa_independent_subset(phi.coeffs, a, tower)
    if not psi:
        return QuasilinearForm(tower, ())
    apow = [tower.one()]
    for _ in range(p - 1):
        apow.append(apow[-1] * a)
    basis = list(psi)
    for i in range(1, p):
        scaled = [apow[p - i] * c for c in phi.coeffs if not c.is_zero()]
        if not basis:
            break
        basis = span_intersection(basis, scaled)
    tau = QuasilinearForm(tower, tuple(basis))
    if p == 2 and tau.dim != index:
        raise AssertionError(
            f"dimension {tau.dim} of the extracted factor differs from the "
            f"extension defect {index}")
    if p > 2:
        bound = (p * p - p - 1) * index - (p * p - 2 * p) * phi.dim
        if bound >= 1 and tau.dim < bound:
            raise AssertionError(
                f"extracted factor smaller than guaranteed bound {bound}")
    if tau.dim:
        product = tensor(pfister_factor(tower, a), tau)
        if not is_subform(product, phi):
            raise AssertionError("<<a>> (x) tau is not a subform of phi")
    return tau


# -- summary ---------------------------------------------------------------------


@dataclass(frozen=True)
class FormInvariants:
    dim: int
    i0: int
    an_dim: int
    ndeg: int
    height: int


def form_invariants(phi: QuasilinearForm) -> FormInvariants:
    if phi.dim == 0 or phi.is_zero_form():
        raise ZeroForm("invariants of the zero form are undefined")
    i0 = defect_index(phi)
    ndeg = norm_degree(phi)
    height = 0
    n = ndeg
    while n > 1:
        n //= phi.tower.p
        height += 1
    return FormInvariants(dim=phi.dim, i0=i0, an_dim=phi.dim - i0,
                          ndeg=ndeg, height=height)
