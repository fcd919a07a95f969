"""Finitely generated fields of characteristic p, presented as towers.

A tower is F_p(t_1, ..., t_m) followed by a chain of degree-p adjunctions
r_s = u_s^(1/p), where each radicand u_s lives at a strictly lower stage and
is verified not to be a p-th power there, so stage k has degree p^k over the
base rational function field.  Towers are presentations: two towers are the
same field only if they are literally the same presentation.

Elements are stored at their minimal stage: stage 0 holds a RationalFunction
and stage s > 0 a length-p vector of lower-stage elements (the coefficients
of 1, r_s, ..., r_s^(p-1)).  An element whose top coefficients vanish is
demoted on construction, which makes structural equality agree with equality
in the field.

Because p-th powers are additive in characteristic p, the solution space of
sum_i x_i^p v_i = 0 is a genuine linear subspace, and every rank question
about p-th-power spans reduces to ordinary linear algebra over the base
rational function field: writing the unknowns through the r-monomial basis
turns each element into a block of p^k polynomial columns (its p-th-root
coordinates), and a block is either entirely inside the span of its
predecessors or extends the rank by exactly p^k.  Rank, membership and
greedy-dependence queries therefore run on an incremental polynomial column
echelon and never materialise kernel vectors; `semilinear_kernel` does, for
the callers that need witnesses.
"""

from __future__ import annotations

from .errors import (AlreadyPthPower, DuplicateName, NotAPthPower,
                     TowerMismatch)
from .linalg import SparseEchelon, poly_nullspace
from .polyring import (Polynomial, PrimeModulus, RationalFunction, poly_gcd,
                       poly_divexact, poly_pth_root, split_pth_residues)


class FieldTower:
    """Presentation of F_p(t_1..t_m)(r_1)...(r_k), shared by handle."""

    __slots__ = ("modulus", "vars", "roots", "_sig", "_radicands", "_zero",
                 "_one", "_upows")

    def __init__(self, modulus: PrimeModulus, vars: tuple, roots: tuple):
        # roots: tuple of (name, radicand payload) where the payload is a
        # TowerElement of the parent presentation; validated in adjoin_pth_root.
        self.modulus = modulus
        self.vars = tuple(vars)
        self.roots = tuple(roots)
        self._sig = (modulus.p, self.vars,
                     tuple((n, rad._sig()) for n, rad in self.roots))
        self._radicands = {}
        self._zero = None
        self._one = None
        self._upows = None

    @classmethod
    def rational(cls, p, names=()) -> "FieldTower":
        """The base field F_p(names)."""
        modulus = p if isinstance(p, PrimeModulus) else PrimeModulus(p)
        names = tuple(names)
        if len(set(names)) != len(names):
            raise DuplicateName(f"repeated variable in {names}")
        return cls(modulus, names, ())

    # -- bookkeeping ---------------------------------------------------------

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def stage_count(self) -> int:
        return len(self.roots)

    def all_names(self):
        return self.vars + tuple(n for n, _ in self.roots)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FieldTower) and self._sig == other._sig

    def __hash__(self):
        return hash(self._sig)

    def __repr__(self):
        s = f"F_{self.p}({', '.join(self.vars)})"
        for name, _ in self.roots:
            s += f"({name})"
        return s

    def describe(self):
        """JSON-ready presentation: variables plus root equations."""
        return {
            "p": self.p,
            "vars": list(self.vars),
            "roots": [{"name": n, "radicand": self.radicand(i + 1).render()}
                      for i, (n, _) in enumerate(self.roots)],
        }

    def is_prefix_of(self, other: "FieldTower") -> bool:
        if self.p != other.p:
            return False
        if self.vars != other.vars[:len(self.vars)]:
            return False
        return self._sig[2] == other._sig[2][:len(self.roots)]

    # -- element constructors -------------------------------------------------

    def zero(self) -> "TowerElement":
        if self._zero is None:
            self._zero = TowerElement(self, 0,
                                      RationalFunction.zero(self.modulus))
        return self._zero

    def one(self) -> "TowerElement":
        if self._one is None:
            self._one = TowerElement(self, 0,
                                     RationalFunction.one(self.modulus))
        return self._one

    def const(self, c: int) -> "TowerElement":
        return TowerElement(self, 0, RationalFunction.from_poly(
            Polynomial.const(self.modulus, c)))

    def from_rational(self, rf: RationalFunction) -> "TowerElement":
        return TowerElement(self, 0, rf)

    def var(self, name: str) -> "TowerElement":
        if name in self.vars:
            idx = self.vars.index(name)
            return TowerElement(self, 0, RationalFunction.from_poly(
                Polynomial.variable(self.modulus, idx)))
        for s, (n, _) in enumerate(self.roots, start=1):
            if n == name:
                return self.root(s)
        raise KeyError(f"no variable or root named {name!r}")

    def root(self, stage: int) -> "TowerElement":
        """The generator r_stage as an element (payload (0, 1, 0, ...))."""
        if not 1 <= stage <= len(self.roots):
            raise IndexError(f"stage {stage} out of range")
        vec = [self.zero()] * self.p
        vec[1] = self.one()
        return TowerElement(self, stage, tuple(vec))

    def radicand(self, stage: int) -> "TowerElement":
        """u with r_stage^p = u, re-handled onto this tower (cached)."""
        if stage not in self._radicands:
            payload = self.roots[stage - 1][1]
            self._radicands[stage] = _rehandle(payload, self)
        return self._radicands[stage]

    def radicand_powers(self):
        """All products u_1^(e_1) ... u_k^(e_k) with 0 <= e_i < p, cached.

        Index order matches the r-monomial expansion used by `_flatten`.
        """
        if self._upows is None:
            prods = [self.one()]
            for s in range(1, self.stage_count + 1):
                u = self.radicand(s)
                nxt = []
                for q in prods:
                    cur = q
                    nxt.append(cur)
                    for _ in range(self.p - 1):
                        cur = cur * u
                        nxt.append(cur)
                prods = nxt
            self._upows = tuple(prods)
        return self._upows

    def embed(self, x: "TowerElement") -> "TowerElement":
        """Reinterpret an element of a prefix tower in this tower."""
        if x.tower is self:
            return x
        if not x.tower.is_prefix_of(self):
            raise TowerMismatch(f"{x.tower!r} is not a prefix of {self!r}")
        return _rehandle(x, self)

    # -- construction of larger towers ----------------------------------------

    def adjoin_transcendental(self, name: str) -> "FieldTower":
        if name in self.all_names():
            raise DuplicateName(f"{name!r} already used in {self!r}")
        return FieldTower(self.modulus, self.vars + (name,), self.roots)

    def adjoin_pth_root(self, u: "TowerElement", name: str) -> "FieldTower":
        if name in self.all_names():
            raise DuplicateName(f"{name!r} already used in {self!r}")
        if u.tower != self:
            raise TowerMismatch("radicand must live in this tower")
        if u.is_zero():
            raise ValueError("zero radicand")
        if is_pth_power(u):
            raise AlreadyPthPower(
                f"radicand {u!r} is already a p-th power; "
                f"the adjunction would be trivial")
        return FieldTower(self.modulus, self.vars, self.roots + ((name, u),))


def _rehandle(x: "TowerElement", tower: FieldTower) -> "TowerElement":
    if x.stage == 0:
        return TowerElement(tower, 0, x.payload)
    return TowerElement(tower, x.stage,
                        tuple(_rehandle(c, tower) for c in x.payload))


class TowerElement:
    """An element of a tower stage; immutable, minimal-stage canonical."""

    __slots__ = ("tower", "stage", "payload", "_zero", "_sig_cache")

    def __init__(self, tower: FieldTower, stage: int, payload):
        # demote to the minimal stage so equality is structural
        while stage > 0 and all(c.is_zero() for c in payload[1:]):
            inner = payload[0]
            stage, payload = inner.stage, inner.payload
        self.tower = tower
        self.stage = stage
        self.payload = payload
        self._zero = None
        self._sig_cache = None

    # -- structure ------------------------------------------------------------

    def is_zero(self) -> bool:
        if self._zero is None:
            if self.stage == 0:
                self._zero = self.payload.is_zero()
            else:
                self._zero = all(c.is_zero() for c in self.payload)
        return self._zero

    def is_one(self) -> bool:
        return self.stage == 0 and self.payload.is_one()

    def __bool__(self):
        return not self.is_zero()

    def _sig(self):
        if self._sig_cache is None:
            if self.stage == 0:
                self._sig_cache = (0, self.payload)
            else:
                self._sig_cache = (self.stage,
                                   tuple(c._sig() for c in self.payload))
        return self._sig_cache

    def __eq__(self, other):
        if not isinstance(other, TowerElement):
            return NotImplemented
        return (self.tower == other.tower and self.stage == other.stage
                and self._sig() == other._sig())

    def __hash__(self):
        return hash(self._sig())

    def components(self, stage: int):
        """Coefficients of 1, r_stage, ..., r_stage^(p-1) at the given stage."""
        if self.stage == stage:
            return list(self.payload) if stage > 0 else [self]
        if self.stage > stage:
            raise ValueError("cannot view element below its stage")
        out = [self.tower.zero()] * self.tower.p
        out[0] = self
        return out

    def complexity(self) -> int:
        if self.stage == 0:
            return self.payload.complexity()
        return sum(c.complexity() for c in self.payload)

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other: "TowerElement"):
        if self.tower is other.tower or self.tower == other.tower:
            return
        raise TowerMismatch(f"{self.tower!r} vs {other.tower!r}")

    def __add__(self, other: "TowerElement") -> "TowerElement":
        self._coerce(other)
        s = max(self.stage, other.stage)
        if s == 0:
            return TowerElement(self.tower, 0, self.payload + other.payload)
        a = self.components(s)
        b = other.components(s)
        return TowerElement(self.tower, s,
                            tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "TowerElement":
        if self.tower.p == 2:
            return self
        if self.stage == 0:
            return TowerElement(self.tower, 0, -self.payload)
        return TowerElement(self.tower, self.stage,
                            tuple(-c for c in self.payload))

    def __sub__(self, other: "TowerElement") -> "TowerElement":
        return self + (-other)

    def __mul__(self, other: "TowerElement") -> "TowerElement":
        self._coerce(other)
        s = max(self.stage, other.stage)
        if s == 0:
            return TowerElement(self.tower, 0, self.payload * other.payload)
        if self.is_zero() or other.is_zero():
            return self.tower.zero()
        p = self.tower.p
        a = self.components(s)
        b = other.components(s)
        zero = self.tower.zero()
        acc = [zero] * (2 * p - 1)
        for i, ai in enumerate(a):
            if ai.is_zero():
                continue
            for j, bj in enumerate(b):
                if bj.is_zero():
                    continue
                acc[i + j] = acc[i + j] + ai * bj
        u = self.tower.radicand(s)
        out = list(acc[:p])
        for k in range(p, 2 * p - 1):
            if not acc[k].is_zero():
                out[k - p] = out[k - p] + u * acc[k]
        return TowerElement(self.tower, s, tuple(out))

    def frobenius(self) -> "TowerElement":
        """x^p; lands at least one stage down (r_s^p collapses to u_s)."""
        if self.stage == 0:
            return TowerElement(self.tower, 0, self.payload.frobenius())
        u = self.tower.radicand(self.stage)
        acc = self.tower.zero()
        upow = self.tower.one()
        for e, c in enumerate(self.payload):
            if e:
                upow = upow * u
            if not c.is_zero():
                acc = acc + c.frobenius() * upow
        return acc

    def inv(self) -> "TowerElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero tower element")
        if self.stage == 0:
            return TowerElement(self.tower, 0, self.payload.inv())
        # x^(p-1) / x^p, with x^p = frobenius(x) at a strictly lower stage
        power = self.tower.one()
        for _ in range(self.tower.p - 1):
            power = power * self
        return power * self.frobenius().inv()

    def __truediv__(self, other: "TowerElement") -> "TowerElement":
        return self * other.inv()

    def __pow__(self, n: int) -> "TowerElement":
        if n < 0:
            return self.inv() ** (-n)
        out = self.tower.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # -- rendering ---------------------------------------------------------------

    def render(self, names=None) -> str:
        if names is None:
            names = self.tower.all_names()
        if self.stage == 0:
            return self.payload.render(names)
        rname = self.tower.roots[self.stage - 1][0]
        parts = []
        for e in range(self.tower.p - 1, -1, -1):
            c = self.payload[e]
            if c.is_zero():
                continue
            cs = c.render(names)
            if e == 0:
                parts.append(cs)
                continue
            re = rname if e == 1 else f"{rname}^{e}"
            if c.is_one():
                parts.append(re)
            elif _is_atomic(cs):
                parts.append(f"{cs}*{re}")
            else:
                parts.append(f"({cs})*{re}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"Elem[{self.tower!r}]({self.render()})"


def _is_atomic(s: str) -> bool:
    return "+" not in s and "/" not in s


def frobenius(x: TowerElement) -> TowerElement:
    return x.frobenius()


# -- stage-0 coordinates --------------------------------------------------------


def _flatten(x: TowerElement, stage: int):
    """Coordinates of x over the r-monomial basis, as RationalFunctions."""
    if stage == 0:
        return [x.payload]
    out = []
    for c in x.components(stage):
        out.extend(_flatten(c, stage - 1))
    return out


def _clear_denominators(coords, modulus, pth_power=False):
    """Scale a coordinate list to polynomials (column scaling).

    With `pth_power` the list is scaled by D^p for D the common denominator,
    which commutes with taking p-th-root coordinates afterwards.
    """
    one = Polynomial.const(modulus, 1)
    lcm = one
    for rf in coords:
        den = rf.den
        if not den.is_one():
            g = poly_gcd(lcm, den)
            lcm = lcm * (den if g.is_one() else poly_divexact(den, g))
    if lcm.is_one():
        return [rf.num for rf in coords]
    mult = lcm
    if pth_power:
        for _ in range(modulus.p - 1):
            mult = mult * lcm
    return [rf.num * (mult if rf.den.is_one()
                      else poly_divexact(mult, rf.den))
            for rf in coords]


class SemilinearRank:
    """Incremental rank over K^p of tower elements.

    Each added element contributes a block of p^k polynomial columns (its
    p-th-root coordinates against the r-monomial basis, one column per
    radicand-power multiple); a block either lies in the span of its
    predecessors or is entirely independent of it, so a single column decides.
    """

    def __init__(self, tower: FieldTower):
        self.tower = tower
        self.ech = SparseEchelon(tower.modulus)
        self.rank = 0

    def _columns(self, x: TowerElement):
        tower = self.tower
        stage = tower.stage_count
        cols = []
        for upow in tower.radicand_powers():
            prod = x if upow.is_one() else upow * x
            coords = _flatten(prod, stage)
            polys = _clear_denominators(coords, tower.modulus, pth_power=True)
            col = {}
            for mono_idx, poly in enumerate(polys):
                if poly.is_zero():
                    continue
                for res, gamma in split_pth_residues(poly).items():
                    col[(mono_idx, res)] = gamma
            cols.append(col)
        return cols

    def add(self, x: TowerElement) -> bool:
        """Insert x; True if it was independent of everything added before."""
        if x.is_zero():
            return False
        cols = self._columns(x)
        if not self.ech.insert(cols[0]):
            return False
        for col in cols[1:]:
            if not self.ech.insert(col):
                raise AssertionError("partial rank jump in a p-power block")
        self.rank += 1
        return True

    def contains(self, x: TowerElement) -> bool:
        """x in the K^p-span of the added elements (nothing is inserted)."""
        if x.is_zero():
            return True
        return not self.ech.reduces_to_nonzero(self._columns(x)[0])


def ppower_span_rank(elements) -> int:
    """dim over K^p of the K^p-span of the given elements."""
    elements = list(elements)
    if not elements:
        raise ValueError("need at least one element")
    tower = elements[0].tower
    tracker = SemilinearRank(tower)
    for e in elements:
        if not (e.tower is tower or e.tower == tower):
            raise TowerMismatch("mixed towers in rank input")
        tracker.add(e)
    return tracker.rank


def dependent_indices(elements) -> set:
    """Indices i with elements[i] in the K^p-span of elements[:i]."""
    elements = list(elements)
    if not elements:
        return set()
    tracker = SemilinearRank(elements[0].tower)
    return {i for i, e in enumerate(elements) if not tracker.add(e)}


def in_ppower_span(x: TowerElement, gens) -> bool:
    tracker = SemilinearRank(x.tower)
    for g in gens:
        tracker.add(g)
    return tracker.contains(x)


def is_pth_power(x: TowerElement) -> bool:
    """x in K^p, where K is the element's tower."""
    if x.is_zero():
        return True
    if x.stage == 0 and x.tower.stage_count == 0:
        # over the plain rational function field: check exponents directly
        try:
            poly_pth_root(x.payload.num)
            poly_pth_root(x.payload.den)
            return True
        except NotAPthPower:
            return False
    tracker = SemilinearRank(x.tower)
    tracker.add(x.tower.one())
    return tracker.contains(x)


# -- ordinary linear independence over the tower ---------------------------------


def independent_vectors(vectors, stage=None) -> list:
    """Greedy indices of vectors (over a common tower) independent over it.

    Ordinary linear independence: each candidate expands to a block of p^k
    stage-0 polynomial columns (one per r-monomial multiple); blocks are
    all-or-nothing just as for p-power spans.  `stage` restricts the ambient
    field to the subtower K_stage (entries must live at or below it); the
    answer agrees with independence over the full tower.
    """
    vectors = list(vectors)
    if not vectors:
        return []
    tower = vectors[0][0].tower
    p = tower.p
    if stage is None:
        stage = tower.stage_count
    rmonos = [tower.one()]
    for s in range(1, stage + 1):
        r = tower.root(s)
        nxt = []
        for q in rmonos:
            cur = q
            nxt.append(cur)
            for _ in range(p - 1):
                cur = cur * r
                nxt.append(cur)
        rmonos = nxt
    ech = SparseEchelon(tower.modulus)
    kept = []
    for j, vec in enumerate(vectors):
        first = None
        cols = []
        for rm in rmonos:
            coords = []
            for comp in vec:
                prod = comp if rm.is_one() else rm * comp
                coords.extend(_flatten(prod, stage))
            polys = _clear_denominators(coords, tower.modulus)
            col = {i: e for i, e in enumerate(polys) if not e.is_zero()}
            if first is None:
                first = col
            else:
                cols.append(col)
        if not ech.insert(first):
            continue
        for col in cols:
            if not ech.insert(col):
                raise AssertionError("partial rank jump in an r-power block")
        kept.append(j)
    return kept


# -- Frobenius-semilinear kernels -------------------------------------------------


def semilinear_kernel(vectors) -> list:
    """Basis of {x in K^n : sum_i x_i^p * v_i = 0 componentwise}.

    `vectors` is a nonempty list of equal-length sequences of TowerElements
    over a common tower K.  The result is a list of length-n tuples over K.
    """
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        raise ValueError("need at least one vector")
    width = len(vectors[0])
    if width == 0 or any(len(v) != width for v in vectors):
        raise ValueError("vectors must share a nonzero length")
    tower = vectors[0][0].tower
    for v in vectors:
        for e in v:
            if not (e.tower is tower or e.tower == tower):
                raise TowerMismatch("mixed towers in kernel input")
    return _kernel_at_stage(tower, vectors, tower.stage_count)


def _kernel_at_stage(tower: FieldTower, vectors, stage: int) -> list:
    n = len(vectors)
    p = tower.p
    if stage == 0:
        return _kernel_base(tower, vectors)

    u = tower.radicand(stage)
    upow = [tower.one()]
    for _ in range(p - 1):
        upow.append(upow[-1] * u)

    expanded = []  # per input vector: list over components of r-coefficients
    for v in vectors:
        expanded.append([x.components(stage) for x in v])
    new_vectors = []
    for i in range(n):
        for e in range(p):
            vec = []
            for comps in expanded[i]:
                for f in range(p):
                    w = comps[f]
                    vec.append(w if e == 0 or w.is_zero() else upow[e] * w)
            new_vectors.append(tuple(vec))

    sub_basis = _kernel_at_stage(tower, new_vectors, stage - 1)
    if not sub_basis:
        return []

    lifted = []
    for d in sub_basis:
        xs = []
        for i in range(n):
            xs.append(TowerElement(tower, stage,
                                   tuple(d[i * p + e] for e in range(p))))
        lifted.append(tuple(xs))
    kept = independent_vectors(lifted, stage=stage)
    if len(kept) * p != len(sub_basis):
        raise AssertionError(
            "kernel dimension did not divide back by p on reassembly")
    return [lifted[i] for i in kept]


def _kernel_base(tower: FieldTower, vectors) -> list:
    """Ordinary linear system over F_p(t_1..t_m) via residue splitting."""
    n = len(vectors)
    width = len(vectors[0])
    p = tower.p
    modulus = tower.modulus
    one = Polynomial.const(modulus, 1)

    rows_by_key = {}
    for c in range(width):
        entries = []
        lcm = one
        for v in vectors:
            rf = v[c].payload if v[c].stage == 0 else None
            if rf is None:
                raise AssertionError("stage-0 kernel saw a staged element")
            entries.append(rf)
            if not rf.den.is_one():
                g = poly_gcd(lcm, rf.den)
                lcm = lcm * (rf.den if g.is_one() else poly_divexact(rf.den, g))
        cleared = []
        if lcm.is_one():
            cleared = [rf.num for rf in entries]
        else:
            lcm_pm1 = one
            for _ in range(p - 1):
                lcm_pm1 = lcm_pm1 * lcm
            for rf in entries:
                scale = lcm if rf.den.is_one() else poly_divexact(lcm, rf.den)
                cleared.append(rf.num * scale * lcm_pm1)
        # split sum_i x_i^p * P_i = 0 into one row per residue monomial
        for i, poly in enumerate(cleared):
            if poly.is_zero():
                continue
            for res, gamma in split_pth_residues(poly).items():
                row = rows_by_key.setdefault((c, res), [None] * n)
                cur = row[i]
                row[i] = gamma if cur is None else cur + gamma

    zero = Polynomial.zero(modulus)
    matrix = []
    for row in rows_by_key.values():
        matrix.append([zero if e is None else e for e in row])

    if not matrix:
        sols = [[zero] * n for _ in range(n)]
        for i in range(n):
            sols[i][i] = one
    else:
        sols = poly_nullspace(matrix, n, modulus)
    out = []
    for s in sols:
        out.append(tuple(tower.from_rational(RationalFunction.from_poly(e))
                         for e in s))
    return out


def span_membership(x: TowerElement, gens) -> tuple:
    """(True, witness) with sum_i w_i^p * gens_i = x, or (False, None)."""
    gens = list(gens)
    if x.is_zero():
        return True, tuple(x.tower.zero() for _ in gens)
    if not gens:
        return False, None
    if not in_ppower_span(x, gens):
        return False, None
    kernel = semilinear_kernel([(g,) for g in gens] + [(x,)])
    for vec in kernel:
        if not vec[-1].is_zero():
            scale = vec[-1].inv()
            minus_one = x.tower.const(x.tower.p - 1)
            witness = tuple(minus_one * (v * scale) for v in vec[:-1])
            return True, witness
    raise AssertionError("membership test and kernel witness disagree")


def span_intersection(a_elems, b_elems) -> list:
    """K^p-basis of (K^p-span of A) intersected with (K^p-span of B)."""
    a_elems = list(a_elems)
    b_elems = list(b_elems)
    if not a_elems or not b_elems:
        raise ValueError("both element lists must be nonempty")
    combined = [(e,) for e in a_elems] + [(-e,) for e in b_elems]
    kernel = semilinear_kernel(combined)
    images = []
    for vec in kernel:
        img = None
        for y, a in zip(vec[:len(a_elems)], a_elems):
            if y.is_zero() or a.is_zero():
                continue
            term = y.frobenius() * a
            img = term if img is None else img + term
        if img is not None and not img.is_zero():
            images.append(img)
    if not images:
        return []
    dep = dependent_indices(images)
    return [g for i, g in enumerate(images) if i not in dep]
