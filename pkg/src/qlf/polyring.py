"""Exact sparse multivariate polynomial arithmetic over a prime field F_p.

Representation:

  Monomial    = one Python int packing all exponents, 16 bits per variable
                (variable 0 in the lowest bits), so multiplying monomials is
                a single integer addition and divisibility is a masked
                subtraction.  Exponents stay far below 2^16 at any feasible
                problem size.
  Polynomial  = {Monomial: coefficient} with coefficients in [1, p-1]; the
                zero polynomial is the empty dict.  No zero coefficient is
                ever stored.

Monomials are ordered by total degree first, then by packed value (which is
lexicographic with the later variables weighing more).  Leading terms, monic
normalisation and the canonical rendering order all refer to this order.

The Frobenius map f -> f^p multiplies every exponent by p and fixes the
coefficients (they live in F_p), which makes p-th root extraction a pure
exponent check.
"""

from __future__ import annotations

import heapq

from .errors import ModulusMismatch, NonPrimeModulus, NotAPthPower

Monomial = int

_BITS = 16
_FIELD = (1 << _BITS) - 1

_DEG_CACHE: dict = {}
_HIGH_MASKS: dict = {}
_LOW_MASKS: dict = {}


def mono_pack(exponents) -> Monomial:
    m = 0
    for i, e in enumerate(exponents):
        if e:
            m |= e << (_BITS * i)
    return m


def mono_unpack(m: Monomial) -> tuple:
    out = []
    while m:
        out.append(m & _FIELD)
        m >>= _BITS
    return tuple(out)


def mono_degree(m: Monomial) -> int:
    d = _DEG_CACHE.get(m)
    if d is None:
        d = 0
        x = m
        while x:
            d += x & _FIELD
            x >>= _BITS
        if len(_DEG_CACHE) > 1_000_000:
            _DEG_CACHE.clear()
        _DEG_CACHE[m] = d
    return d


def _high_mask(nbits: int) -> int:
    fields = (nbits + _BITS - 1) // _BITS
    mask = _HIGH_MASKS.get(fields)
    if mask is None:
        mask = 0
        bit = 1 << (_BITS - 1)
        for _ in range(fields):
            mask = (mask << _BITS) | bit
        _HIGH_MASKS[fields] = mask
    return mask


def _low_mask(nbits: int) -> int:
    fields = (nbits + _BITS - 1) // _BITS
    mask = _LOW_MASKS.get(fields)
    if mask is None:
        mask = 0
        for _ in range(fields):
            mask = (mask << _BITS) | 1
        _LOW_MASKS[fields] = mask
    return mask


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return a + b


def mono_div(a: Monomial, b: Monomial):
    """a / b, or None when some exponent would go negative."""
    if b == 0:
        return a
    c = a - b
    if c < 0:
        return None
    h = _high_mask(a.bit_length())
    if ((a | h) - b) & h == h:
        return c
    return None


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    if a == 0 or b == 0:
        return 0
    ea, eb = mono_unpack(a), mono_unpack(b)
    n = min(len(ea), len(eb))
    return mono_pack(min(ea[i], eb[i]) for i in range(n))


def grlex_key(m: Monomial):
    return (mono_degree(m), m)


class PrimeModulus:
    """The characteristic p, validated prime by trial division (p < 2^16)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 2:
            raise NonPrimeModulus(f"{p!r} is not a prime")
        if p >= 1 << 16:
            raise NonPrimeModulus(f"{p} too large (must be < 2^16)")
        d = 2
        while d * d <= p:
            if p % d == 0:
                raise NonPrimeModulus(f"{p} = {d} * {p // d} is not prime")
            d += 1
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeModulus) and self.p == other.p

    def __hash__(self):
        return hash(("PrimeModulus", self.p))

    def __repr__(self):
        return f"PrimeModulus({self.p})"


class Polynomial:
    """Immutable-by-convention sparse polynomial over F_p."""

    __slots__ = ("modulus", "terms", "_hash")

    def __init__(self, modulus: PrimeModulus, terms: dict):
        self.modulus = modulus
        self.terms = terms
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, modulus: PrimeModulus) -> "Polynomial":
        return cls(modulus, {})

    @classmethod
    def const(cls, modulus: PrimeModulus, c: int) -> "Polynomial":
        c %= modulus.p
        return cls(modulus, {0: c} if c else {})

    @classmethod
    def variable(cls, modulus: PrimeModulus, index: int) -> "Polynomial":
        return cls(modulus, {1 << (_BITS * index): 1})

    @classmethod
    def term(cls, modulus: PrimeModulus, exponents, c: int) -> "Polynomial":
        """Single term from an exponent sequence (or packed monomial)."""
        c %= modulus.p
        mono = exponents if isinstance(exponents, int) else mono_pack(exponents)
        return cls(modulus, {mono: c} if c else {})

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def const_value(self) -> int:
        return self.terms.get(0, 0)

    def is_one(self) -> bool:
        return self.terms.get(0, 0) == 1 and len(self.terms) == 1

    def leading(self):
        """(monomial, coefficient) of the leading term."""
        m = max(self.terms, key=grlex_key)
        return m, self.terms[m]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    def degree_in(self, v: int) -> int:
        if not self.terms:
            return -1
        shift = _BITS * v
        return max((m >> shift) & _FIELD for m in self.terms)

    def max_variable(self) -> int:
        """Largest variable index occurring, or -1 for constants."""
        best = 0
        for m in self.terms:
            if m > best:
                best = m
        return (best.bit_length() - 1) // _BITS if best else -1

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.modulus.p == other.modulus.p and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.modulus.p, tuple(sorted(self.terms.items()))))
        return self._hash

    # -- ring operations ----------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.modulus.p != other.modulus.p:
            raise ModulusMismatch(
                f"F_{self.modulus.p} vs F_{other.modulus.p}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        p = self.modulus.p
        out = dict(self.terms)
        if p == 2:
            for m in other.terms:
                if m in out:
                    del out[m]
                else:
                    out[m] = 1
            return Polynomial(self.modulus, out)
        for m, c in other.terms.items():
            s = (out.get(m, 0) + c) % p
            if s:
                out[m] = s
            else:
                del out[m]
        return Polynomial(self.modulus, out)

    def __neg__(self) -> "Polynomial":
        p = self.modulus.p
        if p == 2:
            return self
        return Polynomial(self.modulus, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        p = self.modulus.p
        out = dict(self.terms)
        if p == 2:
            for m in other.terms:
                if m in out:
                    del out[m]
                else:
                    out[m] = 1
            return Polynomial(self.modulus, out)
        for m, c in other.terms.items():
            s = (out.get(m, 0) - c) % p
            if s:
                out[m] = s
            else:
                del out[m]
        return Polynomial(self.modulus, out)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        p = self.modulus.p
        a, b = self.terms, other.terms
        if not a or not b:
            return Polynomial(self.modulus, {})
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 1:
            # single-term factor: shift-and-scale (nonzero stays nonzero mod p)
            (ma, ca), = a.items()
            if ca == 1:
                return Polynomial(self.modulus,
                                  {ma + mb: cb for mb, cb in b.items()})
            return Polynomial(
                self.modulus,
                {ma + mb: (ca * cb) % p for mb, cb in b.items()})
        out: dict = {}
        if p == 2:
            for ma in a:
                for mb in b:
                    m = ma + mb
                    if m in out:
                        del out[m]
                    else:
                        out[m] = 1
            return Polynomial(self.modulus, out)
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = ma + mb
                s = (out.get(m, 0) + ca * cb) % p
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(self.modulus, out)

    def scale(self, c: int) -> "Polynomial":
        p = self.modulus.p
        c %= p
        if c == 0:
            return Polynomial(self.modulus, {})
        if c == 1:
            return self
        return Polynomial(self.modulus, {m: (k * c) % p for m, k in self.terms.items()})

    def mul_term(self, mono: Monomial, c: int) -> "Polynomial":
        p = self.modulus.p
        c %= p
        if c == 0:
            return Polynomial(self.modulus, {})
        if c == 1:
            return Polynomial(self.modulus,
                              {m + mono: k for m, k in self.terms.items()})
        return Polynomial(self.modulus,
                          {m + mono: (k * c) % p for m, k in self.terms.items()})

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        _, c = self.leading()
        if c == 1:
            return self
        return self.scale(pow(c, -1, self.modulus.p))

    # -- rendering -----------------------------------------------------------

    def render(self, names) -> str:
        """Canonical text form, grammar-compatible (`*`, `^`, `+`)."""
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[m]
            factors = []
            for v, e in enumerate(mono_unpack(m)):
                if e == 0:
                    continue
                factors.append(names[v] if e == 1 else f"{names[v]}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([str(c)] + factors))
        return " + ".join(parts)

    def __repr__(self):
        names = [f"x{i}" for i in range(self.max_variable() + 1)]
        return f"Poly[F_{self.modulus.p}]({self.render(names)})"


# -- Frobenius and p-th roots -------------------------------------------------


def poly_frobenius(f: Polynomial) -> Polynomial:
    """f^p: every exponent is multiplied by p, coefficients are fixed.

    Packed fields never overflow: that would need single-variable degrees
    beyond 2^16/p, far past any feasible term count.
    """
    p = f.modulus.p
    return Polynomial(f.modulus, {m * p: c for m, c in f.terms.items()})


def poly_pth_root(f: Polynomial) -> Polynomial:
    """g with g^p = f, or raise NotAPthPower naming an offending term."""
    p = f.modulus.p
    out = {}
    if p == 2:
        for m, c in f.terms.items():
            if m & _low_mask(m.bit_length()):
                raise NotAPthPower(
                    f"exponent of monomial {mono_unpack(m)} is odd", term=m)
            out[m >> 1] = c
        return Polynomial(f.modulus, out)
    for m, c in f.terms.items():
        exps = mono_unpack(m)
        if any(e % p for e in exps):
            raise NotAPthPower(
                f"exponent of monomial {exps} not divisible by {p}", term=m)
        out[mono_pack(e // p for e in exps)] = c
    return Polynomial(f.modulus, out)


def split_pth_residues(f: Polynomial):
    """Write f = sum over residues r of (gamma_r)^p * t^r.

    Returns {packed residue: gamma} with every exponent of each residue
    below p; the decomposition is unique and gamma coefficients are the
    p-th roots, which fix F_p.
    """
    p = f.modulus.p
    buckets: dict = {}
    if p == 2:
        for m, c in f.terms.items():
            res = m & _low_mask(m.bit_length())
            root = (m - res) >> 1
            buckets.setdefault(res, {})[root] = c
        return {res: Polynomial(f.modulus, t) for res, t in buckets.items()}
    for m, c in f.terms.items():
        exps = mono_unpack(m)
        res = mono_pack(e % p for e in exps)
        root = mono_pack(e // p for e in exps)
        buckets.setdefault(res, {})[root] = c
    return {res: Polynomial(f.modulus, t) for res, t in buckets.items()}


# -- division and GCD ---------------------------------------------------------


def poly_divexact(f: Polynomial, g: Polynomial) -> Polynomial:
    """f / g when the division is exact; raises ValueError otherwise."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if f.is_zero():
        return f
    if g.is_one():
        return f
    p = f.modulus.p
    if len(g.terms) == 1:
        (mg, cg), = g.terms.items()
        inv = pow(cg, -1, p)
        out = {}
        for m, c in f.terms.items():
            q = mono_div(m, mg)
            if q is None:
                raise ValueError("non-exact polynomial division")
            out[q] = c if inv == 1 else (c * inv) % p
        return Polynomial(f.modulus, out)
    lg, cg = g.leading()
    cg_inv = pow(cg, -1, p)
    q: dict = {}
    r = dict(f.terms)
    # lazy max-heap of candidate leading monomials
    heap = [(-mono_degree(m), -m) for m in r]
    heapq.heapify(heap)
    while r:
        while heap:
            lr = -heap[0][1]
            if lr in r:
                break
            heapq.heappop(heap)
        m = mono_div(lr, lg)
        if m is None:
            raise ValueError("non-exact polynomial division")
        c = (r[lr] * cg_inv) % p
        q[m] = c
        for mg, kg in g.terms.items():
            mm = m + mg
            s = (r.get(mm, 0) - c * kg) % p
            if s:
                if mm not in r:
                    heapq.heappush(heap, (-mono_degree(mm), -mm))
                r[mm] = s
            else:
                r.pop(mm, None)
    return Polynomial(f.modulus, q)


def _split_main(f: Polynomial, v: int) -> dict:
    """View f as univariate in variable v: {exp: coefficient Polynomial}."""
    out: dict = {}
    shift = _BITS * v
    for m, c in f.terms.items():
        e = (m >> shift) & _FIELD
        out.setdefault(e, {})[m - (e << shift)] = c
    return {e: Polynomial(f.modulus, t) for e, t in out.items()}


def _join_main(coeffs: dict, v: int, modulus: PrimeModulus) -> Polynomial:
    out: dict = {}
    shift = _BITS * v
    for e, poly in coeffs.items():
        if e:
            off = e << shift
            for m, c in poly.terms.items():
                out[m + off] = c
        else:
            out.update(poly.terms)
    return Polynomial(modulus, out)


def _content(coeffs: dict) -> Polynomial:
    """GCD of the univariate-view coefficients (early exit on units)."""
    g = None
    for poly in coeffs.values():
        g = poly if g is None else poly_gcd(g, poly)
        if g.is_const() and not g.is_zero():
            break
    return g.monic()


def _prem(a: dict, b: dict, modulus: PrimeModulus) -> dict:
    """Pseudo-remainder of a by b in the univariate view."""
    db = max(b)
    lb = b[db]
    r = dict(a)
    while r:
        dr = max(r)
        if dr < db:
            break
        lr = r.pop(dr)
        # r := lb*r - lr * x^(dr-db) * b, degree drops below dr
        nr: dict = {}
        for e, c in r.items():
            nr[e] = lb * c
        for e, c in b.items():
            if e == db:
                continue
            ee = e + dr - db
            prod = lr * c
            nr[ee] = (nr[ee] - prod) if ee in nr else -prod
        r = {e: c for e, c in nr.items() if not c.is_zero()}
    return r


def _mono_content(f: Polynomial):
    """Largest monomial dividing every term of f, or 0 if trivial."""
    it = iter(f.terms)
    g = next(it)
    for m in it:
        g = mono_gcd(g, m)
        if not g:
            return 0
    return g


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor; gcd(0, 0) = 0.

    Recursive primitive PRS: split off the highest variable, pull out
    contents, run a pseudo-remainder loop on the primitive parts, and put
    the pieces back together.  Exact at every step.
    """
    if a.modulus.p != b.modulus.p:
        raise ModulusMismatch(f"F_{a.modulus.p} vs F_{b.modulus.p}")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_const() or b.is_const():
        return Polynomial.const(a.modulus, 1)
    if a.terms == b.terms:
        return a.monic()
    # single-term fast path: gcd with a monomial is a monomial
    if len(a.terms) == 1 or len(b.terms) == 1:
        mono, one_sided = (next(iter(a.terms)), b) if len(a.terms) == 1 else (
            next(iter(b.terms)), a)
        g = mono
        for m in one_sided.terms:
            g = mono_gcd(g, m)
            if not g:
                break
        return Polynomial(a.modulus, {g: 1})

    # peel off monomial contents cheaply before the PRS
    ca, cb = _mono_content(a), _mono_content(b)
    if ca or cb:
        shared = mono_gcd(ca, cb) if (ca and cb) else 0
        if ca:
            a = Polynomial(a.modulus, {m - ca: c for m, c in a.terms.items()})
        if cb:
            b = Polynomial(b.modulus, {m - cb: c for m, c in b.terms.items()})
        g = poly_gcd(a, b)
        if shared:
            g = g.mul_term(shared, 1)
        return g

    v = max(a.max_variable(), b.max_variable())
    ua, ub = _split_main(a, v), _split_main(b, v)
    ca, cb = _content(ua), _content(ub)
    cont = poly_gcd(ca, cb)
    pa = {e: poly_divexact(c, ca) for e, c in ua.items()}
    pb = {e: poly_divexact(c, cb) for e, c in ub.items()}
    if max(pa) < max(pb):
        pa, pb = pb, pa
    while pb:
        r = _prem(pa, pb, a.modulus)
        pa, pb = pb, r
        if pb:
            cc = _content(pb)
            if not cc.is_one():
                pb = {e: poly_divexact(c, cc) for e, c in pb.items()}
    if max(pa) == 0:
        # primitive parts are coprime in v
        return cont.monic()
    g = _join_main(pa, v, a.modulus)
    return (cont * g).monic()


def poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero() or b.is_zero():
        return Polynomial.zero(a.modulus)
    return poly_divexact(a * b, poly_gcd(a, b)).monic()


# -- rational functions -------------------------------------------------------


class RationalFunction:
    """Reduced fraction of polynomials with monic denominator.

    All four field operations normalise through `rat_normalize`, with the
    usual cross-GCD shortcuts so that the expensive multivariate GCDs only
    see small inputs.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial, den: Polynomial, _normalized=False):
        if not _normalized:
            norm = rat_normalize(num, den)
            num, den = norm.num, norm.den
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_poly(cls, f: Polynomial) -> "RationalFunction":
        return cls(f, Polynomial.const(f.modulus, 1), _normalized=True)

    @classmethod
    def zero(cls, modulus: PrimeModulus) -> "RationalFunction":
        return cls.from_poly(Polynomial.zero(modulus))

    @classmethod
    def one(cls, modulus: PrimeModulus) -> "RationalFunction":
        return cls.from_poly(Polynomial.const(modulus, 1))

    @property
    def modulus(self) -> PrimeModulus:
        return self.num.modulus

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        na, da, nb, db = self.num, self.den, other.num, other.den
        if da.is_one() and db.is_one():
            return RationalFunction.from_poly(na + nb)
        if da == db:
            return rat_normalize(na + nb, da)
        g = poly_gcd(da, db)
        if g.is_one():
            return RationalFunction(na * db + nb * da, da * db,
                                    _normalized=True)
        da_r = poly_divexact(da, g)
        db_r = poly_divexact(db, g)
        num = na * db_r + nb * da_r
        g2 = poly_gcd(num, g)
        if g2.is_one():
            return RationalFunction(num, da_r * db, _normalized=True)
        return RationalFunction(poly_divexact(num, g2),
                                da_r * poly_divexact(db, g2),
                                _normalized=True)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        na, da, nb, db = self.num, self.den, other.num, other.den
        if na.is_zero() or nb.is_zero():
            return RationalFunction.zero(self.modulus)
        # cross-reduce before multiplying
        if not db.is_one():
            g1 = poly_gcd(na, db)
            if not g1.is_one():
                na = poly_divexact(na, g1)
                db = poly_divexact(db, g1)
        if not da.is_one():
            g2 = poly_gcd(nb, da)
            if not g2.is_one():
                nb = poly_divexact(nb, g2)
                da = poly_divexact(da, g2)
        num, den = na * nb, da * db
        _, lc = den.leading()
        if lc != 1:
            inv = pow(lc, -1, self.modulus.p)
            num, den = num.scale(inv), den.scale(inv)
        return RationalFunction(num, den, _normalized=True)

    def inv(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        num, den = self.den, self.num
        _, lc = den.leading()
        if lc != 1:
            c = pow(lc, -1, self.modulus.p)
            num, den = num.scale(c), den.scale(c)
        return RationalFunction(num, den, _normalized=True)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return self * other.inv()

    def frobenius(self) -> "RationalFunction":
        return RationalFunction(poly_frobenius(self.num),
                                poly_frobenius(self.den), _normalized=True)

    def complexity(self) -> int:
        return len(self.num.terms) + len(self.den.terms) + \
            max(self.num.total_degree(), 0) + max(self.den.total_degree(), 0)

    def render(self, names) -> str:
        ns = self.num.render(names)
        if self.den.is_one():
            return ns
        ds = self.den.render(names)
        if len(self.num.terms) > 1:
            ns = f"({ns})"
        if len(self.den.terms) > 1:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        names = [f"x{i}" for i in range(
            max(self.num.max_variable(), self.den.max_variable()) + 1)]
        return f"Rat[F_{self.modulus.p}]({self.render(names)})"


def rat_normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    """The unique reduced representative with monic denominator."""
    if num.modulus.p != den.modulus.p:
        raise ModulusMismatch(f"F_{num.modulus.p} vs F_{den.modulus.p}")
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return RationalFunction.from_poly(num)
    if not den.is_one():
        g = poly_gcd(num, den)
        if not g.is_one():
            num = poly_divexact(num, g)
            den = poly_divexact(den, g)
        _, lc = den.leading()
        if lc != 1:
            c = pow(lc, -1, den.modulus.p)
            num, den = num.scale(c), den.scale(c)
    return RationalFunction(num, den, _normalized=True)
