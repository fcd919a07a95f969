"""Exact kernel computations on polynomial matrices over F_p.

Everything here is fraction-free Bareiss arithmetic.  `SparseEchelon` keeps
an incremental staircase of sparse vectors: each stored row is frozen at its
insertion state, and an incoming vector is reduced by the two-term recurrence

    cand <- (piv_j * cand - cand[pivot_j] * row_j) / piv_(j-1)

whose division is exact (entries are bordered minors), so entries stay
minor-sized without any GCD heuristics.  A vector reduces to zero exactly
when it lies in the span of the stored rows, which answers all rank and
membership queries.

`poly_nullspace` feeds equation rows through such a staircase (duplicates
dropped, smallest rows first, stopping early once the rank fills up) and
then runs a fraction-free Gauss-Jordan pass on the surviving rows, after
which the kernel vectors can be read off directly: every pivot column ends
up diagonal, carrying the final pivot.  Rows are equations, so incoming rows
may be rescaled freely (monomial content and leading-coefficient
normalisation); stored rows are never rescaled, which is what keeps the
divisions exact.
"""

from __future__ import annotations

from .polyring import Polynomial, mono_div, poly_divexact


def _mono_strip_dict(vec: dict) -> dict:
    """Divide out the largest monomial dividing every term (row rescaling)."""
    mins = None
    for e in vec.values():
        for m in e.terms:
            if mins is None:
                mins = list(m)
            else:
                n = min(len(mins), len(m))
                del mins[n:]
                for i in range(n):
                    if m[i] < mins[i]:
                        mins[i] = m[i]
            if not mins:
                return vec
        if mins is not None and not mins:
            return vec
    if not mins:
        return vec
    mono = tuple(mins)
    return {k: Polynomial(e.modulus,
                          {mono_div(m, mono): c for m, c in e.terms.items()})
            for k, e in vec.items()}


def _normalize_incoming(vec: dict, modulus) -> dict:
    vec = _mono_strip_dict(vec)
    if modulus.p > 2 and vec:
        piv = min(vec, key=lambda k: (vec[k].total_degree(),
                                      len(vec[k].terms)))
        _, lc = vec[piv].leading()
        if lc != 1:
            inv = pow(lc, -1, modulus.p)
            vec = {k: e.scale(inv) for k, e in vec.items()}
    return vec


class SparseEchelon:
    """Incremental fraction-free staircase of sparse polynomial vectors.

    Vectors are dicts mapping an arbitrary hashable coordinate key to a
    nonzero Polynomial.
    """

    def __init__(self, modulus):
        self.modulus = modulus
        self.one = Polynomial.const(modulus, 1)
        self.rows = []  # (pivot key, row dict, pivot poly), insertion order

    def _reduce(self, vec: dict) -> dict:
        prev = self.one
        for pk, row, piv in self.rows:
            a = vec.get(pk)
            if a is None:
                if not piv.is_one():
                    vec = {k: piv * v for k, v in vec.items()}
            else:
                out = {}
                for k, v in vec.items():
                    w = row.get(k)
                    nv = piv * v if w is None else piv * v - a * w
                    if not nv.is_zero():
                        out[k] = nv
                for k, w in row.items():
                    if k not in vec:
                        out[k] = -(a * w)
                out.pop(pk, None)
                vec = out
            if not prev.is_one() and vec:
                vec = {k: poly_divexact(v, prev) for k, v in vec.items()}
            prev = piv
            if not vec:
                break
        return vec

    def insert(self, vec: dict) -> bool:
        """Fold a vector in; True if it extended the rank."""
        vec = self._reduce(_normalize_incoming(dict(vec), self.modulus))
        if not vec:
            return False
        pk = min(vec, key=lambda k: (vec[k].total_degree(),
                                     len(vec[k].terms)))
        self.rows.append((pk, vec, vec[pk]))
        return True

    def reduces_to_nonzero(self, vec: dict) -> bool:
        """Whether the vector lies outside the current row span."""
        return bool(self._reduce(_normalize_incoming(dict(vec),
                                                     self.modulus)))

    @property
    def rank(self) -> int:
        return len(self.rows)


def poly_nullspace(rows: list, ncols: int, modulus) -> list:
    """Basis of {x : M x = 0} for a polynomial matrix M, as polynomial vectors.

    Kernel vectors come back as polynomial vectors; any nonzero scaling of a
    kernel vector is as good as another.  Zero rows are harmless; an empty
    matrix yields the standard basis.
    """
    work = []
    seen = set()
    for r in rows:
        vec = {j: e for j, e in enumerate(r) if not e.is_zero()}
        if not vec:
            continue
        vec = _normalize_incoming(vec, modulus)
        key = tuple(sorted(vec.items()))
        if key in seen:
            continue
        seen.add(key)
        work.append(vec)
    work.sort(key=lambda v: (max(e.total_degree() for e in v.values()),
                             sum(len(e.terms) for e in v.values())))

    ech = SparseEchelon(modulus)
    for vec in work:
        ech.insert(vec)
        if ech.rank == ncols:
            return []

    zero = Polynomial.zero(modulus)
    one = Polynomial.const(modulus, 1)
    if not ech.rows:
        basis = []
        for f in range(ncols):
            x = [zero] * ncols
            x[f] = one
            basis.append(x)
        return basis
    matrix = [[row.get(j, zero) for j in range(ncols)]
              for _, row, _ in ech.rows]
    return _jordan_nullspace(matrix, ncols, modulus)


def _jordan_nullspace(m: list, ncols: int, modulus) -> list:
    """Fraction-free Gauss-Jordan kernel of a small matrix (rows <= ncols)."""
    nrows = len(m)
    m = [list(r) for r in m]
    free_cols = list(range(ncols))
    pivots = []
    prev_piv = Polynomial.const(modulus, 1)

    rank = 0
    while rank < nrows and free_cols:
        best = None
        for i in range(rank, nrows):
            for c in free_cols:
                e = m[i][c]
                if e.is_zero():
                    continue
                meas = (e.total_degree(), len(e.terms))
                if best is None or meas < best[0]:
                    best = (meas, i, c)
        if best is None:
            break
        _, bi, bc = best
        m[rank], m[bi] = m[bi], m[rank]
        piv = m[rank][bc]
        one_step = prev_piv.is_one()
        piv_is_one = piv.is_one()
        for i in range(nrows):
            if i == rank:
                continue
            a = m[i][bc]
            # every other row moves to the next minor scale, zero pivot
            # column or not; the division by the previous pivot is exact
            if a.is_zero():
                if piv_is_one:
                    row = m[i]
                else:
                    row = [e if e.is_zero() else piv * e for e in m[i]]
            else:
                row = [piv * m[i][j] - a * m[rank][j] for j in range(ncols)]
                row[bc] = Polynomial.zero(modulus)
            if not one_step:
                row = [e if e.is_zero() else poly_divexact(e, prev_piv)
                       for e in row]
            m[i] = row
        pivots.append((rank, bc))
        free_cols.remove(bc)
        prev_piv = piv
        rank += 1

    if not free_cols:
        return []
    # pivot columns are diagonal, each carrying the final pivot
    zero = Polynomial.zero(modulus)
    basis = []
    for f in free_cols:
        x = [zero] * ncols
        x[f] = prev_piv
        for r, c in pivots:
            x[c] = -m[r][f]
        stripped = _mono_strip_dict({i: e for i, e in enumerate(x)
                                     if not e.is_zero()})
        basis.append([stripped.get(i, zero) for i in range(ncols)])
    return basis