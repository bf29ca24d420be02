"""O-lattices in L^n, L = F((t)), for a finite field F.

Global indexing: ``e_j`` with ``j = k*n + c`` stands for ``t^k e_c``, so that
``t e_j = e_{j+n}``.  Vectors are sparse dicts ``{j: coefficient}``.

Every lattice has a unique reduced basis: for each residue ``c`` a vector
``v_c = e_{p_c} + sum x_j e_j`` whose support beyond the pivot ``p_c`` lies in
the non-pivot positions ``j`` (those with ``j < p_{j mod n}``).  The pivots are
the leading indices of lattice elements, ``{p_c + k n}``.  Distinct coefficient
choices give distinct lattices, so this form is canonical and independent of
any truncation window.  Windows are only used internally: a lattice with
``t^hi O^n <= L <= t^lo O^n`` is determined by its image in
``t^lo O^n / t^hi O^n``, a vector space with coordinates ``j - lo*n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ..errors import InvalidInput, PrecisionInsufficient
from .field import FiniteField, get_field

Vector = dict  # {global index: nonzero field element}


@dataclass(frozen=True)
class Window:
    """Exponent range: lattices with t^high O^n <= L <= t^low O^n."""

    low: int
    high: int

    def __post_init__(self):
        if self.low >= self.high:
            raise InvalidInput(f"window needs low < high, got [{self.low}, {self.high})")

    def contains(self, lattice: "Lattice") -> bool:
        a = lattice.profile
        return self.low <= min(a) and max(a) <= self.high

    def widened(self, by: int = 1) -> "Window":
        return Window(self.low - by, self.high + by)

    def to_json(self) -> list:
        return [self.low, self.high]


def rref(field: FiniteField, m: np.ndarray):
    """Reduced row echelon form over ``field``; returns (rows, pivot columns)."""
    m = np.array(m, dtype=np.intp, copy=True)
    rows, cols = m.shape
    add, mul, neg, inv = field.add_table, field.mul_table, field.neg, field.inv
    r = 0
    pivots = []
    for col in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, col])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        lead = m[r, col]
        if lead != 1:
            m[r] = mul[inv[lead], m[r]]
        f = m[:, col].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            m[hit] = add[m[hit], mul[neg[f[hit]][:, None], m[r][None, :]]]
        pivots.append(col)
        r += 1
    return m[:r], pivots


def rank(field: FiniteField, m: np.ndarray) -> int:
    if m.shape[0] == 0:
        return 0
    return len(rref(field, m)[1])


def _clean(v: Mapping[int, int]) -> Vector:
    return {int(j): int(x) for j, x in v.items() if x}


def vector_from_coords(n: int, coords: Sequence[Mapping[int, int]]) -> Vector:
    """Build a sparse vector from per-coordinate Laurent polynomials {t-exponent: coeff}."""
    if len(coords) != n:
        raise InvalidInput(f"expected {n} coordinates, got {len(coords)}")
    out = {}
    for c, poly in enumerate(coords):
        for k, x in poly.items():
            if x:
                out[int(k) * n + c] = int(x)
    return out


@dataclass(frozen=True)
class Lattice:
    field: FiniteField
    n: int
    pivots: tuple[int, ...]
    coeffs: tuple[tuple[tuple[int, int], ...], ...]

    # construction -------------------------------------------------------
    @classmethod
    def standard(cls, field: FiniteField, n: int, shift: int = 0) -> "Lattice":
        """E_{>=shift} = span of e_j for j >= shift (t^k O^n when shift = k n)."""
        piv = [0] * n
        for j in range(shift, shift + n):
            piv[j % n] = j
        return cls(field, n, tuple(piv), tuple(() for _ in range(n)))

    @classmethod
    def scaled_standard(cls, field: FiniteField, exponents: Sequence[int]) -> "Lattice":
        """diag(t^{a_0}, ..., t^{a_{n-1}}) O^n."""
        n = len(exponents)
        return cls(field, n, tuple(a * n + c for c, a in enumerate(exponents)), tuple(() for _ in range(n)))

    @classmethod
    def from_generators(cls, field: FiniteField, n: int, gens: Iterable[Mapping[int, int]],
                        window: Optional[Window] = None, margin: int = 0) -> "Lattice":
        """The O-span of finitely many finitely supported vectors.

        Without ``window`` the working window grows until a Nakayama
        certificate shows that t^hi O^n lies in the span.  With ``window``
        the lattice must fit inside it, else precision-insufficient.
        """
        gens = [g for g in (_clean(g) for g in gens) if g]
        if not gens:
            raise InvalidInput("no nonzero generators")
        lows = [min(g) for g in gens]
        top = max(max(g) for g in gens)
        lo = min(lows) // n
        big = top // n + 1
        if window is not None:
            if lo < window.low:
                raise PrecisionInsufficient(
                    f"generators reach t^{lo}, below the window start t^{window.low}")
            lo = window.low
            hi, cap = window.high, window.high
        else:
            hi = big
            # max pivot exponent <= val(det) - (n-1) lo <= n (big-1) - (n-1) lo
            cap = big + (n - 1) * max(big - 1 - lo, 0) + 1
        hi += margin
        cap += margin
        while True:
            top_w = hi + 1
            D = (top_w - lo) * n
            rows = []
            for g, low in zip(gens, lows):
                k = 0
                while low + k * n < top_w * n:
                    row = np.zeros(D, dtype=np.intp)
                    for j, x in g.items():
                        pos = j + k * n - lo * n
                        if pos < D:
                            row[pos] = x
                    rows.append(row)
                    k += 1
            red, piv = rref(field, np.array(rows))
            first = {}
            for r, col in enumerate(piv):
                c = (col + lo * n) % n
                if c not in first:
                    first[c] = r
            if len(first) == n:
                break
            if hi >= cap:
                if window is not None:
                    raise PrecisionInsufficient(
                        f"the span does not contain t^{window.high} O^n inside the window")
                raise InvalidInput("generators do not span a lattice of full rank")
            hi += 1
        pivots, coeffs = [], []
        for c in range(n):
            r = first[c]
            row = red[r]
            p = piv[r] + lo * n
            pivots.append(p)
            nz = np.flatnonzero(row)
            coeffs.append(tuple((int(pos) + lo * n, int(row[pos])) for pos in nz if pos + lo * n != p))
        return cls(field, n, tuple(pivots), tuple(coeffs))

    @classmethod
    def from_cell(cls, field: FiniteField, n: int, pivots: Sequence[int],
                  coeffs: Sequence[Mapping[int, int]]) -> "Lattice":
        """Lattice with prescribed pivots and coefficients at non-pivot positions."""
        pivots = tuple(int(p) for p in pivots)
        if sorted(p % n for p in pivots) != list(range(n)) or any(pivots[c] % n != c for c in range(n)):
            raise InvalidInput("pivot c must be congruent to c mod n")
        out = []
        for c, cf in enumerate(coeffs):
            items = []
            for j, x in sorted(cf.items()):
                if not x:
                    continue
                if j <= pivots[c] or j >= pivots[j % n]:
                    raise InvalidInput(f"position {j} is not a free position for generator {c}")
                items.append((int(j), int(x)))
            out.append(tuple(items))
        return cls(field, n, pivots, tuple(out))

    @classmethod
    def random(cls, field: FiniteField, n: int, rng, low: int = -1, high: int = 1,
               density: float = 1.0) -> "Lattice":
        """A random lattice with pivot valuations in [low, high].

        ``rng`` is a ``random.Random``; every free coefficient is nonzero-able
        with probability ``density``.
        """
        pivots = tuple(rng.randint(low, high) * n + c for c in range(n))
        top = max(pivots)
        coeffs = []
        for p in pivots:
            items = []
            for j in range(p + 1, top):
                if j < pivots[j % n] and rng.random() < density:
                    x = rng.randrange(field.order)
                    if x:
                        items.append((j, x))
            coeffs.append(tuple(items))
        return cls(field, n, pivots, tuple(coeffs))

    # basic invariants ----------------------------------------------------
    @property
    def profile(self) -> tuple[int, ...]:
        """Pivot t-valuations a_c with p_c = a_c n + c."""
        return tuple((p - c) // self.n for c, p in enumerate(self.pivots))

    @property
    def kappa(self) -> int:
        return sum(self.profile)

    def key(self):
        return (self.n, self.pivots, self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.key() == other.key() and self.field == other.field

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Lattice(n={self.n}, pivots={list(self.pivots)}, coeffs={[dict(c) for c in self.coeffs]})"

    def generators(self) -> list[Vector]:
        return [dict([(p, 1)] + list(cf)) for p, cf in zip(self.pivots, self.coeffs)]

    def is_pivot(self, j: int) -> bool:
        return j >= self.pivots[j % self.n]

    def is_rational(self) -> bool:
        """All canonical coefficients lie in the base field F_q (sigma-fixed)."""
        return all(self.field.is_base(x) for cf in self.coeffs for _, x in cf)

    def sigma(self, power: int = 1) -> "Lattice":
        fr = self.field.frob
        coeffs = []
        for cf in self.coeffs:
            items = []
            for j, x in cf:
                for _ in range(power % self.field.s):
                    x = int(fr[x])
                items.append((j, x))
            coeffs.append(tuple(items))
        return Lattice(self.field, self.n, self.pivots, tuple(coeffs))

    def shift_index(self, d: int) -> "Lattice":
        """Image under e_j -> e_{j+d} for all j (valid for any n when d is a multiple of n)."""
        if d % self.n:
            piv = [0] * self.n
            coeffs = [()] * self.n
            for p, cf in zip(self.pivots, self.coeffs):
                piv[(p + d) % self.n] = p + d
                coeffs[(p + d) % self.n] = tuple((j + d, x) for j, x in cf)
            return Lattice(self.field, self.n, tuple(piv), tuple(coeffs))
        return Lattice(self.field, self.n, tuple(p + d for p in self.pivots),
                       tuple(tuple((j + d, x) for j, x in cf) for cf in self.coeffs))

    def t_multiple(self, k: int = 1) -> "Lattice":
        return self.shift_index(k * self.n)

    # window linear algebra -------------------------------------------------
    def window_rows(self, lo: int, hi: int) -> np.ndarray:
        """Echelon basis of the image of L in t^lo O^n / t^hi O^n."""
        n = self.n
        if min(self.profile) < lo:
            raise PrecisionInsufficient(f"lattice reaches t^{min(self.profile)}, below t^{lo}")
        D = (hi - lo) * n
        rows = []
        for p, cf in zip(self.pivots, self.coeffs):
            k = 0
            while p + k * n < hi * n:
                row = np.zeros(D, dtype=np.intp)
                row[p + k * n - lo * n] = 1
                for j, x in cf:
                    pos = j + k * n - lo * n
                    if pos < D:
                        row[pos] = x
                rows.append(row)
                k += 1
        if not rows:
            return np.zeros((0, D), dtype=np.intp)
        return np.array(rows)

    def reduced_rows(self, lo: int, hi: int):
        """RREF of the window image; returns (rows, global pivot indices)."""
        red, piv = rref(self.field, self.window_rows(lo, hi))
        return red, [c + lo * self.n for c in piv]

    def contains_vector(self, v: Mapping[int, int]) -> bool:
        v = _clean(v)
        if not v:
            return True
        n = self.n
        lo = min(min(v) // n, min(self.profile))
        hi = max(max(v) // n + 1, max(self.profile) + 1)
        if min(v) // n < min(self.profile):
            return False
        rows = self.window_rows(lo, hi)
        row = np.zeros(rows.shape[1], dtype=np.intp)
        for j, x in v.items():
            row[j - lo * n] = x
        return rank(self.field, np.vstack([rows, row[None, :]])) == rows.shape[0]

    def contains_basis_vector(self, j: int) -> bool:
        return self.contains_vector({j: 1})

    def is_sublattice_of(self, other: "Lattice") -> bool:
        return all(other.contains_vector(v) for v in self.generators())

    # serialization -----------------------------------------------------------
    def to_json(self) -> dict:
        """Canonical generator matrix: generators[c][r] = [[t-exponent, coeff], ...]."""
        n = self.n
        gens = []
        for v in self.generators():
            col = [[] for _ in range(n)]
            for j, x in sorted(v.items()):
                col[j % n].append([j // n, x])
            gens.append(col)
        return {"n": n, "field": {"q": self.field.q, "s": self.field.s},
                "pivots": list(self.profile), "generators": gens}

    @classmethod
    def from_json(cls, doc: dict) -> "Lattice":
        field = get_field(int(doc["field"]["q"]), int(doc["field"]["s"]))
        n = int(doc["n"])
        gens = [vector_from_coords(n, [{k: x for k, x in poly} for poly in col]) for col in doc["generators"]]
        return cls.from_generators(field, n, gens)


def relative_position(l1: Lattice, l2: Lattice, margin: int = 0) -> tuple[int, ...]:
    """Elementary divisors of l2 relative to l1, descending.

    With l1 = g O^n and l2 = g k t^lam O^n, the number
    d(k) = dim (l2 + t^k l1) / t^k l1 equals sum_i max(0, k - lam_i).
    """
    if l1.n != l2.n or l1.field != l2.field:
        raise InvalidInput("lattices live in different spaces")
    n = l1.n
    a1, a2 = l1.profile, l2.profile
    k0 = min(a2) - max(a1)
    k1 = max(a2) - min(a1)
    lo = min(min(a2), min(a1) + k0) - margin
    hi = max(max(a2), max(a1) + k1 + 1) + 1 + margin
    field = l1.field
    rows2 = rref(field, l2.window_rows(lo, hi))[0]
    d = {}
    for k in range(k0, k1 + 2):
        rows1 = l1.t_multiple(k).window_rows(lo, hi)
        dim1 = sum(hi - x - k for x in a1)
        d[k] = rank(field, np.vstack([rows2, rows1])) - dim1
    lam = []
    prev = 0
    for k in range(k0, k1 + 1):
        below = d[k + 1] - d[k]  # number of lam_i <= k
        lam.extend([k] * (below - prev))
        prev = below
    if prev != n or d[k0] != 0:
        raise AssertionError("inconsistent elementary divisor count")
    return tuple(sorted(lam, reverse=True))


def dominated(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """lam <= mu in the dominance order of GL_n (both dominant)."""
    if sum(lam) != sum(mu):
        return False
    s = 0
    for x, y in zip(lam, mu):
        s += y - x
        if s < 0:
            return False
    return True


def kappa_of_lattice(lattice: Lattice) -> int:
    return lattice.kappa


def canonicalize(field: FiniteField, n: int, gens, window: Optional[Window] = None) -> Lattice:
    return Lattice.from_generators(field, n, gens, window)
