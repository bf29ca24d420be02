"""Affine Deligne-Lusztig varieties for GL_n as sets of lattices.

A lattice L = g O^n lies in X_mu(b) iff the elementary divisors of b sigma(L)
relative to L are mu, and in the closed variety iff they are <= mu.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from ..errors import BudgetExceeded, InvalidInput, InvalidParameter, PrecisionInsufficient, UnsupportedDatum
from ..isocrystal import NormalFormElement, SlopeBlock, as_blocks, normal_form
from .field import FiniteField, get_field
from .kernels import incremental_ranks
from .lattice import Lattice, Vector, Window, dominated, rank, relative_position, rref

DEFAULT_BUDGET = 1_000_000


# ---------------------------------------------------------------------------
# b sigma and elements of J


class FrobTwist:
    """The sigma-linear map b sigma for a normal-form element b.

    ``b(e_c) = t^k e_{c'}`` for standard basis vectors; on global indices
    this is ``e_{a n + c} -> e_{(a + k) n + c'}``.
    """

    def __init__(self, element: NormalFormElement, field: FiniteField):
        self.element = element
        self.field = field
        self.n = element.n
        self._targets = [(k * self.n + c2) for c2, k in element.images]

    @classmethod
    def from_blocks(cls, blocks, field: FiniteField) -> "FrobTwist":
        return cls(normal_form(as_blocks(blocks)), field)

    @property
    def det_valuation(self) -> int:
        return self.element.det_valuation()

    def index_map(self, j: int) -> int:
        a, c = divmod(j, self.n)
        return a * self.n + self._targets[c]

    def apply_vector(self, v: Mapping[int, int]) -> Vector:
        fr = self.field.frob
        return {self.index_map(j): int(fr[x]) for j, x in v.items() if x}

    def apply(self, lattice: Lattice) -> Lattice:
        return Lattice.from_generators(self.field, self.n, [self.apply_vector(v) for v in lattice.generators()])

    def is_monotone(self) -> bool:
        """Whether the index map preserves the order of global indices."""
        vals = [self.index_map(j) for j in range(self.n + 1)]
        return all(x < y for x, y in zip(vals, vals[1:]))


def block_offsets(sizes: Sequence[int]) -> list[int]:
    out, off = [], 0
    for h in sizes:
        out.append(off)
        off += h
    return out


def block_shift_index(sizes: Sequence[int], block: int, power: int, j: int) -> int:
    """e^i_k -> e^i_{k+power} on block ``block``; other coordinates fixed.

    Block coordinates: e^i_k = t^{k // h_i} e_{off_i + k mod h_i}.
    """
    n = sum(sizes)
    offs = block_offsets(sizes)
    a, c = divmod(j, n)
    off, h = offs[block], sizes[block]
    if not off <= c < off + h:
        return j
    k = a * h + (c - off) + power
    return (k // h) * n + off + k % h


def apply_index_map(lattice: Lattice, fn: Callable[[int], int]) -> Lattice:
    gens = [{fn(j): x for j, x in v.items()} for v in lattice.generators()]
    return Lattice.from_generators(lattice.field, lattice.n, gens)


def block_shift(lattice: Lattice, sizes: Sequence[int], block: int, power: int = 1) -> Lattice:
    """Apply the element s_i of J shifting the block-i basis by ``power``."""
    if sum(sizes) != lattice.n:
        raise InvalidInput("block sizes do not add up to the rank")
    return apply_index_map(lattice, lambda j: block_shift_index(sizes, block, power, j))


def shift(lattice: Lattice, power: int = 1) -> Lattice:
    """The superbasic J-element s: e_j -> e_{j+1} (single block)."""
    return lattice.shift_index(power)


def apply_matrix(field: FiniteField, g: Sequence[Sequence[Mapping[int, int]]], v: Mapping[int, int]) -> Vector:
    """g v for an n x n matrix of Laurent polynomials {t-exponent: coeff}."""
    n = len(g)
    out: dict[int, int] = {}
    add, mul = field.add_table, field.mul_table
    for j, x in v.items():
        a, c = divmod(j, n)
        for r in range(n):
            for k, y in g[r][c].items():
                idx = (a + k) * n + r
                out[idx] = int(add[out.get(idx, 0), mul[x, y]])
    return {j: x for j, x in out.items() if x}


def transform(lattice: Lattice, g) -> Lattice:
    return Lattice.from_generators(lattice.field, lattice.n,
                                   [apply_matrix(lattice.field, g, v) for v in lattice.generators()])


# ---------------------------------------------------------------------------
# membership


def check_mu(mu: Sequence[int], n: int) -> tuple[int, ...]:
    mu = tuple(int(x) for x in mu)
    if len(mu) != n:
        raise InvalidInput(f"mu has length {len(mu)}, expected {n}")
    if any(x < y for x, y in zip(mu, mu[1:])):
        raise InvalidInput(f"mu = {mu} is not dominant")
    return mu


def invariant_reference(lattice: Lattice, twist: FrobTwist) -> tuple[int, ...]:
    """inv(L, b sigma(L)) through canonical forms and relative_position."""
    return relative_position(lattice, twist.apply(lattice))


def _dense(v: Mapping[int, int], lo_index: int, width: int, shift: int = 0) -> np.ndarray:
    """Dense row of v with every index moved up by ``shift``."""
    row = np.zeros(width, dtype=np.intp)
    for j, x in v.items():
        pos = j + shift - lo_index
        if 0 <= pos < width:
            row[pos] = x
        elif pos < 0:
            raise AssertionError("vector below the working window")
    return row


def _multiples(v: Mapping[int, int], n: int, base: int, width: int, shift: int = 0) -> list:
    """Rows t^j (t^shift v), j >= 0, whose leading position lies in the window."""
    lead = min(v) + shift - base
    out = []
    j = 0
    while lead + j * n < width:
        out.append(_dense(v, base, width, shift + j * n))
        j += 1
    return out


def invariant(lattice: Lattice, twist: FrobTwist) -> tuple[int, ...]:
    """inv(L, b sigma(L)): elementary divisors of b sigma(L) relative to L.

    Uses d(k) = dim (FL + t^k L) / t^k L = sum_i max(0, k - lam_i) with the
    ranks of FL + t^k L for all k obtained in one incremental elimination.
    """
    n = lattice.n
    field = lattice.field
    a = lattice.profile
    powers = [k for _, k in twist.element.images]
    kmin, kmax = min(powers), max(powers)
    k0 = min(a) + kmin - max(a)
    k1 = max(a) + kmax - min(a)
    lo = min(a) + min(kmin, k0, 0)
    hi = max(max(a) + kmax, max(a) + k1 + 1) + 1
    D = (hi - lo) * n
    base = lo * n
    gens = lattice.generators()
    rows = []
    for v in gens:
        rows.extend(_multiples(twist.apply_vector(v), n, base, D))
    for v in gens:
        rows.extend(_multiples(v, n, base, D, (k1 + 1) * n))
    checkpoints = [len(rows) - 1]
    for k in range(k1, k0 - 1, -1):
        rows.extend(_dense(v, base, D, k * n) for v in gens)
        checkpoints.append(len(rows) - 1)
    ranks = incremental_ranks(np.array(rows), field.add_table, field.mul_table, field.inv, field.neg)
    kappa = lattice.kappa
    d = {}
    for idx, k in zip(checkpoints, range(k1 + 1, k0 - 1, -1)):
        d[k] = int(ranks[idx]) - (n * (hi - k) - kappa)
    lam = []
    prev = 0
    for k in range(k0, k1 + 1):
        below = d[k + 1] - d[k]
        lam.extend([k] * (below - prev))
        prev = below
    if prev != n or d[k0] != 0:
        raise AssertionError("inconsistent elementary divisor count")
    return tuple(sorted(lam, reverse=True))


def member(lattice: Lattice, twist: FrobTwist, mu: Sequence[int], closed: bool = False) -> bool:
    mu = check_mu(mu, lattice.n)
    lam = invariant(lattice, twist)
    return dominated(lam, mu) if closed else lam == mu


# ---------------------------------------------------------------------------
# the delta invariant and the operators a_{i,delta}(x)


@dataclass(frozen=True)
class DeltaIndex:
    delta: int
    residue: Optional[int]
    j1: int
    j2: int

    def __iter__(self):
        return iter((self.delta, self.residue))


def _require_single_block(lattice: Lattice, h: Optional[int]) -> int:
    if h is not None and h != lattice.n:
        raise UnsupportedDatum("the delta invariant is defined for a single superbasic block (h = n)")
    return lattice.n


def delta_index(lattice: Lattice, h: Optional[int] = None) -> DeltaIndex:
    """j1 = least leading index in L, j2 = largest j with e_j not in L."""
    n = _require_single_block(lattice, h)
    a = lattice.profile
    lo, hi = min(a), max(a) + 1
    red, piv = lattice.reduced_rows(lo, hi)
    row_of = {g: r for r, g in enumerate(piv)}
    j1 = min(lattice.pivots)
    top = max(lattice.pivots) - n  # every e_j with j > top lies in L

    def has_basis_vector(j: int) -> bool:
        r = row_of.get(j)
        return r is not None and int(np.count_nonzero(red[r])) == 1

    j2 = j1 - 1
    for j in range(top, j1 - 1, -1):
        if not has_basis_vector(j):
            j2 = j
            break
    delta = j2 - j1
    return DeltaIndex(delta, j1 % n if delta >= 0 else None, j1, j2)


def family_vector(field: FiniteField, n: int, v: Mapping[int, int], i: int, delta: int, x: int) -> Vector:
    """a_{i,delta}(x) v: e_j -> e_j + x e_{j+delta} for j = i mod n."""
    out = dict(v)
    add, mul = field.add_table, field.mul_table
    for j, y in v.items():
        if (j - i) % n == 0:
            out[j + delta] = int(add[out.get(j + delta, 0), mul[x, y]])
    return {j: y for j, y in out.items() if y}


def nilpotent_vector(n: int, v: Mapping[int, int], i: int, delta: int) -> Vector:
    """N_{i,delta} v with a_{i,delta}(x) = 1 + x N_{i,delta}."""
    return {j + delta: y for j, y in v.items() if (j - i) % n == 0}


def _check_family(field: FiniteField, delta: int, x: int) -> None:
    if delta < 0:
        raise InvalidParameter("a_{i,delta} needs delta >= 0")
    if delta == 0 and int(x) == int(field.neg[1]):
        raise InvalidParameter("x = -1 is excluded for delta = 0")


def apply_family(lattice: Lattice, i: int, delta: int, x: int) -> Lattice:
    field = lattice.field
    _check_family(field, delta, x)
    n = lattice.n
    gens = [family_vector(field, n, v, i, delta, x) for v in lattice.generators()]
    return Lattice.from_generators(field, n, gens)


def family_stabilizes(lattice: Lattice, i: int, delta: int) -> bool:
    """a_{i,delta}(x) L = L for every x, i.e. N_{i,delta} L <= L."""
    n = lattice.n
    return all(lattice.contains_vector(nilpotent_vector(n, v, i, delta)) for v in lattice.generators())


def delta_by_operators(lattice: Lattice) -> tuple[int, tuple[int, ...]]:
    """Largest delta >= 0 with some a_{i,delta} moving L, and the residues i doing so.

    Returns (-1, ()) when every a_{i,delta} with delta >= 0 fixes L.
    """
    n = lattice.n
    span = max(lattice.pivots) - min(lattice.pivots) + n
    for delta in range(span, -1, -1):
        movers = tuple(i for i in range(n) if not family_stabilizes(lattice, i, delta))
        if movers:
            return delta, movers
    return -1, ()


def operator_matrix(field: FiniteField, n: int, i: int, delta: int, x: int, lo: int, hi: int) -> np.ndarray:
    """Matrix of a_{i,delta}(x) on E_{>=lo} / E_{>=hi} (column j - lo is the image of e_j)."""
    _check_family(field, delta, x)
    size = hi - lo
    m = np.zeros((size, size), dtype=np.intp)
    for j in range(lo, hi):
        m[j - lo, j - lo] = 1
        if (j - i) % n == 0:
            k = j + delta
            if k < hi:
                m[k - lo, j - lo] = field.add_table[m[k - lo, j - lo], x]
    return m


def matmul(field: FiniteField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.intp)
    for k in range(a.shape[1]):
        col, row = a[:, k], b[k]
        if np.any(col) and np.any(row):
            out = field.add_table[out, field.mul_table[col[:, None], row[None, :]]]
    return out


def unipotent_inverse(field: FiniteField, m: np.ndarray) -> np.ndarray:
    """Inverse of a lower unitriangular matrix: sum of powers of (1 - m)."""
    size = m.shape[0]
    eye = np.eye(size, dtype=np.intp)
    nil = field.sub_table[eye, m]
    out, power = eye.copy(), eye.copy()
    for _ in range(size):
        power = matmul(field, power, nil)
        if not np.any(power):
            break
        out = field.add_table[out, power]
    return out


def filtration_gap(m: np.ndarray) -> Optional[int]:
    """Least k - j over the nonzero entries (k, j), k != j, of m - 1; None when m = 1.

    m - 1 is assumed strictly lower triangular, so the gap says m e_j = e_j
    modulo the span of e_{j'} with j' >= j + gap.
    """
    off = m - np.eye(m.shape[0], dtype=m.dtype)
    rows, cols = np.nonzero(off)
    if rows.size == 0:
        return None
    if np.any(rows <= cols):
        raise AssertionError("operator is not unipotent lower triangular")
    return int(np.min(rows - cols))


def commutator(field: FiniteField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return matmul(field, matmul(field, a, b),
                  matmul(field, unipotent_inverse(field, a), unipotent_inverse(field, b)))


# ---------------------------------------------------------------------------
# limits of one-parameter families (1 + u N) L as u -> infinity


def _vec_sub_scaled(field, a, f, b):
    return field.sub_table[a, field.mul_table[f, b]]


def _leading_space(field: FiniteField, rows: list) -> np.ndarray:
    """Leading coefficient vectors of a row-reduced basis of the F(u)-span.

    ``rows`` are polynomials in u given as lists of coefficient vectors.
    """
    rows = [list(r) for r in rows]

    def deg(r):
        for d in range(len(r) - 1, -1, -1):
            if np.any(r[d]):
                return d
        return -1

    while True:
        rows = [r for r in rows if deg(r) >= 0]
        order = sorted(range(len(rows)), key=lambda k: deg(rows[k]))
        basis = []  # (vector, pivot, combination)
        dependency = None
        for idx in order:
            v = rows[idx][deg(rows[idx])].copy()
            comb = {idx: 1}
            for bv, bp, bc in basis:
                f = int(v[bp])
                if f:
                    v = _vec_sub_scaled(field, v, f, bv)
                    for k, c in bc.items():
                        comb[k] = int(field.sub_table[comb.get(k, 0), field.mul_table[f, c]])
            nz = np.flatnonzero(v)
            if nz.size == 0:
                dependency = (idx, comb)
                break
            p = int(nz[0])
            s = int(field.inv[v[p]])
            basis.append((field.mul_table[s, v], p, {k: int(field.mul_table[s, c]) for k, c in comb.items()}))
        if dependency is None:
            return np.array([b[0] for b in basis]) if basis else np.zeros((0, 0), dtype=np.intp)
        idx, comb = dependency
        top = deg(rows[idx])
        width = len(rows[idx][0])
        new = [np.zeros(width, dtype=np.intp) for _ in range(top + 1)]
        for k, c in comb.items():
            if not c:
                continue
            dk = deg(rows[k])
            for d in range(dk + 1):
                tgt = d + top - dk
                new[tgt] = field.add_table[new[tgt], field.mul_table[c, rows[k][d]]]
        rows[idx] = new


def family_limit(lattice: Lattice, nil: Callable[[Mapping[int, int]], Mapping[int, int]],
                 shift: int, margin: int = 0) -> Lattice:
    """lim_{u -> infinity} (1 + u N) L for an O-linear N with N^2 = 0 or index-raising N.

    ``shift`` is the index displacement of N (N e_j is supported at j + shift).
    """
    n = lattice.n
    field = lattice.field
    a = lattice.profile
    drop = -(-max(0, -shift) // n)
    lo = min(a) - drop - margin
    top = max(a) * n  # E_{>= top} lies in L
    top_u = top + max(0, -shift)  # E_{>= top_u} lies in every (1 + uN) L
    hi = -(-(top_u + 2 * max(0, -shift)) // n) + 1 + margin
    D = (hi - lo) * n
    base = lattice.window_rows(min(a), hi)
    rows = []
    for row in base:
        v = {int(k) + min(a) * n: int(row[k]) for k in np.flatnonzero(row)}
        c0 = np.zeros(D, dtype=np.intp)
        c1 = np.zeros(D, dtype=np.intp)
        for j, x in v.items():
            c0[j - lo * n] = x
        for j, x in nil(v).items():
            if lo * n <= j < hi * n:
                c1[j - lo * n] = x
            elif j < lo * n:
                raise PrecisionInsufficient("family leaves the working window")
        rows.append([c0, c1])
    for j in range(top_u, hi * n):
        e = np.zeros(D, dtype=np.intp)
        e[j - lo * n] = 1
        rows.append([e])
    lead = _leading_space(field, rows)
    gens = [{int(k) + lo * n: int(r[k]) for k in np.flatnonzero(r)} for r in lead]
    gens += [{j: 1} for j in range(hi * n, hi * n + n)]
    return Lattice.from_generators(field, n, gens)


@dataclass(frozen=True)
class Endpoint:
    lattice: Lattice
    constant: bool


def family_endpoint(lattice: Lattice, i: int, delta: int) -> Endpoint:
    """The point at x = infinity of the curve x -> a_{i,delta}(x) L."""
    if delta < 1:
        raise InvalidParameter("family_endpoint needs delta >= 1")
    n = lattice.n
    end = family_limit(lattice, lambda v: nilpotent_vector(n, v, i, delta), delta)
    return Endpoint(end, end == lattice)


@dataclass
class Reduction:
    path: list
    deltas: list
    terminal: int

    def to_json(self) -> dict:
        return {"steps": len(self.path), "deltas": list(self.deltas), "terminal_shift": self.terminal,
                "path": [L.to_json() for L in self.path]}


def reduce_to_J(lattice: Lattice, twist: FrobTwist, mu: Sequence[int], max_steps: int = 1000) -> Reduction:
    """Move L inside its connected component of X_<=mu(b) to a shift lattice s^i O^h."""
    mu = check_mu(mu, lattice.n)
    if not member(lattice, twist, mu, closed=True):
        raise InvalidInput("the starting lattice is not a point of X_<=mu(b)")
    d = delta_index(lattice)
    path, deltas = [], [d.delta]
    current = lattice
    while d.delta >= 0:
        if len(path) >= max_steps:
            raise RuntimeError("reduction did not terminate")
        nxt = family_endpoint(current, d.residue, d.delta).lattice
        nd = delta_index(nxt)
        if nd.delta >= d.delta:
            raise RuntimeError(f"delta did not decrease ({d.delta} -> {nd.delta})")
        path.append(nxt)
        deltas.append(nd.delta)
        current, d = nxt, nd
    return Reduction(path, deltas, d.j1)


# ---------------------------------------------------------------------------
# enumeration and point counts


def _profiles(n: int, kappa: int, window: Window):
    lo, hi = window.low, window.high
    for a in itertools.product(range(lo, hi + 1), repeat=n - 1):
        last = kappa - sum(a)
        if lo <= last <= hi:
            yield tuple(a) + (last,)


def _free_positions(pivots: Sequence[int]) -> list[list[int]]:
    n = len(pivots)
    top = max(pivots)
    return [[j for j in range(p + 1, top) if j < pivots[j % n]] for p in pivots]


def _profile_feasible(pivots, twist: FrobTwist, mu) -> bool:
    """Pivot-set conditions b sigma L <= t^{mu_n} L and t^{mu_1} L <= b sigma L."""
    n = len(pivots)
    images = [twist.index_map(p) for p in pivots]
    for x in images:
        if x - mu[-1] * n < pivots[x % n]:
            return False
    least = {x % n: x for x in images}
    for r in range(n):
        if pivots[r] + mu[0] * n < least[r]:
            return False
    return True


def candidate_profiles(n: int, twist: FrobTwist, mu, kappa: int, window: Window):
    prune = twist.is_monotone()
    for a in _profiles(n, kappa, window):
        pivots = tuple(x * n + c for c, x in enumerate(a))
        if prune and not _profile_feasible(pivots, twist, mu):
            continue
        yield pivots


def superbasic_window(twist: FrobTwist, mu: Sequence[int], kappa: int) -> Window:
    """A window containing every lattice of X_<=mu(b) with the given kappa.

    For b superbasic with e_j -> e_{j+m}, pivot sets P of points satisfy
    P + g <= P for g = m - mu_n n and g = mu_1 n - m, so the spread of the
    pivots is bounded by the largest least representative of a residue in
    the semigroup generated by these steps.
    """
    n = twist.n
    blocks = twist.element.blocks
    if len(blocks) != 1 or n == 1:
        raise UnsupportedDatum("automatic windows need a single superbasic block of size > 1")
    m = blocks[0].m
    steps = [m - mu[-1] * n, mu[0] * n - m]
    if min(steps) < 1:
        raise InvalidInput("X_<=mu(b) is empty for this mu")
    dist = {0: 0}
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if d > dist.get(r, math.inf):
            continue
        for g in steps:
            nr, nd = (r + g) % n, d + g
            if nd < dist.get(nr, math.inf):
                dist[nr] = nd
                heapq.heappush(heap, (nd, nr))
    spread = max(dist.values())
    total = n * kappa + n * (n - 1) // 2  # sum of pivots
    low_p = math.floor(Fraction(total, n)) - spread
    high_p = math.ceil(Fraction(total, n)) + spread
    return Window(math.floor(Fraction(low_p - (n - 1), n)), math.ceil(Fraction(high_p, n)) + 1)


def cell_count(field: FiniteField, pivots) -> int:
    return field.order ** sum(len(f) for f in _free_positions(pivots))


def enumerate_window(twist: FrobTwist, mu: Sequence[int], kappa: int, window: Window,
                     closed: bool = False, budget: Optional[int] = None,
                     predicate: Optional[Callable[[Lattice], bool]] = None) -> list[Lattice]:
    """All lattices with t^high O^n <= L <= t^low O^n, kappa(L) = kappa, in X_mu(b) (or X_<=mu(b)).

    Lattices are produced cell by cell (pivot profiles in lexicographic
    order, coefficients in lexicographic order).
    """
    n = twist.n
    field = twist.field
    mu = check_mu(mu, n)
    if budget is None:
        budget = DEFAULT_BUDGET
    if sum(mu) != twist.det_valuation:
        return []
    profiles = list(candidate_profiles(n, twist, mu, kappa, window))
    total = sum(cell_count(field, p) for p in profiles)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate lattices exceed the budget {budget}")
    out = []
    for pivots in profiles:
        free = _free_positions(pivots)
        flat = [(c, j) for c, fs in enumerate(free) for j in fs]
        for values in itertools.product(field.elements, repeat=len(flat)):
            coeffs = [[] for _ in range(n)]
            for (c, j), x in zip(flat, values):
                if x:
                    coeffs[c].append((j, x))
            L = Lattice(field, n, pivots, tuple(tuple(cf) for cf in coeffs))
            if member(L, twist, mu, closed) and (predicate is None or predicate(L)):
                out.append(L)
    return out


def candidate_total(twist: FrobTwist, mu, kappa: int, window: Window) -> int:
    n = twist.n
    return sum(cell_count(twist.field, p) for p in candidate_profiles(n, twist, check_mu(mu, n), kappa, window))


@dataclass
class PointCount:
    q: int
    degrees: list
    counts: list
    exponents: list = dc_field(default_factory=list)

    @property
    def exponent(self):
        """Common growth exponent if all consecutive ratios are the same exact power of q."""
        if self.exponents and all(e == self.exponents[0] for e in self.exponents) \
                and isinstance(self.exponents[0], int):
            return self.exponents[0]
        return None

    def to_json(self) -> dict:
        return {"q": self.q, "s": list(self.degrees), "counts": list(self.counts),
                "exponents": [_exponent_json(e) for e in self.exponents],
                "exponent": self.exponent}


def _exponent_json(e):
    if e is None or isinstance(e, int):
        return e
    if math.isinf(e):
        return "inf"
    return round(float(e), 12)


def growth_exponent(q: int, n1: int, n2: int, ds: int = 1):
    """log_q(n2/n1)/ds, as an int when n2 = n1 q^(e ds) exactly.

    No points over the smaller field but some over the larger one counts as
    unbounded growth (``math.inf``); no points at all gives ``None``.
    """
    if n2 <= 0:
        return None
    if n1 <= 0:
        return math.inf
    for e in range(0, 64):
        if n1 * q ** (e * ds) == n2:
            return e
        if n1 * q ** (e * ds) > n2:
            break
    return math.log(n2 / n1, q) / ds


def count_points(blocks, mu: Sequence[int], kappa: int, q: int, degrees: Iterable[int],
                 window: Optional[Window] = None, closed: bool = False,
                 budget: Optional[int] = None,
                 predicate_factory: Optional[Callable[[FiniteField], Callable[[Lattice], bool]]] = None
                 ) -> PointCount:
    """Number of F_{q^s}-points of a window patch of X_mu(b) for each s."""
    degrees = list(degrees)
    counts = []
    for s in degrees:
        fld = get_field(q, s)
        twist = FrobTwist.from_blocks(blocks, fld)
        win = window if window is not None else superbasic_window(twist, mu, kappa)
        pred = predicate_factory(fld) if predicate_factory else None
        counts.append(len(enumerate_window(twist, mu, kappa, win, closed, budget, pred)))
    exps = [growth_exponent(q, counts[k], counts[k + 1], degrees[k + 1] - degrees[k])
            for k in range(len(counts) - 1)]
    return PointCount(q, degrees, counts, exps)


# ---------------------------------------------------------------------------
# the GL_5 family with slopes 1/2 and 1/3

GL5_BLOCKS = (SlopeBlock(1, 2), SlopeBlock(1, 3))
GL5_MU = (2, 0, 0, 0, 0)


def gl5_index(block: int, j: int) -> int:
    """Global index of e_{block,j} (block 1: h = 2, block 2: h = 3)."""
    if block == 1:
        return (j // 2) * 5 + j % 2
    if block == 2:
        return (j // 3) * 5 + 2 + j % 3
    raise InvalidInput("block must be 1 or 2")


def gl5_lattice(field: FiniteField, a0: int, a1: int) -> Lattice:
    """<e_{1,0} + a0 e_{2,0} + a1 e_{2,1}, e_{1,1} + sigma(a0) e_{2,1}, e_{i,j} (j >= 2)>."""
    e = gl5_index
    v0 = {e(1, 0): 1}
    if a0:
        v0[e(2, 0)] = int(a0)
    if a1:
        v0[e(2, 1)] = int(a1)
    v1 = {e(1, 1): 1}
    if a0:
        v1[e(2, 1)] = int(field.frob[a0])
    rest = [{e(1, j): 1} for j in (2, 3)] + [{e(2, j): 1} for j in (2, 3, 4)]
    return Lattice.from_generators(field, 5, [v0, v1] + rest)


def gl5_family(field: FiniteField) -> dict:
    """All lattices of the family with a0, a1 in the field, keyed by canonical form."""
    return {gl5_lattice(field, a0, a1): (a0, a1) for a0 in field.elements for a1 in field.elements}


def gl5_shift(lattice: Lattice, k1: int, k2: int) -> Lattice:
    out = block_shift(lattice, (2, 3), 0, k1) if k1 else lattice
    return block_shift(out, (2, 3), 1, k2) if k2 else out


def gl5_explain(lattice: Lattice, family: dict, reach: int = 4):
    """Find (k1, k2, a0, a1) with lattice = s1^k1 s2^k2 Lambda(a0, a1), or None."""
    for k1 in range(-reach, reach + 1):
        k2 = lattice.kappa - 2 - k1
        back = gl5_shift(lattice, -k1, -k2)
        if back in family:
            return (k1, k2) + tuple(family[back])
    return None


GL5_WINDOWS = {2: (Window(0, 2), Window(-1, 1)), 3: (Window(0, 1),)}


@dataclass
class GL5Check:
    """Outcome of the GL_5 family check over one field."""

    q: int
    s: int
    family: list  # (a0, a1, invariant, strict member)
    regions: list  # (window, kappa, members, unexplained lattices)
    explained: list  # (kappa, k1, k2, a0, a1)

    @property
    def family_members(self) -> bool:
        return all(m for *_, m in self.family)

    @property
    def translates_only(self) -> bool:
        return all(not bad for *_, bad in self.regions)

    def to_json(self) -> dict:
        return {
            "q": self.q, "s": self.s,
            "family": [{"a0": a0, "a1": a1, "invariant": list(inv), "member": m}
                       for a0, a1, inv, m in self.family],
            "family_all_members": self.family_members,
            "family_non_members": [[a0, a1] for a0, a1, _, m in self.family if not m],
            "regions": [{"window": w.to_json(), "kappa": k, "members": n,
                         "unexplained": [L.to_json() for L in bad]}
                        for w, k, n, bad in self.regions],
            "window_members_are_translates": self.translates_only,
            "explanations": [list(e) for e in self.explained],
        }


def verify_gl5(q: int, s: int = 1, windows: Optional[Sequence[Window]] = None,
               budget: Optional[int] = None) -> GL5Check:
    """Check the two-parameter GL_5 family against exhaustive window enumeration.

    For every (a0, a1) in F_{q^s}^2 record inv(L, b sigma L) of the family
    lattice; for every kappa of every window, enumerate X_mu(b) and try to
    write each member as s1^k1 s2^k2 Lambda(a0, a1).
    """
    fld = get_field(q, s)
    twist = FrobTwist.from_blocks(GL5_BLOCKS, fld)
    if windows is None:
        windows = GL5_WINDOWS.get(q, (Window(0, 1),))
    fam = gl5_family(fld)
    family = []
    for L, (a0, a1) in sorted(fam.items(), key=lambda kv: kv[1]):
        inv = invariant(L, twist)
        family.append((a0, a1, inv, inv == GL5_MU))
    regions, explained = [], []
    for w in windows:
        for kappa in range(5 * w.low, 5 * w.high + 1):
            mem = enumerate_window(twist, GL5_MU, kappa, w, budget=budget)
            bad = []
            for L in mem:
                e = gl5_explain(L, fam)
                if e is None:
                    bad.append(L)
                else:
                    explained.append((kappa,) + tuple(e))
            regions.append((w, kappa, len(mem), bad))
    return GL5Check(q, s, family, regions, sorted(set(explained)))
