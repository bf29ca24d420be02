"""Split root data, coweights, dominance order, Weyl action and pi_1.

Coweights are integer coordinate tuples with respect to a fixed Z-basis of
X_*(A); rational coweights are tuples of :class:`fractions.Fraction`.  Each
datum embeds its coordinates into an ambient rational space in which simple
roots act as linear functionals (dot product) and simple coroots are vectors.

Ambient models:

* type A with ``isogeny="GL"``: ``Z^n`` with roots ``e_i - e_{i+1}``;
  coordinates are the ambient ones.
* type A simply connected (``SL_n``): coordinates in the simple coroot basis.
* type A adjoint (``PGL_n``): ambient ``Q^n`` modulo nothing, coordinates in
  the basis given by the sum-zero projections of ``e_1, ..., e_{n-1}``.
* types B, C, D: the orthonormal model; coordinates are w.r.t. the Hermite
  basis of X_*(A), which is the standard basis whenever X_*(A) = Z^n.
* types E, F, G: the Cartan-matrix model (simple coroot coordinates for the
  simply connected form, fundamental coweight coordinates for the adjoint form).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from . import intmat
from .errors import InvalidInput

Coweight = tuple[int, ...]
RationalCoweight = tuple[Fraction, ...]
Number = Union[int, Fraction]

TYPES = ("A", "B", "C", "D", "E", "F", "G")
ISOGENIES = ("GL", "simply-connected", "adjoint")
_ISOGENY_ALIASES = {
    "gl": "GL",
    "sc": "simply-connected",
    "simply-connected": "simply-connected",
    "simply_connected": "simply-connected",
    "adjoint": "adjoint",
    "ad": "adjoint",
}


def as_fraction_vector(v: Iterable) -> RationalCoweight:
    return tuple(Fraction(x) for x in v)


def _unit(n: int, i: int) -> list[Fraction]:
    return [Fraction(int(k == i)) for k in range(n)]


def _ortho_model(kind: str, rank: int):
    """Simple roots and coroots of a classical type in Q^rank."""
    n = rank
    roots, coroots = [], []
    for i in range(n - 1):
        v = _unit(n, i)
        v[i + 1] = Fraction(-1)
        roots.append(v)
        coroots.append(list(v))
    if kind == "B":
        roots.append(_unit(n, n - 1))
        coroots.append([2 * x for x in _unit(n, n - 1)])
    elif kind == "C":
        roots.append([2 * x for x in _unit(n, n - 1)])
        coroots.append(_unit(n, n - 1))
    elif kind == "D":
        v = _unit(n, n - 1)
        v[n - 2] = Fraction(1)
        roots.append(v)
        coroots.append(list(v))
    return roots, coroots


def _exceptional_cartan(kind: str, rank: int) -> list[list[int]]:
    """Cartan matrix a[i][j] = <alpha_j, alpha_i^vee>, Bourbaki numbering."""
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def bond(i, j, aij=-1, aji=-1):
        a[i][j], a[j][i] = aij, aji

    if kind == "G" and rank == 2:
        # alpha_1 short, alpha_2 long
        bond(0, 1, -3, -1)
    elif kind == "F" and rank == 4:
        bond(0, 1)
        bond(1, 2, -1, -2)  # alpha_2 long, alpha_3 short
        bond(2, 3)
    elif kind == "E" and rank in (6, 7, 8):
        bond(0, 2)
        bond(1, 3)
        bond(2, 3)
        for i in range(3, rank - 1):
            bond(i, i + 1)
    else:
        raise InvalidInput(f"no root system of type {kind}{rank}")
    return a


def _simple_factor_model(kind: str, rank: int, isogeny: str):
    """(roots, coroots, lattice generators) for one simple factor."""
    if kind == "A":
        if isogeny == "GL":
            n = rank + 1
            roots, coroots = [], []
            for i in range(rank):
                v = _unit(n, i)
                v[i + 1] = Fraction(-1)
                roots.append(v)
                coroots.append(list(v))
            return roots, coroots, [_unit(n, i) for i in range(n)]
        if rank < 1:
            raise InvalidInput("A0 only exists as GL_1")
        n = rank + 1
        roots, coroots = [], []
        for i in range(rank):
            v = _unit(n, i)
            v[i + 1] = Fraction(-1)
            roots.append(v)
            coroots.append(list(v))
        if isogeny == "simply-connected":
            return roots, coroots, [list(c) for c in coroots]
        basis = []
        for i in range(rank):
            v = _unit(n, i)
            basis.append([x - Fraction(1, n) for x in v])
        return roots, coroots, basis
    if isogeny == "GL":
        raise InvalidInput("isogeny GL requires type A factors")
    if kind in ("B", "C", "D"):
        minimum = {"B": 2, "C": 2, "D": 3}[kind]
        if rank < minimum:
            raise InvalidInput(f"{kind}{rank} is not a valid classical type")
        roots, coroots = _ortho_model(kind, rank)
        if isogeny == "simply-connected":
            gens = coroots
        else:
            gens = [intmat.solve_rational(roots, _unit(rank, i)) for i in range(rank)]
        return roots, coroots, _lattice_basis(gens, rank)
    cartan = _exceptional_cartan(kind, rank)
    r = rank
    if isogeny == "simply-connected":
        coroots = [_unit(r, i) for i in range(r)]
        roots = [[Fraction(cartan[i][j]) for i in range(r)] for j in range(r)]
    else:
        roots = [_unit(r, j) for j in range(r)]
        coroots = [[Fraction(cartan[i][j]) for j in range(r)] for i in range(r)]
    return roots, coroots, [_unit(r, i) for i in range(r)]


def _lattice_basis(generators, dim: int):
    """Hermite basis of the lattice spanned by rational generators."""
    den = 1
    for g in generators:
        for x in g:
            den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
    rows = [[int(Fraction(x) * den) for x in g] for g in generators]
    h = intmat.hermite_rows(rows)
    return [[Fraction(x, den) for x in row] for row in h]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _block_diag(parts: Sequence[Sequence[Sequence[Fraction]]], dims: Sequence[int], offsets):
    out = []
    total = sum(dims)
    for vecs, off, d in zip(parts, offsets, dims):
        for v in vecs:
            w = [Fraction(0)] * total
            w[off:off + d] = v
            out.append(tuple(w))
    return out


@dataclass(frozen=True)
class FundamentalGroup:
    """X_*(A) modulo a coroot lattice, presented by invariant factors.

    ``invariant_factors`` lists the torsion orders (> 1, ascending) followed by
    one ``0`` per free factor.  ``projection`` maps coweight coordinates to
    pi_1 coordinates (torsion entries reduced modulo their order); ``lift``
    maps pi_1 coordinates back to a coweight with that image.
    """

    invariant_factors: tuple[int, ...]
    projection: tuple[tuple[int, ...], ...]
    lift: tuple[tuple[int, ...], ...]

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d)

    def reduce(self, element: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % d if d else x for x, d in zip(element, self.invariant_factors))

    def project(self, coords: Sequence[int]) -> tuple[int, ...]:
        return self.reduce(intmat.matvec(self.projection, coords))

    def lift_element(self, element: Sequence[int]) -> Coweight:
        return tuple(intmat.matvec(self.lift, element))

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class RootDatum:
    """A split root datum (X_*(A), simple roots, simple coroots).

    ``simple_roots`` are ambient linear functionals, ``simple_coroots`` and
    ``basis`` (a Z-basis of X_*(A)) are ambient vectors.  Levi subdata keep the
    ambient space and basis and carry a subset of the simple roots; their
    ``root_labels`` record the indices of those roots in the parent datum.
    """

    cartan: tuple[tuple[str, int], ...]
    isogeny: str
    simple_roots: tuple[tuple[Fraction, ...], ...]
    simple_coroots: tuple[tuple[Fraction, ...], ...]
    basis: tuple[tuple[Fraction, ...], ...]
    root_labels: tuple[int, ...] = field(default=())

    # -- construction -------------------------------------------------

    @classmethod
    def from_cartan(cls, factors: Sequence[Sequence], isogeny: str = "GL") -> "RootDatum":
        iso = _ISOGENY_ALIASES.get(str(isogeny).lower())
        if iso is None:
            raise InvalidInput(f"unknown isogeny {isogeny!r}")
        if not factors:
            raise InvalidInput("root datum needs at least one factor")
        roots_parts, coroots_parts, basis_parts, dims = [], [], [], []
        cartan = []
        for f in factors:
            kind, rank = str(f[0]).upper(), int(f[1])
            if kind in ("E6", "E7", "E8", "F4", "G2"):
                kind, rank = kind[0], int(kind[1])
            if kind not in TYPES or rank < 0:
                raise InvalidInput(f"bad Cartan factor {f!r}")
            if rank == 0 and not (kind == "A" and iso == "GL"):
                raise InvalidInput("rank 0 factors only exist as GL_1")
            roots, coroots, basis = _simple_factor_model(kind, rank, iso)
            roots_parts.append(roots)
            coroots_parts.append(coroots)
            basis_parts.append(basis)
            dims.append(len(basis[0]) if basis else len(roots[0]))
            cartan.append((kind, rank))
        offsets = list(itertools.accumulate([0] + dims[:-1]))
        roots = _block_diag(roots_parts, dims, offsets)
        coroots = _block_diag(coroots_parts, dims, offsets)
        basis = _block_diag(basis_parts, dims, offsets)
        return cls(tuple(cartan), iso, tuple(roots), tuple(coroots), tuple(basis),
                   tuple(range(len(roots))))

    @classmethod
    def gl(cls, *sizes: int) -> "RootDatum":
        """GL_{n_1} x ... x GL_{n_k}."""
        return cls.from_cartan([("A", n - 1) for n in sizes], "GL")

    @classmethod
    def from_json(cls, doc) -> "RootDatum":
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            return cls.from_cartan(doc["cartan"], doc.get("isogeny", "GL"))
        except (KeyError, TypeError, IndexError) as exc:
            raise InvalidInput(f"malformed root datum document: {exc}") from None

    def to_json(self) -> dict:
        return {"cartan": [list(c) for c in self.cartan], "isogeny": self.isogeny}

    # -- basic shape ---------------------------------------------------

    @property
    def rank_total(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple_roots)

    @property
    def is_gl(self) -> bool:
        return self.isogeny == "GL"

    def __repr__(self) -> str:
        kinds = "x".join(f"{k}{r}" for k, r in self.cartan)
        return f"RootDatum({kinds}, {self.isogeny}, simple roots {list(self.root_labels)})"

    # -- coordinates ---------------------------------------------------

    def check_length(self, coords: Sequence) -> None:
        if len(coords) != self.rank_total:
            raise InvalidInput(
                f"coweight has length {len(coords)}, datum expects {self.rank_total}")

    def embed(self, coords: Sequence[Number]) -> RationalCoweight:
        self.check_length(coords)
        out = [Fraction(0)] * self.ambient_dim
        for c, b in zip(coords, self.basis):
            if c:
                c = Fraction(c)
                for k, x in enumerate(b):
                    if x:
                        out[k] += c * x
        return tuple(out)

    def coords_of(self, ambient: Sequence[Number]) -> RationalCoweight:
        """Rational coordinates of an ambient vector in the span of the basis."""
        sol = intmat.solve_rational(intmat.transpose(self.basis), list(ambient))
        if sol is None:
            raise InvalidInput(f"{tuple(ambient)} is not in X_*(A) (x) Q")
        return tuple(sol)

    def integral_coords_of(self, ambient: Sequence[Number]) -> Coweight:
        c = self.coords_of(ambient)
        if any(x.denominator != 1 for x in c):
            raise InvalidInput(f"{tuple(ambient)} is not in X_*(A)")
        return tuple(int(x) for x in c)

    def coweight_from_ambient(self, ambient: Sequence[Number]) -> Coweight:
        """Integral coweight from ambient coordinates.

        For adjoint type A factors the central part of each factor is
        discarded first, so ``(0, ..., 0, 1)`` in ``Z^h / Z`` is accepted.
        """
        v = [Fraction(x) for x in ambient]
        if self.isogeny == "adjoint":
            off = 0
            for kind, rank in self.cartan:
                size = rank + 1 if kind == "A" else self._factor_dim(kind, rank)
                if kind == "A":
                    mean = sum(v[off:off + size]) / size
                    for k in range(off, off + size):
                        v[k] -= mean
                off += size
        return self.integral_coords_of(v)

    @staticmethod
    def _factor_dim(kind: str, rank: int) -> int:
        return rank + 1 if kind == "A" else rank

    @cached_property
    def coroot_coords(self) -> tuple[Coweight, ...]:
        return tuple(self.integral_coords_of(c) for c in self.simple_coroots)

    # -- pairings ------------------------------------------------------

    def pair_ambient(self, functional: Sequence[Number], ambient: Sequence[Number]) -> Fraction:
        return sum((Fraction(a) * b for a, b in zip(functional, ambient) if a and b), Fraction(0))

    def simple_pairings(self, coords: Sequence[Number]) -> tuple[Fraction, ...]:
        x = self.embed(coords)
        return tuple(self.pair_ambient(a, x) for a in self.simple_roots)

    def cartan_matrix(self) -> list[list[int]]:
        """a[i][j] = <alpha_j, alpha_i^vee>."""
        return [[int(self.pair_ambient(a, c)) for a in self.simple_roots]
                for c in self.simple_coroots]

    # -- Weyl group ----------------------------------------------------

    def reflect(self, i: int, coords: Sequence[Number]) -> RationalCoweight:
        x = self.embed(coords)
        p = self.pair_ambient(self.simple_roots[i], x)
        y = tuple(a - p * c for a, c in zip(x, self.simple_coroots[i]))
        return self.coords_of(y)

    def is_dominant(self, coords: Sequence[Number]) -> bool:
        return all(p >= 0 for p in self.simple_pairings(coords))

    # -- structure -----------------------------------------------------

    def simple_factors(self) -> list[tuple[int, ...]]:
        """Connected components of the Dynkin diagram (local root indices)."""
        a = self.cartan_matrix()
        r = len(a)
        seen, comps = set(), []
        for s in range(r):
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(r):
                    if j not in seen and a[i][j] != 0:
                        seen.add(j)
                        stack.append(j)
            comps.append(tuple(sorted(comp)))
        return comps

    def factor_type(self, indices: Sequence[int]) -> tuple[str, int]:
        a = self.cartan_matrix()
        sub = [[a[i][j] for j in indices] for i in indices]
        return classify_cartan(sub)

    def levi(self, subset: Iterable[int]) -> "RootDatum":
        """Standard Levi subdatum spanned by the given local simple root indices."""
        idx = tuple(sorted(set(subset)))
        if any(i < 0 or i >= self.semisimple_rank for i in idx):
            raise InvalidInput(f"simple root indices {idx} out of range")
        roots = tuple(self.simple_roots[i] for i in idx)
        coroots = tuple(self.simple_coroots[i] for i in idx)
        labels = tuple(self.root_labels[i] for i in idx)
        sub = RootDatum((), self.isogeny, roots, coroots, self.basis, labels)
        cartan = tuple(sub.factor_type(c) for c in sub.simple_factors())
        if self.is_gl:
            cartan = tuple(("A", n - 1) for n in sub.gl_sizes)
        return RootDatum(cartan, self.isogeny, roots, coroots, self.basis, labels)

    @cached_property
    def gl_sizes(self) -> tuple[int, ...]:
        """Block sizes of a GL-product datum (coordinates are contiguous)."""
        if not self.is_gl:
            raise InvalidInput("not a GL-product datum")
        n = self.ambient_dim
        linked = set()
        for a in self.simple_roots:
            nz = [k for k, x in enumerate(a) if x]
            linked.add(min(nz))
        sizes, run = [], 1
        for k in range(n - 1):
            if k in linked:
                run += 1
            else:
                sizes.append(run)
                run = 1
        sizes.append(run)
        return tuple(sizes)

    def gl_slices(self) -> list[slice]:
        out, off = [], 0
        for s in self.gl_sizes:
            out.append(slice(off, off + s))
            off += s
        return out

    @cached_property
    def rho(self) -> RationalCoweight:
        """Half sum of positive roots, as an ambient functional."""
        pos = positive_roots(self)
        return tuple(sum((r[k] for r in pos), Fraction(0)) / 2 for k in range(self.ambient_dim))


def classify_cartan(a: Sequence[Sequence[int]]) -> tuple[str, int]:
    """Type of a connected Cartan matrix (a[i][j] = <alpha_j, alpha_i^vee>)."""
    r = len(a)
    if r == 0:
        return ("A", 0)
    edges = {(i, j) for i in range(r) for j in range(r) if i < j and a[i][j]}
    deg = [sum(1 for e in edges if k in e) for k in range(r)]
    laced = {a[i][j] * a[j][i] for i, j in edges}
    if laced - {1}:
        if 3 in laced:
            return ("G", 2)
        if r == 2:
            return ("B", 2)
        (i, j), = [(i, j) for i, j in edges if a[i][j] * a[j][i] == 2]
        ends = [k for k in range(r) if deg[k] == 1]
        if r == 4 and deg[i] == 2 and deg[j] == 2:
            return ("F", 4)
        # which end of the double bond is short?  a[s][l] == -2 for s short
        short = i if a[i][j] == -2 else j
        end = i if i in ends else j
        return ("B", r) if short == end else ("C", r)
    if max(deg) <= 2:
        return ("A", r)
    center = deg.index(3)
    arms = []
    for nb in (k for e in edges if center in e for k in e if k != center):
        length, prev, cur = 1, center, nb
        while True:
            nxt = [k for e in edges if cur in e for k in e if k not in (cur, prev)]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return ("D", r)
    return ("E", r)


# -- module-level operations --------------------------------------------


def _root_closure(simple_vectors, reflect_functionals, reflect_vectors):
    """All images of the simple vectors under the group generated by the
    reflections v -> v - <f_i, v> w_i."""
    seen = {tuple(v) for v in simple_vectors}
    frontier = list(seen)
    while frontier:
        new = []
        for v in frontier:
            for f, w in zip(reflect_functionals, reflect_vectors):
                p = sum(Fraction(a) * b for a, b in zip(f, v))
                if p:
                    u = tuple(x - p * y for x, y in zip(v, w))
                    if u not in seen:
                        seen.add(u)
                        new.append(u)
        frontier = new
    return seen


def _positive_part(vectors, simple):
    mat = intmat.transpose(simple)
    out = []
    for v in vectors:
        c = intmat.solve_rational(mat, list(v))
        if c is not None and all(x >= 0 for x in c):
            out.append(v)
    def key(v):
        c = intmat.solve_rational(mat, list(v))
        return (sum(c), tuple(-x for x in c))

    return sorted(out, key=key)


def positive_roots(datum: RootDatum) -> list[tuple[Fraction, ...]]:
    if not datum.simple_roots:
        return []
    # roots are reflected by s_i(a) = a - <a, alpha_i^vee> alpha_i
    allr = _root_closure(datum.simple_roots, datum.simple_coroots, datum.simple_roots)
    return _positive_part(allr, datum.simple_roots)


def positive_coroots(datum: RootDatum) -> list[Coweight]:
    """All positive coroots, as integral coweights."""
    if not datum.simple_coroots:
        return []
    allc = _root_closure(datum.simple_coroots, datum.simple_roots, datum.simple_coroots)
    pos = _positive_part(allc, datum.simple_coroots)
    return [datum.integral_coords_of(c) for c in pos]


def pairing(datum: RootDatum, alpha: Union[int, Sequence[Number]], x: Sequence[Number]) -> Fraction:
    """<alpha, x> for a root ``alpha`` (simple root index or ambient functional)."""
    datum.check_length(x)
    if isinstance(alpha, int):
        functional = datum.simple_roots[alpha]
    else:
        functional = tuple(Fraction(a) for a in alpha)
        if len(functional) != datum.ambient_dim:
            raise InvalidInput("root has wrong ambient length")
    return datum.pair_ambient(functional, datum.embed(x))


def coroot_coefficients(datum: RootDatum, x: Sequence[Number]):
    """Coefficients of x in the simple coroot basis, or None if x is outside the span."""
    if not datum.simple_coroots:
        return [] if all(c == 0 for c in datum.embed(x)) else None
    sol = intmat.solve_rational(intmat.transpose(datum.simple_coroots), list(datum.embed(x)))
    return sol


def dominance_leq(datum: RootDatum, mu1: Sequence[Number], mu2: Sequence[Number]) -> bool:
    """mu1 <= mu2: mu2 - mu1 is a non-negative rational combination of positive coroots.

    Positive coroots are non-negative combinations of the (linearly
    independent) simple coroots, so the cone is simplicial and membership is
    decided by solving for simple-coroot coefficients.
    """
    datum.check_length(mu1)
    datum.check_length(mu2)
    diff = [Fraction(b) - Fraction(a) for a, b in zip(mu1, mu2)]
    coeffs = coroot_coefficients(datum, diff)
    return coeffs is not None and all(c >= 0 for c in coeffs)


def dominant_rep(datum: RootDatum, mu: Sequence[Number]):
    """The dominant element of the Weyl orbit of ``mu``."""
    x = datum.embed(mu)
    while True:
        for i, a in enumerate(datum.simple_roots):
            p = datum.pair_ambient(a, x)
            if p < 0:
                x = tuple(v - p * c for v, c in zip(x, datum.simple_coroots[i]))
                break
        else:
            break
    coords = datum.coords_of(x)
    if all(isinstance(m, int) for m in mu):
        return tuple(int(c) for c in coords)
    return coords


def fundamental_group(datum: RootDatum) -> FundamentalGroup:
    """pi_1 = X_*(A) / coroot lattice, via a Smith form of the coroot matrix."""
    k = datum.rank_total
    cols = datum.coroot_coords
    if not cols:
        return FundamentalGroup((0,) * k, tuple(tuple(r) for r in intmat.identity(k)),
                                tuple(tuple(r) for r in intmat.identity(k)))
    c = [[cols[j][i] for j in range(len(cols))] for i in range(k)]
    u, d, _ = intmat.smith_form(c)
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    rank = sum(1 for x in diag if x)
    torsion_rows = [(diag[i], u[i]) for i in range(rank) if diag[i] > 1]
    free_rows = intmat.hermite_rows(u[rank:])
    proj = [row for _, row in torsion_rows] + free_rows
    factors = tuple([dd for dd, _ in torsion_rows] + [0] * len(free_rows))
    # lift: columns of U'^{-1} for the kept rows, where U' = [units; proj]
    unit_rows = [u[i] for i in range(rank) if diag[i] == 1]
    full = unit_rows + proj
    inv = intmat.inverse_unimodular(full)
    keep = range(len(unit_rows), k)
    lift = tuple(tuple(inv[i][j] for j in keep) for i in range(k))
    return FundamentalGroup(factors, tuple(tuple(r) for r in proj), lift)
