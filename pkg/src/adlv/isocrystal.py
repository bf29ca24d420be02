"""sigma-conjugacy class data: Newton and Kottwitz points, slope blocks,
normal forms and the minimal coweight mu_min.

A class is encoded by its invariants (Newton point, Kottwitz point).  For
GL-product data it can also carry a slope-block decomposition, which fixes the
explicit normal form ``e_j -> e_{j+m}`` (with ``e_{j+h} = t e_j``) per block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Optional, Sequence

from . import intmat
from .errors import (
    InconsistentClass,
    InvalidBlock,
    InvalidInput,
    InvalidLevi,
    UnsupportedDatum,
)
from .rootdata import (
    Coweight,
    FundamentalGroup,
    RationalCoweight,
    RootDatum,
    dominant_rep,
    fundamental_group,
)


@dataclass(frozen=True, order=True)
class SlopeBlock:
    m: int
    h: int

    def __post_init__(self):
        if self.h <= 0 or gcd(self.m, self.h) != 1:
            raise InvalidBlock(f"slope block ({self.m},{self.h}) needs h > 0 and gcd(m, h) = 1")

    @property
    def slope(self) -> Fraction:
        return Fraction(self.m, self.h)

    def translation(self) -> Coweight:
        """mu of b = t^mu w for the rule e_j -> e_{j+m}, indexed by target coordinate."""
        mu = [0] * self.h
        for j in range(self.h):
            mu[(j + self.m) % self.h] = (j + self.m) // self.h
        return tuple(mu)


def as_blocks(blocks: Iterable) -> tuple[SlopeBlock, ...]:
    out = []
    for b in blocks:
        if isinstance(b, SlopeBlock):
            out.append(b)
        else:
            m, h = b
            out.append(SlopeBlock(int(m), int(h)))
    if not out:
        raise InvalidInput("at least one slope block is required")
    return tuple(out)


def sort_blocks(blocks: Iterable) -> tuple[SlopeBlock, ...]:
    """Blocks ordered by decreasing slope (stable), so that nu is dominant."""
    return tuple(sorted(as_blocks(blocks), key=lambda b: -b.slope))


def newton_point(blocks: Iterable) -> RationalCoweight:
    slopes = []
    for b in as_blocks(blocks):
        slopes.extend([b.slope] * b.h)
    return tuple(sorted(slopes, reverse=True))


@dataclass(frozen=True)
class NormalFormElement:
    """b = t^translation * w with b(e_j^i) = e_{j+m_i}^i on every block i.

    ``images[c] = (c', k)`` means b(e_c) = t^k e_{c'} for the standard basis
    vector e_c of L^n.
    """

    blocks: tuple[SlopeBlock, ...]
    translation: Coweight
    weyl_part: tuple[tuple[int, ...], ...]
    images: tuple[tuple[int, int], ...]
    offsets: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.images)

    def det_valuation(self) -> int:
        return sum(k for _, k in self.images)

    def matrix(self) -> list[list[Optional[int]]]:
        """Entry (row, col) is the t-exponent of the nonzero entry, else None."""
        mat: list[list[Optional[int]]] = [[None] * self.n for _ in range(self.n)]
        for c, (target, k) in enumerate(self.images):
            mat[target][c] = k
        return mat

    def block_of(self, coord: int) -> int:
        for i, off in enumerate(self.offsets):
            if off <= coord < off + self.blocks[i].h:
                return i
        raise IndexError(coord)

    def to_json(self) -> dict:
        return {
            "blocks": [[b.m, b.h] for b in self.blocks],
            "translation": list(self.translation),
            "matrix": self.matrix(),
        }


def normal_form(blocks: Iterable) -> NormalFormElement:
    """Normal form of the class with the given blocks, in the given block order."""
    bl = as_blocks(blocks)
    images, translation, weyl, offsets = [], [], [], []
    off = 0
    for b in bl:
        offsets.append(off)
        perm = []
        for j in range(b.h):
            target = (j + b.m) % b.h
            perm.append(target)
            images.append((off + target, (j + b.m) // b.h))
        translation.extend(b.translation())
        weyl.append(tuple(perm))
        off += b.h
    return NormalFormElement(bl, tuple(translation), tuple(weyl), tuple(images), tuple(offsets))


@dataclass(frozen=True)
class SigmaClass:
    """A sigma-conjugacy class [b] given by (Newton point, Kottwitz point).

    ``newton`` is in the datum's coweight coordinates and is dominant;
    ``kappa`` is an element of pi_1 in invariant-factor coordinates.
    """

    datum: RootDatum
    newton: RationalCoweight
    kappa: tuple[int, ...]
    gl_blocks: Optional[tuple[SlopeBlock, ...]] = None

    def __post_init__(self):
        self.datum.check_length(self.newton)
        if not self.datum.is_dominant(self.newton):
            raise InvalidInput(f"Newton point {fmt_vector(self.newton)} is not dominant")
        pi = self.pi1
        if len(self.kappa) != len(pi.invariant_factors):
            raise InvalidInput("kappa has the wrong number of pi_1 coordinates")
        # equal images in pi_1 (x) Q
        lam = pi.lift_element(self.kappa)
        free = pi.projection[len(pi.torsion):]
        for row in free:
            a = sum(r * x for r, x in zip(row, lam))
            b = sum(r * x for r, x in zip(row, self.newton))
            if a != b:
                raise InconsistentClass(
                    f"kappa {list(self.kappa)} and Newton point {fmt_vector(self.newton)} "
                    "differ in pi_1 (x) Q")

    @classmethod
    def from_blocks(cls, blocks: Iterable, datum: Optional[RootDatum] = None) -> "SigmaClass":
        bl = sort_blocks(blocks)
        n = sum(b.h for b in bl)
        if datum is None:
            datum = RootDatum.gl(n)
        if datum.cartan != (("A", n - 1),) or not datum.is_gl:
            raise UnsupportedDatum("slope blocks describe classes of GL_n only")
        return cls(datum, newton_point(bl), (sum(b.m for b in bl),), bl)

    @classmethod
    def from_invariants(cls, datum: RootDatum, newton: Sequence, kappa: Sequence[int]) -> "SigmaClass":
        return cls(datum, tuple(Fraction(x) for x in newton), tuple(int(k) for k in kappa))

    @classmethod
    def from_json(cls, doc, datum: Optional[RootDatum] = None) -> "SigmaClass":
        if isinstance(doc, str):
            doc = json.loads(doc)
        if "blocks" in doc:
            return cls.from_blocks(doc["blocks"], datum)
        if "newton" in doc:
            newton = tuple(Fraction(x) for x in doc["newton"])
            if datum is None:
                datum = RootDatum.gl(len(newton))
            return cls.from_invariants(datum, newton, doc["kappa"])
        raise InvalidInput("b-spec needs 'blocks' or 'newton' and 'kappa'")

    def to_json(self) -> dict:
        doc = {"newton": [fmt_fraction(x) for x in self.newton], "kappa": list(self.kappa)}
        if self.gl_blocks is not None:
            doc["blocks"] = [[b.m, b.h] for b in self.gl_blocks]
        return doc

    @cached_property
    def pi1(self) -> FundamentalGroup:
        return fundamental_group(self.datum)

    def is_basic(self) -> bool:
        return all(p == 0 for p in self.datum.simple_pairings(self.newton))


def fmt_fraction(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vector(v) -> str:
    return "(" + ",".join(fmt_fraction(x) for x in v) + ")"


def levi_Mb(cls: SigmaClass) -> frozenset[int]:
    """Simple roots (local indices) orthogonal to the Newton point."""
    return frozenset(i for i, p in enumerate(cls.datum.simple_pairings(cls.newton)) if p == 0)


def kappa_in_levi(cls: SigmaClass, levi: Iterable[int]) -> tuple[int, ...]:
    """kappa_M(b) in pi_1(M) for a standard Levi M containing M_b.

    The answer is the unique class whose image in pi_1(G) is kappa and whose
    image in pi_1(M) (x) Q agrees with that of the Newton point.
    """
    G = cls.datum
    lv = frozenset(levi)
    if not levi_Mb(cls) <= lv:
        raise InvalidLevi(f"Levi {sorted(lv)} does not contain M_b = {sorted(levi_Mb(cls))}")
    M = G.levi(lv)
    piG, piM = cls.pi1, fundamental_group(M)
    lam = list(piG.lift_element(cls.kappa))
    outside = [i for i in range(G.semisimple_rank) if i not in lv]
    free_rows = piM.projection[len(piM.torsion):]
    if outside:
        cols = [G.coroot_coords[i] for i in outside]
        a = [[sum(r * c for r, c in zip(row, col)) for col in cols] for row in free_rows]
        rhs = [-sum(r * (x - Fraction(v)) for r, x, v in zip(row, lam, cls.newton))
               for row in free_rows]
        sol = intmat.solve_rational(a, rhs)
        if sol is None or any(x.denominator != 1 for x in sol):
            raise InconsistentClass("no integral lift of kappa matches the Newton point in this Levi")
        for n_alpha, col in zip(sol, cols):
            lam = [x + int(n_alpha) * c for x, c in zip(lam, col)]
    return piM.project(lam)


def project_to_levi(datum: RootDatum, levi: Iterable[int], mu: Sequence[int]) -> tuple[int, ...]:
    """Image of an integral coweight in pi_1 of the standard Levi."""
    return fundamental_group(datum.levi(levi)).project(mu)


def msb_blocks(cls: SigmaClass) -> tuple[SlopeBlock, ...]:
    """Superbasic blocks of the Levi M_sb read off from the Newton point."""
    G = cls.datum
    if not G.is_gl:
        raise UnsupportedDatum("M_sb is only constructed for GL-product data")
    out = []
    for sl in G.gl_slices():
        part = cls.newton[sl]
        k = 0
        while k < len(part):
            s = part[k]
            run = 1
            while k + run < len(part) and part[k + run] == s:
                run += 1
            h = s.denominator
            if run % h:
                raise InconsistentClass(
                    f"slope {fmt_fraction(s)} occurs {run} times, not a multiple of {h}")
            out.extend([SlopeBlock(s.numerator, h)] * (run // h))
            k += run
    return tuple(out)


def levi_class(cls: SigmaClass, levi: Iterable[int]) -> SigmaClass:
    """The class of b viewed in the standard Levi M (which must contain M_b)."""
    lv = frozenset(levi)
    M = cls.datum.levi(lv)
    kap = kappa_in_levi(cls, lv)
    blocks = cls.gl_blocks
    return SigmaClass(M, cls.newton, kap, blocks)


def mu_min(cls: SigmaClass) -> Coweight:
    """Dominant representative of the translation part of the normal form."""
    if not cls.datum.is_gl:
        raise UnsupportedDatum("mu_min is only constructed for GL-product data")
    mu = []
    for b in msb_blocks(cls):
        mu.extend(b.translation())
    return dominant_rep(cls.datum, tuple(mu))

