"""Decision procedures for affine Deligne-Lusztig varieties X_mu(b).

Nonemptiness, Hodge-Newton (HN) indecomposability and reduction, the
connected components of the closed variety X_<=mu(b), zero-dimensionality and
the dimension of superbasic GL_h varieties.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InconsistentInput, InvalidInput
from .isocrystal import (
    SigmaClass,
    SlopeBlock,
    fmt_vector,
    kappa_in_levi,
    levi_class,
    levi_Mb,
    msb_blocks,
    project_to_levi,
)
from .rootdata import (
    FundamentalGroup,
    RootDatum,
    dominance_leq,
    fundamental_group,
)

PI1_TORSOR = "PI1_TORSOR"
DISCRETE = "DISCRETE"
REDUCED = "REDUCED"
PER_FACTOR = "PER_FACTOR"


def _check_mu(mu: Sequence[int], cls: SigmaClass) -> tuple[int, ...]:
    cls.datum.check_length(mu)
    mu = tuple(int(x) for x in mu)
    if not cls.datum.is_dominant(mu):
        raise InvalidInput(f"mu = {fmt_vector(mu)} is not dominant")
    return mu


def is_nonempty(mu: Sequence[int], cls: SigmaClass) -> bool:
    """kappa(mu) = kappa(b) in pi_1(G) and nu <= mu."""
    mu = _check_mu(mu, cls)
    if cls.pi1.project(mu) != cls.kappa:
        return False
    return dominance_leq(cls.datum, cls.newton, mu)


def _proper_levis_over(cls: SigmaClass, ambient: frozenset[int]):
    """Subsets S with M_b <= S < ambient, smallest first."""
    mb = levi_Mb(cls)
    if not mb <= ambient:
        return
    free = sorted(ambient - mb)
    for size in range(len(free)):
        for extra in itertools.combinations(free, size):
            yield mb | frozenset(extra)


def _hn_splits(mu, cls: SigmaClass, levi: frozenset[int]) -> bool:
    return kappa_in_levi(cls, levi) == project_to_levi(cls.datum, levi, mu)


def is_hn_indecomposable(mu: Sequence[int], cls: SigmaClass) -> bool:
    """No proper standard Levi M containing M_b has kappa_M(b) = mu."""
    mu = _check_mu(mu, cls)
    everything = frozenset(range(cls.datum.semisimple_rank))
    return not any(_hn_splits(mu, cls, s) for s in _proper_levis_over(cls, everything))


@dataclass(frozen=True)
class HNReduction:
    chain: tuple[frozenset[int], ...]
    core_levi: frozenset[int]
    core_class: SigmaClass
    mu: tuple[int, ...]

    @property
    def core_datum(self) -> RootDatum:
        return self.core_class.datum

    def global_labels(self, levi: frozenset[int]) -> list[int]:
        return sorted(levi)


def hn_reduce(mu: Sequence[int], cls: SigmaClass) -> HNReduction:
    """Pass to the smallest standard Levi M with kappa_M(b) = mu, repeatedly.

    Levi subsets are local simple root indices of ``cls.datum``.
    """
    mu = _check_mu(mu, cls)
    current = frozenset(range(cls.datum.semisimple_rank))
    chain = []
    while True:
        step = next((s for s in _proper_levis_over(cls, current) if _hn_splits(mu, cls, s)), None)
        if step is None:
            break
        chain.append(step)
        current = step
    core = levi_class(cls, current) if chain else cls
    return HNReduction(tuple(chain), current, core, mu)


@dataclass(frozen=True)
class Pi0:
    """Description of pi_0 of the closed variety X_<=mu(b)."""

    kind: str
    pi1: Optional[FundamentalGroup] = None
    levi: Optional[tuple[int, ...]] = None
    inner: Optional["Pi0"] = None
    factors: tuple = ()

    def to_json(self) -> dict:
        doc: dict = {"kind": self.kind}
        if self.pi1 is not None:
            doc["pi1"] = self.pi1.to_json()
        if self.kind == REDUCED:
            doc["levi"] = list(self.levi)
            doc["inner"] = self.inner.to_json()
        if self.kind == PER_FACTOR:
            doc["factors"] = [dict(f) for f in self.factors]
        return doc


def _factor_is_central(datum: RootDatum, factor, mu, newton) -> bool:
    pm = datum.simple_pairings(mu)
    pn = datum.simple_pairings(newton)
    return all(pm[i] == 0 and pn[i] == 0 for i in factor)


def _require_nonempty(mu, cls):
    if not is_nonempty(mu, cls):
        raise InvalidInput(f"X_mu(b) is empty for mu = {fmt_vector(mu)}")


def pi0_closed(mu: Sequence[int], cls: SigmaClass) -> Pi0:
    """pi_0(X_<=mu(b)) after HN reduction and passage to simple adjoint factors."""
    mu = _check_mu(mu, cls)
    _require_nonempty(mu, cls)
    red = hn_reduce(mu, cls)
    M = red.core_datum
    core = red.core_class
    factors = M.simple_factors()
    kinds = []
    for f in factors:
        central = _factor_is_central(M, f, mu, core.newton)
        kinds.append(DISCRETE if central else PI1_TORSOR)
    if all(k == DISCRETE for k in kinds):
        inner = Pi0(DISCRETE)
    elif all(k == PI1_TORSOR for k in kinds):
        inner = Pi0(PI1_TORSOR, fundamental_group(M))
    else:
        per = []
        for f, k in zip(factors, kinds):
            kind, rank = M.factor_type(f)
            adj = RootDatum.from_cartan([(kind, rank)], "adjoint")
            per.append((("type", f"{kind}{rank}"),
                        ("roots", [M.root_labels[i] for i in f]),
                        ("kind", k),
                        ("pi1", fundamental_group(adj).to_json())))
        inner = Pi0(PER_FACTOR, factors=tuple(per))
    if red.chain:
        return Pi0(REDUCED, levi=tuple(M.root_labels), inner=inner)
    return inner


def is_zero_dimensional(mu: Sequence[int], cls: SigmaClass) -> bool:
    """Zero-dimensionality test for an HN-indecomposable pair.

    Every simple adjoint factor must either be central ([b_i] = [t^mu_i]
    central) or be of type A_{h-1} with b_i basic and mu_i the fundamental
    coweight number 1 or h-1.
    """
    mu = _check_mu(mu, cls)
    if not is_hn_indecomposable(mu, cls):
        raise InvalidInput("zero-dimensionality is only decided for HN-indecomposable pairs")
    G = cls.datum
    pm = G.simple_pairings(mu)
    pn = G.simple_pairings(cls.newton)
    for f in G.simple_factors():
        if all(pm[i] == 0 and pn[i] == 0 for i in f):
            continue
        kind, rank = G.factor_type(f)
        if kind != "A" or any(pn[i] != 0 for i in f):
            return False
        # f is a path; order it along the Dynkin diagram
        weights = [pm[i] for i in _path_order(G, f)]
        unit = sum(weights) == 1 and all(w in (0, 1) for w in weights)
        if not (unit and (weights[0] == 1 or weights[-1] == 1)):
            return False
    return True


def _path_order(datum: RootDatum, factor) -> list[int]:
    a = datum.cartan_matrix()
    if len(factor) == 1:
        return list(factor)
    nbrs = {i: [j for j in factor if j != i and a[i][j]] for i in factor}
    start = min(i for i in factor if len(nbrs[i]) == 1)
    order, prev = [start], None
    while len(order) < len(factor):
        cur = order[-1]
        nxt = [j for j in nbrs[cur] if j != prev][0]
        prev = cur
        order.append(nxt)
    return order


def _gl_rho_pairing(x: Sequence) -> Fraction:
    h = len(x)
    return sum((Fraction(h + 1 - 2 * (i + 1), 2) * Fraction(v) for i, v in enumerate(x)), Fraction(0))


def dim_superbasic(mu: Sequence[int], block) -> int:
    """dim X_mu(b) = <rho, mu - nu> - (h - 1)/2 for b superbasic in GL_h."""
    if not isinstance(block, SlopeBlock):
        block = SlopeBlock(*block)
    h = block.h
    if len(mu) != h:
        raise InvalidInput(f"mu has length {len(mu)}, block has size {h}")
    cls = SigmaClass.from_blocks([block])
    mu = _check_mu(mu, cls)
    if sum(mu) != block.m or not dominance_leq(cls.datum, cls.newton, mu):
        raise InvalidInput("X_mu(b) is empty: need sum(mu) = m and nu <= mu")
    diff = [Fraction(x) - y for x, y in zip(mu, cls.newton)]
    d = _gl_rho_pairing(diff) - Fraction(h - 1, 2)
    if d.denominator != 1:
        raise InconsistentInput(f"non-integral dimension {d}")
    return int(d)


def minuscule_dimension(m: int, h: int) -> int:
    """(m' - 1)(h - m' - 1)/2 with m' = m mod h in (0, h); 0 for h = 1."""
    if h == 1:
        return 0
    mp = m % h
    return (mp - 1) * (h - mp - 1) // 2


def _superbasic_core_dimension(core: SigmaClass, mu) -> Optional[int]:
    """Sum of superbasic dimensions when b is superbasic in the GL-product core."""
    M = core.datum
    if not M.is_gl:
        return None
    blocks = list(msb_blocks(core))
    total = 0
    for sl, size in zip(M.gl_slices(), M.gl_sizes):
        if not blocks or blocks[0].h != size:
            return None
        block = blocks.pop(0)
        total += dim_superbasic(tuple(mu[sl]), block)
    return total


@dataclass
class ClassificationReport:
    nonempty: bool
    indecomposable: Optional[bool] = None
    hn_trace: list = field(default_factory=list)
    pi0: Optional[Pi0] = None
    zero_dimensional: Optional[bool] = None
    dimension: Optional[int] = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "nonempty": self.nonempty,
            "indecomposable": self.indecomposable,
            "hn_trace": [sorted(s) for s in self.hn_trace],
            "pi0": self.pi0.to_json() if self.pi0 else None,
            "zero_dimensional": self.zero_dimensional,
            "dimension": self.dimension,
            "notes": list(self.notes),
        }


def classify(mu: Sequence[int], cls: SigmaClass) -> ClassificationReport:
    mu = _check_mu(mu, cls)
    if not is_nonempty(mu, cls):
        why = ("kappa(mu) differs from kappa(b)" if cls.pi1.project(mu) != cls.kappa
               else "nu is not dominated by mu")
        return ClassificationReport(False, notes=[f"nonempty: Kottwitz-Rapoport criterion fails, {why}"])
    rep = ClassificationReport(True)
    rep.indecomposable = is_hn_indecomposable(mu, cls)
    red = hn_reduce(mu, cls)
    rep.hn_trace = [frozenset(s) for s in red.chain]
    rep.notes.append("nonempty: kappa(mu) = kappa(b) and nu <= mu")
    if red.chain:
        rep.notes.append(
            f"hn_trace: X_mu(b) is isomorphic to the variety for the Levi on simple roots "
            f"{sorted(red.core_levi)} (Hodge-Newton decomposition)")
    rep.pi0 = pi0_closed(mu, cls)
    inner = rep.pi0.inner if rep.pi0.kind == REDUCED else rep.pi0
    if inner.kind == PI1_TORSOR:
        rep.notes.append("pi0: kappa induces a bijection pi_0(X_<=mu(b)) -> pi_1 of the core group")
    elif inner.kind == DISCRETE:
        rep.notes.append("pi0: [b] = [t^mu] central on every factor, X_mu(b) = X_<=mu(b) "
                         "≅ G(F)/G(O_F) is discrete")
    else:
        rep.notes.append("pi0: mixed factors; per-factor description")
    rep.notes.append("pi0: fibres of kappa over pi_1(G) are isomorphic; "
                     "pi_0(X^{G_ad}) = pi_0(X^G)/Z(G)(F)")
    rep.zero_dimensional = is_zero_dimensional(mu, red.core_class)
    if rep.zero_dimensional:
        rep.dimension = 0
        rep.notes.append("dimension: zero-dimensional (central or basic minuscule factors)")
    else:
        d = _superbasic_core_dimension(red.core_class, mu)
        if d is not None:
            rep.dimension = d
            rep.notes.append("dimension: superbasic formula <rho, mu - nu> - (h - 1)/2")
    return rep
