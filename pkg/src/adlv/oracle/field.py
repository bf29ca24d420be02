"""Finite fields F_{q^s} as F_p[z]/(f) with table arithmetic.

Elements are integers ``0 <= x < p^N`` (N = r*s for q = p^r) read as base-p
digit vectors of polynomials in z.  ``f`` is the lexicographically least
monic irreducible polynomial of degree N over F_p, compared by the integer
encoding of its lower coefficients.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from ..errors import InvalidParameter

MAX_ORDER = 1024


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise InvalidParameter(f"q = {q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            r, x = 0, q
            while x % p == 0:
                x //= p
                r += 1
            if x != 1:
                raise InvalidParameter(f"q = {q} is not a prime power")
            return p, r
    raise AssertionError


def _digits(x: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        out.append(x % p)
        x //= p
    return out


def _poly_mulmod(a, b, f, p):
    """Product of digit lists a, b modulo the monic polynomial with lower coefficients f."""
    n = len(f)
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(2 * n - 2, n - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for k in range(n):
                prod[d - n + k] = (prod[d - n + k] - c * f[k]) % p
    return prod[:n]


def _is_irreducible(f, p) -> bool:
    """f = lower coefficients of a monic polynomial of degree len(f)."""
    n = len(f)
    if n == 1:
        return True
    # a reducible polynomial has a monic factor of degree <= n/2
    full = list(f) + [1]
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            g = list(low) + [1]
            rem = full[:]
            for k in range(len(rem) - 1, d - 1, -1):
                c = rem[k]
                if c:
                    for i in range(d + 1):
                        rem[k - d + i] = (rem[k - d + i] - c * g[i]) % p
            if not any(rem[:d]):
                return False
    return True


def least_irreducible(p: int, n: int) -> tuple[int, ...]:
    for code in range(p ** n):
        f = _digits(code, p, n)
        if n > 1 and f[0] == 0:
            continue
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


class FiniteField:
    """F_{q^s} with add/sub/mul/inv/Frobenius tables (numpy int arrays)."""

    def __init__(self, q: int, s: int = 1):
        if s < 1:
            raise InvalidParameter("the extension degree s must be positive")
        p, r = _prime_power(q)
        self.q, self.s, self.p, self.r = q, s, p, r
        self.degree = r * s
        self.order = p ** self.degree
        if self.order > MAX_ORDER:
            raise InvalidParameter(f"field of order {self.order} exceeds the supported {MAX_ORDER}")
        self.modulus = least_irreducible(p, self.degree)
        Q, N = self.order, self.degree
        digits = np.array([_digits(x, p, N) for x in range(Q)], dtype=np.int64)
        weights = p ** np.arange(N, dtype=np.int64)
        self.add_table = (((digits[:, None, :] + digits[None, :, :]) % p) @ weights).astype(np.intp)
        self.neg = ((-digits % p) @ weights).astype(np.intp)
        self.sub_table = self.add_table[:, self.neg]
        mul = np.zeros((Q, Q), dtype=np.intp)
        dl = [list(map(int, row)) for row in digits]
        for a in range(1, Q):
            for b in range(a, Q):
                c = sum(d * p ** k for k, d in enumerate(_poly_mulmod(dl[a], dl[b], self.modulus, p)))
                mul[a, b] = mul[b, a] = c
        self.mul_table = mul
        inv = np.zeros(Q, dtype=np.intp)
        for a in range(1, Q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv = inv
        frob = np.arange(Q, dtype=np.intp)
        powq = np.ones(Q, dtype=np.intp)
        for _ in range(q):
            powq = mul[powq, frob]
        self.frob = powq
        self.frob[0] = 0
        self.elements = tuple(range(Q))
        self.base_elements = tuple(int(x) for x in range(Q) if self.frob[x] == x)

    def __repr__(self) -> str:
        return f"FiniteField(q={self.q}, s={self.s})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.q, self.s) == (other.q, other.s)

    def __hash__(self) -> int:
        return hash((self.q, self.s))

    # scalar helpers
    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.sub_table[a, b]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def frobenius(self, a, power: int = 1):
        for _ in range(power % self.s if self.s else 0):
            a = self.frob[a]
        return a

    def is_base(self, a: int) -> bool:
        return int(self.frob[a]) == int(a)

    def to_json(self) -> dict:
        return {"q": self.q, "s": self.s, "p": self.p, "modulus": list(self.modulus) + [1]}


@lru_cache(maxsize=None)
def get_field(q: int, s: int = 1) -> FiniteField:
    return FiniteField(q, s)
