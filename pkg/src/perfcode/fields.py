"""Small finite fields GF(q) as lookup tables.

Elements are integers ``0..q-1`` read as base-``p`` coefficient vectors of a
polynomial in the field generator, lowest degree first.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np
from sympy import factorint

from .errors import InvalidParams


def prime_power(q: int) -> tuple[int, int]:
    """``q = p**f``; raises ``InvalidParams`` otherwise."""
    if q < 2:
        raise InvalidParams(f"{q} is not a prime power")
    fac = factorint(q)
    if len(fac) != 1:
        raise InvalidParams(f"{q} is not a prime power")
    (p, f), = fac.items()
    return p, f


def _poly_mulmod(a, b, modulus, p):
    f = len(modulus) - 1
    prod = [0] * (2 * f - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # reduce by the monic modulus
    for k in range(len(prod) - 1, f - 1, -1):
        c = prod[k]
        if c:
            for j in range(f + 1):
                prod[k - f + j] = (prod[k - f + j] - c * modulus[j]) % p
    return prod[:f]


class FiniteField:
    def __init__(self, q: int):
        p, f = prime_power(q)
        self.q, self.p, self.f = q, p, f
        digits = [[(x // p**i) % p for i in range(f)] for x in range(q)]
        self.add = np.array([[sum(((da + db) % p) * p**i for i, (da, db) in enumerate(zip(digits[a], digits[b])))
                              for b in range(q)] for a in range(q)], dtype=np.int64)
        self.modulus = self._find_modulus() if f > 1 else None
        if f == 1:
            self.mul = np.outer(np.arange(q), np.arange(q)) % q
        else:
            self.mul = np.array([[self._encode(_poly_mulmod(digits[a], digits[b], self.modulus, p))
                                  for b in range(q)] for a in range(q)], dtype=np.int64)
        self.neg = np.argmax(self.add == 0, axis=1)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = np.argmax(self.mul[1:] == 1, axis=1)
        self.inv = inv
        self.primitive = self._find_primitive()

    def _encode(self, coeffs):
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def _find_modulus(self):
        p, f = self.p, self.f
        for tail in product(range(p), repeat=f):
            modulus = list(tail) + [1]
            if modulus[0] == 0:
                continue
            # a field iff there are no zero divisors
            ok = True
            elems = [[(x // p**i) % p for i in range(f)] for x in range(1, self.q)]
            for a in elems:
                for b in elems:
                    if not any(_poly_mulmod(a, b, modulus, p)):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return modulus
        raise InvalidParams(f"no irreducible polynomial found for GF({self.q})")

    def _find_primitive(self):
        q = self.q
        for g in range(2 if q > 2 else 1, q):
            x, k = g, 1
            while x != 1:
                x = self.mul[x, g]
                k += 1
            if k == q - 1:
                return g
        return 1

    def element_power(self, a: int, k: int) -> int:
        r = 1
        for _ in range(k):
            r = int(self.mul[r, a])
        return r


@lru_cache(maxsize=None)
def gf(q: int) -> FiniteField:
    return FiniteField(q)
