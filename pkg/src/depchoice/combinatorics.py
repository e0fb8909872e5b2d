"""Widths of chain products and a bound on the width of a downset lattice."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .order import FinitePoset, width_height


@dataclass(frozen=True)
class IntPolynomial:
    """Exact integer polynomial, ``coefficients[k]`` is the degree-``k`` term."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        cs = list(self.coefficients)
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coefficients", tuple(int(c) for c in cs) or (0,))

    @classmethod
    def chain(cls, h: int) -> "IntPolynomial":
        """``1 + x + ... + x^(h-1)``, the rank generating function of an ``h``-chain."""
        if h < 1:
            raise ValueError("chain height must be at least 1")
        return cls((1,) * h)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coefficients, other.coefficients
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(tuple(out))

    def __pow__(self, k: int) -> "IntPolynomial":
        result = IntPolynomial((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def middle(self) -> int:
        return self.coefficients[self.degree // 2]

    def is_palindromic(self) -> bool:
        return self.coefficients == self.coefficients[::-1]


def chain_product_poly(heights: Iterable[int]) -> IntPolynomial:
    p = IntPolynomial((1,))
    for h in heights:
        p = p * IntPolynomial.chain(h)
    return p


def chain_product_width(heights: Iterable[int]) -> int:
    """Width of a product of chains: the middle rank number."""
    return chain_product_poly(heights).middle()


def central_coefficient(a: int, b: int) -> int:
    """Middle coefficient of ``(1 + x + ... + x^(a-1))^b``."""
    if a < 1 or b < 0:
        raise ValueError("need a >= 1 and b >= 0")
    return (IntPolynomial.chain(a) ** b).middle()


def width_bound(P: FinitePoset) -> int:
    """``central_coefficient(2, w) * central_coefficient(h, ceil(w / 2))`` for width ``w``, height ``h``."""
    w, h = width_height(P)
    if P.n == 0:
        return 1
    return central_coefficient(2, w) * central_coefficient(h, -(-w // 2))
