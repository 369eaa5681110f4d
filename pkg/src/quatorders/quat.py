"""Arithmetic in a rational quaternion algebra (a, b / Q).

Elements are 4-tuples of ``Fraction`` in the basis 1, i, j, k with
i^2 = a, j^2 = b and k = ij = -ji.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal

from .numth import hilbert_symbol, is_prime, legendre, factorize, INFINITY

FieldClass = Literal["split", "ramified", "inert"]
AlgebraClass = Literal["split", "ramified"]


@dataclass(frozen=True)
class QuatAlgebra:
    a: int
    b: int
    definite: bool = True

    def __post_init__(self) -> None:
        if self.a == 0 or self.b == 0:
            raise ValueError("a and b must be nonzero")
        if self.definite and not (self.a < 0 and self.b < 0):
            raise ValueError(
                f"({self.a}, {self.b}) is not definite; pass definite=False to skip this check"
            )

    def element(self, *coords) -> "QuatElement":
        return QuatElement.of(*coords)

    @property
    def one(self) -> "QuatElement":
        return QuatElement.of(1, 0, 0, 0)

    @property
    def i(self) -> "QuatElement":
        return QuatElement.of(0, 1, 0, 0)

    @property
    def j(self) -> "QuatElement":
        return QuatElement.of(0, 0, 1, 0)

    @property
    def k(self) -> "QuatElement":
        return QuatElement.of(0, 0, 0, 1)

    def multiply(self, x: "QuatElement", y: "QuatElement") -> "QuatElement":
        return multiply(self, x, y)

    def reduced_norm(self, x: "QuatElement") -> Fraction:
        return reduced_norm(self, x)

    def ramified_primes(self) -> frozenset[int]:
        return ramified_primes(self)

    @property
    def discriminant(self) -> int:
        d = 1
        for p in self.ramified_primes():
            d *= p
        return d

    def __str__(self) -> str:
        return f"({self.a}, {self.b} / QQ)"


@dataclass(frozen=True)
class QuatElement:
    coords: tuple[Fraction, Fraction, Fraction, Fraction]

    @classmethod
    def of(cls, *coords) -> "QuatElement":
        if len(coords) == 1:
            coords = tuple(coords[0])
        if len(coords) != 4:
            raise ValueError("a quaternion has exactly four coordinates")
        return cls(tuple(Fraction(c) for c in coords))

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, idx: int) -> Fraction:
        return self.coords[idx]

    def __add__(self, other: "QuatElement") -> "QuatElement":
        return QuatElement(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "QuatElement") -> "QuatElement":
        return QuatElement(tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "QuatElement":
        return QuatElement(tuple(-x for x in self.coords))

    def scale(self, c) -> "QuatElement":
        c = Fraction(c)
        return QuatElement(tuple(c * x for x in self.coords))

    def conjugate(self) -> "QuatElement":
        x0, x1, x2, x3 = self.coords
        return QuatElement((x0, -x1, -x2, -x3))

    def reduced_trace(self) -> Fraction:
        return 2 * self.coords[0]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        terms = []
        for c, name in zip(self.coords, ("", "i", "j", "k")):
            if c == 0:
                continue
            mag = abs(c)
            body = name if (mag == 1 and name) else f"{mag}{name}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def multiply(A: QuatAlgebra, x: QuatElement, y: QuatElement) -> QuatElement:
    a, b = A.a, A.b
    x0, x1, x2, x3 = x.coords
    y0, y1, y2, y3 = y.coords
    return QuatElement((
        x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
        x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
        x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
        x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
    ))


def conjugate(x: QuatElement) -> QuatElement:
    return x.conjugate()


def reduced_trace(x: QuatElement) -> Fraction:
    return x.reduced_trace()


def reduced_norm(A: QuatAlgebra, x: QuatElement) -> Fraction:
    x0, x1, x2, x3 = x.coords
    return x0 * x0 - A.a * x1 * x1 - A.b * x2 * x2 + A.a * A.b * x3 * x3


def candidate_primes(A: QuatAlgebra) -> list[int]:
    return sorted(set(factorize(abs(2 * A.a * A.b)).primes))


def ramified_primes(A: QuatAlgebra) -> frozenset[int]:
    """Finite primes where the Hilbert symbol of (a, b) is -1."""
    return frozenset(p for p in candidate_primes(A) if hilbert_symbol(A.a, A.b, p) == -1)


def is_ramified_at_infinity(A: QuatAlgebra) -> bool:
    return hilbert_symbol(A.a, A.b, INFINITY) == -1


@dataclass(frozen=True)
class PrimeBehavior:
    p: int
    field_class: FieldClass
    algebra_class: AlgebraClass

    def __post_init__(self) -> None:
        if self.field_class == "split" and self.algebra_class == "ramified":
            raise ValueError("a split quadratic subfield cannot sit inside a local division algebra")


def field_class(a: int, p: int) -> FieldClass:
    """Behaviour of p in Q(sqrt(a)) for squarefree-ish a (square factors are ignored)."""
    core = _squarefree_part(a)
    if p == 2:
        if core % 4 != 1:
            return "ramified"
        return "split" if core % 8 == 1 else "inert"
    if core % p == 0:
        return "ramified"
    return "split" if legendre(core, p) == 1 else "inert"


def _squarefree_part(n: int) -> int:
    sign = -1 if n < 0 else 1
    core = 1
    for p, e in factorize(abs(n)).factors:
        if e % 2:
            core *= p
    return sign * core


def classify_prime(A: QuatAlgebra, p: int) -> PrimeBehavior:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    alg: AlgebraClass = "ramified" if hilbert_symbol(A.a, A.b, p) == -1 else "split"
    return PrimeBehavior(p, field_class(A.a, p), alg)


def classify_all(A: QuatAlgebra, extra: Iterable[int] = ()) -> list[PrimeBehavior]:
    primes = set(candidate_primes(A))
    for n in extra:
        if n > 1:
            primes.update(factorize(n).primes)
    return [classify_prime(A, p) for p in sorted(primes)]
