"""Explicit orders of prescribed level in a definite quaternion algebra.

The pipeline, for a discriminant ``disc`` and an admissible level ``N``:

1. :func:`split_level` writes ``N = R1 R2 M1 M2``.
2. :func:`select_ab` picks a presentation ``B = (a, b / Q)`` in which an
   auxiliary prime ``q`` divides exactly one of ``a``, ``b``.  The
   conditions on ``q`` are compiled into one residue class per prime and
   solved with CRT.
3. :func:`compute_fgh` and :func:`auxiliary_values` produce the scalars of
   the construction.
4. :func:`pre_lowering_order` builds an order of level ``q N`` and
   :func:`lower_level` adjoins one element to drop the level at ``q``.
5. :func:`closed_form_basis` writes the same order down directly; the two
   routes must agree as lattices.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd, prod
from typing import Literal, Mapping, Optional

from .errors import (
    AdmissibilityError,
    InternalError,
    InvalidDiscriminant,
    InvalidOverride,
    NotConstructible,
)
from .lattice import QuatLattice, adjoin, hnf, order_failures, reduced_discriminant
from .numth import (
    CongruenceSystem,
    crt,
    ext_gcd,
    factorize,
    find_prime,
    hilbert_symbol,
    is_prime,
    least_nonresidue,
    legendre,
    sqrt_mod,
    valuation,
)
from .quat import QuatAlgebra, QuatElement, field_class

CaseTag = Literal["C1a", "C1b", "C2", "C3", "C4", "DELTA_P", "R1_ONLY"]
SPECIAL_CASES = ("DELTA_P", "R1_ONLY")


@dataclass(frozen=True)
class LevelSplit:
    N: int
    disc: int
    R1: Mapping[int, int]
    R2: Mapping[int, int]
    M1: Mapping[int, int]
    M2: Mapping[int, int]

    @property
    def v2(self) -> int:
        return valuation(self.N, 2)

    @property
    def disc_primes(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.R1) | set(self.R2)))

    @property
    def level_primes(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.R1) | set(self.R2) | set(self.M1) | set(self.M2)))

    @property
    def rm1_primes(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.R1) | set(self.R2) | set(self.M1)))

    def exponent(self, p: int) -> int:
        for part in (self.R1, self.R2, self.M1, self.M2):
            if p in part:
                return part[p]
        return 0


@dataclass(frozen=True)
class Selection:
    a: int
    b: int
    q: int
    case_tag: CaseTag
    q_divides: Literal["a", "b"]


@dataclass(frozen=True)
class OrderRecipe:
    a: int
    b: int
    q: int
    case_tag: CaseTag
    f: int
    g: int
    h: int
    epsilon: int
    x: int
    t: int
    u: int
    z: int
    zprime: int
    q_divides: Literal["a", "b"]

    @property
    def algebra(self) -> QuatAlgebra:
        return QuatAlgebra(self.a, self.b)

    def as_dict(self) -> dict:
        return {
            "a": self.a, "b": self.b, "q": self.q, "case": self.case_tag,
            "f": self.f, "g": self.g, "h": self.h, "epsilon": self.epsilon,
            "x": self.x, "t": self.t, "u": self.u, "z": self.z,
            "zprime": self.zprime, "q_divides": self.q_divides,
        }


@dataclass(frozen=True)
class OrderResult:
    split: LevelSplit
    recipe: OrderRecipe
    order: QuatLattice
    level: int
    predicted_local: dict[int, int] = field(default_factory=dict)

    @property
    def algebra(self) -> QuatAlgebra:
        return self.order.algebra


# --------------------------------------------------------------------------
# splitting the level


def _check_disc(disc: int) -> tuple[int, ...]:
    if disc < 2:
        raise InvalidDiscriminant(f"discriminant must be at least 2, got {disc}")
    fac = factorize(disc)
    if any(e > 1 for _, e in fac.factors):
        raise InvalidDiscriminant(f"discriminant {disc} is not squarefree")
    if len(fac.factors) % 2 == 0:
        raise InvalidDiscriminant(
            f"discriminant {disc} has an even number of prime factors; no definite algebra has it"
        )
    return fac.primes


def split_level(N: int, disc: int) -> LevelSplit:
    if N <= 1:
        raise AdmissibilityError(f"level must exceed 1, got {N}")
    disc_primes = set(_check_disc(disc))
    if N % disc:
        raise AdmissibilityError(f"discriminant {disc} does not divide level {N}")
    R1, R2, M1, M2 = {}, {}, {}, {}
    for p, e in factorize(N).factors:
        if p in disc_primes:
            (R1 if e % 2 else R2)[p] = e
        else:
            (M1 if e % 2 else M2)[p] = e
    return LevelSplit(N, disc, R1, R2, M1, M2)


# --------------------------------------------------------------------------
# choosing a and b


@dataclass(frozen=True)
class _Presentation:
    """a, b up to the auxiliary prime: the prime q multiplies ``a_fixed`` or ``b_fixed``."""

    case_tag: CaseTag
    q_divides: Literal["a", "b"]
    a_fixed: int
    b_fixed: int
    prefer_mod8: Optional[int] = None

    def ab(self, r: int) -> tuple[int, int]:
        if self.q_divides == "a":
            return self.a_fixed * r, self.b_fixed
        return self.a_fixed, self.b_fixed * r


def _odd_product(primes) -> int:
    return prod(p for p in primes if p != 2)


def _not_constructible(split: LevelSplit) -> NotConstructible:
    odd = _odd_product(split.rm1_primes)
    cert = {
        "disc": split.disc,
        "level": split.N,
        "two_divides_disc": True,
        "v2": split.v2,
        "odd_rm1_product": odd,
        "odd_rm1_product_mod4": odd % 4,
    }
    return NotConstructible(
        f"cannot reach v2(N)=2 with 2 | disc: the odd part of the product of primes "
        f"dividing R*M1 is {odd} = 3 mod 4",
        cert,
    )


def not_constructible_certificate(split: LevelSplit) -> Optional[dict]:
    """The obstruction data when (disc, N) has no order of this shape, else None."""
    if split.disc % 2 == 0 and split.v2 == 2 and _odd_product(split.rm1_primes) % 4 == 3:
        return _not_constructible(split).certificate
    return None


def _general_presentation(split: LevelSplit) -> _Presentation:
    rm1 = split.rm1_primes
    r2 = tuple(sorted(split.R2))
    v2 = split.v2
    if split.disc % 2:
        if v2 % 2 == 0:
            P = prod(rm1)
            if P % 4 == 3:
                return _Presentation("C1a", "b", -P, -1, prefer_mod8=1)
            return _Presentation("C1b", "a", -prod(r2), -P)
        return _Presentation("C2", "a", -prod(r2), -prod(rm1))
    if v2 != 2:
        return _Presentation("C3", "a", -prod(r2), -prod(rm1))
    if _odd_product(rm1) % 4 == 3:
        raise _not_constructible(split)
    return _Presentation("C4", "a", -_odd_product(r2), -_odd_product(rm1))


def _special_presentation(split: LevelSplit, case: str) -> _Presentation:
    if case == "DELTA_P":
        (p,) = split.disc_primes if len(split.disc_primes) == 1 else (None,)
        if p is None or p == 2 or split.N != p ** split.exponent(p):
            raise InvalidOverride("DELTA_P needs an odd prime discriminant p and level p^r")
        if p % 4 == 3:
            return _Presentation("DELTA_P", "b", -p, -1, prefer_mod8=1)
        if split.exponent(p) % 2 == 0:
            return _Presentation("DELTA_P", "a", -p, -p)
        return _Presentation("DELTA_P", "a", -1, -p)
    if case == "R1_ONLY":
        if split.R2:
            raise InvalidOverride("R1_ONLY needs every prime of the discriminant to have odd exponent")
        return _Presentation("R1_ONLY", "a", -1, -prod(split.rm1_primes))
    raise InvalidOverride(f"unknown case override {case!r}")


def epsilon_for(split: LevelSplit) -> int:
    """Power of 2 standing in for the prime 2 when 2 divides the discriminant."""
    v2 = split.v2
    if split.disc % 2 or v2 < 3:
        return 1
    if v2 % 2:
        return 2 ** ((v2 - 3) // 2)
    return 2 ** (v2 // 2 - 2)


def compute_fgh(
    split: LevelSplit,
    a: int,
    b: int,
    placement: Optional[Mapping[int, str]] = None,
) -> tuple[int, int, int, int]:
    """Return ``(f, g, h, epsilon)``.

    Primes of M2 go to f when they split in Q(sqrt(a)) and to g when they
    are inert; ``placement`` can force a prime into ``"f"`` or ``"g"``.
    """
    eps = epsilon_for(split)
    f = eps
    for p, e in split.R1.items():
        if p != 2:
            f *= p ** ((e - 1) // 2)
    for p, e in split.R2.items():
        if p != 2:
            f *= p ** (e // 2 - 1)
    g = prod(p ** ((e - 1) // 2) for p, e in split.M1.items())
    placement = placement or {}
    for p, e in split.M2.items():
        where = placement.get(p)
        if where is None:
            where = "f" if field_class(a, p) == "split" else "g"
        if where == "f":
            f *= p ** (e // 2)
        else:
            g *= p ** (e // 2)
    h = 1
    for p in split.R2:
        if p == 2 and split.v2 == 2:
            continue
        h *= p ** (1 - min(valuation(b, p), 1))
    return f, g, h, eps


def _two_adic_level(a: int, b: int, f: int, g: int, h: int) -> int:
    extra = 0 if a % 4 == 1 else 2
    return valuation(a * b, 2) + 2 * valuation(f * g, 2) + valuation(h, 2) + extra


@dataclass(frozen=True)
class QConditions:
    """What the auxiliary prime must satisfy.

    ``mod8`` lists the admissible classes of q mod 8; ``legendre_targets``
    maps an odd prime p to the required value of (q/p).
    """

    mod8: tuple[int, ...]
    legendre_targets: Mapping[int, int]
    forbidden: frozenset[int]
    prefer_mod8: Optional[int] = None

    def admits(self, q: int) -> bool:
        if q in self.forbidden or q == 2 or not is_prime(q):
            return False
        if q % 8 not in self.mod8:
            return False
        return all(legendre(q, p) == t for p, t in self.legendre_targets.items())

    def default_system(self) -> CongruenceSystem:
        r8 = self.prefer_mod8 if self.prefer_mod8 in self.mod8 else min(self.mod8)
        pairs = [(r8, 8)]
        for p, t in sorted(self.legendre_targets.items()):
            pairs.append((1 if t == 1 else least_nonresidue(p), p))
        return CongruenceSystem(tuple(pairs))


def _conditions(split: LevelSplit, pres: _Presentation) -> QConditions:
    def target(p: int) -> int:
        return -1 if split.disc % p == 0 else 1

    targets = {}
    for p in split.level_primes:
        if p == 2:
            continue
        n = least_nonresidue(p)
        ok_sq = hilbert_symbol(*pres.ab(1), p) == target(p)
        ok_nsq = hilbert_symbol(*pres.ab(n), p) == target(p)
        if ok_sq and ok_nsq:
            continue
        if not (ok_sq or ok_nsq):
            raise InternalError(f"{pres.case_tag}: no class of q gives the right symbol at {p}")
        targets[p] = 1 if ok_sq else -1

    mod8 = []
    for r in (1, 3, 5, 7):
        a, b = pres.ab(r)
        if hilbert_symbol(a, b, 2) != target(2):
            continue
        f, g, h, _ = compute_fgh(split, a, b)
        if _two_adic_level(a, b, f, g, h) == split.v2:
            mod8.append(r)
    if not mod8:
        if pres.case_tag in SPECIAL_CASES:
            raise InvalidOverride(f"{pres.case_tag} cannot produce the required behaviour at 2")
        raise InternalError(f"{pres.case_tag}: no class of q mod 8 works")
    forbidden = frozenset(factorize(2 * split.N * split.disc).primes)
    return QConditions(tuple(mod8), targets, forbidden, pres.prefer_mod8)


def _presentation(split: LevelSplit, case_override: Optional[str]) -> _Presentation:
    if case_override is None:
        return _general_presentation(split)
    return _special_presentation(split, case_override)


def q_conditions(split: LevelSplit, case_override: Optional[str] = None) -> QConditions:
    return _conditions(split, _presentation(split, case_override))


def select_ab(
    split: LevelSplit,
    q_override: Optional[int] = None,
    case_override: Optional[str] = None,
) -> Selection:
    pres = _presentation(split, case_override)
    cond = _conditions(split, pres)
    if q_override is None:
        q = find_prime(cond.default_system(), cond.forbidden)
    else:
        if not cond.admits(q_override):
            raise InvalidOverride(f"q = {q_override} violates the conditions for {pres.case_tag}")
        q = q_override
    a, b = pres.ab(q)
    algebra = QuatAlgebra(a, b)
    if algebra.ramified_primes() != frozenset(split.disc_primes):
        raise InternalError(
            f"({a}, {b}) ramifies at {sorted(algebra.ramified_primes())}, expected {split.disc_primes}"
        )
    return Selection(a, b, q, pres.case_tag, pres.q_divides)


def candidate_qs(split: LevelSplit, count: int, case_override: Optional[str] = None) -> list[int]:
    """The ``count`` smallest primes admissible as the auxiliary prime."""
    cond = q_conditions(split, case_override)
    out, n = [], 3
    while len(out) < count:
        if cond.admits(n):
            out.append(n)
        n += 2
    return out


# --------------------------------------------------------------------------
# scalars and bases


def auxiliary_values(
    a: int, b: int, q: int, h: int, q_divides: str, x: Optional[int] = None
) -> tuple[int, int, int, int, int]:
    """Return ``(x, t, u, z, zprime)``.

    ``x`` is the least square root of a (q | b) or b (q | a) mod q unless
    one is supplied; t, u, z are the Bezout data
    ``1 = s q + t h x``, ``1 = v q + w 2x`` with ``u = v q + 2 w mod 2q``,
    and ``1 = -y q + z 2x``; ``zprime = 4 z mod 2q``.
    """
    residue = a if q_divides == "b" else b
    if residue % q == 0:
        raise ValueError(f"q = {q} divides the residue {residue}; x would be 0")
    if x is None:
        x = sqrt_mod(residue, q)
    elif (x * x - residue) % q:
        raise ValueError(f"{x}^2 is not {residue} mod {q}")
    _, _, t = ext_gcd(q, h * x)
    _, v, w = ext_gcd(q, 2 * x)
    u = (v * q + 2 * w) % (2 * q)
    _, _, z = ext_gcd(-q, 2 * x)
    return x, t % q, u, z % q, (4 * z) % (2 * q)


def _lift(residue: int, modulus: int, multiple_of: int) -> int:
    """Least nonnegative n with n = residue (mod modulus) and multiple_of | n."""
    r, _ = crt(CongruenceSystem.of((residue, modulus), (0, multiple_of)))
    return r


def build_recipe(
    split: LevelSplit,
    selection: Selection,
    x: Optional[int] = None,
    placement: Optional[Mapping[int, str]] = None,
) -> OrderRecipe:
    f, g, h, eps = compute_fgh(split, selection.a, selection.b, placement)
    xx, t, u, z, zp = auxiliary_values(
        selection.a, selection.b, selection.q, h, selection.q_divides, x
    )
    return OrderRecipe(
        selection.a, selection.b, selection.q, selection.case_tag,
        f, g, h, eps, xx, t, u, z, zp, selection.q_divides,
    )


def _basis_one_mod_four(a: int) -> bool:
    if a % 2 == 0:
        return False
    return a % 4 == 1


def pre_lowering_order(A: QuatAlgebra, f: int, g: int, h: int) -> QuatLattice:
    F = Fraction
    if _basis_one_mod_four(A.a):
        gens = [(1, 0, 0, 0), (F(g, 2), F(g, 2), 0, 0), (0, 0, f * h, 0), (0, 0, F(f * g * h, 2), F(f * g, 2))]
    else:
        gens = [(1, 0, 0, 0), (0, g, 0, 0), (0, 0, f * h, 0), (0, 0, 0, f * g)]
    return hnf(A, gens)


def lowering_element(recipe: OrderRecipe) -> QuatElement:
    """fgh (x + i) j / q when q | b, and fg (x - j) i / q when q | a."""
    r = recipe
    if r.q_divides == "b":
        c = Fraction(r.f * r.g * r.h, r.q)
        return QuatElement.of(0, 0, c * r.x, c)
    c = Fraction(r.f * r.g, r.q)
    return QuatElement.of(0, c * r.x, 0, c)


def lower_level(L: QuatLattice, recipe: OrderRecipe) -> QuatLattice:
    lowered = adjoin(L, lowering_element(recipe))
    failures = order_failures(lowered)
    if failures:
        raise InternalError(f"lowered lattice is not an order: {failures[0]}")
    before = reduced_discriminant(L, check=False)
    after = reduced_discriminant(lowered, check=False)
    if after * recipe.q != before:
        raise InternalError(f"adjunction took the discriminant from {before} to {after}, not down by q")
    return lowered


def closed_form_basis(recipe: OrderRecipe) -> QuatLattice:
    """The lowered order written down directly from the recipe scalars.

    Coefficients that the four-case formulas take mod q are lifted by CRT
    so that they are also divisible by f (or g), which keeps the lattice
    equal to the adjunction result for every f, g, h.
    """
    F = Fraction
    r = recipe
    q, f, g, h = r.q, r.f, r.g, r.h
    if r.q_divides == "b":
        if _basis_one_mod_four(r.a):
            d = gcd(2, g)
            m = 2 * q // d
            n = _lift(h * r.u, m, g // d)
            gens = [(1, 0, 0, 0), (F(g, 2), F(g, 2), 0, 0), (0, 0, F(f * h, m), F(f * n, m)), (0, 0, 0, f * (g // d))]
        else:
            n = _lift(2 * h * r.z, q, g)
            gens = [(1, 0, 0, 0), (0, g, 0, 0), (0, 0, F(f * h, q), F(f * n, q)), (0, 0, 0, f * g)]
    else:
        if _basis_one_mod_four(r.a):
            if g % 2:
                z_f = _lift(r.z, q, f)
                zp_f = 2 * _lift(r.zprime // 2, q, f)
                gens = [
                    (F(1, 2), F(g, 2 * q), 0, F(g * z_f, q)),
                    (0, F(g, q), 0, F(g * zp_f, 2 * q)),
                    (0, 0, F(f * h, 2), F(f * g, 2)),
                    (0, 0, 0, f * g),
                ]
            else:
                n = _lift(2 * r.z, q, f)
                gens = [(1, 0, 0, 0), (0, F(g, 2 * q), 0, F(g * n, 2 * q)), (0, 0, f * h, 0), (0, 0, 0, F(f * g, 2))]
        else:
            c = _lift(h * r.t, q, f)
            gens = [(1, 0, 0, 0), (0, F(g, q), 0, F(g * c, q)), (0, 0, f * h, 0), (0, 0, 0, f * g)]
    return hnf(r.algebra, gens)


def uncorrected_basis(recipe: OrderRecipe) -> QuatLattice:
    """The four-case basis with the recipe scalars used as they are, no lifting.

    It agrees with :func:`closed_form_basis` when f = g = h = 1 and is an
    order of level N in some other configurations, but need not be an
    order in general.
    """
    F = Fraction
    r = recipe
    q, f, g, h = r.q, r.f, r.g, r.h
    if r.q_divides == "a" and _basis_one_mod_four(r.a):
        gens = [
            (F(1, 2), F(g, 2 * q), 0, F(2 * g * r.z, 2 * q)),
            (0, F(2 * g, 2 * q), 0, F(g * r.zprime, 2 * q)),
            (0, 0, F(f * h, 2), F(f * g, 2)),
            (0, 0, 0, f * g),
        ]
    elif r.q_divides == "a":
        gens = [(1, 0, 0, 0), (0, F(g * h, q), 0, F(g * h * r.t, q)), (0, 0, f * g, 0), (0, 0, 0, f)]
    elif _basis_one_mod_four(r.a):
        gens = [(1, 0, 0, 0), (F(g, 2), F(g, 2), 0, 0), (0, 0, F(f * g * h, 2 * q), F(f * g * h * r.u, 2 * q)), (0, 0, 0, f)]
    else:
        gens = [(1, 0, 0, 0), (0, g, 0, 0), (0, 0, F(f * g * h, q), F(f * g * h * r.x, q)), (0, 0, 0, f)]
    return hnf(r.algebra, gens)


def predict_local_levels(recipe: OrderRecipe, split: LevelSplit) -> dict[int, int]:
    """Exponent of each prime in the level, read off from the recipe scalars.

    Before lowering the exponent at p is
    ``v_p(ab) + 2 v_p(f) + 2 v_p(g) + v_p(h)``, plus 2 at p = 2 when a is
    not 1 mod 4; lowering removes one factor of q.
    """
    r = recipe
    primes = set(factorize(abs(2 * r.a * r.b * r.f * r.g * r.h * r.q * split.N)).primes)
    out = {}
    for p in sorted(primes):
        e = valuation(r.a * r.b, p) + 2 * valuation(r.f * r.g, p) + valuation(r.h, p)
        if p == 2 and not _basis_one_mod_four(r.a):
            e += 2
        if p == r.q:
            e -= 1
        out[p] = e
    return out


def construct_order(
    disc: int,
    N: int,
    q_override: Optional[int] = None,
    case_override: Optional[str] = None,
    x_override: Optional[int] = None,
    placement: Optional[Mapping[int, str]] = None,
) -> OrderResult:
    split = split_level(N, disc)
    selection = select_ab(split, q_override, case_override)
    recipe = build_recipe(split, selection, x_override, placement)
    A = recipe.algebra
    lowered = lower_level(pre_lowering_order(A, recipe.f, recipe.g, recipe.h), recipe)
    direct = closed_form_basis(recipe)
    if direct != lowered:
        raise InternalError(f"closed form and adjunction disagree for disc={disc}, N={N}")
    level = reduced_discriminant(lowered, check=False)
    if level != N:
        raise InternalError(f"constructed order has level {level}, wanted {N}")
    predicted = predict_local_levels(recipe, split)
    actual = factorize(level).as_dict()
    for p, e in predicted.items():
        if actual.get(p, 0) != e:
            raise InternalError(f"predicted exponent {e} at {p}, found {actual.get(p, 0)}")
    return OrderResult(split, recipe, lowered, level, predicted)


def flip_root(recipe: OrderRecipe) -> OrderRecipe:
    """The recipe rebuilt from the other square root q - x."""
    x, t, u, z, zp = auxiliary_values(
        recipe.a, recipe.b, recipe.q, recipe.h, recipe.q_divides, recipe.q - recipe.x
    )
    return replace(recipe, x=x, t=t, u=u, z=z, zprime=zp)
