"""The eight acceptance criteria, each recorded as one pass/fail line."""

import random
from fractions import Fraction as F
from math import prod

import pytest

from quatorders.cli import main
from quatorders.construct import (
    closed_form_basis,
    construct_order,
    flip_root,
    lower_level,
    pre_lowering_order,
    uncorrected_basis,
)
from quatorders.errors import NotConstructible
from quatorders.lattice import hnf, reduced_discriminant, standard_lattice
from quatorders.numth import INFINITY, factorize, hilbert_symbol, legendre
from quatorders.quat import QuatAlgebra
from quatorders.verify import admissible_pairs, sweep, verify_order

MAX_DISC, MAX_LEVEL = 30, 500


@pytest.fixture(scope="module")
def desk_sweep():
    return sweep(MAX_DISC, MAX_LEVEL, workers=4)


@pytest.fixture(scope="module")
def desk_results():
    out = []
    for disc, N in admissible_pairs(MAX_DISC, MAX_LEVEL):
        try:
            out.append(construct_order(disc, N))
        except NotConstructible:
            pass
    return out


def test_criterion_1_desk_sweep(desk_sweep, record_criterion):
    r = desk_sweep
    ok = (
        not r.failures
        and r.passed == r.attempted - r.skipped_not_constructible
        and all(s.certificate for s in r.skipped)
    )
    record_criterion(1, "sweep", ok, f"{r.passed}/{r.attempted} passed, {r.skipped_not_constructible} certified skips")
    assert ok, r.failures[:5]


def test_criterion_2_disc_70_large_level(record_criterion):
    disc, N = 70, 4889996650
    r = construct_order(disc, N)
    rc = r.recipe
    report = verify_order(r.order, disc, N)
    alt = construct_order(disc, N, placement={23: "f"})
    display = hnf(rc.algebra, [
        (F(1, 2), F(1, 2974), 0, F(2 * 578, 2974)),
        (0, F(1, 1487), 0, F(1156, 1487)),
        (0, 0, F(1127, 2), F(1127, 2)),
        (0, 0, 0, 1127),
    ])
    ok = (
        (rc.q, rc.a, rc.b, rc.x) == (1487, -7435, -770, 593)
        and report.passed and report.reduced_discriminant == N
        and (rc.z, rc.zprime) == (578, 2312)
        and uncorrected_basis(alt.recipe) == display
        and verify_order(display, disc, N).passed
    )
    record_criterion(2, "disc 70, N=4889996650", ok, "q=1487, x=593, z=578, z'=2312, level N")
    assert ok


def test_criterion_3_disc_7_level_49(record_criterion):
    r = construct_order(7, 49, q_override=11)
    expected = hnf(QuatAlgebra(-7, -11), [
        (1, 0, 0, 0), (F(1, 2), F(1, 2), 0, 0), (0, 0, F(7, 22), F(-35, 22)), (0, 0, 0, 1),
    ])
    ok = (r.recipe.a, r.recipe.b) == (-7, -11) and r.order == expected and reduced_discriminant(r.order) == 49
    record_criterion(3, "disc 7, N=49, q=11", ok, "HNF equality with the fixture basis")
    assert ok


def test_criterion_4_disc_3_level_27(record_criterion):
    fixture = hnf(QuatAlgebra(-7, -3), [
        (F(1, 2), F(1, 2), 0, 0), (0, 1, 0, 0), (0, 0, F(3, 146), F(309, 146)), (0, 0, 0, 3),
    ])
    fixture_report = verify_order(fixture, 3, 27)
    ours = construct_order(3, 27)
    ours_ok = verify_order(ours.order, 3, 27).passed and ours.level == 27
    note = "fixture basis passes" if fixture_report.passed else (
        "fixture basis is not an order in (-7,-3); it is an order of level 27 in (-3,-73)"
    )
    if not fixture_report.passed:
        same = hnf(QuatAlgebra(-3, -73), [list(e.coords) for e in fixture.basis])
        assert verify_order(same, 3, 27).passed
    record_criterion(4, "construct_order(3, 27)", ours_ok, note)
    assert ours_ok


def test_criterion_5_known_orders(record_criterion):
    H = QuatAlgebra(-1, -1)
    hurwitz = hnf(H, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (F(1, 2), F(1, 2), F(1, 2), F(1, 2))])
    ok = (
        reduced_discriminant(hurwitz) == 2
        and reduced_discriminant(standard_lattice(H)) == 4
        and H.ramified_primes() == frozenset({2})
    )
    record_criterion(5, "known orders", ok)
    assert ok


def _isotropic_mod_p3(a: int, b: int, p: int) -> bool:
    """Search for a primitive zero of z^2 - a x^2 - b y^2 mod p^3.

    For v_p(a), v_p(b) <= 1 any primitive zero mod p^2 lifts, so the
    search decides isotropy over Q_p.  Up to scaling, either x = 1, or
    p | x and y = 1.
    """
    m = p**3
    squares = {z * z % m for z in range(m)}
    for y in range(m):
        if (a + b * y * y) % m in squares:
            return True
    for x in range(0, m, p):
        if (a * x * x + b) % m in squares:
            return True
    return False


def _squarefree(rng, lo, hi):
    while True:
        n = rng.randint(lo, hi)
        if n and all(e == 1 for _, e in factorize(abs(n)).factors):
            return n


def test_criterion_6_hilbert_suite(record_criterion):
    table = all(hilbert_symbol(a, 2, 2) == (1 if a % 8 in (1, 7) else -1) for a in range(-401, 402, 2))
    odd_primes = [3, 5, 7, 11, 13, 17, 19, 23]
    table = table and all(
        hilbert_symbol(p, q, 2) == (-1) ** ((p - 1) // 2 * (q - 1) // 2)
        for p in odd_primes for q in odd_primes
    )
    rng = random.Random(20240601)
    product_ok = True
    for _ in range(1000):
        a = rng.choice([-1, 1]) * rng.randint(1, 10**6)
        b = rng.choice([-1, 1]) * rng.randint(1, 10**6)
        places = [INFINITY] + list(factorize(abs(2 * a * b)).primes)
        product_ok &= prod(hilbert_symbol(a, b, v) for v in places) == 1
    iso_ok = True
    for _ in range(200):
        p = rng.choice([3, 5, 7, 11, 13])
        a, b = _squarefree(rng, -300, 300), _squarefree(rng, -300, 300)
        iso_ok &= (hilbert_symbol(a, b, p) == 1) == _isotropic_mod_p3(a, b, p)
    # the odd-prime ramification rule for squarefree a, b with v_p(a) <= v_p(b)
    odd_rule_ok = True
    for _ in range(500):
        p = rng.choice([3, 5, 7, 11, 13])
        a, b = _squarefree(rng, -300, 300), _squarefree(rng, -300, 300)
        if a % p == 0 and b % p:
            a, b = b, a
        if a % p and b % p == 0:
            ramified = legendre(a, p) == -1
        elif a % p == 0 and b % p == 0:
            ramified = legendre(-(b // p) * pow(a // p, -1, p), p) == -1
        else:
            ramified = False
        odd_rule_ok &= (hilbert_symbol(a, b, p) == -1) == ramified
    ok = table and product_ok and iso_ok and odd_rule_ok
    record_criterion(6, "hilbert", ok, f"table={table}, product={product_ok}, isotropy={iso_ok}, odd rule={odd_rule_ok}")
    assert ok


def test_criterion_7_path_equality(desk_results, record_criterion):
    mismatches = []
    for r in desk_results:
        rc = r.recipe
        adjoined = lower_level(pre_lowering_order(rc.algebra, rc.f, rc.g, rc.h), rc)
        if closed_form_basis(rc) != adjoined:
            mismatches.append((r.split.disc, r.split.N))
    ok = not mismatches
    record_criterion(7, "closed form = adjunction", ok, f"{len(desk_results)} instances")
    assert ok, mismatches[:5]


@pytest.mark.xfail(
    strict=True,
    reason="x and q - x select the two different maximal orders at q containing the level-q order; "
    "the lattices differ (both have level N)",
)
def test_criterion_7_root_invariance(desk_results, record_criterion):
    same = 0
    for r in desk_results:
        if closed_form_basis(flip_root(r.recipe)) == r.order:
            same += 1
    ok = same == len(desk_results)
    record_criterion(7, "root flip x -> q-x fixes lattice", ok, f"{same}/{len(desk_results)} unchanged; unattainable")
    assert ok


def test_criterion_7_flipped_root_still_level_n(desk_results):
    for r in desk_results[::7]:
        fr = flip_root(r.recipe)
        assert reduced_discriminant(closed_form_basis(fr)) == r.level


def test_criterion_8_not_constructible(record_criterion, capsys):
    try:
        construct_order(70, 140)
        cert = None
    except NotConstructible as exc:
        cert = exc.certificate
    code = main(["construct", "--disc", "70", "--level", "140"])
    capsys.readouterr()
    ok = (
        cert is not None
        and cert["two_divides_disc"] and cert["v2"] == 2
        and cert["odd_rm1_product"] == 35 and cert["odd_rm1_product_mod4"] == 3
        and code == 2
    )
    record_criterion(8, "70, 140", ok, "2 | disc, v2 = 2, 5*7 = 3 mod 4")
    assert ok
