"""Independent checks on a constructed order and a batch sweep driver."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .construct import construct_order, not_constructible_certificate, split_level
from .errors import NotConstructible, QuatOrdersError
from .lattice import OrderReport, QuatLattice, order_failures, reduced_discriminant
from .numth import factorize


def verify_order(L: QuatLattice, disc: Optional[int], N: int) -> OrderReport:
    """Check that L is an order of level N in an algebra of discriminant ``disc``.

    Every check runs; the report lists all that failed.  ``disc=None``
    skips the ramification comparison.
    """
    failures = order_failures(L)
    ring_ok = not failures
    level = None
    per_prime: dict[int, int] = {}
    try:
        level = reduced_discriminant(L, check=False)
    except QuatOrdersError as exc:
        failures.append(f"reduced discriminant: {exc}")
    if level is not None:
        if level == 0:
            failures.append("trace form is degenerate")
        else:
            per_prime = factorize(level).as_dict()
            if level != N:
                failures.append(f"reduced discriminant {level} differs from the expected level {N}")
            want = factorize(N).as_dict() if N >= 1 else {}
            for p in sorted(set(want) | set(per_prime)):
                if want.get(p, 0) != per_prime.get(p, 0):
                    failures.append(
                        f"exponent of {p}: found {per_prime.get(p, 0)}, expected {want.get(p, 0)}"
                    )
    if disc is not None:
        ramified = sorted(L.algebra.ramified_primes())
        expected = list(factorize(disc).primes) if disc > 1 else []
        if ramified != expected:
            failures.append(f"algebra ramifies at {ramified}, expected {expected}")
    return OrderReport(ring_ok, level, per_prime, failures)


def admissible_pairs(max_disc: int, max_level: int) -> list[tuple[int, int]]:
    """All (disc, N) with disc squarefree, an odd number of primes, disc | N, 1 < N."""
    pairs = []
    for disc in range(2, max_disc + 1):
        fac = factorize(disc)
        if any(e > 1 for _, e in fac.factors) or len(fac.factors) % 2 == 0:
            continue
        for N in range(disc, max_level + 1, disc):
            pairs.append((disc, N))
    return pairs


@dataclass(frozen=True)
class InstanceOutcome:
    disc: int
    N: int
    status: str  # "passed", "skipped" or "failed"
    detail: str = ""
    certificate: Optional[dict] = None


def run_instance(disc: int, N: int) -> InstanceOutcome:
    try:
        result = construct_order(disc, N)
    except NotConstructible as exc:
        cert = not_constructible_certificate(split_level(N, disc))
        if cert is None:
            return InstanceOutcome(disc, N, "failed", f"uncertified NotConstructible: {exc}")
        return InstanceOutcome(disc, N, "skipped", str(exc), cert)
    except Exception as exc:  # a sweep must never abort
        return InstanceOutcome(disc, N, "failed", f"{type(exc).__name__}: {exc}")
    report = verify_order(result.order, disc, N)
    if not report.passed:
        return InstanceOutcome(disc, N, "failed", "; ".join(report.failures))
    return InstanceOutcome(disc, N, "passed")


def _run_pair(pair: tuple[int, int]) -> InstanceOutcome:
    return run_instance(*pair)


@dataclass(frozen=True)
class SweepReport:
    max_disc: int
    max_level: int
    attempted: int
    passed: int
    skipped: tuple[InstanceOutcome, ...] = field(default_factory=tuple)
    failures: tuple[InstanceOutcome, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.attempted != self.passed + len(self.skipped) + len(self.failures):
            raise ValueError("attempted must equal passed + skipped + failed")

    @property
    def skipped_not_constructible(self) -> int:
        return len(self.skipped)

    def as_dict(self) -> dict:
        return {
            "range": {"max_disc": self.max_disc, "max_level": self.max_level},
            "attempted": self.attempted,
            "passed": self.passed,
            "skipped_not_constructible": self.skipped_not_constructible,
            "skipped": [
                {"disc": s.disc, "level": s.N, "certificate": s.certificate} for s in self.skipped
            ],
            "failures": [
                {"disc": f.disc, "level": f.N, "diagnostic": f.detail} for f in self.failures
            ],
        }


def sweep(max_disc: int, max_level: int, workers: int = 1) -> SweepReport:
    if max_disc < 2:
        raise ValueError("max_disc must be at least 2")
    pairs = admissible_pairs(max_disc, max_level)
    if workers > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_pair, pairs, chunksize=8))
    else:
        outcomes = [_run_pair(p) for p in pairs]
    outcomes.sort(key=lambda o: (o.disc, o.N))
    return SweepReport(
        max_disc,
        max_level,
        len(outcomes),
        sum(o.status == "passed" for o in outcomes),
        tuple(o for o in outcomes if o.status == "skipped"),
        tuple(o for o in outcomes if o.status == "failed"),
    )
