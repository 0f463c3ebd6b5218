"""Places of Q, exact local absolute values, and S-integrality.

A place is either the archimedean place "inf" or a p-adic place "p<prime>".
Local degrees are kept explicit (always 1 over Q) so the global formulas read
the same as over a general number field.  Finite-place quantities are carried
as (valuation, prime) pairs inside LogExpr; nothing is rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .logvals import NEG_INF, LogExpr, _Infinite

DEFAULT_TRIAL_BOUND = 100_000

# Deterministic for n < 3.3e24; no composite below 2^81 is known to pass the
# extended witness list.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)


class FactorizationError(ValueError):
    """Raised when a cofactor survives trial division and is not prime."""

    def __init__(self, n: int, cofactor: int, trial_bound: int):
        super().__init__(
            f"cannot factor {n}: cofactor {cofactor} resists trial division "
            f"up to {trial_bound} and is not prime")
        self.n = n
        self.cofactor = cofactor
        self.trial_bound = trial_bound


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with a fixed witness set (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int, trial_bound: int = DEFAULT_TRIAL_BOUND) -> dict[int, int]:
    """Factor |n| by trial division, Miller-Rabin deciding the cofactor.

    Raises FactorizationError when the cofactor is composite; callers created
    the integer (an orbit denominator) and can retry with a larger bound.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    factors: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    q = 5
    while q <= trial_bound and q * q <= n:
        for p in (q, q + 2):
            while n % p == 0:
                factors[p] = factors.get(p, 0) + 1
                n //= p
        q += 6
    if n > 1:
        if is_probable_prime(n):
            factors[n] = factors.get(n, 0) + 1
        else:
            raise FactorizationError(n, n, trial_bound)
    return factors


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: prime=None is the archimedean place."""

    sort_key: int
    prime: Optional[int]

    def __init__(self, prime: Optional[int] = None):
        if prime is not None and not is_probable_prime(prime):
            raise ValueError(f"{prime} is not prime")
        object.__setattr__(self, "prime", prime)
        object.__setattr__(self, "sort_key", 0 if prime is None else prime)

    @property
    def is_archimedean(self) -> bool:
        return self.prime is None

    @property
    def local_degree(self) -> Fraction:
        return Fraction(1)

    @property
    def lv(self) -> int:
        """Metric comparison constant: 2 at the archimedean place, else 1."""
        return 2 if self.is_archimedean else 1

    def log_lv(self) -> LogExpr:
        return LogExpr.log_int(2) if self.is_archimedean else LogExpr.zero()

    @classmethod
    def parse(cls, text: str) -> "Place":
        text = text.strip()
        if text in ("inf", "infinity", "oo"):
            return INFINITE_PLACE
        if text.startswith("p"):
            return cls(int(text[1:]))
        raise ValueError(f"cannot parse place {text!r} (want 'inf' or 'p<prime>')")

    def __str__(self) -> str:
        return "inf" if self.is_archimedean else f"p{self.prime}"


INFINITE_PLACE = Place(None)


class PlaceSet:
    """Finite set of places; iteration order is inf first, then primes ascending."""

    __slots__ = ("places",)

    def __init__(self, places: Iterable[Place]):
        object.__setattr__(self, "places", frozenset(places))

    def __setattr__(self, name, value):
        raise AttributeError("PlaceSet is immutable")

    @classmethod
    def parse(cls, names: Iterable[str]) -> "PlaceSet":
        return cls(Place.parse(s) for s in names)

    @property
    def contains_infinite(self) -> bool:
        return INFINITE_PLACE in self.places

    @property
    def finite_primes(self) -> tuple[int, ...]:
        return tuple(sorted(p.prime for p in self.places if not p.is_archimedean))

    def __iter__(self) -> Iterator[Place]:
        return iter(sorted(self.places, key=lambda v: v.sort_key))

    def __len__(self) -> int:
        return len(self.places)

    def __contains__(self, place: Place) -> bool:
        return place in self.places

    def __eq__(self, other) -> bool:
        return isinstance(other, PlaceSet) and self.places == other.places

    def __hash__(self):
        return hash(self.places)

    def to_json(self) -> list[str]:
        return [str(v) for v in self]

    def __repr__(self):
        return "PlaceSet({" + ", ".join(str(v) for v in self) + "})"


def parse_rational(text: str) -> Fraction:
    """Parse 'a/b' or 'a' into an exact rational."""
    return Fraction(text.strip())


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def padic_valuation(x: Fraction | int, p: int) -> int:
    """v_p(x) for nonzero rational x."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("v_p(0) is undefined (plus infinity)")
    v = 0
    n = abs(x.numerator)
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def abs_log(x: Fraction | int, v: Place) -> LogExpr | _Infinite:
    """log|x|_v, exactly; NEG_INF for x = 0."""
    x = Fraction(x)
    if x == 0:
        return NEG_INF
    if v.is_archimedean:
        return LogExpr.log_fraction(abs(x))
    return LogExpr.log_int(v.prime, -padic_valuation(x, v.prime))


def log_plus_abs(x: Fraction | int, v: Place) -> LogExpr:
    """log max(|x|_v, 1), exactly; zero for x = 0."""
    x = Fraction(x)
    if x == 0:
        return LogExpr.zero()
    if v.is_archimedean:
        ax = abs(x)
        return LogExpr.log_fraction(ax) if ax > 1 else LogExpr.zero()
    val = padic_valuation(x, v.prime)
    return LogExpr.log_int(v.prime, -val) if val < 0 else LogExpr.zero()


def is_s_integer(x: Fraction | int, s: PlaceSet) -> bool:
    """True iff every prime factor of the denominator lies in S.

    Needs no factorization: the S-primes are divided out and the rest must be 1.
    """
    if not s.contains_infinite:
        raise ValueError("S must contain the archimedean place for R_S semantics")
    d = Fraction(x).denominator
    for p in s.finite_primes:
        while d % p == 0:
            d //= p
    return d == 1


def support_places(x: Fraction | int,
                   trial_bound: int = DEFAULT_TRIAL_BOUND) -> PlaceSet:
    """The archimedean place plus every prime dividing numerator or denominator."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("support of 0 is not defined")
    primes: set[int] = set()
    if abs(x.numerator) > 1:
        primes.update(factorize(x.numerator, trial_bound))
    if x.denominator > 1:
        primes.update(factorize(x.denominator, trial_bound))
    return PlaceSet([INFINITE_PLACE] + [Place(p) for p in sorted(primes)])
