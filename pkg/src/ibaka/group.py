"""Short-Weierstrass elliptic-curve arithmetic over a prime field.

Affine coordinates with extended-Euclid inversion throughout: the goal is
auditability, not speed.  The group order is called ``q`` everywhere and is
always distinct from the field modulus ``p``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass


class CurveParameterError(ValueError):
    """A candidate parameter set does not describe a usable curve group."""


class NonPrimeModulus(CurveParameterError):
    pass


class SingularCurve(CurveParameterError):
    pass


class GeneratorNotOnCurve(CurveParameterError):
    pass


class WrongOrder(CurveParameterError):
    pass


class MalformedParameterFile(CurveParameterError):
    pass


class PointNotOnCurve(ValueError):
    pass


class MalformedEncoding(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    """Affine curve point; both coordinates ``None`` means the identity."""

    x: int | None
    y: int | None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("point needs both coordinates or neither")

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __repr__(self):
        if self.is_identity:
            return "Point(identity)"
        return f"Point({self.x}, {self.y})"


IDENTITY = Point(None, None)

# Curves at or above this field size skip exhaustive point enumeration.
EXHAUSTIVE_CHECK_BOUND = 1 << 16

MILLER_RABIN_ROUNDS = 64

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int, rounds: int = MILLER_RABIN_ROUNDS) -> bool:
    """Miller-Rabin with bases derived by hashing n, so results are stable."""
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n == sp:
            return True
        if n % sp == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    n_bytes = n.to_bytes((n.bit_length() + 7) // 8, "big")
    for i in range(rounds):
        seed = hashlib.sha256(b"miller-rabin" + i.to_bytes(4, "big") + n_bytes).digest()
        base = int.from_bytes(seed, "big") % (n - 3) + 2
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def mod_inverse(value: int, modulus: int) -> int:
    """Inverse of value mod modulus via extended Euclid."""
    r0, r1 = modulus, value % modulus
    t0, t1 = 0, 1
    while r1 != 0:
        quotient = r0 // r1
        r0, r1 = r1, r0 - quotient * r1
        t0, t1 = t1, t0 - quotient * t1
    if r0 != 1:
        raise ZeroDivisionError(f"{value} is not invertible mod {modulus}")
    return t0 % modulus


@dataclass(frozen=True)
class Curve:
    """Curve y^2 = x^3 + ax + b over F_p with generator (gx, gy) of prime order q.

    Construct through validate_params / load_curve_file so the invariants
    (prime p, non-singular equation, generator on curve with order q) hold.
    """

    p: int
    a: int
    b: int
    gx: int
    gy: int
    q: int

    @property
    def gen(self) -> Point:
        return Point(self.gx, self.gy)

    @property
    def coord_size(self) -> int:
        """Bytes per encoded coordinate: minimal width of p."""
        return (self.p.bit_length() + 7) // 8

    @property
    def scalar_size(self) -> int:
        """Bytes needed for a scalar mod q."""
        return (self.q.bit_length() + 7) // 8

    def is_on_curve(self, u: Point) -> bool:
        if u.is_identity:
            return True
        if not (0 <= u.x < self.p and 0 <= u.y < self.p):
            return False
        return (u.y * u.y - (u.x ** 3 + self.a * u.x + self.b)) % self.p == 0

    def _require_on_curve(self, u: Point):
        if not self.is_on_curve(u):
            raise PointNotOnCurve(f"{u!r} does not satisfy the curve equation")

    def negate(self, u: Point) -> Point:
        self._require_on_curve(u)
        if u.is_identity:
            return u
        return Point(u.x, (-u.y) % self.p)

    def add(self, u: Point, v: Point) -> Point:
        """Group sum by the affine chord-tangent rules."""
        self._require_on_curve(u)
        self._require_on_curve(v)
        if u.is_identity:
            return v
        if v.is_identity:
            return u
        if u.x == v.x and (u.y + v.y) % self.p == 0:
            return IDENTITY
        if u == v:
            slope = (3 * u.x * u.x + self.a) * mod_inverse(2 * u.y, self.p) % self.p
        else:
            slope = (v.y - u.y) * mod_inverse(v.x - u.x, self.p) % self.p
        x3 = (slope * slope - u.x - v.x) % self.p
        y3 = (slope * (u.x - x3) - u.y) % self.p
        return Point(x3, y3)

    def mul(self, k: int, u: Point) -> Point:
        """k-fold sum of u by double-and-add; negative k multiplies -u."""
        self._require_on_curve(u)
        if k < 0:
            k, u = -k, self.negate(u)
        result = IDENTITY
        addend = u
        while k:
            if k & 1:
                result = self.add(result, addend)
            addend = self.add(addend, addend)
            k >>= 1
        return result

    def encode_point(self, u: Point) -> bytes:
        """Identity -> 0x00; otherwise 0x04 || x || y, fixed-width big-endian."""
        if u.is_identity:
            return b"\x00"
        self._require_on_curve(u)
        w = self.coord_size
        return b"\x04" + u.x.to_bytes(w, "big") + u.y.to_bytes(w, "big")

    def decode_point(self, data: bytes) -> Point:
        """Strict inverse of encode_point; the decoded point must lie on the curve."""
        if len(data) == 1 and data[0] == 0x00:
            return IDENTITY
        w = self.coord_size
        if len(data) != 1 + 2 * w:
            raise MalformedEncoding(f"expected 1 or {1 + 2 * w} bytes, got {len(data)}")
        if data[0] != 0x04:
            raise MalformedEncoding(f"unknown point prefix {data[0]:#04x}")
        x = int.from_bytes(data[1:1 + w], "big")
        y = int.from_bytes(data[1 + w:], "big")
        if x >= self.p or y >= self.p:
            raise MalformedEncoding("coordinate exceeds the field modulus")
        point = Point(x, y)
        if not self.is_on_curve(point):
            raise PointNotOnCurve(f"decoded point {point!r} is off the curve")
        return point

    def points(self) -> list[Point]:
        """Every curve point including the identity; desk-scale curves only."""
        if self.p >= EXHAUSTIVE_CHECK_BOUND:
            raise ValueError("point enumeration is only supported for small curves")
        roots: dict[int, list[int]] = {}
        for y in range(self.p):
            roots.setdefault(y * y % self.p, []).append(y)
        found = [IDENTITY]
        for x in range(self.p):
            rhs = (x ** 3 + self.a * x + self.b) % self.p
            for y in roots.get(rhs, ()):
                found.append(Point(x, y))
        return found


def validate_params(p: int, a: int, b: int, gx: int, gy: int, q: int) -> Curve:
    """Check a raw parameter set and return the usable Curve.

    Small curves (p below 2^16) get exhaustive verification: the whole point
    set is enumerated and the generator is walked step by step to confirm its
    order is exactly q.  Larger curves get q*gen == identity plus a 64-round
    probabilistic primality check on q.
    """
    if p <= 3 or not is_probable_prime(p):
        raise NonPrimeModulus(f"field modulus {p} is not an odd prime > 3")
    a %= p
    b %= p
    if (4 * a ** 3 + 27 * b ** 2) % p == 0:
        raise SingularCurve("discriminant is zero")
    if not (0 <= gx < p and 0 <= gy < p):
        raise GeneratorNotOnCurve("generator coordinates outside the field")
    curve = Curve(p, a, b, gx, gy, q)
    if not curve.is_on_curve(curve.gen):
        raise GeneratorNotOnCurve(f"({gx}, {gy}) does not satisfy the curve equation")
    if q < 2 or not is_probable_prime(q):
        raise WrongOrder(f"group order {q} is not prime")
    if p < EXHAUSTIVE_CHECK_BOUND:
        total = len(curve.points())
        order = 1
        acc = curve.gen
        while not acc.is_identity:
            acc = curve.add(acc, curve.gen)
            order += 1
            if order > total:
                raise WrongOrder("generator does not cycle within the point count")
        if order != q:
            raise WrongOrder(f"generator has order {order}, expected {q}")
    else:
        if not curve.mul(q, curve.gen).is_identity:
            raise WrongOrder("q * gen is not the identity")
    return curve


# Fixed desk-scale curve used by all deterministic examples: 19 points, all
# generated by (5, 1).
TOY_CURVE = validate_params(p=17, a=2, b=2, gx=5, gy=1, q=19)

_CURVE_FILE_KEYS = ("p", "a", "b", "gx", "gy", "q")


def parse_curve_params(text: str) -> Curve:
    """Parse `key = value` curve-parameter text and validate it.

    Keys p, a, b, gx, gy, q; decimal integers; one pair per line.  Blank
    lines and lines starting with '#' are ignored; unknown or repeated keys
    are rejected.
    """
    values: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, raw = stripped.partition("=")
        if not sep:
            raise MalformedParameterFile(f"line {lineno}: expected `key = value`")
        key = key.strip()
        if key not in _CURVE_FILE_KEYS:
            raise MalformedParameterFile(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise MalformedParameterFile(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = int(raw.strip())
        except ValueError:
            raise MalformedParameterFile(
                f"line {lineno}: value for {key!r} is not a decimal integer"
            ) from None
    missing = [k for k in _CURVE_FILE_KEYS if k not in values]
    if missing:
        raise MalformedParameterFile(f"missing keys: {', '.join(missing)}")
    return validate_params(**values)


def load_curve_file(path) -> Curve:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_curve_params(fh.read())
