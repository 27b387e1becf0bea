"""Exact arithmetic over Q and cyclotomic fields Q(zeta_ell), with p-adic
valuations computed through a Hensel-lifted embedding at finite precision.

A Scalar is an integer coordinate vector over the power basis
1, z, ..., z^(phi(ell)-1) of Q(zeta_ell), together with a positive common
denominator, kept in lowest terms.  Values that reduce to rationals are
demoted to the rational descriptor (ell = 1), so structural equality is
value equality even across declared fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

INF = math.inf

__all__ = [
    "Scalar",
    "PadicContext",
    "Valuation",
    "hensel_embed",
    "val",
    "parse_scalar",
    "cyclotomic_polynomial",
    "SplittingError",
    "DivisionByZero",
    "FieldMismatch",
    "ExprError",
]


class SplittingError(ValueError):
    """The prime does not split the requested cyclotomic field (p != 1 mod ell)."""


class DivisionByZero(ZeroDivisionError):
    """Inversion or division by the zero scalar."""


class FieldMismatch(ValueError):
    """Operands declared over incompatible coefficient fields."""


class ExprError(ValueError):
    """Malformed scalar or element expression."""


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    # den must be monic; division must be exact over Z.
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("polynomial division is not exact")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(ell: int) -> tuple[int, ...]:
    """Integer coefficients of the ell-th cyclotomic polynomial, low degree first."""
    if ell < 1:
        raise ValueError("cyclotomic index must be >= 1")
    if ell == 1:
        return (-1, 1)
    poly = [-1] + [0] * (ell - 1) + [1]  # x^ell - 1
    for d in range(1, ell):
        if ell % d == 0:
            poly = _polydiv_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def euler_phi(ell: int) -> int:
    return len(cyclotomic_polynomial(ell)) - 1 if ell > 1 else 1


def _reduce_mod_cyclotomic(coeffs: list[int], ell: int) -> list[int]:
    phi = cyclotomic_polynomial(ell)
    d = len(phi) - 1
    cs = list(coeffs)
    for i in range(len(cs) - 1, d - 1, -1):
        c = cs[i]
        if c:
            for j in range(d + 1):
                cs[i - d + j] -= c * phi[j]
    cs = cs[:d]
    cs += [0] * (d - len(cs))
    return cs


class Scalar:
    """Element of Q or Q(zeta_ell) in canonical reduced form.

    The gcd of all integer coordinates and the denominator is 1 and the
    denominator is positive.  Purely rational values always carry ell = 1.
    """

    __slots__ = ("ell", "coeffs", "den")

    def __init__(self, ell: int, coeffs: tuple[int, ...], den: int):
        # Raw constructor: use the classmethods or module helpers instead.
        self.ell = ell
        self.coeffs = coeffs
        self.den = den

    # -- construction -------------------------------------------------

    @staticmethod
    def _make(ell: int, coeffs: list[int], den: int) -> "Scalar":
        if den == 0:
            raise DivisionByZero("zero denominator")
        if den < 0:
            den = -den
            coeffs = [-c for c in coeffs]
        g = den
        for c in coeffs:
            g = math.gcd(g, c)
            if g == 1:
                break
        if g > 1:
            den //= g
            coeffs = [c // g for c in coeffs]
        if ell > 1 and not any(coeffs[1:]):
            return Scalar(1, (coeffs[0],), den)
        return Scalar(ell, tuple(coeffs), den)

    @classmethod
    def rational(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, int):
            return cls._make(1, [value], 1)
        if isinstance(value, Fraction):
            return cls._make(1, [value.numerator], value.denominator)
        raise TypeError(f"cannot build a Scalar from {type(value).__name__}")

    @classmethod
    def zeta(cls, ell: int, power: int = 1) -> "Scalar":
        """The root of unity zeta_ell ** power."""
        if ell < 1:
            raise ValueError("cyclotomic index must be >= 1")
        power %= ell
        if ell <= 2:
            return cls.rational(1 if ell == 1 or power == 0 else -1)
        raw = [0] * (power + 1)
        raw[power] = 1
        return cls._make(ell, _reduce_mod_cyclotomic(raw, ell), 1)

    @classmethod
    def from_coords(cls, ell: int, coeffs, den: int = 1) -> "Scalar":
        coeffs = list(coeffs)
        if ell > 1:
            coeffs += [0] * (euler_phi(ell) - len(coeffs))
            coeffs = _reduce_mod_cyclotomic(coeffs, ell)
        return cls._make(ell, coeffs, den)

    # -- coercion ------------------------------------------------------

    def _lift(self, ell: int) -> "Scalar":
        if self.ell == ell:
            return self
        if self.ell != 1:
            raise FieldMismatch(
                f"cannot mix Q(zeta_{self.ell}) and Q(zeta_{ell}) values"
            )
        coeffs = [self.coeffs[0]] + [0] * (euler_phi(ell) - 1)
        return Scalar(ell, tuple(coeffs), self.den)

    def _pair(self, other) -> tuple["Scalar", "Scalar"]:
        if not isinstance(other, Scalar):
            other = Scalar.rational(other)
        if self.ell == other.ell:
            return self, other
        if self.ell == 1:
            return self._lift(other.ell), other
        return self, other._lift(self.ell)

    # -- predicates ----------------------------------------------------

    def __bool__(self) -> bool:
        return any(self.coeffs)

    @property
    def is_rational(self) -> bool:
        return self.ell == 1

    def as_fraction(self) -> Fraction:
        if self.ell != 1:
            raise FieldMismatch("value is not rational")
        return Fraction(self.coeffs[0], self.den)

    def is_integer(self) -> bool:
        return self.ell == 1 and self.den == 1

    def as_int(self) -> int:
        if not self.is_integer():
            raise FieldMismatch("value is not a rational integer")
        return self.coeffs[0]

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) or isinstance(other, Scalar):
            a, b = self._pair(other)
        else:
            return NotImplemented
        if a.ell == 1:
            return Scalar._make(
                1, [a.coeffs[0] * b.den + b.coeffs[0] * a.den], a.den * b.den
            )
        coeffs = [x * b.den + y * a.den for x, y in zip(a.coeffs, b.coeffs)]
        return Scalar._make(a.ell, coeffs, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.ell, tuple(-c for c in self.coeffs), self.den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self + (-Scalar.rational(other) if not isinstance(other, Scalar) else -other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) or isinstance(other, Scalar):
            a, b = self._pair(other)
        else:
            return NotImplemented
        if a.ell == 1:
            return Scalar._make(1, [a.coeffs[0] * b.coeffs[0]], a.den * b.den)
        n = len(a.coeffs)
        raw = [0] * (2 * n - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        raw[i + j] += x * y
        return Scalar._make(a.ell, _reduce_mod_cyclotomic(raw, a.ell), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self:
            raise DivisionByZero("inverse of zero")
        if self.ell == 1:
            return Scalar._make(1, [self.den], self.coeffs[0])
        # extended Euclid in Q[x] against the cyclotomic polynomial
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.ell)]
        a = [Fraction(c, self.den) for c in self.coeffs]
        r0, r1 = phi, list(a)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while any(r1):
            q, rem = _polydivmod_q(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _polysub_q(s0, _polymul_q(q, s1))
        # r0 is a nonzero constant gcd
        const = next(c for c in r0 if c)
        inv = [c / const for c in s0]
        den = 1
        for c in inv:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in inv]
        return Scalar.from_coords(self.ell, ints, den)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.rational(other)
        if isinstance(other, Scalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Scalar.rational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparisons ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return (
            self.ell == other.ell
            and self.den == other.den
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ell, self.coeffs, self.den))

    def is_positive_integer(self) -> bool:
        return self.is_integer() and self.coeffs[0] > 0

    # -- display -------------------------------------------------------

    def __str__(self) -> str:
        if self.ell == 1:
            return str(Fraction(self.coeffs[0], self.den))
        pieces = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                body = str(abs(c))
            else:
                zpow = "z" if i == 1 else f"z^{i}"
                body = zpow if abs(c) == 1 else f"{abs(c)}*{zpow}"
            pieces.append((c < 0, body))
        first_neg, first = pieces[0]
        text = ("-" if first_neg else "") + first
        for neg, body in pieces[1:]:
            text += (" - " if neg else " + ") + body
        if self.den > 1:
            return f"({text})/{self.den}"
        if len(pieces) > 1:
            return f"({text})"
        return text

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _polydivmod_q(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    while den and not den[-1]:
        den = den[:-1]
    dd = len(den) - 1
    lead = den[-1]
    quot = [Fraction(0)] * max(len(num) - dd, 0)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q = c / lead
            quot[i - dd] = q
            for j in range(dd + 1):
                num[i - dd + j] -= q * den[j]
    return quot, num[:dd] if dd > 0 else [Fraction(0)]


def _polymul_q(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _polysub_q(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


ZERO = Scalar.rational(0)
ONE = Scalar.rational(1)


# ---------------------------------------------------------------------------
# p-adic embedding and valuations
# ---------------------------------------------------------------------------


def is_prime(n: int) -> bool:
    # trial division; primes at desk scale are tiny
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def hensel_embed(ell: int, p: int, precision: int) -> int:
    """Newton-lift the smallest root of the ell-th cyclotomic polynomial mod p
    to a root mod p**precision."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if (p - 1) % ell != 0:
        raise SplittingError(f"p = {p} is not congruent to 1 mod {ell}")
    phi = cyclotomic_polynomial(ell)

    def poly_at(r: int, mod: int) -> int:
        acc = 0
        for c in reversed(phi):
            acc = (acc * r + c) % mod
        return acc

    root = next(r for r in range(p) if poly_at(r, p) == 0)
    prec = 1
    while prec < precision:
        prec = min(2 * prec, precision)
        mod = p**prec
        deriv = 0
        for i in range(len(phi) - 1, 0, -1):
            deriv = (deriv * root + i * phi[i]) % mod
        root = (root - poly_at(root, mod) * pow(deriv, -1, mod)) % mod
    return root


@dataclass(frozen=True)
class Valuation:
    """A p-adic valuation: an integer or +infinity, with an exactness flag.

    ``exact`` is False when the computed value is only a lower bound because
    the working precision was exhausted.
    """

    value: float  # int-valued, or math.inf
    exact: bool = True

    @classmethod
    def infinite(cls) -> "Valuation":
        return cls(INF, True)

    def __add__(self, other: "Valuation") -> "Valuation":
        return Valuation(self.value + other.value, self.exact and other.exact)


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicContext:
    """Prime, working precision, and (for cyclotomic fields) a Hensel root of
    the ell-th cyclotomic polynomial mod p**precision."""

    prime: int
    precision: int = 64
    ell: int = 1
    root: int = 0

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        if self.ell > 1:
            object.__setattr__(
                self, "root", hensel_embed(self.ell, self.prime, self.precision)
            )
        else:
            object.__setattr__(self, "root", 1 % self.prime**self.precision)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision


def val(x: Scalar, ctx: PadicContext) -> Valuation:
    """p-adic valuation of x through the context's embedding.

    Rational values are exact.  Cyclotomic values are exact whenever the
    valuation is below the working precision; otherwise the result is the
    lower bound precision - v_p(denominator) with the exact flag cleared.
    """
    if not x:
        return Valuation.infinite()
    vden = _vp_int(x.den, ctx.prime)
    if x.ell == 1:
        return Valuation(_vp_int(x.coeffs[0], ctx.prime) - vden, True)
    if x.ell != ctx.ell:
        raise FieldMismatch(
            f"context is over Q(zeta_{ctx.ell}) but value lives in Q(zeta_{x.ell})"
        )
    mod = ctx.modulus
    acc = 0
    for c in reversed(x.coeffs):
        acc = (acc * ctx.root + c) % mod
    if acc == 0:
        return Valuation(ctx.precision - vden, False)
    return Valuation(_vp_int(acc, ctx.prime) - vden, True)


# ---------------------------------------------------------------------------
# scalar expression parsing
# ---------------------------------------------------------------------------


def tokenize(text: str) -> list[tuple[str, str]]:
    """Split an expression into (kind, text) tokens; kinds: int, name, op."""
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j]))
            i = j
        elif ch.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
        elif ch in "+-*/^()":
            tokens.append(("op", ch))
            i += 1
        else:
            raise ExprError(f"unexpected character {ch!r} in expression")
    return tokens


class _ScalarParser:
    def __init__(self, tokens, ell: int):
        self.tokens = tokens
        self.pos = 0
        self.ell = ell

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse_sum(self) -> Scalar:
        sign = 1
        kind, text = self.peek()
        if (kind, text) == ("op", "-"):
            self.take()
            sign = -1
        elif (kind, text) == ("op", "+"):
            self.take()
        acc = self.parse_product() * sign
        while True:
            kind, text = self.peek()
            if (kind, text) == ("op", "+"):
                self.take()
                acc = acc + self.parse_product()
            elif (kind, text) == ("op", "-"):
                self.take()
                acc = acc - self.parse_product()
            else:
                return acc

    def parse_product(self) -> Scalar:
        acc = self.parse_power()
        while True:
            kind, text = self.peek()
            if (kind, text) == ("op", "*"):
                self.take()
                acc = acc * self.parse_power()
            elif (kind, text) == ("op", "/"):
                self.take()
                div = self.parse_power()
                if not div:
                    raise DivisionByZero("division by zero in expression")
                acc = acc / div
            else:
                return acc

    def parse_power(self) -> Scalar:
        base = self.parse_atom()
        kind, text = self.peek()
        if (kind, text) == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, text = self.take()
            if kind != "int":
                raise ExprError("exponent must be an integer")
            return base ** (sign * int(text))
        return base

    def parse_atom(self) -> Scalar:
        kind, text = self.take()
        if kind == "int":
            return Scalar.rational(int(text))
        if kind == "name":
            if text == "z":
                if self.ell <= 1:
                    raise ExprError("z requires a cyclotomic coefficient field")
                return Scalar.zeta(self.ell)
            raise ExprError(f"unknown symbol {text!r} in scalar expression")
        if (kind, text) == ("op", "("):
            inner = self.parse_sum()
            if self.take() != ("op", ")"):
                raise ExprError("missing closing parenthesis")
            return inner
        if (kind, text) == ("op", "-"):
            return -self.parse_atom()
        raise ExprError(f"unexpected token {text!r} in scalar expression")


def parse_scalar(text: str, ell: int = 1) -> Scalar:
    """Parse an exact scalar expression such as ``-3/2`` or ``(1 + 2*z^2)/5``."""
    tokens = tokenize(text)
    if not tokens:
        raise ExprError("empty scalar expression")
    parser = _ScalarParser(tokens, ell)
    value = parser.parse_sum()
    if parser.pos != len(tokens):
        raise ExprError(f"trailing input in scalar expression {text!r}")
    return value
