"""The rational Cherednik algebra as exact data: elements in the PBW basis
x^I * g * y^J (x = coordinate functions raising degree, y = vector fields
lowering degree), multiplication by straightening against the defining
relations, the deformed Euler element, and the inner Z-grading.

Straightening resolves one y-past-x inversion at a time:

    y_i * x_j = x_j * y_i + delta_ij - sum_s c(s) (y_i, alpha_s)(alpha_s^v, x_j) s

and moves group elements through polynomials by the linear action on the
generators.  Each step strictly decreases the inversion count, so rewriting
terminates; associativity is covered by the test suite.
"""

from __future__ import annotations

from .groups import GroupAction, PseudoReflection, ReflectionFunction, find_reflections
from .scalars import Scalar, ZERO, ONE, tokenize, ExprError

Term = tuple  # (I, g, J): multidegree tuple, group index, multidegree tuple


class AlgebraMismatch(ValueError):
    """Operands belong to different algebra instances."""


class CoefficientBlowup(RuntimeError):
    """A coefficient exceeded the configured bit-size guard."""


def term_sort_key(term: Term):
    i, g, j = term
    return (sum(i), i, g, sum(j), j)


def _add_deg(a, b):
    return tuple(x + y for x, y in zip(a, b))


class PBWElement:
    """Finitely supported map from PBW monomials to nonzero coefficients."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms: dict):
        self.algebra = algebra
        self.terms = terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: term_sort_key(kv[0]))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PBWElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = self.algebra._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, ZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return PBWElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return PBWElement(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self.algebra._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PBWElement):
            return self.algebra.multiply(self, other)
        coef = Scalar.rational(other) if not isinstance(other, Scalar) else other
        if not coef:
            return self.algebra.zero()
        return PBWElement(self.algebra, {k: v * coef for k, v in self.terms.items()})

    def __rmul__(self, other):
        # scalars commute with everything; element-element products use __mul__
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined in the algebra")
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def grade_decompose(self) -> dict:
        """Split into components of fixed inner degree |I| - |J|."""
        out: dict[int, dict] = {}
        for (i, g, j), coef in self.terms.items():
            out.setdefault(sum(i) - sum(j), {})[(i, g, j)] = coef
        return {
            n: PBWElement(self.algebra, terms) for n, terms in sorted(out.items())
        }

    def degrees(self):
        return sorted({sum(i) - sum(j) for (i, g, j) in self.terms})

    def __str__(self):
        return self.algebra.format_element(self)

    def __repr__(self):
        return f"<PBW {self}>"


class CherednikAlgebra:
    """A rational Cherednik algebra instance: the group action, its
    pseudo-reflections, a reflection function, and straightening caches.

    Instances are immutable after construction and multiplication is pure;
    the internal caches only ever gain entries whose values are determined
    by their keys, so concurrent products over one instance stay safe."""

    def __init__(
        self,
        group: GroupAction,
        c: ReflectionFunction,
        irreps=(),
        reflections=None,
        field_ell: int | None = None,
        max_coeff_bits: int = 1_000_000,
    ):
        self.group = group
        self.dim = group.dimension
        self.reflections = (
            list(reflections) if reflections is not None else find_reflections(group)
        )
        self.c = c
        self.irreps = list(irreps)
        self.field_ell = field_ell if field_ell is not None else _data_field(self)
        self.max_coeff_bits = max_coeff_bits
        self._zero_deg = (0,) * self.dim
        # per-reflection data used by the commutation rule
        self._refl_data = [
            (r.index, self.c(r.index), r.covector, r.vector) for r in self.reflections
        ]
        self._act_a_cache: dict = {}
        self._act_b_cache: dict = {}
        self._single_cache: dict = {}
        self._ji_cache: dict = {}
        self._euler = None

    # -- element constructors -------------------------------------------

    def element(self, terms: dict | None = None) -> PBWElement:
        out: dict = {}
        for k, v in (terms or {}).items():
            i, g, j = k
            coef = v if isinstance(v, Scalar) else Scalar.rational(v)
            if coef:
                out[(tuple(i), g, tuple(j))] = coef
        return PBWElement(self, out)

    def zero(self) -> PBWElement:
        return PBWElement(self, {})

    def one(self) -> PBWElement:
        return self.monomial(self._zero_deg, 0, self._zero_deg)

    def monomial(self, i, g: int, j, coeff=1) -> PBWElement:
        coef = coeff if isinstance(coeff, Scalar) else Scalar.rational(coeff)
        if not coef:
            return self.zero()
        return PBWElement(self, {(tuple(i), g, tuple(j)): coef})

    def x(self, i: int, power: int = 1) -> PBWElement:
        """The degree-raising generator x_i (1-based index)."""
        deg = [0] * self.dim
        deg[i - 1] = power
        return self.monomial(tuple(deg), 0, self._zero_deg)

    def y(self, i: int, power: int = 1) -> PBWElement:
        """The degree-lowering generator y_i (1-based index)."""
        deg = [0] * self.dim
        deg[i - 1] = power
        return self.monomial(self._zero_deg, 0, tuple(deg))

    def g(self, index: int) -> PBWElement:
        return self.monomial(self._zero_deg, index, self._zero_deg)

    def scalar(self, value) -> PBWElement:
        return self.one() * value

    def _coerce(self, other) -> PBWElement:
        if isinstance(other, PBWElement):
            if other.algebra is not self:
                raise AlgebraMismatch("elements belong to different algebras")
            return other
        return self.scalar(other)

    # -- linear action on polynomial generators ---------------------------

    def act_on_x_monomial(self, g: int, deg: tuple) -> dict:
        """Expansion of g acting on the A-monomial x^deg (dual action)."""
        key = (g, deg)
        cached = self._act_a_cache.get(key)
        if cached is not None:
            return cached
        if not any(deg):
            result = {deg: ONE}
        else:
            b = next(k for k, e in enumerate(deg) if e)
            rest = list(deg)
            rest[b] -= 1
            prev = self.act_on_x_monomial(g, tuple(rest))
            # g(x_b) = sum_i M(g^-1)[b][i] x_i
            row = self.group.matrices[self.group.inv(g)][b]
            result: dict = {}
            for mono, coef in prev.items():
                for idx, entry in enumerate(row):
                    if entry:
                        up = list(mono)
                        up[idx] += 1
                        k2 = tuple(up)
                        s = result.get(k2, ZERO) + coef * entry
                        if s:
                            result[k2] = s
                        else:
                            result.pop(k2, None)
        self._act_a_cache[key] = result
        return result

    def act_on_y_monomial(self, g: int, deg: tuple) -> dict:
        """Expansion of g acting on the B-monomial y^deg (matrix action)."""
        key = (g, deg)
        cached = self._act_b_cache.get(key)
        if cached is not None:
            return cached
        if not any(deg):
            result = {deg: ONE}
        else:
            b = next(k for k, e in enumerate(deg) if e)
            rest = list(deg)
            rest[b] -= 1
            prev = self.act_on_y_monomial(g, tuple(rest))
            mat = self.group.matrices[g]
            result = {}
            for mono, coef in prev.items():
                for idx in range(self.dim):
                    entry = mat[idx][b]
                    if entry:
                        up = list(mono)
                        up[idx] += 1
                        k2 = tuple(up)
                        s = result.get(k2, ZERO) + coef * entry
                        if s:
                            result[k2] = s
                        else:
                            result.pop(k2, None)
        self._act_b_cache[key] = result
        return result

    # -- straightening ---------------------------------------------------

    def _straighten_single(self, a: int, ideg: tuple) -> dict:
        """PBW expansion of y_a * x^ideg as {(A, h, B): coeff}."""
        key = (a, ideg)
        cached = self._single_cache.get(key)
        if cached is not None:
            return cached
        zero_deg = self._zero_deg
        if not any(ideg):
            ydeg = list(zero_deg)
            ydeg[a] = 1
            result = {(zero_deg, 0, tuple(ydeg)): ONE}
        else:
            b = next(k for k, e in enumerate(ideg) if e)
            rest = list(ideg)
            rest[b] -= 1
            rest = tuple(rest)
            result = {}

            def bump(k, v):
                s = result.get(k, ZERO) + v
                if s:
                    result[k] = s
                else:
                    result.pop(k, None)

            # x_b * (y_a * x^rest)
            for (A, h, B), coef in self._straighten_single(a, rest).items():
                up = list(A)
                up[b] += 1
                bump((tuple(up), h, B), coef)
            # + delta_ab * x^rest
            if a == b:
                bump((rest, 0, zero_deg), ONE)
            # - sum over reflections
            for s_idx, c_val, alpha, coroot in self._refl_data:
                coef = c_val * alpha[a] * coroot[b]
                if not coef:
                    continue
                for mono, sub_coef in self.act_on_x_monomial(s_idx, rest).items():
                    bump((mono, s_idx, zero_deg), -coef * sub_coef)
        self._single_cache[key] = result
        return result

    def _straighten_ji(self, jdeg: tuple, ideg: tuple) -> dict:
        """PBW expansion of y^jdeg * x^ideg."""
        key = (jdeg, ideg)
        cached = self._ji_cache.get(key)
        if cached is not None:
            return cached
        if not any(jdeg):
            result = {(ideg, 0, self._zero_deg): ONE}
        else:
            c = max(k for k, e in enumerate(jdeg) if e)
            rest = list(jdeg)
            rest[c] -= 1
            rest = tuple(rest)
            result = {}
            table = self.group.mult_table
            for (A, h, B), coef in self._straighten_single(c, ideg).items():
                inner = self._straighten_ji(rest, A)
                for (A2, h2, B2), coef2 in inner.items():
                    # y^B2 * h = h * (h^-1 . y^B2)
                    for B3, coef3 in self.act_on_y_monomial(
                        self.group.inv(h), B2
                    ).items():
                        k2 = (A2, table[h2][h], _add_deg(B3, B))
                        total = coef * coef2 * coef3
                        s = result.get(k2, ZERO) + total
                        if s:
                            result[k2] = s
                        else:
                            result.pop(k2, None)
        self._ji_cache[key] = result
        return result

    def multiply(self, a: PBWElement, b: PBWElement) -> PBWElement:
        """Straightened product in PBW form."""
        a = self._coerce(a)
        b = self._coerce(b)
        table = self.group.mult_table
        out: dict = {}
        for (i1, g1, j1), c1 in a.terms.items():
            for (i2, g2, j2), c2 in b.terms.items():
                base = c1 * c2
                g2inv = self.group.inv(g2)
                for (A, h, B), coef in self._straighten_ji(j1, i2).items():
                    mid = base * coef
                    # g1 * x^A = (g1 . x^A) * g1
                    for A2, ca in self.act_on_x_monomial(g1, A).items():
                        gh = table[g1][h]
                        lead = mid * ca
                        # y^B * g2 = g2 * (g2^-1 . y^B)
                        for B2, cb in self.act_on_y_monomial(g2inv, B).items():
                            key = (_add_deg(i1, A2), table[gh][g2], _add_deg(B2, j2))
                            s = out.get(key, ZERO) + lead * cb
                            if s:
                                out[key] = s
                            else:
                                out.pop(key, None)
        self._check_blowup(out)
        return PBWElement(self, out)

    def _check_blowup(self, terms: dict):
        limit = self.max_coeff_bits
        for coef in terms.values():
            if coef.den.bit_length() > limit or any(
                abs(c).bit_length() > limit for c in coef.coeffs
            ):
                raise CoefficientBlowup(
                    f"coefficient exceeds {limit} bits; raise max_coeff_bits"
                )

    # -- grading ----------------------------------------------------------

    def euler_element(self) -> PBWElement:
        """The deformed Euler element sum_i x_i y_i + dim/2 - sum_s kappa_s s."""
        if self._euler is None:
            self._euler = self.euler_central_part() + sum(
                (
                    self.monomial(
                        tuple(1 if k == i else 0 for k in range(self.dim)),
                        0,
                        tuple(1 if k == i else 0 for k in range(self.dim)),
                    )
                    for i in range(self.dim)
                ),
                self.zero(),
            )
        return self._euler

    def euler_central_part(self) -> PBWElement:
        """The degree-zero central summand dim/2 - sum_s kappa_s s, where
        kappa_s = 2c(s)/(1 - lambda_s^-1) and lambda_s is the eigenvalue on
        the coroot.  Equivalently 2c(s)/(1 - lambda) for the conormal
        eigenvalue; the two readings agree for real reflections."""
        out = self.scalar(Scalar.rational(self.dim) / 2)
        for r in self.reflections:
            out = out - self.g(r.index) * self.reflection_coefficient(r)
        return out

    def ad_euler(self, x: PBWElement) -> PBWElement:
        """Commutator with the Euler element; scales each PBW monomial by its degree."""
        e = self.euler_element()
        return self.multiply(e, x) - self.multiply(x, e)

    def reflection_coefficient(self, r: PseudoReflection) -> Scalar:
        """The Euler coefficient kappa_s = 2c(s)/(1 - lambda_s^-1)."""
        return (Scalar.rational(2) * self.c(r.index)) / (ONE - r.eigenvalue.inverse())

    def poly_trace(self, g: int, degree: int) -> Scalar:
        """Trace of g on the degree-n slice of the polynomial algebra A."""
        total = ZERO
        for mono in monomials(self.dim, degree):
            total = total + self.act_on_x_monomial(g, mono).get(mono, ZERO)
        return total

    # -- text form ---------------------------------------------------------

    def format_element(self, el: PBWElement) -> str:
        if not el.terms:
            return "0"
        chunks = []
        for (i, g, j), coef in el.items():
            factors = []
            for k, e in enumerate(i):
                if e:
                    factors.append(f"x{k + 1}" + (f"^{e}" if e > 1 else ""))
            if g != 0:
                factors.append(f"g{g}")
            for k, e in enumerate(j):
                if e:
                    factors.append(f"y{k + 1}" + (f"^{e}" if e > 1 else ""))
            negative = coef.is_rational and coef.as_fraction() < 0
            mag = -coef if negative else coef
            body = "*".join(factors)
            if not factors:
                body = str(mag)
            elif mag != ONE:
                body = f"{mag}*{body}"
            chunks.append((negative, body))
        neg, body = chunks[0]
        text = ("-" if neg else "") + body
        for neg, body in chunks[1:]:
            text += (" - " if neg else " + ") + body
        return text

    def parse_element(self, text: str) -> PBWElement:
        """Parse the textual element syntax, e.g. ``3/2*x1^2*g2*y1 + 1``.

        Factors may appear in any order; the expression is evaluated as a
        product in the algebra, so non-canonical words straighten themselves.
        """
        tokens = tokenize(text)
        if not tokens:
            raise ExprError("empty element expression")
        parser = _ElementParser(tokens, self)
        value = parser.parse_sum()
        if parser.pos != len(tokens):
            raise ExprError(f"trailing input in element expression {text!r}")
        return value


class _ElementParser:
    def __init__(self, tokens, algebra: CherednikAlgebra):
        self.tokens = tokens
        self.pos = 0
        self.algebra = algebra

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse_sum(self) -> PBWElement:
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
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

    def parse_product(self) -> PBWElement:
        acc = self.parse_power()
        while True:
            kind, text = self.peek()
            if (kind, text) == ("op", "*"):
                self.take()
                acc = acc * self.parse_power()
            elif (kind, text) == ("op", "/"):
                self.take()
                div = self.parse_power()
                acc = acc * _invert_scalar_element(div)
            else:
                return acc

    def parse_power(self) -> PBWElement:
        base = self.parse_atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, text = self.take()
            if kind != "int":
                raise ExprError("exponent must be an integer")
            k = int(text)
            if sign < 0:
                return _invert_scalar_element(base) ** k
            return base**k
        return base

    def parse_atom(self) -> PBWElement:
        alg = self.algebra
        kind, text = self.take()
        if kind == "int":
            return alg.scalar(int(text))
        if kind == "name":
            if text == "z":
                if alg.field_ell <= 1:
                    raise ExprError("z requires a cyclotomic coefficient field")
                return alg.scalar(Scalar.zeta(alg.field_ell))
            head, digits = text[0], text[1:]
            if head in "xyg" and digits.isdigit():
                idx = int(digits)
                if head == "x":
                    if not 1 <= idx <= alg.dim:
                        raise ExprError(f"x index out of range in {text!r}")
                    return alg.x(idx)
                if head == "y":
                    if not 1 <= idx <= alg.dim:
                        raise ExprError(f"y index out of range in {text!r}")
                    return alg.y(idx)
                if not 0 <= idx < len(alg.group):
                    raise ExprError(f"group index out of range in {text!r}")
                return alg.g(idx)
            raise ExprError(f"unknown symbol {text!r} in element expression")
        if (kind, text) == ("op", "("):
            inner = self.parse_sum()
            if self.take() != ("op", ")"):
                raise ExprError("missing closing parenthesis")
            return inner
        if (kind, text) == ("op", "-"):
            return -self.parse_atom()
        raise ExprError(f"unexpected token {text!r} in element expression")


def _data_field(alg: CherednikAlgebra) -> int:
    """Largest cyclotomic index carried by the algebra's defining data."""
    ells = {1}
    for mat in alg.group.matrices:
        ells |= {x.ell for row in mat for x in row}
    ells |= {r.eigenvalue.ell for r in alg.reflections}
    ells |= {v.ell for v in alg.c.values()}
    return max(ells)


def _invert_scalar_element(el: PBWElement) -> PBWElement:
    alg = el.algebra
    zero_key = (alg._zero_deg, 0, alg._zero_deg)
    if set(el.terms) != {zero_key}:
        raise ExprError("division is only defined by nonzero scalars")
    return alg.scalar(el.terms[zero_key].inverse())


def monomials(nvars: int, degree: int):
    """All exponent tuples of the given total degree, lexicographic order."""
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            yield (first,) + rest
