"""Level-m Banach completions of the algebra: weighted Gauss norms, the
lattice condition selecting the lowering weight r(m), weight-space
decompositions of norm-truncated elements, analytic Verma slices with
operator-norm certificates, and cross-level compatibility of families.

Norms are never materialized as real numbers; everything is an integer
exponent of the uniformizer, which is the prime itself (the coefficient
field is unramified for every supported group family).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .category_o import VermaSlice, mv_eq, mv_scale, verma_action
from .groups import Irrep
from .pbw import CherednikAlgebra, PBWElement
from .scalars import INF, PadicContext, Scalar, ZERO, ONE, val


class TailDominated(ArithmeticError):
    """Every stored term sits at or beyond the tail bound; the norm is only
    known to lie in [tau, infinity).  Increase the precision."""

    def __init__(self, tau):
        super().__init__(f"norm is tail-dominated: only >= {tau} is known")
        self.tau = tau


class LatticeViolation(RuntimeError):
    """A lattice generator product escapes the unit ball."""

    def __init__(self, violations):
        first = violations[0]
        super().__init__(
            f"lattice check failed: {first[0]} has norm exponent {first[1]}"
        )
        self.violations = violations


class UnboundedGenerator(RuntimeError):
    """A generator has negative operator-norm exponent on the unit lattice."""


class IncompatibleFamily(RuntimeError):
    """A cross-level family fails the transition compatibility check."""

    def __init__(self, level: int):
        super().__init__(f"family is incompatible at level {level}")
        self.level = level


@dataclass(frozen=True)
class LevelParams:
    """One Banach level: the polynomial weight m, the derived lowering
    weight r (strictly increasing in m), and the p-adic context."""

    level: int
    r: int
    ctx: PadicContext

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be >= 0")
        if self.r < 1:
            raise ValueError("the lowering weight r must be a positive integer")


def term_weight(coeff: Scalar, term, params_level: int, params_r: int, ctx) -> float:
    """Weighted valuation v_p(coeff) - m|I| - r|J| of one stored term.

    When the coefficient valuation exhausts the working precision this is a
    lower bound, which is the conservative direction for dropping tails."""
    v = val(coeff, ctx)
    return v.value - params_level * sum(term[0]) - params_r * sum(term[2])


class BanachElement:
    """A norm-truncated element: exact stored PBW terms at one level, plus a
    tail bound tau meaning every omitted term has weighted valuation >= tau."""

    __slots__ = ("algebra", "params", "terms", "tau")

    def __init__(self, algebra, params: LevelParams, terms: dict, tau: int):
        self.algebra = algebra
        self.params = params
        self.terms = terms
        self.tau = tau

    @classmethod
    def from_pbw(
        cls, element: PBWElement, params: LevelParams, tau: int | None = None
    ) -> "BanachElement":
        if tau is None:
            tau = params.ctx.precision
        if tau == INF:
            raise ValueError("the tail bound must be finite")
        kept = {}
        for term, coeff in element.terms.items():
            w = term_weight(coeff, term, params.level, params.r, params.ctx)
            if w < tau:
                kept[term] = coeff
        return cls(element.algebra, params, kept, tau)

    def weights(self) -> dict:
        """Weighted valuation of every stored term."""
        return {
            term: term_weight(coeff, term, self.params.level, self.params.r, self.params.ctx)
            for term, coeff in self.terms.items()
        }

    def to_pbw(self) -> PBWElement:
        return PBWElement(self.algebra, dict(self.terms))

    def min_weight(self) -> float:
        weights = self.weights()
        return min(weights.values()) if weights else INF

    def __eq__(self, other):
        if not isinstance(other, BanachElement):
            return NotImplemented
        return (
            self.params == other.params
            and self.terms == other.terms
            and self.tau == other.tau
        )

    def __mul__(self, other):
        if not isinstance(other, BanachElement):
            return NotImplemented
        if self.params != other.params:
            raise ValueError("operands live at different levels")
        prod = self.to_pbw() * other.to_pbw()
        # conservative tail rule: tau(ab) = min(tau_a + minw(b), tau_b + minw(a))
        tau = min(self.tau + other.min_weight(), other.tau + self.min_weight())
        if tau == INF:  # one factor is exactly zero
            tau = min(self.tau, other.tau)
        return BanachElement.from_pbw(prod, self.params, int(tau))

    def __add__(self, other):
        if not isinstance(other, BanachElement):
            return NotImplemented
        if self.params != other.params:
            raise ValueError("operands live at different levels")
        return BanachElement.from_pbw(
            self.to_pbw() + other.to_pbw(), self.params, min(self.tau, other.tau)
        )

    def __repr__(self):
        return f"<Banach level={self.params.level} tau={self.tau} {self.to_pbw()}>"


def gauss_norm(x: BanachElement) -> int:
    """The norm exponent: min over stored terms of the weighted valuation.
    Raises TailDominated when no stored term certifies a value below tau,
    including when the minimal coefficient valuation exhausted the working
    precision (the remedy is the same: increase the precision)."""
    weights = x.weights()
    if not weights:
        raise TailDominated(x.tau)
    term, mval = min(weights.items(), key=lambda kv: (kv[1], kv[0]))
    if mval >= x.tau:
        raise TailDominated(x.tau)
    if not val(x.terms[term], x.params.ctx).exact:
        raise TailDominated(x.tau)
    return int(mval)


def rho_c(algebra: CherednikAlgebra, ctx: PadicContext) -> int:
    """Valuation defect of the Euler reflection coefficients: the amount by
    which r(m) must exceed m so the weighted Dunkl data is integral."""
    worst = INF
    for r in algebra.reflections:
        coeff = Scalar.rational(2) * algebra.c(r.index) / (ONE - r.eigenvalue)
        v = val(coeff, ctx)
        worst = min(worst, v.value)
    if worst == INF:
        return 0
    return max(0, -int(worst))


@dataclass
class LatticeReport:
    """Outcome of the unit-ball stability check for one level."""

    level: int
    r: int
    passed: bool
    violations: list = field(default_factory=list)

    def ensure(self):
        if not self.passed:
            raise LatticeViolation(self.violations)
        return self


def lattice_check(algebra: CherednikAlgebra, ctx: PadicContext, m: int, r: int) -> LatticeReport:
    """Verify that all pairwise products and commutators of the weighted
    generators p^m x_j, g, p^r y_i stay in the unit ball."""
    p = Scalar.rational(ctx.prime)
    gens = []
    for i in range(algebra.dim):
        gens.append((f"p^{m}*x{i + 1}", algebra.x(i + 1) * p**m))
    for g in range(len(algebra.group)):
        gens.append((f"g{g}", algebra.g(g)))
    for i in range(algebra.dim):
        gens.append((f"p^{r}*y{i + 1}", algebra.y(i + 1) * p**r))

    def min_weight(el: PBWElement) -> float:
        worst = INF
        for term, coeff in el.terms.items():
            worst = min(worst, term_weight(coeff, term, m, r, ctx))
        return worst

    violations = []
    for name_a, a in gens:
        for name_b, b in gens:
            prod = a * b
            w = min_weight(prod)
            if w < 0:
                violations.append((f"{name_a} * {name_b}", int(w)))
            comm = prod - b * a
            w = min_weight(comm)
            if w < 0:
                violations.append((f"[{name_a}, {name_b}]", int(w)))
    return LatticeReport(m, r, not violations, violations)


def choose_r(
    algebra: CherednikAlgebra,
    ctx: PadicContext,
    m: int,
    prev_r: int | None = None,
) -> int:
    """The lowering weight for level m: max(r(m-1) + 1, m + rho_c), bumped
    until the lattice check passes."""
    if m < 0:
        raise ValueError("level must be >= 0")
    if prev_r is None:
        prev_r = choose_r(algebra, ctx, m - 1) if m > 0 else 0
    r = max(prev_r + 1, m + rho_c(algebra, ctx), 1)
    while not lattice_check(algebra, ctx, m, r).passed:
        r += 1
    return r


def level_tower(algebra: CherednikAlgebra, ctx: PadicContext, top: int) -> list:
    """LevelParams for levels 0..top with a strictly increasing r sequence."""
    out = []
    prev = 0
    for m in range(top + 1):
        r = choose_r(algebra, ctx, m, prev_r=prev if m > 0 else None)
        out.append(LevelParams(m, r, ctx))
        prev = r
    return out


@dataclass
class WeightDecomposition:
    """Components of a truncated element by inner degree |I| - |J|."""

    components: dict
    weights: tuple

    def resummed(self) -> BanachElement:
        parts = list(self.components.values())
        if not parts:
            raise ValueError("empty decomposition")
        acc = parts[0]
        for extra in parts[1:]:
            acc = BanachElement(
                acc.algebra,
                acc.params,
                {**acc.terms, **extra.terms},
                min(acc.tau, extra.tau),
            )
        return acc


def weight_decompose_banach(x: BanachElement) -> WeightDecomposition:
    """Collect stored terms by weight; each component keeps the level and
    tail bound, and its norm exponent is at least the whole element's."""
    buckets: dict[int, dict] = {}
    for term, coeff in x.terms.items():
        n = sum(term[0]) - sum(term[2])
        buckets.setdefault(n, {})[term] = coeff
    components = {
        n: BanachElement(x.algebra, x.params, terms, x.tau)
        for n, terms in sorted(buckets.items())
    }
    return WeightDecomposition(components, tuple(sorted(buckets)))


def transition(x: BanachElement, target: LevelParams) -> BanachElement:
    """Identity on coefficients from level m+1 down to level m; the tail
    bound carries over because per-term weights only grow downward."""
    if target.ctx != x.params.ctx:
        raise ValueError("transition must stay within one p-adic context")
    if target.level != x.params.level - 1:
        raise ValueError(
            f"transition maps level {x.params.level} to {x.params.level - 1}, "
            f"not {target.level}"
        )
    if target.r > x.params.r:
        raise ValueError("the lowering weights must decrease with the level")
    return BanachElement.from_pbw(x.to_pbw(), target, x.tau)


@dataclass
class CoadmissibleReport:
    passed: bool
    failing_level: int | None = None

    def ensure(self):
        if not self.passed:
            raise IncompatibleFamily(self.failing_level)
        return self


def coadmissible_check(family) -> CoadmissibleReport:
    """Check that consecutive members match under the transition maps; the
    family then represents one element of the inverse-limit algebra."""
    members = sorted(family, key=lambda x: x.params.level)
    for low, high in zip(members, members[1:]):
        if high.params.level != low.params.level + 1:
            raise ValueError("family levels must be consecutive")
        moved = transition(high, low.params)
        if moved.terms != low.terms:
            return CoadmissibleReport(False, high.params.level)
    return CoadmissibleReport(True)


@dataclass
class AnalyticVermaSlice:
    """A Verma slice with level norms: per-degree unit lattices are spanned
    by p^(m n) times the monomial basis, generator operator-norm exponents
    are certified nonnegative, and the finite-weight vectors recover the
    algebraic slice."""

    slice: VermaSlice
    params: LevelParams
    generator_norms: dict
    ws_recovered: bool

    def degree_dims(self) -> list:
        return [self.slice.dim(n) for n in range(self.slice.cutoff + 1)]


def analytic_verma_slice(
    algebra: CherednikAlgebra,
    irrep: Irrep,
    params: LevelParams,
    cutoff: int,
    check_lattice: bool = True,
) -> AnalyticVermaSlice:
    if check_lattice:
        lattice_check(algebra, params.ctx, params.level, params.r).ensure()
    slice_ = VermaSlice(algebra, irrep, cutoff)
    ctx = params.ctx
    m = params.level

    def column_exponent(vec, degree: int) -> float:
        worst = INF
        for x in vec:
            if x:
                v = val(x, ctx)
                worst = min(worst, v.value - m * degree)
        return worst

    norms: dict[str, float] = {}

    def record(name: str, exponent: float):
        norms[name] = min(norms.get(name, INF), exponent)

    for n in range(cutoff + 1):
        dim_n = slice_.full_dim(n)
        for j in range(dim_n):
            unit = [ONE if t == j else ZERO for t in range(dim_n)]
            src_exp = -m * n
            if n + 1 <= cutoff:
                for i in range(algebra.dim):
                    img = slice_.apply_x_full(i, n, unit)
                    img = [x * Scalar.rational(ctx.prime) ** m for x in img]
                    record(
                        f"p^{m}*x{i + 1}", column_exponent(img, n + 1) - src_exp
                    )
            if n > 0:
                for i in range(algebra.dim):
                    img = slice_.apply_y_full(i, n, unit)
                    img = [x * Scalar.rational(ctx.prime) ** params.r for x in img]
                    record(
                        f"p^{params.r}*y{i + 1}", column_exponent(img, n - 1) - src_exp
                    )
            for g in range(len(algebra.group)):
                img = slice_.apply_g_full(g, n, unit)
                record(f"g{g}", column_exponent(img, n) - src_exp)

    offenders = {k: v for k, v in norms.items() if v < 0}
    if offenders:
        name, exp = sorted(offenders.items())[0]
        raise UnboundedGenerator(
            f"generator {name} has operator-norm exponent {exp}; "
            "the level weights are misconfigured"
        )

    euler = algebra.euler_element()
    recovered = True
    for n in range(cutoff + 1):
        for j in range(slice_.dim(n)):
            base = slice_.basis_vector(n, j)
            image = verma_action(slice_, euler, base)
            if not mv_eq(image, mv_scale(base, slice_.c_value + n)):
                recovered = False
    generator_norms = {k: (int(v) if v != INF else 0) for k, v in norms.items()}
    return AnalyticVermaSlice(slice_, params, generator_norms, recovered)
