"""Degree-truncated category O: Verma modules with their module structure,
weight spaces, singular vectors, simple quotients, the highest-weight order,
blocks, and decomposition matrices.

A VermaSlice holds the degrees 0..N of A tensor W together with any
quotienting that has happened; quotients are tracked as reduced echelon
bases of the killed subspaces per degree, so module vectors in a quotient
are coordinates on the surviving (non-pivot) basis positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .groups import Irrep
from .pbw import CherednikAlgebra, PBWElement, monomials
from .scalars import Scalar, ZERO, ONE


class CutoffExceeded(RuntimeError):
    """A raising operator left the degree truncation."""


class NotScalarAction(ValueError):
    """The central Euler part does not act as a scalar on a candidate irrep."""


class InconsistentTruncation(RuntimeError):
    """The character system is unsolvable at this cutoff; increase it."""


# module vectors: {degree: dense coordinate list}


def mv_add(a: dict, b: dict) -> dict:
    out = {n: list(v) for n, v in a.items()}
    for n, v in b.items():
        if n in out:
            out[n] = [x + y for x, y in zip(out[n], v)]
        else:
            out[n] = list(v)
    return _mv_prune(out)


def mv_scale(a: dict, s) -> dict:
    s = s if isinstance(s, Scalar) else Scalar.rational(s)
    return _mv_prune({n: [x * s for x in v] for n, v in a.items()})


def mv_is_zero(a: dict) -> bool:
    return all(not x for v in a.values() for x in v)


def mv_eq(a: dict, b: dict) -> bool:
    return mv_is_zero(mv_add(a, mv_scale(b, -1)))


def _mv_prune(a: dict) -> dict:
    return {n: v for n, v in a.items() if any(v)}


class VermaSlice:
    """Degrees 0..cutoff of the standard module attached to an irrep, with
    stored generator actions and optional quotient bookkeeping."""

    def __init__(self, algebra: CherednikAlgebra, irrep: Irrep, cutoff: int):
        if cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        self.algebra = algebra
        self.irrep = irrep
        self.cutoff = cutoff
        self.c_value = c_scalar(algebra, irrep)
        self._monos = [list(monomials(algebra.dim, n)) for n in range(cutoff + 1)]
        self._mono_index = [
            {m: i for i, m in enumerate(level)} for level in self._monos
        ]
        # killed[n]: reduced echelon rows of the quotiented-away subspace
        self.killed = [([], []) for _ in range(cutoff + 1)]
        self.quotient_history: list[tuple[int, int]] = []
        self.stable_under_cutoff = True

    # -- bases -----------------------------------------------------------

    def basis(self, n: int):
        """Degree-n basis labels (monomial, irrep slot) of the ambient slice."""
        d = self.irrep.dim
        return [(m, k) for m in self._monos[n] for k in range(d)]

    def full_dim(self, n: int) -> int:
        return len(self._monos[n]) * self.irrep.dim

    def dim(self, n: int) -> int:
        return self.full_dim(n) - len(self.killed[n][0])

    @property
    def quotiented(self) -> bool:
        return any(rows for rows, _ in self.killed)

    def _pos(self, n: int, mono, k: int) -> int:
        return self._mono_index[n][mono] * self.irrep.dim + k

    def free_positions(self, n: int) -> list[int]:
        pivots = set(self.killed[n][1])
        return [p for p in range(self.full_dim(n)) if p not in pivots]

    # -- coordinate plumbing ----------------------------------------------

    def reduce(self, n: int, vec: list) -> list:
        rows, pivots = self.killed[n]
        return linalg.reduce_against(vec, rows, pivots) if rows else list(vec)

    def to_free(self, n: int, vec: list) -> list:
        reduced = self.reduce(n, vec)
        return [reduced[p] for p in self.free_positions(n)]

    def lift(self, n: int, freevec: list) -> list:
        out = [ZERO] * self.full_dim(n)
        for p, x in zip(self.free_positions(n), freevec):
            out[p] = x
        return out

    # -- raw generator actions (ambient coordinates) -----------------------

    def apply_x_full(self, i: int, n: int, vec: list) -> list:
        """Action of x_i (0-based) from degree n to n + 1."""
        if n + 1 > self.cutoff:
            raise CutoffExceeded(
                f"x-action leaves the truncation (degree {n} -> {n + 1} > {self.cutoff})"
            )
        out = [ZERO] * self.full_dim(n + 1)
        d = self.irrep.dim
        for mi, mono in enumerate(self._monos[n]):
            up = list(mono)
            up[i] += 1
            tgt = self._mono_index[n + 1][tuple(up)] * d
            src = mi * d
            for k in range(d):
                if vec[src + k]:
                    out[tgt + k] = out[tgt + k] + vec[src + k]
        return out

    def apply_y_full(self, i: int, n: int, vec: list) -> list:
        """Action of y_i (0-based) from degree n to n - 1, via straightening."""
        if n == 0:
            return []
        alg = self.algebra
        d = self.irrep.dim
        ydeg = tuple(1 if t == i else 0 for t in range(alg.dim))
        out = [ZERO] * self.full_dim(n - 1)
        for mi, mono in enumerate(self._monos[n]):
            src = mi * d
            if not any(vec[src + k] for k in range(d)):
                continue
            for (a_mono, h, b_deg), coef in alg._straighten_ji(ydeg, mono).items():
                if any(b_deg):
                    continue
                tgt = self._mono_index[n - 1][a_mono] * d
                rho = self.irrep.matrix(h)
                for k in range(d):
                    v = vec[src + k]
                    if not v:
                        continue
                    vc = v * coef
                    for k2 in range(d):
                        if rho[k2][k]:
                            out[tgt + k2] = out[tgt + k2] + vc * rho[k2][k]
        return out

    def apply_g_full(self, g: int, n: int, vec: list) -> list:
        alg = self.algebra
        d = self.irrep.dim
        rho = self.irrep.matrix(g)
        out = [ZERO] * self.full_dim(n)
        for mi, mono in enumerate(self._monos[n]):
            src = mi * d
            if not any(vec[src + k] for k in range(d)):
                continue
            for a_mono, coef in alg.act_on_x_monomial(g, mono).items():
                tgt = self._mono_index[n][a_mono] * d
                for k in range(d):
                    v = vec[src + k]
                    if not v:
                        continue
                    vc = v * coef
                    for k2 in range(d):
                        if rho[k2][k]:
                            out[tgt + k2] = out[tgt + k2] + vc * rho[k2][k]
        return out

    def apply_term_full(self, term, coef, n: int, vec: list):
        """One PBW monomial acting from degree n; returns (degree, vector)."""
        ideg, g, jdeg = term
        alg = self.algebra
        d = self.irrep.dim
        jtot = sum(jdeg)
        target = n - jtot + sum(ideg)
        if target > self.cutoff:
            raise CutoffExceeded(
                f"term raises degree {n} beyond the truncation {self.cutoff}"
            )
        if target < 0 or jtot > n:
            return target, []
        out = [ZERO] * self.full_dim(target)
        for mi, mono in enumerate(self._monos[n]):
            src = mi * d
            if not any(vec[src + k] for k in range(d)):
                continue
            for (a_mono, h, b_deg), scoef in alg._straighten_ji(jdeg, mono).items():
                if any(b_deg):
                    continue
                gh = alg.group.mul(g, h)
                rho = self.irrep.matrix(gh)
                for a2, ca in alg.act_on_x_monomial(g, a_mono).items():
                    tgt_mono = tuple(a + b for a, b in zip(ideg, a2))
                    tgt = self._mono_index[target][tgt_mono] * d
                    cc = coef * scoef * ca
                    for k in range(d):
                        v = vec[src + k]
                        if not v:
                            continue
                        vc = v * cc
                        for k2 in range(d):
                            if rho[k2][k]:
                                out[tgt + k2] = out[tgt + k2] + vc * rho[k2][k]
        return target, out

    # -- public module action ----------------------------------------------

    def apply_element(self, a: PBWElement, mv: dict) -> dict:
        """Module action of a PBW element on a vector in slice coordinates."""
        if a.algebra is not self.algebra:
            raise ValueError("element belongs to a different algebra")
        acc: dict[int, list] = {}
        for n, freevec in mv.items():
            vec = self.lift(n, freevec) if self.quotiented else list(freevec)
            for term, coef in a.terms.items():
                tgt, img = self.apply_term_full(term, coef, n, vec)
                if not img or not any(img):
                    continue
                if tgt in acc:
                    acc[tgt] = [x + y for x, y in zip(acc[tgt], img)]
                else:
                    acc[tgt] = img
        if self.quotiented:
            acc = {n: self.to_free(n, v) for n, v in acc.items()}
        return _mv_prune(acc)

    def basis_vector(self, n: int, index: int) -> dict:
        vec = [ZERO] * self.dim(n)
        vec[index] = ONE
        return {n: vec}

    # -- quotienting --------------------------------------------------------

    def kill_submodule(self, n: int, seed_vectors: list):
        """Quotient by the submodule generated inside the truncation by the
        given degree-n vectors (ambient coordinates).

        The seeds are closed under the group action, then pushed upward with
        the raising operators level by level; the group closure is preserved
        along the way because g . x_i v lies in sum_j x_j (G . v).
        """
        group = self.algebra.group
        span_rows: list = []
        span_pivots: list = []
        for v in seed_vectors:
            for g in range(len(group)):
                linalg.extend_echelon(
                    span_rows, span_pivots, self.apply_g_full(g, n, v)
                )
        added = 0
        current = span_rows
        for m in range(n, self.cutoff + 1):
            if m > n:
                nxt_rows: list = []
                nxt_pivots: list = []
                for v in current:
                    for i in range(self.algebra.dim):
                        linalg.extend_echelon(
                            nxt_rows, nxt_pivots, self.apply_x_full(i, m - 1, v)
                        )
                current = nxt_rows
            if not current:
                break
            krows, kpivots = self.killed[m]
            for v in current:
                if linalg.extend_echelon(krows, kpivots, list(v)):
                    added += 1
        self.quotient_history.append((n, added))

    # -- characters ----------------------------------------------------------

    def trace(self, g: int, n: int) -> Scalar:
        """Trace of the group element g on the degree-n quotient slice."""
        amb = self.algebra.poly_trace(g, n) * self.irrep.character[g]
        rows, pivots = self.killed[n]
        if not rows:
            return amb
        killed_tr = ZERO
        for row, p in zip(rows, pivots):
            killed_tr = killed_tr + self.apply_g_full(g, n, row)[p]
        return amb - killed_tr

    def graded_character(self) -> "GradedCharacter":
        alg = self.algebra
        if not alg.irreps:
            raise ValueError("the algebra carries no irrep table")
        group = alg.group
        data: dict[int, dict[str, int]] = {}
        for n in range(self.cutoff + 1):
            traces = [self.trace(g, n) for g in range(len(group))]
            level: dict[str, int] = {}
            for irr in alg.irreps:
                acc = ZERO
                for g in range(len(group)):
                    acc = acc + irr.character[group.inv(g)] * traces[g]
                mult = acc / len(group)
                if mult:
                    if not mult.is_integer() or mult.as_int() < 0:
                        raise InconsistentTruncation(
                            f"non-integral multiplicity {mult} at degree {n}"
                        )
                    level[irr.label] = mult.as_int()
            data[n] = level
        return GradedCharacter(data)

    def weights(self) -> list:
        """The occurring generalized eigenvalues of the Euler element."""
        return [self.c_value + n for n in range(self.cutoff + 1) if self.dim(n)]


@dataclass
class GradedCharacter:
    """Map degree -> irrep label -> multiplicity."""

    data: dict = field(default_factory=dict)

    def multiplicity(self, degree: int, label: str) -> int:
        return self.data.get(degree, {}).get(label, 0)

    def degrees(self):
        return sorted(self.data)

    def rows(self):
        for n in sorted(self.data):
            for label in sorted(self.data[n]):
                if self.data[n][label]:
                    yield n, label, self.data[n][label]

    def dimension(self, degree: int, irreps) -> int:
        dims = {irr.label: irr.dim for irr in irreps}
        return sum(m * dims[lbl] for lbl, m in self.data.get(degree, {}).items())

    def __eq__(self, other):
        if not isinstance(other, GradedCharacter):
            return NotImplemented
        return list(self.rows()) == list(other.rows())


def c_scalar(algebra: CherednikAlgebra, irrep: Irrep) -> Scalar:
    """The scalar by which the central Euler part acts on the irrep,
    verified against the direct matrix action."""
    total = ZERO
    for r in algebra.reflections:
        total = total + algebra.reflection_coefficient(r) * irrep.character[r.index]
    value = Scalar.rational(algebra.dim) / 2 - total / irrep.dim
    # the matrix of the central part must be value * Id
    d = irrep.dim
    mat = [[ZERO] * d for _ in range(d)]
    for i in range(d):
        mat[i][i] = Scalar.rational(algebra.dim) / 2
    for r in algebra.reflections:
        coef = algebra.reflection_coefficient(r)
        rho = irrep.matrix(r.index)
        for i in range(d):
            for j in range(d):
                if rho[i][j]:
                    mat[i][j] = mat[i][j] - coef * rho[i][j]
    for i in range(d):
        for j in range(d):
            expected = value if i == j else ZERO
            if mat[i][j] != expected:
                raise NotScalarAction(
                    f"central Euler part is not scalar on irrep {irrep.label!r}"
                )
    return value


def verma_action(slice_: VermaSlice, a: PBWElement, mv: dict) -> dict:
    """Evaluate a PBW element on a module vector; linear in the vector."""
    return slice_.apply_element(a, mv)


# ---------------------------------------------------------------------------
# Dunkl operator route (independent oracle for the lowering action)
# ---------------------------------------------------------------------------


def _subst_dual(matrix_inv, mono: tuple) -> dict:
    """Expand the dual substitution x_b -> sum_i M(g^-1)[b][i] x_i on x^mono."""
    poly = {tuple(0 for _ in mono): ONE}
    for b, e in enumerate(mono):
        for _ in range(e):
            nxt: dict = {}
            for m, c in poly.items():
                for i, entry in enumerate(matrix_inv[b]):
                    if entry:
                        up = list(m)
                        up[i] += 1
                        key = tuple(up)
                        s = nxt.get(key, ZERO) + c * entry
                        if s:
                            nxt[key] = s
                        else:
                            nxt.pop(key, None)
            poly = nxt
    return poly


def _poly_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, ZERO) - c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _divide_by_linear(poly: dict, alpha) -> dict:
    """Exact division of a polynomial by the linear form sum alpha_i x_i."""
    p = next(i for i, a in enumerate(alpha) if a)
    lead_inv = alpha[p].inverse()
    quotient: dict = {}
    rest = dict(poly)
    while rest:
        top_deg = max(m[p] for m in rest)
        if top_deg == 0:
            if any(rest.values()):
                raise ArithmeticError("polynomial is not divisible by the form")
            break
        layer = {m: c for m, c in rest.items() if m[p] == top_deg}
        for m, c in layer.items():
            down = list(m)
            down[p] -= 1
            q = c * lead_inv
            key = tuple(down)
            s = quotient.get(key, ZERO) + q
            if s:
                quotient[key] = s
            else:
                quotient.pop(key, None)
            # subtract q * x^down * alpha from rest
            for i, a in enumerate(alpha):
                if a:
                    up = list(down)
                    up[i] += 1
                    k2 = tuple(up)
                    s2 = rest.get(k2, ZERO) - q * a
                    if s2:
                        rest[k2] = s2
                    else:
                        rest.pop(k2, None)
    return quotient


def dunkl_action(slice_: VermaSlice, direction, mv: dict) -> dict:
    """Divided-difference evaluation of the lowering operator attached to a
    vector in h on polynomial-tensor-irrep vectors.

    This is an oracle route: it never consults the straightening caches.
    """
    if slice_.quotiented:
        raise ValueError("the Dunkl route is defined on genuine Verma slices only")
    alg = slice_.algebra
    dim = alg.dim
    if isinstance(direction, int):
        coords = [ZERO] * dim
        coords[direction - 1] = ONE
    else:
        coords = [
            x if isinstance(x, Scalar) else Scalar.rational(x) for x in direction
        ]
    d = slice_.irrep.dim
    refl = [
        (
            r.index,
            -alg.reflection_coefficient(r)
            * sum((coords[i] * r.covector[i] for i in range(dim)), ZERO),
            r.covector,
        )
        for r in alg.reflections
    ]
    out: dict[int, list] = {}
    for n, freevec in mv.items():
        if n == 0:
            continue
        tgt = out.setdefault(n - 1, [ZERO] * slice_.full_dim(n - 1))
        for mi, mono in enumerate(slice_._monos[n]):
            src = mi * d
            if not any(freevec[src + k] for k in range(d)):
                continue
            # derivative part
            deriv: dict = {}
            for i in range(dim):
                if mono[i] and coords[i]:
                    down = list(mono)
                    down[i] -= 1
                    key = tuple(down)
                    deriv[key] = deriv.get(key, ZERO) + coords[i] * mono[i]
            for key, dcoef in deriv.items():
                base = slice_._mono_index[n - 1][key] * d
                for k in range(d):
                    v = freevec[src + k]
                    if v:
                        tgt[base + k] = tgt[base + k] + v * dcoef
            # reflection parts
            for s_idx, weight, alpha in refl:
                if not weight:
                    continue
                rho = slice_.irrep.matrix(s_idx)
                moved = _subst_dual(
                    alg.group.matrices[alg.group.inv(s_idx)], mono
                )
                diff = _poly_sub({mono: ONE}, moved)
                for key, qcoef in _divide_by_linear(diff, alpha).items():
                    base = slice_._mono_index[n - 1][key] * d
                    wq = weight * qcoef
                    for k in range(d):
                        v = freevec[src + k]
                        if not v:
                            continue
                        vw = v * wq
                        for k2 in range(d):
                            if rho[k2][k]:
                                tgt[base + k2] = tgt[base + k2] + vw * rho[k2][k]
    return _mv_prune(out)


# ---------------------------------------------------------------------------
# singular vectors and simple quotients
# ---------------------------------------------------------------------------


@dataclass
class SingularSpace:
    """Joint kernel of the lowering operators at one degree, in reduced
    echelon form, together with its isotypic pieces."""

    degree: int
    vectors: list
    components: dict

    @property
    def dimension(self) -> int:
        return len(self.vectors)


def _kernel_at_degree(slice_: VermaSlice, n: int) -> list:
    if n == 0:
        return [list(row) for row in linalg.identity(slice_.dim(0))]
    cols = slice_.dim(n)
    if cols == 0:
        return []
    stacked = []
    images = []
    for i in range(slice_.algebra.dim):
        col_imgs = []
        for j in range(cols):
            vec = slice_.lift(n, [ONE if t == j else ZERO for t in range(cols)])
            img = slice_.apply_y_full(i, n, vec)
            col_imgs.append(slice_.to_free(n - 1, img))
        images.append(col_imgs)
    rows_out = slice_.dim(n - 1)
    for i in range(slice_.algebra.dim):
        for r in range(rows_out):
            stacked.append([images[i][j][r] for j in range(cols)])
    if not stacked:
        return [list(row) for row in linalg.identity(cols)]
    return linalg.nullspace(stacked)


def singular_vectors(slice_: VermaSlice, n: int) -> SingularSpace:
    """Deterministic basis of the degree-n singular space with isotypic labels."""
    if n > slice_.cutoff:
        raise CutoffExceeded(f"degree {n} exceeds the cutoff {slice_.cutoff}")
    alg = slice_.algebra
    group = alg.group
    kernel = _kernel_at_degree(slice_, n)
    components: dict[str, list] = {}
    if kernel and alg.irreps:
        lifted = [slice_.lift(n, v) for v in kernel]
        for irr in alg.irreps:
            weight = Scalar.rational(irr.dim) / len(group)
            projected = []
            for v in lifted:
                acc = [ZERO] * slice_.full_dim(n)
                for g in range(len(group)):
                    coef = weight * irr.character[group.inv(g)]
                    if not coef:
                        continue
                    img = slice_.apply_g_full(g, n, v)
                    acc = [x + coef * y for x, y in zip(acc, img)]
                projected.append(slice_.to_free(n, acc))
            basis = linalg.rref(projected)[0]
            if basis:
                components[irr.label] = basis
    return SingularSpace(n, kernel, components)


def simple_quotient_slice(algebra: CherednikAlgebra, irrep: Irrep, cutoff: int):
    """Iteratively quotient the Verma slice by submodules generated by
    positive-degree singular vectors until a clean pass; returns the
    truncated simple module and its graded character."""
    slice_ = VermaSlice(algebra, irrep, cutoff)
    while True:
        found = False
        for n in range(1, cutoff + 1):
            kernel = _kernel_at_degree(slice_, n)
            if kernel:
                found = True
                slice_.kill_submodule(n, [slice_.lift(n, v) for v in kernel])
        if not found:
            break
    slice_.stable_under_cutoff = True
    return slice_, slice_.graded_character()


def verma_character(algebra: CherednikAlgebra, irrep: Irrep, cutoff: int) -> GradedCharacter:
    """Graded character of the untruncated-action Verma slice."""
    return VermaSlice(algebra, irrep, cutoff).graded_character()


def hom_dim(irrep: Irrep, slice_: VermaSlice) -> int:
    """Multiplicity of the irrep in the singular vectors across all degrees,
    i.e. the truncated dimension of Hom from its Verma module."""
    total = 0
    for n in range(slice_.cutoff + 1):
        space = singular_vectors(slice_, n)
        comp = space.components.get(irrep.label)
        if comp:
            if len(comp) % irrep.dim:
                raise InconsistentTruncation(
                    f"isotypic piece of {irrep.label!r} has broken dimension"
                )
            total += len(comp) // irrep.dim
    return total


# ---------------------------------------------------------------------------
# highest-weight order, blocks, decomposition matrices
# ---------------------------------------------------------------------------


@dataclass
class OrderGraph:
    """Directed linkage graph: an edge (W, E) means c(E) - c(W) is a strictly
    positive rational integer."""

    labels: list
    c_values: dict
    edges: list

    def successors(self, label: str):
        return [e for w, e in self.edges if w == label]


def _integer_difference(a: Scalar, b: Scalar):
    diff = a - b
    if diff.is_integer():
        return diff.as_int()
    return None


def highest_weight_order(algebra: CherednikAlgebra, irreps=None) -> OrderGraph:
    irreps = list(irreps) if irreps is not None else list(algebra.irreps)
    c_values = {irr.label: c_scalar(algebra, irr) for irr in irreps}
    edges = []
    for w in irreps:
        for e in irreps:
            diff = _integer_difference(c_values[e.label], c_values[w.label])
            if diff is not None and diff > 0:
                edges.append((w.label, e.label))
    return OrderGraph([i.label for i in irreps], c_values, edges)


def blocks(algebra: CherednikAlgebra, irreps=None) -> list:
    """Partition of the irrep labels by the symmetrized integer-linkage graph."""
    irreps = list(irreps) if irreps is not None else list(algebra.irreps)
    c_values = {irr.label: c_scalar(algebra, irr) for irr in irreps}
    labels = [i.label for i in irreps]
    parent = {lbl: lbl for lbl in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in labels:
        for b in labels:
            diff = _integer_difference(c_values[a], c_values[b])
            if diff is not None and diff != 0:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
    groups: dict[str, list] = {}
    for lbl in labels:
        groups.setdefault(find(lbl), []).append(lbl)
    order = {lbl: i for i, lbl in enumerate(labels)}
    out = sorted(groups.values(), key=lambda blk: min(order[x] for x in blk))
    return [sorted(blk, key=lambda x: order[x]) for blk in out]


def decompose_verma_character(
    algebra: CherednikAlgebra,
    irrep: Irrep,
    cutoff: int,
    simple_characters: dict | None = None,
) -> dict:
    """Multiplicities of the truncated simple modules in the Verma character,
    solved degree by degree along the highest-weight order."""
    irreps = algebra.irreps
    if not irreps:
        raise ValueError("the algebra carries no irrep table")
    c_values = {irr.label: c_scalar(algebra, irr) for irr in irreps}
    shifts = {}
    for irr in irreps:
        diff = _integer_difference(c_values[irr.label], c_values[irrep.label])
        if diff is not None and 0 <= diff <= cutoff:
            shifts[irr.label] = diff
    if simple_characters is None:
        simple_characters = {}
        for irr in irreps:
            if irr.label in shifts:
                _, ch = simple_quotient_slice(algebra, irr, cutoff)
                simple_characters[irr.label] = ch
    residual = {
        n: dict(level)
        for n, level in verma_character(algebra, irrep, cutoff).data.items()
    }
    mults = {irr.label: 0 for irr in irreps}
    for d in range(cutoff + 1):
        level = residual.setdefault(d, {})
        for label, shift in sorted(shifts.items(), key=lambda kv: kv[0]):
            if shift != d:
                continue
            m = level.get(label, 0)
            if m < 0:
                raise InconsistentTruncation(
                    f"negative multiplicity for {label!r} at degree {d}"
                )
            if m == 0:
                continue
            mults[label] = m
            simple = simple_characters[label]
            for n2 in range(d, cutoff + 1):
                lvl2 = residual.setdefault(n2, {})
                for lbl2, mult2 in simple.data.get(n2 - d, {}).items():
                    lvl2[lbl2] = lvl2.get(lbl2, 0) - m * mult2
        if any(level.get(lbl, 0) for lbl in level):
            raise InconsistentTruncation(
                f"characters do not cancel at degree {d}; cutoff {cutoff} too small"
            )
    return mults


def decomposition_matrix(algebra: CherednikAlgebra, cutoff: int):
    """Rows indexed by Verma labels, columns by simple labels."""
    irreps = algebra.irreps
    simple_characters = {}
    for irr in irreps:
        _, ch = simple_quotient_slice(algebra, irr, cutoff)
        simple_characters[irr.label] = ch
    matrix = {}
    for irr in irreps:
        matrix[irr.label] = decompose_verma_character(
            algebra, irr, cutoff, simple_characters
        )
    return matrix
