"""Finite matrix groups acting on K^n, their pseudo-reflections with
eigen-data, reflection functions, and validated irreducible representations.

Group elements are integral matrices over the exact coefficient field; a
pseudo-reflection is an element g with rank(g - 1) = 1, carrying its
nontrivial eigenvalue, the linear form cutting its fixed hyperplane, and
the dual eigenvector normalized so the pairing equals 2.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .scalars import Scalar, ZERO, ONE, parse_scalar, ExprError

Matrix = tuple  # tuple of row tuples of Scalar


class CapExceeded(RuntimeError):
    """Closure enumeration exceeded the configured size cap."""


class NonIntegralEntry(ValueError):
    """A generator matrix has an entry outside the ring of integers."""


class EigenvalueNotInField(ValueError):
    """A reflection eigenvalue does not lie in the declared coefficient field."""


class NotHomomorphism(ValueError):
    """Candidate representation matrices do not respect the group law."""


class NotIrreducible(ValueError):
    """Candidate representation has character norm > 1."""


def _freeze(rows) -> Matrix:
    return tuple(tuple(Scalar.rational(x) if not isinstance(x, Scalar) else x for x in row) for row in rows)


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    m = len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ZERO
            for k in range(len(b)):
                if a[i][k] and b[k][j]:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _mat_identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def _is_integral(mat: Matrix) -> bool:
    return all(x.den == 1 for row in mat for x in row)


def _is_invertible(mat: Matrix) -> bool:
    return linalg.rank([list(row) for row in mat]) == len(mat)


class GroupAction:
    """A finite group of invertible integral matrices with its multiplication
    table, inverse table, and conjugacy classes.  Index 0 is the identity."""

    def __init__(self, dimension, matrices, mult_table, inverse, words, generators):
        self.dimension = dimension
        self.matrices = matrices
        self.mult_table = mult_table
        self.inverse = inverse
        self.words = words  # generator word for each element
        self.generators = generators  # indices of the generators
        self.identity = 0
        self.conjugacy_classes = self._conjugacy_classes()
        self.class_of = [0] * len(matrices)
        for ci, cls in enumerate(self.conjugacy_classes):
            for g in cls:
                self.class_of[g] = ci

    def __len__(self) -> int:
        return len(self.matrices)

    def mul(self, a: int, b: int) -> int:
        return self.mult_table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def _conjugacy_classes(self):
        seen = set()
        classes = []
        for g in range(len(self.matrices)):
            if g in seen:
                continue
            orbit = {self.mul(self.mul(h, g), self.inv(h)) for h in range(len(self.matrices))}
            seen |= orbit
            classes.append(tuple(sorted(orbit)))
        classes.sort(key=min)
        return classes

    def check_associative(self) -> bool:
        n = len(self.matrices)
        t = self.mult_table
        return all(
            t[t[a][b]][c] == t[a][t[b][c]]
            for a in range(n)
            for b in range(n)
            for c in range(n)
        )


def enumerate_group(generators, cap: int = 10_000) -> GroupAction:
    """Breadth-first closure of a list of invertible integral matrices."""
    gens = [_freeze(g) for g in generators]
    if not gens:
        raise ValueError("at least one generator is required")
    n = len(gens[0])
    for g in gens:
        if len(g) != n or any(len(row) != n for row in g):
            raise ValueError("generators must be square matrices of equal size")
        if not _is_integral(g):
            raise NonIntegralEntry("generator entries must be algebraic integers")
        if not _is_invertible(g):
            raise ValueError("generators must be invertible")

    ident = _mat_identity(n)
    elements = [ident]
    index = {ident: 0}
    words = [()]
    frontier = [0]
    while frontier:
        nxt = []
        for ei in frontier:
            for gi, g in enumerate(gens):
                prod = _mat_mul(elements[ei], g)
                if prod not in index:
                    if len(elements) >= cap:
                        raise CapExceeded(f"group closure exceeds cap {cap}")
                    index[prod] = len(elements)
                    elements.append(prod)
                    words.append(words[ei] + (gi,))
                    nxt.append(index[prod])
        frontier = nxt

    size = len(elements)
    table = [[0] * size for _ in range(size)]
    for a in range(size):
        for b in range(size):
            prod = _mat_mul(elements[a], elements[b])
            table[a][b] = index[prod]
    inverse = [0] * size
    for a in range(size):
        inverse[a] = next(b for b in range(size) if table[a][b] == 0)

    action = GroupAction(
        n, tuple(elements), tuple(tuple(r) for r in table), tuple(inverse), tuple(words),
        tuple(index[g] for g in gens),
    )
    if size <= 200 and not action.check_associative():
        raise ValueError("multiplication table failed the associativity check")
    return action


@dataclass(frozen=True)
class PseudoReflection:
    """Reflection data: element index, nontrivial eigenvalue, the covector
    cutting the fixed hyperplane (first nonzero coordinate 1), and the dual
    eigenvector scaled so the natural pairing equals 2."""

    index: int
    eigenvalue: Scalar
    covector: tuple
    vector: tuple


def find_reflections(group: GroupAction) -> list[PseudoReflection]:
    """All elements with rank(g - 1) = 1, with normalized eigen-data."""
    out = []
    n = group.dimension
    for gi, mat in enumerate(group.matrices):
        if gi == group.identity:
            continue
        diff = [[mat[i][j] - (ONE if i == j else ZERO) for j in range(n)] for i in range(n)]
        if linalg.rank(diff) != 1:
            continue
        row = next(r for r in diff if any(r))
        lead = next(x for x in row if x)
        alpha = tuple(x / lead for x in row)
        col_j = next(j for j in range(n) if any(diff[i][j] for i in range(n)))
        u = [diff[i][col_j] for i in range(n)]
        gu = [sum((mat[i][j] * u[j] for j in range(n) if u[j]), ZERO) for i in range(n)]
        k = next(i for i in range(n) if u[i])
        lam = gu[k] / u[k]
        if any(gu[i] != lam * u[i] for i in range(n)):
            raise EigenvalueNotInField(
                f"element {gi} has no eigenvalue in the declared field"
            )
        pairing = sum((a * b for a, b in zip(u, alpha) if a and b), ZERO)
        scale = Scalar.rational(2) / pairing
        coroot = tuple(scale * x for x in u)
        out.append(PseudoReflection(gi, lam, alpha, coroot))
    return out


class ReflectionFunction:
    """Conjugation-invariant assignment of a scalar to each reflection class."""

    def __init__(self, group: GroupAction, reflections, values):
        self.group = group
        self.classes = sorted({group.class_of[r.index] for r in reflections})
        if isinstance(values, dict):
            by_class = {ci: Scalar.rational(v) for ci, v in values.items()}
        else:
            values = [Scalar.rational(v) for v in values]
            if len(values) == 1:
                values = values * len(self.classes)
            if len(values) != len(self.classes):
                raise ValueError(
                    f"expected {len(self.classes)} reflection-class values, got {len(values)}"
                )
            by_class = dict(zip(self.classes, values))
        if set(by_class) != set(self.classes):
            raise ValueError("values must cover exactly the reflection classes")
        self.by_class = by_class

    @classmethod
    def constant(cls, group, reflections, value) -> "ReflectionFunction":
        return cls(group, reflections, [Scalar.rational(value)])

    @classmethod
    def zero(cls, group, reflections) -> "ReflectionFunction":
        return cls.constant(group, reflections, 0)

    def __call__(self, element_index: int) -> Scalar:
        return self.by_class[self.group.class_of[element_index]]

    def values(self) -> list[Scalar]:
        return [self.by_class[ci] for ci in self.classes]


@dataclass(frozen=True)
class Irrep:
    """A validated split irreducible representation: one matrix per element."""

    label: str
    dim: int
    matrices: tuple  # Matrix per group element index
    character: tuple  # Scalar per group element index

    def matrix(self, g: int) -> Matrix:
        return self.matrices[g]


def irrep_from_generators(label: str, gen_matrices, group: GroupAction) -> Irrep:
    """Extend matrices given on the generators along the stored words,
    then validate the result."""
    gens = [_freeze(m) for m in gen_matrices]
    if len(gens) != len(group.generators):
        raise ValueError(
            f"irrep {label!r} needs {len(group.generators)} generator matrices"
        )
    d = len(gens[0])
    mats = []
    for word in group.words:
        m = _mat_identity(d)
        for gi in word:
            m = _mat_mul(m, gens[gi])
        mats.append(m)
    candidate = Irrep(
        label,
        d,
        tuple(mats),
        tuple(sum((m[i][i] for i in range(d)), ZERO) for m in mats),
    )
    return validate_irrep(candidate, group)


def validate_irrep(candidate: Irrep, group: GroupAction) -> Irrep:
    """Check the homomorphism property and irreducibility (character norm 1)."""
    mats = candidate.matrices
    if len(mats) != len(group):
        raise ValueError("one matrix per group element is required")
    for a in range(len(group)):
        for b in range(len(group)):
            if _mat_mul(mats[a], mats[b]) != mats[group.mul(a, b)]:
                raise NotHomomorphism(
                    f"irrep {candidate.label!r} violates the group law at ({a}, {b})"
                )
    chi = candidate.character
    norm = sum((chi[g] * chi[group.inv(g)] for g in range(len(group))), ZERO)
    norm = norm / len(group)
    if norm != ONE:
        raise NotIrreducible(
            f"irrep {candidate.label!r} has character norm {norm}, expected 1"
        )
    return candidate


def isotypic_projector(irrep: Irrep, action_matrices, group: GroupAction):
    """Matrix of the projector (dim W / |G|) sum chi_W(g^-1) g on a G-module
    given by one action matrix per group element."""
    size = len(action_matrices[0])
    acc = [[ZERO] * size for _ in range(size)]
    weight = Scalar.rational(irrep.dim) / len(group)
    for g in range(len(group)):
        coef = weight * irrep.character[group.inv(g)]
        if not coef:
            continue
        mat = action_matrices[g]
        for i in range(size):
            row = mat[i]
            for j in range(size):
                if row[j]:
                    acc[i][j] = acc[i][j] + coef * row[j]
    return acc


def isotypic_project(irrep: Irrep, action_matrices, group: GroupAction):
    """Reduced echelon basis of the image of the isotypic projector."""
    proj = isotypic_projector(irrep, action_matrices, group)
    cols = [[proj[i][j] for i in range(len(proj))] for j in range(len(proj))]
    return linalg.rref(cols)[0]


def regular_representation(group: GroupAction):
    """Permutation matrices of left multiplication, one per element."""
    size = len(group)
    mats = []
    for g in range(size):
        m = [[ZERO] * size for _ in range(size)]
        for h in range(size):
            m[group.mul(g, h)][h] = ONE
        mats.append(m)
    return mats


# ---------------------------------------------------------------------------
# built-in families
# ---------------------------------------------------------------------------


def _require_field(ell_needed: int, field_ell: int, what: str):
    if ell_needed <= 2:
        return
    if field_ell % ell_needed != 0:
        raise EigenvalueNotInField(
            f"{what} needs zeta_{ell_needed}; declare a cyclotomic field whose "
            f"index is a multiple of {ell_needed}"
        )


def cyclic_group(ell: int, field_ell: int = 1):
    """Z/ell acting on K^1 by multiplication by zeta_ell."""
    if not 1 <= ell <= 12:
        raise ValueError("built-in cyclic groups cover 1 <= ell <= 12")
    _require_field(ell, field_ell, f"the cyclic group of order {ell}")
    if ell <= 2:
        zeta = Scalar.rational(1 if ell == 1 else -1)
    else:
        zeta = Scalar.zeta(field_ell, field_ell // ell)
    group = enumerate_group([[[zeta]]])
    irreps = []
    for j in range(ell):
        label = "triv" if j == 0 else ("sgn" if ell == 2 and j == 1 else f"chi{j}")
        irreps.append(irrep_from_generators(label, [[[zeta**j]]], group))
    return group, irreps


def dihedral_group(ell: int, field_ell: int = 1):
    """Dihedral group of order 2*ell in its reflection representation."""
    if not 3 <= ell <= 8:
        raise ValueError("built-in dihedral groups cover 3 <= ell <= 8")
    _require_field(ell, field_ell, f"the dihedral group of order {2 * ell}")
    zeta = Scalar.zeta(field_ell, field_ell // ell) if ell > 2 else Scalar.rational(-1)
    rot = [[zeta, ZERO], [ZERO, zeta ** (ell - 1)]]
    flip = [[ZERO, ONE], [ONE, ZERO]]
    group = enumerate_group([rot, flip])
    irreps = [
        irrep_from_generators("triv", [[[ONE]], [[ONE]]], group),
        irrep_from_generators("det", [[[ONE]], [[-ONE]]], group),
    ]
    if ell % 2 == 0:
        irreps.append(irrep_from_generators("eps", [[[-ONE]], [[ONE]]], group))
        irreps.append(irrep_from_generators("epsdet", [[[-ONE]], [[-ONE]]], group))
    for k in range(1, (ell - 1) // 2 + 1):
        rk = [[zeta**k, ZERO], [ZERO, zeta ** ((ell - k) % ell)]]
        irreps.append(irrep_from_generators(f"rho{k}", [rk, flip], group))
    return group, irreps


_S3_GENS = [[[-1, 1], [0, 1]], [[1, 0], [1, -1]]]


def symmetric_3(field_ell: int = 1):
    """S3 in its 2-dimensional reflection representation over Q."""
    group = enumerate_group(_S3_GENS)
    one = [[1]]
    neg = [[-1]]
    irreps = [
        irrep_from_generators("triv", [one, one], group),
        irrep_from_generators("sgn", [neg, neg], group),
        irrep_from_generators("standard", _S3_GENS, group),
    ]
    return group, irreps


def symmetric_4(field_ell: int = 1):
    """S4 in its 3-dimensional reflection representation over Q."""
    s1 = [[-1, 1, 0], [0, 1, 0], [0, 0, 1]]
    s2 = [[1, 0, 0], [1, -1, 1], [0, 0, 1]]
    s3 = [[1, 0, 0], [0, 1, 0], [0, 1, -1]]
    group = enumerate_group([s1, s2, s3])
    one = [[1]]
    neg = [[-1]]
    t1, t2 = _S3_GENS
    irreps = [
        irrep_from_generators("triv", [one, one, one], group),
        irrep_from_generators("sgn", [neg, neg, neg], group),
        irrep_from_generators("standard", [s1, s2, s3], group),
        irrep_from_generators(
            "standard_sgn",
            [[[-x for x in row] for row in m] for m in (s1, s2, s3)],
            group,
        ),
        irrep_from_generators("dim2", [t1, t2, t1], group),
    ]
    return group, irreps


_BUILTINS = {
    "cyclic": cyclic_group,
    "dihedral": dihedral_group,
    "s3": symmetric_3,
    "s4": symmetric_4,
}


def builtin_group(spec: str, field_ell: int = 1):
    """Resolve a built-in family spec such as ``cyclic:4`` or ``s3``."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name not in _BUILTINS:
        raise ValueError(f"unknown built-in group {spec!r}")
    if name in ("cyclic", "dihedral"):
        if not arg:
            raise ValueError(f"{name} requires an order parameter, e.g. {name}:3")
        return _BUILTINS[name](int(arg), field_ell)
    if arg:
        raise ValueError(f"{name} takes no parameter")
    return _BUILTINS[name](field_ell)


# ---------------------------------------------------------------------------
# group/representation data files
# ---------------------------------------------------------------------------


class GroupFileError(ValueError):
    """Malformed group/representation data file."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def load_group_file(text: str, field_ell: int = 1, cap: int = 10_000):
    """Parse the documented group data format; returns (GroupAction, irreps).

    The format is line based: a ``dimension = n`` directive, then one
    ``begin generator`` ... ``end`` block per generator (n rows of n scalar
    expressions), then optional ``begin irrep NAME dim=d`` blocks holding one
    d x d matrix per generator, separated by ``gen`` lines.  Unknown
    directives are rejected.
    """
    dimension = None
    generators = []
    irrep_specs = []  # (label, dim, list of matrices)
    lines = text.splitlines()
    i = 0

    def parse_row(raw: str, width: int, lineno: int):
        parts = raw.split()
        if len(parts) != width:
            raise GroupFileError(lineno, f"expected {width} entries, got {len(parts)}")
        try:
            return [parse_scalar(p, field_ell) for p in parts]
        except ExprError as exc:
            raise GroupFileError(lineno, str(exc)) from exc

    while i < len(lines):
        line = lines[i].split("#", 1)[0].strip()
        if not line:
            i += 1
            continue
        if line.startswith("dimension"):
            key, _, value = line.partition("=")
            if key.strip() != "dimension" or not value.strip().isdigit():
                raise GroupFileError(i + 1, "malformed dimension directive")
            dimension = int(value.strip())
            i += 1
        elif line == "begin generator":
            if dimension is None:
                raise GroupFileError(i + 1, "dimension must come first")
            rows = []
            i += 1
            while i < len(lines):
                body = lines[i].split("#", 1)[0].strip()
                if body == "end":
                    break
                if body:
                    rows.append(parse_row(body, dimension, i + 1))
                i += 1
            else:
                raise GroupFileError(len(lines), "unterminated generator block")
            if len(rows) != dimension:
                raise GroupFileError(i + 1, f"generator needs {dimension} rows")
            generators.append(rows)
            i += 1
        elif line.startswith("begin irrep"):
            head = line[len("begin irrep"):].strip().split()
            if len(head) != 2 or not head[1].startswith("dim="):
                raise GroupFileError(i + 1, "expected: begin irrep NAME dim=D")
            label = head[0]
            dim = int(head[1][4:])
            mats: list[list] = []
            current: list = []
            i += 1
            while i < len(lines):
                body = lines[i].split("#", 1)[0].strip()
                if body == "end":
                    break
                if body == "gen":
                    if current:
                        mats.append(current)
                        current = []
                elif body:
                    current.append(parse_row(body, dim, i + 1))
                i += 1
            else:
                raise GroupFileError(len(lines), "unterminated irrep block")
            if current:
                mats.append(current)
            if any(len(m) != dim for m in mats):
                raise GroupFileError(i + 1, f"irrep {label!r} matrices must be {dim}x{dim}")
            irrep_specs.append((label, dim, mats))
            i += 1
        else:
            raise GroupFileError(i + 1, f"unknown directive {line!r}")

    if dimension is None or not generators:
        raise GroupFileError(len(lines), "file must declare a dimension and generators")
    group = enumerate_group(generators, cap=cap)
    irreps = []
    for label, dim, mats in irrep_specs:
        if len(mats) != len(generators):
            raise GroupFileError(
                0, f"irrep {label!r} needs one matrix per generator"
            )
        irreps.append(irrep_from_generators(label, mats, group))
    return group, irreps
