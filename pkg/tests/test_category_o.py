"""Verma slices, singular vectors, simple quotients, the linkage order,
blocks, and decomposition matrices, with brute-force kernel oracles."""

import math
import random
from fractions import Fraction

import pytest

from cherednik import linalg
from cherednik.category_o import (
    CutoffExceeded,
    GradedCharacter,
    InconsistentTruncation,
    NotScalarAction,
    VermaSlice,
    blocks,
    c_scalar,
    decompose_verma_character,
    decomposition_matrix,
    dunkl_action,
    highest_weight_order,
    hom_dim,
    mv_add,
    mv_eq,
    mv_scale,
    simple_quotient_slice,
    singular_vectors,
    verma_action,
    verma_character,
)
from cherednik.groups import (
    Irrep,
    ReflectionFunction,
    builtin_group,
    find_reflections,
)
from cherednik.pbw import CherednikAlgebra
from cherednik.scalars import Scalar, ZERO, ONE


def make_algebra(spec, ell, c_values):
    group, irreps = builtin_group(spec, ell)
    refl = find_reflections(group)
    c = ReflectionFunction(group, refl, c_values)
    return CherednikAlgebra(group, c, irreps=irreps)


def irrep_of(alg, label):
    return next(w for w in alg.irreps if w.label == label)


def random_vector(slice_, rng, degree):
    return {
        degree: [
            Scalar.rational(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
            for _ in range(slice_.dim(degree))
        ]
    }


class TestCScalar:
    def test_zero_parameter_gives_half_dimension(self):
        for spec, ell, dim in (("cyclic:3", 3, 1), ("s3", 1, 2), ("s4", 1, 3)):
            alg = make_algebra(spec, ell, [0])
            for w in alg.irreps:
                assert c_scalar(alg, w) == Scalar.rational(Fraction(dim, 2))

    def test_order_two_values(self):
        gamma = Fraction(2, 7)
        alg = make_algebra("cyclic:2", 1, [gamma])
        assert c_scalar(alg, irrep_of(alg, "triv")) == Scalar.rational(
            Fraction(1, 2) - gamma
        )
        assert c_scalar(alg, irrep_of(alg, "sgn")) == Scalar.rational(
            Fraction(1, 2) + gamma
        )

    def test_s3_constant_parameter(self):
        gamma = Fraction(1, 3)
        alg = make_algebra("s3", 1, [gamma])
        assert c_scalar(alg, irrep_of(alg, "triv")) == Scalar.rational(1 - 3 * gamma)
        # the standard character vanishes on transpositions
        assert c_scalar(alg, irrep_of(alg, "standard")) == ONE
        assert c_scalar(alg, irrep_of(alg, "sgn")) == Scalar.rational(1 + 3 * gamma)

    def test_non_scalar_action_rejected(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        triv, sgn = alg.irreps
        mats = tuple(
            (
                (triv.matrix(g)[0][0], ZERO),
                (ZERO, sgn.matrix(g)[0][0]),
            )
            for g in range(2)
        )
        fake = Irrep("fake", 2, mats, tuple(m[0][0] + m[1][1] for m in mats))
        with pytest.raises(NotScalarAction):
            c_scalar(alg, fake)


class TestVermaAction:
    def test_lowering_kills_degree_one_at_half(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        slice_ = VermaSlice(alg, irrep_of(alg, "triv"), 10)
        out = verma_action(slice_, alg.y(1), slice_.basis_vector(1, 0))
        assert out == {}

    def test_lowering_kills_degree_zero_always(self):
        for spec, ell, cs in (("cyclic:2", 1, [Fraction(1, 2)]), ("s3", 1, [Fraction(1, 5)])):
            alg = make_algebra(spec, ell, cs)
            for w in alg.irreps:
                slice_ = VermaSlice(alg, w, 4)
                for k in range(w.dim):
                    for i in range(1, alg.dim + 1):
                        assert verma_action(slice_, alg.y(i), slice_.basis_vector(0, k)) == {}

    def test_euler_acts_by_weight(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        slice_ = VermaSlice(alg, irrep_of(alg, "triv"), 10)
        vec = slice_.basis_vector(2, 0)
        out = verma_action(slice_, alg.euler_element(), vec)
        assert mv_eq(out, mv_scale(vec, 2))  # c(triv) = 0 at gamma = 1/2

    def test_linearity(self):
        alg = make_algebra("s3", 1, [Fraction(1, 3)])
        slice_ = VermaSlice(alg, irrep_of(alg, "standard"), 8)
        rng = random.Random(5)
        a = alg.y(1) * alg.x(2) + alg.g(3)
        u = random_vector(slice_, rng, 4)
        v = random_vector(slice_, rng, 4)
        lhs = verma_action(slice_, a, mv_add(u, v))
        rhs = mv_add(verma_action(slice_, a, u), verma_action(slice_, a, v))
        assert mv_eq(lhs, rhs)

    def test_cutoff_exceeded(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        slice_ = VermaSlice(alg, irrep_of(alg, "triv"), 3)
        with pytest.raises(CutoffExceeded):
            verma_action(slice_, alg.x(1), slice_.basis_vector(3, 0))


class TestDunklOracle:
    def test_degree_one_vanishing(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        slice_ = VermaSlice(alg, irrep_of(alg, "triv"), 10)
        assert dunkl_action(slice_, 1, slice_.basis_vector(1, 0)) == {}

    def test_degree_zero(self):
        alg = make_algebra("s3", 1, [Fraction(1, 3)])
        for w in alg.irreps:
            slice_ = VermaSlice(alg, w, 4)
            for k in range(w.dim):
                assert dunkl_action(slice_, 1, slice_.basis_vector(0, k)) == {}

    @pytest.mark.parametrize(
        "spec,ell,cs",
        [
            ("cyclic:2", 1, [Fraction(1, 2)]),
            ("cyclic:3", 3, [Fraction(1, 2), Fraction(1, 3)]),
            ("s3", 1, [Fraction(1, 3)]),
        ],
    )
    def test_agreement_with_straightening(self, spec, ell, cs):
        alg = make_algebra(spec, ell, cs)
        rng = random.Random(7)
        for w in alg.irreps:
            slice_ = VermaSlice(alg, w, 10)
            for _ in range(25):
                n = rng.randint(1, 10)
                vec = random_vector(slice_, rng, n)
                for i in range(1, alg.dim + 1):
                    assert dunkl_action(slice_, i, vec) == verma_action(
                        slice_, alg.y(i), vec
                    )

    def test_general_direction_vector(self):
        alg = make_algebra("s3", 1, [Fraction(1, 3)])
        slice_ = VermaSlice(alg, irrep_of(alg, "standard"), 6)
        rng = random.Random(9)
        vec = random_vector(slice_, rng, 5)
        direction = [Scalar.rational(2), Scalar.rational(Fraction(-1, 3))]
        combo = alg.y(1) * direction[0] + alg.y(2) * direction[1]
        assert dunkl_action(slice_, direction, vec) == verma_action(slice_, combo, vec)

    def test_rejects_quotients(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        quotient, _ = simple_quotient_slice(alg, irrep_of(alg, "triv"), 6)
        with pytest.raises(ValueError):
            dunkl_action(quotient, 1, quotient.basis_vector(0, 0))


def brute_force_singular_dims(alg, w, cutoff):
    """Oracle: nullspace of the stacked Dunkl matrices, built columnwise
    from the divided-difference route only."""
    slice_ = VermaSlice(alg, w, cutoff)
    dims = {}
    for n in range(1, cutoff + 1):
        cols = slice_.dim(n)
        rows = []
        images = []
        for j in range(cols):
            unit = slice_.basis_vector(n, j)
            img = {}
            for i in range(1, alg.dim + 1):
                part = dunkl_action(slice_, i, unit)
                img[i] = part.get(n - 1, [ZERO] * slice_.dim(n - 1))
            images.append(img)
        for i in range(1, alg.dim + 1):
            for r in range(slice_.dim(n - 1)):
                rows.append([images[j][i][r] for j in range(cols)])
        dims[n] = len(linalg.nullspace(rows)) if rows else cols
    return dims


class TestSingularVectors:
    def test_degree_zero_is_the_irrep(self):
        alg = make_algebra("s3", 1, [Fraction(1, 3)])
        for w in alg.irreps:
            slice_ = VermaSlice(alg, w, 4)
            space = singular_vectors(slice_, 0)
            assert space.dimension == w.dim
            assert set(space.components) == {w.label}

    def test_order_two_degree_one_isotype(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        slice_ = VermaSlice(alg, irrep_of(alg, "triv"), 20)
        space = singular_vectors(slice_, 1)
        assert space.dimension == 1
        assert set(space.components) == {"sgn"}

    def test_sign_verma_has_no_positive_singular_vectors(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        slice_ = VermaSlice(alg, irrep_of(alg, "sgn"), 20)
        for n in range(1, 21):
            assert singular_vectors(slice_, n).dimension == 0

    def test_matches_brute_force_dunkl_kernels(self):
        alg = make_algebra("s3", 1, [Fraction(1, 3)])
        for w in alg.irreps:
            oracle = brute_force_singular_dims(alg, w, 8)
            slice_ = VermaSlice(alg, w, 8)
            for n in range(1, 9):
                assert singular_vectors(slice_, n).dimension == oracle[n]

    def test_echelon_form_is_deterministic(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(3, 2)])
        slice_ = VermaSlice(alg, irrep_of(alg, "triv"), 10)
        space = singular_vectors(slice_, 3)
        again = singular_vectors(VermaSlice(alg, irrep_of(alg, "triv"), 10), 3)
        assert space.vectors == again.vectors
        assert space.dimension == 1
        assert space.vectors[0][0] == ONE


class TestSimpleQuotients:
    def test_order_two_half_parameter(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        quotient, character = simple_quotient_slice(alg, irrep_of(alg, "triv"), 20)
        assert [quotient.dim(n) for n in range(21)] == [1] + [0] * 20
        assert list(character.rows()) == [(0, "triv", 1)]
        assert quotient.stable_under_cutoff

    def test_order_two_generic_parameter(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 3)])
        quotient, _ = simple_quotient_slice(alg, irrep_of(alg, "triv"), 20)
        assert [quotient.dim(n) for n in range(21)] == [1] * 21

    def test_degree_zero_part_is_always_the_irrep(self):
        for spec, ell, cs in (
            ("cyclic:2", 1, [Fraction(1, 2)]),
            ("cyclic:3", 3, [Fraction(1, 2), Fraction(1, 3)]),
            ("s3", 1, [Fraction(1, 3)]),
        ):
            alg = make_algebra(spec, ell, cs)
            for w in alg.irreps:
                quotient, character = simple_quotient_slice(alg, w, 8)
                assert quotient.dim(0) == w.dim
                assert character.data[0] == {w.label: 1}

    def test_higher_singular_vector_kills_tail(self):
        # at c = 3/2 the first singular vector of the trivial Verma sits in
        # degree 3, so the simple quotient has dimensions 1, 1, 1, 0, ...
        alg = make_algebra("cyclic:2", 1, [Fraction(3, 2)])
        quotient, _ = simple_quotient_slice(alg, irrep_of(alg, "triv"), 12)
        assert [quotient.dim(n) for n in range(13)] == [1, 1, 1] + [0] * 10

    def test_exactness_bookkeeping(self):
        alg = make_algebra("s3", 1, [Fraction(1, 3)])
        for w in alg.irreps:
            quotient, _ = simple_quotient_slice(alg, w, 10)
            for n in range(11):
                killed = len(quotient.killed[n][0])
                assert quotient.full_dim(n) == killed + quotient.dim(n)

    def test_quotient_character_dimensions_match(self):
        alg = make_algebra("s3", 1, [Fraction(1, 3)])
        for w in alg.irreps:
            quotient, character = simple_quotient_slice(alg, w, 10)
            for n in range(11):
                assert character.dimension(n, alg.irreps) == quotient.dim(n)


class TestHomDim:
    def test_identity_map_always_present(self):
        for gamma in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)):
            alg = make_algebra("cyclic:2", 1, [gamma])
            triv = irrep_of(alg, "triv")
            assert hom_dim(triv, VermaSlice(alg, triv, 12)) == 1

    def test_order_two_cross_homs(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        triv, sgn = irrep_of(alg, "triv"), irrep_of(alg, "sgn")
        assert hom_dim(sgn, VermaSlice(alg, triv, 12)) == 1
        assert hom_dim(triv, VermaSlice(alg, sgn, 12)) == 0


class TestOrderAndBlocks:
    def test_order_two_half(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        graph = highest_weight_order(alg)
        assert graph.edges == [("triv", "sgn")]
        assert blocks(alg) == [["triv", "sgn"]]

    def test_order_two_generic(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 3)])
        assert highest_weight_order(alg).edges == []
        assert blocks(alg) == [["triv"], ["sgn"]]

    def test_zero_parameter_all_singletons(self):
        alg = make_algebra("s4", 1, [0])
        assert highest_weight_order(alg).edges == []
        assert blocks(alg) == [[w.label] for w in alg.irreps]

    def test_no_self_edges(self):
        for spec, ell, cs in (
            ("cyclic:4", 4, [Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)]),
            ("s3", 1, [Fraction(1, 2)]),
            ("s4", 1, [Fraction(1, 2)]),
        ):
            alg = make_algebra(spec, ell, cs)
            graph = highest_weight_order(alg)
            assert all(w != e for w, e in graph.edges)

    def test_blocks_refine_order_connectivity(self):
        alg = make_algebra("s3", 1, [Fraction(1, 3)])
        partition = blocks(alg)
        index = {}
        for i, blk in enumerate(partition):
            for lbl in blk:
                index[lbl] = i
        for w, e in highest_weight_order(alg).edges:
            assert index[w] == index[e]


class TestDecomposition:
    def test_order_two_half_matrix(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        matrix = decomposition_matrix(alg, 20)
        assert matrix["triv"] == {"triv": 1, "sgn": 1}
        assert matrix["sgn"] == {"triv": 0, "sgn": 1}

    def test_order_two_generic_is_identity(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 3)])
        matrix = decomposition_matrix(alg, 20)
        for w in ("triv", "sgn"):
            for e in ("triv", "sgn"):
                assert matrix[w][e] == (1 if w == e else 0)

    def test_diagonal_is_one_and_unitriangular(self):
        for spec, ell, cs in (
            ("cyclic:2", 1, [Fraction(1, 2)]),
            ("cyclic:3", 3, [Fraction(1, 3), Fraction(1, 3)]),
            ("s3", 1, [Fraction(1, 3)]),
        ):
            alg = make_algebra(spec, ell, cs)
            matrix = decomposition_matrix(alg, 12)
            graph = highest_weight_order(alg)
            edges = set(graph.edges)
            for w in matrix:
                assert matrix[w][w] == 1
                for e, mult in matrix[w].items():
                    if mult and e != w:
                        assert (w, e) in edges

    def test_verma_character_is_sum_of_simples(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        cutoff = 14
        simples = {
            w.label: simple_quotient_slice(alg, w, cutoff)[1] for w in alg.irreps
        }
        c_values = {w.label: c_scalar(alg, w) for w in alg.irreps}
        for w in alg.irreps:
            mults = decompose_verma_character(alg, w, cutoff, simples)
            total: dict[int, dict[str, int]] = {}
            for label, m in mults.items():
                if not m:
                    continue
                shift = (c_values[label] - c_values[w.label]).as_int()
                for n, level in simples[label].data.items():
                    if n + shift > cutoff:
                        continue
                    row = total.setdefault(n + shift, {})
                    for lbl2, mult2 in level.items():
                        row[lbl2] = row.get(lbl2, 0) + m * mult2
            expected = verma_character(alg, w, cutoff)
            assert GradedCharacter(total) == expected

    def test_inconsistent_truncation_detected(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        # corrupt the simple character table: pretend L(sgn) is a single line
        wrong = {
            "triv": simple_quotient_slice(alg, irrep_of(alg, "triv"), 10)[1],
            "sgn": GradedCharacter({0: {"sgn": 1}}),
        }
        with pytest.raises(InconsistentTruncation):
            decompose_verma_character(alg, irrep_of(alg, "triv"), 10, wrong)


class TestWeightSpaces:
    @pytest.mark.parametrize(
        "spec,ell,cs",
        [
            ("cyclic:2", 1, [Fraction(1, 2)]),
            ("cyclic:4", 4, [Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)]),
            ("s3", 1, [Fraction(1, 3)]),
        ],
    )
    def test_euler_semisimple_with_binomial_dimensions(self, spec, ell, cs):
        alg = make_algebra(spec, ell, cs)
        euler = alg.euler_element()
        for w in alg.irreps:
            slice_ = VermaSlice(alg, w, 6)
            for n in range(7):
                expected_dim = math.comb(n + alg.dim - 1, alg.dim - 1) * w.dim
                assert slice_.dim(n) == expected_dim
                for j in range(slice_.dim(n)):
                    vec = slice_.basis_vector(n, j)
                    out = verma_action(slice_, euler, vec)
                    assert mv_eq(out, mv_scale(vec, slice_.c_value + n))

    def test_weights_lie_on_integer_ladder(self):
        alg = make_algebra("s3", 1, [Fraction(1, 3)])
        for w in alg.irreps:
            slice_ = VermaSlice(alg, w, 8)
            for weight in slice_.weights():
                diff = weight - slice_.c_value
                assert diff.is_integer() and diff.as_int() >= 0

    def test_occurring_simples_sit_on_the_ladder(self):
        alg = make_algebra("cyclic:2", 1, [Fraction(1, 2)])
        c_values = {w.label: c_scalar(alg, w) for w in alg.irreps}
        matrix = decomposition_matrix(alg, 12)
        for w in matrix:
            for e, mult in matrix[w].items():
                if mult:
                    diff = c_values[e] - c_values[w]
                    assert diff.is_integer() and diff.as_int() >= 0


class TestRelationVanishing:
    def test_defining_relations_kill_slices_small(self):
        # the full exactness sweep to degree 20 lives in the acceptance suite
        for spec, ell, cs in (
            ("cyclic:2", 1, [Fraction(1, 2)]),
            ("s3", 1, [Fraction(1, 3)]),
        ):
            alg = make_algebra(spec, ell, cs)
            d = alg.dim
            for w in alg.irreps:
                slice_ = VermaSlice(alg, w, 6)
                for n in range(6):
                    for j in range(slice_.dim(n)):
                        vec = slice_.basis_vector(n, j)
                        for a in range(1, d + 1):
                            for b in range(1, d + 1):
                                rel = alg.y(a) * alg.x(b) - alg.x(b) * alg.y(a)
                                if a == b:
                                    rel = rel - alg.one()
                                for r in alg.reflections:
                                    coef = (
                                        alg.c(r.index)
                                        * r.covector[a - 1]
                                        * r.vector[b - 1]
                                    )
                                    rel = rel + alg.g(r.index) * coef
                                assert verma_action(slice_, rel, vec) == {}
