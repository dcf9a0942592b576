import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from logtangent.exact import (
    INFINITY,
    Poly,
    RatMatrix,
    TruncSeries,
    adjugate,
    det,
    format_rational,
    int_rank,
    inverse,
    kernel_basis,
    minor,
    parse_rational,
    poly_det,
    primitive,
    random_rational,
    rank,
    rref,
    series_valuation,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=7)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def low_rank(draw_rows, draw_cols, k, rng):
    a = [[random_rational(rng, 9) for _ in range(k)] for _ in range(draw_rows)]
    b = [[random_rational(rng, 9) for _ in range(draw_cols)] for _ in range(k)]
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(draw_cols)] for i in range(draw_rows)]


def conic_veronese(ts):
    return [[1, t, t * t, t * t, t ** 3, t ** 4] for t in ts]


class TestRationals:
    @pytest.mark.parametrize("text,value", [("3", 3), ("-3/6", Fraction(-1, 2)), (" 4 / 8 ", Fraction(1, 2)), ("+7", 7)])
    def test_parse(self, text, value):
        assert parse_rational(text) == value

    @pytest.mark.parametrize("text", ["1/0", "1.5", "x", "", "1/-2", "2/3/4"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            parse_rational(text)

    def test_format_roundtrip(self):
        for x in (Fraction(0), Fraction(-7, 3), Fraction(5)):
            assert parse_rational(format_rational(x)) == x
        assert format_rational(Fraction(0)) == "0"

    @given(st.lists(small, min_size=1, max_size=6).filter(any))
    def test_primitive(self, vec):
        p = primitive(vec)
        assert math.gcd(*p) == 1
        assert next(x for x in p if x) > 0
        assert rank([list(vec), list(p)]) == 1


class TestRank:
    def test_examples(self):
        assert rank([[1, 0], [0, 1]]) == 2
        assert rank([[1, 1, 1]] * 3) == 1
        assert rank(conic_veronese(range(5))) == 5

    def test_veronese_second_routine(self):
        # integer fast path and the Fraction path agree with sympy
        rows = conic_veronese(range(5))
        assert int_rank(rows) == 5
        assert rank(RatMatrix.from_rows([[Fraction(x) for x in r] for r in rows])) == 5
        assert sympy.Matrix(rows).rank() == 5

    def test_empty(self):
        assert rank(RatMatrix(0, 3, ())) == 0

    @settings(max_examples=60, deadline=None)
    @given(matrices())
    def test_matches_sympy(self, rows):
        assert rank(rows) == sympy.Matrix(rows).rank()

    @pytest.mark.parametrize("seed", range(10))
    def test_constructed_low_rank(self, seed):
        rng = random.Random(seed)
        k = rng.randint(1, 3)
        m = low_rank(5, 6, k, rng)
        assert rank(m) == sympy.Matrix(m).rank() <= k


class TestKernel:
    def test_examples(self):
        assert kernel_basis([[1, -1]]) == [(1, 1)]
        assert kernel_basis([[1, 0], [0, 1], [1, 1]]) == []

    def test_conic(self):
        (v,) = kernel_basis(conic_veronese(range(5)))
        # Z0 Z2 - Z1^2 in lex monomial order
        assert primitive(v) == primitive([0, 0, 1, -1, 0, 0])

    def test_empty_matrix_needs_cols(self):
        assert len(kernel_basis([], 3)) == 3
        with pytest.raises(ValueError):
            kernel_basis([])

    @settings(max_examples=60, deadline=None)
    @given(matrices())
    def test_rank_nullity_and_exact_zero(self, rows):
        m = RatMatrix.from_rows(rows)
        ker = kernel_basis(m)
        assert rank(m) + len(ker) == m.cols
        for v in ker:
            assert all(x == 0 for x in m.apply(v))
            assert math.gcd(*v) == 1 and next(x for x in v if x) > 0
        if ker:
            assert rank(ker) == len(ker)

    def test_deterministic(self):
        m = low_rank(4, 6, 2, random.Random(3))
        assert kernel_basis(m) == kernel_basis(m)

    def test_rref_pivots(self):
        red, piv = rref([[2, 4, 6], [1, 2, 4]])
        assert piv == [0, 2]
        assert red == [[1, 2, 0], [0, 0, 1]]


class TestMinors:
    def test_examples(self):
        assert minor([[5, 6], [7, 8]], [], []) == 1
        assert minor([[2, 0], [0, 3]], [0, 1], [0, 1]) == 6
        assert minor([[1, 2], [3, 4]], [0, 1], [0, 1]) == -2

    def test_errors(self):
        with pytest.raises(IndexError):
            minor([[1, 2], [3, 4]], [0, 2], [0, 1])
        with pytest.raises(ValueError):
            minor([[1, 2], [3, 4]], [0], [0, 1])

    @pytest.mark.parametrize("seed", range(20))
    def test_laplace_equals_bareiss(self, seed):
        rng = random.Random(seed)
        m = [[random_rational(rng, 30) for _ in range(4)] for _ in range(4)]
        row = rng.randrange(4)
        laplace = sum(
            (-1) ** (row + j) * m[row][j] * minor(m, [i for i in range(4) if i != row], [c for c in range(4) if c != j])
            for j in range(4)
        )
        assert laplace == det(m) == sympy.Matrix(m).det()

    @pytest.mark.parametrize("seed", range(5))
    def test_inverse_and_adjugate(self, seed):
        rng = random.Random(seed)
        m = RatMatrix.from_rows([[random_rational(rng, 9) for _ in range(4)] for _ in range(4)])
        d = det(m)
        if d == 0:
            return
        assert (m @ inverse(m)) == RatMatrix.identity(4)
        assert adjugate(m) == inverse(m) * d


class TestPoly:
    def test_arithmetic(self):
        x, y = Poly.variable(2, 0), Poly.variable(2, 1)
        p = (x + y) ** 2 - x * x - y * y
        assert p == x * y * 2
        assert p.degree() == 2 and p.is_homogeneous()
        assert p([Fraction(1, 2), 3]) == 3

    def test_poly_det_matches_pointwise(self):
        rng = random.Random(1)
        nv = 3
        M = [[Poly.linear([rng.randint(-5, 5) for _ in range(nv)]) for _ in range(3)] for _ in range(3)]
        D = poly_det(M)
        for _ in range(10):
            pt = [random_rational(rng, 10) for _ in range(nv)]
            assert D(pt) == det([[e(pt) for e in row] for row in M])

    def test_poly_det_sympy(self):
        a, b, c = sympy.symbols("a b c")
        M = [[Poly.variable(3, 0), Poly.variable(3, 1)], [Poly.variable(3, 2), Poly.variable(3, 0) * 2]]
        expected = sympy.Poly(sympy.Matrix([[a, b], [c, 2 * a]]).det(), a, b, c)
        got = {e: c for e, c in poly_det(M).sorted_terms()}
        assert got == {m: sympy.Rational(v) for m, v in expected.terms()}


class TestSeries:
    def test_valuation_examples(self):
        assert series_valuation(TruncSeries.from_coefficients([0, 0, 5], 3)) == 2
        assert TruncSeries.from_coefficients([1, 2], 6).valuation == 0
        assert TruncSeries.zero(4).valuation == INFINITY

    def test_valuation_product_example(self):
        a = TruncSeries.from_coefficients([0, 3, 1], 6)
        b = TruncSeries.from_coefficients([0, 0, -2, 7], 6)
        assert (a * b).valuation == 3

    def test_order_must_be_positive(self):
        with pytest.raises(ValueError):
            TruncSeries((), 0)

    @given(
        st.lists(small, min_size=1, max_size=5),
        st.lists(small, min_size=1, max_size=5),
        st.integers(0, 3),
        st.integers(0, 3),
    )
    def test_valuation_additive(self, f, g, i, j):
        T = 10
        a = TruncSeries.from_coefficients([0] * i + f, T)
        b = TruncSeries.from_coefficients([0] * j + g, T)
        va, vb = a.valuation, b.valuation
        if va + vb <= T:
            assert (a * b).valuation == va + vb

    def test_inverse(self):
        s = TruncSeries.from_coefficients([2, -1, 3], 8)
        assert s * s.inverse() == TruncSeries.one(8)
        with pytest.raises(ZeroDivisionError):
            TruncSeries.from_coefficients([0, 1], 4).inverse()

    def test_inverse_matches_sympy(self):
        t = sympy.symbols("t")
        s = TruncSeries.from_coefficients([3, 1, -2], 6)
        ref = sympy.series(1 / (3 + t - 2 * t ** 2), t, 0, 7).removeO()
        assert [sympy.Rational(c) for c in s.inverse().coefficients] == [ref.coeff(t, k) for k in range(7)]
