import random
from fractions import Fraction

import pytest

from balpair.errors import Undecidable
from balpair.linalg import (char_poly, classify_spectrum, integer_form,
                            left_pf_eigenvector, mat_mul, perron_data,
                            poly_of_matrix)
from balpair.polynomial import RatPoly, factor_poly
from balpair.substitution import parse_substitution


def P(*coeffs):
    return RatPoly(coeffs)


EX1 = ((2, 1), (1, 1))
THREE = ((2, 1, 1), (1, 2, 1), (0, 1, 0))
MT = ((1, 1, 1, 1), (1, 1, 1, 1), (1, 0, 2, 1), (1, 1, 1, 1))
NONCON = ((1, 1, 1, 1), (0, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, 1))


def test_char_poly_examples():
    assert char_poly(EX1) == P(1, -3, 1)
    assert char_poly(THREE) == P(1, 2, -4, 1)
    assert char_poly(MT) == P(0, 0, 4, -5, 1)


def test_char_poly_is_integral_and_monic(corpus):
    for subst in corpus.values():
        cp = char_poly(subst.transition_matrix())
        assert cp.leading == 1
        assert all(c.denominator == 1 for c in cp.coeffs)


def test_cayley_hamilton_exact(corpus):
    for subst in corpus.values():
        a = subst.transition_matrix()
        result = poly_of_matrix(char_poly(a), a)
        assert all(v == 0 for row in result for v in row)


def test_factor_product_matches_char_poly(corpus):
    for subst in corpus.values():
        cp = char_poly(subst.transition_matrix())
        product = RatPoly.one()
        for f, m in factor_poly(cp):
            product = product * f ** m
        assert product == cp


def test_perron_examples():
    nf = perron_data(THREE)
    assert nf.min_poly == P(-1, -3, 1)
    assert nf.approx_str(digits=4) == "3.3027"  # truncated decimal

    nf = perron_data(MT)
    assert nf.min_poly == P(-4, 1)
    assert nf.generator().as_fraction() == 4

    nf = perron_data(EX1)
    assert nf.min_poly == P(1, -3, 1)
    assert nf.approx_str(digits=3) == "2.618"


def test_perron_interval_isolates_one_root(corpus):
    for subst in corpus.values():
        nf = perron_data(subst.transition_matrix())
        lo, hi = nf.interval
        if nf.degree == 1:
            assert lo == hi == -nf.min_poly.coeffs[0]
        else:
            assert nf.min_poly.count_roots(lo, hi) == 1


def test_perron_root_dominates_other_factors(corpus):
    # lambda's lower bound must climb above the Cauchy bound of every other
    # factor (all their roots are strictly smaller in modulus)
    for subst in corpus.values():
        a = subst.transition_matrix()
        nf = perron_data(a)
        for fac, _ in factor_poly(char_poly(a)):
            if fac == nf.min_poly:
                continue
            bound = fac.cauchy_bound()
            nf.refine_below(Fraction(1, 1000))
            assert nf.interval[0] > bound or nf.min_poly.degree == 1


def test_left_pf_eigenvector_three_letter():
    nf = perron_data(THREE)
    vec = left_pf_eigenvector(THREE, nf)
    # paper display: (1, (-1+sqrt(13))/2, (5-sqrt(13))/2) = (1, l-2, 4-l)
    assert vec[0] == 1
    assert vec[1].coeffs == (Fraction(-2), Fraction(1))
    assert vec[2].coeffs == (Fraction(4), Fraction(-1))
    assert integer_form(vec) is None


def test_left_pf_eigenvector_rational():
    nf = perron_data(MT)
    vec = left_pf_eigenvector(MT, nf)
    assert [v.as_fraction() for v in vec] == [1, Fraction(2, 3),
                                              Fraction(4, 3), 1]
    assert integer_form(vec) == (3, 2, 4, 3)


def test_left_pf_eigenvector_noncon_is_golden():
    # derived: (1, g, g, g) with g = (1+sqrt 5)/2 and lambda = g^2
    nf = perron_data(NONCON)
    vec = left_pf_eigenvector(NONCON, nf)
    g = nf.generator() - 1
    assert vec == [nf.one(), g, g, g]
    assert (g * g) == g + 1  # golden ratio identity


def test_eigen_equation_exact(corpus):
    for subst in corpus.values():
        a = subst.transition_matrix()
        nf = perron_data(a)
        vec = left_pf_eigenvector(a, nf)
        lam = nf.generator()
        n = len(a)
        for j in range(n):
            lhs = sum((vec[i] * a[i][j] for i in range(n)), nf.zero())
            assert lhs == lam * vec[j]


def test_classify_ex1():
    report = classify_spectrum(EX1, constant_length=False)
    assert report.charpoly_irreducible
    assert report.pisot_type_literal
    assert report.kinds() == {"perron": 1, "small": 1}
    assert (report.dim_large, report.dim_small) == (0, 1)


def test_classify_three_letter():
    report = classify_spectrum(THREE)
    assert not report.charpoly_irreducible
    assert not report.pisot_type_literal  # eigenvalue 1 sits on the circle
    assert report.kinds() == {"perron": 1, "unit": 1, "small": 1}
    assert report.dim_large == 1


def test_classify_mt():
    report = classify_spectrum(MT)
    assert report.kinds() == {"perron": 1, "unit": 1, "zero": 2}
    assert not report.pisot_type_literal
    assert not report.pisot_type_allowing_zero  # the unit eigenvalue blocks it


def test_classify_zero_tolerant_variant():
    # x^2 (x^2 - 3x + 1): zeros plus a Pisot pair
    matrix = ((2, 1, 0, 1), (1, 1, 1, 0), (0, 0, 0, 0), (0, 0, 1, 0))
    cp = char_poly(matrix)
    assert cp == P(0, 0, 1, -3, 1)
    report = classify_spectrum(matrix)
    assert not report.pisot_type_literal
    assert report.pisot_type_allowing_zero


def test_classify_complex_quartic():
    # companion-style matrix of x^4 - x^3 - 1: one real pair off the circle
    # and one complex pair with |z|^2 ~ 0.884
    subst = parse_substitution("1 -> 14\n2 -> 1\n3 -> 2\n4 -> 3")
    report = classify_spectrum(subst.transition_matrix())
    assert report.charpoly_irreducible
    kinds = report.kinds()
    assert kinds["perron"] == 1
    assert kinds["small"] == 3  # negative real ~ -0.82 plus the complex pair


def test_classify_undecidable_salem_like():
    # x^4 - x^3 - x^2 - x + 1 is irreducible, self-reciprocal, and not
    # cyclotomic: its complex pair lies exactly on the unit circle
    companion = ((0, 0, 0, -1), (1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1))
    assert char_poly(companion) == P(1, -1, -1, -1, 1)
    with pytest.raises(Undecidable):
        classify_spectrum(companion)


def test_classify_random_small_matrices():
    rng = random.Random(5)
    done = 0
    while done < 25:
        n = rng.randint(2, 3)
        matrix = tuple(tuple(rng.randint(0, 2) for _ in range(n))
                       for _ in range(n))
        pattern = matrix
        primitive = False
        for _ in range((n - 1) ** 2 + 1):
            if all(all(v for v in row) for row in pattern):
                primitive = True
                break
            pattern = mat_mul(pattern, matrix)
        if not primitive:
            continue
        report = classify_spectrum(matrix)
        total = sum(rc.multiplicity for rc in report.roots)
        assert total == n
        assert report.kinds().get("perron") == 1
        assert report.dim_large + report.dim_small == n - 1
        done += 1
