from fractions import Fraction

import pytest

from mtc.exactalg import X1, X2, TensorElem
from mtc.petri_wendl.petri import petri_kernel_basis
from mtc.petri_wendl.series import (
    PARITIES,
    big_p_poly,
    coefficient_series,
    completed_square,
    effective_range,
    mirror_index,
    p_poly,
    q_independence_check,
    q_polynomials,
    select_parities,
    series_report,
)


def test_symmetric_element_series(b_sym):
    series = coefficient_series(b_sym, 0, 0)
    assert [series(m) for m in range(3)] == [Fraction(1, 4), Fraction(1, 20), Fraction(1, 60)]
    for m in range(21):
        assert series(m) == Fraction(6, (m + 1) * (m + 2) * (m + 3) * (m + 4))
    assert not series.is_identically_zero()
    with pytest.raises(ValueError):
        series(-1)


def test_antisymmetric_element_series(b1):
    series = coefficient_series(b1, 0, 0)
    assert series.present
    assert series.is_identically_zero()
    assert series.values(2) == [0, 0, 0]
    assert not series.numerator()


def test_series_numerator(b_sym):
    series = coefficient_series(b_sym, 0, 0)
    numerator = series.numerator()
    for m in range(6):
        denominator = 1
        for l in effective_range(2, 0, 0):
            denominator *= p_poly(2, 0, 0, m, l)
        value = sum((c * m**e1 for (e1, _), c in numerator), Fraction(0))
        assert value / denominator == series(m)


def test_denominators_positive():
    for d in range(0, 6):
        for alpha, beta in PARITIES:
            for m in range(51):
                for l in range(51):
                    P = big_p_poly(d, alpha, beta, m, l)
                    assert P == completed_square(d, alpha, beta, m, l)
                    if d or (alpha, beta) == (0, 0):
                        assert P > 0, f"P({m}, {l}) for d={d}, ({alpha}, {beta})"
            for m in range(20):
                for l in effective_range(d, alpha, beta):
                    assert p_poly(d, alpha, beta, m, l) != 0


def test_mirror_symmetry():
    for d in range(0, 5):
        for alpha, beta in PARITIES:
            qs = q_polynomials(d, alpha, beta)
            for l in effective_range(d, alpha, beta):
                mirrored = mirror_index(d, alpha, beta, l)
                assert mirrored in qs
                assert qs[l] == qs[mirrored]


def test_q_independence():
    assert q_independence_check(0)
    # Every l has a mirror partner, so the raw family repeats itself.
    for d in range(1, 5):
        assert not q_independence_check(d)
    for d in range(0, 7):
        for alpha, beta in PARITIES:
            assert q_independence_check(d, alpha, beta, merge_mirror=True), f"d={d}, ({alpha}, {beta})"


def test_zero_count_bound():
    for d in (1, 2, 3):
        for element in petri_kernel_basis(d):
            for alpha, beta in PARITIES:
                series = coefficient_series(element, alpha, beta)
                if not series.is_identically_zero():
                    assert series.zero_count(4 * d + 10) <= 4 * d + 2


def test_series_report(b_sym):
    report = series_report(b_sym)
    assert report["selected"] == [0, 0]
    assert report["m_max"] == 18
    first = report["families"][0]
    assert (first["alpha"], first["beta"]) == (0, 0)
    assert first["present"] and not first["identically_zero"]
    assert first["values"][:3] == ["1/4", "1/20", "1/60"]
    assert first["zero_count"] == 0
    assert first["within_bound"]
    assert report["zero_bound"] == 10
    assert report["passed"]
    assert not report["families"][1]["present"]


def test_select_parities(b1, b_sym):
    assert select_parities(b1) == (0, 0)
    assert select_parities(b_sym) == (0, 0)


def test_select_parities_picks_a_present_family():
    crossed = TensorElem([(1, X1, X2), (1, X2, X1)])
    present = {(a, b) for a, b in PARITIES if coefficient_series(crossed, a, b).present}
    assert present == {(0, 1), (1, 0)}
    assert select_parities(crossed) == (0, 1)
