"""Fractional edge covers via the exact-rational simplex."""
from fractions import Fraction

from witness_lab.linprog import agm_bound_holds, fractional_edge_cover, lp_min
from witness_lab.qparser import parse_query

from corpus import WORKED_TEXT


def test_lp_min_small_system():
    # min x + y subject to x + 2y >= 2, 2x + y >= 2, x,y >= 0
    one, two = Fraction(1), Fraction(2)
    zero = Fraction(0)
    rows = [[one, two, -one, zero], [two, one, zero, -one]]
    value, solution = lp_min(rows, [two, two], [one, one, zero, zero])
    assert value == Fraction(4, 3)
    assert solution[0] == solution[1] == Fraction(2, 3)


def test_cover_of_single_atom():
    assert fractional_edge_cover(parse_query("Q(A) :- R(A, B)")) == 1


def test_cover_of_paths():
    two_path = "Q(A, C) :- R1(A, B), R2(B, C)"
    assert fractional_edge_cover(parse_query(two_path)) == 2
    three_path = "Q(A1, A4) :- R1(A1, A2), R2(A2, A3), R3(A3, A4)"
    assert fractional_edge_cover(parse_query(three_path)) == 2
    four_path = "Q(A1, A5) :- R1(A1, A2), R2(A2, A3), R3(A3, A4), R4(A4, A5)"
    assert fractional_edge_cover(parse_query(four_path)) == 3


def test_cover_of_triangle_is_fractional():
    triangle = "Q(A, B, C) :- R1(A, B), R2(B, C), R3(A, C)"
    assert fractional_edge_cover(parse_query(triangle)) == Fraction(3, 2)


def test_cover_of_worked_example():
    assert fractional_edge_cover(parse_query(WORKED_TEXT)) == 3


def test_cover_ignores_head_choice():
    """Coverage constraints range over all attributes, so the head plays
    no part."""
    full = parse_query("Q(A, B, C) :- R1(A, B), R2(B, C)")
    boolean = parse_query("Q() :- R1(A, B), R2(B, C)")
    assert fractional_edge_cover(full) == fractional_edge_cover(boolean) == 2


def test_agm_bound_exact_integers():
    assert agm_bound_holds(3, 9, Fraction(2))      # 3^2 == 9
    assert not agm_bound_holds(3, 10, Fraction(2))  # 3^2 < 10
    assert agm_bound_holds(4, 8, Fraction(3, 2))    # 4^3 == 64 == 8^2
    assert not agm_bound_holds(4, 9, Fraction(3, 2))
    assert agm_bound_holds(0, 0, Fraction(1))       # empty result, any size
    # large values must stay exact, no floating point
    assert agm_bound_holds(10**6, 10**12, Fraction(2))
    assert not agm_bound_holds(10**6, 10**12 + 1, Fraction(2))
