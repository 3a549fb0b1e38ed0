import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aqclin.pauli_expr import PauliExpr, PauliSyntaxError, format_expr, parse, to_matrix

# naive oracle: <r|P1 x ... x Pn|c> = prod_k P_k[r_k, c_k], bit 0 = leftmost letter
_P = {
    "I": [[1, 0], [0, 1]],
    "X": [[0, 1], [1, 0]],
    "Y": [[0, -1j], [1j, 0]],
    "Z": [[1, 0], [0, -1]],
}


def naive_matrix(terms, divisor):
    n = len(terms[0][1])
    dim = 2**n
    m = np.zeros((dim, dim), dtype=complex)
    for r, c in itertools.product(range(dim), repeat=2):
        total = 0j
        for coeff, word in terms:
            val = 1 + 0j
            for k, letter in enumerate(word):
                shift = n - 1 - k
                val *= _P[letter][(r >> shift) & 1][(c >> shift) & 1]
            total += coeff * val
        m[r, c] = total / divisor
    return m


def test_parse_paper_instance_one():
    e = parse("(3III+XII-2XYI+3XYZ)/4")
    assert e.n_qubits == 3
    assert e.divisor == 4
    assert [c for c, _ in e.terms] == [3, 1, -2, 3]
    assert [w for _, w in e.terms] == ["III", "XII", "XYI", "XYZ"]


def test_parse_identity_word():
    e = parse("II")
    assert e.terms == ((1.0, "II"),) and e.divisor == 1 and e.n_qubits == 2


def test_merge_duplicate_words():
    e = parse("(XY+XY)/2")
    assert e.terms == ((2.0, "XY"),) and e.divisor == 2
    np.testing.assert_array_equal(to_matrix(e), to_matrix(parse("XY")))


def test_zero_terms_dropped():
    assert parse("XZ-XZ+ZZ").terms == ((1.0, "ZZ"),)


@pytest.mark.parametrize("text", ["3*XY - 2 ZZ", " ( 1.5XX + .5 YY ) / 2 ", "-Z", "+2.5e-1XI"])
def test_whitespace_star_and_signs(text):
    e = parse(text)
    assert parse(format_expr(e)) == e


def test_format_examples():
    assert format_expr(parse("Z")) == "Z"
    assert format_expr(parse("(XY+XY)/2")) == "(2XY)/2"
    text = "(3II+2ZI+3XI-3XY)/4"
    assert format_expr(parse(text)) == text
    assert format_expr(parse("(-ZI+0.25XX)/3")) == "(-ZI+0.25XX)/3"


@pytest.mark.parametrize(
    "text, fragment, pos",
    [
        ("(XY+Z)/2", "length 1", 4),
        ("(XY)/0", "zero divisor", 5),
        ("2jXY", "complex", 1),
        ("XY+", "expected 'word'", 3),
        ("XY Q", "unexpected character", 3),
        ("(XY", "expected ')'", 3),
        ("", "empty", 0),
        ("(XY)/-2", "expected 'number'", 5),
        ("XY ZZ", "expected 'end'", 3),
    ],
)
def test_errors_carry_position(text, fragment, pos):
    with pytest.raises(PauliSyntaxError) as info:
        parse(text)
    assert fragment in str(info.value)
    assert info.value.pos == pos


def test_qubit_cap():
    with pytest.raises(PauliSyntaxError, match="exceeds"):
        parse("I" * 13)
    assert parse("I" * 13, max_qubits=13).n_qubits == 13


def test_expr_rejects_bad_construction():
    with pytest.raises(ValueError):
        PauliExpr(((1.0, "XQ"),), 1.0, 2)
    with pytest.raises(ValueError):
        PauliExpr(((1.0, "XX"),), 0.0, 2)


def test_z_matrix():
    np.testing.assert_array_equal(to_matrix(parse("Z")), np.diag([1, -1]))


def test_trace_of_instance_one():
    assert np.trace(to_matrix(parse("(3III+XII-2XYI+3XYZ)/4"))) == pytest.approx(6)


def test_xy_by_hand():
    # X (x) Y = [[0, Y], [Y, 0]], Y = [[0, -i], [i, 0]]
    expected = np.array(
        [[0, 0, 0, -1j], [0, 0, 1j, 0], [0, -1j, 0, 0], [1j, 0, 0, 0]], dtype=complex
    )
    np.testing.assert_array_equal(to_matrix(parse("XY")), expected)


def test_leftmost_letter_is_most_significant():
    np.testing.assert_array_equal(to_matrix(parse("ZI")), np.diag([1, 1, -1, -1]))


words = st.integers(1, 3).flatmap(
    lambda n: st.lists(
        st.tuples(st.integers(-9, 9), st.text("IXYZ", min_size=n, max_size=n)),
        min_size=1,
        max_size=5,
    )
)


def render(terms, divisor):
    body = "".join(("+" if c >= 0 else "-") + str(abs(c)) + w for c, w in terms)
    return f"({body})/{divisor}"


@settings(max_examples=200, deadline=None)
@given(words, st.integers(1, 8))
def test_matches_naive_oracle(terms, divisor):
    m = to_matrix(parse(render(terms, divisor)))
    np.testing.assert_allclose(m, naive_matrix(terms, divisor), atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(words, st.integers(1, 8))
def test_round_trip_and_hermitian(terms, divisor):
    e = parse(render(terms, divisor))
    e2 = parse(format_expr(e))
    assert e2 == e
    m = to_matrix(e)
    np.testing.assert_array_equal(to_matrix(e2), m)
    np.testing.assert_array_equal(m, m.conj().T)
    ident = sum(c for c, w in e.terms if set(w) == {"I"})
    assert np.trace(m).real == pytest.approx(2**e.n_qubits * ident / e.divisor, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.lists(st.tuples(st.integers(-5, 5), st.text("IXYZ", min_size=n, max_size=n)), min_size=1, max_size=4),
    st.lists(st.tuples(st.integers(-5, 5), st.text("IXYZ", min_size=n, max_size=n)), min_size=1, max_size=4),
)))
def test_linearity(pair):
    t1, t2 = pair
    joined = parse(render(t1 + t2, 1))
    np.testing.assert_allclose(
        to_matrix(joined), naive_matrix(t1, 1) + naive_matrix(t2, 1), atol=1e-14
    )
