import sympy
import pytest

from common.errors import WordSyntaxError, UnsupportedParameterError
from modules.moebius.ParameterSpace import TraceParams
from modules.words.GroupWord import (parse_word, asWord, is_good, is_good_under_involution, compose_words,
                                     evaluate_gamma, named_word, good_word_family)
from modules.words.TracePolynomial import (Z, BETA, trace_polynomial, order42_identities, ORDER42_WORDS,
                                           ORDER42_KEYS, polynomial_of, order42_word)


def test_parse_and_compact():
    w = parse_word("abA")
    assert str(w) == "aba^-1"
    assert w.compact() == "abA"
    assert parse_word("a b^-1 a") == parse_word("aBa")
    assert parse_word("a^2 a^-1 b") == parse_word("ab")
    assert len(parse_word("ab^-2a")) == 4


def test_parse_errors():
    with pytest.raises(WordSyntaxError) as err:
        parse_word("abx")
    assert err.value.position == 2
    with pytest.raises(WordSyntaxError) as err:
        parse_word("   ")
    assert err.value.position == 0
    with pytest.raises(WordSyntaxError):
        parse_word("aA")


def test_good_words():
    assert is_good("aba^-1")
    assert is_good("aba^-1b^-1a")
    assert is_good("bab^-1a^-1b")
    assert not is_good("abab")
    assert not is_good("aba")
    assert is_good_under_involution("aba")
    assert not is_good_under_involution("a^2ba^2")


def test_named_words():
    assert str(named_word("conjugate")) == "aba^-1"
    assert asWord("double") == parse_word("aba^-1ba")
    with pytest.raises(UnsupportedParameterError):
        named_word("nope")


def test_compose_words_example():
    word, strict = compose_words("aba^-1", "aba^-1")
    assert str(word) == "aba^-1bab^-1a^-1"
    assert strict


def test_compose_rejects_bad_words():
    with pytest.raises(WordSyntaxError):
        compose_words("a^2b", "aba^-1")


def test_evaluate_gamma():
    assert evaluate_gamma("abA", TraceParams(1 + 1j, 0)) == pytest.approx(2j)
    b = 0.3 + 0.2j
    assert abs(evaluate_gamma("aba^-1ba", TraceParams(1 + b, b))) < 1e-9


@pytest.mark.parametrize("word, expected", [
    ("aba^-1", Z**2 - BETA*Z),
    ("aba^-1b^-1a", Z*(1 - 2*BETA + 2*Z - BETA*Z + Z**2)),
    ("bab^-1a^-1b", Z*(1 - 2*BETA + 2*Z - BETA*Z + Z**2)),
    ("aba^-1ba", Z*(1 + BETA - Z)**2),
])
def test_golden_polynomials(word, expected):
    poly = trace_polynomial(word)
    assert sympy.expand(poly.to_sympy() - expected) == 0


def test_polynomial_vanishes_at_zero():
    for w in good_word_family(2, b_exponents=(1, -1)):
        poly = trace_polynomial(w)
        assert all(i > 0 for i, _ in poly.coefficients)


def test_restrict_to_integer_beta():
    poly = trace_polynomial("abA").restrict(-3)
    assert sympy.expand(poly.to_sympy() - (Z**2 + 3*Z)) == 0


def test_at_beta_matches_evaluate():
    poly = trace_polynomial("aba^-1b^-1a")
    b = -0.5 + 0.25j
    z = 0.3 - 1.1j
    assert complex(poly.at_beta(b)(z)) == pytest.approx(complex(poly.evaluate(z, b)))


@pytest.mark.parametrize("w1", ["aba^-1", "ab^-1a^-1", "aba^-1b^-1a"])
@pytest.mark.parametrize("w2", ["aba^-1", "ab^-1a^-1", "aba^-1ba"])
def test_composition_law(w1, w2):
    word, strict = compose_words(w1, w2)
    assert strict
    composed = trace_polynomial(w1).compose(trace_polynomial(w2))
    assert trace_polynomial(word) == composed


@pytest.mark.slow
def test_composition_law_random_pairs(rng):
    family = good_word_family(3, b_exponents=(1, -1))
    for _ in range(50):
        i, j = rng.integers(len(family), size=2)
        word, strict = compose_words(family[i], family[j])
        assert strict
        composed = trace_polynomial(family[i]).compose(trace_polynomial(family[j]))
        assert trace_polynomial(word) == composed


def test_long_word_recovers():
    word, _ = order42_word("(ab)^3(ab^-1)^3(ab)^3a")
    poly = trace_polynomial(word)
    assert poly.zDegree == 10
    assert trace_polynomial(word) is poly


def test_composition_example_polynomial():
    word, _ = compose_words("aba^-1", "aba^-1")
    p = Z*(Z - BETA)
    expected = p*(p - BETA)
    assert sympy.expand(trace_polynomial(word).to_sympy() - expected) == 0


@pytest.mark.parametrize("selector", ORDER42_KEYS)
def test_order42_identities(selector):
    poly = order42_identities(selector)
    assert sympy.expand(poly.to_sympy() - ORDER42_WORDS[selector][1]) == 0


def test_order42_selector_by_index():
    assert order42_identities(2) == order42_identities("(ab)^3a")
    with pytest.raises(UnsupportedParameterError):
        order42_identities(5)


def test_polynomial_of_matches_direct_evaluation(rng):
    poly = polynomial_of("twelve")
    for _ in range(10):
        z = complex(*rng.uniform(-1.5, 1.5, 2))
        b = complex(*rng.uniform(-1.5, 1.5, 2))
        expected = evaluate_gamma("twelve", TraceParams(z, b))
        assert abs(complex(poly.evaluate(z, b)) - expected) <= 1e-7*(1 + abs(expected))


def test_trace_polynomial_rejects_bad_word():
    with pytest.raises(UnsupportedParameterError):
        trace_polynomial("a^2ba^2")


def test_good_word_family():
    assert len(good_word_family(1)) == 4
    assert len(good_word_family(2)) == 20
    assert all(w.isStrictlyGood() for w in good_word_family(2))
    with pytest.raises(UnsupportedParameterError):
        good_word_family(0)
