import pytest

from quatbend.exact_arith import Matrix
from quatbend.quaternion import PellElement
from quatbend.surface import (BendError, CurveDatum, Presentation, Representation, WordError,
                              WordMap, bend, check_distinct, check_relator, commutator, compose,
                              cyclic_reduce, evaluate_word, format_word, free_reduce,
                              invert_word, is_conjugate, load_datum, parse_datum, parse_word,
                              precompose, representation_from_datum, surface_relator)
from quatbend.symplectic.centralizer import b_search
from quatbend.symplectic.forms import form_K
from quatbend.symplectic.model import rho


def w(text):
    return parse_word(text)


def test_parse_and_format():
    assert w("a b^-1 c^{2}") == (("a", 1), ("b", -1), ("c", 1), ("c", 1))
    assert w("1") == ()
    assert format_word(w("a a b^-1")) == "a^2 b^-1"
    with pytest.raises(WordError):
        w("a^x")


def test_reductions():
    assert free_reduce(w("a b b^-1 a^-1 c")) == w("c")
    assert invert_word(w("a b")) == w("b^-1 a^-1")
    assert cyclic_reduce(w("a b c a^-1")) == w("b c")
    assert is_conjugate(w("a b c"), w("c a b"))
    assert not is_conjugate(w("a b"), w("a b^-1"))
    assert surface_relator(1) == commutator(w("a1"), w("b1"))
    assert len(surface_relator(2)) == 8


def test_curve_validation():
    pres = Presentation(("a1", "b1", "a2", "b2"), surface_relator(2))
    sep = CurveDatum(commutator(w("a1"), w("b1")), "separating", ("a1", "b1"), ("a2", "b2"))
    sep.validate(pres)
    with pytest.raises(WordError):
        CurveDatum(w("a1"), "separating", ("a1", "b1"), ("a2", "b2")).validate(pres)
    with pytest.raises(WordError):
        CurveDatum(w("a1"), "nonseparating", stable="a1").validate(pres)


@pytest.fixture(scope="module")
def datum(data_dir):
    return load_datum(data_dir / "free_j.ini")


def test_datum(datum, model31):
    rep = representation_from_datum(datum, model31)
    A = model31.algebra
    assert rep.image("g") == rho(model31, A(2, 1))
    assert rep.image("h") == rho(model31, A(0, 0, 1))
    assert "twist" in datum.automorphisms


def test_bad_datum():
    with pytest.raises(WordError):
        parse_datum("[presentation]\ngenerators = g\n[assignment]\ng = 1 0 0\n"
                    "[curve]\nword = g\nkind = nonseparating\nstable = g\n")


def test_bend_identity_and_inverse(datum, model31):
    rep = representation_from_datum(datum, model31)
    assert bend(rep, datum.curve, Matrix.identity(4)) == rep
    B = b_search(model31, PellElement(model31.algebra(2, 1)), 1)[0].matrix
    bent = bend(rep, datum.curve, B)
    assert bent.image("g") == rep.image("g")
    assert bent.image("h") == rep.image("h") * B
    back = bend(bent, datum.curve, rep.form.inverse_transform(B))
    assert back == rep
    assert check_distinct(rep, bent)


def test_bend_rejects(datum, model31):
    rep = representation_from_datum(datum, model31)
    with pytest.raises(BendError):
        bend(rep, datum.curve, rho(model31, model31.algebra(0, 0, 1)))


def test_precompose_and_compose(datum, model31):
    rep = representation_from_datum(datum, model31)
    twist = datum.automorphisms["twist"]
    r1 = precompose(rep, twist)
    assert r1.image("h") == rep.image("h") * rep.image("g")
    m2 = WordMap({"g": w("g h")})
    assert precompose(precompose(rep, twist), m2) == precompose(rep, compose(twist, m2))


def torus_rep():
    K = form_K(1)
    pres = Presentation(("a1", "b1"), surface_relator(1))
    A = Matrix([[2, 1], [1, 1]])
    return Representation(pres, (A, A * A), K)


def test_relator():
    rep = torus_rep()
    assert check_relator(rep)
    assert evaluate_word(rep, "a1 a1^-1").is_identity()
    with pytest.raises(ValueError):
        Representation(rep.presentation, (Matrix([[1, 1], [0, 1]]), Matrix([[1, 0], [1, 1]])),
                       rep.form)


def test_separating_bend():
    g = Matrix([[2, 1], [1, 1]])
    K = form_K(1)
    pres = Presentation(("a1", "b1", "a2", "b2"), surface_relator(2))
    rep = Representation(pres, (g, g * g, g, g ** 3), K)
    curve = CurveDatum(commutator(w("a1"), w("b1")), "separating", ("a1", "b1"), ("a2", "b2"))
    B = Matrix([[1, 1], [0, 1]])
    bent = bend(rep, curve, B)
    assert check_relator(bent)
    assert bent.image("a2") == B * g * K.inverse_transform(B)
    assert bent.image("a1") == g
