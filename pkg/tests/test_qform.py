from fractions import Fraction

import numpy as np
import pytest
from conftest import rand_sym
from hypothesis import given
from hypothesis import strategies as st
from oracles import interp_charpoly, shifted_det, sturm_signature

from quadtope.errors import DegeneracyError, FormError, SizeLimitError
from quadtope.poly import MultiPoly, var
from quadtope.qform import (
    QuadFamily,
    QuadForm,
    char_poly,
    eigen_decomp,
    form_from_poly,
    index_descartes,
    index_from_signs,
    omega_combine,
    positive_eigenspace,
    signature_of,
    symbolic_H,
)

y0, y1, y2 = var("y0"), var("y1"), var("y2")


def test_form_from_poly_examples():
    assert form_from_poly(y0**2 + y1**2 + y2**2) == QuadForm.identity(3)
    assert form_from_poly(y0 * y1 * 2).matrix == ((0, 1), (1, 0))
    got = form_from_poly(y0**2 - y0 * y2 * 4 + y2**2)
    assert got.matrix == ((1, 0, -2), (0, 0, 0), (-2, 0, 1))
    with pytest.raises(FormError):
        form_from_poly(y0**2 + y1)


def test_form_evaluation_identity(rng):
    for _ in range(20):
        q = QuadForm(rand_sym(rng, 4))
        p = q.to_poly()
        y = [Fraction(int(v), 3) for v in rng.integers(-6, 7, size=4)]
        assert p.eval({f"y{i}": y[i] for i in range(4)}) == q(y)
        assert form_from_poly(p, 4) == q


def test_asymmetric_matrix_rejected():
    with pytest.raises(FormError):
        QuadForm(((1, 2), (3, 4)))


def test_char_poly_examples():
    assert char_poly(QuadForm.identity(3)).coeffs == (3, 3, 1)
    assert char_poly(QuadForm.diag([0, 0])).coeffs == (0, 0)
    assert char_poly(QuadForm.diag([1, -2, 3])).coeffs == (2, -5, -6)


def test_index_examples():
    assert index_descartes(char_poly(QuadForm.identity(4))) == (0, 0, 4)
    assert index_descartes(char_poly(-QuadForm.identity(3))) == (3, 0, 0)
    assert index_descartes(char_poly(QuadForm.diag([1, -2, 3]))) == (1, 0, 2)
    assert index_from_signs([0, 0]) == (0, 2, 0)


@given(st.integers(2, 7), st.integers(0, 10**6))
def test_char_poly_matches_determinant_oracle(n, seed):
    g = np.random.default_rng(seed)
    m = rand_sym(g, n)
    c = char_poly(QuadForm(m))
    for t in (Fraction(-3, 2), Fraction(1, 3), Fraction(5)):
        assert c(t) == shifted_det(m, t)
    assert list((1,) + c.coeffs) == interp_charpoly(m)


@given(st.integers(2, 6), st.integers(0, 10**6), st.fractions(min_value=Fraction(1, 9), max_value=9))
def test_index_scale_invariant_and_matches_sturm(n, seed, c):
    g = np.random.default_rng(seed)
    m = rand_sym(g, n, den=1)
    if g.random() < 0.3:
        # force rank deficiency
        m[-1] = list(m[0])
        for i in range(n):
            m[i][-1] = m[i][0]
        m[-1][-1] = m[0][0]
    q = QuadForm(m)
    s = signature_of(q)
    assert tuple(s) == sturm_signature(m)
    assert signature_of(q.scale(c)) == s


def test_eigen_decomp_examples():
    dec = eigen_decomp(QuadForm.diag([1, -2, 3]))
    assert np.allclose(dec.values, [-2, 1, 3])
    assert np.allclose(np.abs(dec.frame), np.eye(3)[:, [1, 0, 2]])
    assert positive_eigenspace(-QuadForm.identity(3)).shape == (3, 0)
    assert positive_eigenspace(QuadForm.identity(3)).shape == (3, 3)
    basis = positive_eigenspace(QuadForm.diag([1, -2, 3]))
    assert np.allclose(np.abs(basis), np.eye(3)[:, [0, 2]])


def test_eigen_signs_match_exact(rng):
    for _ in range(40):
        q = QuadForm(rand_sym(rng, 5))
        try:
            dec = eigen_decomp(q)
        except DegeneracyError:
            continue
        s = dec.signature
        assert (dec.values < 0).sum() == s.neg
        assert (dec.values == 0).sum() == s.zero
        assert np.allclose(dec.frame.T @ dec.frame, np.eye(5), atol=1e-9)
        m = q.to_numpy()
        assert np.allclose(m @ dec.frame, dec.frame * np.where(dec.values == 0, 0, dec.values), atol=1e-7)


def test_eigen_tol_must_be_positive():
    with pytest.raises(FormError):
        eigen_decomp(QuadForm.identity(2), tol=0)


def _pencil():
    x = var("x1")
    return QuadFamily([[[1, 0], [0, x]], [[x * x, 1], [1, -1]]], k=1)


def test_family_basics_and_json():
    fam = _pencil()
    assert (fam.m, fam.l, fam.k, fam.d) == (2, 1, 1, 2)
    assert fam.at((2,))[1] == ((4, 1), (1, -1))
    assert QuadFamily.from_json(fam.to_json()) == fam
    polys = fam.to_polys()
    assert QuadFamily.from_polys(polys, l=1, k=1) == fam
    with pytest.raises(FormError):
        fam.at((1, 2))
    with pytest.raises(FormError):
        QuadFamily([[[var("y1")]]])


def test_omega_combine():
    fam = _pencil()
    assert omega_combine(fam, (1, 0), (3,)) == fam.form(0, (3,))
    assert omega_combine(fam, (0, 0), (3,)) == QuadForm.diag([0, 0])
    w = (Fraction(-7, 10), Fraction(-7, 10))
    got = omega_combine(fam, w, (1,))
    assert got.matrix == ((Fraction(-14, 10), Fraction(-7, 10)), (Fraction(-7, 10), 0))
    with pytest.raises(FormError):
        omega_combine(fam, (1,), (1,))


def test_symbolic_H_single_identity():
    fam = QuadFamily.from_polys([y0**2 + y1**2 + y2**2], l=2)
    z = var("z1")
    assert symbolic_H(fam, [1]) == [z * 3, z**2 * 3, z**3]


def test_symbolic_H_specializes(rng):
    fam = _pencil()
    H = symbolic_H(fam, [1, 2])
    for _ in range(20):
        z = [Fraction(int(v), 4) for v in rng.integers(-8, 9, size=2)]
        x = (Fraction(int(rng.integers(-8, 9)), 3),)
        pt = {"z1": z[0], "z2": z[1], "x1": x[0]}
        assert [h.eval(pt) for h in H] == list(char_poly(omega_combine(fam, z, x)).coeffs)
    H1 = symbolic_H(fam, [1])
    assert [h.subs({"z2": 0}) for h in H] == H1


def test_symbolic_H_cap():
    fam = _pencil()
    with pytest.raises(SizeLimitError):
        symbolic_H(fam, [1, 2], cap=1)
    with pytest.raises(FormError):
        symbolic_H(fam, [])
