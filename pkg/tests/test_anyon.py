"""Tabulated-data tests: fusion, dimensions, bubbles, signs, R and F."""
import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from nss import (ALPHA, P2, PSI, S32, SIGMA, VACUUM, IntegerAlpha, ModelParams,
                 UnsupportedFamily, UnsupportedPair, UnsupportedTriple,
                 bubble_pop, f_matrix, fuse, modified_dimension,
                 pentagon_sweep, q_power, r_symbol, s_sign, t_sign)
from nss.anyon import computational_bubbles

RNG = np.random.default_rng(7)


def sample_alphas(n, lo=2.0, hi=3.0):
    return lo + 1e-3 + (hi - lo - 2e-3) * RNG.random(n)


# ---------------------------------------------------------------------------
# fusion
# ---------------------------------------------------------------------------

def test_fusion_examples():
    assert fuse(SIGMA, SIGMA) == (VACUUM, PSI)
    assert fuse(ALPHA, VACUUM) == (ALPHA,)
    assert fuse(ALPHA, PSI) == (ALPHA.shifted(2), ALPHA, ALPHA.shifted(-2))
    assert fuse(ALPHA, SIGMA) == (ALPHA.shifted(1), ALPHA.shifted(-1))
    assert fuse(SIGMA, PSI) == (SIGMA, S32)
    assert fuse(PSI, PSI) == (VACUUM, P2)


def test_fusion_symmetric_pairs():
    for a, b in [(ALPHA, SIGMA), (ALPHA, PSI), (SIGMA, PSI)]:
        assert set(fuse(a, b)) == set(fuse(b, a))


def test_fusion_closure_keeps_alpha_noninteger():
    # integer shifts of a non-integer alpha stay non-integer
    out = fuse(ALPHA.shifted(3), PSI)
    assert all(l.is_alpha for l in out)
    al = 2.4
    assert all(abs(l.value(al) - round(l.value(al))) > 0.1 for l in out)


def test_fusion_unsupported():
    with pytest.raises(UnsupportedPair):
        fuse(S32, S32)
    with pytest.raises(UnsupportedPair):
        fuse(ALPHA, ALPHA.shifted(1))


# ---------------------------------------------------------------------------
# modified dimension
# ---------------------------------------------------------------------------

def test_dimension_at_twelve_fifths_is_minus_four():
    assert modified_dimension(12 / 5) == pytest.approx(-4.0, abs=1e-12)


def test_dimension_at_one_half():
    assert modified_dimension(0.5) == pytest.approx(-4 * math.sin(math.pi / 8), abs=1e-14)


def test_dimension_against_high_precision_oracle():
    # independent arbitrary-precision evaluation of the same formula
    mp.mp.dps = 50
    want = float(-4 * mp.sin(mp.pi * mp.mpf("2.7") / 4) / mp.sin(mp.pi * mp.mpf("2.7")))
    assert modified_dimension(2.7) == pytest.approx(want, abs=1e-13)


def test_dimension_negative_on_definite_window():
    for al in sample_alphas(50):
        assert modified_dimension(float(al)) < 0


def test_dimension_integer_alpha_rejected():
    with pytest.raises(IntegerAlpha):
        modified_dimension(3.0)


# ---------------------------------------------------------------------------
# bubbles
# ---------------------------------------------------------------------------

def test_bubble_examples():
    p = ModelParams(2.4)
    assert bubble_pop(SIGMA, SIGMA, PSI, p) == pytest.approx(1.0)
    assert bubble_pop(SIGMA, SIGMA, VACUUM, p) == pytest.approx(-math.sqrt(2))
    assert bubble_pop(PSI, SIGMA, SIGMA, p) == pytest.approx(-1 / math.sqrt(2))
    assert bubble_pop(SIGMA, PSI, SIGMA, p) == pytest.approx(-math.sqrt(2))
    assert bubble_pop(ALPHA, VACUUM, ALPHA, p) == pytest.approx(1.0)


def test_bubble_down_step_oracle():
    # sqrt(2)/(-1 + cot(pi a/4)) at a = 12/5, checked in high precision
    p = ModelParams.from_string("12/5")
    mp.mp.dps = 50
    want = float(mp.sqrt(2) / (-1 + mp.cot(mp.pi * mp.mpf(12) / 5 / 4)))
    got = bubble_pop(ALPHA, SIGMA, ALPHA.shifted(-1), p)
    assert got == pytest.approx(want, abs=1e-13)
    assert got == pytest.approx(-1.0674, abs=2e-4)


def test_bubble_shifted_rows():
    p = ModelParams(2.4)
    # the a -> a+1 shifted down-step equals the closed-form coefficient pair
    bp, bm = computational_bubbles(p)
    assert bp == pytest.approx(math.sqrt(2) / (-1 + 1 / math.tan(math.pi * 3.4 / 4)))
    assert bm == pytest.approx(math.sqrt(2) / (-1 + 1 / math.tan(math.pi * 2.4 / 4)))
    assert bp < 0 and bm < 0


def test_bubble_unsupported():
    p = ModelParams(2.4)
    with pytest.raises(UnsupportedTriple):
        bubble_pop(SIGMA, SIGMA, SIGMA, p)
    with pytest.raises(UnsupportedTriple):
        bubble_pop(P2, P2, VACUUM, p)


def test_bubble_singular_guard():
    # alpha this close to a multiple of 4 passes parameter validation but
    # puts tan(pi a / 4) inside the tolerance band of the down-step formula
    from nss.errors import SingularParameter
    p = ModelParams(4 + 1.2e-10, tol=1e-10)
    with pytest.raises(SingularParameter):
        bubble_pop(ALPHA, SIGMA, ALPHA.shifted(-1), p)


# ---------------------------------------------------------------------------
# sign functions
# ---------------------------------------------------------------------------

def test_sign_examples():
    assert s_sign(2.4) == -1
    assert t_sign(2.4) == 1
    assert s_sign(5.5) == 1
    assert t_sign(1.5) == -1
    assert s_sign(0.5) == 1


def test_sign_periodicity():
    for al in RNG.random(100) * 8:
        if abs(al - round(al)) < 1e-3:
            continue
        assert s_sign(float(al)) == s_sign(float(al) + 8)
        assert t_sign(float(al)) == t_sign(float(al) + 4)


def test_sign_integer_rejected():
    with pytest.raises(IntegerAlpha):
        s_sign(2.0)
    with pytest.raises(IntegerAlpha):
        t_sign(4.0)


# ---------------------------------------------------------------------------
# R-symbols
# ---------------------------------------------------------------------------

def test_r_symbol_examples():
    p = ModelParams(2.4)
    assert r_symbol(SIGMA, SIGMA, PSI, p) == pytest.approx(cmath.exp(1j * math.pi / 8))
    # q^((3+a)/2) with a = 2.4 -> q^2.7
    assert r_symbol(ALPHA, SIGMA, ALPHA.shifted(1), p) == pytest.approx(q_power(2.7))
    # s_a q^(-(1+3a)/2) = -q^(-4.1) at a = 2.4
    assert r_symbol(ALPHA, SIGMA, ALPHA.shifted(-1), p) == pytest.approx(-q_power(-4.1))


def test_r_symbol_unit_modulus():
    rows = [(ALPHA, PSI, ALPHA.shifted(2)), (PSI, ALPHA, ALPHA.shifted(2)),
            (ALPHA, SIGMA, ALPHA.shifted(1)), (SIGMA, ALPHA, ALPHA.shifted(1)),
            (ALPHA, PSI, ALPHA), (PSI, ALPHA, ALPHA),
            (ALPHA, SIGMA, ALPHA.shifted(-1)), (SIGMA, ALPHA, ALPHA.shifted(-1)),
            (ALPHA, PSI, ALPHA.shifted(-2)), (PSI, ALPHA, ALPHA.shifted(-2)),
            (PSI, SIGMA, S32), (SIGMA, PSI, S32), (PSI, SIGMA, SIGMA),
            (SIGMA, PSI, SIGMA), (SIGMA, SIGMA, PSI), (SIGMA, SIGMA, VACUUM)]
    for al in sample_alphas(100):
        p = ModelParams(float(al))
        for b, a, c in rows:
            assert abs(abs(r_symbol(b, a, c, p)) - 1) < 1e-12


def test_r_symbol_unsupported():
    p = ModelParams(2.4)
    with pytest.raises(UnsupportedTriple):
        r_symbol(SIGMA, SIGMA, SIGMA, p)


# ---------------------------------------------------------------------------
# F-matrices
# ---------------------------------------------------------------------------

def test_f_one_dimensional_values():
    p = ModelParams(2.4)
    up = f_matrix(ALPHA, SIGMA, SIGMA, ALPHA.shifted(2), p)
    assert up.matrix[0, 0] == pytest.approx(1.0)
    assert up.rows == (PSI,) and up.cols == (ALPHA.shifted(1),)
    dn = f_matrix(ALPHA, SIGMA, SIGMA, ALPHA.shifted(-2), p)
    assert dn.matrix[0, 0] == pytest.approx(math.copysign(1.0, math.sin(math.pi * 2.4 / 2)))


def test_f_unnormalized_top_right_entry():
    # the (vacuum, a-1) slot of the raw table is -1/sqrt(2) after factoring
    from nss.anyon import _ftilde
    p = ModelParams(2.4)
    ft, rows, cols = _ftilde(ALPHA, SIGMA, SIGMA, ALPHA, p, __import__("nss.anyon", fromlist=["FLOAT_NS"]).FLOAT_NS)
    assert rows.index(VACUUM) == 0
    assert ft[0, 1] == pytest.approx(-1 / math.sqrt(2))


def test_f_inverse_and_pseudo_unitarity():
    fams = [(ALPHA, SIGMA, SIGMA, ALPHA),
            (ALPHA, PSI, SIGMA, ALPHA.shifted(1)), (ALPHA, PSI, SIGMA, ALPHA.shifted(-1)),
            (ALPHA, SIGMA, PSI, ALPHA.shifted(1)), (ALPHA, SIGMA, PSI, ALPHA.shifted(-1))]
    for al in sample_alphas(100):
        p = ModelParams(float(al))
        for a, b, c, d in fams:
            blk = f_matrix(a, b, c, d, p)
            m = np.asarray(blk.matrix, dtype=complex)
            assert np.allclose(m @ blk.inverse(), np.eye(2), atol=1e-10)
            jr = np.diag([math.copysign(1.0, bubble_pop(b, c, n, p) * bubble_pop(a, n, d, p))
                          for n in blk.rows])
            jc = np.diag([math.copysign(1.0, bubble_pop(a, b, mm, p) * bubble_pop(mm, c, d, p))
                          for mm in blk.cols])
            assert np.max(np.abs(m.conj().T @ jr @ m - jc)) < 1e-9


def test_f_vacuum_legs_are_units():
    p = ModelParams(2.4)
    blk = f_matrix(ALPHA, VACUUM, SIGMA, ALPHA.shifted(1), p)
    assert blk.matrix[0, 0] == pytest.approx(1.0)
    blk = f_matrix(VACUUM, SIGMA, SIGMA, PSI, p)
    assert blk.matrix[0, 0] == pytest.approx(1.0)


def test_f_unsupported_family():
    p = ModelParams(2.4)
    with pytest.raises(UnsupportedFamily):
        f_matrix(SIGMA, SIGMA, SIGMA, SIGMA, p)
    with pytest.raises(UnsupportedFamily):
        f_matrix(ALPHA, PSI, PSI, ALPHA, p)


def test_f_entry_fallback_zero():
    p = ModelParams(2.4)
    blk = f_matrix(ALPHA, SIGMA, SIGMA, ALPHA, p)
    assert blk.entry(S32, ALPHA.shifted(1)) == 0.0


# ---------------------------------------------------------------------------
# pentagon
# ---------------------------------------------------------------------------

def test_pentagon_restricted_sweep():
    rep = pentagon_sweep(ModelParams(2.4))
    assert rep.verified > 0
    assert rep.skipped > 0
    assert rep.max_defect < 1e-10
    # the skipped instances name the data the tables omit
    assert any("s,s,s" in k or "psi" in k for k in rep.skip_reasons)
