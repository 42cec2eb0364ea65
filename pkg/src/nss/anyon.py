"""Closed-form categorical data of the non-semisimple Ising-type model.

Everything here is a pure evaluation in the real parameter alpha: fusion
rules, the modified quantum dimension, bubble-pop coefficients, the sign
functions s/t, R-symbols and (normalized) F-matrices.  Alpha-parameterized
table rows apply verbatim under integer shifts of alpha; lookups outside
the tabulated data raise, they are never extrapolated.

All q-powers mean ``q^x = exp(i pi x / 4)`` for real x.  Square roots of
negative bubble coefficients use the principal branch (``+i sqrt|B|``).

The formula kernels accept a math namespace so the same expressions can be
evaluated in double precision (default) or in mpmath arbitrary precision.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from types import SimpleNamespace

import numpy as np

from .errors import (IntegerAlpha, SingularParameter, UnsupportedFamily,
                     UnsupportedPair, UnsupportedTriple)
from .labels import ALPHA, P2, PSI, S32, SIGMA, VACUUM, ModelParams, QLabel

FLOAT_NS = SimpleNamespace(
    pi=math.pi,
    sin=math.sin,
    cos=math.cos,
    tan=math.tan,
    sqrt=cmath.sqrt,          # complex-capable, principal branch
    exp=cmath.exp,
    one=1.0,
    i=1j,
    dtype=complex,
    number=float,
)


def mp_namespace(dps: int = 80):
    """An mpmath-backed namespace mirroring :data:`FLOAT_NS`."""
    import mpmath as mp
    from fractions import Fraction

    mp.mp.dps = dps

    def number(x):
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / x.denominator
        return mp.mpf(x)

    return SimpleNamespace(
        pi=mp.pi,
        sin=mp.sin,
        cos=mp.cos,
        tan=mp.tan,
        sqrt=lambda z: mp.sqrt(mp.mpc(z)),
        exp=lambda z: mp.exp(mp.mpc(z)),
        one=mp.mpf(1),
        i=mp.mpc(0, 1),
        dtype=object,
        number=number,
    )


def alpha_in(params: ModelParams, ns=FLOAT_NS):
    """Alpha as a backend number, using the exact rational when recorded."""
    if ns is FLOAT_NS:
        return params.alpha
    return ns.number(params.exact if params.exact is not None else params.alpha)


def q_power(x, ns=FLOAT_NS):
    """q^x = exp(i pi x / 4) for real x."""
    return ns.exp(ns.i * ns.pi * x / 4)


def check_noninteger(alpha: float, tol: float = 1e-10) -> None:
    if abs(alpha - round(alpha)) <= tol:
        raise IntegerAlpha(f"alpha = {alpha} is integer within tolerance")


# ---------------------------------------------------------------------------
# fusion
# ---------------------------------------------------------------------------

def fuse(a: QLabel, b: QLabel) -> tuple[QLabel, ...]:
    """Fusion outcomes of a x b, each with multiplicity one.

    Covers the tabulated rules: the vacuum is a strict unit, sigma shifts an
    alpha-type label by +-1, psi by +-2/0, sigma x sigma = 1 + psi,
    sigma x psi = sigma + S3/2 and psi x psi = 1 + P2.  Pairs outside the
    table (e.g. two alpha-type labels, S3/2 x S3/2) raise UnsupportedPair.
    """
    if a == VACUUM:
        return (b,)
    if b == VACUUM:
        return (a,)
    if a.is_alpha and not b.is_alpha:
        a, b = b, a  # the table is symmetric in the listed pairs
    if b.is_alpha:
        if a == SIGMA:
            return (b.shifted(+1), b.shifted(-1))
        if a == PSI:
            return (b.shifted(+2), b, b.shifted(-2))
        raise UnsupportedPair(f"{a} x {b} not tabulated")
    pair = {a, b}
    if pair == {SIGMA}:
        return (VACUUM, PSI)
    if pair == {SIGMA, PSI}:
        return (SIGMA, S32)
    if pair == {PSI}:
        return (VACUUM, P2)
    raise UnsupportedPair(f"{a} x {b} not tabulated")


def can_fuse(a: QLabel, b: QLabel, c: QLabel) -> bool:
    try:
        return c in fuse(a, b)
    except UnsupportedPair:
        return False


# ---------------------------------------------------------------------------
# modified dimension, sign functions
# ---------------------------------------------------------------------------

def modified_dimension(alpha: float, tol: float = 1e-10, ns=FLOAT_NS):
    """Modified quantum dimension: -4 sin(pi a/4) / sin(pi a)."""
    check_noninteger(alpha, tol)
    return -4 * ns.sin(ns.pi * alpha / 4) / ns.sin(ns.pi * alpha)


def s_sign(alpha: float, tol: float = 1e-10) -> int:
    """+1 for alpha in (0,1) u (5,8) mod 8, -1 for alpha in (1,5) mod 8."""
    check_noninteger(alpha, tol)
    r = alpha % 8.0
    return 1 if (r < 1 or r > 5) else -1


def t_sign(alpha: float, tol: float = 1e-10) -> int:
    """+1 for alpha in (0,1) u (2,4) mod 4, -1 for alpha in (1,2) mod 4."""
    check_noninteger(alpha, tol)
    r = alpha % 4.0
    return 1 if (r < 1 or r > 2) else -1


# ---------------------------------------------------------------------------
# bubble pops
# ---------------------------------------------------------------------------

def _guard(den, tol, what):
    # formulas are regular for non-integer alpha; the guard catches near-integer
    # evaluations that slip past parameter validation
    if abs(den) < tol:
        raise SingularParameter(f"{what}: denominator ~ 0")


def bubble_pop(a: QLabel, b: QLabel, c: QLabel, params: ModelParams, ns=FLOAT_NS):
    """The scalar B^{ab}_c removed when a split (a,b)->c is closed by its merge.

    Real for every tabulated triple; its sign feeds the metric.  Alpha-type
    rows shift: the first label's value is the `alpha' of the table row.
    """
    al, tol = alpha_in(params, ns), params.tol
    if b == VACUUM and a == c:
        return ns.one
    if a == VACUUM and b == c:
        return ns.one
    if a.is_alpha and c.is_alpha:
        x = a.value(al)
        d = c.shift - a.shift
        if b == SIGMA:
            if d == 1:
                return ns.one
            if d == -1:
                t = ns.tan(ns.pi * x / 4)
                _guard(t, tol, "B[a,s,a-1] cot")
                den = -1 + 1 / t
                _guard(den, tol, "B[a,s,a-1]")
                return _sqrt2(ns) / den
        if b == PSI:
            if d == 2:
                return ns.one
            if d == 0:
                den = 1 - ns.sin(ns.pi * x / 2)
                _guard(den, tol, "B[a,psi,a]")
                return _sqrt2(ns) * ns.cos(ns.pi * x / 2) / den
            if d == -2:
                t = ns.tan(ns.pi * (x - 2) / 4)
                _guard(t, tol, "B[a,psi,a-2]")
                return 2 / t
        if b == S32:
            if d == 1:
                den = 1 - ns.tan(ns.pi * x / 4)
                _guard(den, tol, "B[a,s32,a+1]")
                return _sqrt2(ns) / den
            if d == -1:
                t = ns.tan(ns.pi * x / 4)
                _guard(t, tol, "B[a,s32,a-1] cot")
                den = -1 + 1 / t
                _guard(den, tol, "B[a,s32,a-1]")
                return (2 + 2 * t) / den
    if a == SIGMA and b == SIGMA:
        if c == VACUUM:
            return -_sqrt2(ns)
        if c == PSI:
            return ns.one
    if a == PSI and b == SIGMA:
        if c == S32:
            return ns.one
        if c == SIGMA:
            return -1 / _sqrt2(ns)
    if a == SIGMA and b == PSI:
        if c == S32:
            return ns.one
        if c == SIGMA:
            return -_sqrt2(ns)
    raise UnsupportedTriple(f"B[{a},{b};{c}] not tabulated")


def _sqrt2(ns):
    val = ns.sqrt(2 * ns.one)
    return val.real if isinstance(val, complex) else val


def computational_bubbles(params: ModelParams, ns=FLOAT_NS):
    """(B_{+}, B_{-}): bubble coefficients of the up/down single-qubit channels."""
    b_plus = bubble_pop(ALPHA.shifted(1), SIGMA, ALPHA, params, ns)
    b_minus = bubble_pop(ALPHA, SIGMA, ALPHA.shifted(-1), params, ns)
    return b_plus, b_minus


# ---------------------------------------------------------------------------
# R-symbols
# ---------------------------------------------------------------------------

def r_symbol(b: QLabel, a: QLabel, c: QLabel, params: ModelParams, ns=FLOAT_NS):
    """R^{ba}_c: the phase exchanging a pair split from channel c.

    Applying the positive half-braid to a state split as (a, b) in channel c
    yields R^{ba}_c times the state split as (b, a).  Unit modulus for every
    tabulated row; rows with an alpha-type label shift with it.
    """
    al = alpha_in(params, ns)
    qp = lambda x: q_power(x, ns)
    if b == VACUUM or a == VACUUM:
        return ns.one + 0 * ns.i
    if b.is_alpha and a == PSI:
        x, d = b.value(al), c.shift - b.shift
        if d == 2:
            return qp(3 + x)
        if d == 0:
            return s_sign(x, params.tol) * qp(1 - x)
        if d == -2:
            return t_sign(x, params.tol) * qp(1 - 3 * x)
    if b == PSI and a.is_alpha:
        x, d = a.value(al), c.shift - a.shift
        if d == 2:
            return qp(3 + x)
        if d == 0:
            return s_sign(x, params.tol) * qp(3 + x)
        if d == -2:
            return t_sign(x, params.tol) * qp(5 + x)
    if b.is_alpha and a == SIGMA:
        x, d = b.value(al), c.shift - b.shift
        if d == 1:
            return qp((3 + x) / 2)
        if d == -1:
            return s_sign(x, params.tol) * qp(-(1 + 3 * x) / 2)
    if b == SIGMA and a.is_alpha:
        x, d = a.value(al), c.shift - a.shift
        if d == 1:
            return qp((3 + x) / 2)
        if d == -1:
            return s_sign(x, params.tol) * qp((7 + x) / 2)
    if {b, a} == {PSI, SIGMA}:
        if c == S32:
            return qp(1)
        if c == SIGMA:
            return qp(1) if b == PSI else qp(3)
    if b == SIGMA and a == SIGMA:
        if c == PSI:
            return qp(0.5)
        if c == VACUUM:
            return qp(2.5)
    raise UnsupportedTriple(f"R[{b},{a};{c}] not tabulated")


# ---------------------------------------------------------------------------
# F-matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FBlock:
    """A (normalized) F-matrix with its channel index lists.

    ``matrix[n, m]`` relates the right-associated channel ``rows[n]`` to the
    left-associated channel ``cols[m]``.
    """

    matrix: np.ndarray
    rows: tuple[QLabel, ...]
    cols: tuple[QLabel, ...]

    def entry(self, n: QLabel, m: QLabel):
        """Coefficient for channel pair (n, m); 0 when a channel is inadmissible."""
        if n in self.rows and m in self.cols:
            return self.matrix[self.rows.index(n), self.cols.index(m)]
        return 0.0

    def inverse(self) -> np.ndarray:
        return _inv_small(self.matrix)


def _inv_small(m: np.ndarray) -> np.ndarray:
    """Inverse of a 1x1 or 2x2 matrix, valid for float and object dtypes."""
    if m.shape == (1, 1):
        return np.array([[1 / m[0, 0]]], dtype=m.dtype)
    if m.shape == (2, 2):
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        return np.array([[m[1, 1] / det, -m[0, 1] / det],
                         [-m[1, 0] / det, m[0, 0] / det]], dtype=m.dtype)
    raise ValueError("only 1x1 and 2x2 blocks occur in the tabulated data")


def _ftilde(a: QLabel, b: QLabel, c: QLabel, d: QLabel, params: ModelParams, ns):
    """Unnormalized F-matrix table. Returns (matrix, rows, cols)."""
    al, tol = alpha_in(params, ns), params.tol
    x = a.value(al)
    k = a.shift
    qp = lambda v: q_power(v, ns)
    Q = qp(2 * x)
    q2 = qp(2)
    A = lambda s: ALPHA.shifted(s)

    def arr(rows):
        return np.array(rows, dtype=ns.dtype)

    if (b, c) == (SIGMA, SIGMA):
        dd = d.shift - k
        if dd == 2:
            return arr([[ns.one + 0 * ns.i]]), (PSI,), (A(k + 1),)
        if dd == -2:
            sgn = 1.0 if ns.sin(ns.pi * x / 2) > 0 else -1.0
            return arr([[sgn + 0 * ns.i]]), (PSI,), (A(k - 1),)
        if dd == 0:
            den = _sqrt2(ns) * (Q - 1)
            _guard(den, tol, "Ftilde[a,s,s;a]")
            mat = arr([[qp(1) * (Q + q2), -(Q - 1)],
                       [Q - q2, qp(1) * (Q - 1)]]) / den
            return mat, (VACUUM, PSI), (A(k + 1), A(k - 1))
    elif (b, c) == (PSI, SIGMA):
        dd = d.shift - k
        if dd == 1:
            den = Q + q2
            _guard(den, tol, "Ftilde[a,psi,s;a+1]")
            mat = arr([[(q2 - 1) * (Q + q2), (q2 + 1) * (Q + 1)],
                       [(q2 + 1) * (Q + q2), Q - q2]]) / den
            return mat, (SIGMA, S32), (A(k), A(k + 2))
        if dd == -1:
            den = Q - q2
            _guard(den, tol, "Ftilde[a,psi,s;a-1]")
            mat = arr([[(q2 + 1) * (Q + q2), -2 * (Q - q2)],
                       [Q + 1, q2 * (Q - q2)]]) / den
            return mat, (SIGMA, S32), (A(k), A(k - 2))
    elif (b, c) == (SIGMA, PSI):
        dd = d.shift - k
        den = Q - 1
        _guard(den, tol, "Ftilde[a,s,psi]")
        if dd == 1:
            mat = arr([[q2 * (Q + 1), -qp(1) * (Q - 1)],
                       [_sqrt2(ns) * (Q - q2), q2 * (Q - 1)]]) / den
            return mat, (SIGMA, S32), (A(k + 1), A(k - 1))
        if dd == -1:
            mat = arr([[qp(1) * (q2 + 1) * (Q + q2), -(Q - 1)],
                       [Q + 1, qp(1) * (Q - 1)]]) / den
            return mat, (SIGMA, S32), (A(k + 1), A(k - 1))
    raise UnsupportedFamily(f"F[{a},{b},{c};{d}] not tabulated")


def f_matrix(a: QLabel, b: QLabel, c: QLabel, d: QLabel,
             params: ModelParams, ns=FLOAT_NS) -> FBlock:
    """Normalized F-matrix for the tabulated families (plus vacuum-leg units).

    Tabulated: (x, s, s; x), (x, s, s; x+-2), (x, psi, s; x+-1) and
    (x, s, psi; x+-1) for any alpha-type x.  Normalization multiplies each
    entry by sqrt(B^{a n}_d) sqrt(B^{b c}_n) / (sqrt(B^{m c}_d) sqrt(B^{a b}_m))
    with principal square roots; only then are the matrices pseudo-unitary.
    A vacuum in any slot gives the unit coefficient 1.
    """
    if b == VACUUM:
        return FBlock(np.array([[ns.one + 0 * ns.i]], dtype=ns.dtype), (c,), (a,))
    if c == VACUUM:
        return FBlock(np.array([[ns.one + 0 * ns.i]], dtype=ns.dtype), (b,), (d,))
    if a == VACUUM:
        return FBlock(np.array([[ns.one + 0 * ns.i]], dtype=ns.dtype), (d,), (b,))
    if not a.is_alpha:
        raise UnsupportedFamily(f"F[{a},{b},{c};{d}] not tabulated")
    ft, rows, cols = _ftilde(a, b, c, d, params, ns)
    if (b, c) == (SIGMA, SIGMA) and d.shift != a.shift:
        return FBlock(ft, rows, cols)  # the one-dimensional data are already normalized
    out = np.empty_like(ft)
    for i, n in enumerate(rows):
        for j, m in enumerate(cols):
            num = ns.sqrt(bubble_pop(a, n, d, params, ns)) * \
                ns.sqrt(bubble_pop(b, c, n, params, ns))
            den = ns.sqrt(bubble_pop(m, c, d, params, ns)) * \
                ns.sqrt(bubble_pop(a, b, m, params, ns))
            out[i, j] = num / den * ft[i, j]
    return FBlock(out, rows, cols)


def has_f_matrix(a: QLabel, b: QLabel, c: QLabel, d: QLabel) -> bool:
    """True when f_matrix would resolve (possibly as a vacuum-leg unit)."""
    if VACUUM in (a, b, c):
        return True
    if not a.is_alpha:
        return False
    if (b, c) == (SIGMA, SIGMA):
        return d.is_alpha and d.shift - a.shift in (-2, 0, 2)
    if (b, c) in ((PSI, SIGMA), (SIGMA, PSI)):
        return d.is_alpha and d.shift - a.shift in (-1, 1)
    return False


# ---------------------------------------------------------------------------
# pentagon sweep (restricted to tabulated symbols)
# ---------------------------------------------------------------------------

@dataclass
class PentagonReport:
    verified: int = 0
    skipped: int = 0
    max_defect: float = 0.0
    skip_reasons: dict = None

    def __post_init__(self):
        if self.skip_reasons is None:
            self.skip_reasons = {}


def pentagon_sweep(params: ModelParams, shifts=(-1, 0, 1)) -> PentagonReport:
    """Check every pentagon instance whose five F-symbols are all tabulated.

    Instances requiring unlisted symbols (anything with an S3/2 or P2 leg, or
    a non-alpha first slot such as F[s,s,s]) are skipped and counted, with
    the first missing symbol recorded as the reason.

    The identity checked, for admissible (a, b, c, d; e) and free channels
    (p, m, l, r):

        F[p,c,d;e]_{l m} * F[a,b,l;e]_{r p}
            = sum_t F[a,b,c;m]_{t p} * F[a,t,d;e]_{r m} * F[b,c,d;r]_{l t}
    """
    rep = PentagonReport()
    pool_a = [ALPHA.shifted(s) for s in shifts] + [VACUUM, SIGMA, PSI]
    pool_bcd = [VACUUM, SIGMA, PSI]

    def get(fa, fb, fc, fd):
        if not has_f_matrix(fa, fb, fc, fd):
            return None
        return f_matrix(fa, fb, fc, fd, params)

    for a in pool_a:
        for b in pool_bcd:
            for c in pool_bcd:
                for d in pool_bcd:
                    try:
                        ps = fuse(a, b)
                        ls = fuse(c, d)
                    except UnsupportedPair:
                        continue
                    for p in ps:
                        try:
                            ms = fuse(p, c)
                        except UnsupportedPair:
                            continue
                        for m in ms:
                            try:
                                es = fuse(m, d)
                            except UnsupportedPair:
                                continue
                            for e in es:
                                for l in ls:
                                    try:
                                        rs = fuse(b, l)
                                    except UnsupportedPair:
                                        continue
                                    for r in rs:
                                        _pentagon_instance(params, rep, get,
                                                           a, b, c, d, e, p, m, l, r)
    return rep


def _pentagon_instance(params, rep, get, a, b, c, d, e, p, m, l, r):
    needed = [(p, c, d, e), (a, b, l, e), (a, b, c, m), (b, c, d, r)]
    blocks = []
    for fam in needed:
        blk = get(*fam)
        if blk is None:
            rep.skipped += 1
            key = "F[{},{},{}]".format(*(str(x) for x in fam[:3]))
            rep.skip_reasons[key] = rep.skip_reasons.get(key, 0) + 1
            return
        blocks.append(blk)
    f_pcd, f_abl, f_abc, f_bcd = blocks
    lhs = f_pcd.entry(l, m) * f_abl.entry(r, p)
    rhs = 0.0
    try:
        ts = fuse(b, c)
    except UnsupportedPair:
        return
    for t in ts:
        f_atd = get(a, t, d, e)
        if f_atd is None:
            rep.skipped += 1
            key = f"F[{a},{t},{d}]"
            rep.skip_reasons[key] = rep.skip_reasons.get(key, 0) + 1
            return
        rhs += f_abc.entry(t, p) * f_atd.entry(r, m) * f_bcd.entry(l, t)
    defect = abs(lhs - rhs)
    rep.verified += 1
    rep.max_defect = max(rep.max_defect, defect)


# ---------------------------------------------------------------------------
# model dump (CLI-facing)
# ---------------------------------------------------------------------------

def model_dump(params: ModelParams) -> dict:
    """All tabulated data at the base alpha, JSON-shaped."""
    al = params.alpha
    out = {
        "alpha": al,
        "q": [math.cos(math.pi / 4), math.sin(math.pi / 4)],
        "d_alpha": modified_dimension(al, params.tol),
        "s": s_sign(al, params.tol),
        "t": t_sign(al, params.tol),
        "B": {},
        "R": {},
        "F": {},
    }
    a = ALPHA
    bubbles = [
        (a, VACUUM, a), (a, SIGMA, a.shifted(1)), (a, SIGMA, a.shifted(-1)),
        (a, PSI, a.shifted(2)), (a, PSI, a), (a, PSI, a.shifted(-2)),
        (a, S32, a.shifted(1)), (a, S32, a.shifted(-1)),
        (SIGMA, SIGMA, VACUUM), (SIGMA, SIGMA, PSI),
        (PSI, SIGMA, SIGMA), (PSI, SIGMA, S32),
        (SIGMA, PSI, SIGMA), (SIGMA, PSI, S32),
    ]
    for (x, y, z) in bubbles:
        out["B"][f"B[{x},{y};{z}]"] = bubble_pop(x, y, z, params)
    rs = [
        (a, PSI, a.shifted(2)), (PSI, a, a.shifted(2)),
        (a, SIGMA, a.shifted(1)), (SIGMA, a, a.shifted(1)),
        (a, PSI, a), (PSI, a, a),
        (a, SIGMA, a.shifted(-1)), (SIGMA, a, a.shifted(-1)),
        (a, PSI, a.shifted(-2)), (PSI, a, a.shifted(-2)),
        (PSI, SIGMA, S32), (SIGMA, PSI, S32),
        (PSI, SIGMA, SIGMA), (SIGMA, PSI, SIGMA),
        (SIGMA, SIGMA, PSI), (SIGMA, SIGMA, VACUUM),
    ]
    for (x, y, z) in rs:
        val = r_symbol(x, y, z, params)
        out["R"][f"R[{x},{y};{z}]"] = [val.real, val.imag]
    fams = [
        (a, SIGMA, SIGMA, a), (a, SIGMA, SIGMA, a.shifted(2)),
        (a, SIGMA, SIGMA, a.shifted(-2)),
        (a, PSI, SIGMA, a.shifted(1)), (a, PSI, SIGMA, a.shifted(-1)),
        (a, SIGMA, PSI, a.shifted(1)), (a, SIGMA, PSI, a.shifted(-1)),
    ]
    for fam in fams:
        blk = f_matrix(*fam, params)
        key = "F[{},{},{};{}]".format(*(str(x) for x in fam))
        out["F"][key] = {
            "rows": [str(x) for x in blk.rows],
            "cols": [str(x) for x in blk.cols],
            "matrix": [[[z.real, z.imag] for z in row] for row in np.asarray(blk.matrix, dtype=complex)],
        }
    return out
