"""Controlled-gate construction: the D and W braids, leakage-suppressing
iteration, brute-force word search, and assembly of the entangling gate.

Everything acts on the four-dimensional control sector: the fusion trees of
(alpha, psi, sigma, sigma) at total charge alpha, ordered so that vectors
0 and 3 are noncomputational and 1, 2 computational.  Every word in the
wrap/first-exchange alphabet preserves the (0,1) and (2,3) pairs, so each
operator splits into an upper and a lower 2x2 block; the off-diagonal
magnitudes |M[0,1]| and |M[2,3]| are the leakage figures tracked here.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .anyon import FLOAT_NS, mp_namespace
from .braids import BraidMatrix, BraidWord, evaluate_word, letter_matrix
from .errors import NotBlockDiagonal, PrecisionExhausted
from .labels import ALPHA, PSI, SIGMA, VACUUM, ModelParams
from .spaces import IndefSpace, control_basis_transform

PSI_LEAVES = (ALPHA, PSI, SIGMA, SIGMA)
VAC_LEAVES = (ALPHA, VACUUM, SIGMA, SIGMA)

W_WORD = BraidWord.parse("b2^2 x b2^2 x b2^-2")
D_WORD = BraidWord.parse("x^2")

# canonical representative of the word family found by the exhaustive search
# at <= 11 syllables whose leakage norms are ~0.2859 and ~0.2848 (the only
# norm pair below 0.30 with nonzero leakage in that range)
LOW_LEAKAGE_WORD = BraidWord.parse("b2^-2 x b2^-1 x^2 b2^-2 x b2^2 x^-2 b2^-1")


def psi_sector(params: ModelParams) -> IndefSpace:
    return IndefSpace.build(params, PSI_LEAVES, ALPHA)


def vacuum_sector_matrix(params: ModelParams, word: BraidWord) -> np.ndarray:
    """The same word evaluated with the control channel replaced by vacuum."""
    return evaluate_word(params, VAC_LEAVES, word)


def build_D(params: ModelParams) -> BraidMatrix:
    """The double wrap x^2 on the control sector: a diagonal phase gate.

    Diagonal entries are (q^(12+4a), 1, 1, q^(12-4a)); at a = 12/5 the last
    is exp(3i pi/5) and the first its conjugate.  The two middle
    (computational) phases are exactly 1, which is what makes the iteration
    below leave the computational action untouched.
    """
    space = psi_sector(params)
    m = evaluate_word(params, PSI_LEAVES, D_WORD)
    return BraidMatrix(m, space)


def build_W(params: ModelParams) -> BraidMatrix:
    """The initializing braid b2^2 x b2^2 x b2^-2 on the control sector."""
    space = psi_sector(params)
    m = evaluate_word(params, PSI_LEAVES, W_WORD)
    return BraidMatrix(m, space)


@dataclass(frozen=True)
class GateSpec:
    """The compiled gate ingredients: the diagonal braid, the initializing
    braid, and the control-sector basis they act on."""

    D: BraidMatrix
    W: BraidMatrix
    basis: tuple

    @classmethod
    def build(cls, params: ModelParams) -> "GateSpec":
        space = psi_sector(params)
        return cls(build_D(params), build_W(params), space.basis)


def leakage_norms(matrix) -> tuple[float, float]:
    """(|M[0,1]|, |M[2,3]|): upper- and lower-block off-diagonal magnitudes.

    abs() is taken on the raw entries so arbitrary-precision values survive
    until the final float conversion.
    """
    return float(abs(matrix[0, 1])), float(abs(matrix[2, 3]))


# ---------------------------------------------------------------------------
# the leakage-suppressing recursion
# ---------------------------------------------------------------------------

def _inv4_blockwise(m: np.ndarray) -> np.ndarray:
    """Inverse of a block-diagonal (2x2 + 2x2) matrix, any dtype."""
    out = np.zeros_like(m)
    for sl in (slice(0, 2), slice(2, 4)):
        b = m[sl, sl]
        det = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
        out[sl, sl] = np.array([[b[1, 1], -b[0, 1]], [-b[1, 0], b[0, 0]]],
                               dtype=m.dtype) / det
    return out


def reichardt_step(w: np.ndarray, d: np.ndarray) -> np.ndarray:
    """One recursion step W -> W D W^-1 D^3 W D^3 W^-1 D W.

    Raises the off-diagonal magnitude of each 2x2 block to its fifth power.
    """
    w = np.asarray(w)
    d = np.asarray(d)
    if w.shape != d.shape:
        raise ValueError("W and D must have the same shape")
    if w.dtype == object:
        wi = _inv4_blockwise(w)
    else:
        wi = np.linalg.inv(w)
    d3 = d @ d @ d
    return w @ d @ wi @ d3 @ w @ d3 @ wi @ d @ w


def step_word(word: BraidWord, d_word: BraidWord = D_WORD) -> BraidWord:
    """The braid word realizing one recursion step of `word`."""
    d3 = BraidWord.from_letters([(t, 3 * p) for t, p in d_word.letters])
    parts = (word, d_word, word.inverse(), d3, word, d3, word.inverse(), d_word, word)
    letters = []
    for p in parts:
        letters.extend(p.letters)
    return BraidWord(tuple(letters)).free_reduce()


@dataclass(frozen=True)
class LeakageReport:
    """Per-iteration record of the recursion's leakage and phases."""

    word: BraidWord
    k: int
    su2_offdiag: float
    su11_offdiag: float
    theta1: float
    theta2: float
    word_length: int
    law_defect_su2: Optional[float] = None
    law_defect_su11: Optional[float] = None

    def as_dict(self) -> dict:
        return {
            "word": str(self.word),
            "k": self.k,
            "su2": self.su2_offdiag,
            "su11": self.su11_offdiag,
            "theta": [self.theta1, self.theta2],
            "len": self.word_length,
            "law_defect": [self.law_defect_su2, self.law_defect_su11],
        }


def _diag_phases(m: np.ndarray) -> tuple[float, float]:
    """Computational diagonal arguments after dividing out the mean phase.

    The mean phase is the circular mean of the four diagonal phases (the
    argument of the sum of their unit vectors), which is branch-stable; for
    a special near-diagonal matrix it vanishes and the raw arguments are
    returned.  Results lie in (-pi, pi].
    """
    d = [complex(m[i, i]) for i in range(4)]
    vec = sum(z / abs(z) for z in d)
    mean = cmath.phase(vec) if abs(vec) > 1e-12 else 0.0
    th1 = _wrap_angle(cmath.phase(d[1]) - mean)
    th2 = _wrap_angle(cmath.phase(d[2]) - mean)
    return th1, th2


def _wrap_angle(x: float) -> float:
    y = math.fmod(x + math.pi, 2 * math.pi)
    if y <= 0:
        y += 2 * math.pi
    return y - math.pi


def _rel_defect(measured: float, predicted: float) -> float:
    if predicted == 0:
        return 0.0 if measured == 0 else math.inf
    return abs(measured - predicted) / predicted


def reichardt_iterate(params: ModelParams, word: BraidWord = W_WORD, k: int = 3,
                      extended: bool = False, dps: int = 120,
                      law_tol: float = 1e-3) -> list[LeakageReport]:
    """Iterate the recursion k times starting from the given braid word.

    Returns reports for iterations 0..k.  ``extended`` switches the whole
    evaluation to mpmath arbitrary precision, needed when an off-diagonal
    falls below the double-precision cancellation floor (~1e-16); without
    it, a fifth-power-law violation beyond ``law_tol`` raises
    PrecisionExhausted.
    """
    if k > 4 and not extended:
        raise PrecisionExhausted("k > 4 needs the extended-precision mode")
    ns = mp_namespace(dps) if extended else FLOAT_NS
    wm = evaluate_word(params, PSI_LEAVES, word, ns=ns)
    dm = evaluate_word(params, PSI_LEAVES, D_WORD, ns=ns)
    reports = []
    cur = wm
    cur_word = word
    for step in range(k + 1):
        su2, su11 = leakage_norms(cur)
        ld2 = ld11 = None
        if step > 0:
            prev = reports[-1]
            ld2 = _rel_defect(su2, prev.su2_offdiag ** 5)
            ld11 = _rel_defect(su11, prev.su11_offdiag ** 5)
            if max(ld2, ld11) > law_tol:
                raise PrecisionExhausted(
                    f"fifth-power law defect {max(ld2, ld11):.2e} at k={step}; "
                    "rerun with extended=True")
        th1, th2 = _diag_phases(np.asarray(cur, dtype=complex))
        reports.append(LeakageReport(cur_word, step, su2, su11, th1, th2,
                                     len(cur_word), ld2, ld11))
        if step < k:
            cur = reichardt_step(cur, dm)
            cur_word = step_word(cur_word)
    return reports


# ---------------------------------------------------------------------------
# brute-force search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchHit:
    word: BraidWord
    report: LeakageReport


def _letter_pool(params: ModelParams, max_power: int):
    """Transition matrices for every syllable on the two leaf arrangements."""
    arrangements = [PSI_LEAVES, (ALPHA, SIGMA, PSI, SIGMA)]
    pool = {}
    for si, leaves in enumerate(arrangements):
        for tok in ("x", "b2"):
            for p in range(1, max_power + 1):
                for sgn in (1, -1):
                    m = None
                    cur = leaves
                    for _ in range(p):
                        lm, cur = letter_matrix(params, cur, tok, sgn)
                        m = lm if m is None else lm @ m
                    pool[(si, tok, sgn * p)] = (m, arrangements.index(cur))
    return pool


def _search_range(params, max_len, threshold, max_power, first_tokens):
    pool = _letter_pool(params, max_power)
    powers = [p for a in range(1, max_power + 1) for p in (a, -a)]
    hits = []
    ident = np.eye(4, dtype=complex)

    def dfs(tok, mat, si, depth, letters):
        nxt = "b2" if tok == "x" else "x"
        for p in powers:
            m2, si2 = pool[(si, tok, p)]
            prod = m2 @ mat
            w2 = letters + ((tok, p),)
            if si2 == 0:
                n1, n2 = leakage_norms(prod)
                if max(n1, n2) < threshold:
                    hits.append((w2, n1, n2, prod))
            if depth + 1 < max_len:
                dfs(nxt, prod, si2, depth + 1, w2)

    for first in first_tokens:
        dfs(first, ident, 0, 0, ())
    return hits


def search_low_leakage(params: ModelParams, max_len: int, threshold: float,
                       jobs: int = 1, max_power: int = 2) -> list[SearchHit]:
    """All words (syllable count <= max_len, |syllable power| <= max_power)
    on the control sector with both block off-diagonals below threshold.

    Words are enumerated in free-reduced form (alternating generators);
    results equal up to a global phase are merged, keeping the first in
    (leakage, length, text) order.  Deterministic for fixed arguments.
    """
    if threshold <= 0:
        return []
    if jobs > 1:
        tasks = [("x",), ("b2",)]
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as ex:
            futs = [ex.submit(_search_range, params, max_len, threshold,
                              max_power, t) for t in tasks]
            raw = []
            for f in futs:
                raw.extend(f.result())
    else:
        raw = _search_range(params, max_len, threshold, max_power, ("x", "b2"))

    def rank(h):
        word, n1, n2, _ = h
        return (round(max(n1, n2), 12), len(word), str(BraidWord(word)))

    raw.sort(key=rank)
    out = []
    seen = set()
    for word, n1, n2, mat in raw:
        key = _phase_invariant_key(mat)
        if key in seen:
            continue
        seen.add(key)
        bw = BraidWord(word)
        th1, th2 = _diag_phases(mat)
        out.append(SearchHit(bw, LeakageReport(bw, 0, n1, n2, th1, th2, len(bw))))
    return out


def _phase_invariant_key(mat: np.ndarray) -> bytes:
    flat = np.asarray(mat, dtype=complex).ravel()
    pivot = flat[int(np.argmax(np.abs(flat)))]
    norm = flat * (abs(pivot) / pivot)
    return np.round(norm, 6).tobytes()


# ---------------------------------------------------------------------------
# the controlled gate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ControlledGate:
    matrix: np.ndarray            # on the 6-dim two-qubit comb basis
    computational: np.ndarray     # 4x4 block on |00>,|10>,|01>,|11>
    leakage: float                # max coupling into the noncomputational pair
    schmidt_rank: int


def operator_schmidt_rank(block: np.ndarray, tol: float = 1e-9) -> int:
    """Rank of the two-qubit operator over the product-operator basis."""
    b = np.asarray(block, dtype=complex).reshape(2, 2, 2, 2)
    # index (b1, b2, b1', b2') with the first qubit varying fastest
    m = b.transpose(0, 2, 1, 3).reshape(4, 4)
    sv = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(sv > tol * sv[0]))


def controlled_gate(two_qubit: IndefSpace, u_psi: np.ndarray,
                    leak_tol: float = 1e-6) -> ControlledGate:
    """Conjugate a control-sector gate back to the two-qubit comb basis.

    ``u_psi`` acts on the four control-sector vectors and the identity on the
    two vacuum-channel vectors; the result is expressed on the basis
    |00>,|10>,|01>,|11>,NC1,NC2.  Raises NotBlockDiagonal when the gate
    couples the computational block to the noncomputational pair beyond
    ``leak_tol``.
    """
    cb = control_basis_transform(two_qubit)
    op = np.eye(6, dtype=complex)
    op[2:, 2:] = np.asarray(u_psi, dtype=complex)
    t = cb.matrix
    g = np.linalg.inv(t) @ op @ t
    mask = two_qubit.computational_mask
    off1 = g[np.ix_(mask, ~mask)]
    off2 = g[np.ix_(~mask, mask)]
    leak = float(max(np.max(np.abs(off1)), np.max(np.abs(off2))))
    if leak > leak_tol:
        raise NotBlockDiagonal(leak)
    comp = g[np.ix_(mask, mask)]
    return ControlledGate(g, comp, leak, operator_schmidt_rank(comp))
