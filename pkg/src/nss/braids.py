"""Affine braid generators as matrices on fusion-tree bases.

Generators: ``x`` is the full wrap of strand 2 around the pole strand
(diagonal in the left-comb basis), ``h1`` the half-exchange of strands
1 and 2, and ``b{i}`` for i >= 2 the half-exchange of strands i, i+1
assembled as F^{-1} R F at the affected vertex.  Letters that permute
distinct leaf labels map between spaces; a word must return the labeling
to close into an operator.

Words read left to right with the leftmost letter acting first.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .anyon import FLOAT_NS, f_matrix, q_power, r_symbol, computational_bubbles
from .errors import LeakyPermutation, NotBlockDiagonal
from .labels import ModelParams, QLabel
from .spaces import IndefSpace, enumerate_basis

# global phases making the single-qubit generator matrices special unitary
SPECIAL_UNITARY_PHASES = {
    "x": -cmath.exp(1j * math.pi / 4),       # -q
    "b2": cmath.exp(-1j * 3 * math.pi / 8),  # q^(-3/2)
}


# ---------------------------------------------------------------------------
# braid words
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"^(x|h1|b(\d+))(\^(-?\d+))?$")


@dataclass(frozen=True)
class BraidWord:
    """A sequence of (generator token, integer power) syllables."""

    letters: tuple[tuple[str, int], ...]

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        letters = []
        for raw in text.split():
            m = _TOKEN_RE.match(raw.lower())
            if not m:
                raise ValueError(f"bad braid token {raw!r}")
            tok = m.group(1)
            if tok.startswith("b") and int(m.group(2)) < 2:
                raise ValueError(f"exchange index must be >= 2 in {raw!r}")
            power = int(m.group(4)) if m.group(4) else 1
            if power != 0:
                letters.append((tok, power))
        return cls(tuple(letters))

    @classmethod
    def from_letters(cls, letters) -> "BraidWord":
        return cls(tuple((str(t), int(p)) for t, p in letters))

    def __str__(self) -> str:
        return " ".join(t if p == 1 else f"{t}^{p}" for t, p in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def free_reduce(self) -> "BraidWord":
        out: list[list] = []
        for tok, p in self.letters:
            if out and out[-1][0] == tok:
                out[-1][1] += p
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([tok, p])
        return BraidWord(tuple((t, p) for t, p in out))

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple((t, -p) for t, p in reversed(self.letters)))

    def unit_letters(self):
        for tok, p in self.letters:
            step = 1 if p > 0 else -1
            for _ in range(abs(p)):
                yield tok, step

    def permuted_leaves(self, leaves) -> tuple[QLabel, ...]:
        cur = tuple(leaves)
        for tok, sgn in self.unit_letters():
            cur = apply_letter_to_leaves(cur, tok)
        return cur

    def fixes_pole(self, leaves) -> bool:
        return self.permuted_leaves(leaves)[0] == tuple(leaves)[0]


def apply_letter_to_leaves(leaves, tok: str) -> tuple[QLabel, ...]:
    leaves = tuple(leaves)
    if tok == "x":
        return leaves
    if tok == "h1":
        i = 0
    else:
        i = int(tok[1:]) - 1
    if i + 1 >= len(leaves):
        raise ValueError(f"letter {tok} needs strand {i + 2}")
    out = list(leaves)
    out[i], out[i + 1] = out[i + 1], out[i]
    return tuple(out)


# ---------------------------------------------------------------------------
# elementary letter matrices
# ---------------------------------------------------------------------------

def _eye(n, ns):
    m = np.zeros((n, n), dtype=ns.dtype)
    for i in range(n):
        m[i, i] = ns.one + 0 * ns.i
    return m


def _wrap_matrix(leaves, basis, params, inverse, ns):
    """Full wrap of strand 2 around strand 1: diagonal monodromy phases."""
    n = len(basis)
    m = np.zeros((n, n), dtype=ns.dtype)
    for j, tree in enumerate(basis):
        c1 = tree.chain[1]
        ph = (r_symbol(leaves[1], leaves[0], c1, params, ns)
              * r_symbol(leaves[0], leaves[1], c1, params, ns))
        m[j, j] = 1 / ph if inverse else ph
    return m, tuple(leaves)


def _half_exchange_matrix(leaves, basis, i, params, inverse, ns):
    """Half-exchange of leaves i, i+1 (0-indexed, i >= 1) via F^-1 R F."""
    new_leaves = apply_letter_to_leaves(leaves, f"b{i + 1}")
    charge = basis[0].root
    new_basis = enumerate_basis(new_leaves, charge)
    idx = {t.chain: k for k, t in enumerate(new_basis)}
    m = np.zeros((len(new_basis), len(basis)), dtype=ns.dtype)
    P, Q = leaves[i], leaves[i + 1]
    for j, tree in enumerate(basis):
        ch = tree.chain
        f_src = f_matrix(ch[i - 1], P, Q, ch[i + 1], params, ns)
        f_tgt = f_matrix(ch[i - 1], Q, P, ch[i + 1], params, ns)
        f_tgt_inv = f_tgt.inverse()
        col = f_src.cols.index(ch[i])
        for tj, mt in enumerate(f_tgt.cols):
            amp = 0
            for wi, w in enumerate(f_src.rows):
                if inverse:
                    r = 1 / r_symbol(P, Q, w, params, ns)
                else:
                    r = r_symbol(Q, P, w, params, ns)
                wt = f_tgt.rows.index(w)
                amp = amp + f_tgt_inv[tj, wt] * r * f_src.matrix[wi, col]
            target = ch[:i] + (mt,) + ch[i + 1:]
            if target in idx:
                m[idx[target], j] = m[idx[target], j] + amp
    return m, new_leaves


def _half_pole_matrix(leaves, basis, params, inverse, ns):
    """Half-exchange of strands 1, 2: a diagonal map to the swapped system."""
    new_leaves = apply_letter_to_leaves(leaves, "h1")
    charge = basis[0].root
    new_basis = enumerate_basis(new_leaves, charge)
    idx = {t.chain: k for k, t in enumerate(new_basis)}
    m = np.zeros((len(new_basis), len(basis)), dtype=ns.dtype)
    for j, tree in enumerate(basis):
        ch = tree.chain
        if inverse:
            r = 1 / r_symbol(leaves[0], leaves[1], ch[1], params, ns)
        else:
            r = r_symbol(leaves[1], leaves[0], ch[1], params, ns)
        target = (new_leaves[0],) + ch[1:]
        m[idx[target], j] = r
    return m, new_leaves


_LETTER_MEMO: dict = {}


def letter_matrix(params: ModelParams, leaves, tok: str, sign: int,
                  charge: Optional[QLabel] = None, ns=FLOAT_NS):
    """Matrix of one unit-power letter; returns (matrix, new_leaves).

    Results for the double-precision namespace are memoized; the memo is
    only ever extended, so concurrent readers are safe under the GIL.
    """
    leaves = tuple(leaves)
    if charge is None:
        charge = leaves[0]
    cacheable = ns is FLOAT_NS
    key = (params, leaves, charge, tok, sign)
    if cacheable and key in _LETTER_MEMO:
        return _LETTER_MEMO[key]
    basis = enumerate_basis(leaves, charge)
    if tok == "x":
        res = _wrap_matrix(leaves, basis, params, sign < 0, ns)
    elif tok == "h1":
        res = _half_pole_matrix(leaves, basis, params, sign < 0, ns)
    elif tok.startswith("b"):
        i = int(tok[1:]) - 1
        if i < 1:
            raise ValueError("exchange index must be >= 2")
        res = _half_exchange_matrix(leaves, basis, i, params, sign < 0, ns)
    else:
        raise ValueError(f"unknown letter {tok!r}")
    if cacheable:
        _LETTER_MEMO[key] = res
    return res


# ---------------------------------------------------------------------------
# braid matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BraidMatrix:
    """A braid operator on an IndefSpace, with any applied global phase."""

    matrix: np.ndarray
    space: IndefSpace
    phase: Optional[complex] = None

    @property
    def dim(self) -> int:
        return self.space.dim

    def pseudo_unitarity_defect(self) -> float:
        return pseudo_unitarity_defect(self.matrix, self.space)


def generator_matrix(space: IndefSpace, gen, power: int = 1,
                     global_phase: Optional[complex] = None,
                     ns=FLOAT_NS) -> BraidMatrix:
    """Matrix of a single generator power on the given basis.

    Raises LeakyPermutation when the letter at that power permutes the leaf
    labeling, so the basis is not preserved.  No phase is applied unless the
    caller passes one; it is recorded on the result.
    """
    tok = _normalize_gen(gen)
    word = BraidWord(((tok, power),))
    if word.permuted_leaves(space.leaves) != space.leaves:
        raise LeakyPermutation(f"{tok}^{power} does not preserve {space.leaves}")
    m = evaluate_word(space.params, space.leaves, word, charge=space.charge, ns=ns)
    if global_phase is not None:
        m = m * (global_phase ** power)
    return BraidMatrix(m, space, global_phase)


def _normalize_gen(gen) -> str:
    if isinstance(gen, int):
        return "x" if gen == 1 else f"b{gen}"
    return str(gen).lower()


def evaluate_word_open(params: ModelParams, leaves, word: BraidWord,
                       charge: Optional[QLabel] = None, ns=FLOAT_NS):
    """Like evaluate_word but permits a net permutation.

    Returns (matrix, final_leaves); the matrix maps the initial basis to the
    basis of the permuted system.
    """
    leaves = tuple(leaves)
    if charge is None:
        charge = leaves[0]
    cur = leaves
    basis0 = enumerate_basis(leaves, charge)
    m = _eye(len(basis0), ns)
    for tok, sgn in word.unit_letters():
        lm, cur_new = letter_matrix(params, cur, tok, sgn, charge, ns)
        m = lm @ m
        cur = cur_new
    return m, cur


def evaluate_word(params: ModelParams, leaves, word: BraidWord,
                  charge: Optional[QLabel] = None, ns=FLOAT_NS) -> np.ndarray:
    """Left-to-right product of letter matrices; leftmost acts first."""
    leaves = tuple(leaves)
    m, cur = evaluate_word_open(params, leaves, word, charge, ns)
    if cur != leaves:
        raise LeakyPermutation(f"word leaves the system as {cur}")
    return m


def evaluate(space: IndefSpace, word, ns=FLOAT_NS) -> BraidMatrix:
    """Evaluate a braid word (or its text form) as an operator on the space."""
    if isinstance(word, str):
        word = BraidWord.parse(word)
    m = evaluate_word(space.params, space.leaves, word, charge=space.charge, ns=ns)
    return BraidMatrix(m, space)


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

def _as_complex(m) -> np.ndarray:
    return np.asarray(m, dtype=complex)


def pseudo_unitarity_defect(matrix, space: IndefSpace) -> float:
    """max-norm of M^dagger J M - J for J = diag(metric signs)."""
    m = _as_complex(matrix)
    j = space.J
    return float(np.max(np.abs(m.conj().T @ j @ m - j)))


@dataclass(frozen=True)
class BlockDecomposition:
    computational: np.ndarray
    noncomputational: np.ndarray
    leakage: float


def block_decompose(matrix, space: IndefSpace, tol: Optional[float] = None) -> BlockDecomposition:
    """Split over the computational/noncomputational partition.

    Raises NotBlockDiagonal (carrying the off-block norm) when the matrix
    mixes the two sectors beyond tolerance.
    """
    m = _as_complex(matrix)
    mask = space.computational_mask
    if tol is None:
        tol = space.params.tol
    comp = np.ix_(mask, mask)
    nonc = np.ix_(~mask, ~mask)
    off1 = m[np.ix_(mask, ~mask)]
    off2 = m[np.ix_(~mask, mask)]
    leak = float(max(np.max(np.abs(off1)) if off1.size else 0.0,
                     np.max(np.abs(off2)) if off2.size else 0.0))
    if leak > tol:
        raise NotBlockDiagonal(leak)
    return BlockDecomposition(m[comp], m[nonc], leak)


@dataclass(frozen=True)
class OrderResult:
    projective: Optional[int]
    strict: Optional[int]
    max_checked: int
    defect: float
    scalar: Optional[complex] = None


def matrix_order(matrix, max_n: int, tol: float = 1e-10) -> OrderResult:
    """Least k <= max_n with M^k a unit scalar (projective) or identity (strict).

    The scalar compared against is the Frobenius-optimal multiple of the
    identity, trace(M^k)/dim.
    """
    m = _as_complex(matrix)
    n = m.shape[0]
    acc = np.eye(n, dtype=complex)
    eye = np.eye(n, dtype=complex)
    projective = strict = None
    best_defect = math.inf
    scalar = None
    for k in range(1, max_n + 1):
        acc = acc @ m
        lam = np.trace(acc) / n
        defect = float(np.max(np.abs(acc - lam * eye)))
        best_defect = min(best_defect, defect)
        if projective is None and defect < tol and abs(abs(lam) - 1) < tol:
            projective = k
            scalar = complex(lam)
        if strict is None and float(np.max(np.abs(acc - eye))) < tol:
            strict = k
        if projective is not None and strict is not None:
            break
        if projective is not None and k >= projective * n * 8:
            break  # strict order, when finite, divides a small multiple
    return OrderResult(projective, strict, max_n, best_defect, scalar)


# ---------------------------------------------------------------------------
# closed forms for the single-qubit system
# ---------------------------------------------------------------------------

def wrap_closed_form(params: ModelParams, phased: bool = False) -> np.ndarray:
    """Analytic wrap matrix on (alpha, sigma, sigma): diag(q^(3+a), q^(3-a)).

    With the special-unitary phase -q it becomes diag(q^a, q^-a).
    """
    al = params.alpha
    m = np.diag([q_power(3 + al), q_power(3 - al)])
    if phased:
        m = SPECIAL_UNITARY_PHASES["x"] * m
    return m


def exchange_closed_form(params: ModelParams, phased: bool = False) -> np.ndarray:
    """Analytic sigma-exchange matrix on (alpha, sigma, sigma).

    The phased version q^(-3/2) * M is special unitary with entries
    q^-1 (1+q^2)/(1-q^(+-2a)) on the diagonal and q^-2 sqrt(B+)/sqrt(B-)
    off the diagonal.
    """
    al = params.alpha
    bp, bm = computational_bubbles(params)
    rt = cmath.sqrt(bp) / cmath.sqrt(bm)
    q2 = q_power(2)
    m = q_power(-1) * np.array(
        [[(1 + q2) / (1 - q_power(2 * al)), q_power(-1) * rt],
         [q_power(-1) * rt, (1 + q2) / (1 - q_power(-2 * al))]])
    if not phased:
        m = m / SPECIAL_UNITARY_PHASES["b2"]
    return m


def two_qubit_block_form(params: ModelParams, gen: str) -> np.ndarray:
    """Expected 6x6 matrices on the two-qubit space, assembled from the
    single-qubit closed forms: the wrap and first exchange act on the first
    qubit, the composite pole braid b3 b2 x b2 b3 and the last exchange act
    on the second, with the stated scalars on the noncomputational pair.
    """
    al = params.alpha
    x1 = wrap_closed_form(params)
    b1 = exchange_closed_form(params)
    out = np.zeros((6, 6), dtype=complex)

    def first_qubit(u):
        return np.kron(np.eye(2), u)   # first-qubit bit varies fastest

    def second_qubit(u):
        return np.kron(u, np.eye(2))

    if gen == "x":
        out[:4, :4] = first_qubit(x1)
        out[4:, 4:] = x1
    elif gen == "b2":
        out[:4, :4] = first_qubit(b1)
        out[4:, 4:] = q_power(0.5) * np.eye(2)
    elif gen == "b4":
        out[:4, :4] = second_qubit(b1)
        out[4:, 4:] = q_power(0.5) * np.eye(2)
    elif gen == "j4":
        out[:4, :4] = second_qubit(x1)
        out[4:, 4:] = np.diag([q_power(1 - al), q_power(1 + al)])
    else:
        raise ValueError(f"no closed block form for {gen!r}")
    return out


J4_WORD = BraidWord.parse("b3 b2 x b2 b3")
