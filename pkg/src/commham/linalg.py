"""Dense complex linear algebra on small multi-qubit operators.

Operators carry an ordered tuple of qubit labels; label 0 is the most
significant tensor factor.  Everything here works on a handful of qubits
(16x16 plaquette matrices, 64x64 commutator embeddings) except
:func:`trace_product_embedded`, which evaluates traces of products of
locally-supported operators on up to 22 qubits by sweeping basis vectors
(dense blocks for small systems, sparse matrices beyond).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

TRIVIAL = "trivial"
ABELIAN = "abelian"
FULL = "full"

_DENSE_MAX_QUBITS = 10
_DENSE_BLOCK_ENTRIES = 1 << 24  # ~268 MB of complex128 per work block
_SPARSE_NNZ_BUDGET = 40_000_000  # fill-in limit before falling back to the sweep


class NonHermitianError(ValueError):
    """Input matrix is not Hermitian within tolerance."""


class BasisMismatch(ValueError):
    """Operators expected to share an eigenbasis do not."""


class CapExceeded(ValueError):
    """A computation exceeds its configured size cap."""


@dataclass(frozen=True, eq=False)
class LabeledOp:
    """A square operator on 2**k dimensions with k ordered qubit labels."""

    mat: np.ndarray
    labels: tuple

    def __post_init__(self) -> None:
        mat = np.asarray(self.mat, dtype=complex)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "labels", tuple(self.labels))
        k = len(self.labels)
        if mat.shape != (2**k, 2**k):
            raise ValueError(f"matrix shape {mat.shape} does not match {k} labels")

    @property
    def n_qubits(self) -> int:
        return len(self.labels)


def frob(m: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(m)))


def _tensorized(op: LabeledOp) -> np.ndarray:
    k = op.n_qubits
    return op.mat.reshape((2,) * (2 * k))


def permute_to(op: LabeledOp, new_labels: Sequence) -> LabeledOp:
    new_labels = tuple(new_labels)
    if new_labels == op.labels:
        return op
    if set(new_labels) != set(op.labels) or len(new_labels) != len(op.labels):
        raise ValueError("new labels must be a permutation of the old ones")
    k = op.n_qubits
    perm = [op.labels.index(l) for l in new_labels]
    t = _tensorized(op).transpose(perm + [k + p for p in perm])
    return LabeledOp(t.reshape(2**k, 2**k), new_labels)


def embed(op: LabeledOp, labels: Sequence) -> LabeledOp:
    """Pad op with identities so it lives on the given larger label set."""
    labels = tuple(labels)
    extra = [l for l in labels if l not in op.labels]
    if len(extra) + op.n_qubits != len(labels):
        raise ValueError("target labels must contain all of the operator's labels")
    big = np.kron(op.mat, np.eye(2 ** len(extra)))
    return permute_to(LabeledOp(big, op.labels + tuple(extra)), labels)


def partial_trace(op: LabeledOp, keep: Iterable) -> LabeledOp:
    """Trace out all labels not in keep, preserving the original label order."""
    keep = set(keep)
    unknown = keep - set(op.labels)
    if unknown:
        raise ValueError(f"unknown labels {unknown}")
    kept = [l for l in op.labels if l in keep]
    traced = [l for l in op.labels if l not in keep]
    p = permute_to(op, kept + traced)
    dk, dt = 2 ** len(kept), 2 ** len(traced)
    m = p.mat.reshape(dk, dt, dk, dt)
    return LabeledOp(np.einsum("atbt->ab", m), kept)


def left_mul_site(op: LabeledOp, label, m2: np.ndarray) -> LabeledOp:
    """(m2 at label) @ op."""
    k = op.n_qubits
    i = op.labels.index(label)
    t = np.tensordot(m2, _tensorized(op), axes=([1], [i]))
    t = np.moveaxis(t, 0, i)
    return LabeledOp(t.reshape(2**k, 2**k), op.labels)


def right_mul_site(op: LabeledOp, label, m2: np.ndarray) -> LabeledOp:
    """op @ (m2 at label)."""
    k = op.n_qubits
    i = op.labels.index(label)
    t = np.tensordot(_tensorized(op), m2, axes=([k + i], [0]))
    t = np.moveaxis(t, -1, k + i)
    return LabeledOp(t.reshape(2**k, 2**k), op.labels)


def sandwich_site(op: LabeledOp, label, proj: np.ndarray) -> LabeledOp:
    """proj op proj with the 2x2 proj acting on one labelled qubit."""
    return right_mul_site(left_mul_site(op, label, proj), label, proj)


def state_projector(vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())


def herm_eig(mat: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises NonHermitianError when the anti-Hermitian part exceeds
    tol * max(1, ||m||_F).
    """
    mat = np.asarray(mat, dtype=complex)
    if frob(mat - mat.conj().T) > tol * max(1.0, frob(mat)):
        raise NonHermitianError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(mat)
    return w, v


def ground_space_projector(mat: np.ndarray, gap_tol: float = 1e-9) -> np.ndarray:
    """Projector onto the span of eigenvectors near the minimal eigenvalue.

    The ground band is all eigenvalues within gap_tol * (spread + 1) of the
    minimum; the +1 keeps the band nonempty for flat spectra such as h = 0.
    """
    w, v = herm_eig(mat)
    band = gap_tol * (w[-1] - w[0] + 1.0)
    sel = v[:, w <= w[0] + band]
    return sel @ sel.conj().T


@dataclass
class OperatorSchmidt:
    """Trace-orthogonal product expansion across a one-qubit bipartition.

    terms[i] is (A_i, B_i) with A_i on the remaining labels and B_i a 2x2
    on the split qubit; sum_i A_i (x) B_i reconstructs the input.
    """

    terms: list[tuple[LabeledOp, np.ndarray]]
    singular_values: np.ndarray


def operator_schmidt(op: LabeledOp, split) -> OperatorSchmidt:
    if split not in op.labels:
        raise ValueError(f"label {split!r} not in operator labels")
    rest = [l for l in op.labels if l != split]
    p = permute_to(op, rest + [split])
    r = 2 ** len(rest)
    m = p.mat.reshape(r, 2, r, 2)
    t = m.transpose(0, 2, 1, 3).reshape(r * r, 4)
    u, s, vh = np.linalg.svd(t, full_matrices=False)
    terms: list[tuple[LabeledOp, np.ndarray]] = []
    keep = s > 1e-12 * s[0] if s.size and s[0] > 0 else np.zeros_like(s, dtype=bool)
    for i in np.nonzero(keep)[0]:
        c = np.sqrt(s[i])
        a = LabeledOp((c * u[:, i]).reshape(r, r), tuple(rest))
        b = (c * vh[i, :]).reshape(2, 2)
        terms.append((a, b))
    return OperatorSchmidt(terms, s[keep])


@dataclass
class AlgebraClass:
    """The unital *-algebra generated by a set of 2x2 matrices.

    kind is one of "trivial" (scalars only), "abelian" (a common eigenbasis
    exists; `basis` holds its two canonically ordered and phased states as
    columns), or "full" (all of the 2x2 matrices).
    """

    kind: str
    basis: np.ndarray | None = None


def _vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m, dtype=complex).reshape(-1)


class _Span:
    """Orthonormal basis of a subspace of vectorized 2x2 matrices."""

    def __init__(self, tol: float) -> None:
        self.tol = tol
        self.basis: list[np.ndarray] = []

    def add(self, m: np.ndarray) -> bool:
        v = _vec(m)
        norm = np.linalg.norm(v)
        if norm <= self.tol:
            return False
        for q in self.basis:
            v = v - (q.conj() @ v) * q
        resid = np.linalg.norm(v)
        if resid > self.tol * max(1.0, norm):
            self.basis.append(v / resid)
            return True
        return False

    def mats(self) -> list[np.ndarray]:
        return [q.reshape(2, 2) for q in self.basis]

    def __len__(self) -> int:
        return len(self.basis)


def algebra_classify(ops: Sequence[np.ndarray], tol: float = 1e-9, seed: int = 0) -> AlgebraClass:
    """Classify the unital *-algebra generated by single-qubit operators.

    The span of {1, ops, adjoints} is closed under products until stable;
    dimension 1 is trivial, 2 abelian (dimension-2 unital *-closed
    subalgebras of the 2x2 matrices are automatically commutative), and
    anything larger generates the full algebra.
    """
    span = _Span(tol)
    span.add(I2)
    for m in ops:
        m = np.asarray(m, dtype=complex)
        span.add(m)
        span.add(m.conj().T)
    while len(span) < 4:
        grew = False
        basis = span.mats()
        for a in basis:
            for b in basis:
                if span.add(a @ b):
                    grew = True
        if not grew:
            break
    dim = len(span)
    if dim == 1:
        return AlgebraClass(TRIVIAL)
    if dim == 2:
        return AlgebraClass(ABELIAN, common_eigenbasis(ops, tol=tol, seed=seed))
    return AlgebraClass(FULL)


def common_eigenbasis(ops: Sequence[np.ndarray], tol: float = 1e-9, seed: int = 0) -> np.ndarray:
    """Shared orthonormal eigenbasis of commuting normal 2x2 operators.

    Diagonalizes a generic real combination of the (traceless) Hermitian and
    anti-Hermitian parts of the generators, redrawing coefficients while the
    two eigenvalues are closer than 1e-8.  Raises BasisMismatch when some
    generator is not diagonal in the resulting basis, which signals
    non-commuting input.
    """
    parts: list[np.ndarray] = []
    for m in ops:
        m = np.asarray(m, dtype=complex)
        for h in ((m + m.conj().T) / 2, (m - m.conj().T) / 2j):
            h = h - (np.trace(h) / 2) * I2
            norm = frob(h)
            if norm > tol:
                parts.append(h / norm)
    if not parts:
        raise ValueError("no non-scalar generators; eigenbasis is arbitrary")
    rng = np.random.default_rng(seed)
    for _ in range(64):
        combo = sum(c * p for c, p in zip(rng.standard_normal(len(parts)), parts))
        w, v = np.linalg.eigh(combo)
        if w[1] - w[0] < 1e-8:
            continue
        for m in ops:
            d = v.conj().T @ np.asarray(m, dtype=complex) @ v
            if abs(d[0, 1]) + abs(d[1, 0]) > 1e-8 * max(1.0, frob(m)):
                raise BasisMismatch("generators do not share an eigenbasis")
        return canonical_basis_pair(v)
    raise BasisMismatch("could not separate eigenvalues of a generic combination")


def canonical_state(vec: np.ndarray) -> np.ndarray:
    """Fix the global phase: first non-negligible amplitude real positive."""
    vec = np.asarray(vec, dtype=complex)
    for a in vec:
        if abs(a) > 1e-12:
            return vec * (a.conjugate() / abs(a))
    raise ValueError("zero state")


def canonical_basis_pair(v: np.ndarray) -> np.ndarray:
    """Canonically phase and order two orthonormal qubit states (columns).

    Order: larger |amplitude on 0> first; ties broken by the real part of
    the amplitude on |1>, then by its imaginary part.
    """
    a = canonical_state(v[:, 0])
    b = canonical_state(v[:, 1])

    def key(s: np.ndarray) -> tuple[float, float, float]:
        return (abs(s[0]), s[1].real, s[1].imag)

    ka, kb = key(a), key(b)
    for xa, xb in zip(ka, kb):
        if xa > xb + 1e-9:
            return np.column_stack([a, b])
        if xb > xa + 1e-9:
            return np.column_stack([b, a])
    return np.column_stack([a, b])


def commutator_norm(a: LabeledOp, b: LabeledOp) -> float:
    """Frobenius norm of [a, b] on the union of their labels."""
    labels = sorted(set(a.labels) | set(b.labels))
    am = embed(a, labels).mat
    bm = embed(b, labels).mat
    return frob(am @ bm - bm @ am)


def is_scalar_action(m2: np.ndarray, tol: float = 1e-9) -> bool:
    """True when a 2x2 operator is a multiple of the identity."""
    m2 = np.asarray(m2, dtype=complex)
    traceless = m2 - (np.trace(m2) / 2) * I2
    return frob(traceless) <= tol * max(frob(m2), 1e-30)


# ---------------------------------------------------------------------------
# Traces of products of locally-supported operators on many qubits.


def trace_product_embedded(ops: Sequence[LabeledOp], cap: int = 22) -> complex:
    """tr of the ordered product of operators embedded on their label union.

    Each operator is padded with identities onto the union of all labels
    (sorted); the trace of the product is evaluated by applying the
    operators to blocks of computational basis vectors, kept dense up to 12
    qubits and as sparse matrices beyond.
    """
    if not ops:
        raise ValueError("need at least one operator")
    labels = sorted({l for op in ops for l in op.labels})
    n = len(labels)
    if n > cap:
        raise CapExceeded(f"{n} qubits exceeds cap {cap}")
    positions = [[labels.index(l) for l in op.labels] for op in ops]
    mats = [op.mat for op in ops]
    if n <= _DENSE_MAX_QUBITS:
        return _trace_product_dense(mats, positions, n)
    return _trace_product_sparse(mats, positions, n)


def apply_to_columns(mat: np.ndarray, positions: Sequence[int], block: np.ndarray, n: int) -> np.ndarray:
    """Apply a local operator to each column of a 2**n x m block."""
    k = len(positions)
    t = mat.reshape((2,) * (2 * k))
    b = block.reshape((2,) * n + (-1,))
    out = np.tensordot(t, b, axes=(list(range(k, 2 * k)), list(positions)))
    out = np.moveaxis(out, list(range(k)), list(positions))
    return out.reshape(block.shape)


def _trace_product_dense(mats, positions, n) -> complex:
    dim = 1 << n
    block = max(1, min(dim, _DENSE_BLOCK_ENTRIES // dim))
    total = 0.0 + 0.0j
    for c0 in range(0, dim, block):
        width = min(block, dim - c0)
        cols = np.zeros((dim, width), dtype=complex)
        cols[c0 + np.arange(width), np.arange(width)] = 1.0
        for mat, pos in zip(reversed(mats), reversed(positions)):
            cols = apply_to_columns(mat, pos, cols, n)
        total += np.einsum("ii->", cols[c0 : c0 + width, :])
    return complex(total)


def embed_sparse(mat: np.ndarray, positions: Sequence[int], n: int) -> sp.csr_matrix:
    """Identity-padded sparse embedding; position 0 is the most significant bit."""
    k = len(positions)
    weights = np.array([1 << (n - 1 - p) for p in positions], dtype=np.int64)
    rest = sorted(set(range(n)) - set(positions))
    rest_w = np.array([1 << (n - 1 - p) for p in rest], dtype=np.int64)
    r = np.arange(1 << len(rest), dtype=np.int64)
    spread = np.zeros_like(r)
    for s, w in enumerate(reversed(rest_w)):
        spread |= ((r >> s) & 1) * w
    rows16, cols16 = np.nonzero(mat)
    vals = mat[rows16, cols16]

    def lift(idx4: np.ndarray) -> np.ndarray:
        bits = (idx4[:, None] >> np.arange(k - 1, -1, -1)[None, :]) & 1
        return bits @ weights

    rows = (lift(rows16)[:, None] | spread[None, :]).ravel()
    cols = (lift(cols16)[:, None] | spread[None, :]).ravel()
    data = np.repeat(vals, len(r))
    dim = 1 << n
    return sp.csr_matrix((data, (rows, cols)), shape=(dim, dim))


def _trace_product_sparse(mats, positions, n) -> complex:
    # tr[E_1 .. E_m] = sum over the elementwise product of the two half
    # products L = E_1..E_j and R^T; the split is balanced by the per-row
    # fill estimate so neither half densifies.  Dense-structured operators
    # can still fill in, in which case the basis-block sweep takes over
    # (slow, but bounded memory).
    growth = [np.log2(max(1, int(np.max(np.count_nonzero(m, axis=1))))) for m in mats]
    total_growth = sum(growth)
    acc, split = 0.0, len(mats) // 2
    for j in range(1, len(mats)):
        acc += growth[j - 1]
        if acc >= total_growth / 2:
            split = j
            break
    split = max(1, min(len(mats) - 1, split)) if len(mats) > 1 else 1
    embedded = [embed_sparse(m, p, n) for m, p in zip(mats, positions)]
    if len(embedded) == 1:
        return complex(embedded[0].diagonal().sum())
    try:
        left = embedded[0]
        for e in embedded[1:split]:
            left = left @ e
            if left.nnz > _SPARSE_NNZ_BUDGET:
                raise _FillIn
        right = embedded[split]
        for e in embedded[split + 1 :]:
            right = right @ e
            if right.nnz > _SPARSE_NNZ_BUDGET:
                raise _FillIn
    except _FillIn:
        return _trace_product_dense(mats, positions, n)
    return complex(left.multiply(right.transpose()).sum())


class _FillIn(Exception):
    pass
