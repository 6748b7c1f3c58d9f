import numpy as np
import pytest

from commham import linalg
from commham.linalg import (
    ABELIAN,
    FULL,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    TRIVIAL,
    CapExceeded,
    I2,
    LabeledOp,
    NonHermitianError,
    algebra_classify,
    commutator_norm,
    embed,
    frob,
    ground_space_projector,
    herm_eig,
    operator_schmidt,
    partial_trace,
    trace_product_embedded,
)


def kron(*ms):
    out = np.eye(1, dtype=complex)
    for m in ms:
        out = np.kron(out, m)
    return out


def random_hermitian(n, rng):
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (m + m.conj().T) / 2


# ---------------------------------------------------------------- herm_eig


def test_herm_eig_pauli_z():
    w, v = herm_eig(PAULI_Z)
    assert np.allclose(w, [-1, 1])
    assert abs(abs(v[1, 0]) - 1) < 1e-12  # |1> comes first
    assert abs(abs(v[0, 1]) - 1) < 1e-12


def test_herm_eig_identity():
    w, _ = herm_eig(np.eye(4, dtype=complex))
    assert np.allclose(w, 1.0)


def test_herm_eig_projector_spectrum():
    m = (np.eye(4) + kron(PAULI_Z, PAULI_Z)) / 2
    w, _ = herm_eig(m)
    assert np.allclose(w, [0, 0, 1, 1])


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        herm_eig(np.array([[0, 1], [0, 0]], dtype=complex))


@pytest.mark.parametrize("seed", range(5))
def test_herm_eig_reconstruction(seed):
    rng = np.random.default_rng(seed)
    m = random_hermitian(16, rng)
    w, v = herm_eig(m)
    assert frob(v @ np.diag(w) @ v.conj().T - m) <= 1e-10 * 16


# ------------------------------------------------- ground_space_projector


def test_ground_projector_parity():
    z4 = kron(PAULI_Z, PAULI_Z, PAULI_Z, PAULI_Z)
    p = ground_space_projector(-z4)
    assert np.allclose(p, (np.eye(16) + z4) / 2, atol=1e-12)


def test_ground_projector_flat_spectrum():
    p = ground_space_projector(np.zeros((16, 16), dtype=complex))
    assert np.allclose(p, np.eye(16))


def test_ground_projector_ising_plaquette():
    # diagonal plaquette term -(Z1 Z2 + Z2 Z3 + Z3 Z4 + Z4 Z1); the ground
    # configs are found by direct enumeration of the 16 classical states
    signs = 1 - 2 * ((np.arange(16)[:, None] >> np.arange(3, -1, -1)[None, :]) & 1)
    energy = -(
        signs[:, 0] * signs[:, 1]
        + signs[:, 1] * signs[:, 2]
        + signs[:, 2] * signs[:, 3]
        + signs[:, 3] * signs[:, 0]
    )
    expected = np.diag((energy == energy.min()).astype(complex))
    p = ground_space_projector(np.diag(energy.astype(complex)))
    assert np.allclose(p, expected, atol=1e-12)
    assert expected[0, 0] == 1 and expected[15, 15] == 1 and expected.trace() == 2


@pytest.mark.parametrize("seed", range(4))
def test_ground_projector_is_projector(seed):
    rng = np.random.default_rng(seed)
    m = random_hermitian(16, rng)
    p = ground_space_projector(m)
    assert frob(p @ p - p) <= 1e-10
    assert frob(p - p.conj().T) <= 1e-10
    w, _ = herm_eig(m)
    assert frob(p @ m @ p - w[0] * p) <= 1e-8 * max(1.0, abs(w[0]))


# ------------------------------------------------------- operator_schmidt


def test_schmidt_product_operator():
    op = LabeledOp(kron(PAULI_Z, PAULI_Z), ("q1", "q2"))
    dec = operator_schmidt(op, "q2")
    assert len(dec.terms) == 1
    a, b = dec.terms[0]
    assert frob(np.kron(a.mat, b) - op.mat) < 1e-12


def test_schmidt_parity_projector_rank_two():
    z4 = kron(PAULI_Z, PAULI_Z, PAULI_Z, PAULI_Z)
    op = LabeledOp((np.eye(16) + z4) / 2, (0, 1, 2, 3))
    dec = operator_schmidt(op, 3)
    assert len(dec.terms) == 2


def test_schmidt_bell_projector_rank_four():
    # rank-1 projector onto (|00> + |11>)/sqrt(2); the singular values are
    # checked against an independent reshape + SVD oracle
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    proj = np.outer(psi, psi.conj())
    m = proj.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    svals = np.linalg.svd(m, compute_uv=False)
    assert np.allclose(svals, 0.5)

    dec = operator_schmidt(LabeledOp(proj, ("a", "b")), "b")
    assert len(dec.terms) == 4
    assert np.allclose(sorted(dec.singular_values), svals)


@pytest.mark.parametrize("seed", range(6))
def test_schmidt_reconstruction_and_orthogonality(seed):
    rng = np.random.default_rng(seed)
    op = LabeledOp(random_hermitian(16, rng), (0, 1, 2, 3))
    split = int(rng.integers(0, 4))
    dec = operator_schmidt(op, split)
    rest = [l for l in op.labels if l != split]
    rebuilt = sum(np.kron(a.mat, b) for a, b in dec.terms)
    target = linalg.permute_to(op, rest + [split]).mat
    assert frob(rebuilt - target) <= 1e-9 * frob(op.mat)
    for i, (ai, bi) in enumerate(dec.terms):
        for j, (aj, bj) in enumerate(dec.terms):
            if i != j:
                assert abs(np.trace(ai.mat @ aj.mat.conj().T)) < 1e-9
                assert abs(np.trace(bi @ bj.conj().T)) < 1e-9


# ------------------------------------------------------- algebra_classify


def test_classify_identity_trivial():
    assert algebra_classify([I2]).kind == TRIVIAL


def test_classify_z_abelian_computational_basis():
    cls = algebra_classify([I2, PAULI_Z])
    assert cls.kind == ABELIAN
    assert np.allclose(cls.basis, np.eye(2))  # |0> first, canonical phase


def test_classify_x_abelian_plus_minus():
    cls = algebra_classify([PAULI_X])
    assert cls.kind == ABELIAN
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    assert np.allclose(cls.basis[:, 0], plus)
    assert np.allclose(cls.basis[:, 1], minus)


def test_classify_full():
    assert algebra_classify([I2, PAULI_X, PAULI_Z]).kind == FULL


def test_classify_y_abelian_deterministic_order():
    cls = algebra_classify([PAULI_Y])
    assert cls.kind == ABELIAN
    # canonical order puts the +i state first (imaginary-part tiebreak)
    assert np.allclose(cls.basis[:, 0], np.array([1, 1j]) / np.sqrt(2))


@pytest.mark.parametrize("seed", range(5))
def test_classify_rotated_diagonal(seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    u = q * (np.diag(r) / np.abs(np.diag(r)))
    gens = [u @ np.diag(rng.standard_normal(2).astype(complex)) @ u.conj().T for _ in range(2)]
    cls = algebra_classify(gens)
    assert cls.kind == ABELIAN
    for col in cls.basis.T:
        overlaps = np.abs(u.conj().T @ col)
        assert max(overlaps) > 1 - 1e-8  # basis states match u's columns


# ---------------------------------------------------------- partial_trace


def test_partial_trace_z_times_identity():
    op = LabeledOp(kron(PAULI_Z, I2), ("q1", "q2"))
    out = partial_trace(op, ["q1"])
    assert out.labels == ("q1",)
    assert np.allclose(out.mat, 2 * PAULI_Z)


def test_partial_trace_bell_marginal():
    psi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    op = LabeledOp(np.outer(psi, psi.conj()), ("q1", "q2"))
    out = partial_trace(op, ["q2"])
    assert np.allclose(out.mat, I2 / 2)
    full = partial_trace(op, [])
    assert np.allclose(full.mat, [[1.0]])


def test_partial_trace_unknown_label():
    op = LabeledOp(PAULI_Z, ("q1",))
    with pytest.raises(ValueError):
        partial_trace(op, ["nope"])


# -------------------------------------------------- trace_product_embedded


def test_trace_overlap_of_projectors():
    p0 = LabeledOp(np.array([[1, 0], [0, 0]], dtype=complex), ("q1",))
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    pp = LabeledOp(np.outer(plus, plus.conj()), ("q1",))
    assert abs(trace_product_embedded([p0, pp]) - 0.5) < 1e-12


def test_trace_identity():
    op = LabeledOp(np.eye(4, dtype=complex), ("q1", "q2"))
    assert abs(trace_product_embedded([op]) - 4.0) < 1e-12


def test_trace_bell_chain():
    # two Bell projectors overlapping on q2; oracle: explicit dense kron on
    # the 8-dimensional space
    psi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    bell = np.outer(psi, psi.conj())
    d1 = np.kron(bell, np.eye(2))
    d2 = np.kron(np.eye(2), bell)
    expected = np.trace(d1 @ d2)
    assert abs(expected - 0.5) < 1e-12

    a = LabeledOp(bell, ("q1", "q2"))
    b = LabeledOp(bell, ("q2", "q3"))
    assert abs(trace_product_embedded([a, b]) - expected) < 1e-12


@pytest.mark.parametrize("seed", range(4))
def test_trace_dense_vs_sparse_strategies(seed):
    rng = np.random.default_rng(seed)
    ops = []
    for labels in [(0, 1, 2), (2, 3), (1, 3, 4)]:
        n = len(labels)
        m = rng.standard_normal((2**n, 2**n)) + 1j * rng.standard_normal((2**n, 2**n))
        ops.append(LabeledOp(m, labels))
    dense = linalg._trace_product_dense(
        [o.mat for o in ops], [[0, 1, 2], [2, 3], [1, 3, 4]], 5
    )
    sparse = linalg._trace_product_sparse(
        [o.mat for o in ops], [[0, 1, 2], [2, 3], [1, 3, 4]], 5
    )
    # oracle: literal embeddings multiplied densely
    mats = [embed(o, [0, 1, 2, 3, 4]).mat for o in ops]
    expected = np.trace(mats[0] @ mats[1] @ mats[2])
    assert abs(dense - expected) < 1e-9
    assert abs(sparse - expected) < 1e-9
    assert abs(trace_product_embedded(ops) - expected) < 1e-9


def test_trace_sparse_fill_in_fallback(monkeypatch):
    # dense-structured operators can defeat the sparse half-products; the
    # basis-block sweep must take over and agree
    rng = np.random.default_rng(3)
    ops = []
    for labels in [(0, 1, 2, 3), (2, 3, 4, 5), (4, 5, 6, 0)]:
        m = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        ops.append(LabeledOp(m, labels))
    full = sorted({l for op in ops for l in op.labels})
    mats = [o.mat for o in ops]
    pos = [[full.index(l) for l in o.labels] for o in ops]
    expected = linalg._trace_product_sparse(mats, pos, len(full))
    monkeypatch.setattr(linalg, "_SPARSE_NNZ_BUDGET", 10)
    forced = linalg._trace_product_sparse(mats, pos, len(full))
    assert abs(forced - expected) < 1e-8 * max(1.0, abs(expected))


def test_trace_consistency_with_partial_trace():
    rng = np.random.default_rng(11)
    m = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    op = LabeledOp(m, ("a", "b", "c"))
    assert abs(trace_product_embedded([op]) - partial_trace(op, []).mat[0, 0]) < 1e-10


def test_trace_cap():
    op = LabeledOp(PAULI_Z, (0,))
    with pytest.raises(CapExceeded):
        trace_product_embedded([op], cap=0)


# -------------------------------------------------------- commutator_norm


def test_commutator_stabilizer_pair():
    # ZZ and XX on the same two qubits anticommute twice, hence commute;
    # sharing only one anticommuting site they do not
    a = LabeledOp(kron(PAULI_Z, PAULI_Z), (1, 2))
    b = LabeledOp(kron(PAULI_X, PAULI_X), (1, 2))
    assert commutator_norm(a, b) < 1e-12
    c = LabeledOp(kron(PAULI_X, PAULI_X), (2, 3))
    assert commutator_norm(a, c) > 1.0


def test_commutator_x_z():
    a = LabeledOp(PAULI_Z, ("q1",))
    b = LabeledOp(PAULI_X, ("q1",))
    assert abs(commutator_norm(a, b) - 2 * np.sqrt(2)) < 1e-12


def test_commutator_toric_neighbors():
    z4 = (np.eye(16) + kron(PAULI_Z, PAULI_Z, PAULI_Z, PAULI_Z)) / 2
    x4 = (np.eye(16) + kron(PAULI_X, PAULI_X, PAULI_X, PAULI_X)) / 2
    # neighboring plaquettes share exactly two qubits
    a = LabeledOp(z4, (0, 1, 2, 3))
    b = LabeledOp(x4, (2, 3, 4, 5))
    assert commutator_norm(a, b) < 1e-12
