"""Plaquette Hamiltonians with mutually commuting terms, and generators.

A model is a lattice plus one Hermitian 16x16 matrix per plaquette, acting
on the plaquette's corners in the fixed TL, TR, BR, BL order.  Generators
cover the stabilizer-type model (Z-words on black plaquettes, X-words on
white), classical Ising models in a field, and three seeded random
families used for testing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import lattice
from .lattice import LatticeSpec, Plaquette, Vertex, is_black
from .linalg import (
    LabeledOp,
    commutator_norm,
    frob,
    ground_space_projector,
)

HERMITICITY_TOL = 1e-10
COMMUTATION_TOL = 1e-9


class ModelError(ValueError):
    """Malformed model input."""


class NonCommutingError(ModelError):
    """Operators required to commute do not."""


@dataclass(frozen=True, eq=False)
class CommutingModel:
    """Lattice geometry plus one Hermitian plaquette term per plaquette."""

    spec: LatticeSpec
    terms: dict[Plaquette, np.ndarray]

    def __post_init__(self) -> None:
        valid = set(lattice.plaquettes(self.spec))
        terms = {}
        for p, m in self.terms.items():
            if p not in valid:
                raise ModelError(f"plaquette {p} not on the lattice")
            m = np.asarray(m, dtype=complex)
            if m.shape != (16, 16):
                raise ModelError(f"term at {p} has shape {m.shape}, expected 16x16")
            if frob(m - m.conj().T) > HERMITICITY_TOL * max(1.0, frob(m)):
                raise ModelError(f"term at {p} is not Hermitian")
            terms[p] = m
        missing = valid - set(terms)
        if missing:
            raise ModelError(f"missing terms for plaquettes {sorted(missing)}")
        object.__setattr__(self, "terms", terms)

    @property
    def n_qubits(self) -> int:
        return self.spec.n_vertices

    def term_op(self, p: Plaquette) -> LabeledOp:
        return LabeledOp(self.terms[p], tuple(lattice.corners(self.spec, p)))


@dataclass
class CommutationReport:
    ok: bool
    violations: list[tuple[Plaquette, Plaquette, float]]


def _intersecting_pairs(model: CommutingModel):
    plist = lattice.plaquettes(model.spec)
    corner_sets = {p: set(lattice.corners(model.spec, p)) for p in plist}
    for i, p in enumerate(plist):
        for q in plist[i + 1 :]:
            if corner_sets[p] & corner_sets[q]:
                yield p, q


def check_commuting(model: CommutingModel, tol: float = COMMUTATION_TOL) -> CommutationReport:
    """Exhaustively check all plaquette pairs that share at least one qubit.

    Disjoint pairs commute trivially and are skipped.
    """
    violations = []
    cache: dict[tuple, float] = {}
    for p, q in _intersecting_pairs(model):
        norm = _cached_commutator(model.term_op(p), model.term_op(q), cache)
        if norm > tol:
            violations.append((p, q, norm))
    return CommutationReport(not violations, violations)


def _cached_commutator(a: LabeledOp, b: LabeledOp, cache: dict) -> float:
    # the norm depends only on the two matrices and how their labels align
    shared = [l for l in a.labels if l in b.labels]
    key = (
        a.mat.tobytes(),
        b.mat.tobytes(),
        tuple(a.labels.index(l) for l in shared),
        tuple(b.labels.index(l) for l in shared),
    )
    if key not in cache:
        cache[key] = commutator_norm(a, b)
    return cache[key]


def ground_projectors(
    model: CommutingModel, gap_tol: float = 1e-9, tol: float = COMMUTATION_TOL
) -> dict[Plaquette, np.ndarray]:
    """Per-plaquette projectors onto each term's lowest eigenspace.

    Raises ModelError when two overlapping projectors fail to commute,
    which signals non-commuting input or a borderline degeneracy split by
    the gap tolerance.
    """
    projs = {p: ground_space_projector(m, gap_tol) for p, m in model.terms.items()}
    cache: dict[tuple, float] = {}
    for p, q in _intersecting_pairs(model):
        a = LabeledOp(projs[p], tuple(lattice.corners(model.spec, p)))
        b = LabeledOp(projs[q], tuple(lattice.corners(model.spec, q)))
        norm = _cached_commutator(a, b, cache)
        if norm > tol:
            raise NonCommutingError(
                f"ground projectors at {p} and {q} do not commute (norm {norm:.2e})"
            )
    return projs


# ---------------------------------------------------------------------------
# Generators


def _pauli_word(m2: np.ndarray) -> np.ndarray:
    w = m2
    for _ in range(3):
        w = np.kron(w, m2)
    return w


_Z4 = _pauli_word(np.array([[1, 0], [0, -1]], dtype=complex))
_X4 = _pauli_word(np.array([[0, 1], [1, 0]], dtype=complex))


def gen_toric(spec: LatticeSpec) -> CommutingModel:
    """Stabilizer model: h = -Z^(x)4 on black plaquettes, -X^(x)4 on white."""
    terms = {}
    for p in lattice.plaquettes(spec):
        terms[p] = -_Z4 if is_black(p) else -_X4
    return CommutingModel(spec, terms)


def gen_signed_toric(
    spec: LatticeSpec,
    seed: int | None = None,
    black_signs: Mapping[Plaquette, int] | None = None,
    white_signs: Mapping[Plaquette, int] | None = None,
) -> CommutingModel:
    """Stabilizer model with per-plaquette signs h = -s Z^(x)4 / -s X^(x)4.

    Signs default to an independent seeded +-1 draw per plaquette.  On a
    periodic lattice the product of all signs of one color must be +1 for a
    common ground state to exist, so random draws are frustrated half the
    time.
    """
    rng = np.random.default_rng(seed)
    terms = {}
    for p in lattice.plaquettes(spec):
        given = (black_signs if is_black(p) else white_signs) or {}
        s = int(given.get(p, 0)) or int(rng.choice((-1, 1)))
        terms[p] = (-s * _Z4) if is_black(p) else (-s * _X4)
    return CommutingModel(spec, terms)


def gen_ising(
    spec: LatticeSpec,
    couplings: float | Mapping[lattice.Edge, float] = 1.0,
    fields: float | Mapping[Vertex, float] = 0.0,
) -> CommutingModel:
    """Classical Ising model in a field, packaged as plaquette terms.

    Each lattice edge contributes -J Z Z to exactly one plaquette (the
    black one when the edge borders two, else the unique one) and each
    vertex field is split evenly over the plaquettes containing it, so the
    terms sum to -sum_e J_e Z Z - sum_v f_v Z_v exactly once.  All terms
    are diagonal, hence commuting.
    """
    all_edges = lattice.edges(spec)
    if not isinstance(couplings, Mapping):
        couplings = {e: float(couplings) for e in all_edges}
    if not isinstance(fields, Mapping):
        fields = {v: float(fields) for v in spec.vertices()}

    owned: dict[Plaquette, list[tuple[lattice.Edge, float]]] = {}
    for e in all_edges:
        owner = lattice.edge_owner(spec, *e)
        owned.setdefault(owner, []).append((e, couplings[e]))

    degree = {v: len(lattice.incident_plaquettes(spec, v)) for v in spec.vertices()}
    signs = 1 - 2 * ((np.arange(16)[:, None] >> np.arange(3, -1, -1)[None, :]) & 1)

    terms = {}
    for p in lattice.plaquettes(spec):
        cs = lattice.corners(spec, p)
        diag = np.zeros(16)
        for e, j in owned.get(p, []):
            ia, ib = cs.index(e[0]), cs.index(e[1])
            diag -= j * signs[:, ia] * signs[:, ib]
        for i, v in enumerate(cs):
            diag -= (fields[v] / degree[v]) * signs[:, i]
        terms[p] = np.diag(diag.astype(complex))
    return CommutingModel(spec, terms)


def _haar_qubit_unitary(rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def gen_rotated_classical(
    spec: LatticeSpec, seed: int = 0
) -> tuple[CommutingModel, dict[Vertex, np.ndarray]]:
    """Random diagonal terms conjugated by one random unitary per vertex.

    All terms are diagonal in the same rotated product basis, so they
    commute.  Returns the model together with the per-vertex unitaries
    (the slice bases the pipeline should rediscover).
    """
    rng = np.random.default_rng(seed)
    units = {v: _haar_qubit_unitary(rng) for v in spec.vertices()}
    terms = {}
    for p in lattice.plaquettes(spec):
        u = np.eye(1, dtype=complex)
        for v in lattice.corners(spec, p):
            u = np.kron(u, units[v])
        diag = rng.standard_normal(16)
        m = u @ np.diag(diag.astype(complex)) @ u.conj().T
        terms[p] = (m + m.conj().T) / 2
    return CommutingModel(spec, terms), units


def gen_random(spec: LatticeSpec, seed: int = 0, method: str = "rotated-classical") -> CommutingModel:
    """Seeded random commuting models; method is one of
    "rotated-classical", "signed-toric", "diagonal-field"."""
    method = method.replace("_", "-")
    if method == "rotated-classical":
        return gen_rotated_classical(spec, seed)[0]
    if method == "signed-toric":
        return gen_signed_toric(spec, seed)
    if method == "diagonal-field":
        rng = np.random.default_rng(seed)
        couplings = {e: float(rng.choice((-1.0, 1.0))) for e in lattice.edges(spec)}
        fields = {v: float(rng.normal(0.0, 0.5)) for v in spec.vertices()}
        return gen_ising(spec, couplings, fields)
    raise ValueError(f"unknown method {method!r}")
