"""Brute-force ground truth on the full 2**N-dimensional space.

Everything here evaluates exact traces by embedding plaquette operators on
all N qubits, deliberately bypassing the chain machinery of the verifier,
so the two paths can certify each other.  The trace of the product of all
ground projectors is the joint ground-space dimension and must come out an
integer for genuinely commuting input.
"""
from __future__ import annotations

from . import lattice
from .linalg import CapExceeded, LabeledOp, trace_product_embedded
from .model import CommutingModel, ground_projectors
from .verifier import (
    Certificate,
    PreparedModel,
    _as_prepared,
    apply_certificate,
    certificates_lex,
    compute_omega,
)

INTEGRALITY_TOL = 1e-6


class IntegralityError(ArithmeticError):
    """A trace that must be an integer is not; the input terms likely do
    not commute."""


def _layer_ops(model: CommutingModel) -> tuple[list[LabeledOp], list[LabeledOp]]:
    projs = ground_projectors(model)
    blacks, whites = [], []
    for p in lattice.plaquettes(model.spec):
        op = LabeledOp(projs[p], tuple(lattice.corners(model.spec, p)))
        (blacks if lattice.is_black(p) else whites).append(op)
    return blacks, whites


def total_overlap(model: CommutingModel, cap: int = 22) -> float:
    """tr[(product of black projectors)(product of white projectors)]."""
    if model.n_qubits > cap:
        raise CapExceeded(f"{model.n_qubits} qubits exceeds cap {cap}")
    blacks, whites = _layer_ops(model)
    return trace_product_embedded(blacks + whites, cap=cap).real


def ground_dim(model: CommutingModel, cap: int = 22) -> int:
    """Dimension of the joint ground space, tr of the product of all
    projectors, asserted to be integral."""
    if model.n_qubits > cap:
        raise CapExceeded(f"{model.n_qubits} qubits exceeds cap {cap}")
    projs = ground_projectors(model)
    ops = [
        LabeledOp(projs[p], tuple(lattice.corners(model.spec, p)))
        for p in lattice.plaquettes(model.spec)
    ]
    val = trace_product_embedded(ops, cap=cap).real
    nearest = round(val)
    if abs(val - nearest) > INTEGRALITY_TOL or nearest < 0:
        raise IntegralityError(
            f"trace {val!r} is not a non-negative integer within {INTEGRALITY_TOL}"
        )
    return int(nearest)


def dense_omega(
    m: CommutingModel | PreparedModel, cert: Certificate, cap: int = 12
) -> float:
    """Certificate value evaluated as one embedded trace on all N qubits,
    bypassing effective states, overlap graphs, and chain contraction."""
    prep = _as_prepared(m)
    n = prep.model.n_qubits
    if n > cap:
        raise CapExceeded(f"{n} qubits exceeds dense cap {cap}")
    sliced = apply_certificate(prep, cert)
    ordered = []
    for p in lattice.plaquettes(prep.model.spec):
        if lattice.is_black(p):
            ordered.append(sliced[p])
    for p in lattice.plaquettes(prep.model.spec):
        if not lattice.is_black(p):
            ordered.append(sliced[p])
    return trace_product_embedded(ordered, cap=cap).real


def certificate_sum(
    m: CommutingModel | PreparedModel,
    max_bits: int = 24,
    method: str = "chain",
    check_tol: float = 1e-8,
) -> tuple[float, list[tuple[Certificate, float]]]:
    """Sum of the certificate value over the whole certificate space.

    The sum telescopes back to total_overlap; the two are asserted equal,
    which exercises slicing, tracing, and contraction against the plain
    embedded product.  `method` picks the per-certificate evaluator:
    "chain" (the verifier) or "dense" (the embedded trace).
    """
    prep = _as_prepared(m)
    bits = len(prep.f_black) + len(prep.f_white)
    if bits > max_bits:
        raise CapExceeded(f"certificate space 2**{bits} exceeds 2**{max_bits}")
    if method not in ("chain", "dense"):
        raise ValueError(f"unknown method {method!r}")
    table = []
    total = 0.0
    for cert in certificates_lex(prep.f_black, prep.f_white):
        if method == "dense":
            val = dense_omega(prep, cert)
        else:
            res = compute_omega(prep, cert)
            val = 0.0 if res.zero else 2.0**res.log2_magnitude
        table.append((cert, val))
        total += val
    reference = total_overlap(prep.model)
    if abs(total - reference) > check_tol:
        raise IntegralityError(
            f"certificate sum {total!r} does not match the layer trace {reference!r}"
        )
    return total, table
