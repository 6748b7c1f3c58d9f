"""Certificate search: exhaustive enumeration and a greedy hill climber.

Both searches only propose; every certificate handed back has been
re-checked by the verifier.  Exhaustive search prunes layer by layer: a
slice assignment that annihilates some plaquette projector of its own
color kills every certificate extending it, so surviving black and white
assignments are enumerated independently before being paired.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lattice
from .linalg import CapExceeded, frob, sandwich_site
from .model import CommutingModel
from .verifier import (
    Certificate,
    OmegaResult,
    PreparedModel,
    Verdict,
    _as_prepared,
    compute_omega,
    verify,
)


@dataclass
class SearchResult:
    found: bool
    certificate: Certificate | None = None
    omega: OmegaResult | None = None
    verdict: Verdict | None = None
    evaluated: int = 0


def _sandwich_zero_tables(prep: PreparedModel, color: str):
    """For each plaquette of one color: its split corners and, per local
    slice assignment, whether the sandwiched projector vanishes."""
    layer = prep.black if color == lattice.BLACK else prep.white
    tables = []
    for p in lattice.plaquettes(prep.model.spec):
        if lattice.plaquette_color(p) != color:
            continue
        op = prep.projector_op(p)
        split = [v for v in op.labels if layer.decomps[v].split]
        dead = set()
        for bits in range(1 << len(split)):
            cur = op
            for i, v in enumerate(split):
                label = (bits >> (len(split) - 1 - i)) & 1
                cur = sandwich_site(cur, v, layer.decomps[v].slice_projector(label))
            if frob(cur.mat) <= 1e-12:
                dead.add(bits)
        tables.append((p, split, dead))
    return tables


def _surviving_assignments(f_sorted: list, tables) -> list[dict]:
    """Lexicographic scan of one layer's assignments, dropping any whose
    local bits annihilate some plaquette."""
    pos = {v: i for i, v in enumerate(f_sorted)}
    n = len(f_sorted)
    compiled = []
    for p, split, dead in tables:
        if dead:
            compiled.append(([pos[v] for v in split], dead))
    out = []
    for a in range(1 << n):
        ok = True
        for idxs, dead in compiled:
            bits = 0
            for i in idxs:
                bits = (bits << 1) | ((a >> (n - 1 - i)) & 1)
            if bits in dead:
                ok = False
                break
        if ok:
            out.append({v: (a >> (n - 1 - i)) & 1 for i, v in enumerate(f_sorted)})
    return out


def exhaustive_search(
    m: CommutingModel | PreparedModel,
    threshold: float | None = None,
    cap: int = 26,
) -> SearchResult:
    """Scan the whole certificate space and return the largest-value
    certificate (lexicographically first on ties), or not-found when every
    certificate evaluates to zero."""
    prep = _as_prepared(m)
    bits = len(prep.f_black) + len(prep.f_white)
    if bits > cap:
        raise CapExceeded(
            f"certificate space 2**{bits} exceeds the cap 2**{cap}; raise `cap` to force the scan"
        )
    alphas = _surviving_assignments(
        sorted(prep.f_black), _sandwich_zero_tables(prep, lattice.BLACK)
    )
    betas = _surviving_assignments(
        sorted(prep.f_white), _sandwich_zero_tables(prep, lattice.WHITE)
    )
    best: tuple[float, Certificate, OmegaResult] | None = None
    evaluated = 0
    for alpha in alphas:
        for beta in betas:
            cert = Certificate(dict(alpha), dict(beta))
            res = compute_omega(prep, cert)
            evaluated += 1
            if res.zero:
                continue
            if best is None or res.log2_magnitude > best[0]:
                best = (res.log2_magnitude, cert, res)
    if best is None:
        return SearchResult(False, evaluated=evaluated)
    _, cert, res = best
    verdict = verify(prep, cert, threshold)
    return SearchResult(True, cert, res, verdict, evaluated)


def _score(res: OmegaResult) -> tuple[float, int]:
    nonzero = sum(1 for f in res.factors if f.value is None or f.value > 1e-12)
    log2 = -math.inf if res.zero else res.log2_magnitude
    return (log2, nonzero)


def greedy_search(
    m: CommutingModel | PreparedModel,
    seed: int = 0,
    restarts: int = 8,
    threshold: float | None = None,
) -> SearchResult:
    """Single-label hill climbing on the factorized objective.

    The objective is log2 of the certificate value with zeros at -inf,
    tie-broken by the number of non-vanishing factors.  Restart 0 starts
    from the all-zeros labelling, later restarts from seeded random labels;
    the result is deterministic given the seed and is re-verified before
    being returned.
    """
    prep = _as_prepared(m)
    fb, fw = sorted(prep.f_black), sorted(prep.f_white)
    slots = [("a", v) for v in fb] + [("b", v) for v in fw]
    rng = np.random.default_rng(seed)
    evaluated = 0

    def build(bits: np.ndarray) -> Certificate:
        alpha = {v: int(bits[i]) for i, (layer, v) in enumerate(slots) if layer == "a"}
        beta = {v: int(bits[i]) for i, (layer, v) in enumerate(slots) if layer == "b"}
        return Certificate(alpha, beta)

    for restart in range(max(1, restarts)):
        bits = (
            np.zeros(len(slots), dtype=int)
            if restart == 0
            else rng.integers(0, 2, len(slots))
        )
        res = compute_omega(prep, build(bits))
        evaluated += 1
        score = _score(res)
        improved = True
        while improved and slots:
            improved = False
            for i in rng.permutation(len(slots)):
                bits[i] ^= 1
                cand = compute_omega(prep, build(bits))
                evaluated += 1
                if _score(cand) > score:
                    score, res = _score(cand), cand
                    improved = True
                else:
                    bits[i] ^= 1
        if not res.zero:
            cert = build(bits)
            verdict = verify(prep, cert, threshold)
            if verdict.accept:
                return SearchResult(True, cert, res, verdict, evaluated)
    return SearchResult(False, evaluated=evaluated)
