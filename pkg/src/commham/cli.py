"""Command-line front end.

Exit codes: 0 success/accept, 1 reject or no certificate found, 2 invalid
input (flags, files, domains, size caps), 3 non-commuting model.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import lattice, model as model_mod, oracle, prover, serialize, verifier
from .decompose import ImpossibleAlgebraPair
from .lattice import LatticeError, LatticeSpec
from .linalg import BasisMismatch, CapExceeded, NonHermitianError, herm_eig
from .model import ModelError, NonCommutingError
from .oracle import IntegralityError
from .serialize import FormatError
from .verifier import CertificateDomainError, DegreeViolation

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_BAD_INPUT = 2
EXIT_NON_COMMUTING = 3

_BAD_INPUT = (
    LatticeError,
    ModelError,
    FormatError,
    CapExceeded,
    CertificateDomainError,
    NonHermitianError,
    ValueError,
)
_NON_COMMUTING = (
    NonCommutingError,
    ImpossibleAlgebraPair,
    BasisMismatch,
    DegreeViolation,
    IntegralityError,
)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="commham")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a model file")
    g.add_argument("--model", required=True, choices=["toric", "ising", "random"])
    g.add_argument("--lx", type=int, required=True)
    g.add_argument("--ly", type=int, required=True)
    g.add_argument("--boundary", default="open", choices=["open", "periodic"])
    g.add_argument("--method", default="rotated-classical",
                   choices=["rotated-classical", "signed-toric", "diagonal-field"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--coupling", type=float, default=1.0)
    g.add_argument("--field", type=float, default=0.0)
    g.add_argument("-o", "--output", required=True)

    c = sub.add_parser("check", help="check commutation and term ground spaces")
    c.add_argument("model")

    v = sub.add_parser("verify", help="verify a certificate")
    v.add_argument("model")
    v.add_argument("certificate")
    v.add_argument("--threshold", type=float, default=None)

    pr = sub.add_parser("prove", help="search for an accepting certificate")
    pr.add_argument("model")
    mode = pr.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--greedy", action="store_true")
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--restarts", type=int, default=8)
    pr.add_argument("--cap", type=int, default=26)
    pr.add_argument("-o", "--output", required=True)

    o = sub.add_parser("oracle", help="brute-force layer trace and audits")
    o.add_argument("model")
    o.add_argument("--sum-check", action="store_true")
    o.add_argument("--cap", type=int, default=22)
    return p


def cmd_gen(args) -> int:
    spec = LatticeSpec(args.lx, args.ly, args.boundary)
    if args.model == "toric":
        m = model_mod.gen_toric(spec)
    elif args.model == "ising":
        m = model_mod.gen_ising(spec, args.coupling, args.field)
    else:
        m = model_mod.gen_random(spec, args.seed, args.method)
    serialize.save_model(m, args.output)
    print(f"wrote {args.output}: {len(m.terms)} terms on {m.n_qubits} qubits")
    return EXIT_OK


def cmd_check(args) -> int:
    m = serialize.load_model(args.model)
    report = model_mod.check_commuting(m)
    for p in lattice.plaquettes(m.spec):
        w, _ = herm_eig(m.terms[p])
        dim = int(np.sum(w <= w[0] + 1e-9 * (w[-1] - w[0] + 1)))
        print(f"plaquette {p} ({lattice.plaquette_color(p)}): ground-space dim {dim}")
    if report.ok:
        print("commuting: ok")
        return EXIT_OK
    for p, q, norm in report.violations:
        print(f"violation: [{p}, {q}] has norm {norm:.3e}")
    return EXIT_NON_COMMUTING


def cmd_verify(args) -> int:
    m = serialize.load_model(args.model)
    cert = serialize.load_certificate(args.certificate)
    verdict = verifier.verify(m, cert, args.threshold)
    omega = verdict.omega
    print("verdict:", "accept" if verdict.accept else "reject")
    print(f"log2_omega: {'-inf' if omega.zero else format(omega.log2_magnitude, '.12g')}")
    print(f"log2_threshold: {verdict.log2_threshold:.12g}")
    for f in omega.factors:
        val = "2^%g" % f.log2 if f.value is None else format(f.value, ".12g")
        print(f"  factor {f.kind} {f.key}: {val}")
    return EXIT_OK if verdict.accept else EXIT_REJECT


def cmd_prove(args) -> int:
    m = serialize.load_model(args.model)
    if args.greedy:
        result = prover.greedy_search(m, seed=args.seed, restarts=args.restarts)
    else:
        result = prover.exhaustive_search(m, cap=args.cap)
    if not result.found:
        print(f"no accepting certificate (evaluated {result.evaluated})")
        return EXIT_REJECT
    serialize.save_certificate(result.certificate, args.output)
    print(f"wrote {args.output}: log2_omega {result.omega.log2_magnitude:.12g}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    m = serialize.load_model(args.model)
    val = oracle.total_overlap(m, cap=args.cap)
    nearest = round(val)
    ok = abs(val - nearest) <= oracle.INTEGRALITY_TOL and nearest >= 0
    print(f"layer_trace: {val:.12g}")
    print(f"integrality: {'ok' if ok else 'FAILED'} (nearest integer {int(nearest)})")
    if args.sum_check:
        total, table = oracle.certificate_sum(m)
        print(f"certificate_sum: {total:.12g} over {len(table)} certificates")
        print(f"sum_matches_trace: {'ok' if abs(total - val) <= 1e-8 else 'FAILED'}")
    if not ok:
        return EXIT_NON_COMMUTING
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code not in (0, None) else EXIT_OK
    handlers = {
        "gen": cmd_gen,
        "check": cmd_check,
        "verify": cmd_verify,
        "prove": cmd_prove,
        "oracle": cmd_oracle,
    }
    try:
        return handlers[args.command](args)
    except _NON_COMMUTING as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NON_COMMUTING
    except _BAD_INPUT as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
