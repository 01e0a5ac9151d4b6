"""Command-line front end.

Every command builds a report dict (schema ``fqk/1``) and renders it as
JSON or as indented text; both renderings come from the same dict, so they
carry identical data. Exit codes: 0 success, 2 bad input, 3 resource bound
exceeded, 4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from math import lcm

from . import __version__
from .checks import Check
from .classify import count_kinematics, enumerate_kinematics, from_invariant_factors, to_invariant_factors
from .config import ResourceBoundError, VerificationError, check_bound, max_classify_n, max_matrix_n
from .gradings import build_grading, certify_grading, enumerate_mad_groups, parse_descriptor, verify_grading_closure
from .kinematics import crt_equivalence
from .monomial import PartialMonomial
from .numtheory import factorize
from .pauli import (
    orthonormality_defects,
    p_matrix,
    q_matrix,
    schwinger_basis,
    wh_center,
    wh_group_order,
    weyl_ray_law_defects,
)

SCHEMA = "fqk/1"
EXIT_OK, EXIT_USAGE, EXIT_BOUND, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(ValueError):
    pass


def _report(command: str, inputs: dict, payload: dict, checks: list[Check]) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "input": inputs,
        "payload": payload,
        "checks": [c.as_dict() for c in checks],
        "ok": all(c.passed for c in checks),
    }


def monomial_entries(m: PartialMonomial) -> list[str]:
    """Nonzero entries as ``(row,col)=w^k`` with w the level-th root of unity."""
    return [f"({r},{int(c)})=w^{int(e)}" for r, (c, e) in enumerate(zip(m.cols, m.exps)) if c >= 0]


def _matrix_payload(m: PartialMonomial) -> dict:
    return {"root_level": m.level, "entries": monomial_entries(m)}


# -- commands ----------------------------------------------------------------

def cmd_classify(N: int, max_n: int | None = None) -> dict:
    if N < 1:
        raise UsageError(f"N must be >= 1, got {N}")
    check_bound(N, max_classify_n(max_n), "classification N")
    types = enumerate_kinematics(N, max_n=max_n)
    groups = []
    round_trip = 0
    products_ok = 0
    for t in types:
        inv = to_invariant_factors(t)
        round_trip += from_invariant_factors(inv) == t
        products_ok += t.order == N
        groups.append({
            "elementary_divisors": list(t.elementary_divisors),
            "notation": t.notation(),
            "invariant_factors": list(inv.factors),
            "group": inv.as_product(),
        })
    count = count_kinematics(N)
    payload = {"N": N, "factorization": str(factorize(N)), "count": count, "groups": groups}
    checks = [
        Check("count = product of partition counts", count == len(types), len(types)),
        Check("elementary divisors multiply to N", products_ok == len(types), len(types)),
        Check("invariant factor round trip", round_trip == len(types), len(types)),
    ]
    return _report("classify", {"N": N}, payload, checks)


def cmd_pauli(N: int, check: bool = False, max_n: int | None = None) -> dict:
    if N < 1:
        raise UsageError(f"N must be >= 1, got {N}")
    check_bound(N, max_matrix_n(max_n), "N")
    q, p = q_matrix(N), p_matrix(N)
    payload = {
        "N": N,
        "Q": _matrix_payload(q),
        "Q_diagonal_exponents": [int(e) for e in q.exps],
        "P": _matrix_payload(p),
    }
    checks: list[Check] = []
    if check:
        order = wh_group_order(N, max_n=max_n)
        center = wh_center(N, max_n=max_n)
        scalar = all(c.k == 0 and c.l == 0 for c in center)
        commutation = (p @ q) == (q @ p).scaled(1)
        payload["order"] = order
        payload["center"] = [str(c) for c in center]
        checks = [
            # the order is counted as the number of distinct matrices w^j Q^k P^l
            Check("order = N^3 (normal forms distinct)", order == N**3, N**3),
            Check("center = {w^r I}", scalar and len(center) == N, len(center)),
            Check("P Q = w Q P", commutation, 1),
        ]
    return _report("pauli", {"N": N, "check": check}, payload, checks)


def cmd_weyl(N: int, max_n: int | None = None) -> dict:
    if N < 1:
        raise UsageError(f"N must be >= 1, got {N}")
    check_bound(N, max_matrix_n(max_n), "N")
    basis = schwinger_basis(N)
    bad, first = orthonormality_defects(list(basis.values()))
    payload = {
        "N": N,
        "basis_size": len(basis),
        "normalization": f"1/sqrt({N})",
        "labels": [f"S({r},{j})" for r, j in basis],
        "weyl_operators_defined": N % 2 == 1,
    }
    checks = [Check("Hilbert-Schmidt orthonormality", bad == 0, len(basis) ** 2, f"first bad pair {first}" if bad else "")]
    if N % 2 == 1:
        ray_bad = weyl_ray_law_defects(N, max_n=max_n)
        checks.append(Check("ray law W(a)W(b) = w^{(r'j - rj')/2} W(a+b)", ray_bad == 0, N**4,
                            f"{ray_bad} failures" if ray_bad else ""))
    return _report("weyl", {"N": N}, payload, checks)


def cmd_equiv(N: int, max_n: int | None = None) -> dict:
    if N < 2:
        raise UsageError(f"N must be >= 2, got {N}")
    eq = crt_equivalence(N, max_n=max_n)
    mapping = [f"{x} -> ({', '.join(str(x % m) for m in eq.moduli)})" for x in range(N)]
    payload = {
        "N": N,
        "moduli": list(eq.moduli),
        "permutation": eq.cycle_notation(),
        "images": [int(v) for v in eq.images],
        "residues": mapping,
        "q_exponents": list(eq.q_exponents),
    }
    return _report("equiv", {"N": N}, payload, list(eq.checks))


def cmd_mad(N: int) -> dict:
    if N < 1:
        raise UsageError(f"N must be >= 1, got {N}")
    check_bound(N, max_classify_n(), "N")
    ds = enumerate_mad_groups(N)
    pure = sum(d.is_pure_pauli for d in ds)
    payload = {
        "N": N,
        "count": len(ds),
        "descriptors": [{"name": d.name(), "pauli_factors": list(d.pauli_factors), "m": d.m} for d in ds],
    }
    checks = [
        Check("product constraint N_1...N_f m = N", all(d.N == N for d in ds), len(ds)),
        Check("pure-Pauli count = number of kinematics", pure == count_kinematics(N), pure),
    ]
    return _report("mad", {"N": N}, payload, checks)


def cmd_grading(N: int, descriptor: str, max_n: int | None = None) -> dict:
    try:
        d = parse_descriptor(descriptor, N)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    g = build_grading(d, max_n=max_n, certify=False)
    checks = list(certify_grading(g))
    # basis entries are quoted at the common root level of the grading
    L = lcm(*(b.level for basis in g.bases for b in basis))
    payload = {
        "N": N,
        "descriptor": d.name(),
        "root_level": L,
        "subspace_count": len(g),
        "dimension_profile": {str(k): v for k, v in sorted(Counter(g.dims).items())},
        "subspaces": [
            {"label": g.label_str(i), "dim": g.dims[i], "basis": [monomial_entries(b.at_level(L)) for b in g.bases[i]]}
            for i in range(len(g))
        ],
    }
    if all(c.passed for c in checks):
        table = verify_grading_closure(g)
        rows = []
        for a in range(len(g)):
            for b in range(len(g)):
                c = int(table.index[a, b])
                rows.append(f"{g.label_str(a)} * {g.label_str(b)} -> {'0' if c < 0 else g.label_str(c)}")
        payload["closure_table"] = rows
    return _report("grading", {"N": N, "descriptor": descriptor}, payload, checks)


# -- rendering ---------------------------------------------------------------

def _render(value, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                _render(v, indent + 1, lines)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict):
                sub: list[str] = []
                _render(item, indent + 1, sub)
                sub[0] = pad + "- " + sub[0].lstrip()
                lines.extend(sub)
            elif isinstance(item, list) and not _is_flat(item):
                lines.append(f"{pad}-")
                _render(item, indent + 1, lines)
            else:
                lines.append(f"{pad}- {_scalar(item)}")


def _is_flat(v) -> bool:
    return isinstance(v, list) and all(isinstance(x, (int, float, bool)) or x is None for x in v)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def render_text(report: dict) -> str:
    lines = [f"fqk {report['command']} ({report['schema']})"]
    _render({"input": report["input"]}, 0, lines)
    _render({"payload": report["payload"]}, 0, lines)
    lines.append("checks:")
    for c in report["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        extra = f" - {c['detail']}" if c["detail"] else ""
        lines.append(f"  [{status}] {c['name']} (n={c['count']}){extra}")
    lines.append(f"ok: {_scalar(report['ok'])}")
    return "\n".join(lines) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


# -- entry point ---------------------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fqk", description="Finite quantum kinematics toolkit")
    parser.add_argument("--version", action="version", version=f"fqk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, bound=True):
        p.add_argument("--format", choices=("text", "json"), default="text")
        if bound:
            p.add_argument("--max-n", type=_positive_int, default=None, help="override FQK_MAX_N / FQK_MAX_CLASSIFY_N")
        return p

    p = common(sub.add_parser("classify", help="all kinematics (Abelian groups) of order N"))
    p.add_argument("N", type=_positive_int)
    p = common(sub.add_parser("pauli", help="generalized Pauli matrices Q_N, P_N"))
    p.add_argument("N", type=_positive_int)
    p.add_argument("--check", action="store_true", help="verify the Weyl-Heisenberg group structure")
    p = common(sub.add_parser("weyl", help="certify the Schwinger operator basis"))
    p.add_argument("N", type=_positive_int)
    p = common(sub.add_parser("equiv", help="CRT equivalence Z_N ~ tensor product of prime-power factors"))
    p.add_argument("N", type=_positive_int)
    p = common(sub.add_parser("mad", help="MAD-groups of Inn(M_N(C))"), bound=False)
    p.add_argument("N", type=_positive_int)
    p = common(sub.add_parser("grading", help="fine grading induced by a MAD-group"))
    p.add_argument("N", type=_positive_int)
    p.add_argument("descriptor", help='comma-separated prime powers plus optional m, e.g. "2,2,m=1"')
    return parser


def run(args: argparse.Namespace) -> dict:
    cmd = args.command
    if cmd == "classify":
        return cmd_classify(args.N, args.max_n)
    if cmd == "pauli":
        return cmd_pauli(args.N, args.check, args.max_n)
    if cmd == "weyl":
        return cmd_weyl(args.N, args.max_n)
    if cmd == "equiv":
        return cmd_equiv(args.N, args.max_n)
    if cmd == "mad":
        return cmd_mad(args.N)
    if cmd == "grading":
        return cmd_grading(args.N, args.descriptor, args.max_n)
    raise UsageError(f"unknown command {cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = run(args)
    except ResourceBoundError as exc:
        print(f"fqk: resource bound: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except VerificationError as exc:
        print(f"fqk: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (UsageError, ValueError) as exc:
        print(f"fqk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = render_json(report) if args.format == "json" else render_text(report)
    sys.stdout.write(out)
    return EXIT_OK if report["ok"] else EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
