"""Command-line entry point: ``qsskit <subcommand> ...``.

Exit codes: 0 success or passing verdict, 1 failing verdict, 2 usage or
input format error, 3 capacity error.  Every subcommand only parses
arguments, delegates, and prints JSON.
"""

from __future__ import annotations

import argparse
import sys

from qsskit import codebook, serialize
from qsskit.bits import members
from qsskit.classify import classify
from qsskit.entropy_lp import build_qss_lp, forced_uniformity_pattern, lp_feasible
from qsskit.errors import CapacityError, LPTimeout, NotAQSSState, QSSError
from qsskit.qssverify import DEFAULT_TOL, derive_access, entropy_profile, verify_scheme
from qsskit.uniformity import (
    SHADOW_FLOOR,
    VIOLATED,
    is_k_uniform,
    max_uniformity,
    shadow_holds,
    shadow_obstruction,
    shadow_scan,
    shadow_sum,
    shadow_sums,
)

OK, FAIL, USAGE, CAPACITY = 0, 1, 2, 3


def _emit(obj) -> None:
    sys.stdout.write(serialize.dumps(obj))


def cmd_verify_state(args) -> int:
    state = serialize.load_state(args.state)
    access = serialize.load_access(args.access)
    report = verify_scheme(state, access, tol=args.tol)
    _emit(report.to_json())
    return OK if report.passed else FAIL


def cmd_derive_access(args) -> int:
    state = serialize.load_state(args.state)
    try:
        access = derive_access(state, tol=args.tol)
    except NotAQSSState as exc:
        _emit({"qss_state": False, "reason": str(exc), "subset": exc.subset, "value": exc.value})
        return FAIL
    _emit(access.to_json())
    return OK


def cmd_check_uniform(args) -> int:
    state = serialize.load_state(args.state)
    if args.k is None:
        cert = max_uniformity(state, tol=args.tol)
        _emit({**cert.to_json(), "ame": cert.witness is None})
        return OK
    check = is_k_uniform(state, args.k, tol=args.tol)
    out = {"uniform": check.uniform, "k": args.k}
    if check.witness is not None:
        out["witness"] = members(check.witness[0])
        out["purity"] = check.witness[1]
    _emit(out)
    return OK if check.uniform else FAIL


def cmd_shadow(args) -> int:
    t = serialize.parse_subset(args.t)
    if args.pattern is not None or args.access is not None:
        if args.pattern is not None:
            pattern = serialize.load_pattern(args.pattern)
        else:
            pattern = forced_uniformity_pattern(serialize.load_access(args.access), timeout=args.timeout)
        form = shadow_scan(pattern) if t is None else shadow_obstruction(pattern, t)
        if form is None:
            _emit({"verdict": "INCONCLUSIVE", "t": None})
            return OK
        _emit({**form.to_json(), "t": members(form.t)})
        return FAIL if form.verdict == VIOLATED else OK
    state = serialize.load_state(args.state)
    if t is not None:
        value = shadow_sum(state, t)
        _emit([{"t": members(t), "s_t": value}])
        return OK if shadow_holds([value], args.floor) else FAIL
    values = shadow_sums(state)
    _emit([{"t": members(m), "s_t": v} for m, v in enumerate(values)])
    return OK if shadow_holds(values, args.floor) else FAIL


def cmd_lp_feasible(args) -> int:
    access = serialize.load_access(args.access)
    lp = build_qss_lp(access, family=args.family)
    result = lp_feasible(lp, timeout=args.timeout)
    out = {"structure": access.to_json(), "counts": lp.counts(), **result.to_json(lp)}
    if args.out:
        serialize.write_json(args.out, out)
        _emit({"status": result.status, "certificate": args.out})
    else:
        _emit(out)
    return OK if result.feasible else FAIL


def cmd_classify(args) -> int:
    report = classify(args.n, homogeneous_only=args.homogeneous, full_n7=args.full_n7, timeout=args.timeout)
    path = report.write(args.out)
    data = report.to_json()
    _emit({"report": str(path), "counts": data["counts"], "survivors": [
        {"id": s["id"], "minimal_authorized": s["minimal_authorized"], "verdict": s["verdict"], "state": s["state"]}
        for s in data["structures"] if s["id"] in data["survivors"]
    ]})
    return OK


def cmd_builtin(args) -> int:
    docs = codebook.builtin(args.name)
    if args.out:
        _emit({"written": serialize.write_files(args.out, docs)})
    else:
        _emit(serialize.bundle(docs))
    return OK


def cmd_entropy_profile(args) -> int:
    state = serialize.load_state(args.state)
    profile = entropy_profile(state)
    _emit([{"subset": members(m), "entropy_bits": s} for m, s in sorted(profile.items())])
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsskit", description="Quantum secret sharing verification and classification.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-state", help="check recoverability and secrecy of a state against a structure")
    v.add_argument("--state", help="state JSON (default: stdin)")
    v.add_argument("--access", help="access structure JSON (default: stdin)")
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)
    v.set_defaults(func=cmd_verify_state)

    d = sub.add_parser("derive-access", help="read the access structure off a QSS state")
    d.add_argument("--state", help="state JSON (default: stdin)")
    d.add_argument("--tol", type=float, default=DEFAULT_TOL)
    d.set_defaults(func=cmd_derive_access)

    u = sub.add_parser("check-uniform", help="k-uniformity test, or the largest k when --k is omitted")
    u.add_argument("--state", help="state JSON (default: stdin)")
    u.add_argument("--k", type=int)
    u.add_argument("--tol", type=float, default=1e-9, help="purity tolerance (default 1e-9)")
    u.set_defaults(func=cmd_check_uniform)

    s = sub.add_parser("shadow", help="shadow sums of a state, or the exact obstruction of a purity pattern")
    s.add_argument("--state", help="state JSON (default: stdin)")
    s.add_argument("--pattern", help="purity pattern JSON for the exact obstruction mode")
    s.add_argument("--access", help="derive the forced purity pattern from this structure")
    s.add_argument("--t", help="comma-separated qubit indices of T (default: every T)")
    s.add_argument("--floor", type=float, default=SHADOW_FLOOR, help="smallest admissible s_T for a state")
    s.add_argument("--timeout", type=float, default=60.0)
    s.set_defaults(func=cmd_shadow)

    lp = sub.add_parser("lp-feasible", help="exact entropy LP feasibility with a certificate")
    lp.add_argument("--access", help="access structure JSON (default: stdin)")
    lp.add_argument("--family", choices=("elemental", "full"), default="elemental")
    lp.add_argument("--timeout", type=float, default=60.0)
    lp.add_argument("--out", help="write the full certificate here")
    lp.set_defaults(func=cmd_lp_feasible)

    c = sub.add_parser("classify", help="enumerate and classify all structures on n players")
    c.add_argument("--n", type=int, required=True, choices=range(3, 8), metavar="{3..7}")
    c.add_argument("--homogeneous", action="store_true")
    c.add_argument("--full-n7", action="store_true", help="allow the non-homogeneous n=7 search")
    c.add_argument("--out", required=True)
    c.add_argument("--timeout", type=float, default=60.0, help="per-LP time limit in seconds")
    c.set_defaults(func=cmd_classify)

    b = sub.add_parser("builtin", help="emit a built-in state or structure")
    b.add_argument("--name", required=True, help="five-qubit | steane | fano | threshold:<n>:<k>")
    b.add_argument("--out", help="write one file per document into this directory")
    b.set_defaults(func=cmd_builtin)

    e = sub.add_parser("entropy-profile", help="entropy of every nonempty proper subset")
    e.add_argument("--state", help="state JSON (default: stdin)")
    e.set_defaults(func=cmd_entropy_profile)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    serialize.reset_stdin()
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CAPACITY
    except LPTimeout as exc:
        print(f"error: time limit reached: {exc}", file=sys.stderr)
        return FAIL
    except (QSSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
