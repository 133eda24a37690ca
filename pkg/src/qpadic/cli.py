"""Command-line driver: parse expressions, run every operation, emit JSON/CSV.

Usage centers on one required global, the prime: `qp --p 2 <command> ...`.
Global flags are accepted both before and after the subcommand.  --json
switches to the interchange schemas (single line, sorted keys); plain
mode prints human-readable text, except `entropy`, which prints CSV rows
n,count,log_count for external plotting.

Exit codes: 0 success (or a check that came out true), 1 a check that
came out false (equals, verify-relations, entropy tolerance, odometer
transitivity), 2 usage or domain errors (bad expression, NotCoprime,
NotInDomain, NotInImage, impossible parameters).  Domain errors print
one line to stderr: `qp: error: <Type>: <message>`.

A flat key=value config file (--config PATH; `#` comments) can supply
defaults for p, json, seed, tolerance, window; explicit flags win.  The
norm window also honors the QP_DEFAULT_WINDOW environment variable.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .algebra import AlgebraContext, Element, chi
from .dynamics import (
    CircleMapSpec,
    OdometerSpec,
    entropy_report,
    odometer_entropy_estimate,
    odometer_orbit,
)
from .errors import PreconditionError, QpError
from .matrixiso import decompose, psi
from .parser import parse, render
from .rep import Window, act_element, basis_vector, default_window, op_norm_estimate, verify_relations
from .serialize import (
    decomposition_to_json,
    element_to_json,
    opmatrix_to_json,
    rational_str,
)
from .watatani import (
    ExpectationSpec,
    chi_preimage,
    expectation,
    index_report,
    quasi_basis,
)

__all__ = ["main"]

_CONFIG_KEYS = {
    "p": int,
    "seed": int,
    "window": int,
    "tolerance": float,
    "json": None,  # boolean, parsed specially
}

_TRUE_WORDS = {"1", "true", "yes", "on"}
_FALSE_WORDS = {"0", "false", "no", "off"}


def _load_config(path: str) -> dict:
    cfg = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as e:
        raise PreconditionError(f"cannot read config file {path}: {e.strerror}") from e
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PreconditionError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise PreconditionError(f"{path}:{lineno}: unknown config key {key!r}")
        if key == "json":
            low = value.lower()
            if low in _TRUE_WORDS:
                cfg[key] = True
            elif low in _FALSE_WORDS:
                cfg[key] = False
            else:
                raise PreconditionError(f"{path}:{lineno}: boolean expected, got {value!r}")
        else:
            try:
                cfg[key] = _CONFIG_KEYS[key](value)
            except ValueError:
                raise PreconditionError(f"{path}:{lineno}: bad value for {key}: {value!r}")
    return cfg


def _scan_config_path(argv: list[str]) -> str | None:
    for q, tok in enumerate(argv):
        if tok == "--config":
            if q + 1 >= len(argv):
                raise PreconditionError("--config needs a path")
            return argv[q + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    sup = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--p", type=int, dest="p", help="the prime p (required)",
                   **(sup or {"default": None}))
    p.add_argument("--json", action="store_true", dest="json",
                   help="emit interchange JSON", **(sup or {"default": False}))
    p.add_argument("--seed", type=int, dest="seed",
                   help="seed for randomized sweeps", **(sup or {"default": None}))
    p.add_argument("--tolerance", type=float, dest="tolerance",
                   help="numeric tolerance for norm estimates",
                   **(sup or {"default": None}))
    p.add_argument("--config", dest="config", help="key=value config file",
                   **(sup or {"default": None}))


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="qp",
        description="exact computation in the p-adic ring C*-algebra",
    )
    _add_globals(top, suppress=False)
    sub = top.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, help_: str, **kw) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_, **kw)
        _add_globals(sp, suppress=True)
        return sp

    sp = add("normalize", "canonical form of an expression")
    sp.add_argument("expr")

    sp = add("eval", "apply an expression to a basis vector e_K of l2(Z)")
    sp.add_argument("expr")
    sp.add_argument("--on", type=int, required=True, metavar="K")

    sp = add("mul", "product of two expressions")
    sp.add_argument("expr")
    sp.add_argument("expr2")

    sp = add("equals", "decide equality of two expressions")
    sp.add_argument("expr")
    sp.add_argument("expr2")

    sp = add("chi", "winding endomorphism U -> U^k")
    sp.add_argument("-k", type=int, required=True, dest="k")
    sp.add_argument("expr")

    sp = add("psi", "corner-matrix image at size p^h (flag -h is the level)",
             add_help=False)
    sp.add_argument("-h", "--level", type=int, required=True, dest="h")
    sp.add_argument("expr")

    sp = add("decompose", "closed-form corner matrices of a monomial "
             "(flag -h is the level)", add_help=False)
    sp.add_argument("-h", "--level", type=int, required=True, dest="h")
    sp.add_argument("expr")

    sp = add("expect", "conditional expectation onto the winding subalgebra")
    sp.add_argument("--kind", choices=["E", "F"], default="E")
    sp.add_argument("-k", type=int, required=True, dest="k")
    sp.add_argument("expr")

    sp = add("quasibasis", "quasi-basis of the expectation")
    sp.add_argument("-k", type=int, required=True, dest="k")

    sp = add("index", "Watatani index report with verification sweep")
    sp.add_argument("-k", type=int, required=True, dest="k")

    sp = add("preimage", "constructive chi_k-preimage of a gauge-invariant element")
    sp.add_argument("-k", type=int, required=True, dest="k")
    sp.add_argument("expr")

    sp = add("verify-relations", "check the defining relations on l2(Z)")
    sp.add_argument("--range", type=int, default=1000, dest="krange",
                    help="check basis vectors e_k for |k| <= RANGE")

    sp = add("entropy", "separated-set entropy estimate for z -> z^k")
    sp.add_argument("-k", type=int, required=True, dest="k")
    sp.add_argument("--grid", type=int, default=None)
    sp.add_argument("--n-max", type=int, default=None, dest="n_max")
    sp.add_argument("--epsilon", type=float, default=None)

    sp = add("odometer", "orbit and entropy of x -> x + k on Z/p^L")
    sp.add_argument("-k", type=int, required=True, dest="k")
    sp.add_argument("-L", "--level", type=int, required=True, dest="L")

    sp = add("norm", "certified operator-norm lower estimate")
    sp.add_argument("expr")
    sp.add_argument("-N", type=int, default=None, dest="N",
                    help="window half-width (default 4096 or QP_DEFAULT_WINDOW)")

    return top


def _emit(ns, payload: dict, text: str) -> None:
    if ns.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _element_out(ns, x: Element) -> int:
    _emit(ns, element_to_json(x), render(x))
    return 0


def _window(ns, n_override: int | None) -> Window:
    base = default_window()
    n = n_override if n_override is not None else base.N
    tol = ns.tolerance if ns.tolerance is not None else base.tolerance
    return Window(N=n, tolerance=tol, max_iter=base.max_iter)


def _dispatch(ns, ctx: AlgebraContext) -> int:
    cmd = ns.command

    if cmd == "normalize":
        return _element_out(ns, parse(ns.expr, ctx).canonical())

    if cmd == "eval":
        x = parse(ns.expr, ctx)
        vec = act_element(x, basis_vector(ns.on))
        items = sorted(vec.items())
        payload = {
            "p": ctx.p,
            "on": ns.on,
            "result": [{"index": str(k), "coeff": rational_str(c)} for k, c in items],
        }
        if not items:
            text = "0"
        else:
            text = " + ".join(
                (f"e_{k}" if c == 1 else f"{rational_str(c)}*e_{k}") for k, c in items
            )
        _emit(ns, payload, text)
        return 0

    if cmd == "mul":
        x = parse(ns.expr, ctx)
        y = parse(ns.expr2, ctx)
        return _element_out(ns, (x * y).canonical())

    if cmd == "equals":
        eq = parse(ns.expr, ctx).equals(parse(ns.expr2, ctx))
        _emit(ns, {"equal": eq, "p": ctx.p}, "true" if eq else "false")
        return 0 if eq else 1

    if cmd == "chi":
        return _element_out(ns, chi(ns.k, parse(ns.expr, ctx)))

    if cmd == "psi":
        M = psi(ns.h, parse(ns.expr, ctx))
        lines = [f"matrix {M.dim} x {M.dim} at p = {ctx.p}"]
        for (r, c), v in sorted(M.entries().items()):
            lines.append(f"({r}, {c}): {render(v)}")
        _emit(ns, opmatrix_to_json(M), "\n".join(lines))
        return 0

    if cmd == "decompose":
        x = parse(ns.expr, ctx).canonical()
        tm = x.term_map()
        if len(tm) != 1:
            raise PreconditionError("decompose needs a single monomial expression")
        (t, coeff), = tm.items()
        dec = decompose(ns.h, t, ctx)
        if coeff != 1:
            dec = dec.scaled(coeff)
        lines = [f"case {dec.case}, scalar matrices of size {ctx.p ** dec.h}"]
        for g in sorted(dec.terms):
            nz = dec.terms[g].nonzero()
            cells = ", ".join(
                f"({r},{c})={rational_str(v)}" for (r, c), v in sorted(nz.items())
            )
            lines.append(f"tag {dec.tag_name(g)}: {cells if cells else '0'}")
        _emit(ns, decomposition_to_json(dec), "\n".join(lines))
        return 0

    if cmd == "expect":
        spec = ExpectationSpec(ctx, ns.kind, ns.k)
        return _element_out(ns, expectation(spec, parse(ns.expr, ctx)))

    if cmd == "quasibasis":
        spec = ExpectationSpec(ctx, "E", ns.k)
        qb = quasi_basis(spec)
        payload = {
            "k": ns.k,
            "p": ctx.p,
            "elements": [element_to_json(u) for u in qb],
        }
        _emit(ns, payload, ", ".join(render(u) for u in qb))
        return 0

    if cmd == "index":
        report = index_report(ExpectationSpec(ctx, "E", ns.k))
        text = (
            f"index {report['index']} "
            f"(quasi-basis size {report['quasi_basis_size']}, "
            f"verified on {report['verified_on']} monomials)"
        )
        _emit(ns, report, text)
        return 0

    if cmd == "preimage":
        return _element_out(ns, chi_preimage(ctx, ns.k, parse(ns.expr, ctx)))

    if cmd == "verify-relations":
        reports = verify_relations(ctx.p, ns.krange)
        ok = all(not r["violations"] for r in reports)
        lines = [
            f"{'ok  ' if not r['violations'] else 'FAIL'} {r['relation']}"
            for r in reports
        ]
        _emit(ns, {"p": ctx.p, "checked_range": ns.krange, "reports": reports},
              "\n".join(lines))
        return 0 if ok else 1

    if cmd == "entropy":
        kw = {}
        if ns.grid is not None:
            kw["grid_size"] = ns.grid
        if ns.n_max is not None:
            kw["n_max"] = ns.n_max
        if ns.epsilon is not None:
            kw["epsilon"] = ns.epsilon
        spec = CircleMapSpec(ns.k, **kw)
        report = entropy_report(spec)
        payload = {
            "k": report["k"],
            "estimate": report["estimate"],
            "target": report["target"],
            "within_tolerance": report["within_tolerance"],
        }
        lines = ["n,count,log_count"]
        for n, c in report["counts"]:
            lines.append(f"{n},{c},{math.log(c):.6f}")
        lines.append(
            f"# estimate={report['estimate']:.6f} target=log|k|="
            f"{report['target_value']:.6f} within_tolerance={report['within_tolerance']}"
        )
        _emit(ns, payload, "\n".join(lines))
        return 0 if report["within_tolerance"] else 1

    if cmd == "odometer":
        spec = OdometerSpec(ctx.p, ns.L, ns.k)
        orbit = odometer_orbit(spec)
        transitive = orbit == ctx.p**ns.L
        est = odometer_entropy_estimate(ctx.p, ns.L, ns.k) if ns.L >= 2 else None
        payload = {
            "k": ns.k,
            "p": ctx.p,
            "level": ns.L,
            "orbit_size": orbit,
            "transitive": transitive,
            "entropy_estimate": est,
        }
        text = (
            f"orbit size {orbit} of {ctx.p ** ns.L} "
            f"({'transitive' if transitive else 'not transitive'})"
            + (f", entropy estimate {est:.6f}" if est is not None else "")
        )
        _emit(ns, payload, text)
        return 0 if transitive else 1

    if cmd == "norm":
        w = _window(ns, ns.N)
        est = op_norm_estimate(parse(ns.expr, ctx), w)
        payload = {"p": ctx.p, "estimate": est, "window": w.N}
        _emit(ns, payload, f"norm >= {est:.9f} (window {w.N})")
        return 0

    raise PreconditionError(f"unknown command {cmd!r}")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg_path = _scan_config_path(argv)
        cfg = _load_config(cfg_path) if cfg_path else {}
        ns = _build_parser().parse_args(argv)
        if ns.p is None and "p" in cfg:
            ns.p = cfg["p"]
        if not ns.json and cfg.get("json"):
            ns.json = True
        if ns.seed is None:
            ns.seed = cfg.get("seed", 0)
        if ns.tolerance is None and "tolerance" in cfg:
            ns.tolerance = cfg["tolerance"]
        if getattr(ns, "N", None) is None and "window" in cfg and ns.command == "norm":
            ns.N = cfg["window"]
        if ns.p is None:
            raise PreconditionError("--p is required (flag or config)")
        try:
            ctx = AlgebraContext(ns.p)
        except ValueError as e:
            raise PreconditionError(str(e)) from e
        return _dispatch(ns, ctx)
    except QpError as e:
        print(f"qp: error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
