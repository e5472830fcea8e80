"""Command-line front end: JSON in, JSON out.

Exit status is 0 on success, 1 on a domain error and 2 on a usage or input
error.  Errors are always written to stderr as a single JSON object; ``-v``
adds a human-readable line after it.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Sequence

from .config import DEFAULT_LIMITS, CatalogCaps, Limits
from .decompose import Diagnostic, sparse_decompose
from .param_enum import build_catalog, corollary_box_scan, corollary_membership
from .series import (TruncatedSeries, delta_split_expand, pow_fractional, puiseux_inverse_at_infinity,
                     tilde_h_truncation)
from .sparse_poly import DensePoly, SparsePoly
from .wronskian import Place, RatFunc, verify_prop1

log = logging.getLogger("lacunary")


class InputError(ValueError):
    """Malformed or schema-violating input (exit 2)."""


class _UsageError(Exception):
    pass


@dataclass
class CommandConfig:
    command: str
    input: str | None = None
    output: str | None = None
    limits: Limits = DEFAULT_LIMITS
    caps: CatalogCaps = field(default_factory=CatalogCaps)
    shape: tuple[int, int, int] = (1, 2, 1)
    box: int = 12
    verbose: int = 0


# --- input helpers --------------------------------------------------------

def _load_input(spec: str | None, stdin=None) -> Any:
    stdin = stdin if stdin is not None else sys.stdin
    if spec is None or spec == "-":
        text = stdin.read()
    elif spec.lstrip().startswith(("{", "[")):
        text = spec
    else:
        try:
            with open(spec, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read input {spec!r}: {exc.strerror}") from None

    def no_constants(name: str) -> None:
        raise ValueError(f"non-standard JSON constant {name}")

    try:
        return json.loads(text, parse_constant=no_constants)
    except ValueError as exc:
        raise InputError(f"malformed JSON: {exc}") from None


def _object(obj: Any, required: set[str], optional: set[str] = frozenset(), what: str = "input") -> dict:
    if not isinstance(obj, dict):
        raise InputError(f"{what} must be a JSON object")
    unknown = set(obj) - required - optional
    missing = required - set(obj)
    if unknown:
        raise InputError(f"unknown field(s) in {what}: {sorted(unknown)}")
    if missing:
        raise InputError(f"missing field(s) in {what}: {sorted(missing)}")
    return obj


def _int(v: Any, name: str, minimum: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{name} must be an integer")
    if minimum is not None and v < minimum:
        raise InputError(f"{name} must be >= {minimum}")
    return v


def _rational(v: Any, name: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InputError(f"{name} must be an integer or a rational string")
    try:
        return Fraction(v.strip() if isinstance(v, str) else v)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{name}: bad rational {v!r}") from None


def _rationals(v: Any, name: str) -> list[Fraction]:
    if not isinstance(v, list):
        raise InputError(f"{name} must be a list")
    return [_rational(x, f"{name}[{i}]") for i, x in enumerate(v)]


def _parse(fn: Callable, obj: Any, what: str):
    try:
        return fn(obj)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"{what}: {exc}") from None


def _series(obj: Any, name: str) -> TruncatedSeries:
    o = _object(obj, {"coeffs", "order"}, what=name)
    coeffs = _rationals(o["coeffs"], f"{name}.coeffs")
    order = _int(o["order"], f"{name}.order", 0)
    return TruncatedSeries(enumerate(coeffs), order)


def _q_json(c: Fraction) -> dict:
    return {"num": str(c.numerator), "den": str(c.denominator)}


def _series_json(s: TruncatedSeries) -> dict:
    return {"order": s.order, "terms": [{"exp": k, **_q_json(c)} for k, c in s.items()]}


# --- subcommands ----------------------------------------------------------

def cmd_decompose(cfg: CommandConfig, obj: Any) -> dict:
    f = _parse(SparsePoly.from_json, obj, "polynomial")
    diags: list[Diagnostic] = []
    results = sparse_decompose(f, cfg.limits, diags)
    return {
        "f": f.to_json(),
        "decomposable": bool(results),
        "results": [r.to_json() for r in results],
        "diagnostics": [d.to_json() for d in diags],
    }


def cmd_expand(cfg: CommandConfig, obj: Any) -> dict:
    if not isinstance(obj, dict) or "op" not in obj:
        raise InputError('expand input must be an object with an "op" field')
    op = obj["op"]
    if op == "pow":
        o = _object(obj, {"op", "series", "s", "d"}, {"N"}, "pow input")
        fs = _series(o["series"], "series")
        N = _int(o["N"], "N", 0) if "N" in o else fs.order
        out = pow_fractional(fs, _int(o["s"], "s"), _int(o["d"], "d", 1), N)
        return {"op": op, **_series_json(out)}
    if op == "delta-split":
        o = _object(obj, {"op", "series", "p", "delta", "s", "d"}, {"N"}, "delta-split input")
        fs = _series(o["series"], "series")
        N = _int(o["N"], "N", 0) if "N" in o else fs.order
        triples = delta_split_expand(fs, _int(o["p"], "p", 0), _series(o["delta"], "delta"),
                                     _int(o["s"], "s"), _int(o["d"], "d", 1), N)
        return {"op": op, "order": min(N, fs.order),
                "terms": [{"k": k, "exp": e, **_q_json(c)} for c, k, e in triples]}
    if op == "puiseux":
        o = _object(obj, {"op", "g", "count"}, what="puiseux input")
        g = DensePoly(_rationals(o["g"], "g"))
        tail = puiseux_inverse_at_infinity(g, _int(o["count"], "count", 1))
        return {"op": op, "terms": [{"j": j - 1, **_q_json(c)} for j, c in enumerate(tail.coeffs)]}
    if op == "tilde-h":
        o = _object(obj, {"op", "f", "g"}, {"N"}, "tilde-h input")
        f = _parse(SparsePoly.from_json, o["f"], "f")
        g = DensePoly(_rationals(o["g"], "g"))
        N = _int(o["N"], "N", 1) if "N" in o else None
        return {"op": op, **_series_json(tilde_h_truncation(f, g, N))}
    raise InputError(f"unknown expand op {op!r}; expected pow, delta-split, puiseux or tilde-h")


def cmd_wronskian_check(cfg: CommandConfig, obj: Any) -> dict:
    if isinstance(obj, list):
        obj = {"functions": obj}
    o = _object(obj, {"functions"}, {"r", "S"}, "wronskian-check input")
    if not isinstance(o["functions"], list):
        raise InputError('"functions" must be a list')
    phis = [_parse(RatFunc.from_json, p, f"functions[{i}]") for i, p in enumerate(o["functions"])]
    r = _int(o.get("r", 0), "r", 0)
    S = None
    if "S" in o:
        if not isinstance(o["S"], list):
            raise InputError('"S" must be a list of places')
        S = [_parse(Place.from_json, p, f"S[{i}]") for i, p in enumerate(o["S"])]
    return verify_prop1(phis, r, S).to_json()


def cmd_enumerate(cfg: CommandConfig, obj: Any) -> dict:
    l, ell, B = cfg.shape
    return build_catalog(l, ell, B, cfg.caps).to_json()


def cmd_corollary_scan(cfg: CommandConfig, obj: Any) -> dict:
    o = _object(obj, {"a"}, {"m"}, "corollary-scan input")
    a = _rationals(o["a"], "a")
    out = corollary_box_scan(a, cfg.box, cfg.limits).to_json()
    if "m" in o:
        if not isinstance(o["m"], list):
            raise InputError('"m" must be a list of integers')
        m = [_int(x, f"m[{i}]") for i, x in enumerate(o["m"])]
        out["membership"] = {"m": m, "decomposable": corollary_membership(a, m, cfg.limits)}
    return out


COMMANDS: dict[str, tuple[Callable[[CommandConfig, Any], dict], bool]] = {
    # name -> (handler, reads input)
    "decompose": (cmd_decompose, True),
    "expand": (cmd_expand, True),
    "wronskian-check": (cmd_wronskian_check, True),
    "enumerate": (cmd_enumerate, False),
    "corollary-scan": (cmd_corollary_scan, True),
}


# --- driver ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would print usage text and exit 2
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lacunary", description="Sparse polynomial decomposition toolkit (JSON I/O).")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", help="input file, '-' for stdin, or inline JSON")
    p.add_argument("--output", help="write JSON here instead of stdout")
    p.add_argument("--budget-terms", type=int, help="term cap for expanding operations")
    p.add_argument("--l", dest="l", type=int, default=1, help="enumerate: number of terms of f")
    p.add_argument("--ell", type=int, default=2, help="enumerate: outer degree")
    p.add_argument("--B", dest="B", type=int, default=1, help="enumerate: terms per inner polynomial")
    p.add_argument("--cap-l", type=int, default=CatalogCaps.l)
    p.add_argument("--cap-ell", type=int, default=CatalogCaps.ell)
    p.add_argument("--cap-b", type=int, default=CatalogCaps.B)
    p.add_argument("--box", type=int, default=12, help="corollary-scan: largest exponent")
    p.add_argument("--json-errors", action="store_true", help="errors as JSON on stderr (always on)")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def config_from_args(ns: argparse.Namespace) -> CommandConfig:
    limits = DEFAULT_LIMITS
    if ns.budget_terms is not None:
        if ns.budget_terms < 1:
            raise _UsageError("--budget-terms must be positive")
        limits = replace(limits, term_cap=ns.budget_terms)
    for name in ("l", "ell", "B", "cap_l", "cap_ell", "cap_b", "box"):
        if getattr(ns, name) < 1:
            raise _UsageError(f"--{name.replace('_', '-')} must be positive")
    caps = replace(CatalogCaps(), l=ns.cap_l, ell=ns.cap_ell, B=ns.cap_b)
    return CommandConfig(ns.command, ns.input, ns.output, limits, caps, (ns.l, ns.ell, ns.B), ns.box, ns.verbose)


def _emit_error(kind: str, exc: BaseException | str, verbose: int, stderr) -> None:
    message = str(exc)
    payload = {"error": {"kind": kind, "type": type(exc).__name__ if not isinstance(exc, str) else kind,
                         "message": message}}
    stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    if verbose:
        stderr.write(f"lacunary: {kind}: {message}\n")


def _write_output(path: str | None, text: str, stdout) -> None:
    if path is None:
        stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lacunary-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(cfg: CommandConfig, stdin=None, stdout=None) -> dict:
    """Execute a command and return its JSON-ready result (no I/O on output)."""
    handler, reads = COMMANDS[cfg.command]
    obj = _load_input(cfg.input, stdin) if reads else None
    return handler(cfg, obj)


def main(argv: Sequence[str] | None = None, stdin=None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    verbose = 0
    try:
        ns = build_parser().parse_args(argv)
        verbose = ns.verbose
        cfg = config_from_args(ns)
    except _UsageError as exc:
        _emit_error("usage", exc, verbose, stderr)
        return 2
    if verbose:
        logging.basicConfig(level=logging.DEBUG if verbose > 1 else logging.INFO, stream=stderr,
                            format="%(name)s: %(message)s")
    try:
        result = run(cfg, stdin)
    except InputError as exc:
        _emit_error("input", exc, verbose, stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        _emit_error("domain", exc, verbose, stderr)
        return 1
    text = json.dumps(result, sort_keys=True, indent=2) + "\n"
    try:
        _write_output(cfg.output, text, stdout)
    except OSError as exc:
        _emit_error("output", exc, verbose, stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
