"""Command-line interface.

Exit codes: 0 success, 1 bad input, 2 when a numerical certificate cannot be
given (a wall-adjacent input, an unresolved wall).  JSON output is canonical:
sorted keys and floats at 12 significant digits.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, replace
from typing import Any, Sequence

import numpy as np

from . import acceptance, stab
from . import periods as P
from .cquiver import fv_map, mutate_backward, mutate_forward
from .errors import InputError, NumericalError, QuadStabError
from .foliation import DEFAULT_OPTIONS, TraceOptions, angulation_from, classify, is_saddle_free
from .lattices import an_form
from .ngon import enumerate_angulations, exchange_graph, fan_angulation, quiver_of
from .polyspace import Params, Polynomial, discriminant, roots
from .render import render_svg
from .serialize import dumps

COMMANDS = ("roots", "classify", "angulate", "render", "mutate", "enumerate", "graph", "periods",
            "jacobian", "monodromy", "wallcross", "walk", "verify")

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_IMAG = re.compile(rf"^(?P<im>[+-]?(?:{_NUM})?)i$")
_COMPLEX = re.compile(rf"^(?P<re>[+-]?{_NUM})(?:(?P<im>[+-](?:{_NUM})?)i)?$")


class UsageError(InputError):
    pass


def parse_complex(text: str) -> complex:
    """Literals a, a+bi, a-bi and bi with decimal floats."""
    s = text.strip().replace(" ", "")
    m = _IMAG.match(s) or _COMPLEX.match(s)
    if m is None:
        raise UsageError(f"--coeffs: cannot read {text!r} as a complex number")
    groups = m.groupdict()
    re_part = float(groups["re"]) if groups.get("re") else 0.0
    im = groups.get("im")
    if im is None:
        return complex(re_part, 0.0)
    if im in ("", "+"):
        im_part = 1.0
    elif im == "-":
        im_part = -1.0
    else:
        im_part = float(im)
    return complex(re_part, im_part)


def parse_coeffs(text: str) -> list[complex]:
    return [parse_complex(part) for part in text.split(",")]


@dataclass
class Invocation:
    command: str
    params: Params | None
    inputs: dict[str, Any]

    @property
    def p(self) -> Polynomial:
        if self.inputs.get("coeffs") is None:
            raise UsageError(f"{self.command} needs --coeffs")
        return Polynomial(self.inputs["coeffs"])

    def options(self) -> TraceOptions:
        tol = self.inputs.get("tol")
        return DEFAULT_OPTIONS if tol is None else replace(DEFAULT_OPTIONS, hit_tol=tol)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors exit with 1
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quadstab", allow_abbrev=False,
                     description="Polynomial quadratic differentials and their chambers.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--N", type=int, help="polygon parameter, N >= 3")
    parser.add_argument("--n", type=int, help="number of coefficients (inferred from --coeffs)")
    parser.add_argument("--coeffs", help='comma-separated u_1..u_n, e.g. "0,-1+0.5i"')
    parser.add_argument("--phase", type=float, default=0.0)
    parser.add_argument("--tol", type=float, help="relative tolerance for detecting a saddle hit")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--grid", help="comma-separated reals (phases, radii) or a step count")
    parser.add_argument("-o", "--output")
    parser.add_argument("--level", choices=("quick", "full"), default="quick")
    parser.add_argument("--vertex", type=int, default=1)
    parser.add_argument("--direction", choices=("forward", "backward"), default="forward")
    parser.add_argument("--path", help="JSON file with {\"samples\": [[[re, im], ...], ...]}")
    parser.add_argument("--chain", action="store_true", help="use the A_n chain basis")
    return parser


def _glue_values(argv: Sequence[str]) -> list[str]:
    """Attach the value to --coeffs so literals such as -1i are not read as flags."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--coeffs":
            val = next(it, None)
            out.append(tok if val is None else f"--coeffs={val}")
        else:
            out.append(tok)
    return out


def parse(argv: Sequence[str]) -> Invocation:
    ns = build_parser().parse_args(_glue_values(argv))
    coeffs = parse_coeffs(ns.coeffs) if ns.coeffs is not None else None
    n = ns.n
    if coeffs is not None:
        if n is not None and n != len(coeffs):
            raise UsageError(f"--n {n} disagrees with {len(coeffs)} coefficients")
        n = len(coeffs)
    samples = None
    if ns.command == "walk":
        samples = _load_samples(ns.path)
        if n is None and samples:
            n = samples[0].n
        if any(q.n != n for q in samples):
            raise UsageError("--path: samples disagree with n")
    params = None
    if ns.command != "verify":
        if ns.N is None:
            raise UsageError("--N is required")
        if ns.N < 3:
            raise UsageError(f"--N must be at least 3, got {ns.N}")
        if n is None:
            raise UsageError("give --coeffs or --n")
        params = Params(ns.N, n)
    if ns.tol is not None and not ns.tol > 0:
        raise UsageError("--tol must be positive")
    inputs = {k: v for k, v in vars(ns).items() if k not in ("command", "N", "n", "coeffs")}
    inputs["coeffs"] = coeffs
    inputs["samples"] = samples
    return Invocation(ns.command, params, inputs)


def _load_samples(path: str | None) -> list[Polynomial]:
    if not path:
        raise UsageError("walk needs --path")
    try:
        with open(path) as fh:
            data = json.load(fh)
        samples = [Polynomial.from_json(q) for q in data["samples"]]
    except (OSError, ValueError, KeyError, TypeError, InputError) as exc:
        raise UsageError(f"--path: {exc}") from None
    if not samples:
        raise UsageError("--path: no samples")
    return samples


def _grid(inv: Invocation, default: Sequence[float]) -> list[float]:
    text = inv.inputs.get("grid")
    if text is None:
        return list(default)
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--grid: cannot read {text!r}") from None


def _decomposition_json(dec) -> dict:
    return {
        "phase": dec.phase,
        "roots": dec.roots,
        "counts": {"s": dec.s, "t": dec.t, "l": dec.l, "k": dec.k},
        "identities": dec.identities(),
        "saddles": [[i, j] for i, j, _ in dec.saddles],
        "strips": [list(s.diagonal) for s in dec.strips],
    }


# ---------------------------------------------------------------- commands

def cmd_roots(inv: Invocation):
    rs = roots(inv.p)
    return {"roots": list(rs.roots), "discriminant": discriminant(inv.p)}, 0


def cmd_classify(inv: Invocation):
    status = is_saddle_free(inv.p, inv.params, inv.inputs["phase"], inv.options())
    out: dict[str, Any] = {"status": str(status)}
    if status.kind == "Uncertain":
        out["reason"] = status.reason
        return out, 2
    dec = classify(inv.p, inv.params, inv.inputs["phase"], inv.options())
    out.update(_decomposition_json(dec))
    if dec.s == 0:
        out["angulation"] = angulation_from(dec)
    return out, 0


def cmd_angulate(inv: Invocation):
    ch = P.chamber_of(inv.p, inv.params, opts=inv.options()) if inv.inputs["phase"] == 0 else None
    if ch is None:
        from .foliation import angulation_of

        ang = angulation_of(inv.p, inv.params, inv.inputs["phase"], inv.options())
    else:
        ang = ch.angulation
    return {"angulation": ang, "quiver": quiver_of(ang)}, 0


def cmd_render(inv: Invocation):
    dec = classify(inv.p, inv.params, inv.inputs["phase"], inv.options())
    return render_svg(dec), 0


def cmd_mutate(inv: Invocation):
    if inv.inputs.get("coeffs") is not None:
        ang = P.chamber_of(inv.p, inv.params, opts=inv.options()).angulation
    else:
        ang = fan_angulation(inv.params)
    Q = quiver_of(ang)
    v = inv.inputs["vertex"]
    if inv.inputs["direction"] == "forward":
        new = mutate_forward(Q, v)
        wall = P.gm_wall_cross(new, v)
    else:
        new = mutate_backward(Q, v)
        wall = np.rint(np.linalg.inv(P.gm_wall_cross(Q, v))).astype(np.int64)
    # wall_map: coordinates in the old chamber of the new chamber's standard classes
    return {"angulation": ang, "quiver": Q, "mutated": new, "vertex": v,
            "direction": inv.inputs["direction"], "fv_map": fv_map(Q, v), "wall_map": wall}, 0


def cmd_enumerate(inv: Invocation):
    angs = enumerate_angulations(inv.params)
    return f"{len(angs)}\n{dumps(angs)}", 0


def cmd_graph(inv: Invocation):
    g = exchange_graph(inv.params)
    nodes = sorted(g.nodes)
    index = {k: i for i, k in enumerate(nodes)}
    edges = sorted(
        (index[a], index[b], list(data["diagonal"]), list(data["new"]))
        for a, b, data in g.edges(data=True)
    )
    return {
        "nodes": [[list(x) for x in k] for k in nodes],
        "edges": [{"from": a, "to": b, "diagonal": dn, "new": nw} for a, b, dn, nw in edges],
    }, 0


def cmd_periods(inv: Invocation):
    fd = P.framed(inv.p, inv.params, opts=inv.options())
    return {
        "angulation": fd.chamber.angulation,
        "standard": P.period_map(fd),
        "chain": P.chain_periods(inv.p, inv.params),
    }, 0


def cmd_jacobian(inv: Invocation):
    if inv.inputs["chain"]:
        jac = P.chain_jacobian(inv.p, inv.params)
    else:
        jac = P.period_jacobian(P.framed(inv.p, inv.params, opts=inv.options()), opts=inv.options())
    return {"matrix": jac.matrix, "abs_det": abs(jac.det), "cr_residual": jac.cr_residual}, 0


def cmd_monodromy(inv: Invocation):
    v = inv.inputs["vertex"]
    out: dict[str, Any] = {"vertex": v, "picard_lefschetz": P.picard_lefschetz(v, an_form(inv.params))}
    if inv.inputs.get("coeffs") is not None:
        text = inv.inputs.get("grid")
        steps = int(text) if text else 64
        path = stab.half_twist_path(inv.p, v, steps)
        m, walk = acceptance.loop_monodromy(path, inv.params)
        out["walk"] = m
        out["walls"] = len(walk.events)
        out["agrees"] = bool(np.array_equal(m, out["picard_lefschetz"]))
    return out, 0


def cmd_wallcross(inv: Invocation):
    rs = _grid(inv, (0.1, 0.05, 0.01))
    rep = stab.wall_cross_check(inv.p, inv.params, rs, inv.options())
    rows = [{"r": row.r, "heart": row.heart, "heart_sharp": row.heart_sharp, "vertex": row.vertex,
             "rotation_ok": row.rotation_ok, "gap": row.gap} for row in rep.rows]
    return {"rows": rows, "monotone": rep.monotone}, 0


def cmd_walk(inv: Invocation):
    walk = stab.chamber_walk(inv.inputs["samples"], inv.params, opts=inv.options())
    return {
        "events": [{"t_star": e.t_star, "vertex": e.vertex, "direction": e.direction, "width": e.width}
                   for e in walk.events],
        "composite": walk.composite,
        "heart": walk.final.heart,
        "charge": walk.final.charge,
    }, 0


def cmd_verify(inv: Invocation):
    results = acceptance.run(inv.inputs["level"], inv.inputs.get("seed"))
    lines = [r.line() for r in results]
    return "\n".join(lines), 0 if all(r.passed for r in results) else 1


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def run(inv: Invocation) -> tuple[str, int]:
    payload, code = HANDLERS[inv.command](inv)
    text = payload if isinstance(payload, str) else dumps(payload)
    return text, code


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        inv = parse(argv)
        text, code = run(inv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"uncertified: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except QuadStabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = inv.inputs.get("output")
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
