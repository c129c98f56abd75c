"""Command line driver.

Every command prints one report (JSON by default, Markdown with ``--md``)
and exits 0 when all of its checks pass, 1 when a check fails and 2 on a
usage or input error.  Reports carry no timing unless ``--timing`` is given,
so identical inputs and seeds give byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .clifford import RepresentationError, bilinear, build_even_rep, build_rep, clifford_residual
from .cohomology import (HodgeDiamond, PreconditionError, cy3_spin_cohomology, default_carrier,
                         g2_setup, operator_spinor, spectral_sequence, t6_double_complex,
                         torus_cohomology)
from .fiber import FiberAlgebra, ResourceGuardError
from .fierz import symmetry_table
from .holonomy import (EXPECTED_STABILIZER, CurvatureData, annihilator_space, associated_form, check_riemann,
                       curvature_from_matrices, curvature_from_riemann, curvature_sweep, dsquared_on_generators,
                       invariant_spinors, nilpotency_check, stabilizer_algebra)
from .linalg import SparseMatrix, Vector
from .multilinear import GaussianRational, MultiVector, format_word, parse_word
from .spincomplex import (FormFactor, SymFactor, TwistedSpace, build_Dhat, build_Dp, build_d_mode,
                          dp_available)
from .verification import BATTERIES, DEFAULT_SEED, run_battery

SCHEMA_VERSION = 1
INPUT_TYPES = ("hodge", "riemann", "curvature", "spinor")


class InputError(ValueError):
    """Malformed or invalid input; ``invariant`` names the violated condition when there is one."""

    def __init__(self, message: str, invariant: Optional[str] = None):
        super().__init__(message)
        self.invariant = invariant


# ----------------------------------------------------------------------
# serialisation helpers

def scalar(x) -> str:
    return str(GaussianRational.coerce(x))


def matrix_json(mat: SparseMatrix) -> dict:
    entries = [[r, c, scalar(v)] for r in sorted(mat.rows) for c, v in sorted(mat.rows[r].items())]
    return {"shape": [mat.nrows, mat.ncols], "entries": entries}


def spinor_json(vec: Vector, m: int) -> Dict[str, str]:
    return MultiVector(m, vec).to_json_obj()


def parse_vector(text: Optional[str], n: int, name: str) -> Optional[List[GaussianRational]]:
    if text is None:
        return None
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise InputError(f"--{name} needs {n} comma-separated entries, got {len(parts)}")
    try:
        return [GaussianRational.parse(p) for p in parts]
    except ValueError as exc:
        raise InputError(f"--{name}: {exc}") from None


def parse_modes(text: Optional[str], n: int) -> Optional[Tuple[int, ...]]:
    vals = parse_vector(text, n, "k")
    if vals is None:
        return None
    if any(v.im != 0 or v.re.denominator != 1 for v in vals):
        raise InputError("--k entries must be integers", "integral lattice")
    return tuple(int(v.re) for v in vals)


def parse_hodge(text: str) -> HodgeDiamond:
    vals = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep or key.strip() not in ("h11", "h21"):
            raise InputError(f"--hodge expects h11=<int>,h21=<int>, got {part!r}")
        try:
            vals[key.strip()] = int(value)
        except ValueError:
            raise InputError(f"--hodge value {value!r} is not an integer") from None
    if set(vals) != {"h11", "h21"}:
        raise InputError("--hodge needs both h11 and h21")
    if vals["h11"] < 1 or vals["h21"] < 0:
        raise InputError("h11 >= 1 and h21 >= 0 are required", "Kahler class")
    return HodgeDiamond.cy3(vals["h11"], vals["h21"])


# ----------------------------------------------------------------------
# input files

def _scalar_field(value, where: str) -> GaussianRational:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise InputError(f"{where}: scalars are strings like \"1/2+3*i\" or integers")
    try:
        return GaussianRational.coerce(value) if isinstance(value, int) else GaussianRational.parse(value)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def _index_key(key: str, arity: int, n: int, where: str) -> Tuple[int, ...]:
    try:
        idx = tuple(int(x) for x in key.split(","))
    except ValueError:
        raise InputError(f"{where}: key {key!r} is not a comma-separated index list") from None
    if len(idx) != arity or not all(1 <= i <= n for i in idx):
        raise InputError(f"{where}: key {key!r} needs {arity} indices in 1..{n}")
    return idx


def _require(obj: dict, name: str, kind: type):
    if name not in obj:
        raise InputError(f"missing field {name!r}")
    if not isinstance(obj[name], kind) or isinstance(obj[name], bool):
        raise InputError(f"field {name!r} has the wrong type")
    return obj[name]


def load_inputs(path):
    """Read a JSON input file into a validated domain object.

    Accepted ``type`` values: ``hodge`` (``h11``, ``h21`` or a full ``h`` table
    keyed ``"p,q"``), ``riemann`` (rank-4 components keyed ``"a,b,c,d"``),
    ``curvature`` (spinor matrices ``R_{mu nu}`` keyed ``"mu,nu"``, each a
    dense list of rows) and ``spinor`` (words over ``U`` as in
    :class:`MultiVector`).
    """
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(obj, dict):
        raise InputError("top level must be a JSON object")
    version = obj.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise InputError(f"unsupported schema_version {version!r}")
    kind = _require(obj, "type", str)
    if kind not in INPUT_TYPES:
        raise InputError(f"unknown input type {kind!r}; expected one of {', '.join(INPUT_TYPES)}")
    if kind == "hodge":
        return _load_hodge(obj)
    n = _require(obj, "n", int)
    try:
        rep = build_even_rep(n // 2) if n % 2 == 0 else None
    except RepresentationError as exc:
        raise InputError(str(exc)) from None
    if rep is None:
        raise InputError(f"n={n}: inputs are read for even n only")
    if kind == "spinor":
        return _load_spinor(obj, rep)
    if kind == "riemann":
        return _load_riemann(obj, rep)
    return _load_curvature(obj, rep)


def _load_hodge(obj: dict) -> HodgeDiamond:
    if "h" in obj:
        table = _require(obj, "h", dict)
        h = {}
        for key, val in table.items():
            try:
                p, q = (int(x) for x in key.split(","))
            except ValueError:
                raise InputError(f"h: key {key!r} is not \"p,q\"") from None
            if not (0 <= p <= 3 and 0 <= q <= 3):
                raise InputError(f"h: key {key!r} outside 0..3")
            if not isinstance(val, int) or isinstance(val, bool) or val < 0:
                raise InputError(f"h[{key}] must be a non-negative integer")
            h[(p, q)] = val
    else:
        h11, h21 = _require(obj, "h11", int), _require(obj, "h21", int)
        h = {(0, 0): 1, (3, 3): 1, (3, 0): 1, (0, 3): 1, (1, 1): h11, (2, 2): h11, (2, 1): h21, (1, 2): h21}
    try:
        return HodgeDiamond(h)
    except ValueError as exc:
        raise InputError(str(exc), str(exc).split(": ", 1)[-1]) from None


def _load_spinor(obj: dict, rep) -> Vector:
    comps = _require(obj, "components", dict)
    vec: Vector = {}
    for key, val in comps.items():
        try:
            w = parse_word(key)
        except ValueError as exc:
            raise InputError(f"components: {exc}") from None
        if w >> rep.m:
            raise InputError(f"components: word {key!r} uses an index above m={rep.m}")
        x = _scalar_field(val, f"components[{key}]")
        if not x.is_zero():
            vec[w] = x
    if not vec:
        raise InputError("spinor is zero", "nonzero spinor")
    return vec


def _load_riemann(obj: dict, rep) -> CurvatureData:
    n = rep.n
    comps = _require(obj, "components", dict)
    riemann = {}
    for key, val in comps.items():
        riemann[_index_key(key, 4, n, "components")] = _scalar_field(val, f"components[{key}]")
    bad = check_riemann(riemann, n, bianchi=bool(obj.get("bianchi", False)))
    if bad:
        raise InputError(f"Riemann components violate {', '.join(bad)}", bad[0])
    data = curvature_from_riemann(rep, riemann)
    data.provenance = f"riemann:{path_label(obj)}"
    return data


def _load_curvature(obj: dict, rep) -> CurvatureData:
    comps = _require(obj, "components", dict)
    mats: Dict[Tuple[int, int], SparseMatrix] = {}
    for key, rows in comps.items():
        mu, nu = _index_key(key, 2, rep.n, "components")
        if mu == nu:
            raise InputError(f"components[{key}]: R_(mu mu) must vanish", "antisymmetry")
        if not isinstance(rows, list) or len(rows) != rep.dim or any(
                not isinstance(r, list) or len(r) != rep.dim for r in rows):
            raise InputError(f"components[{key}] must be a {rep.dim}x{rep.dim} list of rows")
        dense = [[_scalar_field(x, f"components[{key}]") for x in r] for r in rows]
        mats[(mu, nu)] = SparseMatrix.from_dense(dense)
    for (mu, nu), mat in mats.items():
        other = mats.get((nu, mu))
        if other is not None and not (other + mat).is_zero():
            raise InputError(f"R_({mu}{nu}) != -R_({nu}{mu})", "antisymmetry")
    try:
        data = curvature_from_matrices(rep, {k: v for k, v in mats.items() if k[0] < k[1] or (k[1], k[0]) not in mats})
    except ValueError as exc:
        raise InputError(str(exc), "spin(n) membership") from None
    data.provenance = f"curvature:{path_label(obj)}"
    return data


def path_label(obj: dict) -> str:
    return str(obj.get("label", "input"))


# ----------------------------------------------------------------------
# reports

@dataclass
class RunReport:
    command: List[str]
    config: dict
    results: dict
    checks: List[dict]
    timing: Optional[float] = None

    @property
    def failed(self) -> List[str]:
        return [c["name"] for c in self.checks if not c["pass"]]

    @property
    def status(self) -> str:
        return "fail" if self.failed else "pass"

    def as_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "spincoh_version": __version__,
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "checks": self.checks,
            "status": self.status,
        }
        if self.failed:
            out["failed"] = self.failed
        if self.timing is not None:
            out["timing_seconds"] = round(self.timing, 3)
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_markdown(self) -> str:
        lines = [f"# spincoh {' '.join(self.command)}", "", f"status: **{self.status}**", ""]
        lines += ["## Configuration", ""]
        lines += [f"- {k}: `{json.dumps(v)}`" for k, v in self.config.items()]
        lines += ["", "## Checks", "", "| check | result |", "|---|---|"]
        lines += [f"| {c['name']} | {'pass' if c['pass'] else 'FAIL'} |" for c in self.checks]
        lines += ["", "## Results", "", "```json", json.dumps(self.results, indent=2, ensure_ascii=False), "```"]
        if self.timing is not None:
            lines += ["", f"time: {self.timing:.3f} s"]
        return "\n".join(lines) + "\n"


def check(name: str, passed: bool, detail=None) -> dict:
    return {"name": name, "pass": bool(passed), "detail": detail}


# ----------------------------------------------------------------------
# commands

def cmd_tables(args) -> Tuple[dict, List[dict]]:
    table = symmetry_table(args.n)
    checks = [check(f"{row['kind']} p={row['p']}", row["agree"] and row["signs_agree"],
                    {"measured": row["measured"], "closed_form": row["closed_form"]}) for row in table]
    return {"n": args.n, "rows": table}, checks


def cmd_verify(args) -> Tuple[dict, List[dict]]:
    keys = list(BATTERIES) if "all" in args.battery else args.battery
    results, checks = {}, []
    for key in keys:
        bat = run_battery(key, seed=args.seed)
        results[key] = bat.as_dict(timing=args.timing)
        checks += [check(f"{key}: {c.name}", c.passed, c.detail) for c in bat.checks]
    return results, checks


def cmd_invariants(args) -> Tuple[dict, List[dict]]:
    s = invariant_spinors(args.group, args.n)
    if args.group == "g2":
        c, _ = g2_setup()
    else:
        c = bilinear(s.rep, args.kind)
    m = c.rep.m
    stab = len(stabilizer_algebra(s.rep, s.spinors))
    spinors = []
    for label, z in zip(s.labels, s.spinors):
        ann = annihilator_space(s.rep, z)
        spinors.append({"label": label, "components": spinor_json(z, s.rep.parent_m),
                        "annihilator_dim": ann.dim, "pure": ann.pure})
    forms = []
    for i, j in combinations(range(len(s.spinors)), 2) if len(s.spinors) > 1 else [(0, 0)]:
        for p in range(c.rep.n + 1):
            f = associated_form(c, s.spinors[i], s.spinors[j], p)
            if f.terms:
                forms.append({"pair": [s.labels[i], s.labels[j]], "degree": p, "terms": len(f.terms),
                              "form": f.to_json_obj()})
    expected = EXPECTED_STABILIZER.get((args.group, args.n))
    checks = []
    if expected is not None:
        checks.append(check("stabilizer dimension", stab == expected, {"measured": stab, "expected": expected}))
    results = {"group": args.group, "n": args.n, "kind": c.kind, "stabilizer_dim": stab,
               "spinors": spinors, "associated_forms": forms, "forms_parent_n": c.rep.n, "ground_dim_m": m}
    return results, checks


def _carrier_arg(c, zeta, requested: Optional[str]) -> str:
    return requested or default_carrier(c, zeta)


def cmd_operator_dump(args) -> Tuple[dict, List[dict]]:
    n = args.n
    rep = build_even_rep(n // 2) if n % 2 == 0 else None
    if rep is None:
        raise InputError("operator dump needs even n")
    c = bilinear(rep, args.kind)
    k = parse_modes(args.k, n) or (0,) * n
    a = parse_vector(args.a, n, "a")
    zeta = operator_spinor(args.spinor, n)
    if args.op == "Dp" and args.carrier is None:
        # D_(p) does not involve zeta: take the smallest carrier where it exists
        carrier = next((x for x in ("minus", "plus", "full") if dp_available(c, args.p, x)[0]), "full")
    else:
        carrier = _carrier_arg(c, zeta, args.carrier)
    fib = FiberAlgebra(c, carrier)
    checks: List[dict] = []
    if args.op == "d2":
        op = build_d_mode(c, zeta, k, a, carrier=carrier)
    elif args.op == "Dp":
        ok, why = dp_available(c, args.p, carrier)
        if not ok:
            raise InputError(f"D_({args.p}) unavailable: {why}", "skew C Gamma^(p)")
        op = build_Dp(c, args.p, TwistedSpace(FormFactor(n, args.forms), fib))
    else:
        op = build_Dhat(c, zeta, TwistedSpace(SymFactor(n, args.qmax), fib))
    checks.append(check("squares to zero", op.square().is_zero()))
    checks.append(check("degree shift", op.check_shift(), list(op.shift)))
    blocks = {f"{s[0]},{s[1]}": matrix_json(mat) for s, mat in sorted(op.blocks().items())}
    results = {"operator": args.op, "n": n, "kind": args.kind, "carrier": carrier, "k": list(k),
               "a": [scalar(x) for x in a] if a else None, "shift": list(op.shift),
               "dimension": op.matrix.ncols, "nnz": op.matrix.nnz(), "blocks": blocks}
    if args.op == "Dp":
        results["p"] = args.p
    return results, checks


def cmd_cohomology_torus(args) -> Tuple[dict, List[dict]]:
    n = args.n
    if n % 2:
        raise InputError("torus cohomology is computed for even n")
    c = bilinear(build_even_rep(n // 2), args.kind)
    zeta = operator_spinor(args.operator, n)
    a = parse_vector(args.a, n, "a")
    res = torus_cohomology(c, zeta, carrier=args.carrier, kmax=args.kmax, a=a)
    checks = [check("nonzero modes exact", res.nonzero_exact, [list(f) for f in res.failures[:10]]),
              check("Euler characteristic", res.euler == sum((-1) ** j * d for j, d in enumerate(res.dims)),
                    res.euler)]
    results = {"n": n, "operator": args.operator, "kind": args.kind, "carrier": res.carrier, "kmax": res.kmax,
               "modes": res.modes, "dims": res.dims, "zero_mode_dims": res.zero_mode_dims, "euler": res.euler,
               "a": [scalar(x) for x in a] if a else None}
    return results, checks


def _pages_json(ss) -> List[dict]:
    out = []
    for page in ss.pages + [ss.infinity]:
        out.append({"r": page.r,
                    "dims": {f"{p},{q}": d for (p, q), d in sorted(page.dims.items()) if d},
                    "ranks": {f"{p},{q}": d for (p, q), d in sorted(page.ranks.items()) if d}})
    return out


def cmd_spectral_cy3(args) -> Tuple[dict, List[dict]]:
    hd = load_inputs(args.input) if args.input else parse_hodge(args.hodge)
    if not isinstance(hd, HodgeDiamond):
        raise InputError("--input must hold a hodge diamond")
    r = cy3_spin_cohomology(hd)
    h11, h21 = hd.h[(1, 1)], hd.h[(2, 1)]
    want = [1, 0, h11 - 1, 2 * h21, h11 - 1, 0, 1]
    checks = [check("dims", r.dims == want, {"measured": r.dims, "expected": want}),
              check("D injective on H^(3,0)", r.d_on_h30_injective),
              check("D onto H^(0,3) from H^(1,1)", r.d_on_h11_surjective),
              check("primitive kernel", r.primitive_kernel == h11 - 1, r.primitive_kernel),
              check("E_infinity totals equal total cohomology", r.sequence.oracle_agrees)]
    results = {"h11": h11, "h21": h21, "dims": r.dims, "d2_dims": r.d2_dims,
               "degenerates_at": r.sequence.degenerates_at(), "pages": _pages_json(r.sequence)}
    return results, checks


def cmd_spectral_torus6(args) -> Tuple[dict, List[dict]]:
    modes = [(0,) * 6] + [tuple(int(x) for x in m.split(",")) for m in (args.mode or [])]
    results, checks = {"kind": args.kind, "modes": []}, []
    for k in modes:
        if len(k) != 6:
            raise InputError("--mode needs 6 integers")
        ss = spectral_sequence(t6_double_complex(k, args.kind))
        label = ",".join(str(x) for x in k)
        entry = {"k": list(k), "total": {str(t): d for t, d in sorted(ss.total_dims.items()) if d},
                 "degenerates_at": ss.degenerates_at(), "pages": _pages_json(ss)}
        if args.oracle_check:
            entry["oracle"] = {str(t): d for t, d in sorted(ss.oracle_dims.items()) if d}
            checks.append(check(f"mode {label}: E_infinity equals total cohomology", ss.oracle_agrees))
        results["modes"].append(entry)
    return results, checks


def cmd_curvature(args) -> Tuple[dict, List[dict]]:
    if args.input:
        data = load_inputs(args.input)
        if not isinstance(data, CurvatureData):
            raise InputError("--input must hold riemann or curvature data")
        s = invariant_spinors("su", data.n)
        rows, checks = [], []
        for kind in ("A", "B"):
            c = bilinear(data.rep, kind)
            for label, z in zip(s.labels, s.spinors):
                zero = not dsquared_on_generators(c, z, data)
                chk = nilpotency_check(c, z, data)
                rows.append({"kind": kind, "spinor": label, "dsquared_zero": zero, "conditions_pass": chk["pass"]})
                checks.append(check(f"{kind} {label}: conditions imply d^2=0", zero or not chk["pass"]))
        return {"provenance": data.provenance, "n": data.n, "rows": rows}, checks
    results, checks = {"samples": args.samples, "records": []}, []
    for n in args.n:
        recs = curvature_sweep(n, args.samples, args.seed)
        results["records"] += recs
        checks.append(check(f"n={n} sufficiency", all(r["dsquared_zero"] for r in recs if r["conditions_pass"])))
        checks.append(check(f"n={n} coincidence", all(r["dsquared_zero"] == r["conditions_pass"] for r in recs)))
    return results, checks


def cmd_rep_dump(args) -> Tuple[dict, List[dict]]:
    rep = build_rep(args.n, args.variant)
    gammas = {str(mu): matrix_json(rep.gamma(mu).matrix()) for mu in range(1, rep.n + 1)}
    results = {"n": rep.n, "variant": rep.variant, "dim": rep.dim, "basis": [format_word(w) for w in range(rep.dim)],
               "gammas": gammas}
    checks = []
    if rep.variant == "even":
        forms = {}
        for kind in ("A", "B"):
            c = bilinear(rep, kind)
            forms[kind] = {"matrix": matrix_json(c.matrix), "s_C": c.s_C, "s_Gamma": c.s_Gamma}
        results["bilinears"] = forms
    checks.append(check("Clifford relations", clifford_residual(rep) == 0))
    return results, checks


# ----------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--md", dest="format", action="store_const", const="md", help="Markdown report")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    common.set_defaults(format="json")

    parser = argparse.ArgumentParser(prog="spincoh", description="Exact spin cohomology computations.")
    parser.add_argument("--version", action="version", version=f"spincoh {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", parents=[common], help="symmetry table of C Gamma^(p)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", parents=[common], help="run check batteries")
    p.add_argument("battery", nargs="*", default=["all"], choices=list(BATTERIES) + ["all"])
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("invariants", parents=[common], help="parallel spinors and their data")
    p.add_argument("--group", required=True, choices=["su", "sp", "spin7", "g2"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", default="A", choices=["A", "B"])
    p.add_argument("--report", choices=["json", "md"], help="alias for --json/--md")
    p.set_defaults(func=cmd_invariants)

    op = sub.add_parser("operator", help="operator matrices").add_subparsers(dest="action", required=True)
    p = op.add_parser("dump", parents=[common], help="block matrices of d2, D_(p) or D-hat on one mode")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--op", required=True, choices=["d2", "Dp", "Dhat"])
    p.add_argument("--k", help="integer mode vector, comma separated")
    p.add_argument("--a", help="flat connection, comma separated scalars")
    p.add_argument("--p", type=int, default=1, help="form degree of D_(p)")
    p.add_argument("--kind", default="A", choices=["A", "B"])
    p.add_argument("--spinor", default="d2", choices=["d1", "d2", "d0"], help="spinor defining d")
    p.add_argument("--carrier", choices=["full", "plus", "minus"])
    p.add_argument("--forms", default="all", choices=["all", "holomorphic"], help="form factor of D_(p)")
    p.add_argument("--qmax", type=int, default=2, help="top symmetric power for D-hat")
    p.set_defaults(func=cmd_operator_dump)

    co = sub.add_parser("cohomology", help="cohomology computations").add_subparsers(dest="action", required=True)
    p = co.add_parser("torus", parents=[common], help="spin cohomology on a flat torus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--operator", required=True, choices=["d1", "d2", "d0"])
    p.add_argument("--kmax", type=int, default=1)
    p.add_argument("--a", help="flat connection, comma separated scalars")
    p.add_argument("--kind", default="A", choices=["A", "B"])
    p.add_argument("--carrier", choices=["full", "plus", "minus"])
    p.set_defaults(func=cmd_cohomology_torus)

    sp = sub.add_parser("spectral", help="spectral sequences").add_subparsers(dest="action", required=True)
    p = sp.add_parser("cy3", parents=[common], help="abstract Calabi-Yau threefold model")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--hodge", help="h11=<int>,h21=<int>")
    src.add_argument("--input", help="JSON file of type hodge")
    p.set_defaults(func=cmd_spectral_cy3)
    p = sp.add_parser("torus6", parents=[common], help="T^6 double complex")
    p.add_argument("--oracle-check", action="store_true", help="compare E_infinity with the total complex")
    p.add_argument("--mode", action="append", help="extra nonzero mode, 6 comma-separated integers")
    p.add_argument("--kind", default="B", choices=["A", "B"])
    p.set_defaults(func=cmd_spectral_torus6)

    p = sub.add_parser("curvature", parents=[common], help="curvature conditions versus d^2")
    p.add_argument("--n", type=int, nargs="+", default=[4, 6], choices=[4, 6, 8])
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--input", help="JSON file of type riemann or curvature")
    p.set_defaults(func=cmd_curvature)

    rp = sub.add_parser("rep", help="spinor representations").add_subparsers(dest="action", required=True)
    p = rp.add_parser("dump", parents=[common], help="gammas and bilinears")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--variant", default="auto", choices=["auto", "even", "odd-top", "odd-reduced"])
    p.set_defaults(func=cmd_rep_dump)
    return parser


def _config(args) -> dict:
    skip = {"func", "format", "out", "timing", "command", "action", "report"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv: Sequence[str]) -> Tuple[int, Optional[RunReport]]:
    """Parse ``argv``, execute, and return the exit code with the report."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), None
    if getattr(args, "report", None):
        args.format = args.report
    t0 = time.perf_counter()
    try:
        results, checks = args.func(args)
    except InputError as exc:
        where = f" [invariant: {exc.invariant}]" if exc.invariant else ""
        print(f"spincoh: input error: {exc}{where}", file=sys.stderr)
        return 2, None
    except (RepresentationError, PreconditionError, ResourceGuardError, ValueError, KeyError) as exc:
        print(f"spincoh: error: {exc}", file=sys.stderr)
        return 2, None
    report = RunReport(list(argv), _config(args), results, checks,
                       time.perf_counter() - t0 if args.timing else None)
    text = report.to_markdown() if args.format == "md" else report.to_json()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if report.failed:
        for name in report.failed:
            print(f"spincoh: FAIL {name}", file=sys.stderr)
        return 1, report
    return 0, report


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, _ = run(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
