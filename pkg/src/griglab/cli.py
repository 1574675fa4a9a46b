"""Command line front end.

Subcommands: verify (exact invariant suites), estimate (single-group
parameter runs), sweep (one report row per family member).  Group
arguments use a small constructor language, e.g.

    free(2)   grig((012)*, 4)   gj((012)*, {1,3}, 8)
    functor((012)*, 2, matrix_h())   product(grig((012)*, 3), matrix_h())

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 resource
exhaustion.  Outputs pin to (expression, seed, version): emitted reports
carry runtime as null, the wall-clock number goes to stderr.
"""

import argparse
import json
import os
import re
import sys

from . import __version__
from .cayley import BallBudgetError
from .estimators import (
    cheeger_report,
    connective_constant,
    entropy,
    growth_report,
    percolation,
    spectral_radius,
    speed,
)
from .family import GJSpec, build_GJ, separation_witness, truncation_level
from .marked import (
    CyclicGroup,
    FreeGroup,
    GammaFree,
    GridGroup,
    MarkedGroup,
    MatrixHGroup,
    product,
)
from .matrixh import generator_matrices, relation_report
from .words import FIRST_OMEGA, OmegaWord, eta_word, parse_omega
from .wreath import apply_functor, ball_agreement_radius, grig, iterate_functor

VERIFY_SCHEMA = "griglab/verify/1"
SWEEP_SCHEMA = "griglab/sweep/1"


# ------------------------------------------------------------ expression parser

class ExprError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"at position {pos}: {msg}")
        self.pos = pos


_NAME = re.compile(r"[a-z_]+")
_INT = re.compile(r"\d+")
_OMEGA_PAREN = re.compile(r"\((\d+)\)\*")
_OMEGA_BAR = re.compile(r"(\d*)\|(\d+)")


class _Parser:
    """Recursive descent over the constructor mini-language."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, msg: str):
        raise ExprError(msg, self.pos)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def take(self, ch: str):
        self.ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.fail(f"expected '{ch}'")
        self.pos += 1

    def match(self, rx):
        self.ws()
        m = rx.match(self.text, self.pos)
        if m:
            self.pos = m.end()
        return m

    def parse_int(self) -> int:
        m = self.match(_INT)
        if not m:
            self.fail("expected an integer")
        return int(m.group())

    def parse_omega(self) -> OmegaWord:
        m = self.match(_OMEGA_PAREN)
        if m:
            return OmegaWord("", m.group(1))
        m = self.match(_OMEGA_BAR)
        if m:
            return OmegaWord(m.group(1), m.group(2))
        self.fail("expected an omega word like (012)* or pre|period")

    def parse_set(self) -> tuple:
        self.take("{")
        vals = []
        self.ws()
        if self.pos < len(self.text) and self.text[self.pos] == "}":
            self.pos += 1
            return ()
        while True:
            vals.append(self.parse_int())
            self.ws()
            if self.pos < len(self.text) and self.text[self.pos] == ",":
                self.pos += 1
                continue
            break
        self.take("}")
        return tuple(vals)

    def parse_expr(self) -> MarkedGroup:
        m = self.match(_NAME)
        if not m:
            self.fail("expected a constructor name")
        name = m.group()
        self.take("(")
        try:
            g = self._build(name)
        except ExprError:
            raise
        except (ValueError, TypeError) as exc:
            raise ExprError(str(exc), self.pos) from exc
        self.take(")")
        return g

    def _build(self, name: str) -> MarkedGroup:
        if name == "free":
            return FreeGroup(self.parse_int())
        if name == "cycle":
            return CyclicGroup(self.parse_int())
        if name == "grid":
            return GridGroup(self.parse_int())
        if name == "gamma_free":
            return GammaFree()
        if name == "matrix_h":
            return MatrixHGroup()
        if name == "grig":
            om = self.parse_omega()
            self.take(",")
            return grig(om, self.parse_int())
        if name == "functor":
            om = self.parse_omega()
            self.take(",")
            k = self.parse_int()
            self.take(",")
            base = self.parse_expr()
            return iterate_functor(om, k, base)
        if name == "gj":
            om = self.parse_omega()
            self.take(",")
            J = self.parse_set()
            self.take(",")
            radius = self.parse_int()
            return build_GJ(GJSpec(om, J, radius))
        if name == "product":
            factors = [self.parse_expr()]
            self.ws()
            while self.pos < len(self.text) and self.text[self.pos] == ",":
                self.pos += 1
                factors.append(self.parse_expr())
            return product(factors)
        self.fail(f"unknown constructor '{name}'")


def parse_group_expr(text: str) -> MarkedGroup:
    p = _Parser(text)
    g = p.parse_expr()
    p.ws()
    if p.pos != len(text):
        p.fail("trailing input")
    return g


# -------------------------------------------------------------- verify suites

def _check(name: str, ok: bool, detail: str = "") -> dict:
    return {"name": name, "ok": bool(ok), "detail": detail}


def suite_matrix_relations() -> list:
    rep = relation_report(generator_matrices())
    return [_check(name, ok) for name, ok in rep.items()]


def suite_contraction(m: int, omega: OmegaWord) -> list:
    n = 2**m - 1
    M = truncation_level(n, omega)
    F = iterate_functor(omega, m, MatrixHGroup())
    G = grig(omega, M)
    r = ball_agreement_radius(F, G, n)
    return [
        _check(
            f"balls agree to radius {n} (m={m}, truncation {M})",
            r == n,
            f"agreement radius {r}",
        )
    ]


def suite_eta(k: int, omega: OmegaWord) -> list:
    w = eta_word(omega, k)
    H = MatrixHGroup()
    deeper = iterate_functor(omega, k + 1, H)
    plain = grig(omega, k)
    checks = [
        _check(f"eta_{k} trivial one functor level deeper", deeper.is_trivial_word(w)),
        _check(f"eta_{k} trivial in the level-{k} plain group", plain.is_trivial_word(w)),
    ]
    if k == 0:
        checks.append(_check("eta_0 nontrivial in the matrix group", not H.is_trivial_word(w)))
    else:
        Fk = iterate_functor(omega, k, H)
        x = Fk.evaluate(Fk.parse(w))
        from .wreath import nontrivial_leaves, portrait

        leaves = nontrivial_leaves(x, Fk.leaf_base.identity())
        checks.append(_check(f"eta_{k} nontrivial at level {k}", x != Fk.identity()))
        checks.append(
            _check(
                f"eta_{k} has identity portrait with {len(leaves)} decorated leaf",
                portrait(x).bits == 0 and len(leaves) == 1,
            )
        )
    return checks


def suite_product_compat(omega: OmegaWord) -> list:
    checks = []
    H1, H2 = MatrixHGroup(), grig(omega, 1)
    both = product([H1, H2])
    for x in (0, 1, 2):
        lhs = apply_functor(x, both)
        rhs = product([apply_functor(x, H1), apply_functor(x, H2)])
        r = ball_agreement_radius(lhs, rhs, 3)
        checks.append(
            _check(f"functor letter {x} distributes over the product (radius 3)", r == 3)
        )
    return checks


def run_verify(args) -> tuple:
    omega = parse_omega(args.omega)
    checks = []
    if args.suite in ("matrix-relations", "all"):
        checks += suite_matrix_relations()
    if args.suite in ("contraction", "all"):
        checks += suite_contraction(args.m, omega)
    if args.suite in ("eta", "all"):
        checks += suite_eta(args.k, omega)
    if args.suite in ("product-compat", "all"):
        checks += suite_product_compat(omega)
    ok = all(c["ok"] for c in checks)
    blob = {"schema": VERIFY_SCHEMA, "suite": args.suite, "ok": ok, "checks": checks}
    return ok, blob


# ------------------------------------------------------------- estimate command

def run_estimate(args) -> dict:
    g = parse_group_expr(args.group)
    threads = args.threads if args.threads else (os.cpu_count() or 1)
    p = args.parameter
    if p == "rho":
        rep = spectral_radius(g, args.n if args.n else 12)
    elif p in ("pc-site", "pc-bond"):
        rep = percolation(
            g,
            p.split("-")[1],
            radius=args.R,
            trials=args.trials,
            seed=args.seed,
            threads=threads,
        )
    elif p == "entropy":
        rep = entropy(g, args.n if args.n else 16)
    elif p == "speed":
        rep = speed(g, args.n if args.n else 16, samples=args.samples, seed=args.seed)
    elif p == "mu":
        rep = connective_constant(g, args.n if args.n else 10)
    elif p == "cheeger":
        rep = cheeger_report(g, candidates=args.candidates, n_max=args.n if args.n else 6)
    elif p == "growth":
        rep = growth_report(g, args.n if args.n else 8)
    else:
        raise ExprError(f"unknown parameter '{p}'", 0)
    blob = rep.to_json()
    print(f"runtime: {blob['runtime_seconds']} s", file=sys.stderr)
    blob["runtime_seconds"] = None  # byte-stable artifacts
    return blob


# ---------------------------------------------------------------- sweep command

def _witness_matrix(specs: list, omega: OmegaWord) -> list:
    """Rows for every ordered proper-subset pair of the listed J sets."""
    rows = []
    for J in specs:
        for Jp in specs:
            if not (set(J) < set(Jp)):
                continue
            row = {"J": list(J), "J_prime": list(Jp), "witness_i": None, "ok": False}
            for i in sorted(set(Jp) - set(J)):
                rep = separation_witness(omega, J, Jp, i)
                if rep["ok"]:
                    row["witness_i"] = i
                    row["ok"] = True
                    break
            rows.append(row)
    return rows


def run_sweep(args) -> dict:
    omega = parse_omega(args.omega)
    rows = []
    if args.parameter == "eta-witness":
        sets = []
        for text in args.groups:
            p = _Parser(text)
            sets.append(p.parse_set())
        rows = _witness_matrix(sets, omega)
    else:
        for text in args.groups:
            row = {"group": text}
            try:
                sub = argparse.Namespace(**vars(args))
                sub.group = text
                blob = run_estimate(sub)
                row.update(
                    {
                        "parameter": blob["parameter"],
                        "estimate": blob["estimate"],
                        "certified": (blob["certified"] or {}).get("value"),
                    }
                )
            except (ExprError, ValueError) as exc:
                row["error"] = str(exc)  # record and continue
            rows.append(row)
    return {
        "schema": SWEEP_SCHEMA,
        "parameter": args.parameter,
        "seed": args.seed,
        "rows": rows,
    }


# -------------------------------------------------------------------- emission

def _csv_escape(v) -> str:
    s = "" if v is None else str(v)
    if any(ch in s for ch in ",\"\n"):
        s = '"' + s.replace('"', '""') + '"'
    return s


def _rows_to_csv(header: list, rows: list) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_escape(x) for x in row))
    return "\n".join(lines) + "\n"


def to_csv(blob: dict) -> str:
    if blob["schema"] == VERIFY_SCHEMA:
        return _rows_to_csv(
            ["name", "ok", "detail"],
            [(c["name"], int(c["ok"]), c["detail"]) for c in blob["checks"]],
        )
    if blob["schema"] == SWEEP_SCHEMA:
        keys = sorted({k for row in blob["rows"] for k in row})
        return _rows_to_csv(keys, [[row.get(k) for k in keys] for row in blob["rows"]])
    series = blob.get("series", {})
    if "curve" in series:
        return _rows_to_csv(["p", "theta_hat", "ci_lo", "ci_hi"], series["curve"])
    if "n" in series:
        cols = [k for k in series if k != "n" and isinstance(series[k], list)]
        rows = [
            [n] + [series[c][i] for c in cols] for i, n in enumerate(series["n"])
        ]
        return _rows_to_csv(["n"] + cols, rows)
    if "step" in series:
        rows = [
            (s, b) for s, b in zip(series["step"], series["bound"])
        ]
        return _rows_to_csv(["step", "bound"], rows)
    return _rows_to_csv(["estimate"], [[blob.get("estimate")]])


def _emit(blob: dict, args):
    text_json = json.dumps(blob, indent=2, sort_keys=True) + "\n"
    if args.json:
        if args.json == "-":
            sys.stdout.write(text_json)
        else:
            with open(args.json, "w") as f:
                f.write(text_json)
    if args.csv:
        text = to_csv(blob)
        if args.csv == "-":
            sys.stdout.write(text)
        else:
            with open(args.csv, "w") as f:
                f.write(text)


# ------------------------------------------------------------------ config file

def load_config(path: str) -> dict:
    out = {}
    with open(path) as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_no}: expected key=value")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            value = value.strip()
            out[key] = int(value) if re.fullmatch(r"-?\d+", value) else value
    return out


# ------------------------------------------------------------------- arg parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="griglab",
        description="exact checks and parameter estimates for decorated Grigorchuk groups",
    )
    ap.add_argument("--version", action="version", version=f"griglab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", metavar="PATH", help="write JSON report ('-' = stdout)")
        p.add_argument("--csv", metavar="PATH", help="write CSV table ('-' = stdout)")
        p.add_argument("--config", metavar="FILE", help="flat key=value defaults; flags win")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=0, help="0 = all cores")
        p.add_argument("--omega", default="(012)*", help="defining word for functor towers")

    v = sub.add_parser("verify", help="run an exact invariant suite")
    v.add_argument(
        "suite",
        choices=["matrix-relations", "contraction", "eta", "product-compat", "all"],
    )
    v.add_argument("--m", type=int, default=2, help="contraction depth")
    v.add_argument("--k", type=int, default=1, help="separating word index")
    common(v)

    e = sub.add_parser("estimate", help="estimate one parameter on one group")
    e.add_argument("group", help="group expression, e.g. 'grig((012)*, 4)'")
    e.add_argument(
        "parameter",
        choices=["rho", "pc-site", "pc-bond", "entropy", "speed", "mu", "cheeger", "growth"],
    )
    e.add_argument("--n", type=int, default=0, help="series length (0 = per-parameter default)")
    e.add_argument("--R", type=int, default=32, help="percolation ball radius")
    e.add_argument("--trials", type=int, default=500)
    e.add_argument("--samples", type=int, default=1000)
    e.add_argument("--candidates", default="balls", choices=["balls", "boxes", "greedy"])
    common(e)

    s = sub.add_parser("sweep", help="one report row per family member")
    s.add_argument("parameter", help="estimate parameter, or 'eta-witness'")
    s.add_argument("groups", nargs="*", help="group expressions (J sets for eta-witness)")
    s.add_argument("--n", type=int, default=0)
    s.add_argument("--R", type=int, default=32)
    s.add_argument("--trials", type=int, default=500)
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--candidates", default="balls", choices=["balls", "boxes", "greedy"])
    common(s)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        try:
            conf = load_config(args.config)
        except (OSError, ValueError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        ns = vars(args)
        bad = set(conf) - set(ns)
        if bad:
            print(f"config error: unknown keys {sorted(bad)}", file=sys.stderr)
            return 2
        # flags win: skip any key spelled out on the command line
        given = set()
        for tok in list(argv) if argv is not None else sys.argv[1:]:
            if tok.startswith("--"):
                given.add(tok[2:].split("=", 1)[0].replace("-", "_"))
        for key, value in conf.items():
            if key not in given:
                ns[key] = value
    try:
        if args.command == "verify":
            ok, blob = run_verify(args)
            _emit(blob, args)
            for c in blob["checks"]:
                mark = "ok " if c["ok"] else "FAIL"
                line = f"[{mark}] {c['name']}"
                if c["detail"]:
                    line += f" ({c['detail']})"
                print(line)
            return 0 if ok else 1
        if args.command == "estimate":
            blob = run_estimate(args)
            _emit(blob, args)
            if not (args.json == "-" or args.csv == "-"):
                cert = blob.get("certified")
                extra = (
                    f"  certified {cert['direction']} bound {cert['value']:.6f}"
                    if cert
                    else ""
                )
                est = blob["estimate"]
                shown = "n/a" if est is None else f"{est:.6f}"
                print(f"{blob['parameter']} on {blob['group']}: {shown}{extra}")
            return 0
        if args.command == "sweep":
            blob = run_sweep(args)
            _emit(blob, args)
            if not (args.json == "-" or args.csv == "-"):
                for row in blob["rows"]:
                    print(json.dumps(row, sort_keys=True))
            return 0
    except ExprError as exc:
        print(f"expression error {exc}", file=sys.stderr)
        return 2
    except BallBudgetError as exc:
        print(
            f"resource limit: ball budget {exc.budget} reached at radius "
            f"{exc.achieved_radius}",
            file=sys.stderr,
        )
        return 3
    except MemoryError:
        print("resource limit: out of memory", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
