"""``quadtope`` command line front end.

Every command writes one JSON report (sorted keys) that embeds the tool
version and the full run configuration, so identical inputs and flags give
byte-identical output.
"""

import argparse
import json
import os
import re
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import __version__
from .agrachev import OracleConfig, audit_A_equals_B, audit_C_prime, oracle_A
from .errors import QuadtopeError, InputError
from .fibers import (
    EXAMPLES,
    BoundParams,
    FiberConfig,
    FiberProblem,
    bound_main,
    bound_others,
    census,
    example_family,
    fiber_invariant,
    formula_from_json,
    representatives,
    wall_sweep,
)
from .homology import (
    Cover,
    SimplicialComplex,
    alexander_audit,
    betti,
    hocolim,
    hocolim_audit,
    mv_audit,
    nerve,
)
from .poly import rat, rat_str
from .qform import QuadFamily, char_poly, omega_combine, signature_of
from .signcond import build_ladder, disjointness_audit, omega_x_samples
from .strata import index_filtration, mesh_omega

EXIT_OK, EXIT_ERROR, EXIT_FINDINGS = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    eta: str = "1/16"
    mesh_depth: int = 2
    rips_radius: float = 0.05
    samples: int = None
    field: str = "Q"
    tau: float = None
    spread: float = 0.02
    resolution: int = 64
    out: str = None

    @classmethod
    def from_args(cls, args):
        return cls(**{k: getattr(args, k) for k in cls.__dataclass_fields__})

    def field_tag(self):
        if str(self.field).upper() == "Q":
            return "Q"
        try:
            return int(self.field)
        except ValueError:
            raise InputError("field must be Q or a prime", field=self.field) from None

    def oracle(self, tau=None):
        t = self.tau if self.tau is not None else (tau or 0.0)
        return OracleConfig(self.samples, t, self.spread, self.seed, self.mesh_depth, self.field_tag())

    def fiber(self, tau=None):
        extra = {} if self.samples is None else {"newton_samples": self.samples}
        return FiberConfig(oracle=self.oracle(tau), rips_radius=self.rips_radius, **extra)

    def to_json(self):
        return asdict(self)


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        kw.setdefault("allow_abbrev", False)
        super().__init__(*a, **kw)

    def error(self, message):
        self.print_usage(sys.stderr)
        err = {"error": "usage", "message": message}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        sys.exit(EXIT_ERROR)


# ---------------------------------------------------------------- input


def _read_text(path):
    if path in (None, "-"):
        if sys.stdin is None or sys.stdin.isatty():
            raise InputError("no input file given and nothing on stdin")
        return sys.stdin.read(), "<stdin>"
    try:
        with open(path) as fh:
            return fh.read(), path
    except OSError as exc:
        raise InputError("cannot read input", path=path, reason=exc.strerror) from None


def load_json(path):
    text, name = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("malformed JSON", path=name, line=exc.lineno, column=exc.colno, reason=exc.msg) from None


def _unwrap(data):
    """Accept a bare object or a report whose ``result`` carries it."""
    if isinstance(data, dict) and "result" in data and "quadtope" in data:
        return data["result"]
    return data


def parse_family(data):
    data = _unwrap(data)
    if isinstance(data, dict) and "problem" in data:
        data = data["problem"]
    if isinstance(data, dict) and "family" in data:
        data = data["family"]
    if isinstance(data, list):
        data = {"matrix": data}
    if isinstance(data, dict) and "matrix" in data and "forms" not in data:
        data = {"forms": [data]}
    return QuadFamily.from_json(data)


def parse_rats(text, what="value"):
    """``"[1, -1/2]"`` or ``"1,-1/2"`` to a tuple of rationals."""
    if text is None:
        return ()
    body = text.strip().strip("[]()").strip()
    if not body:
        return ()
    try:
        return tuple(rat(p.strip()) for p in body.split(","))
    except (ValueError, ZeroDivisionError, QuadtopeError):
        raise InputError(f"cannot parse {what}", text=text) from None


def parse_points(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, list):
        return [tuple(rat(str(v)) for v in (p if isinstance(p, list) else [p])) for p in data]
    inner = re.findall(r"\[([^\[\]]*)\]", text.strip()[1:-1]) if text.strip().startswith("[[") else None
    if inner:
        return [parse_rats(chunk, "point") for chunk in inner]
    out = []
    for chunk in text.split(";"):
        if chunk.strip():
            out.append(parse_rats(chunk, "point"))
    return out


def parse_I(text, m):
    if text is None:
        return tuple(range(1, m + 1))
    try:
        I = tuple(sorted({int(v) for v in text.replace(" ", "").split(",") if v}))
    except ValueError:
        raise InputError("--I takes comma separated 1-based indices", I=text) from None
    if not I or I[0] < 1 or I[-1] > m:
        raise InputError("--I out of range", I=list(I), m=m)
    return I


def _x(args, fam):
    x = parse_rats(args.x, "--x")
    if not x and fam.k:
        raise InputError("--x is required for a family with parameters", k=fam.k)
    return x


def load_complex(path):
    return SimplicialComplex.from_json(_unwrap(load_json(path)))


def load_parts(path):
    data = _unwrap(load_json(path))
    if isinstance(data, list):
        data = {"parts": data}
    parts = data.get("parts") or data.get("sets")
    if not parts:
        raise InputError("cover file needs a nonempty 'parts' list")
    ambient = data.get("ambient")
    return [SimplicialComplex.from_json(p) for p in parts], (SimplicialComplex.from_json(ambient) if ambient else None)


def load_problem(args):
    """``(FiberProblem, bundle)`` from ``--family/--phi`` or a stdin bundle."""
    if args.family:
        fam = parse_family(load_json(args.family))
        if not args.phi:
            raise InputError("--phi is required with --family")
        phi = formula_from_json(_unwrap(load_json(args.phi)))
        return FiberProblem(fam, phi, args.copies, ""), {}
    bundle = _unwrap(load_json("-"))
    if not isinstance(bundle, dict) or "problem" not in bundle:
        raise InputError("stdin must carry an example bundle with a 'problem' entry")
    return FiberProblem.from_json(bundle["problem"]), bundle


# --------------------------------------------------------------- commands


def cmd_index(args, rc):
    fam = parse_family(load_json(args.form))
    x = _x(args, fam)
    rows = []
    for i in range(fam.m):
        s = signature_of(fam.form(i, x))
        rows.append({"form": i + 1, "signature": [s.neg, s.zero, s.pos], "index": s.neg})
    result = {"forms": rows, "x": [rat_str(v) for v in x]}
    if len(rows) == 1:
        result["signature"] = rows[0]["signature"]
    return result, {"form": args.form}


def cmd_charpoly(args, rc):
    fam = parse_family(load_json(args.family))
    x = _x(args, fam)
    if args.omega:
        omega = parse_rats(args.omega, "--omega")
        qs = [("omega", omega_combine(fam, omega, x))]
    else:
        qs = [(i + 1, fam.form(i, x)) for i in range(fam.m)]
    rows = []
    for name, q in qs:
        c = char_poly(q)
        s = signature_of(q)
        rows.append({"form": name, "coefficients": [rat_str(v) for v in c.coeffs], "signature": [s.neg, s.zero, s.pos]})
    return {"charpolys": rows, "x": [rat_str(v) for v in x]}, {"family": args.family, "omega": args.omega}


def cmd_stratify(args, rc):
    fam = parse_family(load_json(args.family))
    x = _x(args, fam)
    I = parse_I(args.I, fam.m)
    mesh = mesh_omega(I, rc.mesh_depth, fam.m)
    filt = index_filtration(fam, x, mesh)
    out = filt.to_json()
    out["ladder"] = build_ladder(fam.l, rat(rc.eta)).to_json()
    return out, {"family": args.family, "I": list(I)}


def cmd_betti(args, rc):
    K = load_complex(args.complex)
    b = betti(K, rc.field_tag())
    return {"betti": b.to_json(), "f_vector": K.f_vector(), "euler": K.euler()}, {"complex": args.complex}


def cmd_hocolim(args, rc):
    parts, ambient = load_parts(args.cover)
    cover = Cover(parts, ambient)
    field = rc.field_tag()
    H = hocolim(cover)
    out = {
        "hocolim": {"f_vector": H.f_vector(), "betti": betti(H, field).to_json()},
        "union": betti(cover.union(), field).to_json(),
        "nerve": betti(nerve(cover), field).to_json(),
    }
    if args.emit_complex:
        out["hocolim"]["complex"] = H.to_json()
    return out, {"cover": args.cover}


def cmd_audit(args, rc):
    field = rc.field_tag()
    kind = args.kind
    if kind == "mv":
        parts, _ = load_parts(args.cover)
        i_max = args.i_max if args.i_max is not None else max(p.dim for p in parts) + 1
        rep = mv_audit(parts, i_max, field)
        return rep.to_json(), {"cover": args.cover, "i_max": i_max}
    if kind == "hocolim":
        parts, ambient = load_parts(args.cover)
        return hocolim_audit(Cover(parts, ambient), field).to_json(), {"cover": args.cover}
    if kind == "alexander":
        if args.family:
            fam = parse_family(load_json(args.family))
            x = _x(args, fam)
            I = parse_I(args.I, fam.m)
            orc = oracle_A(fam, x, I, rc.oracle())
            rep = alexander_audit(orc.betti(field), orc.complement_betti(field), fam.l, field)
            return rep.to_json(), {"family": args.family, "I": list(I), "x": [rat_str(v) for v in x]}
        if not (args.complex and args.complement and args.l is not None):
            raise InputError("alexander needs --family, or --complex, --complement and --l")
        rep = alexander_audit(load_complex(args.complex), load_complex(args.complement), args.l, field)
        return rep.to_json(), {"complex": args.complex, "complement": args.complement, "l": args.l}
    fam = parse_family(load_json(args.family))
    I = parse_I(args.I, fam.m)
    if kind == "disjointness":
        ladder = build_ladder(fam.l, rat(rc.eta))
        pts = omega_x_samples(fam, I, rc.samples or 2000, rc.seed)
        rep = disjointness_audit(fam, I, ladder, pts)
        out = rep.to_json()
        return {"audit": "disjointness", "ok": rep.ok, "values": out, "violations": out["violations"]}, {"family": args.family}
    x = _x(args, fam)
    cfg = rc.oracle(tau=0.02)
    audits = [audit_A_equals_B(fam, x, I, cfg).to_json()]
    if len(I) <= 2:
        audits.append(audit_C_prime(fam, x, I, max(rc.mesh_depth, 0), cfg).to_json())
    ok = all(a["ok"] for a in audits)
    violations = [v for a in audits for v in a["violations"]]
    return {"audit": "agrachev", "ok": ok, "audits": audits, "violations": violations}, {
        "family": args.family,
        "I": list(I),
        "x": [rat_str(v) for v in x],
    }


def _bundle_tau(bundle):
    return (bundle.get("oracle") or {}).get("tau")


def cmd_fiber(args, rc):
    problem, bundle = load_problem(args)
    cfg = rc.fiber(_bundle_tau(bundle))
    points = parse_points(args.x) if args.x else [tuple(rat(v) for v in p) for p in bundle.get("points", [])]
    if not points:
        raise InputError("give --x or a bundle with points")
    rows = []
    for x in points:
        inv = fiber_invariant(problem, x, cfg)
        rows.append({"x": [rat_str(v) for v in x], **inv.to_json()})
    return {"fibers": rows, "fiber_config": cfg.to_json()}, {"problem": problem.to_json()}


def _segment(args, bundle):
    if args.segment:
        seg = parse_rats(args.segment, "--segment")
    elif bundle.get("segment"):
        seg = tuple(rat(v) for v in bundle["segment"])
    else:
        return None
    if len(seg) != 2:
        raise InputError("segment needs two end points", segment=[rat_str(v) for v in seg])
    return seg


def _sweep(problem, seg, rc, cfg, C, workers):
    ladder = build_ladder(problem.family.l, rat(rc.eta))
    walls, trace = wall_sweep(problem, seg, rc.resolution, ladder, cfg)
    rep = census(problem, representatives(walls, seg), cfg, C, seg, walls, workers=workers)
    rep.trace = trace
    return rep


def _workers():
    try:
        return max(1, int(os.environ.get("QUADTOPE_THREADS", "1")))
    except ValueError:
        raise InputError("QUADTOPE_THREADS must be an integer") from None


def cmd_sweep(args, rc):
    problem, bundle = load_problem(args)
    seg = _segment(args, bundle)
    if seg is None:
        raise InputError("sweep needs --segment")
    cfg = rc.fiber(_bundle_tau(bundle))
    rep = _sweep(problem, seg, rc, cfg, rat(args.C), _workers())
    return rep, {"problem": problem.to_json(), "segment": [rat_str(v) for v in seg]}


def cmd_census(args, rc):
    problem, bundle = load_problem(args)
    cfg = rc.fiber(_bundle_tau(bundle))
    C = rat(args.C)
    inputs = {"problem": problem.to_json()}
    if args.points:
        T = parse_points(args.points)
        rep = census(problem, T, cfg, C, workers=_workers())
    else:
        seg = _segment(args, bundle)
        if seg is not None:
            rep = _sweep(problem, seg, rc, cfg, C, _workers())
            inputs["segment"] = [rat_str(v) for v in seg]
        elif bundle.get("points"):
            T = [tuple(rat(v) for v in p) for p in bundle["points"]]
            rep = census(problem, T, cfg, C, workers=_workers())
        else:
            raise InputError("census needs --points, --segment or a bundle that provides them")
    if "expected" in bundle:
        inputs["expected"] = bundle["expected"]
    return rep, inputs


def cmd_bounds(args, rc):
    p = BoundParams(args.m, args.l, args.k, args.d, rat(args.C))
    which = ["barvinok", "general"]
    if args.n is not None and args.s is not None:
        which.append("projection")
    if args.M is not None:
        which.append("metric")
    table = {"main": bound_main(p), **bound_others(p, args.n, args.s, args.M, rat(args.c), which)}
    return {
        "params": p.to_json(),
        "bounds": {k: str(v) for k, v in table.items()},
        "note": "exponent constants are user supplied and are not known values",
    }, {"n": args.n, "s": args.s, "M": args.M, "c": args.c}


def cmd_examples(args, rc):
    if not args.name:
        return {"examples": list(EXAMPLES)}, {}
    return example_family(args.name).to_json(), {"name": args.name}


COMMANDS = {
    "index": cmd_index,
    "charpoly": cmd_charpoly,
    "stratify": cmd_stratify,
    "betti": cmd_betti,
    "hocolim": cmd_hocolim,
    "audit": cmd_audit,
    "fiber": cmd_fiber,
    "sweep": cmd_sweep,
    "census": cmd_census,
    "bounds": cmd_bounds,
    "examples": cmd_examples,
}


# ----------------------------------------------------------------- parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--eta", default="1/16", help="ladder scale separation")
    g.add_argument("--mesh-depth", dest="mesh_depth", type=int, default=2)
    g.add_argument("--rips-radius", dest="rips_radius", type=float, default=0.05)
    g.add_argument("--samples", type=int, default=None, help="oracle sample budget")
    g.add_argument("--field", default="Q", help="Q or a prime")
    g.add_argument("--tau", type=float, default=None, help="oracle slack (relative)")
    g.add_argument("--spread", type=float, default=0.02)
    g.add_argument("--resolution", type=int, default=64)
    g.add_argument("--out", default=None, help="write the report here instead of stdout")
    g.add_argument("--format", choices=("json", "csv"), default="json")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family")
    fam.add_argument("--x", help='parameter point, e.g. "[1, -1/2]"')
    fam.add_argument("--I", help="1-based form indices, e.g. 1,2")

    prob = argparse.ArgumentParser(add_help=False)
    prob.add_argument("--family", help="family JSON (omit to read an example bundle on stdin)")
    prob.add_argument("--phi", help="formula JSON")
    prob.add_argument("--copies", type=int, default=1, help="antipodal copies making up the set")
    prob.add_argument("--C", default="1", help="bound exponent constant")

    p = _Parser(prog="quadtope", description="Index strata, homotopy models and fiber censuses of quadratic families.")
    p.add_argument("--version", action="version", version=f"quadtope {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("index", parents=[common], help="signature of each form")
    s.add_argument("--form", required=True)
    s.add_argument("--x")
    s = sub.add_parser("charpoly", parents=[common, fam], help="characteristic polynomial coefficients")
    s.add_argument("--omega", help="combination vector; default is every form")
    sub.add_parser("stratify", parents=[common, fam], help="index filtration of an Omega mesh")
    s = sub.add_parser("betti", parents=[common], help="Betti numbers of a complex")
    s.add_argument("--complex", required=True)
    s = sub.add_parser("hocolim", parents=[common], help="homotopy colimit of a cover")
    s.add_argument("--cover", required=True)
    s.add_argument("--emit-complex", dest="emit_complex", action="store_true")
    s = sub.add_parser("audit", parents=[common, fam], help="run one audit")
    s.add_argument("kind", choices=("mv", "hocolim", "alexander", "agrachev", "disjointness"))
    s.add_argument("--cover")
    s.add_argument("--i-max", dest="i_max", type=int)
    s.add_argument("--complex")
    s.add_argument("--complement")
    s.add_argument("--l", type=int)
    s = sub.add_parser("fiber", parents=[common, prob], help="fiber invariants at points")
    s.add_argument("--x", help='point, or points separated by ";"')
    s = sub.add_parser("sweep", parents=[common, prob], help="wall sweep plus census of representatives")
    s.add_argument("--segment")
    s = sub.add_parser("census", parents=[common, prob], help="distinct fiber invariants")
    s.add_argument("--points", help='JSON list of points, or points separated by ";"')
    s.add_argument("--segment")
    s = sub.add_parser("bounds", parents=[common], help="bound formulas with explicit constants")
    for name in ("m", "l", "k", "d"):
        s.add_argument(f"--{name}", type=int, required=True)
    s.add_argument("--C", default="1")
    s.add_argument("--n", type=int)
    s.add_argument("--s", type=int)
    s.add_argument("--M", type=int)
    s.add_argument("--c", default="1")
    s = sub.add_parser("examples", parents=[common], help="built-in example bundles")
    s.add_argument("--name")
    return p


def render(report, fmt):
    if fmt == "csv":
        result = report["_object"]
        if not hasattr(result, "to_csv"):
            raise InputError("csv output is only available for sweep and census")
        return result.to_csv()
    report = {k: v for k, v in report.items() if k != "_object"}
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def run(argv=None):
    args = build_parser().parse_args(argv)
    rc = RunConfig.from_args(args)
    rc.field_tag()
    Fraction(rc.eta)
    result, inputs = COMMANDS[args.command](args, rc)
    obj = result
    if hasattr(result, "to_json"):
        result = result.to_json()
    report = {
        "quadtope": __version__,
        "command": args.command + (f" {args.kind}" if args.command == "audit" else ""),
        "run_config": rc.to_json(),
        "inputs": inputs,
        "result": result,
        "_object": obj,
    }
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if isinstance(result, dict) and result.get("ok") is False:
        return EXIT_FINDINGS
    return EXIT_OK


def main(argv=None):
    try:
        return run(argv)
    except QuadtopeError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
        return EXIT_ERROR
    except (ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(json.dumps({"error": "input", "message": str(exc)}, sort_keys=True) + "\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
