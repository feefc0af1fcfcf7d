"""``pdd`` command line: censuses, atlases, constructions, profiles and the acceptance suite.

Every command writes its artifacts plus ``manifest.json`` into ``--out``.
Exit codes: 0 pass, 1 criterion failure, 2 usage error, 3 internal defect.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import metadata
from pathlib import Path

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DEFECT = 0, 1, 2, 3
TIMING_KEYS = {"timing", "timings", "runtime_s"}


class UsageError(ValueError):
    pass


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def digest(path: Path) -> str:
    """sha256 of the file; JSON is canonicalized with timing fields removed first."""
    data = path.read_bytes()
    if path.suffix == ".json":
        canon = json.dumps(_strip_timing(json.loads(data)), sort_keys=True, separators=(",", ":"))
        data = canon.encode()
    return hashlib.sha256(data).hexdigest()


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None
    out_dir: Path
    tool_version: str = field(default_factory=tool_version)
    timings: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)

    def phase(self, name: str, t0: float) -> None:
        self.timings[name] = round(time.perf_counter() - t0, 4)

    def write_json(self, name: str, obj) -> Path:
        path = self.out_dir / name
        path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")
        self.outputs.append(path)
        return path

    def write_text(self, name: str, text: str) -> Path:
        path = self.out_dir / name
        path.write_text(text)
        self.outputs.append(path)
        return path

    def to_dict(self) -> dict:
        return {"command": self.command, "parameters": self.parameters, "seed": self.seed,
                "tool_version": self.tool_version, "timings": self.timings,
                "outputs": [{"path": p.name, "sha256": digest(p)} for p in self.outputs]}

    def finish(self) -> Path:
        path = self.out_dir / "manifest.json"
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_json_default) + "\n")
        return path


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    if isinstance(o, Path):
        return str(o)
    if hasattr(o, "item"):
        return o.item()
    raise TypeError(f"cannot serialize {type(o).__name__}")


# ----------------------------------------------------------------- parsing helpers


def parse_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def parse_points(text: str) -> list:
    """'0,1,2,5' for 1-D points or '0:0,1:0,0:1' for 2-D points."""
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise UsageError("empty pattern")
    try:
        if any(":" in p for p in parts):
            return [tuple(int(c) for c in p.split(":")) for p in parts]
        return [int(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"cannot parse pattern {text!r}") from exc


def parse_pattern1d4(text: str):
    """Four points or an (x, y, z) triple; returns the pattern and both forms for echoing."""
    from .signatures import Pattern1D4

    vals = parse_ints(text)
    try:
        if len(vals) == 3:
            pat = Pattern1D4(*vals)
        elif len(vals) == 4:
            pat = Pattern1D4.from_points(vals)
        else:
            raise UsageError("pattern needs 3 values (x,y,z) or 4 points")
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return pat, {"xyz": list(pat.xyz()), "points": list(pat.points)}


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def parse_gammas(text: str) -> tuple:
    vals = tuple(parse_fraction(v) for v in text.split(",") if v.strip())
    if len(vals) != 4:
        raise UsageError("--gammas needs four values")
    return vals


# ----------------------------------------------------------------- commands


def cmd_census(args, man: RunManifest) -> int:
    from . import signatures as sg

    t0 = time.perf_counter()
    recs = sg.census_all_signatures()
    counts = {c: sum(r.cls == c for r in recs) for c in (sg.BOTH_ZERO, sg.P1_ZERO_ONLY, sg.P2_ZERO_ONLY, sg.NEITHER_ZERO)}
    both = sorted(r.signature for r in recs if r.cls == sg.BOTH_ZERO)
    i0 = sg.I0_signatures()
    man.phase("census", t0)
    t0 = time.perf_counter()
    certs = []
    for r in recs:
        if r.cls in (sg.P1_ZERO_ONLY, sg.P2_ZERO_ONLY):
            certs.append(sg.verify_claim_a4_a5(r).to_dict())
        elif sg.in_I0(r):
            certs.append(sg.verify_claim_a6_a7(r, args.bound).to_dict())
    certs.append(sg.verify_claim_a8(args.bound).to_dict())
    man.phase("certificates", t0)
    man.write_json("census.json", {"class_counts": counts, "both_zero": both, "I0_size": len(i0), "I0": i0,
                                   "records": [r.to_dict() for r in recs]})
    man.write_json("certificates.json", certs)
    ok = len(both) == 3 and len(i0) == 122
    print(f"both-zero signatures: {len(both)}; |I0| = {len(i0)}; certificates: {len(certs)}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_atlas(args, man: RunManifest) -> int:
    from .signatures import CASES, run_atlas

    if args.bound < 5:
        raise UsageError("--bound must be at least 5")
    t0 = time.perf_counter()
    res = run_atlas(args.bound)
    man.phase("atlas", t0)
    labels = {n: label for n, label, _ in CASES}
    summary = [{"case": n, "label": labels[n], "triples": res.case_counts.get(n, 0)} for n in range(1, 11)]
    man.write_json("atlas.json", {"bound": args.bound, "summary": summary, "mismatches": res.mismatches,
                                  "p3_failures": res.p3_failures})
    rows = ["x,y,z,case"] + [f"{x},{y},{z},{c}" for (x, y, z), c in sorted(res.labels.items())]
    man.write_text("atlas.csv", "\n".join(rows) + "\n")
    print(f"atlas bound {args.bound}: {len(res.mismatches)} mismatches, {len(res.p3_failures)} p3 failures")
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_curves(args, man: RunManifest) -> int:
    from sympy import isprime

    from .signatures import HIGH_DEG_CURVES, curve_search

    t0 = time.perf_counter()
    primes = parse_ints(args.primes)
    if not primes or not all(isprime(q) for q in primes):
        raise UsageError("--primes must be primes")
    reports = [curve_search(c, args.height, primes) for c in HIGH_DEG_CURVES]
    man.phase("search", t0)
    man.write_json("curves.json", [r.to_dict() for r in reports])
    found = sum(len(r.positive_solutions) for r in reports)
    print(f"height {args.height}: {found} positive points on {len(reports)} curves (rigor: bounded)")
    return EXIT_OK if found == 0 else EXIT_FAIL


def cmd_construct(args, man: RunManifest) -> int:
    from .sets import write_set

    kind = args.kind
    t0 = time.perf_counter()
    info: dict = {"kind": kind}
    obj = None
    if kind == "behrend":
        from .eqfree import behrend_3apfree, verify_free

        obj = behrend_3apfree(_need(args.L, "--L"), cyclic=args.cyclic)
        info.update(size=len(obj), free_verified=_try_verify(verify_free, obj))
    elif kind == "tensor":
        from .eqfree import EquationSpec, behrend_eqfree, digit_tensor_set, verify_free

        p = _need(args.p, "--p")
        spec = EquationSpec(tuple(parse_ints(_need(args.coeffs, "--coeffs"))), p)
        base = behrend_eqfree(p, spec)
        obj = digit_tensor_set(p, base, _need(args.n, "--n"), EquationSpec(spec.coeffs, p ** args.n))
        info.update(base=list(base.elements), size=len(obj), free_verified=_try_verify(verify_free, obj))
    elif kind == "blowup":
        from .builders.blowup import blowup_construction
        from .eqfree import behrend_3apfree

        N = _need(args.N, "--N")
        base = behrend_3apfree(N, cyclic=True)
        obj = blowup_construction(base, 2, N)
        info.update(base=list(base.elements), size=len(obj))
    elif kind == "triforce":
        from .builders.triforce import build_triforce, group_order_ok, sample_mandache_set

        seed = _need(args.seed, "--seed")
        sys_ = build_triforce(_need(args.L, "--L"), parse_fraction(args.k1), parse_fraction(args.k2))
        G = _need(args.G, "--G")
        if not group_order_ok(G, sys_.k1, sys_.k2):
            raise UsageError(f"group order {G} is not coprime to the pattern constant")
        sample = sample_mandache_set(sys_, G, seed)
        obj = sample.S
        info.update(lam=list(sys_.lam.elements), triangles=len(sys_.triangles), **sample.summary())
        man.write_text("beta_profile.csv", sample.beta_profile.to_csv())
    elif kind == "nonconvex2d":
        from .builders.complex_triple import solve_complex_triple
        from .builders.transfer import build_2d_nonconvex_set
        from .eqfree import EquationSpec, greedy_free

        ms = parse_ints(args.m)
        if len(ms) != 4:
            raise UsageError("--m needs four positive integers")
        T = solve_complex_triple(*ms)
        L = _need(args.L, "--L")
        lam = greedy_free(L, EquationSpec((T.m2 * T.m3, T.m1 * T.m4, T.m1 * T.m2, -T.m)))
        obj = build_2d_nonconvex_set(T, L, _need(args.N, "--N"), parse_fraction(args.psi), lam)
        info.update(triple=T.to_dict(), lam=list(lam.elements), size=len(obj), psi=args.psi,
                    psi_mode="rational-substitute")
    elif kind == "special1d":
        from .builders.split_primes import find_split_prime
        from .builders.transfer import TransferParams, build_1d_special_set
        from .eqfree import EquationSpec, greedy_free

        data = find_split_prime(args.min_p)
        L = _need(args.L, "--L")
        g = math.gcd(*data.coeffs)
        lam = greedy_free(L, EquationSpec(tuple(c // g for c in data.coeffs)))
        psi = parse_fraction(args.psi)
        params = TransferParams.one_dim(data, L, lam, psi)
        obj = build_1d_special_set(data, L, _need(args.N, "--N"), psi, params)
        info.update(data=data.to_dict(), params=params.to_dict(), size=len(obj))
    elif kind == "phase":
        from .builders.phase import build_phase_function
        from .signatures import choose_gammas, degeneracy_set

        pat, forms = parse_pattern1d4(_need(args.pattern, "--pattern"))
        gammas = parse_gammas(args.gammas) if args.gammas else choose_gammas(degeneracy_set(pat)).gammas
        f = build_phase_function(pat, _need(args.N, "--N"), parse_fraction(args.alpha), gammas)
        man.write_text("phase.json", f.to_json() + "\n")
        info.update(pattern=forms)
    man.phase("construct", t0)
    if obj is not None:
        path = man.out_dir / f"{kind}.pddset"
        write_set(path, obj)
        man.outputs.append(path)
    man.write_json("construct.json", info)
    print(json.dumps(_strip_timing(info), default=_json_default)[:400])
    return EXIT_OK


def _try_verify(fn, obj):
    from .eqfree import TooLargeForExhaustive

    try:
        return fn(obj)
    except TooLargeForExhaustive:
        return "skipped: too large"


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required here")
    return value


def _load_gridset(path: str):
    from .sets import GridSet, read_set

    try:
        obj = read_set(path)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read set file {path!r}: {exc}") from exc
    if not isinstance(obj, GridSet):
        obj = GridSet.from_points(1, obj.L, [v + 1 for v in obj.elements])  # freesets are 0-based
    return obj


def cmd_count(args, man: RunManifest) -> int:
    from .counting import count_translates, difference_profile

    A = _load_gridset(_need(args.set, "--set"))
    P = parse_points(_need(args.pattern, "--pattern"))
    if args.d is not None:
        if args.d == 0:
            raise UsageError("--d must be nonzero")
        c = count_translates(A, P, args.d, args.wrap)
        man.write_json("count.json", {"d": args.d, "count": c, "pattern": P,
                                      "semantics": "wraparound" if args.wrap else "boxed"})
        print(c)
        return EXIT_OK
    return _write_profile(man, difference_profile(A, P, args.wrap), {"pattern": P}, args.format)


def _write_profile(man: RunManifest, prof, extra: dict, fmt: str) -> int:
    man.write_text("profile.csv", prof.to_csv())
    summary = {**prof.summary(), **extra}
    man.write_json("profile.json", summary)
    print(prof.to_csv() if fmt == "csv" else json.dumps(summary, default=_json_default))
    return EXIT_OK


def cmd_profile(args, man: RunManifest) -> int:
    from .counting import difference_profile

    A = _load_gridset(_need(args.set, "--set"))
    P = parse_points(_need(args.pattern, "--pattern"))
    return _write_profile(man, difference_profile(A, P, args.wrap), {"pattern": P}, args.format)


def cmd_phase(args, man: RunManifest) -> int:
    from .builders.phase import build_phase_function
    from .counting import phase_expectation_profile, predict_phase_expectation
    from .signatures import choose_gammas, degeneracy_set

    pat, forms = parse_pattern1d4(_need(args.pattern, "--pattern"))
    N = _need(args.N, "--N")
    alpha = parse_fraction(args.alpha)
    rep = degeneracy_set(pat)
    choice = choose_gammas(rep)
    gammas = parse_gammas(args.gammas) if args.gammas else choice.gammas
    t0 = time.perf_counter()
    f = build_phase_function(pat, N, alpha, gammas)
    prof = phase_expectation_profile(f, pat)
    man.phase("profile", t0)
    dev = max(abs(v - predict_phase_expectation(pat, gammas, d, N, alpha, rep)) for d, v in prof.per_d.items())
    a4 = float(alpha**4)
    extra = {"pattern": forms, "gammas": [str(g) for g in gammas], "case": rep.case_number,
             "alpha4": a4, "max_over_alpha4": prof.max_value / a4, "max_abs_deviation": dev,
             "tolerance": 10 / math.sqrt(N)}
    return _write_profile(man, prof, extra, args.format)


def cmd_transfer(args, man: RunManifest) -> int:
    from .acceptance import c11_transfer

    res = c11_transfer()
    man.write_json("transfer.json", {"passed": res.passed, "checks": res.checks, **res.measured})
    print(res.line())
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_primes(args, man: RunManifest) -> int:
    from .builders.split_primes import complex_residual, find_split_prime, split_prime_density

    data = find_split_prime(args.min_p)
    dens = split_prime_density(args.limit)
    out = {"data": data.to_dict(), "limit": args.limit, "density": str(dens), "density_float": float(dens),
           "complex_residual": complex_residual()}
    man.write_json("primes.json", out)
    print(json.dumps(out, default=_json_default))
    return EXIT_OK


def cmd_accept(args, man: RunManifest) -> int:
    from .acceptance import report_lines, run_acceptance

    only = set(parse_ints(args.only)) if args.only else None
    t0 = time.perf_counter()
    rep = run_acceptance(args.profile, only)
    man.phase("acceptance", t0)
    man.write_json("acceptance.json", rep)
    for line in report_lines(rep):
        print(line)
    print(f"{rep['passed']}/{rep['total']} criteria passed")
    return EXIT_OK if rep["passed"] == rep["total"] else EXIT_FAIL


COMMANDS = {
    "census": cmd_census, "atlas": cmd_atlas, "curves": cmd_curves, "construct": cmd_construct,
    "count": cmd_count, "profile": cmd_profile, "phase": cmd_phase, "transfer": cmd_transfer,
    "primes": cmd_primes, "accept": cmd_accept,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output directory (default: runs/<command>)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=None)

    parser = argparse.ArgumentParser(prog="pdd", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=tool_version())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", parents=[common], help="signature census and certificates")
    p.add_argument("--bound", type=int, default=40)
    p = sub.add_parser("atlas", parents=[common], help="degeneracy case atlas")
    p.add_argument("--bound", type=int, default=40)
    p = sub.add_parser("curves", parents=[common], help="bounded search on the high-degree curves")
    p.add_argument("--height", type=int, default=200)
    p.add_argument("--primes", default="5,7,11,13", help="primes for the local point counts")

    p = sub.add_parser("construct", parents=[common], help="build an extremal object")
    p.add_argument("kind", choices=("behrend", "tensor", "blowup", "triforce", "nonconvex2d", "special1d", "phase"))
    p.add_argument("--L", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--cyclic", action="store_true")
    p.add_argument("--p", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--coeffs", help="four coefficients, e.g. -1,3,-1,-1")
    p.add_argument("--k1", default="2")
    p.add_argument("--k2", default="3")
    p.add_argument("--G", type=int, help="group order for the sampled set")
    p.add_argument("--m", default="1,1,1,1")
    p.add_argument("--psi", default="1/101")
    p.add_argument("--min-p", type=int, default=13)
    p.add_argument("--pattern")
    p.add_argument("--alpha", default="3/10")
    p.add_argument("--gammas")

    for name in ("count", "profile"):
        p = sub.add_parser(name, parents=[common], help=f"{name} translates of a pattern in a set file")
        p.add_argument("--set", required=True)
        p.add_argument("--pattern", required=True, help="'0,1,2,5' or '0:0,1:0,0:1'")
        p.add_argument("--wrap", action="store_true", help="count in (Z/NZ)^r")
        if name == "count":
            p.add_argument("--d", type=int)

    p = sub.add_parser("phase", parents=[common], help="phase-function expectation profile")
    p.add_argument("--pattern", required=True, help="x,y,z or four points")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--alpha", default="3/10")
    p.add_argument("--gammas")

    sub.add_parser("transfer", parents=[common], help="transfer-lemma scans on the standard fixtures")
    p = sub.add_parser("primes", parents=[common], help="split-prime data and density")
    p.add_argument("--min-p", type=int, default=13)
    p.add_argument("--limit", type=int, default=10**6)
    p = sub.add_parser("accept", parents=[common], help="run the acceptance criteria")
    p.add_argument("--profile", choices=("quick", "full"), default="quick")
    p.add_argument("--only", help="comma-separated criterion ids")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if args.command == "construct" and args.kind == "triforce" and args.seed is None:
        print("pdd: construct triforce requires --seed", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out or Path("runs") / args.command)
    params = {k: v for k, v in vars(args).items() if k not in ("out", "seed", "command")}
    try:
        out.mkdir(parents=True, exist_ok=True)
        man = RunManifest(args.command, params, args.seed, out)
        code = COMMANDS[args.command](args, man)
        man.finish()
        return code
    except UsageError as exc:
        print(f"pdd: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"pdd: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # anything else is a defect in the tool
        print(f"pdd: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEFECT


if __name__ == "__main__":
    sys.exit(main())
