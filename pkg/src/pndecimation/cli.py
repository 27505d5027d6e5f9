"""Command-line front end.

Exit codes: 0 success, 1 verification/decimation failure, 2 usage error,
3 size cap exceeded.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .decimation import decimate, fractal_eigenvalue, harmonic_extend, parse_signs
from .errors import (
    CapExceededError,
    ConvergenceError,
    DiscriminantError,
    ForbiddenEigenvalueError,
    LevelMismatchError,
    OracleMismatchError,
)
from .geometry import EmbeddingConfig, export_point_cloud, hausdorff_dimension, regular_simplex
from .graph import build_graph, energy, graph_to_json, renormalized_energy
from .address import format_address
from .spectrum import classify_spectrum, full_spectrum, spectrum_csv, verify_decimation

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _positive(kind):
    def conv(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
        return v

    return conv


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _alphabet(text):
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("n must be >= 2")
    return v


_SIGN_LETTERS = str.maketrans("+-", "pm")


def _signs(text):
    text = text.translate(str.maketrans("pm", "+-"))
    try:
        parse_signs(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return text


def _emit(args, text):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def _table(header, rows, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    lines = ["# " + " ".join(header)]
    lines.extend(" ".join(str(c) for c in r) for r in rows)
    return "\n".join(lines) + "\n"


def _resolve_seed(n, level, text):
    """Decimal literal or ``oracle:k`` (k-th smallest oracle eigenvalue, 0-based)."""
    if text.startswith("oracle:"):
        k = int(text.split(":", 1)[1])
        spec = full_spectrum(n, level)
        if not 0 <= k < len(spec):
            raise UsageError(f"oracle index {k} out of range 0..{len(spec) - 1}")
        return float(spec.eigenvalues[k]), spec.vectors[:, k]
    return float(text), None


def _boundary_values(n, text):
    vals = [float(x) for x in text.split(",")]
    if len(vals) != n:
        raise UsageError(f"--boundary needs {n} comma-separated values")
    return np.array(vals)


def _harmonic_chain(n, level, boundary):
    # V_0 is sorted by tail, so index k is the point k k k ...
    g_prev = build_graph(n, 0)
    u = np.asarray(boundary, dtype=np.float64)
    chain = [(g_prev, u)]
    for m in range(1, level + 1):
        g = build_graph(n, m)
        u = harmonic_extend(g_prev, g, u)
        chain.append((g, u))
        g_prev = g
    return chain


def cmd_graph(args):
    g = build_graph(args.n, args.level)
    if args.format == "json":
        _emit(args, graph_to_json(g) + "\n")
    else:
        rows = [(format_address(g.vertices[i], g.n), format_address(g.vertices[j], g.n)) for i, j in g.edges]
        _emit(args, _table(["source", "target"], rows, args.format))
    return EXIT_OK


def cmd_spectrum(args):
    spec = full_spectrum(args.n, args.level)
    if args.format == "json":
        _emit(args, _dump({
            "n": args.n,
            "level": args.level,
            "eigenvalues": spec.eigenvalues.tolist(),
            "residuals": spec.residuals.tolist(),
        }))
    else:
        rows = [(k, repr(float(l)), repr(float(r))) for k, (l, r) in enumerate(zip(spec.eigenvalues, spec.residuals))]
        _emit(args, _table(["index", "lambda", "residual"], rows, args.format))
    return EXIT_OK


def cmd_classify(args):
    lo = args.from_level if args.from_level is not None else args.level
    reports = [classify_spectrum(args.n, m) for m in range(max(lo, 1), args.level + 1)]
    if args.format == "csv":
        _emit(args, spectrum_csv(reports))
        return EXIT_OK
    if args.format == "columns":
        text = spectrum_csv(reports).replace(",", " ")
        _emit(args, "# " + text)
        return EXIT_OK
    doc = []
    for rep in reports:
        doc.append({
            "n": rep.n,
            "level": rep.level,
            "entries": [vars(e) for e in rep.entries],
            "unmatched": rep.count("Unmatched"),
        })
    _emit(args, _dump(doc))
    return EXIT_OK


def cmd_decimate(args):
    lam, vec = _resolve_seed(args.n, args.seed_level, args.seed_lambda)
    target = args.target_level if args.target_level is not None else args.seed_level + len(args.signs)
    trace = decimate(
        args.n,
        args.seed_level,
        lam,
        args.signs,
        target,
        seed_function=vec if args.extend else None,
        raise_on_forbidden=False,
    )
    if args.extend and trace.residuals is None:
        raise UsageError("--extend needs an oracle:k seed")
    _emit(args, _dump(trace.to_dict()))
    ok = trace.valid and (trace.residuals is None or all(r <= args.tol * (1 + l) for r, l in zip(trace.residuals, trace.lambdas)))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_limit(args):
    lam, _ = _resolve_seed(args.n, args.seed_level, args.seed_lambda)
    try:
        res = fractal_eigenvalue(
            args.n, args.seed_level, lam, args.signs, tol=args.tol,
            max_level=args.max_level, precision=args.precision,
        )
    except (ConvergenceError, ForbiddenEigenvalueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.format == "json":
        doc = res.trace.to_dict()
        doc.update(limit=res.value, achieved_tol=res.achieved_tol, levels_used=res.levels_used, monotone=res.monotone)
        _emit(args, _dump(doc))
    else:
        _emit(args, repr(res.value) + "\n")
    return EXIT_OK


def cmd_energy(args):
    boundary = _boundary_values(args.n, args.boundary)
    rows = []
    for g, u in _harmonic_chain(args.n, args.level, boundary):
        e = energy(g, u)
        rows.append({"level": g.level, "energy": e, "renormalized": renormalized_energy(args.n, g.level, e)})
    if args.format == "json":
        _emit(args, _dump({"n": args.n, "boundary": boundary.tolist(), "levels": rows}))
    else:
        _emit(args, _table(["level", "energy", "renormalized"],
                           [(r["level"], repr(r["energy"]), repr(r["renormalized"])) for r in rows], args.format))
    return EXIT_OK


def cmd_harmonic(args):
    boundary = _boundary_values(args.n, args.boundary)
    g, u = _harmonic_chain(args.n, args.level, boundary)[-1]
    addrs = [format_address(v, g.n) for v in g.vertices]
    if args.format == "json":
        _emit(args, _dump({"n": args.n, "level": args.level, "addresses": addrs, "values": u.tolist()}))
    else:
        _emit(args, _table(["address", "value"], [(a, repr(float(x))) for a, x in zip(addrs, u)], args.format))
    return EXIT_OK


def cmd_embed(args):
    cfg = EmbeddingConfig.from_file(args.anchors) if args.anchors else regular_simplex(args.n)
    if cfg.n != args.n:
        raise UsageError("anchor file has the wrong number of points")
    values = None
    if args.boundary:
        values = _harmonic_chain(args.n, args.level, _boundary_values(args.n, args.boundary))[-1][1]
    elif args.eigenfunction is not None:
        spec = full_spectrum(args.n, args.level)
        values = spec.vectors[:, args.eigenfunction]
    cloud = export_point_cloud(args.n, args.level, cfg, values)
    if args.format == "json":
        _emit(args, _dump(cloud.to_dict()))
    elif args.format == "csv":
        _emit(args, cloud.to_csv())
    else:
        _emit(args, cloud.to_columns())
    if args.edges_out:
        with open(args.edges_out, "w") as fh:
            fh.write(cloud.edges_text())
    return EXIT_OK


def cmd_dim(args):
    d = hausdorff_dimension(args.n)
    _emit(args, _dump({"n": args.n, "hausdorff_dimension": d}) if args.format == "json" else repr(d) + "\n")
    return EXIT_OK


def cmd_verify(args):
    rep = verify_decimation(args.n, args.max_level, args.tol)
    _emit(args, _dump(rep.summary()))
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="pndecimation", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        sp.add_argument("--n", type=_alphabet, required=True)
        sp.add_argument("--format", choices=["json", "csv", "columns"], default="json")
        sp.add_argument("--out", help="write to this file instead of stdout")
        sp.add_argument("--oracle-cap", type=_positive(int), help="max interior size for dense eigensolves")
        sp.add_argument("--vertex-cap", type=_positive(int), help="max vertex count for graph construction")
        return sp

    sp = add("graph", cmd_graph, "export Gamma_m")
    sp.add_argument("--level", type=_nonneg_int, required=True)

    sp = add("spectrum", cmd_spectrum, "dense Dirichlet spectrum of Gamma_m")
    sp.add_argument("--level", type=_positive(int), required=True)

    sp = add("classify", cmd_classify, "tag eigenvalues by their decimation parent")
    sp.add_argument("--level", type=_positive(int), required=True)
    sp.add_argument("--from-level", type=_positive(int), help="classify every level from here to --level")

    for name, func, help in (
        ("decimate", cmd_decimate, "eigenvalue genealogy from a seed"),
        ("limit", cmd_limit, "renormalized eigenvalue limit"),
    ):
        sp = add(name, func, help)
        sp.add_argument("--seed-level", type=_positive(int), required=True)
        sp.add_argument("--seed-lambda", required=True, help="decimal value or oracle:k")
        sp.add_argument("--signs", type=_signs, default="", help="path of roots, e.g. +-- (letters p/m also accepted)")
        sp.add_argument("--tol", type=_positive(float), default=1e-10)
    sub.choices["decimate"].add_argument("--target-level", type=_nonneg_int)
    sub.choices["decimate"].add_argument("--extend", action="store_true",
                                         help="carry the oracle eigenvector along (needs oracle:k)")
    sub.choices["limit"].add_argument("--max-level", type=_positive(int), default=200)
    sub.choices["limit"].add_argument("--precision", type=_positive(int), help="decimal digits (mpmath)")

    for name, func, help in (
        ("energy", cmd_energy, "energies of the harmonic extension of boundary data"),
        ("harmonic", cmd_harmonic, "harmonic extension of boundary data to V_m"),
    ):
        sp = add(name, func, help)
        sp.add_argument("--level", type=_nonneg_int, required=True)
        sp.add_argument("--boundary", required=True, help="n comma-separated values on V_0")

    sp = add("embed", cmd_embed, "point cloud of V_m in R^(n-1)")
    sp.add_argument("--level", type=_nonneg_int, required=True)
    sp.add_argument("--anchors", help="text file with n rows of n-1 coordinates")
    sp.add_argument("--edges-out", help="also write the edge list here")
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--boundary", help="attach the harmonic extension of these V_0 values")
    grp.add_argument("--eigenfunction", type=_nonneg_int, help="attach the k-th oracle eigenvector")

    add("dim", cmd_dim, "Hausdorff dimension of K_n")

    sp = add("verify", cmd_verify, "check decimation against the dense oracle")
    sp.add_argument("--max-level", type=_positive(int), required=True)
    sp.add_argument("--tol", type=_positive(float), default=1e-8)
    return p


@contextlib.contextmanager
def _caps(oracle, vertex):
    saved = {k: os.environ.get(k) for k in ("PN_ORACLE_CAP", "PN_VERTEX_CAP")}
    try:
        if oracle is not None:
            os.environ["PN_ORACLE_CAP"] = str(oracle)
        if vertex is not None:
            os.environ["PN_VERTEX_CAP"] = str(vertex)
        yield
    finally:
        for k, v in saved.items():
            if v is None:
                os.environ.pop(k, None)
            else:
                os.environ[k] = v


def _shield_signs(argv):
    # argparse drops a value of exactly "--" and reads "-+" as an option;
    # spell sign strings with letters before parsing, _signs maps them back
    out, k = [], 0
    while k < len(argv):
        tok = argv[k]
        if tok.startswith("--signs="):
            tok = "--signs=" + tok[8:].translate(_SIGN_LETTERS)
        elif tok == "--signs" and k + 1 < len(argv) and argv[k + 1] and set(argv[k + 1]) <= set("+-"):
            out.append(tok)
            k += 1
            tok = argv[k].translate(_SIGN_LETTERS)
        out.append(tok)
        k += 1
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _shield_signs(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    with _caps(args.oracle_cap, args.vertex_cap):
        try:
            return args.func(args)
        except CapExceededError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CAP
        except (UsageError, LevelMismatchError, OracleMismatchError, DiscriminantError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE


def main():
    sys.exit(run())
