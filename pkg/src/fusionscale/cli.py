"""Command-line entry point: ``fusionscale <command> ...``.

Exit codes: 0 for success or an affirmative verdict, 1 for a negative
verdict (``scale``, ``check``), 2 for input errors.
"""

import argparse
import hashlib
import os
import sys
import time

import numpy as np

from . import __version__
from .errors import FusionError, InvalidSpec, ParameterOutOfRange
from .fixtures import build_fixture
from .frame_io import dumps, frame_to_document, parse_frame_file, parse_document
from .fusion import FusionFrame, classify, excess, is_dual
from .numerics import ToleranceConfig
from .scaling import solve_scaling
from .subspace import Subspace
from .theorems import CHECKERS, run_check

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(f"{self.prog}: {message}")


def _digest(*paths):
    h = hashlib.sha256()
    for p in paths:
        with open(p, "rb") as fh:
            h.update(fh.read())
    return "sha256:" + h.hexdigest()


def _tolerances(args, n):
    tol = ToleranceConfig.for_dim(n)
    residual = tol.residual_tol
    env = os.environ.get("FF_TOL")
    if env:
        try:
            residual = float(env)
        except ValueError:
            raise InvalidSpec(f"FF_TOL must be a number, got {env!r}") from None
    if getattr(args, "tol", None) is not None:
        residual = args.tol
    eps = tol.positivity_eps
    if getattr(args, "min_weight", None) is not None:
        eps = args.min_weight
    if not (residual > 0 and eps > 0):
        raise InvalidSpec("tolerances must be positive")
    return ToleranceConfig(residual_tol=residual, rank_tol=tol.rank_tol, positivity_eps=eps)


def _report(argv, paths, payload, started):
    out = {"command": list(argv), "input_digest": _digest(*paths) if paths else None}
    out.update(payload)
    out["wall_time_s"] = time.perf_counter() - started
    return out


def _cmd_analyze(args, argv, started):
    F, _ = parse_frame_file(args.file)
    tol = _tolerances(args, F.ambient_dim)
    analysis = classify(F, tol)
    return _report(argv, [args.file], {"analysis": analysis.to_dict()}, started), EXIT_OK


def _cmd_scale(args, argv, started):
    F, _ = parse_frame_file(args.file)
    sol = solve_scaling(F, _tolerances(args, F.ambient_dim))
    code = EXIT_OK if sol.strictly_scalable else EXIT_NEGATIVE
    return _report(argv, [args.file], {"scaling": sol.to_dict()}, started), code


def _cmd_excess(args, argv, started):
    F, _ = parse_frame_file(args.file)
    e, K = excess(F)
    payload = {"excess": e, "kernel_basis": K.T.tolist(), "synthesis_columns": int(K.shape[0])}
    return _report(argv, [args.file], payload, started), EXIT_OK


def _cmd_dual(args, argv, started):
    V, _ = parse_frame_file(args.file_v)
    W, _ = parse_frame_file(args.file_w)
    verdict, residual = is_dual(V, W, _tolerances(args, W.ambient_dim))
    payload = {"dual": {"is_dual": verdict, "residual": residual}}
    return _report(argv, [args.file_v, args.file_w], payload, started), EXIT_OK


def _cmd_check(args, argv, started):
    F, dec = parse_frame_file(args.file)
    sol = solve_scaling(F, _tolerances(args, F.ambient_dim))
    rep = run_check(args.theorem, F, dec, sol)
    code = EXIT_OK if rep.verdict_consistent_with_solver else EXIT_NEGATIVE
    payload = {"theorem": rep.to_dict(), "scaling": sol.to_dict()}
    return _report(argv, [args.file], payload, started), code


def _split_params(pairs, extra):
    params = {}
    for item in pairs or []:
        if "=" not in item:
            raise ParameterOutOfRange(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        params[k.strip()] = v.strip()
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--"):
            raise ParameterOutOfRange(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            i += 1
        elif i + 1 < len(extra):
            value = extra[i + 1]
            i += 2
        else:
            raise ParameterOutOfRange(f"missing value for {tok}")
        params[key] = value
    return params


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _cmd_example(args, argv, started, extra):
    params = _split_params(args.param, extra)
    fx = build_fixture(args.name, **params)
    note = f"example {fx.name}" + (f" with {fx.params}" if fx.params else "")
    doc = frame_to_document(fx.frame, fx.decomposition, note)
    _write(dumps(doc, pretty=True), args.output)
    return None, EXIT_OK


def _parse_dims(text):
    try:
        dims = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InvalidSpec(f"--subspace-dims must be comma-separated integers, got {text!r}") from None
    if not dims:
        raise InvalidSpec("--subspace-dims is empty")
    return dims


def generate_frame(dim, dims, seed, orthogonal):
    """Random frame document: Gaussian subspaces, or blocks of one random orthogonal matrix."""
    if dim < 1:
        raise InvalidSpec("--dim must be positive")
    if any(d < 1 or d > dim for d in dims):
        raise InvalidSpec(f"every subspace dimension must lie in [1, {dim}]")
    if orthogonal and sum(dims) > dim:
        raise InvalidSpec(f"orthogonal subspaces need sum of dimensions <= {dim}, got {sum(dims)}")
    rng = np.random.default_rng(seed)
    spaces = []
    if orthogonal:
        Q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        start = 0
        for d in dims:
            spaces.append(Subspace(Q[:, start:start + d]))
            start += d
    else:
        for d in dims:
            spaces.append(Subspace.span(list(rng.standard_normal((d, dim)))))
    F = FusionFrame(spaces, labels=[f"V{i + 1}" for i in range(len(dims))])
    kind = "orthogonal" if orthogonal else "random"
    return frame_to_document(F, note=f"gen {kind} dim={dim} dims={dims} seed={seed}")


def _cmd_gen(args, argv, started):
    doc = generate_frame(args.dim, _parse_dims(args.subspace_dims), args.seed, args.orthogonal)
    parse_document(doc)
    _write(dumps(doc, pretty=True), args.output)
    return None, EXIT_OK


def build_parser():
    p = _Parser(prog="fusionscale", description="Fusion-frame analysis and weight scaling.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--pretty", action="store_true", help="indent the JSON report")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def tol_flags(sp, min_weight=False):
        sp.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="indent the JSON report")
        sp.add_argument("--tol", type=float, help="residual tolerance (overrides FF_TOL)")
        if min_weight:
            sp.add_argument("--min-weight", type=float, help="smallest coefficient counted as positive")

    sp = sub.add_parser("analyze", help="frame bounds, excess and structural flags")
    sp.add_argument("file")
    tol_flags(sp)

    sp = sub.add_parser("scale", help="decide weight-scalability (exit 0 iff strictly scalable)")
    sp.add_argument("file")
    tol_flags(sp, min_weight=True)

    sp = sub.add_parser("excess", help="excess and kernel basis of the synthesis matrix")
    sp.add_argument("file")
    sp.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="indent the JSON report")

    sp = sub.add_parser("dual", help="test whether V is an alternate dual of W")
    sp.add_argument("file_v")
    sp.add_argument("file_w")
    tol_flags(sp)

    sp = sub.add_parser("check", help="evaluate a structural theorem against the solver")
    sp.add_argument("file")
    sp.add_argument("--theorem", required=True, help="one of: " + ", ".join(CHECKERS))
    tol_flags(sp, min_weight=True)

    sp = sub.add_parser("example", help="write a built-in example frame file")
    sp.add_argument("name")
    sp.add_argument("--param", action="append", metavar="KEY=VALUE")
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("gen", help="write a random frame file")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--subspace-dims", required=True, help="comma-separated, e.g. 2,2,1")
    sp.add_argument("--seed", type=int, default=0)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--orthogonal", action="store_true")
    mode.add_argument("--random", action="store_true")
    sp.add_argument("-o", "--output")
    return p


_HANDLERS = {
    "analyze": _cmd_analyze,
    "scale": _cmd_scale,
    "excess": _cmd_excess,
    "dual": _cmd_dual,
    "check": _cmd_check,
    "gen": _cmd_gen,
}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.perf_counter()
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        if extra and args.command != "example":
            raise _ArgumentError(f"fusionscale: unrecognized arguments: {' '.join(extra)}")
        if args.command == "example":
            report, code = _cmd_example(args, argv, started, extra)
        else:
            report, code = _HANDLERS[args.command](args, argv, started)
    except _ArgumentError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except (FusionError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"fusionscale: error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_INPUT
    if report is not None:
        sys.stdout.write(dumps(report, pretty=args.pretty) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
