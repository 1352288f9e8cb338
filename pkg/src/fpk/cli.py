"""``fpk``: command-line front end.

Exit codes: 0 when every check passes, 2 when a check fails, 1 on any
operational error (bad input, inapplicable method, unknown name).
"""

import argparse
import datetime
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from . import io as fio
from . import special_frames as sf
from .errors import (
    FpkError,
    InvalidParams,
    LabelsNotDistinct,
    MethodInapplicable,
    MissingLabels,
    NotCommutative,
)
from .frames import frame_summary, gram, orthonormal_basis, random_parseval
from .operators import spectrum_commutative, spectrum_cross_check, spectrum_direct, spectrum_via_gram
from .povm import (
    LabeledFrame,
    commutator_defect,
    fundamental_identity_residual,
    joint_measurability,
    povm_axioms_report,
    ray_decomposition,
    sharp_version,
    smearing_residual,
    three_quarters_margin,
)
from .verify import SUITES, run_suite

EXIT_PASS, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


@dataclass
class RunConfig:
    """``tol=None`` means "use the tolerance each check declares"."""

    tol: Optional[float] = None
    seed: int = 0
    trials: Optional[int] = None
    output: Optional[str] = None
    format: str = "json"
    meta: bool = True
    figures: Optional[str] = None

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise InvalidParams("--tol must be positive")
        if self.trials is not None and self.trials < 1:
            raise InvalidParams("--trials must be at least 1")

    def tol_or(self, default):
        return default if self.tol is None else self.tol


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidParams(f"{self.prog}: {message}")


def _default_tol():
    env = os.environ.get("FPK_TOL")
    if env is None:
        return None
    try:
        return float(env)
    except ValueError as exc:
        raise InvalidParams(f"FPK_TOL={env!r} is not a number") from exc


def _int_list(text):
    """``"3..8"``, ``"4,16,64"`` or ``"5"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InvalidParams(f"cannot read integers from {text!r}") from exc


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InvalidParams(f"cannot read numbers from {text!r}") from exc


def _single_int(text, name):
    vals = _int_list(text)
    if len(vals) != 1:
        raise InvalidParams(f"--{name} takes a single integer here, got {text!r}")
    return vals[0]


# loading ---------------------------------------------------------------------------


def _load_labeled(path, config):
    frame, labels, _ = fio.load_frame(path)
    if labels is None:
        raise MissingLabels(f"{path} has no 'labels'")
    return LabeledFrame(frame, labels, tol=config.tol_or(1e-9))


def _report(command, ok, violation, tol, details):
    return {
        "command": command,
        "pass": bool(ok),
        "max_violation": float(violation),
        "tol": float(tol),
        "details": details,
    }


# commands ------------------------------------------------------------------------


def cmd_frame(args, config):
    frame, labels, extra = fio.load_frame(args.path, drop_zero=args.drop_zero)
    tol = config.tol_or(1e-8)
    if args.action == "gram":
        G = gram(frame)
        if config.format == "csv":
            return None, fio.matrix_to_csv(G)
        return _report("frame gram", True, 0.0, tol, {"gram": np.real_if_close(G)}), None
    summary = frame_summary(frame, tol)
    violation = float(np.linalg.norm(frame.frame_operator() - np.eye(frame.dim), 2))
    summary["labels"] = None if labels is None else labels
    summary.update({k: v for k, v in extra.items() if k == "provenance"})
    ok = summary["is_frame"] and summary["parseval"]
    return _report("frame check", ok, violation, tol, summary), None


def cmd_povm(args, config):
    lf = _load_labeled(args.path, config)
    action = args.action
    if action == "axioms":
        rep = povm_axioms_report(lf, config.tol_or(1e-10))
        return _report("povm axioms", rep["pass"], rep["max_violation"], config.tol_or(1e-10), rep["details"]), None
    if action == "commutative":
        tol = config.tol_or(1e-8)
        details = {"commutator_defect": commutator_defect(lf)}
        try:
            rd = ray_decomposition(lf, tol)
            details["commutative"] = True
            details["basis"] = rd.basis
            details["groups"] = [[{"index": j, "coefficient": c} for j, c in g] for g in rd.groups]
        except LabelsNotDistinct:
            raise
        except FpkError as exc:
            details["commutative"] = False
            details["reason"] = str(exc)
        return _report("povm commutative", details["commutative"], details["commutator_defect"], tol, details), None
    if action == "sharp":
        tol = config.tol_or(1e-10)
        lambdas = None if args.lambdas is None else _float_list(args.lambdas)
        try:
            sv = sharp_version(lf, lambdas)
        except NotCommutative as exc:
            raise MethodInapplicable(f"sharp version needs a commutative POVM: {exc}") from exc
        resid = smearing_residual(lf, sv)
        rows = [
            {"lambda": float(sv.lambdas[i]), "label": float(sv.labels[j]), "mu": float(sv.kernel[i, j])}
            for i in range(sv.kernel.shape[0])
            for j in range(sv.kernel.shape[1])
        ]
        if config.format == "csv":
            return None, fio.table_to_csv(["lambda", "label", "mu"], [[r["lambda"], r["label"], r["mu"]] for r in rows])
        details = {
            "lambdas": sv.lambdas,
            "basis": sv.basis,
            "kernel": rows,
            "sharp_operator": np.real_if_close(sv.sharp_operator),
            "smearing_residual": resid,
        }
        if config.figures:
            from .plotting import kernel_figure

            details["figures"] = [kernel_figure(sv.kernel, sv.lambdas, sv.labels, config.figures)]
        return _report("povm sharp", resid <= tol, resid, tol, details), None
    if action == "identity":
        tol = config.tol_or(1e-10)
        rng = np.random.default_rng(config.seed)
        trials = config.trials or 100
        F = lf.frame
        resid = 0.0
        margin = np.inf
        for _ in range(trials):
            J = np.flatnonzero(rng.integers(2, size=F.k))
            f = rng.normal(size=F.dim) + 1j * rng.normal(size=F.dim)
            f /= np.linalg.norm(f)
            resid = max(resid, fundamental_identity_residual(F, J, f))
            margin = min(margin, three_quarters_margin(F, J, f))
        violation = max(resid, -margin, 0.0)
        details = {"trials": trials, "seed": config.seed, "prng": "PCG64",
                   "max_identity_residual": resid, "min_three_quarters_margin": margin}
        return _report("povm identity", violation <= tol, violation, tol, details), None
    if action == "joint":
        if not args.path2:
            raise InvalidParams("povm joint needs a second frame file")
        lf2 = _load_labeled(args.path2, config)
        tol = config.tol_or(1e-8)
        verdict = joint_measurability(lf, lf2, tol)
        details = {"verdict": verdict.value}
        return _report("povm joint", verdict.value == "JointlyMeasurable", 0.0, tol, details), None
    raise InvalidParams(f"unknown povm action {action!r}")


def cmd_spectrum(args, config):
    lf = _load_labeled(args.path, config)
    scale = 1.0 + float(np.abs(lf.labels).max(initial=0.0))
    method = args.method
    if method == "auto":
        tol = config.tol_or(1e-7) * scale
        rep = spectrum_cross_check(lf, tol)
        spectra = {m: s["eigenvalues"] for m, s in rep["details"]["spectra"].items()}
        report = _report("spectrum auto", rep["pass"], rep["max_violation"], tol, rep["details"])
    else:
        tol = config.tol_or(1e-8) * scale
        if method == "direct":
            sr = spectrum_direct(lf)
        elif method == "gram":
            sr = spectrum_via_gram(lf)
        else:
            try:
                sr = spectrum_commutative(lf)
            except (NotCommutative, LabelsNotDistinct) as exc:
                raise MethodInapplicable(f"commutative route does not apply: {exc}") from exc
        spectra = {sr.method: list(sr.eigenvalues)}
        report = _report(f"spectrum {method}", sr.residual <= tol, sr.residual, tol, sr.to_dict())
    if config.format == "csv":
        rows = [[m, i, float(v)] for m, vals in spectra.items() for i, v in enumerate(vals)]
        return None, fio.table_to_csv(["method", "index", "eigenvalue"], rows)
    if config.figures:
        from .plotting import spectrum_figure

        report["details"]["figures"] = [spectrum_figure(spectra, lf.labels, config.figures)]
    return report, None


def cmd_verify(args, config):
    opts = {}
    if args.k is not None:
        opts["k_values"] = _int_list(args.k)
        if not opts["k_values"] or min(opts["k_values"]) < 3:
            raise InvalidParams("--k values must be at least 3")
    if args.n is not None:
        opts["n_values"] = _int_list(args.n)
    report = run_suite(args.name, seed=config.seed, trials=config.trials,
                       tol=config.tol_or(1e-8), meta=config.meta, **opts)
    if config.format == "csv":
        rows = [[c["name"], c["source"], c["violation"], c["tol"], c["pass"]]
                for c in report["details"]["checks"]]
        return None, fio.table_to_csv(["check", "source", "violation", "tol", "pass"], rows)
    if config.figures:
        from .plotting import checks_figure

        report["details"]["figures"] = [checks_figure(report, config.figures)]
    return report, None


GENERATE_KINDS = ("orthonormal", "random_parseval", "mercedes", "conference", "r3_conference",
                  "kuku1", "rrr1", "conference_matrix")


def cmd_generate(args, config):
    kind = args.kind
    rng = np.random.default_rng(config.seed)
    labels = None if args.labels is None else _float_list(args.labels)
    extra = {"provenance": {"generator": kind, "seed": config.seed}}
    sidecar = None
    if kind == "conference_matrix":
        N = _single_int(args.n or "6", "n")
        C = sf.conference_matrix(N)
        if config.format == "csv":
            return None, fio.matrix_to_csv(C.astype(int))
        return {"conference_matrix": C.astype(int), "N": N}, None
    if config.format == "csv":
        raise InvalidParams("frames are written as JSON; csv is only for conference_matrix")
    real = args.real
    if kind == "orthonormal":
        F = orthonormal_basis(_single_int(args.d or "2", "d"), "real" if real else "complex")
    elif kind == "random_parseval":
        d = _single_int(args.d or "2", "d")
        k = _single_int(args.k or str(d + 1), "k")
        if k < d or d < 1:
            raise InvalidParams("random_parseval needs 1 <= d <= k")
        F = random_parseval(d, k, rng, real)
    elif kind == "mercedes":
        F = sf.example_mercedes_frame() if args.k is None else sf.mercedes_frame(_single_int(args.k, "k"))
    elif kind == "conference":
        F = sf.grassmannian_from_conference(sf.conference_matrix(_single_int(args.n or "6", "n")))
    elif kind == "r3_conference":
        F = sf.r3_conference_frame()
    elif kind == "rrr1":
        lf = sf.rrr1_labeled_frame(_single_int(args.n or "16", "n"))
        F, labels = lf.frame, lf.labels if labels is None else labels
    elif kind == "kuku1":
        if args.groups is None:
            raise InvalidParams("kuku1 needs --groups, e.g. --groups 2,1,3")
        from .povm import commutative_frame

        sizes = _int_list(args.groups)
        if not sizes or min(sizes) < 1:
            raise InvalidParams("--groups must be positive integers")
        F, truth = commutative_frame(sizes, rng, real=real)
        if labels is None:
            labels = list(range(1, F.k + 1))
        sidecar = {
            "basis": truth.basis,
            "groups": [[{"index": j, "coefficient": c} for j, c in g] for g in truth.groups],
        }
    else:
        raise InvalidParams(f"unknown kind {kind!r}; choose from {', '.join(GENERATE_KINDS)}")
    if labels is not None and len(labels) != F.k:
        raise InvalidParams(f"{len(labels)} labels for {F.k} vectors")
    if config.output and sidecar is not None:
        base = config.output[:-5] if config.output.endswith(".json") else config.output
        with open(base + ".rays.json", "w") as fh:
            fh.write(fio.dumps(sidecar) + "\n")
    elif sidecar is not None:
        extra["ray_decomposition"] = sidecar
    return fio.frame_to_dict(F, labels, **extra), None


# argument parsing ----------------------------------------------------------------


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="override the tolerance of the check (env FPK_TOL)")
    common.add_argument("--seed", type=int, default=0, help="seed for PCG64 (default 0)")
    common.add_argument("--trials", type=int, default=None, help="randomized trials")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--no-meta", action="store_true", help="omit timestamps and timings")
    common.add_argument("--figures", default=None, metavar="DIR",
                        help="also render matplotlib figures into DIR")

    p = _Parser(prog="fpk", description="Parseval frames, frame POVMs and their operators.")
    p.add_argument("--version", action="version", version=f"fpk {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("frame", parents=[common], help="check a frame file")
    s.add_argument("action", choices=("check", "gram"))
    s.add_argument("path")
    s.add_argument("--drop-zero", action="store_true", help="discard zero vectors on load")
    s.set_defaults(func=cmd_frame)

    s = sub.add_parser("povm", parents=[common], help="POVM checks on a labeled frame")
    s.add_argument("action", choices=("axioms", "commutative", "sharp", "identity", "joint"))
    s.add_argument("path")
    s.add_argument("path2", nargs="?")
    s.add_argument("--lambdas", default=None, help="comma-separated values in [0, 1]")
    s.set_defaults(func=cmd_povm)

    s = sub.add_parser("spectrum", parents=[common], help="spectrum of H")
    s.add_argument("path")
    s.add_argument("--method", choices=("direct", "gram", "commutative", "auto"), default="auto")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("verify", parents=[common], help="run a named verification suite")
    s.add_argument("name", help=", ".join(SUITES))
    s.add_argument("--k", default=None, help="Mercedes sizes, e.g. 3..8")
    s.add_argument("--n", default=None, help="rrr1 truncation levels, e.g. 4,16,64")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("generate", parents=[common], help="write a named frame")
    s.add_argument("kind", choices=GENERATE_KINDS)
    s.add_argument("--d", default=None)
    s.add_argument("--k", default=None)
    s.add_argument("--n", default=None, help="conference order N or rrr1 truncation")
    s.add_argument("--groups", default=None, help="kuku1 group sizes, e.g. 2,1,3")
    s.add_argument("--labels", default=None, help="comma-separated labels")
    s.add_argument("--real", action="store_true", help="real frame where applicable")
    s.set_defaults(func=cmd_generate)
    return p


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        tol = args.tol if args.tol is not None else _default_tol()
        config = RunConfig(tol, args.seed, args.trials, args.out, args.format,
                           not args.no_meta, args.figures)
        report, text = args.func(args, config)
        if text is not None:
            _emit(text, config.output)
            return EXIT_PASS
        if args.command != "generate":
            if config.meta:
                report["meta"] = {
                    "fpk_version": __version__,
                    "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
                    "elapsed_ms": (time.perf_counter() - t0) * 1000.0,
                }
        _emit(fio.dumps(report) + "\n", config.output)
        if args.command == "generate":
            return EXIT_PASS
        return EXIT_PASS if report["pass"] else EXIT_FAIL
    except (FpkError, OSError) as exc:
        print(f"fpk: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
