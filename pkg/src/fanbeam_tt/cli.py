"""Command-line front end.

Exit codes: 0 success, 1 failed consistency check, 2 usage error, 3 bad or
unreadable input file.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import boundary, consistency, data, fiber, forward, phantoms, reconstruction

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_FORMAT = 0, 1, 2, 3

BASIS_TAGS = {"B": "B", "B'": "Bprime", "u": "U", "v": "V", "u'": "Uprime", "v'": "Vprime"}
PROJECTIONS = {
    "i0": boundary.project_range_i0,
    "iperp-core": boundary.project_range_iperp_core,
    "v+": lambda d: boundary.project_vpm(d, "+"),
    "v-": lambda d: boundary.project_vpm(d, "-"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _open_out(path):
    return sys.stdout if path == "-" else open(path, "w", newline="")


def cmd_phantom(args) -> int:
    preset = phantoms.experiment_preset(args.preset, args.nx, args.ny)
    data.write_tensor(preset.tensor, args.out)
    if args.potential:
        if preset.potential is None:
            print("preset has no scalar potential", file=sys.stderr)
            return EXIT_USAGE
        data.write_image(preset.potential, args.potential)
    return EXIT_OK


def cmd_forward(args) -> int:
    tensor = data.read_tensor(args.inp)
    sino = forward.xray(tensor, args.nbeta, args.nalpha)
    if args.noise > 0:
        rng = np.random.default_rng(args.seed)
        shape = sino.values.shape
        sino = sino + args.noise * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    data.write_sinogram(sino, args.out)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    sino = data.read_sinogram(args.inp)
    cfg = reconstruction.ReconstructionConfig(r_cut=args.rcut, nx=args.nx, evaluation=args.evaluation)
    if args.order % 2:
        rec = reconstruction.reconstruct_odd(sino, args.order // 2, cfg)
        tensor = rec.tensor
        if args.potential:
            data.write_image(rec.potential, args.potential)
    else:
        tensor = reconstruction.reconstruct_even(sino, args.order // 2, cfg)
    data.write_tensor(tensor, args.out)
    return EXIT_OK


def cmd_project(args) -> int:
    sino = data.read_sinogram(args.inp)
    data.write_sinogram(PROJECTIONS[args.range](sino), args.out)
    return EXIT_OK


def cmd_moments(args) -> int:
    sino = data.read_sinogram(args.inp)
    if args.kmax <= args.nmax:
        print("--kmax must exceed --nmax", file=sys.stderr)
        return EXIT_USAGE
    if args.order % 2:
        print("--order must be even", file=sys.stderr)
        return EXIT_USAGE
    sino = consistency.strip_side_ranges(sino, args.order)
    report = consistency.moment_conditions(sino, args.nmax, args.kmax, args.tol)
    if args.report:
        fh = _open_out(args.report)
        try:
            report.write_csv(fh)
        finally:
            if fh is not sys.stdout:
                fh.close()
    verdict = "pass" if report.passed else "fail"
    print(f"moments {verdict}: max residual {report.max_residual:.3e} (tolerance {report.tolerance:g})", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_coeffs(args) -> int:
    sino = data.read_sinogram(args.inp)
    data.write_csv(fiber.analyze(sino, BASIS_TAGS[args.basis]), args.out)
    return EXIT_OK


def cmd_diff(args) -> int:
    a = data.read_sinogram(args.a)
    b = data.read_sinogram(args.b)
    if a.shape != b.shape:
        raise data.ValidationError(f"grid mismatch {a.shape} vs {b.shape}")
    d = a - b
    if args.norm == "l2":
        absolute, scale = d.norm(), a.norm()
    else:
        absolute, scale = float(np.max(np.abs(d.values))), float(np.max(np.abs(a.values)))
    relative = absolute / scale if scale > 0 else (0.0 if absolute == 0 else math.inf)
    fh = _open_out(args.report)
    try:
        fh.write("norm,absolute,relative\n")
        fh.write(f"{args.norm},{absolute:.17g},{relative:.17g}\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    if args.tol is not None and not relative < args.tol:
        return EXIT_FAIL
    return EXIT_OK


def _read_any(path, component):
    head = Path(path).read_bytes()[:6]
    if head.startswith(data.SINO_MAGIC.encode()):
        return data.read_sinogram(path)
    if head.startswith(data.IMAGE_MAGIC.encode()):
        return data.read_image(path)
    if head.startswith(data.TENSOR_MAGIC.encode()):
        tensor = data.read_tensor(path)
        if component is None:
            raise data.ValidationError("rendering a tensor file needs --component")
        return tensor.component(component)
    raise data.FormatError(f"unrecognised file type {head!r}")


def cmd_render(args) -> int:
    obj = _read_any(args.inp, args.component)
    try:
        data.render_pgm(obj, args.channel, args.out)
    except ValueError as exc:
        raise data.ValidationError(str(exc)) from exc
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--threads", type=_positive_int, default=argparse.SUPPRESS, help="worker threads (default: all cores)"
    )
    p = _Parser(prog="fantt", description="Fan-beam tensor tomography on the unit disk.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("phantom", parents=[common], help="write an experiment preset tensor")
    s.add_argument("--preset", type=int, choices=(1, 2, 3), required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--nx", type=_positive_int, default=300)
    s.add_argument("--ny", type=_positive_int, default=None)
    s.add_argument("--potential", help="also write the scalar potential (preset 2)")
    s.set_defaults(func=cmd_phantom)

    s = sub.add_parser("forward", parents=[common], help="X-ray transform of a tensor file")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--nbeta", type=_positive_int, default=600)
    s.add_argument("--nalpha", type=_positive_int, default=300)
    s.add_argument("--noise", type=float, default=0.0, help="std. dev. of each of re/im of additive noise")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_forward)

    s = sub.add_parser("reconstruct", parents=[common], help="reconstruct the canonical tensor of a given order")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--rcut", type=float, default=0.97)
    s.add_argument("--nx", type=_positive_int, default=None)
    s.add_argument("--evaluation", choices=("series", "cauchy"), default="series")
    s.add_argument("--potential", help="odd orders: also write the central potential")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("project", parents=[common], help="apply a range projector")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--range", choices=tuple(PROJECTIONS), required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("moments", parents=[common], help="moment-condition consistency test")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--nmax", type=int, default=6)
    s.add_argument("--kmax", type=int, default=16)
    s.add_argument("--tol", type=float, default=consistency.DEFAULT_TOL)
    s.add_argument("--order", type=int, default=0, help="even tensor order the data come from (default 0)")
    s.add_argument("--report", default=None, help="CSV path or '-' for stdout")
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("coeffs", parents=[common], help="coefficients in a data-space basis")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--basis", choices=tuple(BASIS_TAGS), required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_coeffs)

    s = sub.add_parser("diff", parents=[common], help="compare two sinograms")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--norm", choices=("l2", "linf"), default="l2")
    s.add_argument("--report", default="-")
    s.add_argument("--tol", type=float, default=None, help="exit 1 if the relative difference is not below this")
    s.set_defaults(func=cmd_diff)

    s = sub.add_parser("render", parents=[common], help="write a 16-bit PGM of a sinogram, image or tensor component")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--channel", choices=("re", "im", "abs"), default="re")
    s.add_argument("--component", type=int, default=None)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = getattr(args, "threads", None)
    if threads:
        import numba

        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
    try:
        return args.func(args)
    except (data.FormatError, data.ValidationError, OSError) as exc:
        print(f"fantt: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except ValueError as exc:
        print(f"fantt: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
