"""Command line front end: srg <task> [flags].

Tasks
  lti-srg    exact graph region of a transfer function (hull + Nyquist overlay)
  nl-sample  sampled graph of a static nonlinearity over biased sinusoids
  df         describing-function graph over sinusoid amplitude pairs
  check      certify properties (gain bound, positivity, quadratic constraints)
  compose    region algebra (negative feedback of two regions)
  plot       render previously written CSV/JSON artifacts to SVG

Exit codes: 0 success / property holds, 1 property fails, 2 usage or config
error, 3 numerical error (for example a pole on the imaginary axis).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import SrgError
from .hyperbolic import (
    DEFAULT_FREQ_POINTS,
    DEFAULT_FREQ_RANGE,
    hull_from_dict,
    hull_to_dict,
    lti_srg_region,
    nyquist_locus,
)
from .operators import RationalTF, StaticNL, describing_fn, static_nl
from .plotting import PlotArtifacts, render_svg
from .regions import (
    CircleCurve,
    Disc,
    DiscComplement,
    EmptyRegion,
    FullPlane,
    GainBound,
    HalfPlane,
    HullRegion,
    IncrementalPositivity,
    IqcProperty,
    IqcSpec,
    Region,
    certify,
    feedback,
    iqc_region,
    region_from_dict,
    region_to_dict,
    report_to_dict,
)
from .sampler import (
    DEFAULT_H,
    SrgCloud,
    cloud_from_csv,
    cloud_to_csv,
    sample_df,
    sample_lti,
    sample_static_nl,
)
from .signals import DEFAULT_N

_TF_PATTERN = re.compile(r"^\s*\[([^\]]*)\]\s*,\s*\[([^\]]*)\]\s*$")


class ConfigError(Exception):
    """Invalid flag value or combination; maps to exit code 2."""


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".srg-tmp-")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump_json(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode()


def _parse_float_list(text: str, count: Optional[int] = None) -> List[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc
    if count is not None and len(values) != count:
        raise ConfigError(f"expected {count} comma-separated numbers, got {text!r}")
    return values


def parse_tf(text: str) -> RationalTF:
    """Parse "[num],[den]" (ascending coefficients) or operator JSON."""
    text = text.strip()
    if text.startswith("{"):
        return operator_from_dict(json.loads(text), expect="tf")
    match = _TF_PATTERN.match(text)
    if not match:
        raise ConfigError(
            f'--tf expects "[n0,n1,...],[d0,d1,...]" with ascending coefficients, got {text!r}'
        )
    num = _parse_float_list(match.group(1))
    den = _parse_float_list(match.group(2))
    try:
        return RationalTF(tuple(num), tuple(den))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_nl(text: str) -> StaticNL:
    text = text.strip()
    if text.startswith("{"):
        return operator_from_dict(json.loads(text), expect="nl")
    try:
        return static_nl(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def operator_from_dict(data: dict, expect: Optional[str] = None):
    kind = data.get("type")
    if expect is not None and kind != expect:
        raise ConfigError(f"operator JSON has type {kind!r}, expected {expect!r}")
    if kind == "tf":
        try:
            return RationalTF(tuple(data["num"]), tuple(data["den"]))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad tf JSON: {exc}") from exc
    if kind == "nl":
        try:
            return static_nl(data["kind"])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad nl JSON: {exc}") from exc
    raise ConfigError(f"operator JSON must have type 'tf' or 'nl', got {kind!r}")


def operator_to_dict(op) -> dict:
    if isinstance(op, RationalTF):
        return {"type": "tf", "num": list(op.num), "den": list(op.den)}
    if isinstance(op, StaticNL):
        return {"type": "nl", "kind": op.kind if op.kind != "custom" else op.name}
    raise TypeError(f"cannot serialize operator {type(op).__name__}")


def parse_grid(text: str, log: bool = False, positive: bool = False) -> Tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"grid must be lo:hi:n with numeric fields, got {text!r}") from exc
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise ConfigError(f"grid range must be ordered, got {text!r}")
    if n < 2:
        raise ConfigError(f"grid needs at least 2 points, got {text!r}")
    if (log or positive) and lo <= 0:
        raise ConfigError(f"grid lower bound must be positive, got {text!r}")
    return lo, hi, n


def grid_values(spec: Tuple[float, float, int], log: bool = False) -> np.ndarray:
    lo, hi, n = spec
    if log:
        return np.logspace(np.log10(lo), np.log10(hi), n)
    return np.linspace(lo, hi, n)


def parse_region(text: str) -> Region:
    """Region shorthand: rhp, halfplane:c[:le], disc:c,rho, disccomp:c,rho,
    circle:c,rho, full, empty, or inline region JSON."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return region_from_dict(json.loads(text))
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad region JSON: {exc}") from exc
    lowered = text.lower()
    if lowered == "rhp":
        return HalfPlane(0.0)
    if lowered == "full":
        return FullPlane()
    if lowered == "empty":
        return EmptyRegion()
    if ":" not in lowered:
        raise ConfigError(f"unknown region shorthand {text!r}")
    name, _, args = lowered.partition(":")
    if name == "halfplane":
        fields = args.split(":")
        c = _parse_float_list(fields[0], 1)[0]
        sense = fields[1] if len(fields) > 1 else "ge"
        if sense not in ("ge", "le"):
            raise ConfigError(f"halfplane sense must be ge or le, got {sense!r}")
        return HalfPlane(c, sense)
    try:
        if name == "disc":
            c, rho = _parse_float_list(args, 2)
            return Disc(c, rho)
        if name in ("disccomp", "disc_complement"):
            c, rho = _parse_float_list(args, 2)
            return DiscComplement(c, rho)
        if name == "circle":
            c, rho = _parse_float_list(args, 2)
            return CircleCurve(c, rho)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown region shorthand {text!r}")


def _region_label(r: Region) -> str:
    data = region_to_dict(r)
    variant = data.pop("variant")
    data.pop("notes", None)
    inner = ",".join(f"{k}={v}" for k, v in sorted(data.items()) if not isinstance(v, (list, dict)))
    return f"{variant}({inner})" if inner else variant


def default_samples() -> int:
    env = os.environ.get("SRG_DEFAULT_N")
    if env is None:
        return DEFAULT_N
    try:
        n = int(env)
    except ValueError as exc:
        raise ConfigError(f"SRG_DEFAULT_N must be an integer, got {env!r}") from exc
    if n < 8 or n & (n - 1):
        raise ConfigError(f"SRG_DEFAULT_N must be a power of two >= 8, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srg",
        description="Scaled relative graphs: sampling, exact LTI regions, region algebra, certification.",
    )
    sub = parser.add_subparsers(dest="task", required=True)

    def add_outputs(p):
        p.add_argument("--svg", metavar="PATH", help="write an SVG figure")
        p.add_argument("--csv", metavar="PATH", help="write the point cloud CSV (re,im,gain,theta,prov)")
        p.add_argument("--json", metavar="PATH", help="write the JSON artifact")
        p.add_argument("--view", choices=("euclidean", "klein"), default="euclidean",
                       help="figure view (default euclidean)")

    def add_sampling(p):
        p.add_argument("--harmonics", type=int, default=DEFAULT_H, metavar="H",
                       help=f"harmonic cap for truncated outputs (default {DEFAULT_H})")
        p.add_argument("--samples", type=int, default=None, metavar="N",
                       help=f"samples per period, power of two (default {DEFAULT_N}; "
                            "env SRG_DEFAULT_N overrides)")
        p.add_argument("--seed", type=int, default=0, help="seed for random input families")

    p = sub.add_parser("lti-srg", help="exact graph region of a transfer function")
    p.add_argument("--tf", required=True, metavar="TF",
                   help='transfer function "[num],[den]", ascending coefficients')
    p.add_argument("--grid-freq", metavar="LO:HI:N", default=None,
                   help="log-spaced frequency grid (default "
                        f"{DEFAULT_FREQ_RANGE[0]:g}:{DEFAULT_FREQ_RANGE[1]:g}:{DEFAULT_FREQ_POINTS})")
    add_outputs(p)

    p = sub.add_parser("nl-sample", help="sample the graph of a static nonlinearity")
    p.add_argument("--nl", required=True, metavar="KIND",
                   help="nonlinearity kind: saturation, deadzone, relu")
    p.add_argument("--grid-bias", metavar="LO:HI:N", default=None,
                   help="bias grid for inputs k + a sin (default -3:3:25)")
    p.add_argument("--grid-amp", metavar="LO:HI:N", default=None,
                   help="amplitude grid (default 0.16:4:25)")
    p.add_argument("--iqc", action="append", default=None, metavar="A,B,C,D",
                   help="overlay the region of this quadratic constraint on the figure")
    add_sampling(p)
    add_outputs(p)

    p = sub.add_parser("df", help="describing-function graph over amplitude pairs")
    p.add_argument("--nl", required=True, metavar="KIND")
    p.add_argument("--grid-amp", metavar="LO:HI:N", default=None,
                   help="amplitude grid (default 0.16:4:25)")
    add_outputs(p)

    p = sub.add_parser("check", help="certify incremental properties of an operator")
    p.add_argument("--tf", metavar="TF", default=None)
    p.add_argument("--nl", metavar="KIND", default=None)
    p.add_argument("--gain", action="append", type=float, default=None, metavar="G",
                   help="check incremental gain bound G (repeatable)")
    p.add_argument("--positive", action="store_true", help="check incremental positivity")
    p.add_argument("--iqc", action="append", default=None, metavar="A,B,C,D",
                   help="check the quadratic-constraint region (repeatable)")
    p.add_argument("--grid-bias", metavar="LO:HI:N", default=None)
    p.add_argument("--grid-amp", metavar="LO:HI:N", default=None)
    add_sampling(p)
    add_outputs(p)

    p = sub.add_parser("compose", help="region algebra")
    p.add_argument("--feedback", nargs=2, metavar=("R1", "R2"), required=True,
                   help="negative feedback of two regions (shorthand or JSON)")
    add_outputs(p)

    p = sub.add_parser("plot", help="render saved artifacts to SVG")
    p.add_argument("--csv", metavar="PATH", help="cloud CSV to read")
    p.add_argument("--json", metavar="PATH", help="region or hull JSON to read")
    p.add_argument("--svg", metavar="PATH", required=True, help="output SVG path")
    p.add_argument("--view", choices=("euclidean", "klein"), default="euclidean")
    return parser


def _samples_or_default(args) -> int:
    n = args.samples if getattr(args, "samples", None) is not None else default_samples()
    if n < 8 or n & (n - 1):
        raise ConfigError(f"--samples must be a power of two >= 8, got {n}")
    return n


def _bias_amp_pairs(bias_spec, amp_spec) -> np.ndarray:
    biases = grid_values(bias_spec)
    amps = grid_values(amp_spec)
    if np.any(amps <= 0):
        raise ConfigError("amplitude grid must be positive")
    kk, aa = np.meshgrid(biases, amps, indexing="ij")
    combos = np.column_stack([kk.ravel(), aa.ravel()])
    i_idx, j_idx = np.triu_indices(combos.shape[0], k=1)
    return np.column_stack([combos[i_idx], combos[j_idx]])


def _parse_iqcs(texts) -> List[IqcSpec]:
    specs = []
    for text in texts or []:
        a, b, c, d = _parse_float_list(text, 4)
        try:
            specs.append(IqcSpec(a, b, c, d))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return specs


def _write_outputs(args, *, summary: dict, cloud: Optional[SrgCloud] = None,
                   artifacts: Optional[PlotArtifacts] = None) -> List[str]:
    written = []
    if args.json:
        _atomic_write(args.json, _dump_json(summary))
        written.append(args.json)
    if args.csv:
        if cloud is None:
            raise ConfigError(f"task {args.task!r} has no CSV output")
        _atomic_write(args.csv, cloud_to_csv(cloud).encode())
        written.append(args.csv)
    if args.svg:
        if artifacts is None or artifacts.empty():
            raise ConfigError("nothing to plot: artifact list is empty")
        _atomic_write(args.svg, render_svg(artifacts, args.view))
        written.append(args.svg)
    return written


def _echo(written: Sequence[str]) -> None:
    for path in written:
        print(f"wrote {path}")


def run_lti_srg(args) -> int:
    tf = parse_tf(args.tf)
    if args.grid_freq:
        spec = parse_grid(args.grid_freq, log=True)
        omegas = grid_values(spec, log=True)
        grid_meta = {"lo": spec[0], "hi": spec[1], "points": spec[2], "scale": "log"}
    else:
        omegas = None
        grid_meta = {"lo": DEFAULT_FREQ_RANGE[0], "hi": DEFAULT_FREQ_RANGE[1],
                     "points": DEFAULT_FREQ_POINTS, "scale": "log"}
    locus = nyquist_locus(tf, omegas)
    hull = lti_srg_region(tf, omegas)
    upper = np.where(locus.imag < 0, np.conj(locus), locus)
    omega_labels = ["0"] + [f"{w:g}" for w in (omegas if omegas is not None
                                               else grid_values((grid_meta["lo"], grid_meta["hi"],
                                                                 grid_meta["points"]), log=True))] + ["inf"]
    cloud = SrgCloud(upper, tuple(f"nyquist:omega={w}" for w in omega_labels),
                     tf.describe(), {"family": "nyquist", **grid_meta})
    summary = {
        "task": "lti-srg",
        "operator": operator_to_dict(tf),
        "grid": grid_meta,
        "hull": hull_to_dict(hull),
    }
    artifacts = PlotArtifacts(regions=[("SRG region", HullRegion(hull))],
                              loci=[("Nyquist", locus)])
    written = _write_outputs(args, summary=summary, cloud=cloud, artifacts=artifacts)
    degen = hull.degenerate or "none"
    print(f"lti-srg: {tf.describe()} hull vertices={len(hull.vertices)} degenerate={degen}")
    _echo(written)
    return 0


def run_nl_sample(args) -> int:
    phi = parse_nl(args.nl)
    bias_spec = parse_grid(args.grid_bias) if args.grid_bias else (-3.0, 3.0, 25)
    amp_spec = parse_grid(args.grid_amp, positive=True) if args.grid_amp else (4.0 / 25, 4.0, 25)
    n = _samples_or_default(args)
    if args.harmonics < 1:
        raise ConfigError(f"--harmonics must be >= 1, got {args.harmonics}")
    grid = _bias_amp_pairs(bias_spec, amp_spec)
    cloud = sample_static_nl(phi, grid=grid, h=args.harmonics, n=n)
    summary = {
        "task": "nl-sample",
        "operator": operator_to_dict(phi),
        "spec": {
            "family": "biased_sinusoid",
            "bias": {"lo": bias_spec[0], "hi": bias_spec[1], "points": bias_spec[2]},
            "amp": {"lo": amp_spec[0], "hi": amp_spec[1], "points": amp_spec[2]},
            "h": args.harmonics,
            "n": n,
            "seed": args.seed,
        },
        "points": len(cloud),
        "skipped": cloud.skipped,
    }
    regions = [(_region_label(iqc_region(q)), iqc_region(q)) for q in _parse_iqcs(args.iqc)]
    artifacts = PlotArtifacts(clouds=[(f"{phi.kind} samples", cloud)], regions=regions)
    written = _write_outputs(args, summary=summary, cloud=cloud, artifacts=artifacts)
    print(f"nl-sample: {phi.kind} points={len(cloud)} skipped={cloud.skipped}")
    _echo(written)
    return 0


def run_df(args) -> int:
    phi = parse_nl(args.nl)
    amp_spec = parse_grid(args.grid_amp, positive=True) if args.grid_amp else (4.0 / 25, 4.0, 25)
    amplitudes = grid_values(amp_spec)
    df = describing_fn(phi)
    cloud = sample_df(phi, amplitudes, df=df)
    psi = [df(a) for a in amplitudes]
    summary = {
        "task": "df",
        "operator": operator_to_dict(phi),
        "amplitudes": [float(a) for a in amplitudes],
        "psi": [[p.real, p.imag] for p in psi],
        "points": len(cloud),
    }
    artifacts = PlotArtifacts(clouds=[(f"df({phi.kind}) samples", cloud)])
    written = _write_outputs(args, summary=summary, cloud=cloud, artifacts=artifacts)
    print(f"df: {phi.kind} points={len(cloud)}")
    _echo(written)
    return 0


def run_check(args) -> int:
    if (args.tf is None) == (args.nl is None):
        raise ConfigError("check needs exactly one of --tf or --nl")
    props = []
    for g in args.gain or []:
        if g <= 0:
            raise ConfigError(f"--gain must be positive, got {g}")
        props.append(GainBound(g))
    if args.positive:
        props.append(IncrementalPositivity())
    props.extend(IqcProperty(q) for q in _parse_iqcs(args.iqc))
    if not props:
        raise ConfigError("check needs at least one of --gain, --positive, --iqc")

    n = _samples_or_default(args)
    if args.tf is not None:
        op = parse_tf(args.tf)
        cloud = sample_lti(op, seed=args.seed, n=n)
        spec_meta = dict(cloud.spec)
    else:
        op = parse_nl(args.nl)
        bias_spec = parse_grid(args.grid_bias) if args.grid_bias else (-3.0, 3.0, 25)
        amp_spec = parse_grid(args.grid_amp, positive=True) if args.grid_amp else (4.0 / 25, 4.0, 25)
        grid = _bias_amp_pairs(bias_spec, amp_spec)
        cloud = sample_static_nl(op, grid=grid, h=args.harmonics, n=n)
        spec_meta = dict(cloud.spec)

    report = certify(cloud, props)
    summary = {
        "task": "check",
        "operator": operator_to_dict(op),
        "spec": spec_meta,
        "report": report_to_dict(report),
    }
    regions = [(res.name, res.region) for res in report.results]
    artifacts = PlotArtifacts(clouds=[(describe_label(op), cloud)], regions=regions)
    written = _write_outputs(args, summary=summary, cloud=cloud, artifacts=artifacts)
    for res in report.results:
        verdict = "PASS" if res.passed else "FAIL"
        extra = ""
        if res.certificate.violations:
            worst = res.certificate.violations[0]
            extra = (f" first-violation index={worst.index} "
                     f"z={worst.z.real:.6g}{worst.z.imag:+.6g}j prov={worst.provenance}")
        print(f"{verdict} {res.name}: {len(res.certificate.violations)} violations "
              f"of {res.certificate.total} points{extra}")
    _echo(written)
    return 0 if report.passed else 1


def describe_label(op) -> str:
    return op.describe() if hasattr(op, "describe") else str(op)


def run_compose(args) -> int:
    r1 = parse_region(args.feedback[0])
    r2 = parse_region(args.feedback[1])
    result = feedback(r1, r2)
    summary = {
        "task": "compose",
        "operation": "feedback",
        "operands": [region_to_dict(r1), region_to_dict(r2)],
        "result": region_to_dict(result),
    }
    artifacts = PlotArtifacts(regions=[
        (f"H1: {_region_label(r1)}", r1),
        (f"H2: {_region_label(r2)}", r2),
        (f"feedback: {_region_label(result)}", result),
    ])
    written = _write_outputs(args, summary=summary, artifacts=artifacts)
    print(f"compose feedback: {_region_label(result)}")
    _echo(written)
    return 0


def run_plot(args) -> int:
    artifacts = PlotArtifacts()
    if args.csv:
        with open(args.csv, "r", encoding="utf-8") as handle:
            cloud = cloud_from_csv(handle.read(), operator=os.path.basename(args.csv))
        artifacts.clouds.append((os.path.basename(args.csv), cloud))
    if args.json:
        with open(args.json, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        region = _region_from_artifact(data)
        artifacts.regions.append((os.path.basename(args.json), region))
    if artifacts.empty():
        raise ConfigError("plot needs --csv and/or --json input")
    _atomic_write(args.svg, render_svg(artifacts, args.view))
    print(f"wrote {args.svg}")
    return 0


def _region_from_artifact(data: dict) -> Region:
    if "variant" in data:
        return region_from_dict(data)
    if "vertices" in data and "edges" in data:
        return HullRegion(hull_from_dict(data))
    if "hull" in data:
        return HullRegion(hull_from_dict(data["hull"]))
    if "result" in data:
        return region_from_dict(data["result"])
    raise ConfigError("JSON artifact does not contain a region or hull")


_TASKS = {
    "lti-srg": run_lti_srg,
    "nl-sample": run_nl_sample,
    "df": run_df,
    "check": run_check,
    "compose": run_compose,
    "plot": run_plot,
}


_GRID_FLAGS = {"--grid-bias", "--grid-amp", "--grid-freq"}


def _normalize_argv(argv: Sequence[str]) -> List[str]:
    """Join grid flags with their values so negative bounds parse (-2:2:8)."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _GRID_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_normalize_argv(sys.argv[1:] if argv is None else list(argv)))
    try:
        return _TASKS[args.task](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SrgError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
