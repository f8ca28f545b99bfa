"""Command-line front end.

Subcommands expose the library computations with CSV or structured-text
output, a reproducibility manifest written beside every output file, and
the exit-code contract 0 = success, 2 = validation error, 3 = cross-check
failure, 4 = resource cap.
"""

from __future__ import annotations

import functools
import hashlib
import json
import platform
import sys
import time
from fractions import Fraction
from pathlib import Path

import click
import numpy as np

from . import __version__
from .bsets import (
    KIND_SQUAREFREE,
    SUBSET_CAP,
    parse_bset_spec,
)
from .covering import (
    EXACT_COVER_CAP,
    build_eps_grid,
    covering_grid,
    covering_rows_to_csv,
)
from .distance import (
    d1_oracle_periodic,
    d1_shift,
    d1_shift_coprime,
    distance_profile,
    eta_word,
)
from .errors import BesicovError, CrossCheckError, ResourceCapError, ValidationError
from .families import R_RULE_KAPPA
from .intervals import RationalInterval
from .rotation import (
    build_window,
    code_orbit,
    sublevel_masses,
    verify_p3_slope,
    window_to_text,
)
from .scaling import (
    fit_report,
    squarefree_rows,
    synthetic_rows,
    toeplitz_rows,
)
from .families import make_toeplitz


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"not a rational number: {text!r}") from e


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
        if hi < lo:
            raise ValidationError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


class _Run:
    """Collects inputs/outputs so the manifest can be written at exit."""

    def __init__(self):
        self.t0 = time.time()
        self.inputs: dict[str, str] = {}
        self.outputs: list[str] = []
        self.caps: dict[str, int] = {}

    def read_input(self, path: str) -> str:
        data = Path(path).read_bytes()
        self.inputs[path] = hashlib.sha256(data).hexdigest()
        return data.decode("utf-8")

    def write_output(self, path: str, text: str):
        Path(path).write_text(text, encoding="utf-8")
        self.outputs.append(path)

    def finish(self, out: str | None):
        if out is None or not self.outputs:
            return
        manifest = {
            "command": " ".join(sys.argv),
            "inputs": self.inputs,
            "caps": self.caps,
            "versions": {
                "besicov": __version__,
                "python": platform.python_version(),
                "numpy": np.__version__,
            },
            "wall_time_s": round(time.time() - self.t0, 3),
            "outputs": self.outputs,
        }
        path = Path(out).with_suffix(Path(out).suffix + ".manifest.json")
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _emit(run: _Run, out: str | None, text: str):
    if out:
        run.write_output(out, text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)
    run.finish(out)


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*a, **kw):
        try:
            return fn(*a, **kw)
        except BesicovError as e:
            click.echo(f"error: {e}", err=True)
            raise SystemExit(e.exit_code)

    return wrapper


@click.group()
def main():
    """Besicovitch distance / covering-number toolkit."""


@main.command()
@click.option("--bset", "bset_path", required=True, type=click.Path(exists=True))
@click.option("--r", "r_spec", required=True, help="shift r or range A..B")
@click.option("--cross-check/--no-cross-check", default=False)
@click.option("--tail", type=int, default=None, help="family truncation for enclosures")
@click.option("--format", "fmt", type=click.Choice(["csv", "structured"]), default="csv")
@click.option("--out", type=click.Path(), default=None)
@_handle_errors
def distance(bset_path, r_spec, cross_check, tail, fmt, out):
    """Distances d_1(eta, sigma^r eta) per shift, formula vs oracle."""
    run = _Run()
    run.caps["subset_cap"] = SUBSET_CAP
    b = parse_bset_spec(run.read_input(bset_path))
    rs = _parse_range(r_spec)
    rows = []
    if b.is_finite:
        word = None
        if cross_check:
            word = eta_word(b)
        for r in rs:
            v = d1_shift(b, r)
            if word is not None:
                o = d1_oracle_periodic(word, r)
                agree = v == o
                if not agree:
                    raise CrossCheckError(
                        f"formula {v} and oracle {o} disagree at r={r}"
                    )
                rows.append((r, v, o, "yes"))
            else:
                rows.append((r, v, None, ""))
        if fmt == "csv":
            lines = ["r,numerator,denominator,decimal,oracle_numerator,oracle_denominator,agree"]
            for r, v, o, agree in rows:
                onum = o.numerator if o is not None else ""
                oden = o.denominator if o is not None else ""
                lines.append(
                    f"{r},{v.numerator},{v.denominator},{float(v):.12g},{onum},{oden},{agree}"
                )
            text = "\n".join(lines) + "\n"
        else:
            text = "".join(
                f"r: {r}\nvalue: {v} ({float(v):.12g})\n"
                + (f"oracle: {o}\nagree: {agree}\n" if o is not None else "")
                for r, v, o, agree in rows
            )
    else:
        lines = (
            ["r,lo_num,lo_den,hi_num,hi_den,mid_decimal"] if fmt == "csv" else []
        )
        text_parts = []
        for r in rs:
            iv = d1_shift_coprime(b, r, truncation=tail)
            if fmt == "csv":
                lines.append(
                    f"{r},{iv.lo.numerator},{iv.lo.denominator},"
                    f"{iv.hi.numerator},{iv.hi.denominator},{float(iv.mid):.12g}"
                )
            else:
                text_parts.append(f"r: {r}\nenclosure: {iv} (width {float(iv.width):.3g})\n")
        text = ("\n".join(lines) + "\n") if fmt == "csv" else "".join(text_parts)
    _emit(run, out, text)


@main.command()
@click.option("--bset", "bset_path", required=True, type=click.Path(exists=True))
@click.option("--eps", "eps_text", default=None, help="single rational eps")
@click.option("--eps-grid", "grid_text", default=None, help="log:N for an N-point grid")
@click.option("--exact/--no-exact", default=True)
@click.option("--exact-cap", type=int, default=EXACT_COVER_CAP)
@click.option("--out", type=click.Path(), default=None)
@_handle_errors
def covering(bset_path, eps_text, grid_text, exact, exact_cap, out):
    """Covering-number sandwich, separated-set and exact cover per eps."""
    run = _Run()
    run.caps["exact_cover_cap"] = exact_cap
    b = parse_bset_spec(run.read_input(bset_path))
    if not b.is_finite:
        raise ValidationError("covering bounds need a finite (explicit) B-set")
    p = distance_profile(b)
    if eps_text:
        grid = [_parse_fraction(eps_text)]
    elif grid_text:
        if not grid_text.startswith("log:"):
            raise ValidationError("eps grid syntax: log:N")
        grid = build_eps_grid(p, int(grid_text[4:]))
    else:
        raise ValidationError("need --eps or --eps-grid")
    if exact and p.period > exact_cap:
        raise ResourceCapError(
            f"period {p.period} above --exact-cap {exact_cap}; pass --no-exact"
        )
    rows = covering_grid(p, grid, with_exact=exact, exact_cap=exact_cap)
    _emit(run, out, covering_rows_to_csv(rows))


@main.command()
@click.option(
    "--family",
    type=click.Choice(["toeplitz", "squarefree", "synthetic"]),
    required=True,
)
@click.option("--kappa", default=None, help="rational kappa for the Toeplitz r-rule")
@click.option("--n", "n_spec", default=None, help="level range A..B")
@click.option(
    "--scale", type=click.Choice(["dimensional", "power-exp"]), default="dimensional"
)
@click.option("--slope", default="2", help="synthetic family slope")
@click.option("--fit-drop", type=int, default=2, help="largest-eps points dropped")
@click.option("--tail-extra", type=int, default=10)
@click.option("--out", type=click.Path(), default=None)
@_handle_errors
def scaling(family, kappa, n_spec, scale, slope, fit_drop, tail_extra, out):
    """Family eps rows plus a fitted scaling exponent."""
    run = _Run()
    lines = ["n,eps_lo,eps_hi,log_scale,bound_kind"]
    if family == "synthetic":
        rows = synthetic_rows(_parse_fraction(slope))
        pts = [(e, c) for e, c in rows]
        for i, (e, c) in enumerate(rows, 1):
            lines.append(f"{i},{e},{e},{float(c):.12g},synthetic")
        rep = fit_report(pts, "dimensional", drop_largest=fit_drop)
    elif family == "toeplitz":
        if not n_spec:
            raise ValidationError("toeplitz rows need --n A..B")
        ns = _parse_range(n_spec)
        kap = _parse_fraction(kappa) if kappa else None
        fam = make_toeplitz(
            max(ns),
            kappa=kap,
            r_rule=R_RULE_KAPPA if kap is not None else "index",
        )
        rows = toeplitz_rows(fam, ns, tail_extra=tail_extra)
        for r in rows:
            lines.append(f"{r.n},{r.upper_eps.lo},{r.upper_eps.hi},{r.log2_ell:.9g},upper")
            lines.append(f"{r.n},{r.lower_eps_c.lo},{r.lower_eps_c.hi},{r.log2_ell:.9g},lower")
        expected = float((1 + kap) / kap) if kap is not None else None
        rep = fit_report(
            [(r.upper_eps, r.ell) for r in rows],
            "dimensional",
            drop_largest=fit_drop,
            expected=expected,
        )
    else:
        if not n_spec:
            raise ValidationError("squarefree rows need --n A..B")
        ns = _parse_range(n_spec)
        if len(ns) > 40:  # thin long ranges geometrically
            picked = sorted(
                {ns[0], ns[-1]}
                | {ns[int(len(ns) * (i / 24.0))] for i in range(25)}
            )
        else:
            picked = ns
        rows = squarefree_rows(picked)
        for r in rows:
            lines.append(f"{r.n},{r.eps.lo},{r.eps.hi},{r.log2_ell:.9g},eps")
        if scale == "power-exp":
            pts = [(r.eps, r.log2_ell) for r in rows]
            rep = fit_report(pts, "power-exp", drop_largest=fit_drop, expected=1.0)
        else:
            pts = [(r.eps, Fraction(2) ** max(1, int(r.log2_ell))) for r in rows]
            rep = fit_report(pts, "dimensional", drop_largest=fit_drop)
    text = "\n".join(lines) + "\n" + rep.summary()
    _emit(run, out, text)


@main.group()
def rotation():
    """Golden-rotation window commands."""


@rotation.command("build")
@click.option("--s", "s_text", required=True)
@click.option("--stage", type=int, required=True)
@click.option("--out", type=click.Path(), default=None)
@_handle_errors
def rotation_build(s_text, stage, out):
    """Construct the stage-n window and export its exact arcs."""
    run = _Run()
    st = build_window(_parse_fraction(s_text), stage)
    _emit(run, out, window_to_text(st))


@rotation.command("sublevel")
@click.option("--s", "s_text", required=True)
@click.option("--stage", type=int, required=True)
@click.option("--eps-grid", "grid_text", required=True, help="log:N:LO:HI")
@click.option(
    "--mode", type=click.Choice(["auto", "exact", "adaptive"]), default="auto"
)
@click.option("--out", type=click.Path(), default=None)
@_handle_errors
def rotation_sublevel(s_text, stage, grid_text, mode, out):
    """Certified sublevel masses g(eps) on a log grid."""
    run = _Run()
    parts = grid_text.split(":")
    if len(parts) != 4 or parts[0] != "log":
        raise ValidationError("eps grid syntax: log:N:LO:HI")
    n = int(parts[1])
    lo, hi = float(_parse_fraction(parts[2])), float(_parse_fraction(parts[3]))
    if not (0 < lo < hi):
        raise ValidationError("need 0 < LO < HI")
    grid = [
        Fraction(lo * (hi / lo) ** (i / (n - 1))).limit_denominator(10**12)
        for i in range(n)
    ] if n > 1 else [Fraction(lo).limit_denominator(10**12)]
    st = build_window(_parse_fraction(s_text), stage)
    gs = sublevel_masses(st.window, grid, mode=mode)
    lines = ["eps,g_lo,g_hi"]
    for e, g in zip(grid, gs):
        lines.append(f"{float(e):.12g},{float(g.lo):.12g},{float(g.hi):.12g}")
    _emit(run, out, "\n".join(lines) + "\n")


@rotation.command("code")
@click.option("--s", "s_text", required=True)
@click.option("--stage", type=int, required=True)
@click.option("--h", "h_text", default=None, help="exact rational start point")
@click.option("--random-h", is_flag=True, default=False)
@click.option("--seed", type=int, default=0)
@click.option("--len", "length", type=int, default=1000)
@click.option("--out", type=click.Path(), default=None)
@_handle_errors
def rotation_code(s_text, stage, h_text, random_h, seed, length, out):
    """Emit the 0/1 coding of an orbit through the stage window."""
    import random as _random

    run = _Run()
    st = build_window(_parse_fraction(s_text), stage)
    if random_h:
        rng = _random.Random(seed)
        h = Fraction(rng.randrange(10**12), 10**12)
    elif h_text is not None:
        h = _parse_fraction(h_text)
    else:
        raise ValidationError("need --h or --random-h")
    bits = code_orbit(st.window, h, 0, length - 1)
    _emit(run, out, "".join(str(int(b)) for b in bits) + "\n")


@rotation.command("p3")
@click.option("--s", "s_text", required=True)
@click.option("--stage", type=int, default=14)
@click.option("--decades", type=float, default=2.0)
@click.option("--points", type=int, default=12)
@click.option("--out", type=click.Path(), default=None)
@_handle_errors
def rotation_p3(s_text, stage, decades, points, out):
    """Sublevel scaling slope against the expected s/(s-1)."""
    run = _Run()
    rep = verify_p3_slope(_parse_fraction(s_text), stage, decades=decades, n_points=points)
    lines = ["eps,g_lo,g_hi"]
    for e, g in rep.points:
        lines.append(f"{float(e):.12g},{float(g.lo):.12g},{float(g.hi):.12g}")
    _emit(run, out, "\n".join(lines) + "\n" + rep.summary())


if __name__ == "__main__":
    main()
