"""``vspforms report``: tab-separated tables plus matplotlib figures written to a directory."""

from __future__ import annotations

import csv
import json
import math
import sys
from contextlib import contextmanager
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from vspforms.chow import sarkisov_numerology  # noqa: E402
from vspforms.conics import QuadraticForm, descend_rational_point, has_rational_point, polar_line  # noqa: E402
from vspforms.errors import ContractError  # noqa: E402
from vspforms.fields import QuadraticElement, format_scalar  # noqa: E402
from vspforms.numtheory import is_squarefree  # noqa: E402
from vspforms.serialize import decode_point, decode_quadratic_form, encode  # noqa: E402

PALETTE = ["#ca0020", "#f4a582", "#92c5de", "#0571b0"]

RC = {
    "font.family": "serif",
    "mathtext.fontset": "stix",
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.prop_cycle": matplotlib.cycler(color=PALETTE),
    "figure.dpi": 150,
    "savefig.bbox": "tight",
}


@contextmanager
def _style():
    with matplotlib.rc_context(RC):
        yield


def _write_tsv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def legendre_sweep(bound: int, c: int) -> list[dict]:
    """Decide aX^2 + bY^2 + cZ^2 for squarefree a, b with |a|, |b| <= bound coprime to each other and to c."""
    rows = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            if 0 in (a, b) or not (is_squarefree(a) and is_squarefree(b)):
                continue
            if math.gcd(a, b) != 1 or math.gcd(a, c) != 1 or math.gcd(b, c) != 1:
                continue
            cert = has_rational_point(QuadraticForm.diagonal(a, b, c))
            obstruction = cert.obstruction or {}
            rows.append(
                {
                    "a": a,
                    "b": b,
                    "c": c,
                    "status": cert.status,
                    "witness": encode(cert.witness),
                    "obstruction": obstruction.get("kind", ""),
                    "prime": obstruction.get("prime", ""),
                }
            )
    return rows


def report_sweep(outdir: Path, bound: int = 12, c: int = -1) -> dict:
    if not is_squarefree(c):
        raise ContractError("c must be a nonzero squarefree integer", pointer="/c")
    rows = legendre_sweep(bound, c)
    tsv = outdir / "legendre_sweep.tsv"
    _write_tsv(
        tsv,
        ["a", "b", "c", "status", "witness", "obstruction", "prime"],
        [
            [r["a"], r["b"], r["c"], r["status"], ":".join(r["witness"]) if r["witness"] else "", r["obstruction"], r["prime"]]
            for r in rows
        ],
    )
    size = 2 * bound + 1
    grid = np.full((size, size), np.nan)
    for r in rows:
        grid[r["b"] + bound, r["a"] + bound] = 1.0 if r["status"] == "solvable" else 0.0
    png = outdir / "legendre_sweep.png"
    with _style():
        fig, ax = plt.subplots(figsize=(5, 4.5))
        cmap = matplotlib.colors.ListedColormap([PALETTE[0], PALETTE[3]])
        cmap.set_bad("#eeeeee")
        extent = (-bound - 0.5, bound + 0.5, -bound - 0.5, bound + 0.5)
        ax.imshow(np.ma.masked_invalid(grid), origin="lower", cmap=cmap, vmin=0, vmax=1, extent=extent)
        ax.set_xlabel("$a$")
        ax.set_ylabel("$b$")
        ax.set_title(f"$aX^2+bY^2{c:+d}Z^2$: solvable (blue) vs obstructed (red)")
        fig.savefig(png)
        plt.close(fig)
    solvable = sum(r["status"] == "solvable" for r in rows)
    return {"files": [str(tsv), str(png)], "forms": len(rows), "solvable": solvable, "insolvable": len(rows) - solvable}


def _to_float(x) -> float:
    if isinstance(x, QuadraticElement):
        if x.d < 0:
            raise ContractError("point is not real; nothing to draw", pointer="/point")
        return float(x.a) + float(x.b) * math.sqrt(x.d)
    return float(x)


def report_descent(outdir: Path, payload: dict) -> dict:
    f = decode_quadratic_form(payload)
    if f.field != "QQ":
        raise ContractError("descent report needs a form over QQ", pointer="/gram")
    p = decode_point(payload["point"], "/point")
    out = descend_rational_point(f, p.coords)
    gram = np.array([[float(x) for x in row] for row in f.gram.rows])
    tangents = [polar_line(f, p.coords), polar_line(f, p.conjugate().coords)]

    png = outdir / "descent.png"
    with _style():
        fig, ax = plt.subplots(figsize=(5, 5))
        span = 4.0
        xs = np.linspace(-span, span, 600)
        X, Y = np.meshgrid(xs, xs)
        pts = np.stack([X, Y, np.ones_like(X)])
        values = np.einsum("i...,ij,j...->...", pts, gram, pts)
        ax.contour(X, Y, values, levels=[0], colors=[PALETTE[3]])
        for k, line in enumerate(tangents):
            a, b, c = (_to_float(v) for v in line.coords)
            if abs(b) > 1e-12:
                ax.plot(xs, -(a * xs + c) / b, color=PALETTE[k % 2], lw=1, label=f"tangent {k + 1}")
            else:
                ax.axvline(-c / a, color=PALETTE[k % 2], lw=1, label=f"tangent {k + 1}")
        for q, marker, label in ((p, "o", "point"), (p.conjugate(), "o", "conjugate")):
            x, y, z = (_to_float(v) for v in q.coords)
            if abs(z) > 1e-12:
                ax.plot(x / z, y / z, marker, color="black", ms=4)
        x, y, z = (float(v) for v in out.coords)
        if z != 0:
            ax.plot(x / z, y / z, "*", color=PALETTE[0], ms=10, label="descended point")
        ax.set_xlim(-span, span)
        ax.set_ylim(-span, span)
        ax.set_aspect("equal")
        ax.set_xlabel("$x/z$")
        ax.set_ylabel("$y/z$")
        ax.legend(frameon=False, fontsize=8)
        fig.savefig(png)
        plt.close(fig)
    tsv = outdir / "descent.tsv"
    _write_tsv(
        tsv,
        ["object", "coordinates"],
        [
            ["point", ":".join(format_scalar(v) for v in p.coords)],
            ["tangent_1", ":".join(format_scalar(v) for v in tangents[0].coords)],
            ["tangent_2", ":".join(format_scalar(v) for v in tangents[1].coords)],
            ["descended", ":".join(encode(out))],
        ],
    )
    return {"files": [str(tsv), str(png)], "point": encode(out)}


def report_sarkisov(outdir: Path) -> dict:
    numbers = sarkisov_numerology()
    tsv = outdir / "sarkisov.tsv"
    _write_tsv(tsv, ["quantity", "value"], [[k, format_scalar(v)] for k, v in numbers.items()])
    png = outdir / "sarkisov.png"
    with _style():
        fig, ax = plt.subplots(figsize=(6, 3.5))
        labels = list(numbers)
        values = [float(numbers[k]) for k in labels]
        colors = [PALETTE[3] if v >= 0 else PALETTE[0] for v in values]
        ax.bar(labels, values, color=colors)
        ax.axhline(0, color="black", lw=0.6)
        for i, v in enumerate(values):
            ax.annotate(f"{v:g}", (i, v), ha="center", va="bottom" if v >= 0 else "top", fontsize=8)
        ax.set_ylabel("intersection number")
        fig.savefig(png)
        plt.close(fig)
    return {"files": [str(tsv), str(png)], "values": encode(numbers)}


def add_report_parser(groups, common) -> None:
    rp = groups.add_parser("report", help="write TSV tables and PNG figures")
    actions = rp.add_subparsers(dest="action", required=True)
    for name, help_text in (
        ("sweep", "Legendre decision over a grid of diagonal forms"),
        ("descent", "real picture of tangent descent (payload: gram/form and point)"),
        ("sarkisov", "intersection numbers of the link"),
    ):
        sp = actions.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("--outdir", default=".", help="directory for .tsv and .png files")
        if name == "sweep":
            sp.add_argument("--bound", type=int, default=12)
            sp.add_argument("--c", type=int, default=-1)


def run_report(args) -> tuple[dict, int]:
    from vspforms.cli import EXIT_CONTRACT, EXIT_OK, _envelope

    response = _envelope(f"report {args.action}")
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        if args.action == "sweep":
            result = report_sweep(outdir, args.bound, args.c)
        elif args.action == "descent":
            source = getattr(args, "input", None)
            text = Path(source).read_text(encoding="utf-8") if source and source != "-" else sys.stdin.read()
            payload = json.loads(text)
            if "point" not in payload:
                raise ContractError("descent report needs 'point'", pointer="/point")
            result = report_descent(outdir, payload)
        else:
            result = report_sarkisov(outdir)
    except ContractError as exc:
        response["error"] = {"pointer": exc.pointer, "message": str(exc)}
        return response, EXIT_CONTRACT
    response.update(status="ok", result=result)
    return response, EXIT_OK
