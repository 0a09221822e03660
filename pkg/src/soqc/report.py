"""Serialization of verification reports: canonical JSON, markdown and figures."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .cyclotomic import CycNum
from .errors import ReportIOError, ResourceLimit
from .verify import Report


def dumps_json(report: Report, timing: bool = False) -> str:
    """Byte-stable JSON: sorted keys, canonical cyclotomic coefficients."""
    return json.dumps(report.to_json(timing), sort_keys=True, indent=2) + "\n"


def _cyc_str(data) -> str:
    return repr(CycNum.from_json(data)) if isinstance(data, dict) else str(data)


def render_markdown(report: Report, timing: bool = False) -> str:
    cfg = report.config
    lines = [f"# Verification report: q = {cfg.p ** cfg.r}, l = {cfg.l}", ""]
    counts = report.counts()
    lines += [f"**{counts['pass']} pass, {counts['fail']} fail, {counts['skipped']} skipped**", ""]
    lines += ["## Orders", "", "| object | value |", "|---|---|"]
    lines += [f"| {k} | {v} |" for k, v in sorted(report.orders.items())]
    if report.inventory:
        lines += ["", "## Representations", "",
                  "| index | dim | generic | cuspidal | conjugate |", "|---|---|---|---|---|"]
        lines += [f"| {r['index']} | {r['dim']} | {'yes' if r['generic'] else 'no'} | "
                  f"{'yes' if r['cuspidal'] else 'no'} | {r['conjugate']} |" for r in report.inventory]
    for n, rows in sorted(report.gammas.items()):
        lines += ["", f"## Gamma factors against GL_{n}", ""]
        if not isinstance(rows, dict):
            lines.append(str(rows))
            continue
        taus = sorted({t for row in rows.values() for t in row}, key=int)
        lines += ["| pi \\ tau | " + " | ".join(taus) + " |", "|---" * (len(taus) + 1) + "|"]
        for pi in sorted(rows, key=int):
            lines.append(f"| {pi} | " + " | ".join(f"`{_cyc_str(rows[pi][t])}`" for t in taus) + " |")
    lines += ["", "## Checks", "", "| check | statement | status | detail |", "|---|---|---|---|"]
    for c in report.checks:
        detail = c.detail.replace("|", "\\|")
        if c.status == "fail" and c.witness:
            detail += "; witness: `" + json.dumps(c.witness, sort_keys=True) + "`"
        lines.append(f"| {c.name} | {c.statement} | {c.status} | {detail} |")
    if timing:
        lines += ["", f"Total time: {report.seconds:.1f} s"]
    return "\n".join(lines) + "\n"


def render_figures(report: Report, directory, stem: str = "report") -> list[Path]:
    """Gamma values in the complex plane and Bessel magnitudes on the torus-times-support grid."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory = Path(directory)
    paths = []
    points = {n: [CycNum.from_json(v).to_complex() for row in rows.values() for v in row.values()]
              for n, rows in report.gammas.items() if isinstance(rows, dict)}
    if points:
        fig, ax = plt.subplots(figsize=(4.5, 4.5))
        for n, zs in sorted(points.items()):
            zs = np.array(zs)
            ax.scatter(zs.real, zs.imag, label=f"GL_{n}", s=30, alpha=0.7)
        ax.axhline(0, color="0.8", lw=0.5)
        ax.axvline(0, color="0.8", lw=0.5)
        ax.set_aspect("equal")
        ax.set_xlabel("Re gamma")
        ax.set_ylabel("Im gamma")
        ax.legend(frameon=False)
        fig.tight_layout()
        paths.append(_save(fig, directory / f"{stem}_gamma_plane.png"))
        plt.close(fig)
    ws = report.extras.get("workspace")
    grid = _bessel_grid(ws) if ws is not None else None
    if grid is not None:
        mags, labels, reps = grid
        fig, ax = plt.subplots(figsize=(max(4, 0.35 * len(labels)), 0.5 * len(reps) + 1.5))
        im = ax.imshow(mags, cmap="viridis", aspect="auto")
        ax.set_yticks(range(len(reps)), [f"pi {i}" for i in reps])
        ax.set_xticks(range(len(labels)), labels, rotation=90, fontsize=6)
        fig.colorbar(im, ax=ax, label="|B(tw)|")
        fig.tight_layout()
        paths.append(_save(fig, directory / f"{stem}_bessel_support.png"))
        plt.close(fig)
    return paths


def _bessel_grid(ws):
    try:
        G, br, coords = ws.G, ws.bruhat(), ws.torus_coords()
        reps = ws.cuspidal()
    except ResourceLimit:
        return None
    cols, labels = [], []
    for w in ws.weyl.bessel_support:
        for t, c in sorted(coords.items()):
            cols.append(int(G.index(G.space.matmul(G.mats[t], G.mats[br.rep(w)]))))
            labels.append(f"{w}|{','.join(map(str, c))}")
    mags = np.array([[abs(z) for z in _complex(ws.bessel(i).values[cols])] for i in reps])
    return mags, labels, reps


def _complex(arr) -> list[complex]:
    return [v.to_complex() for v in arr.to_cyc()]


def _save(fig, path: Path) -> Path:
    try:
        fig.savefig(path, dpi=150)
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc}") from exc
    return path


def emit_report(report: Report, fmt: str, destination, timing: bool = False, figures: bool = True) -> list[Path]:
    """Write the report (and figures next to it); returns every path written."""
    path = Path(destination)
    text = dumps_json(report, timing) if fmt == "json" else render_markdown(report, timing)
    try:
        path.write_text(text)
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc}") from exc
    out = [path]
    if figures:
        out += render_figures(report, path.parent, path.stem)
    return out
