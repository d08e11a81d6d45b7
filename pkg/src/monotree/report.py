"""Report emission: canonical JSON / CSV / text tables plus figure rendering.

JSON output is byte-stable for a fixed run configuration (sorted keys, no
timing data); figures are rendered to PNG files next to the delimited output
when an output path is present.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any


@dataclass
class Verdict:
    name: str
    status: str  # "pass" | "fail" | "skip"
    detail: str = ""

    def to_json(self) -> dict[str, str]:
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class Report:
    command: str
    config: dict[str, Any]
    rows: list[dict[str, Any]] = field(default_factory=list)
    verdicts: list[Verdict] = field(default_factory=list)

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.verdicts.append(Verdict(name, "pass" if ok else "fail", detail))

    def skip(self, name: str, detail: str = "") -> None:
        self.verdicts.append(Verdict(name, "skip", detail))

    @property
    def status(self) -> str:
        statuses = {v.status for v in self.verdicts}
        if "fail" in statuses:
            return "mismatch"
        if "skip" in statuses:
            return "skipped"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "mismatch": 1, "skipped": 2}[self.status]

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "config": self.config,
            "rows": self.rows,
            "verdicts": [v.to_json() for v in self.verdicts],
            "status": self.status,
        }

    def render_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=2) + "\n"

    def render_csv(self) -> str:
        buf = io.StringIO()
        if self.rows:
            fieldnames = list(self.rows[0].keys())
            for row in self.rows[1:]:
                for key in row:
                    if key not in fieldnames:
                        fieldnames.append(key)
            writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
            writer.writeheader()
            for row in self.rows:
                writer.writerow(row)
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([])
        writer.writerow(["check", "status", "detail"])
        for v in self.verdicts:
            writer.writerow([v.name, v.status, v.detail])
        return buf.getvalue()

    def render_text(self) -> str:
        lines = [f"== {self.command} =="]
        if self.rows:
            keys = list(self.rows[0].keys())
            widths = {k: max(len(str(k)), *(len(str(r.get(k, ""))) for r in self.rows))
                      for k in keys}
            lines.append("  ".join(str(k).ljust(widths[k]) for k in keys))
            for row in self.rows:
                lines.append("  ".join(str(row.get(k, "")).ljust(widths[k]) for k in keys))
            lines.append("")
        for v in self.verdicts:
            mark = {"pass": "ok  ", "fail": "FAIL", "skip": "skip"}[v.status]
            lines.append(f"[{mark}] {v.name}" + (f": {v.detail}" if v.detail else ""))
        lines.append(f"status: {self.status}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.render_json()
        if fmt == "csv":
            return self.render_csv()
        if fmt == "text":
            return self.render_text()
        raise ValueError(f"unknown format {fmt!r}")


def write_report(report: Report, fmt: str, out: Path | None) -> None:
    payload = report.render(fmt)
    if out is None:
        print(payload, end="")
    else:
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(payload)
        figure = FIGURES.get(report.command)
        if figure is not None:
            figure(report, out.with_suffix(".png"))


# -- figures ---------------------------------------------------------------------


def _orders_figure(report: Report, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for i, color in zip((1, 2, 3), ("#1b6ca8", "#c0392b", "#27ae60")):
        pts = [(r["n"], r["measured"]) for r in report.rows if r["generator"] == i]
        pred = [(r["n"], r["predicted"]) for r in report.rows if r["generator"] == i]
        if pts:
            ax.step([p[0] for p in pts], [p[1] for p in pts], where="mid",
                    color=color, label=f"a{i} measured")
            ax.plot([p[0] for p in pred], [p[1] for p in pred], "o", ms=3, color=color)
    ax.set_xlabel("depth n")
    ax.set_ylabel("order exponent m (order = 2^m)")
    ax.set_title("generator orders: measured steps vs predicted dots")
    ax.legend(loc="upper left")
    ax.grid(True, ls=":", alpha=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)


def _group_table_figure(report: Report, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = [r for r in report.rows if r.get("g_order_log2") is not None]
    if not rows:
        return
    ns = [r["n"] for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.2))
    ax1.semilogy(ns, [r["g_order_log2"] for r in rows], "o-", color="#1b6ca8",
                 label="measured log2 order")
    golden = [(r["n"], r["golden_log2"]) for r in rows if r.get("golden_log2") is not None]
    if golden:
        ax1.semilogy([g[0] for g in golden], [g[1] for g in golden], "x",
                     color="#c0392b", label="reference")
    ax1.set_xlabel("depth n")
    ax1.set_ylabel("log2 |G_n|")
    ax1.legend()
    ax1.grid(True, ls=":", alpha=0.5)
    ratios = [r["g_order_log2"] / (2 ** r["n"] - 1) for r in rows]
    ax2.plot(ns, ratios, "o-", color="#27ae60", label="log2|G_n| / (2^n - 1)")
    ax2.axhline(2 / 3, color="#555", ls="--", label="limit 2/3")
    ax2.set_xlabel("depth n")
    ax2.set_ylabel("density ratio")
    ax2.legend()
    ax2.grid(True, ls=":", alpha=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)


def _zeta_figure(report: Report, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    labels = [r["check"] for r in report.rows]
    values = [max(float(r["residual"]), 1e-18) for r in report.rows]
    ax.bar(range(len(values)), values, color="#1b6ca8")
    ax.set_yscale("log")
    ax.set_xticks(range(len(values)))
    ax.set_xticklabels(labels, rotation=25, ha="right", fontsize=8)
    ax.set_ylabel("residual")
    ax.set_title("preimage-tree identities and root-of-unity residuals")
    ax.grid(True, axis="y", ls=":", alpha=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)


def _disc_figure(report: Report, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = [r for r in report.rows if r.get("kind") == "discriminant"]
    if not rows:
        return
    ns = [r["n"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    for key, color in (("m", "#1b6ca8"), ("a", "#c0392b"), ("b", "#27ae60")):
        ax.plot(ns, [r[key] for r in rows], "o-", color=color, label=f"exponent {key}")
    ax.set_xlabel("iterate n")
    ax.set_ylabel("exponent")
    ax.set_title("discriminant shape sign * 2^m * t^a * (1-t)^b")
    ax.legend()
    ax.grid(True, ls=":", alpha=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)


def _verify_all_figure(report: Report, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    counts: dict[str, dict[str, int]] = {}
    for verdict in report.verdicts:
        section = verdict.name.split("/", 1)[0]
        bucket = counts.setdefault(section, {"pass": 0, "fail": 0, "skip": 0})
        bucket[verdict.status] += 1
    if not counts:
        return
    sections = list(counts)
    fig, ax = plt.subplots(figsize=(8, 0.45 * len(sections) + 1.5))
    base = [0] * len(sections)
    for status, color in (("pass", "#27ae60"), ("skip", "#f39c12"), ("fail", "#c0392b")):
        values = [counts[s][status] for s in sections]
        ax.barh(sections, values, left=base, color=color, label=status)
        base = [b + v for b, v in zip(base, values)]
    ax.set_xlabel("checks")
    ax.set_title("verification summary")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)


FIGURES = {
    "orders": _orders_figure,
    "group-table": _group_table_figure,
    "zeta": _zeta_figure,
    "disc": _disc_figure,
    "verify-all": _verify_all_figure,
}
