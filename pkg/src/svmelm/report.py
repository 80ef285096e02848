"""Text tables and SVG bar charts for :class:`~svmelm.experiments.ResultTable`."""

from pathlib import Path
from xml.sax.saxutils import escape

from svmelm.experiments import METHOD_LABELS

FAILED = "—"
# one colour per method, in METHODS order
PALETTE = ("#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3")


def format_cell(cell):
    if cell is None:
        return FAILED
    return f"{100 * cell.mean:.1f}±{100 * cell.std:.1f}"


def render_table(table, style="tsv"):
    """Render as ``tsv`` or ``markdown``. Failed cells print as an em dash and
    their errors follow in a diagnostics block."""
    header = ["Method", "Layer", *table.columns]
    rows = [
        [METHOD_LABELS.get(m, m), table.layer, *(format_cell(table.cell(m, c)) for c in table.columns)]
        for m in table.methods
    ]
    if style == "tsv":
        lines = ["\t".join(header)] + ["\t".join(r) for r in rows]
        if table.diagnostics:
            lines.append("")
            lines.append("# diagnostics")
            lines.extend(f"# {d}" for d in table.diagnostics)
    elif style == "markdown":
        lines = [
            "| " + " | ".join(header) + " |",
            "|" + "|".join(["---"] * 2 + ["---:"] * len(table.columns)) + "|",
        ]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
        if table.diagnostics:
            lines.append("")
            lines.append("**Diagnostics**")
            lines.append("")
            lines.extend(f"- {d}" for d in table.diagnostics)
    else:
        raise ValueError(f"unknown table style {style!r}")
    return "\n".join(lines) + "\n"


def render_chart(table, path=None, width=None, height=360):
    """Grouped bar chart: one group per task, one bar per method, y axis 0-100%.

    Returns the SVG text and writes it to ``path`` when given. Output depends
    only on the table, so repeated calls produce identical bytes.
    """
    methods = list(table.methods)
    cols = list(table.columns)
    bar_w = 10
    group_gap = 14
    group_w = bar_w * len(methods) + group_gap
    left, right, top, bottom = 56, 16, 40, 70
    plot_w = group_w * len(cols)
    width = width or left + plot_w + right
    plot_h = height - top - bottom
    y0 = top + plot_h

    def y_of(pct):
        return y0 - plot_h * pct / 100.0

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left}" y="16" font-size="12">Setting {int(table.setting)}, layer '
        f'{escape(table.layer)}: recognition accuracy (%)</text>',
    ]
    for tick in range(0, 101, 20):
        y = y_of(tick)
        out.append(
            f'<line x1="{left}" y1="{y:.2f}" x2="{left + plot_w}" y2="{y:.2f}" '
            f'stroke="#dddddd" stroke-width="0.5"/>'
        )
        out.append(f'<text x="{left - 6}" y="{y + 3:.2f}" text-anchor="end">{tick}</text>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{left}" y1="{y0}" x2="{left + plot_w}" y2="{y0}" stroke="black"/>')

    for g, col in enumerate(cols):
        gx = left + g * group_w + group_gap / 2
        for k, m in enumerate(methods):
            cell = table.cell(m, col)
            if cell is None:
                continue
            pct = 100.0 * cell.mean
            x = gx + k * bar_w
            out.append(
                f'<rect class="bar" x="{x:.2f}" y="{y_of(pct):.2f}" width="{bar_w - 1}" '
                f'height="{y0 - y_of(pct):.2f}" fill="{PALETTE[k % len(PALETTE)]}">'
                f"<title>{escape(METHOD_LABELS.get(m, m))} {escape(col)}: {pct:.1f}</title></rect>"
            )
        cx = gx + bar_w * len(methods) / 2
        out.append(
            f'<text x="{cx:.2f}" y="{y0 + 12}" text-anchor="end" '
            f'transform="rotate(-45 {cx:.2f} {y0 + 12})">{escape(col)}</text>'
        )

    lx = left
    for k, m in enumerate(methods):
        out.append(
            f'<rect x="{lx}" y="24" width="10" height="8" fill="{PALETTE[k % len(PALETTE)]}"/>'
        )
        label = escape(METHOD_LABELS.get(m, m))
        out.append(f'<text x="{lx + 13}" y="32">{label}</text>')
        lx += 20 + 7 * len(label)
    out.append("</svg>")
    svg = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(svg, encoding="utf-8")
    return svg
