"""
CSV tables and human-readable summaries for study reports.
"""

import csv
import io
import sys
from pathlib import Path
from typing import Optional

from jinja2 import Environment, FileSystemLoader

from studies.experiments import StudyReport


def format_value(value) -> str:
    """Floats at 17 significant digits; everything else via str()."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    if hasattr(value, "dtype") and value.dtype.kind == "f":
        return f"{float(value):.17g}"
    return str(value)


def csv_text(report: StudyReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(report.columns)
    for row in report.table_rows():
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def write_csv(report: StudyReport, path: Optional[str]) -> None:
    """Write the report table; ``-`` or None writes to stdout."""
    text = csv_text(report)
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)


class SummaryRenderer:
    """Render the plain-text run summary."""

    def __init__(self, template_dir: Optional[Path] = None):
        template_dir = template_dir or Path(__file__).parent / "templates"
        self.jinja_env = Environment(
            loader=FileSystemLoader(template_dir),
            keep_trailing_newline=True,
            trim_blocks=True,
            lstrip_blocks=True,
        )

    def render_header(self, title: str, settings: dict) -> str:
        """Banner plus the effective settings of the run."""
        template = self.jinja_env.get_template("summary.txt.j2")
        return template.render(header_only=True, title=title, settings=settings)

    def render_report(self, report: StudyReport) -> str:
        template = self.jinja_env.get_template("summary.txt.j2")
        return template.render(
            header_only=False,
            highlights=report.highlights(),
            failures=report.failures,
            passed=report.passed,
        )
