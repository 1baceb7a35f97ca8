import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from cellschur.core.combinatorics import Partition
from cellschur.core.enums import Verdict

logger = logging.getLogger(__name__)


def decimal_strings(value: Any) -> Any:
    """Recursively render every integer as a decimal string."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Partition):
        return [str(part) for part in value.parts]
    if isinstance(value, Verdict):
        return value.value
    if isinstance(value, dict):
        return {str(key): decimal_strings(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [decimal_strings(item) for item in value]
    return str(value)


@dataclass
class Report:
    """Everything one command produced, in canonical order.

    ``layers`` and ``rows`` are flat tables; ``sections`` holds the nested
    documents (Gram matrices, witnesses, predictions) that only go to JSON.
    """

    command: str
    config: Dict[str, Any]
    basis_size: Optional[int] = None
    layers: List[Dict[str, Any]] = field(default_factory=list)
    verdicts: Dict[str, Verdict] = field(default_factory=dict)
    sections: Dict[str, Any] = field(default_factory=dict)
    rows: List[Dict[str, Any]] = field(default_factory=list)
    timing_ms: int = 0

    def to_json(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"config": self.config}
        if self.basis_size is not None:
            doc["basis_size"] = self.basis_size
        doc["layers"] = self.layers
        doc["verdicts"] = self.verdicts
        doc.update(self.sections)
        doc["timing_ms"] = self.timing_ms
        return decimal_strings(doc)

    def render_json(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    def render_csv(self) -> str:
        table = self.rows or self.layers
        if not table:
            raise ValueError(f"the {self.command} report has no flat table to write as CSV")
        fieldnames: List[str] = []
        for row in table:
            fieldnames.extend(key for key in row if key not in fieldnames)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in table:
            writer.writerow({key: _csv_cell(row.get(key)) for key in fieldnames})
        return buffer.getvalue()

    def render(self, output_format: str) -> str:
        if output_format == "json":
            return self.render_json()
        if output_format == "csv":
            return self.render_csv()
        raise ValueError(f"unknown output format: {output_format}")


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Partition):
        return str(value)
    if isinstance(value, Verdict):
        return value.value
    return str(value)


def write_report(report: Report, output_format: str, output: str = "", output_dir: str = "") -> Optional[Path]:
    """Write to ``output``, else into ``output_dir``, else to stdout; returns the path written."""
    text = report.render(output_format)
    if output:
        path = Path(output)
    elif output_dir:
        path = Path(output_dir) / f"{report.command}.{output_format}"
    else:
        print(text, end="")
        return None

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        raise ValueError(f"cannot write report to {path}: {e}") from e
    logger.info(f"Report written to {path}")
    return path
