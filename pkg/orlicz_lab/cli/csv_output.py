"""Deterministic CSV writing: header row, LF endings, 12 significant digits."""
import csv
import io
import math
import sys
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

from orlicz_lab.core.config import get_settings


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float) or hasattr(value, "dtype"):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".12g")
    return str(value)


def resolve_output(output: Optional[str]) -> Optional[Path]:
    """None or "-" means stdout; relative paths live under the configured output directory."""
    if output is None or output == "-":
        return None
    path = Path(output)
    if not path.is_absolute():
        path = Path(get_settings().output_dir) / path
    return path


def render(header: Sequence[str], rows: Iterable[Mapping[str, object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(row.get(column)) for column in header])
    return buffer.getvalue()


def write_csv(
    output: Union[str, Path, None], header: Sequence[str], rows: Iterable[Mapping[str, object]]
) -> Optional[Path]:
    """Write to stdout, a flag value resolved by ``resolve_output``, or an already resolved Path."""
    text = render(header, rows)
    path = output if isinstance(output, Path) else resolve_output(output)
    if path is None:
        sys.stdout.write(text)
        return None
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    return path
