"""
Renderers for command output: aligned text, CSV and JSON.

The output only depends on the rows and the precision, so identical runs give
byte-identical CSV and JSON.
"""
import csv
import io
import json
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence


def format_value(value: Any, precision: int) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        if math.isnan(value):
            return 'nan'
        return f'{value:.{precision}g}'
    if isinstance(value, (list, tuple)):
        return ' '.join(format_value(item, precision) for item in value)
    return str(value)


def _round_floats(value: Any, precision: int) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return format_value(value, precision)
        return float(f'{value:.{precision}g}')
    if isinstance(value, dict):
        return {key: _round_floats(item, precision) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(item, precision) for item in value]
    return value


def render_human(rows: Sequence[Dict[str, Any]], columns: Sequence[str], precision: int,
                 title: Optional[str] = None, summary: Optional[str] = None) -> str:
    cells = [[format_value(row.get(column), precision) for column in columns] for row in rows]
    widths = [max([len(column)] + [len(line[i]) for line in cells]) for i, column in enumerate(columns)]
    lines = []
    if title:
        lines.append(title)
    lines.append('  '.join(column.ljust(width) for column, width in zip(columns, widths)).rstrip())
    lines.append('  '.join('-' * width for width in widths))
    for line in cells:
        lines.append('  '.join(cell.rjust(width) for cell, width in zip(line, widths)).rstrip())
    if summary:
        lines.append(summary)
    return '\n'.join(lines) + '\n'


def render_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str], precision: int) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\r\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(column), precision) for column in columns])
    return buffer.getvalue()


def render_json(rows: Iterable[Dict[str, Any]], precision: int, **extra) -> str:
    payload: Dict[str, Any] = {'rows': [_round_floats(dict(row), precision) for row in rows]}
    payload.update(_round_floats(extra, precision))
    return json.dumps(payload, indent=2, ensure_ascii=False) + '\n'


def render(rows: List[Dict[str, Any]], columns: Sequence[str], output_format: str, precision: int,
           title: Optional[str] = None, summary: Optional[str] = None, **extra) -> str:
    """
    Render ``rows`` in the requested format.

    Only ``columns`` are shown in text and CSV; JSON carries whole rows plus
    the summary line and any ``extra`` top-level keys.
    """
    if output_format == 'csv':
        return render_csv(rows, columns, precision)
    if output_format == 'json':
        if summary:
            extra['summary'] = summary
        return render_json(rows, precision, **extra)
    return render_human(rows, columns, precision, title=title, summary=summary)
