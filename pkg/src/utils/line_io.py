"""
Codecs for sampled lines, factor pairs and residual tables.
CSV and JSON with 17 significant digits, deterministic byte output.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Union

import numpy as np

from models.domain import FactorPair, GridSpec, LineSample
from models.reports import VerificationResult

logger = logging.getLogger(__name__)

DIGITS = ".17g"


class LineFormatError(Exception):
    """Custom exception for unreadable line files"""
    pass


def _num(v: float) -> str:
    return format(float(v), DIGITS)


def _pairs(values: np.ndarray) -> List[List[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=complex)]


def _complex_array(pairs) -> np.ndarray:
    data = np.asarray(pairs, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise LineFormatError(f"expected a list of [re, im] pairs, got shape {data.shape}")
    return data[:, 0] + 1j * data[:, 1]


def json_text(payload) -> str:
    # json uses repr for floats, which round-trips exactly
    return json.dumps(payload, indent=2) + "\n"


def line_to_csv(line: LineSample) -> str:
    rows = ["x,re,im"]
    for x, v in zip(line.grid.x, line.values):
        rows.append(f"{_num(x)},{_num(v.real)},{_num(v.imag)}")
    return "\n".join(rows) + "\n"


def line_from_csv(text: str, offset_y: float, grid: GridSpec) -> LineSample:
    """
    Parse a line CSV back onto a known grid

    Raises:
        LineFormatError: On a wrong header or row count
    """
    lines = [row for row in text.splitlines() if row]
    if not lines or lines[0] != "x,re,im":
        raise LineFormatError("missing x,re,im header")
    data = np.array([[float(cell) for cell in row.split(",")] for row in lines[1:]])
    if data.shape != (grid.n, 3):
        raise LineFormatError(f"expected {grid.n} rows of 3 columns, got {data.shape}")
    return LineSample(grid=grid, offset_y=offset_y, values=data[:, 1] + 1j * data[:, 2])


def line_payload(line: LineSample) -> Dict:
    return {"grid": line.grid.payload(), "offset_y": line.offset_y, "values": _pairs(line.values)}


def line_to_json(line: LineSample) -> str:
    return json_text(line_payload(line))


def line_from_json(text: str) -> LineSample:
    payload = json.loads(text)
    try:
        grid = GridSpec(**payload["grid"])
        return LineSample(grid=grid, offset_y=float(payload["offset_y"]), values=_complex_array(payload["values"]))
    except KeyError as e:
        raise LineFormatError(f"missing field {e}") from e


def pair_payload(pair: FactorPair) -> Dict:
    return {
        "alpha": pair.alpha,
        "grid": pair.grid.payload(),
        "function": pair.function.label,
        "w1": _pairs(pair.w1_real_line),
        "w2": _pairs(pair.w2_real_line),
        "slope1": pair.slope1,
        "slope2": pair.slope2,
        "gauge": [pair.gauge.real, pair.gauge.imag],
        "residual_b2": pair.residual_b2,
        "residual_b3": pair.residual_b3,
    }


def pair_to_json(pair: FactorPair) -> str:
    return json_text(pair_payload(pair))


def table_payload(result: VerificationResult) -> List[Dict]:
    return [
        {"relation": row.relation, "residual": row.residual, "tolerance": row.tolerance, "passed": row.passed}
        for row in result.rows
    ]


def _field(text: str) -> str:
    if "," in text or '"' in text:
        return '"' + text.replace('"', '""') + '"'
    return text


def table_to_csv(result: VerificationResult) -> str:
    rows = ["relation,residual,tolerance,passed"]
    for entry in table_payload(result):
        rows.append(f"{_field(entry['relation'])},{_num(entry['residual'])},{_num(entry['tolerance'])},"
                    f"{entry['passed']}")
    return "\n".join(rows) + "\n"


def table_to_json(result: VerificationResult) -> str:
    return json_text(table_payload(result))


def write_text(directory: Union[str, Path], name: str, text: str) -> Path:
    """Write an artifact with LF terminators regardless of platform"""
    path = Path(directory) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info(f"Wrote {path}")
    return path


def write_line(directory: Union[str, Path], stem: str, line: LineSample, fmt: str) -> Path:
    if fmt == "csv":
        return write_text(directory, f"{stem}.csv", line_to_csv(line))
    return write_text(directory, f"{stem}.json", line_to_json(line))


def write_table(directory: Union[str, Path], stem: str, result: VerificationResult, fmt: str) -> Path:
    if fmt == "csv":
        return write_text(directory, f"{stem}.csv", table_to_csv(result))
    return write_text(directory, f"{stem}.json", table_to_json(result))
