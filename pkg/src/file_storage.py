import json
import logging
import re
from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .exceptions import InvalidPolylineException, NotFoundException, ParseException  # noqa: E402
from .geom import Polyline, Tolerance  # noqa: E402
from .models import RecordModel, TrackFormat  # noqa: E402

logger = logging.getLogger(__name__)

__all__ = ["TrackStorage"]

_SEPARATORS = {
    TrackFormat.AUTO: re.compile(r"[,\s;]+"),
    TrackFormat.CSV: re.compile(r"\s*,\s*"),
    TrackFormat.WHITESPACE: re.compile(r"\s+"),
}


class TrackStorage:
    """Serves as a file handler for trajectory inputs and run artifacts.
    Tracks are plain text, one vertex per row, only the first two columns are used
    """

    def __init__(self, tol: Optional[Tolerance] = None):
        self.tol = tol or Tolerance.default()

    def ingest(self, path: Union[str, Path], track_format: TrackFormat = TrackFormat.AUTO) -> Polyline:
        """Reads a track file into a polyline

        Args:
            path (Union[str, Path]): one vertex per row
            track_format (TrackFormat): column separator; auto accepts commas, semicolons and whitespace

        Raises:
            ValueError: When the format is unknown
            NotFoundException: When the file does not exist
            ParseException: When a row has fewer than two numeric columns
            InvalidPolylineException: When fewer than two distinct points remain

        Returns:
            Polyline: the track, consecutive duplicates merged
        """
        separator = _SEPARATORS[TrackFormat(track_format)]
        path = Path(path)
        if not path.is_file():
            raise NotFoundException(f"File {path} not found")
        rows = []
        with path.open() as handle:
            for line_number, line in enumerate(handle, start=1):
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                columns = [column for column in separator.split(text) if column]
                if len(columns) < 2:
                    raise ParseException("expected at least 2 columns", line_number)
                try:
                    x, y = float(columns[0]), float(columns[1])
                except ValueError:
                    # a single header row is tolerated
                    if not rows and line_number == 1:
                        continue
                    raise ParseException(f"not a number: {text!r}", line_number)
                rows.append((x, y))
        if len(rows) < 2:
            raise InvalidPolylineException("fewer than 2 points")
        logger.debug("ingested %d rows from %s", len(rows), path)
        return Polyline(rows, self.tol)

    def write_csv(self, polyline: Polyline, path: Union[str, Path]) -> Path:
        """Writes one ``x,y`` row per vertex with round-trip precision"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w") as handle:
            for x, y in polyline.vertices:
                handle.write(f"{float(x)!r},{float(y)!r}\n")
        return path

    def write_summary(self, record: RecordModel, path: Optional[Union[str, Path]] = None) -> str:
        """Serialises a record as JSON, to ``path`` when given

        Returns:
            str: the JSON text
        """
        text = record.json(exclude_none=True, indent=2)
        if path is not None:
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text + "\n")
        return text

    def emit_svg(self, original: Polyline, result: Polyline, path: Union[str, Path]) -> Path:
        """Draws the original track in blue and its result in orange with vertex markers

        Args:
            original (Polyline): input curve
            result (Polyline): simplification or mean curve
            path (Union[str, Path]): target ``.svg`` file

        Returns:
            Path: the written file
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        points = np.vstack([original.vertices, result.vertices])
        low, high = points.min(axis=0), points.max(axis=0)
        margin = np.maximum((high - low) * 0.05, 1e-9)
        fig, ax = plt.subplots(figsize=(6, 6))
        try:
            ax.plot(*original.vertices.T, color="tab:blue", linewidth=1)
            ax.plot(*result.vertices.T, color="tab:orange", linewidth=1.5, marker="o", markersize=3)
            ax.set_xlim(low[0] - margin[0], high[0] + margin[0])
            ax.set_ylim(low[1] - margin[1], high[1] + margin[1])
            ax.set_aspect("equal", adjustable="datalim")
            ax.set_axis_off()
            fig.savefig(path, format="svg", bbox_inches="tight")
        finally:
            plt.close(fig)
        return path
