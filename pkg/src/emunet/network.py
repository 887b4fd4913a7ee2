"""Weighted directed trade network: matrix type, validation, and length view.

A yearly trade network is an n x n non-negative weight matrix over an
ordered list of country codes; entry (i, j) is the export flow from
country i to country j in a fixed currency unit.  A zero entry means no
link.  Link lengths for path computations are reciprocal weights, so
heavier trade links are shorter.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field

import numpy as np

# Codes as they appear in the bundled euro-area dataset (EL = Greece,
# SL = Slovenia).
EMU_COUNTRIES = (
    "AT", "BE", "CY", "EE", "FI", "FR", "DE", "EL", "IE", "IT",
    "LV", "LT", "LU", "MT", "NL", "PT", "SK", "SL", "ES",
)

_CODE_RE = re.compile(r"^[A-Z0-9]{2,3}$")


class ValidationError(ValueError):
    """Raised when input data violates a structural invariant."""


def check_country_code(code: str) -> str:
    if not isinstance(code, str) or not _CODE_RE.match(code):
        raise ValidationError(
            f"invalid country code {code!r}: expected 2-3 uppercase alphanumerics"
        )
    return code


@dataclass(frozen=True)
class TradeMatrix:
    """One year of bilateral flows as a dense weight matrix.

    ``weights[i, j]`` is the flow from ``countries[i]`` to ``countries[j]``
    in currency units.  Instances returned by :func:`validate` (and by all
    builders in this package) carry a read-only array and satisfy: zero
    diagonal, no negative entries, at least two countries.
    """

    year: int
    countries: tuple[str, ...]
    weights: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.countries)

    def index(self, code: str) -> int:
        try:
            return self.countries.index(code)
        except ValueError:
            raise KeyError(f"country {code!r} not in matrix for {self.year}") from None

    def weight(self, exporter: str, importer: str) -> float:
        return float(self.weights[self.index(exporter), self.index(importer)])


def validate(matrix: TradeMatrix) -> TradeMatrix:
    """Check all invariants and return an immutable copy of the matrix.

    Raises :class:`ValidationError` naming the offending country or pair.
    Idempotent: validating a validated matrix returns an equal matrix.
    """
    countries = tuple(matrix.countries)
    if len(countries) < 2:
        raise ValidationError("a trade network needs at least 2 countries")
    if len(set(countries)) != len(countries):
        raise ValidationError("duplicate country codes in matrix")
    for code in countries:
        check_country_code(code)

    w = np.asarray(matrix.weights, dtype=float)
    if w.shape != (len(countries), len(countries)):
        raise ValidationError(
            f"weight matrix shape {w.shape} does not match {len(countries)} countries"
        )
    if not np.all(np.isfinite(w)):
        bad = np.argwhere(~np.isfinite(w))[0]
        raise ValidationError(
            f"non-finite weight at ({countries[bad[0]]}, {countries[bad[1]]})"
        )
    diag = np.diagonal(w)
    if np.any(diag != 0):
        i = int(np.nonzero(diag)[0][0])
        raise ValidationError(f"nonzero diagonal entry for {countries[i]}")
    if np.any(w < 0):
        i, j = np.argwhere(w < 0)[0]
        raise ValidationError(
            f"negative weight at ({countries[i]}, {countries[j]}): {w[i, j]}"
        )

    w = w.copy()
    w.flags.writeable = False
    return TradeMatrix(year=int(matrix.year), countries=countries, weights=w)


def to_lengths(matrix: TradeMatrix) -> np.ndarray:
    """Link lengths: reciprocal weights, +inf where there is no link."""
    w = matrix.weights
    lengths = np.full_like(w, np.inf)
    pos = w > 0
    lengths[pos] = 1.0 / w[pos]
    return lengths


def total_weight(matrix: TradeMatrix) -> float:
    """Sum of all link weights (total trade in the network)."""
    return float(matrix.weights.sum())


def scale_weights(matrix: TradeMatrix, factor: float) -> TradeMatrix:
    """Multiply every weight by a positive factor (e.g. a unit change)."""
    if not factor > 0:
        raise ValidationError(f"scale factor must be positive, got {factor}")
    return validate(
        TradeMatrix(matrix.year, matrix.countries, matrix.weights * factor)
    )


def matrix_to_csv(matrix: TradeMatrix, dest, *, scale: float = 1.0,
                  diagonal: str = "-") -> None:
    """Write a square CSV with a country-code header row and column.

    ``scale`` multiplies stored weights on output (1e-9 prints billions).
    ``dest`` is a path or a text file object.
    """
    close = False
    if isinstance(dest, (str, bytes)) or hasattr(dest, "__fspath__"):
        dest = open(dest, "w", newline="")
        close = True
    try:
        writer = csv.writer(dest)
        writer.writerow(["code", *matrix.countries])
        for i, code in enumerate(matrix.countries):
            row: list[str] = [code]
            for j in range(matrix.n):
                if i == j:
                    row.append(diagonal)
                else:
                    row.append(repr(float(matrix.weights[i, j] * scale)))
            writer.writerow(row)
    finally:
        if close:
            dest.close()


def matrix_from_csv(source, *, year: int, scale: float = 1.0) -> TradeMatrix:
    """Read a square country-by-country CSV into a validated matrix.

    The header row and the first column must list the same codes in the
    same order.  ``-`` or empty cells count as zero (no link); stored
    weights are the cell values times ``scale``.
    """
    close = False
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        source = open(source, newline="")
        close = True
    elif isinstance(source, io.TextIOBase):
        pass
    try:
        rows = list(csv.reader(source))
    finally:
        if close:
            source.close()

    if not rows:
        raise ValidationError("empty matrix CSV")
    codes = tuple(rows[0][1:])
    n = len(codes)
    if len(rows) != n + 1:
        raise ValidationError(
            f"matrix CSV has {len(rows) - 1} data rows for {n} columns"
        )
    w = np.zeros((n, n))
    for i, row in enumerate(rows[1:]):
        if row[0] != codes[i]:
            raise ValidationError(
                f"row {i + 2}: code {row[0]!r} does not match column order ({codes[i]!r})"
            )
        if len(row) != n + 1:
            raise ValidationError(f"row {i + 2}: expected {n + 1} cells, got {len(row)}")
        for j, cell in enumerate(row[1:]):
            cell = cell.strip()
            if cell in ("-", ""):
                w[i, j] = 0.0
            else:
                try:
                    w[i, j] = float(cell) * scale
                except ValueError:
                    raise ValidationError(
                        f"row {i + 2}: cannot parse weight {cell!r}"
                    ) from None
    return validate(TradeMatrix(year=year, countries=codes, weights=w))
