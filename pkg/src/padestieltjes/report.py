"""Coefficient cache, number formatting and table emitters.

Every table is a list of string cells produced once by the formatters below;
the text, CSV and JSON emitters only lay those cells out, so all three agree
cell by cell. Numbers are kept in ``e`` notation internally and rendered with
``·10^`` only in text tables.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import ChecksumMismatch, InsufficientCoefficients
from .numeric import MIN_DIGITS, ExactRational, format_rational, rational
from .oscillators import Hamiltonian, PerturbationSeries, UNPERTURBED_ENERGY, generate, map_coupling
from .pade import epsilon_table, partial_sums
from .predict import PredictionRecord, phi_series, predict_coefficients, relative_error_table

GENERATOR_VERSION = "1"
OUTPUT_FORMATS = ("text", "csv", "json")

SUMMATION_ROWS = tuple(range(0, 6)) + tuple(range(50, 55)) + tuple(range(101, 106)) + tuple(range(150, 155)) + tuple(range(188, 193))
SWEEP_ROWS = tuple(range(2, 8)) + tuple(range(50, 55)) + tuple(range(100, 105)) + tuple(range(140, 145)) + tuple(range(187, 192))


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    hamiltonian: Hamiltonian = Hamiltonian.PT_CUBIC
    coupling: str = "1/7"
    max_order: int = 193
    precision: int = 600
    output_format: str = "text"
    cache_path: Path = Path("coefficients")

    def __post_init__(self):
        object.__setattr__(self, "hamiltonian", Hamiltonian.parse(self.hamiltonian))
        object.__setattr__(self, "cache_path", Path(self.cache_path))
        text = str(self.coupling).strip()
        q = rational(text)  # raises on malformed input
        if "/" in text and int(text.split("/")[1]) <= 0:
            raise ValueError("coupling denominator must be positive")
        object.__setattr__(self, "coupling", format_rational(q))
        if self.precision < MIN_DIGITS:
            raise ValueError(f"precision must be at least {MIN_DIGITS} digits")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"output format must be one of {OUTPUT_FORMATS}")
        if self.max_order < 0:
            raise ValueError("max_order must be non-negative")

    @property
    def coupling_value(self) -> ExactRational:
        return rational(self.coupling)


# --------------------------------------------------------------------------
# coefficient cache


def _checksum(lines: Sequence[str]) -> str:
    digest = hashlib.sha256()
    for line in lines:
        digest.update(line.encode("ascii"))
        digest.update(b"\n")
    return digest.hexdigest()


@dataclass(frozen=True)
class CoefficientCache:
    """Exact coefficients c_1..c_max_order of one Hamiltonian as a text file.

    Layout::

        # padestieltjes coefficient cache
        hamiltonian: pt-cubic
        generator: 1
        max_order: 3
        checksum: sha256:<hex of the coefficient lines>
        1 11
        2 -930
        3 158836
    """

    hamiltonian: Hamiltonian
    coefficients: tuple  # c_1, c_2, ...
    generator_version: str = GENERATOR_VERSION

    @property
    def max_order(self) -> int:
        return len(self.coefficients)

    @classmethod
    def from_series(cls, series: PerturbationSeries) -> "CoefficientCache":
        return cls(series.hamiltonian, tuple(series.coefficients[1:]))

    def series(self) -> PerturbationSeries:
        return PerturbationSeries(self.hamiltonian, (UNPERTURBED_ENERGY[self.hamiltonian],) + tuple(self.coefficients))

    def lines(self) -> list[str]:
        return [f"{n} {format_rational(c)}" for n, c in enumerate(self.coefficients, start=1)]

    def dumps(self) -> str:
        body = self.lines()
        header = [
            "# padestieltjes coefficient cache",
            f"hamiltonian: {self.hamiltonian.value}",
            f"generator: {self.generator_version}",
            f"max_order: {self.max_order}",
            f"checksum: sha256:{_checksum(body)}",
        ]
        return "\n".join(header + body) + "\n"

    @classmethod
    def loads(cls, text: str) -> "CoefficientCache":
        header: dict = {}
        body: list[str] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if ":" in line and not body:
                key, value = line.split(":", 1)
                header[key.strip()] = value.strip()
            else:
                body.append(line)
        for key in ("hamiltonian", "generator", "max_order", "checksum"):
            if key not in header:
                raise ChecksumMismatch(f"cache header lacks '{key}'")
        algo, _, digest = header["checksum"].partition(":")
        if algo != "sha256" or digest != _checksum(body):
            raise ChecksumMismatch("coefficient checksum does not match the cache contents")
        coefficients = []
        for expected, line in enumerate(body, start=1):
            index, _, value = line.partition(" ")
            if int(index) != expected:
                raise ChecksumMismatch(f"cache line {expected} carries index {index}")
            coefficients.append(rational(value))
        if len(coefficients) != int(header["max_order"]):
            raise ChecksumMismatch("max_order disagrees with the number of coefficient lines")
        return cls(Hamiltonian.parse(header["hamiltonian"]), tuple(coefficients), header["generator"])

    def write(self, path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(self.dumps(), encoding="ascii")
        os.replace(tmp, path)

    @classmethod
    def read(cls, path) -> "CoefficientCache":
        return cls.loads(Path(path).read_text(encoding="ascii"))


def cache_file(cache_dir, hamiltonian) -> Path:
    """One cache file per Hamiltonian inside ``cache_dir``."""
    return Path(cache_dir) / f"{Hamiltonian.parse(hamiltonian).value}.txt"


def ensure_cache(cache_dir, hamiltonian, max_order: int) -> tuple[CoefficientCache, str]:
    """Make sure the cache holds at least ``max_order`` coefficients.

    Returns the cache and what happened: ``"written"`` when the file was
    (re)generated, ``"verified"`` when an existing longer file matched a fresh
    computation of the requested prefix. A prefix that disagrees raises
    ``ChecksumMismatch``.
    """
    hamiltonian = Hamiltonian.parse(hamiltonian)
    path = cache_file(cache_dir, hamiltonian)
    existing = CoefficientCache.read(path) if path.exists() else None
    if existing is not None and existing.hamiltonian is not hamiltonian:
        raise ChecksumMismatch(f"{path} holds {existing.hamiltonian.value} coefficients")
    fresh = CoefficientCache.from_series(generate(hamiltonian, max_order))
    if existing is not None and existing.max_order >= max_order:
        if existing.coefficients[:max_order] != fresh.coefficients:
            raise ChecksumMismatch(f"{path} disagrees with regenerated coefficients")
        return existing, "verified"
    fresh.write(path)
    return fresh, "written"


def load_series(cache_dir, hamiltonian, min_order: int = 1) -> PerturbationSeries:
    """Series from the cache directory; ``FileNotFoundError`` or ``InsufficientCoefficients`` if unusable."""
    path = cache_file(cache_dir, hamiltonian)
    if not path.exists():
        raise FileNotFoundError(str(path))
    cache = CoefficientCache.read(path)
    if cache.max_order < min_order:
        raise InsufficientCoefficients(f"{path} holds {cache.max_order} orders, need {min_order}")
    return cache.series()


# --------------------------------------------------------------------------
# number formatting


def _as_rational(x) -> ExactRational:
    if isinstance(x, ExactRational):
        return x
    if isinstance(x, int):
        return mpq(x)
    try:
        sign, man, exp, _ = x._mpf_
    except AttributeError:
        return rational(x)
    if not man and exp:
        raise ValueError(f"cannot format non-finite value {x}")
    man = -int(man) if sign else int(man)
    return mpq(man * 2**exp) if exp >= 0 else mpq(man, 2 ** (-exp))


def _digits(x, significant: int) -> tuple[int, str, int]:
    """Sign, ``significant`` rounded digits and decimal exponent e with |x| ~ 0.d1d2... * 10^e.

    Rounding is exact (round half away from zero) on the rational value of ``x``.
    """
    if significant < 1:
        raise ValueError("need at least one significant digit")
    r = _as_rational(x)
    if r == 0:
        return 0, "0" * significant, 0
    sign = -1 if r < 0 else 1
    r = abs(r)
    e = len(str(r.numerator)) - len(str(r.denominator))
    # normalise so that 10^(e-1) <= r < 10^e
    while r >= mpq(10) ** e:
        e += 1
    while r < mpq(10) ** (e - 1):
        e -= 1
    scaled = r * mpq(10) ** (significant - e)
    m = int(scaled)
    if scaled - m >= mpq(1, 2):
        m += 1
    if m == 10**significant:
        m //= 10
        e += 1
    return sign, str(m), e


def format_scientific(x, significant: int = 3, exponent_digits: int | None = 3) -> str:
    """``0.d1d2d3e+EEE``: mantissa in [0.1, 1), exponent zero padded to ``exponent_digits``."""
    sign, digits, e = _digits(x, significant)
    if exponent_digits is None:
        exponent = f"{e:+d}"
    else:
        exponent = f"{'-' if e < 0 else '+'}{abs(e):0{exponent_digits}d}"
    return f"{'-' if sign < 0 else ''}0.{digits}e{exponent}"


def format_fixed(x, significant: int = 15) -> str:
    """Positional notation with ``significant`` significant digits, e.g. ``5.52416721306031``."""
    sign, digits, e = _digits(x, significant)
    if e <= 0:
        body = "0." + "0" * (-e) + digits
    elif e >= significant:
        body = digits + "0" * (e - significant)
    else:
        body = digits[:e] + "." + digits[e:]
    return ("-" if sign < 0 else "") + body


def format_prediction(x) -> str:
    return format_scientific(x, 21, exponent_digits=None)


def format_relative_error(x) -> str:
    return format_scientific(x, 9, exponent_digits=None)


def pretty(cell: str) -> str:
    """Text rendering of a numeric cell: ``0.110e+002`` -> ``0.110·10^002``."""
    if "e" not in cell:
        return cell
    mantissa, _, exponent = cell.partition("e")
    return f"{mantissa}·10^{exponent.lstrip('+')}"


def parse_cell(cell: str) -> ExactRational:
    """Exact value of a numeric cell in either notation."""
    text = cell.replace("·10^", "e")
    if "e" in text:
        mantissa, _, exponent = text.partition("e")
        return rational(mantissa) * mpq(10) ** int(exponent)
    return rational(text)


# --------------------------------------------------------------------------
# tables


@dataclass
class Table:
    title: str
    headers: list
    rows: list  # lists of str
    notes: list = field(default_factory=list)

    def column(self, name: str) -> list:
        i = self.headers.index(name)
        return [row[i] for row in self.rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.headers, row)) for row in self.rows]


def to_text(table: Table) -> str:
    cells = [list(table.headers)] + [[pretty(c) for c in row] for row in table.rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(table.headers))]
    lines = [table.title]
    for i, row in enumerate(cells):
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)))
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    lines.extend(table.notes)
    return "\n".join(lines) + "\n"


def to_csv(table: Table) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(table.headers)
    writer.writerows(table.rows)
    return out.getvalue()


def to_json(table: Table, extra: dict | None = None) -> str:
    payload = {"title": table.title, "columns": table.headers, "rows": table.records()}
    if table.notes:
        payload["notes"] = table.notes
    if extra:
        payload.update(extra)
    return json.dumps(payload, indent=2)


def emit(table: Table, output_format: str = "text") -> str:
    if output_format == "text":
        return to_text(table)
    if output_format == "csv":
        return to_csv(table)
    if output_format == "json":
        return to_json(table)
    raise ValueError(f"unknown output format {output_format!r}")


def coefficient_table(series: PerturbationSeries, count: int = 10) -> Table:
    """Exact coefficients c_1..c_count."""
    count = min(count, series.max_order)
    rows = [[str(n), format_rational(series[n])] for n in range(1, count + 1)]
    return Table(f"{series.hamiltonian.value} coefficients", ["n", "c_n"], rows)


def parse_rows(spec: str | None, default: Sequence[int]) -> list[int]:
    """``"0-5,50,188-192"`` -> [0, 1, ..., 5, 50, 188, ..., 192]."""
    if spec is None or spec.strip() == "":
        return list(default)
    rows: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            rows.extend(range(int(lo), int(hi) + 1))
        else:
            rows.append(int(part))
    if any(n < 0 for n in rows):
        raise ValueError("row indices must be non-negative")
    return rows


def summation_table(cubic: PerturbationSeries | None, quartic: PerturbationSeries | None, lam, rows: Iterable[int], digits: int = 600) -> Table:
    """Partial sums and staircase approximants at lambda^2 (pt-cubic) and beta = 40 lambda^2 (quartic)."""
    lam = rational(lam)
    rows = list(rows)
    top = max(rows) if rows else 0
    headers = ["n"]
    columns = []
    for series, z, sum_name, approx_name in (
        (cubic, lam * lam, "s_n", "P(lambda^2)"),
        (quartic, map_coupling(lam), "sigma_n", "P(beta)"),
    ):
        if series is None:
            continue
        sums = partial_sums(series, z, top)
        staircase = epsilon_table(sums, digits).staircase_values()
        columns.append((sum_name, [format_scientific(sums[n]) for n in rows]))
        columns.append((approx_name, [format_fixed(staircase[n]) for n in rows]))
    order = [c for c in columns if not c[0].startswith("P")] + [c for c in columns if c[0].startswith("P")]
    headers += [name for name, _ in order]
    body = [[str(n)] + [values[i] for _, values in order] for i, n in enumerate(rows)]
    beta = format_rational(map_coupling(lam))
    return Table(f"Pade summation at lambda = {format_rational(lam)}, beta = {beta}", headers, body)


def prediction_table(series: PerturbationSeries, n: int = 0, k: int = 33, terms: int = 16, digits: int | None = 600) -> tuple[Table, list[PredictionRecord]]:
    """Coefficients predicted from the expansion of phi_2k^(n), next to the true ones."""
    phi = phi_series(series, n, k, order=terms - 1, digits=digits)
    records = predict_coefficients(phi, terms, series)
    rows = []
    for nu, rec in enumerate(records):
        truth = "" if rec.truth is None else format_prediction(rec.truth)
        rel = "" if rec.relative_error is None else format_relative_error(rec.relative_error)
        rows.append([str(nu), str(rec.series_index), format_prediction(rec.predicted), truth, rel])
    title = f"{series.hamiltonian.value}: predictions from [{k + n}/{k}] (phi_{2 * k}^({n}))"
    return Table(title, ["nu", "index", "predicted", "exact", "relative_error"], rows), records


def relative_error_sweep(cubic: PerturbationSeries | None, quartic: PerturbationSeries | None, rows: Iterable[int], digits: int | None = 600) -> Table:
    """Relative errors of the first staircase prediction for each row n."""
    rows = list(rows)
    headers = ["n"]
    columns = []
    for series, name in ((cubic, "R_n"), (quartic, "R_n(quartic)")):
        if series is None:
            continue
        records = relative_error_table(series, rows, digits=digits)
        columns.append((name, [format_relative_error(r.relative_error) for r in records]))
        headers.append(name)
    body = [[str(n)] + [values[i] for _, values in columns] for i, n in enumerate(rows)]
    return Table("Relative errors of first predictions", headers, body)


def exact_json(series: PerturbationSeries) -> str:
    """Coefficients as exact strings (never floats)."""
    return json.dumps(
        {"hamiltonian": series.hamiltonian.value, "coefficients": [format_rational(c) for c in series.coefficients]},
        indent=2,
    )


def diagnostics_table(reports: Sequence) -> Table:
    """One row per (series, coupling); one pass/FAIL column per test."""
    if not reports:
        return Table("Stieltjes diagnostics", ["series", "z"], [])
    names = list(reports[0].verdict)
    rows = []
    for rep in reports:
        rows.append([rep.series_tag, format_rational(rep.coupling)] + ["pass" if rep.verdict[k] else "FAIL" for k in names])
    return Table("Stieltjes diagnostics", ["series", "z"] + names, rows, list(reports[0].notes))


def diagnostics_evidence(report) -> dict:
    """JSON-ready evidence behind one report's verdicts."""
    nest = report.nesting
    mono = report.monotonicity
    carl = report.carleman
    bound = report.prediction_bound
    return {
        "series": report.series_tag,
        "z": format_rational(report.coupling),
        "verdict": report.verdict,
        "sign_alternation_violations": list(report.sign_alternation),
        "nesting": {
            "nesting_violations": list(nest.nesting_violations),
            "upper_violations": list(nest.upper_violations),
            "lower_violations": list(nest.lower_violations),
            "bracket_violations": list(nest.bracket_violations),
            "width_violations": list(nest.width_violations),
            "ambiguous": list(nest.ambiguous),
            "escalated_to_exact": report.escalated,
            "best": format_fixed(nest.best, 30) if nest.best is not None else None,
            "final_width": format_scientific(nest.final_bracket, 6, None) if nest.final_bracket else None,
        },
        "pade_monotonicity": {
            "violations": [list(v) for v in mono.violations],
            "cross_violations": list(mono.cross_violations),
            "flat_steps": [list(v) for v in mono.flat_steps],
            "m_max": {str(j): (seq[-1][0] if seq else None) for j, seq in mono.sequences.items()},
        },
        "hankel_signs": {f"{m},{n}": s for (m, n), s in sorted(report.hankel_results.items())},
        "carleman": None
        if carl is None
        else {
            "partial_sums": [format_scientific(s, 12, None) for s in carl.partial_sums],
            "term_slope": carl.term_slope,
            "sum_slope": carl.sum_slope,
            "fit_window": list(carl.fit_window),
            "note": "growth trend only; no verdict",
        },
        "prediction_bound": None
        if bound is None
        else {"checked": len(bound.checked), "violations": list(bound.violations), "not_applicable": list(bound.not_applicable)},
        "notes": list(report.notes),
    }
