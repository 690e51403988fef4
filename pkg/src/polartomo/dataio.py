"""CSV ingestion, density-matrix text format, and the bundled published datasets."""

from __future__ import annotations

import csv
import io
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .bell import BellRecord
from .errors import DomainError, ParseError
from .polarization import DEFAULT_CONVENTION, ProjectiveSetting
from .tomography import CountRecord, TomographyInput

TOMO_COLUMNS = ("nu", "label", "h_a", "q_a", "h_b", "q_b", "n_a", "n_b", "n_c", "t_s", "tau_s")
BELL_COLUMNS = ("theta_a", "theta_b", "n_a", "n_b", "n_c", "dn_c", "t_s", "tau_s")
POWER_COLUMNS = ("power_mw", "cc_rate_cps")
OPTIONAL_ZERO = {"n_a", "n_b", "dn_c"}


def data_path(name: str) -> Path:
    """Path of a bundled dataset (bell_chsh.csv, visibility.csv, tomography.csv, rho_reference.txt)."""
    return Path(str(resources.files("polartomo") / "data" / name))


def _read_rows(source, columns):
    text = source.read() if hasattr(source, "read") else Path(source).read_text()
    reader = csv.DictReader(io.StringIO(text))
    header = [h.strip() for h in (reader.fieldnames or [])]
    missing = [c for c in columns if c not in header]
    if missing:
        raise ParseError(f"header is missing column(s) {', '.join(missing)}")
    reader.fieldnames = header
    rows = [r for r in reader if any((v or "").strip() for v in r.values())]
    if not rows:
        raise ParseError("no data rows")
    return rows


def _number(row: dict, col: str, line: int) -> float:
    raw = (row.get(col) or "").strip()
    if raw == "" and col in OPTIONAL_ZERO:
        return 0.0
    try:
        v = float(raw)
    except ValueError:
        raise ParseError(f"row {line}, column {col}: cannot parse {raw!r} as a number") from None
    if not math.isfinite(v):
        raise ParseError(f"row {line}, column {col}: value {raw!r} is not finite")
    return v


def read_tomography_csv(source, convention: str = DEFAULT_CONVENTION) -> TomographyInput:
    """Rows ``nu,label,h_a,q_a,h_b,q_b,n_a,n_b,n_c,t_s,tau_s``; rates in cps, waveplate angles in degrees."""
    rows = _read_rows(source, TOMO_COLUMNS)
    records = []
    for line, row in enumerate(rows, start=2):
        h_a, q_a, h_b, q_b, n_a, n_b, n_c, t_s, tau_s = (
            _number(row, c, line) for c in TOMO_COLUMNS[2:])
        setting = ProjectiveSetting(h_a, q_a, h_b, q_b, (row.get("label") or "").strip())
        try:
            records.append(CountRecord(setting, n_a, n_b, n_c, t_s, tau_s))
        except DomainError as exc:
            raise ParseError(f"row {line}: {exc}") from None
    return TomographyInput(records, convention)


def read_bell_csv(source) -> list[BellRecord]:
    """Rows ``theta_a,theta_b,n_a,n_b,n_c,dn_c,t_s,tau_s``; empty n_a, n_b, dn_c read as 0."""
    rows = _read_rows(source, BELL_COLUMNS)
    out = []
    for line, row in enumerate(rows, start=2):
        vals = [_number(row, c, line) for c in BELL_COLUMNS]
        try:
            out.append(BellRecord(*vals))
        except DomainError as exc:
            raise ParseError(f"row {line}: {exc}") from None
    return out


def read_power_csv(source) -> np.ndarray:
    rows = _read_rows(source, POWER_COLUMNS)
    return np.array([[_number(r, c, line) for c in POWER_COLUMNS] for line, r in enumerate(rows, start=2)])


def format_tomography_csv(data: TomographyInput) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TOMO_COLUMNS)
    for nu, r in enumerate(data.records, 1):
        s = r.setting
        w.writerow([nu, s.label, *(repr(float(x)) for x in (s.h_a, s.q_a, s.h_b, s.q_b, r.n_a, r.n_b,
                                                           r.n_c, r.t_s, r.tau_s))])
    return buf.getvalue()


def format_bell_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BELL_COLUMNS)
    for r in records:
        w.writerow([repr(float(getattr(r, c))) for c in BELL_COLUMNS])
    return buf.getvalue()


def format_rho(rho) -> str:
    """Real 4x4 block then imaginary 4x4 block, one matrix row per line."""
    a = np.asarray(rho, dtype=complex)
    lines = [" ".join(f"{x:.17g}" for x in row) for row in np.vstack([a.real, a.imag])]
    return "\n".join(lines) + "\n"


def parse_rho(text: str) -> np.ndarray:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    n = len(rows) // 2
    if len(rows) != 2 * n or n != 4 or any(len(r) != n for r in rows):
        raise ParseError("density matrix needs 8 rows of 4 numbers (real block then imaginary block)")
    try:
        vals = np.array([[float(x) for x in r] for r in rows])
    except ValueError as exc:
        raise ParseError(f"density matrix entry is not a number: {exc}") from None
    return vals[:n] + 1j * vals[n:]


def read_rho(path) -> np.ndarray:
    return parse_rho(Path(path).read_text())


def reference_rho(symmetrize: bool = True) -> np.ndarray:
    """The bundled three-decimal published density matrix, optionally made Hermitian with unit trace."""
    rho = read_rho(data_path("rho_reference.txt"))
    if symmetrize:
        rho = 0.5 * (rho + rho.conj().T)
        rho = rho / np.trace(rho).real
    return rho
