"""
MPS reader and writer

Accepts fixed and free format (whitespace separated, names without blanks),
optional OBJSENSE and RANGES sections, integrality through MARKER
INTORG/INTEND lines and BV/LI/UI bounds. Files ending in ``.gz`` are
decompressed transparently.
"""

import gzip
import io
import logging
import math
import zlib
from pathlib import Path
from typing import IO, Dict, List, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp

from ..errors import InstanceError, MpsFormatError
from ..models.instance import INTEGRALITY_ROUNDING_TOL, MipInstance

logger = logging.getLogger(__name__)

# Section rank; sections must appear in non-decreasing rank
SECTION_RANK = {
    "NAME": 0,
    "OBJSENSE": 1,
    "ROWS": 2,
    "COLUMNS": 3,
    "RHS": 4,
    "RANGES": 5,
    "BOUNDS": 6,
    "ENDATA": 7,
}
UNSUPPORTED_SECTIONS = {"SOS", "QUADOBJ", "QMATRIX", "QSECTION", "QCMATRIX", "CSECTION", "INDICATORS"}

BOUND_TYPES_WITH_VALUE = {"UP", "LO", "FX", "LI", "UI"}
BOUND_TYPES_WITHOUT_VALUE = {"FR", "MI", "PL"}
MPS_INFINITY = 1e30

MpsSource = Union[bytes, bytearray, str, IO[bytes], IO[str]]


def _parse_number(token: str, line_number: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MpsFormatError(f"expected a number, got {token!r}", line_number) from None
    if math.isnan(value):
        raise MpsFormatError("NaN is not a valid coefficient", line_number)
    if value >= MPS_INFINITY:
        return math.inf
    if value <= -MPS_INFINITY:
        return -math.inf
    return value


class _MpsParser:
    """Line-oriented MPS state machine"""

    def __init__(self):
        self.name: Optional[str] = None
        self.section: Optional[str] = None
        self.seen_sections = set()
        self.maximize = False

        self.objective_row: Optional[str] = None
        self.row_index: Dict[str, int] = {}
        self.row_types: List[str] = []
        self.row_line: List[int] = []
        self.rhs: List[float] = []
        self.ranges: Dict[int, float] = {}

        self.col_index: Dict[str, int] = {}
        self.col_line: List[int] = []
        self.col_integer: List[bool] = []
        self.col_lower: List[float] = []
        self.col_upper: List[float] = []
        self.lower_explicit: List[bool] = []
        self.objective: Dict[int, float] = {}
        self.objective_offset = 0.0

        self.entry_rows: List[int] = []
        self.entry_cols: List[int] = []
        self.entry_vals: List[float] = []

        self.in_integer_block = False

    # ------------------------------------------------------------------
    # Sections
    # ------------------------------------------------------------------

    def _enter_section(self, tokens: List[str], line_number: int) -> None:
        keyword = tokens[0].upper()
        if keyword in UNSUPPORTED_SECTIONS:
            raise MpsFormatError(f"unsupported section {keyword}", line_number)

        current_rank = SECTION_RANK[self.section] if self.section else -1
        if SECTION_RANK[keyword] < current_rank or keyword == self.section:
            raise MpsFormatError(f"section {keyword} out of order after {self.section}", line_number)
        if keyword in ("COLUMNS", "RHS", "RANGES", "BOUNDS") and current_rank < SECTION_RANK["ROWS"]:
            raise MpsFormatError(f"section {keyword} before ROWS", line_number)
        if keyword in ("RHS", "RANGES", "BOUNDS") and current_rank < SECTION_RANK["COLUMNS"]:
            raise MpsFormatError(f"section {keyword} before COLUMNS", line_number)

        self.section = keyword
        self.seen_sections.add(keyword)
        if keyword == "NAME":
            self.name = tokens[1] if len(tokens) > 1 else None
        elif keyword == "OBJSENSE" and len(tokens) > 1:
            self._set_sense(tokens[1], line_number)

    def _set_sense(self, token: str, line_number: int) -> None:
        sense = token.upper()
        if sense in ("MAX", "MAXIMIZE"):
            self.maximize = True
        elif sense in ("MIN", "MINIMIZE"):
            self.maximize = False
        else:
            raise MpsFormatError(f"unknown objective sense {token!r}", line_number)

    # ------------------------------------------------------------------
    # Data lines
    # ------------------------------------------------------------------

    def feed(self, lines) -> None:
        for line_number, raw in enumerate(lines, start=1):
            line = raw.rstrip("\r\n")
            stripped = line.strip()
            if not stripped or stripped.startswith("*"):
                continue

            tokens = stripped.split()
            is_header = not line[0].isspace() and (
                tokens[0].upper() in SECTION_RANK or tokens[0].upper() in UNSUPPORTED_SECTIONS
            )
            if is_header:
                self._enter_section(tokens, line_number)
                if self.section == "ENDATA":
                    break
                continue

            if self.section is None or self.section == "NAME":
                raise MpsFormatError("data line outside of a section", line_number)

            handler = getattr(self, f"_read_{self.section.lower()}")
            handler(tokens, line_number)

        if self.section is None:
            raise MpsFormatError("empty MPS input")
        if "COLUMNS" not in self.seen_sections:
            raise MpsFormatError("missing COLUMNS section")

    def _read_objsense(self, tokens: List[str], line_number: int) -> None:
        self._set_sense(tokens[0], line_number)

    def _read_rows(self, tokens: List[str], line_number: int) -> None:
        if len(tokens) != 2:
            raise MpsFormatError("ROWS entries need a type and a name", line_number)
        row_type, row_name = tokens[0].upper(), tokens[1]
        if row_type not in ("N", "L", "G", "E"):
            raise MpsFormatError(f"unknown row type {tokens[0]!r}", line_number)
        if row_name in self.row_index or row_name == self.objective_row:
            raise MpsFormatError(f"duplicate row {row_name!r}", line_number)

        if row_type == "N" and self.objective_row is None:
            self.objective_row = row_name
            return

        self.row_index[row_name] = len(self.row_types)
        self.row_types.append(row_type)
        self.row_line.append(line_number)
        self.rhs.append(0.0)

    def _column(self, col_name: str, line_number: int, create: bool) -> int:
        j = self.col_index.get(col_name)
        if j is not None:
            return j
        if not create:
            raise MpsFormatError(f"unknown column {col_name!r}", line_number)
        j = len(self.col_line)
        self.col_index[col_name] = j
        self.col_line.append(line_number)
        self.col_integer.append(self.in_integer_block)
        self.col_lower.append(0.0)
        self.col_upper.append(math.inf)
        self.lower_explicit.append(False)
        return j

    def _row(self, row_name: str, line_number: int) -> Optional[int]:
        """Row index, or None for the objective row"""
        if row_name == self.objective_row:
            return None
        i = self.row_index.get(row_name)
        if i is None:
            raise MpsFormatError(f"unknown row {row_name!r}", line_number)
        return i

    def _read_columns(self, tokens: List[str], line_number: int) -> None:
        if len(tokens) >= 3 and tokens[1].strip("'\"").upper() == "MARKER":
            marker = tokens[2].strip("'\"").upper()
            if marker == "INTORG":
                self.in_integer_block = True
            elif marker == "INTEND":
                self.in_integer_block = False
            else:
                raise MpsFormatError(f"unknown marker {tokens[2]!r}", line_number)
            return

        if len(tokens) not in (3, 5):
            raise MpsFormatError("COLUMNS entries need a column and one or two (row, value) pairs", line_number)

        j = self._column(tokens[0], line_number, create=True)
        if self.in_integer_block:
            self.col_integer[j] = True
        for k in range(1, len(tokens), 2):
            value = _parse_number(tokens[k + 1], line_number)
            if math.isinf(value):
                raise MpsFormatError("infinite matrix coefficient", line_number)
            i = self._row(tokens[k], line_number)
            if i is None:
                self.objective[j] = self.objective.get(j, 0.0) + value
            else:
                self.entry_rows.append(i)
                self.entry_cols.append(j)
                self.entry_vals.append(value)

    def _pairs(self, tokens: List[str], line_number: int) -> List[Tuple[str, str]]:
        # An odd token count carries a leading set name
        body = tokens[1:] if len(tokens) % 2 == 1 else tokens
        if not body:
            raise MpsFormatError("missing (row, value) pair", line_number)
        return [(body[k], body[k + 1]) for k in range(0, len(body), 2)]

    def _read_rhs(self, tokens: List[str], line_number: int) -> None:
        for row_name, token in self._pairs(tokens, line_number):
            value = _parse_number(token, line_number)
            i = self._row(row_name, line_number)
            if i is None:
                self.objective_offset = -value
            elif self.row_types[i] != "N":
                self.rhs[i] = value
                self.row_line[i] = line_number

    def _read_ranges(self, tokens: List[str], line_number: int) -> None:
        for row_name, token in self._pairs(tokens, line_number):
            value = _parse_number(token, line_number)
            i = self._row(row_name, line_number)
            if i is None:
                raise MpsFormatError("RANGES entry on the objective row", line_number)
            if self.row_types[i] != "N":
                self.ranges[i] = value
                self.row_line[i] = line_number

    def _read_bounds(self, tokens: List[str], line_number: int) -> None:
        bound_type = tokens[0].upper()
        rest = tokens[1:]

        if bound_type in BOUND_TYPES_WITH_VALUE:
            if len(rest) not in (2, 3):
                raise MpsFormatError(f"{bound_type} bound needs a column and a value", line_number)
            col_name, value_token = rest[-2], rest[-1]
        elif bound_type in BOUND_TYPES_WITHOUT_VALUE:
            if len(rest) not in (1, 2):
                raise MpsFormatError(f"{bound_type} bound needs a column", line_number)
            col_name, value_token = rest[-1], None
        elif bound_type == "BV":
            if len(rest) == 3:
                col_name, value_token = rest[1], rest[2]
            elif len(rest) == 2 and rest[0] in self.col_index and rest[1] not in self.col_index:
                col_name, value_token = rest[0], rest[1]
            elif len(rest) in (1, 2):
                col_name, value_token = rest[-1], None
            else:
                raise MpsFormatError("malformed BV bound", line_number)
        else:
            raise MpsFormatError(f"unsupported bound type {tokens[0]!r}", line_number)

        j = self._column(col_name, line_number, create=False)
        value = _parse_number(value_token, line_number) if value_token is not None else None
        self.col_line[j] = line_number

        if bound_type == "UP":
            if value < 0 and self.col_lower[j] == 0.0 and not self.lower_explicit[j]:
                logger.warning("line %d: negative upper bound on %s, lower bound set to -inf", line_number, col_name)
                self.col_lower[j] = -math.inf
            self.col_upper[j] = value
        elif bound_type == "LO":
            self.col_lower[j] = value
            self.lower_explicit[j] = True
        elif bound_type == "FX":
            self.col_lower[j] = value
            self.col_upper[j] = value
            self.lower_explicit[j] = True
        elif bound_type == "FR":
            self.col_lower[j] = -math.inf
            self.col_upper[j] = math.inf
            self.lower_explicit[j] = True
        elif bound_type == "MI":
            self.col_lower[j] = -math.inf
            self.lower_explicit[j] = True
        elif bound_type == "PL":
            self.col_upper[j] = math.inf
        elif bound_type == "BV":
            self.col_integer[j] = True
            self.col_lower[j] = 0.0
            self.col_upper[j] = 1.0
            self.lower_explicit[j] = True
        elif bound_type == "LI":
            self.col_integer[j] = True
            self.col_lower[j] = value
            self.lower_explicit[j] = True
        elif bound_type == "UI":
            self.col_integer[j] = True
            self.col_upper[j] = value

    # ------------------------------------------------------------------
    # Assembly
    # ------------------------------------------------------------------

    def _row_bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        m = len(self.row_types)
        lower = np.empty(m)
        upper = np.empty(m)
        for i, row_type in enumerate(self.row_types):
            rhs = self.rhs[i]
            rng = self.ranges.get(i)
            if row_type == "N":
                lower[i], upper[i] = -math.inf, math.inf
            elif row_type == "L":
                lower[i], upper[i] = (-math.inf if rng is None else rhs - abs(rng)), rhs
            elif row_type == "G":
                lower[i], upper[i] = rhs, (math.inf if rng is None else rhs + abs(rng))
            elif rng is None:
                lower[i], upper[i] = rhs, rhs
            elif rng >= 0:
                lower[i], upper[i] = rhs, rhs + rng
            else:
                lower[i], upper[i] = rhs + rng, rhs

            if lower[i] > upper[i] or lower[i] == math.inf or upper[i] == -math.inf:
                raise MpsFormatError(
                    f"row {self._row_name(i)!r} has empty range [{lower[i]}, {upper[i]}]", self.row_line[i]
                )
        return lower, upper

    def _row_name(self, i: int) -> str:
        for name, idx in self.row_index.items():
            if idx == i:
                return name
        return str(i)

    def build(self, name: Optional[str] = None) -> MipInstance:
        if self.objective_row is None:
            logger.warning("no objective row declared, using a zero objective")

        row_lower, row_upper = self._row_bounds()
        m, n = len(self.row_types), len(self.col_line)

        col_names = list(self.col_index)
        col_lower = np.array(self.col_lower, dtype=float)
        col_upper = np.array(self.col_upper, dtype=float)
        is_integer = np.array(self.col_integer, dtype=bool)
        for j in range(n):
            lo, hi = col_lower[j], col_upper[j]
            if is_integer[j]:
                lo = math.ceil(lo - INTEGRALITY_ROUNDING_TOL) if math.isfinite(lo) else lo
                hi = math.floor(hi + INTEGRALITY_ROUNDING_TOL) if math.isfinite(hi) else hi
            if lo > hi or lo == math.inf or hi == -math.inf:
                raise MpsFormatError(f"column {col_names[j]!r} has empty domain [{lo}, {hi}]", self.col_line[j])

        c = np.zeros(n)
        for j, value in self.objective.items():
            c[j] = value
        offset = self.objective_offset
        if self.maximize:
            c = -c
            offset = -offset

        A = sp.coo_matrix(
            (np.array(self.entry_vals, dtype=float), (np.array(self.entry_rows, dtype=int), np.array(self.entry_cols, dtype=int))),
            shape=(m, n),
        ).tocsr()

        instance = MipInstance(
            c=c,
            A=A,
            row_lower=row_lower,
            row_upper=row_upper,
            col_lower=col_lower,
            col_upper=col_upper,
            is_integer=is_integer,
            name=name or self.name or "instance",
            row_names=tuple(self.row_index),
            col_names=tuple(col_names),
            objective_offset=offset,
            maximize=self.maximize,
        )
        logger.debug(
            "parsed %s: %d rows, %d columns, %d integers, %d nonzeros",
            instance.name, m, n, instance.num_integers, instance.A.nnz,
        )
        return instance


def parse_mps(stream: MpsSource, name: Optional[str] = None) -> MipInstance:
    """
    Parse MPS content into a validated MipInstance

    Args:
        stream: raw bytes/text or a readable file object
        name: instance name, overriding the NAME record

    Returns:
        MipInstance in minimisation form
    """
    if hasattr(stream, "read"):
        stream = stream.read()
    text = stream.decode("latin-1") if isinstance(stream, (bytes, bytearray)) else stream

    parser = _MpsParser()
    parser.feed(io.StringIO(text))
    return parser.build(name)


def read_mps(path: Union[str, Path], name: Optional[str] = None) -> MipInstance:
    """Read an ``.mps`` or ``.mps.gz`` file"""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    try:
        with opener(path, "rb") as fh:
            data = fh.read()
    except (EOFError, zlib.error) as e:
        raise InstanceError(f"{path.name}: damaged compressed stream: {e}") from e
    return parse_mps(data, name=name or instance_name(path))


def instance_name(path: Union[str, Path]) -> str:
    """File name without .mps / .mps.gz"""
    base = Path(path).name
    for suffix in (".gz", ".mps", ".MPS"):
        if base.endswith(suffix):
            base = base[: -len(suffix)]
    return base


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _objective_row_name(instance: MipInstance) -> str:
    name = "obj"
    taken = set(instance.row_names)
    while name in taken:
        name += "_"
    return name


def format_mps(instance: MipInstance) -> str:
    """Free-format MPS text with 17 significant digits"""
    out = io.StringIO()
    obj_row = _objective_row_name(instance)
    sign = -1.0 if instance.maximize else 1.0
    c = sign * instance.c
    offset = sign * instance.objective_offset

    out.write(f"NAME {instance.name}\n")
    if instance.maximize:
        out.write("OBJSENSE\n    MAX\n")

    out.write("ROWS\n")
    out.write(f" N  {obj_row}\n")
    row_types = []
    for i, row_name in enumerate(instance.row_names):
        lo, hi = instance.row_lower[i], instance.row_upper[i]
        if lo == hi:
            row_type = "E"
        elif math.isinf(lo) and math.isinf(hi):
            row_type = "N"
        elif math.isinf(lo):
            row_type = "L"
        else:
            row_type = "G"
        row_types.append(row_type)
        out.write(f" {row_type}  {row_name}\n")

    out.write("COLUMNS\n")
    A = instance.A_csc
    in_block = False
    for j, col_name in enumerate(instance.col_names):
        if instance.is_integer[j] and not in_block:
            out.write("    M1  'MARKER'  'INTORG'\n")
            in_block = True
        elif not instance.is_integer[j] and in_block:
            out.write("    M1  'MARKER'  'INTEND'\n")
            in_block = False
        out.write(f"    {col_name}  {obj_row}  {_fmt(c[j])}\n")
        start, end = A.indptr[j], A.indptr[j + 1]
        for i, value in zip(A.indices[start:end], A.data[start:end]):
            out.write(f"    {col_name}  {instance.row_names[i]}  {_fmt(value)}\n")
    if in_block:
        out.write("    M1  'MARKER'  'INTEND'\n")

    out.write("RHS\n")
    if offset != 0.0:
        out.write(f"    RHS  {obj_row}  {_fmt(-offset)}\n")
    ranges = []
    for i, row_name in enumerate(instance.row_names):
        lo, hi = instance.row_lower[i], instance.row_upper[i]
        row_type = row_types[i]
        rhs = hi if row_type == "L" else lo
        if row_type != "N" and rhs != 0.0:
            out.write(f"    RHS  {row_name}  {_fmt(rhs)}\n")
        if row_type == "G" and math.isfinite(hi):
            ranges.append((row_name, hi - lo))

    if ranges:
        out.write("RANGES\n")
        for row_name, value in ranges:
            out.write(f"    RNG  {row_name}  {_fmt(value)}\n")

    out.write("BOUNDS\n")
    for j, col_name in enumerate(instance.col_names):
        lo, hi = instance.col_lower[j], instance.col_upper[j]
        if lo == hi:
            out.write(f" FX BND  {col_name}  {_fmt(lo)}\n")
            continue
        if math.isinf(lo) and math.isinf(hi):
            out.write(f" FR BND  {col_name}\n")
            continue
        if math.isinf(lo):
            out.write(f" MI BND  {col_name}\n")
        elif lo != 0.0:
            out.write(f" LO BND  {col_name}  {_fmt(lo)}\n")
        if math.isfinite(hi):
            out.write(f" UP BND  {col_name}  {_fmt(hi)}\n")
    out.write("ENDATA\n")
    return out.getvalue()


def write_mps(instance: MipInstance, stream: Union[IO[str], IO[bytes], str, Path]) -> None:
    """Write an instance to a path (gzip for ``.gz``) or an open stream"""
    text = format_mps(instance)
    if isinstance(stream, (str, Path)):
        path = Path(stream)
        if path.suffix == ".gz":
            with gzip.open(path, "wt", encoding="latin-1") as fh:
                fh.write(text)
        else:
            path.write_text(text, encoding="latin-1")
        return
    if isinstance(stream, io.TextIOBase):
        stream.write(text)
    else:
        stream.write(text.encode("latin-1"))
