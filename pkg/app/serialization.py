########################
# JSON Formats         #
########################

"""
This module reads and writes the JSON files exchanged by the command-line
front end: matrix polynomials, lifications with their block provenance,
placement plans and reports.

Key Features:
1. Matrix Polynomial Format:
   - {"rows", "cols", "grade", "field", "coeffs"} with one list of string
     rows per coefficient, entries in the scalar text form
   - optional "block_size", "provenance", "symbol", "flavor" and "source"
     for lifications built by the workbench

2. Provenance:
   - every block expression is a list of [word, alpha] terms, a word being
     a list of [j, starred] atoms
   - a stored provenance grid is re-evaluated on load and must reproduce
     the stored coefficients

3. Error Handling:
   - unreadable or non-JSON files raise ParseError
   - well-formed JSON with missing or inconsistent keys raises SchemaError
   - every message names the offending file
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from app.block_polynomial import BlockPolynomial
from app.coefficient_expr import CoefficientExpr
from app.conditions import PlacementPlan
from app.exceptions import LificationError, ParseError, SchemaError
from app.lification_config import LificationConfig
from app.matpoly import MatrixPolynomial
from app.matrix import Matrix, StarFlavor
from app.scalar import Backend, parse_scalar

PathLike = Union[str, Path]

REQUIRED_POLYNOMIAL_KEYS = ("rows", "cols", "grade", "field", "coeffs")


def _encoding(config: Optional[LificationConfig]) -> str:
    return config.default_encoding if config is not None else "utf-8"


# ----------------------------------------------------------------------
# Raw files
# ----------------------------------------------------------------------

def read_json(path: PathLike, config: Optional[LificationConfig] = None) -> Any:
    """
    Load a JSON document.

    Raises:
        ParseError: If the file cannot be read or is not JSON.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding=_encoding(config))
    except OSError as e:
        raise ParseError(f"{path}: cannot read file: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno}: {e.msg}") from e


def write_json(path: PathLike, data: Any, config: Optional[LificationConfig] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding=_encoding(config))
    logging.info(f"Wrote {path}")
    return path


# ----------------------------------------------------------------------
# Matrix polynomials
# ----------------------------------------------------------------------

def matrix_to_rows(M: Matrix) -> List[List[str]]:
    return [[str(x) for x in row] for row in M.entries]


def polynomial_to_dict(P: MatrixPolynomial) -> Dict[str, Any]:
    return {
        "rows": P.rows,
        "cols": P.cols,
        "grade": P.grade,
        "field": P.backend.value,
        "coeffs": [matrix_to_rows(c) for c in P.coeffs],
    }


def polynomial_from_dict(data: Any, where: str = "<input>") -> MatrixPolynomial:
    """
    Build a MatrixPolynomial from the JSON format.

    Args:
        data: Decoded JSON object.
        where: File name used in error messages.

    Raises:
        SchemaError: On missing keys, wrong shapes or an unknown field.
        ParseError: On malformed scalar text.
    """
    if not isinstance(data, dict):
        raise SchemaError(f"{where}: expected a JSON object, got {type(data).__name__}")
    missing = [key for key in REQUIRED_POLYNOMIAL_KEYS if key not in data]
    if missing:
        raise SchemaError(f"{where}: missing keys {', '.join(missing)}")
    try:
        backend = Backend(str(data["field"]).lower())
    except ValueError as e:
        raise SchemaError(f"{where}: unknown field {data['field']!r}") from e
    try:
        rows, cols, grade = int(data["rows"]), int(data["cols"]), int(data["grade"])
    except (TypeError, ValueError) as e:
        raise SchemaError(f"{where}: rows, cols and grade must be integers") from e
    coeffs = data["coeffs"]
    if not isinstance(coeffs, list) or len(coeffs) != grade + 1:
        raise SchemaError(f"{where}: expected {grade + 1} coefficients for grade {grade}")
    matrices = []
    for j, rows_j in enumerate(coeffs):
        if not isinstance(rows_j, list) or len(rows_j) != rows or any(
                not isinstance(r, list) or len(r) != cols for r in rows_j):
            raise SchemaError(f"{where}: coefficient {j} is not a {rows}x{cols} list of rows")
        try:
            entries = tuple(tuple(parse_scalar(str(x), backend) for x in r) for r in rows_j)
        except ParseError as e:
            raise ParseError(f"{where}: coefficient {j}: {e}") from e
        matrices.append(Matrix(rows, cols, entries, backend))
    return MatrixPolynomial(rows, cols, grade, tuple(matrices), backend)


# ----------------------------------------------------------------------
# Provenance
# ----------------------------------------------------------------------

def expr_to_json(expr: CoefficientExpr) -> List[list]:
    return [[[[j, starred] for j, starred in word], str(alpha)] for word, alpha in expr.terms]


def expr_from_json(data: Any, backend: Backend, symbol: str, where: str) -> CoefficientExpr:
    if not isinstance(data, list):
        raise SchemaError(f"{where}: block expression must be a list of [word, alpha] terms")
    terms = {}
    for term in data:
        try:
            word_data, alpha_text = term
            word = tuple((int(j), bool(starred)) for j, starred in word_data)
        except (TypeError, ValueError) as e:
            raise SchemaError(f"{where}: malformed expression term {term!r}") from e
        terms[word] = parse_scalar(str(alpha_text), backend)
    return CoefficientExpr.from_dict(terms, backend, symbol)


def lification_to_dict(L: BlockPolynomial) -> Dict[str, Any]:
    """The polynomial format plus block metadata and, when known, provenance."""
    data = polynomial_to_dict(L.base)
    data["block_size"] = L.n
    if L.provenance is not None and L.source_coeffs is not None:
        data["symbol"] = L.symbol
        data["flavor"] = L.flavor.value
        data["provenance"] = [[[expr_to_json(e) for e in cell] for cell in row] for row in L.provenance]
        data["source"] = [matrix_to_rows(c) for c in L.source_coeffs]
    return data


def lification_from_dict(data: Any, where: str = "<input>") -> BlockPolynomial:
    """
    Build a BlockPolynomial from the lification format.

    Raises:
        SchemaError: If the block size does not divide the shape, or the
            stored provenance does not reproduce the stored coefficients.
    """
    base = polynomial_from_dict(data, where)
    n = data.get("block_size", base.rows)
    try:
        n = int(n)
        plain = BlockPolynomial.plain(base, n)
    except (TypeError, ValueError, LificationError) as e:
        raise SchemaError(f"{where}: bad block_size {data.get('block_size')!r}: {e}") from e
    if "provenance" not in data:
        return plain
    backend, symbol = base.backend, str(data.get("symbol", "P"))
    source = data.get("source")
    if not isinstance(source, list) or not source:
        raise SchemaError(f"{where}: provenance needs the source coefficients under 'source'")
    try:
        source_coeffs = [Matrix.from_rows([[parse_scalar(str(x), backend) for x in r] for r in rows], backend)
                         for rows in source]
        flavor = StarFlavor.parse(data.get("flavor", "T"))
    except (TypeError, ValueError, IndexError, LificationError) as e:
        raise SchemaError(f"{where}: bad source coefficients: {e}") from e
    grid = data["provenance"]
    if not isinstance(grid, list) or len(grid) != plain.block_rows:
        raise SchemaError(f"{where}: provenance must have {plain.block_rows} block rows")
    exprs = []
    for s, row in enumerate(grid):
        if not isinstance(row, list) or len(row) != plain.block_cols:
            raise SchemaError(f"{where}: provenance row {s} must have {plain.block_cols} blocks")
        exprs.append([[expr_from_json(e, backend, symbol, f"{where}: block ({s + 1}, {t + 1})") for e in cell]
                      for t, cell in enumerate(row)])
    try:
        rebuilt = BlockPolynomial.from_provenance(exprs, source_coeffs, n, base.grade, flavor, symbol, backend)
    except LificationError as e:
        raise SchemaError(f"{where}: provenance cannot be evaluated: {e}") from e
    if rebuilt.base != base:
        raise SchemaError(f"{where}: provenance does not reproduce the stored coefficients")
    return rebuilt


# ----------------------------------------------------------------------
# Files
# ----------------------------------------------------------------------

def read_polynomial(path: PathLike, config: Optional[LificationConfig] = None) -> MatrixPolynomial:
    return polynomial_from_dict(read_json(path, config), str(path))


def write_polynomial(path: PathLike, P: MatrixPolynomial, config: Optional[LificationConfig] = None) -> Path:
    return write_json(path, polynomial_to_dict(P), config)


def read_lification(path: PathLike, config: Optional[LificationConfig] = None) -> BlockPolynomial:
    return lification_from_dict(read_json(path, config), str(path))


def write_lification(path: PathLike, L: BlockPolynomial, config: Optional[LificationConfig] = None) -> Path:
    return write_json(path, lification_to_dict(L), config)


def read_plan(path: PathLike, config: Optional[LificationConfig] = None) -> PlacementPlan:
    data = read_json(path, config)
    try:
        return PlacementPlan.from_dict(data)
    except SchemaError as e:
        raise SchemaError(f"{path}: {e}") from e


def write_report(path: PathLike, report: Dict[str, Any], seed: Optional[int] = None,
                 config: Optional[LificationConfig] = None) -> Path:
    """Write a report dictionary, recording the seed of the run when there is one."""
    data = dict(report)
    if seed is not None:
        data["seed"] = seed
    return write_json(path, data, config)
