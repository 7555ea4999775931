"""JSON encoding of the domain types.

Scalars travel as canonical strings (see ``fields.format_scalar``); points,
matrices and vectors as arrays of such strings. Encoding is deterministic so
responses can be compared byte for byte.
"""

from __future__ import annotations

import enum
import json
from dataclasses import fields, is_dataclass
from fractions import Fraction

from vspforms.chow import LinkDivisor
from vspforms.conics import Parametrization, QuadraticForm
from vspforms.errors import ContractError
from vspforms.fields import QuadraticElement, RationalFunction, format_scalar, parse_scalar
from vspforms.linalg import Matrix
from vspforms.polys import Form
from vspforms.projective import ProjPoint
from vspforms.schemes import Curvilinear, DoublePlusOne, Reduced
from vspforms.vsp import PlueckerLine


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def encode(obj):
    """Convert library values to JSON-ready structures."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (Fraction, QuadraticElement, RationalFunction)):
        return format_scalar(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, ProjPoint):
        return [format_scalar(x) for x in obj.normal]
    if isinstance(obj, Matrix):
        return [[format_scalar(x) for x in row] for row in obj.rows]
    if isinstance(obj, QuadraticForm):
        return {"gram": encode(obj.gram), "form": str(obj.form())}
    if isinstance(obj, Form):
        return str(obj)
    if isinstance(obj, LinkDivisor):
        return {"qH": obj.h, "E": obj.e}
    if isinstance(obj, Parametrization):
        return [{k: format_scalar(v) for k, v in comp.items()} for comp in obj.binary_forms()]
    if isinstance(obj, PlueckerLine):
        return {"pluecker": encode(obj.coords), "basis": encode(obj.basis)}
    if isinstance(obj, Reduced):
        return {"type": "reduced", "points": [encode_raw(p) for p in obj.points]}
    if isinstance(obj, DoublePlusOne):
        return {
            "type": "double_plus_one",
            "point": encode_raw(obj.point),
            "direction": encode_raw(obj.direction),
            "other": encode_raw(obj.other),
        }
    if isinstance(obj, Curvilinear):
        return {
            "type": "curvilinear",
            "point": encode_raw(obj.point),
            "tangent": encode(obj.tangent),
            "second_order": encode(obj.second_order),
        }
    if is_dataclass(obj):
        return {f.name: encode(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def encode_raw(p: ProjPoint) -> list[str]:
    """Coordinates exactly as stored (used where representatives carry meaning)."""
    return [format_scalar(x) for x in p.coords]


# --- decoding -----------------------------------------------------------------------


def decode_scalar(value, pointer: str):
    try:
        return parse_scalar(value)
    except (ValueError, TypeError) as exc:
        raise ContractError(str(exc), pointer=pointer) from exc


def decode_vector(value, pointer: str, length: int | None = 3) -> tuple:
    if not isinstance(value, list) or (length is not None and len(value) != length):
        raise ContractError(f"expected an array of {length} scalars", pointer=pointer)
    return tuple(decode_scalar(v, f"{pointer}/{i}") for i, v in enumerate(value))


def decode_point(value, pointer: str) -> ProjPoint:
    vec = decode_vector(value, pointer)
    try:
        return ProjPoint(vec)
    except ContractError as exc:
        raise ContractError(str(exc), pointer=pointer) from exc


def decode_quadratic_form(payload: dict) -> QuadraticForm:
    if "gram" in payload:
        rows = payload["gram"]
        if not isinstance(rows, list) or len(rows) != 3:
            raise ContractError("gram must be a 3x3 array", pointer="/gram")
        matrix = Matrix([decode_vector(r, f"/gram/{i}") for i, r in enumerate(rows)])
        return QuadraticForm(matrix)
    if "form" in payload:
        return QuadraticForm.from_form(decode_form(payload["form"], "/form"))
    raise ContractError("payload needs 'gram' or 'form'", pointer="")


def decode_form(text, pointer: str) -> Form:
    if not isinstance(text, str):
        raise ContractError("form must be a string", pointer=pointer)
    try:
        return Form.parse(text)
    except ContractError as exc:
        raise ContractError(str(exc), pointer=pointer) from exc


def decode_scheme(obj, pointer: str = "/scheme"):
    kind = obj.get("type")
    try:
        if kind == "reduced":
            pts = obj.get("points")
            if not isinstance(pts, list) or len(pts) != 3:
                raise ContractError("reduced scheme needs three points", pointer=f"{pointer}/points")
            return Reduced(tuple(decode_point(p, f"{pointer}/points/{i}") for i, p in enumerate(pts)))
        if kind == "double_plus_one":
            return DoublePlusOne(
                decode_point(obj["point"], f"{pointer}/point"),
                decode_point(obj["direction"], f"{pointer}/direction"),
                decode_point(obj["other"], f"{pointer}/other"),
            )
        if kind == "curvilinear":
            return Curvilinear(
                decode_point(obj["point"], f"{pointer}/point"),
                decode_vector(obj["tangent"], f"{pointer}/tangent"),
                decode_vector(obj.get("second_order", [0, 0, 0]), f"{pointer}/second_order"),
            )
    except KeyError as exc:
        raise ContractError(f"missing field {exc.args[0]!r}", pointer=pointer) from exc
    raise ContractError(f"unknown scheme type {kind!r}", pointer=f"{pointer}/type")


def decode_line(obj, pointer: str = "/line") -> PlueckerLine:
    coords = decode_vector(obj.get("pluecker"), f"{pointer}/pluecker", 10)
    basis_raw = obj.get("basis")
    if not isinstance(basis_raw, list) or len(basis_raw) != 5:
        raise ContractError("basis must list five functionals", pointer=f"{pointer}/basis")
    basis = tuple(decode_vector(r, f"{pointer}/basis/{i}", 6) for i, r in enumerate(basis_raw))
    return PlueckerLine(coords, basis)
