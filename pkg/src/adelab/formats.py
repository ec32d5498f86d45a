"""On-disk formats: ADEPoly JSON, shipped JSON schemas and atomic file output."""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema

from .indexcalc import ADEPoly, LambdaIndex, QComplex, UPoly
from .numkernel import DomainError

__all__ = ["load_schema", "validate", "poly_from_json", "poly_to_json", "read_poly", "atomic_write", "SchemaError"]


class SchemaError(DomainError):
    """Input or output document does not match its schema."""

    guard = "schema"


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("adelab").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate(doc, name: str) -> None:
    try:
        jsonschema.validate(doc, load_schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{name} schema violation at {where}: {exc.message}") from None


def _dec(x: Fraction) -> str:
    # exact decimal when it terminates, otherwise a fraction "p/q"
    from .witness import format_decimal

    out = format_decimal(x)
    return out if Fraction(out) == x else f"{x.numerator}/{x.denominator}"


def poly_from_json(doc: dict) -> ADEPoly:
    validate(doc, "adepoly")
    m = doc["m"]
    items = []
    for term in doc["terms"]:
        lam = LambdaIndex(*term["lambda"])
        coeffs = {}
        for mono in term["u_poly"]:
            exps = tuple(mono["exps"])
            if len(exps) != m + 1:
                raise SchemaError(f"exponent vector {list(exps)} has length {len(exps)}, expected m + 1 = {m + 1}")
            try:
                c = QComplex(Fraction(mono.get("re", "0")), Fraction(mono.get("im", "0")))
            except (ValueError, ZeroDivisionError) as exc:
                raise SchemaError(f"bad coefficient in term {term['lambda']}: {exc}") from None
            coeffs[exps] = coeffs.get(exps, QComplex()) + c
        items.append((lam, UPoly(m, coeffs)))
    return ADEPoly(m, items)


def upoly_to_json(a: UPoly) -> list:
    return [{"exps": list(exps), "re": _dec(c.re), "im": _dec(c.im)} for exps, c in a.terms.items()]


def poly_to_json(P: ADEPoly) -> dict:
    return {
        "m": P.m,
        "terms": [{"lambda": list(lam.astuple()), "u_poly": upoly_to_json(a)} for lam, a in P.coeffs.items()],
    }


def read_poly(path: str) -> ADEPoly:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from None
    return poly_from_json(doc)


def atomic_write(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=folder)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
