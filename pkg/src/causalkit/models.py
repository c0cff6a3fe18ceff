"""Model-definition files: declarative field content plus interaction vertices.

File format is JSON:

    {
      "name": "psi2phi",
      "fields": [
        {"name": "psi", "mass": 1.0, "dim": 1},
        {"name": "phi", "mass": 0.0, "dim": 1}
      ],
      "vertices": {"L": "1/2 * psi^2 phi"}
    }

Field entries accept the optional keys "fermion" (0/1, default 0), "charges"
(map name -> integer, default empty) and "conjugate" (field name, default
self-conjugate).

Vertex expressions use a tiny grammar, documented in docs/model_format.md:

    expr    := term (('+'|'-') term)*
    term    := [coeff '*'] factor+
    coeff   := rational | rational '/' rational | coeff 'i'
    factor  := deriv* NAME ['^' INT]
    deriv   := 'd(' MU ')'          # MU in 0..3

Example: "1/2 * psi^2 phi - 3 * d(0)phi d(0)phi".
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Dict, Tuple

from .algebra import (
    QQi,
    BasicField,
    FieldModel,
    Polynomial,
    SQIndex,
    gen,
)


class ModelFormatError(ValueError):
    """Raised on malformed model files or vertex expressions."""


_TOKEN = re.compile(
    r"\s*(?:(?P<plus>\+)|(?P<minus>-)|(?P<star>\*)|(?P<caret>\^)"
    r"|(?P<deriv>d\(\s*(?P<mu>[0-3])\s*\))"
    r"|(?P<number>\d+(?:/\d+)?)"
    r"|(?P<imag>i\b)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ModelFormatError(f"bad token at: {text[pos:]!r}")
            break
        pos = m.end()
        kind = m.lastgroup
        if kind == "deriv":
            out.append(("deriv", int(m.group("mu"))))
        elif kind == "number":
            out.append(("number", Fraction(m.group("number"))))
        else:
            out.append((kind, m.group(0).strip()))
    return out


def parse_polynomial(model: FieldModel, text: str) -> Polynomial:
    """Parse a vertex expression into a Polynomial over `model`."""
    tokens = _tokenize(text)
    poly = Polynomial.zero(model)
    idx = 0

    def peek():
        return tokens[idx][0] if idx < len(tokens) else None

    while idx < len(tokens):
        sign = QQi(1)
        while peek() in ("plus", "minus"):
            if peek() == "minus":
                sign = -sign
            idx += 1
        if idx >= len(tokens):
            raise ModelFormatError(f"dangling sign in {text!r}")
        coeff = sign
        # optional numeric coefficient, optionally imaginary, optional '*'
        if peek() == "number":
            coeff = coeff * QQi(tokens[idx][1])
            idx += 1
            if peek() == "imag":
                coeff = coeff * QQi.I
                idx += 1
            if peek() == "star":
                idx += 1
        elif peek() == "imag":
            coeff = coeff * QQi.I
            idx += 1
            if peek() == "star":
                idx += 1
        term = Polynomial.one(model)
        nfactors = 0
        while peek() in ("deriv", "name"):
            alpha = [0, 0, 0, 0]
            while peek() == "deriv":
                alpha[tokens[idx][1]] += 1
                idx += 1
            if peek() != "name":
                raise ModelFormatError(f"derivative without a field in {text!r}")
            name = tokens[idx][1]
            idx += 1
            if name not in [b.name for b in model]:
                raise ModelFormatError(f"unknown field {name!r}")
            power = 1
            if peek() == "caret":
                idx += 1
                if peek() != "number" or tokens[idx][1].denominator != 1:
                    raise ModelFormatError(f"bad exponent in {text!r}")
                power = int(tokens[idx][1])
                idx += 1
            g = gen(model[name].index, alpha)
            factor = Polynomial.monomial(model, SQIndex({g: 1}))
            for _ in range(power):
                term = term * factor
            nfactors += 1
        if not nfactors:
            # pure constant term
            pass
        poly = poly + coeff * term
    return poly


def load_model(path_or_dict) -> Tuple[FieldModel, Dict[str, Polynomial]]:
    """Load a model file (path or already-parsed dict); returns the field
    model and its named vertex polynomials."""
    if isinstance(path_or_dict, dict):
        data = path_or_dict
    else:
        with open(path_or_dict) as fh:
            data = json.load(fh)
    try:
        raw_fields = data["fields"]
    except KeyError:
        raise ModelFormatError("model file needs a 'fields' list")
    name_to_index = {f["name"]: i + 1 for i, f in enumerate(raw_fields)}
    basics = []
    for i, f in enumerate(raw_fields):
        conj_name = f.get("conjugate", f["name"])
        if conj_name not in name_to_index:
            raise ModelFormatError(f"unknown conjugate field {conj_name!r}")
        basics.append(
            BasicField(
                index=i + 1,
                name=f["name"],
                mass=float(f.get("mass", 0.0)),
                fermion=int(f.get("fermion", 0)),
                dim=Fraction(str(f.get("dim", 1))),
                charges=tuple(sorted((k, int(v)) for k, v in f.get("charges", {}).items())),
                conjugate=name_to_index[conj_name],
            )
        )
    model = FieldModel(basics, name=data.get("name", "model"))
    vertices = {
        vname: parse_polynomial(model, expr)
        for vname, expr in data.get("vertices", {}).items()
    }
    return model, vertices


def scalar_model(name: str = "psi2phi", m_psi: float = 1.0, m_phi: float = 0.0):
    """Built-in scalar models used throughout the second-order checks."""
    if name == "psi2phi":
        return load_model(
            {
                "name": "psi2phi",
                "fields": [
                    {"name": "psi", "mass": m_psi, "dim": 1},
                    {"name": "phi", "mass": m_phi, "dim": 1},
                ],
                "vertices": {"L": "1/2 * psi^2 phi"},
            }
        )
    if name == "phi4":
        return load_model(
            {
                "name": "phi4",
                "fields": [{"name": "phi", "mass": m_phi, "dim": 1}],
                "vertices": {"L": "1/24 * phi^4"},
            }
        )
    raise ModelFormatError(f"unknown built-in model {name!r}")
