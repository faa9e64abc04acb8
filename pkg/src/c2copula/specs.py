"""JSON copula specifications -> generator objects."""
from __future__ import annotations

import json
import math
import sys
from typing import Any

from .expr import compile_expression
from .families import ComplexFourierCoefficients, FGMParams, FourierCoefficients, FrankParams
from .generators import Generator, Independence, ProductGenerator
from .optimal import EpsilonFamily

__all__ = ["SpecError", "generator_from_spec", "read_spec"]

_FIELDS = {
    "independence": (set(), set()),
    "fgm": ({"theta"}, set()),
    "frank": ({"theta"}, set()),
    "fourier": (set(), {"a", "b", "c", "d"}),
    "complex_fourier": ({"alpha"}, set()),
    "epsilon_optimal": ({"epsilon"}, {"sign"}),
    "custom_product": ({"phi", "psi"}, set()),
}


class SpecError(ValueError):
    pass


def _number(obj, key):
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise SpecError(f"field {key!r} must be a finite number, got {val!r}")
    return float(val)


def _numbers(obj, key):
    val = obj.get(key, [0.0])
    if not isinstance(val, list) or not val:
        raise SpecError(f"field {key!r} must be a non-empty array of numbers")
    return [_number({key: x}, key) for x in val]


def generator_from_spec(obj: Any) -> Generator:
    """Validate a parsed spec object and build its generator.

    Unknown families, unknown or missing fields, and parameters outside the
    family's admissible range all raise :class:`SpecError`.
    """
    if not isinstance(obj, dict):
        raise SpecError("spec must be a JSON object")
    family = obj.get("family")
    if family not in _FIELDS:
        raise SpecError(f"unknown family {family!r}; expected one of {sorted(_FIELDS)}")
    required, optional = _FIELDS[family]
    keys = set(obj) - {"family"}
    if keys - required - optional:
        raise SpecError(f"unknown field(s) for {family}: {sorted(keys - required - optional)}")
    if required - keys:
        raise SpecError(f"missing field(s) for {family}: {sorted(required - keys)}")

    try:
        if family == "independence":
            return Independence()
        if family == "fgm":
            return FGMParams(_number(obj, "theta"))
        if family == "frank":
            return FrankParams(_number(obj, "theta"))
        if family == "fourier":
            return FourierCoefficients(*(_numbers(obj, k) for k in "abcd"))
        if family == "complex_fourier":
            entries = obj["alpha"]
            if not isinstance(entries, list):
                raise SpecError("field 'alpha' must be an array of {n, m, re, im} objects")
            alpha = {}
            for e in entries:
                if not isinstance(e, dict) or set(e) - {"n", "m", "re", "im"} or not {"n", "m"} <= set(e):
                    raise SpecError(f"bad alpha entry {e!r}")
                n, m = e["n"], e["m"]
                if not (isinstance(n, int) and isinstance(m, int)) or isinstance(n, bool):
                    raise SpecError(f"alpha indices must be integers, got {e!r}")
                re = _number(e, "re") if "re" in e else 0.0
                im = _number(e, "im") if "im" in e else 0.0
                if (n, m) in alpha:
                    raise SpecError(f"duplicate alpha index ({n}, {m})")
                alpha[(n, m)] = complex(re, im)
            return ComplexFourierCoefficients(alpha)
        if family == "epsilon_optimal":
            return EpsilonFamily(_number(obj, "epsilon"), obj.get("sign", "max"))
        phi_src, psi_src = obj["phi"], obj["psi"]
        return ProductGenerator(compile_expression(phi_src), compile_expression(psi_src),
                                phi_src=phi_src, psi_src=psi_src)
    except SpecError:
        raise
    except ValueError as exc:
        raise SpecError(str(exc)) from None


def read_spec(path: str) -> Any:
    """Parse JSON from ``path`` or stdin for ``"-"``. JSON errors propagate."""
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
