"""JSON-ready dictionaries for sequence, digit-set and family specifications.

Rationals travel as ``"p/q"`` strings so that no precision is lost.
"""

from __future__ import annotations

from .errors import ValidationError
from .sequences import (
    DoubleExpPow,
    Explicit,
    ExplicitPerLevel,
    Family,
    Geometric,
    GrowthFunction,
    Recurrence,
    TheoremFamily,
    UniformRange,
    as_rational,
    rational_str,
)


def _check_keys(d: dict, allowed: set, what: str) -> None:
    if not isinstance(d, dict):
        raise ValidationError(f"{what} must be a JSON object")
    unknown = set(d) - allowed
    if unknown:
        raise ValidationError(f"unknown {what} field(s): {', '.join(sorted(unknown))}")


def _req(d: dict, key: str):
    if key not in d:
        raise ValidationError(f"missing required field {key!r}")
    return d[key]


def growth_to_dict(g: GrowthFunction) -> dict:
    return {"kind": g.kind, "data": list(g.data)}


def growth_from_dict(d) -> GrowthFunction:
    if d is None or d == "one":
        return GrowthFunction()
    _check_keys(d, {"kind", "data"}, "growth function")
    return GrowthFunction(d.get("kind", "one"), tuple(d.get("data", ())))


def sequence_to_dict(seq) -> dict:
    if isinstance(seq, Geometric):
        return {"variant": "geometric", "b": rational_str(seq.b)}
    if isinstance(seq, DoubleExpPow):
        return {"variant": "double-exp", "N": seq.N, "base_form": seq.form, "f": growth_to_dict(seq.f)}
    if isinstance(seq, Recurrence):
        return {"variant": "recurrence", "a1": seq.a1}
    if isinstance(seq, Explicit):
        return {"variant": "explicit", "terms": [rational_str(t) for t in seq.terms]}
    raise ValidationError(f"not a sequence spec: {seq!r}")


def sequence_from_dict(d: dict):
    _check_keys(d, {"variant", "b", "N", "base_form", "f", "a1", "terms"}, "sequence")
    variant = d.get("variant")
    fields = set(d) - {"variant"}
    expected = {
        "geometric": {"b"},
        "double-exp": {"N", "base_form", "f"},
        "recurrence": {"a1"},
        "explicit": {"terms"},
    }
    if variant not in expected:
        raise ValidationError(f"unknown sequence variant {variant!r}")
    if fields - expected[variant]:
        raise ValidationError(f"fields {sorted(fields - expected[variant])} do not apply to {variant}")
    if variant == "geometric":
        return Geometric(as_rational(_req(d, "b")))
    if variant == "double-exp":
        kwargs = {"f": growth_from_dict(d.get("f"))}
        if "base_form" in d:
            kwargs["form"] = _req(d, "base_form")
        return DoubleExpPow(int(_req(d, "N")), **kwargs)
    if variant == "recurrence":
        return Recurrence(int(_req(d, "a1")))
    return Explicit(tuple(_req(d, "terms")))


def digits_to_dict(digits) -> dict:
    if isinstance(digits, UniformRange):
        return {"variant": "uniform-range", "K": digits.K}
    if isinstance(digits, TheoremFamily):
        return {
            "variant": "theorem-family",
            "s": rational_str(digits.s),
            "r": rational_str(digits.r),
            "g": growth_to_dict(digits.g),
            "h": growth_to_dict(digits.h),
            "fill": digits.fill,
        }
    if isinstance(digits, ExplicitPerLevel):
        return {"variant": "explicit-per-level", "levels": [list(lv) for lv in digits.levels]}
    raise ValidationError(f"not a digit-set spec: {digits!r}")


def digits_from_dict(d: dict):
    _check_keys(d, {"variant", "K", "s", "r", "g", "h", "fill", "levels"}, "digit set")
    variant = d.get("variant")
    if variant == "uniform-range":
        return UniformRange(int(_req(d, "K")))
    if variant == "theorem-family":
        kwargs = {}
        if "fill" in d:
            kwargs["fill"] = _req(d, "fill")
        return TheoremFamily(
            as_rational(_req(d, "s")),
            as_rational(_req(d, "r")),
            growth_from_dict(d.get("g")),
            growth_from_dict(d.get("h")),
            **kwargs,
        )
    if variant == "explicit-per-level":
        return ExplicitPerLevel(tuple(_req(d, "levels")))
    raise ValidationError(f"unknown digit-set variant {variant!r}")


def family_to_dict(family: Family) -> dict:
    out = {
        "theorem": family.theorem,
        "sequence": sequence_to_dict(family.sequence),
        "digits": digits_to_dict(family.digits),
    }
    if family.eta is not None:
        out["eta"] = rational_str(family.eta)
    return out


def family_from_dict(d: dict) -> Family:
    _check_keys(d, {"theorem", "sequence", "digits", "eta"}, "family")
    eta = d.get("eta")
    return Family(
        d.get("theorem", "none"),
        sequence_from_dict(_req(d, "sequence")),
        digits_from_dict(_req(d, "digits")),
        None if eta is None else as_rational(eta),
    )
