"""JSON interchange for exact values.

Scalars never appear as floating literals: rationals serialize as "p/q"
strings and Gaussian rationals as {"re": "p/q", "im": "p/q"} objects.
Polynomials are coefficient arrays lowest degree first, partitions are
integer arrays, operators carry a direction tag plus leading-first
rational-function coefficients.  Every emitter here is inverted exactly
by the matching parser.
"""

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .scalars import GaussianRational, format_scalar
from .poly import Poly, RationalFunction
from .series import SeriesAtInfinity
from .spaces import (
    DifferenceData,
    Partition,
    PolyData,
    QuasiExponential,
    QuasiExpSpace,
    QuasiMonomial,
    QuasiPolySpace,
)
from .oreops import DifferenceOperator, DifferentialOperator
from .pseudodiff import PseudoDifferenceOperator

FIELD_TAGS = ("Q", "Qi")


def emit_scalar(v):
    if isinstance(v, GaussianRational):
        return {"re": str(v.re), "im": str(v.im)}
    return str(Fraction(v))


def parse_scalar_json(obj, field_tag="Q"):
    if isinstance(obj, dict):
        if field_tag != "Qi":
            raise ValueError("complex scalar in a rational instance")
        if set(obj) != {"re", "im"}:
            raise ValueError("scalar object must have exactly re and im")
        return GaussianRational(Fraction(obj["re"]), Fraction(obj["im"]))
    if isinstance(obj, str):
        return Fraction(obj)
    if isinstance(obj, int):
        return Fraction(obj)
    raise ValueError("scalar must be a string, not a number literal")


def emit_poly(p):
    return [emit_scalar(c) for c in p.coeffs]


def parse_poly(arr, field_tag="Q"):
    return Poly([parse_scalar_json(c, field_tag) for c in arr])


def emit_rational_function(f):
    return {"num": emit_poly(f.num), "den": emit_poly(f.den)}


def parse_rational_function(obj, field_tag="Q"):
    return RationalFunction(parse_poly(obj["num"], field_tag),
                            parse_poly(obj["den"], field_tag))


def emit_partition(p):
    return list(p.parts)


def parse_partition(arr):
    return Partition(arr)


def emit_space(space):
    if isinstance(space, QuasiExpSpace):
        return {
            "kind": "quasi_exp_space",
            "generators": [
                {"base": emit_scalar(g.base), "poly": emit_poly(g.poly)}
                for g in space.generators
            ],
        }
    if isinstance(space, QuasiPolySpace):
        return {
            "kind": "quasi_poly_space",
            "generators": [
                {"exponent": emit_scalar(g.exponent), "poly": emit_poly(g.poly)}
                for g in space.generators
            ],
        }
    raise ValueError("not a serializable space")


def parse_space(obj, field_tag="Q"):
    kind = obj.get("kind")
    gens = obj.get("generators")
    if not isinstance(gens, list) or not gens:
        raise ValueError("space needs a nonempty generator list")
    if kind == "quasi_exp_space":
        return QuasiExpSpace([
            QuasiExponential(parse_scalar_json(g["base"], field_tag),
                             parse_poly(g["poly"], field_tag))
            for g in gens
        ])
    if kind == "quasi_poly_space":
        return QuasiPolySpace([
            QuasiMonomial(parse_scalar_json(g["exponent"], field_tag),
                          parse_poly(g["poly"], field_tag))
            for g in gens
        ])
    raise ValueError("unknown space kind")


def emit_function(f):
    if isinstance(f, QuasiExponential):
        return {"kind": "quasi_exponential",
                "base": emit_scalar(f.base), "poly": emit_poly(f.poly)}
    if isinstance(f, QuasiMonomial):
        return {"kind": "quasi_monomial",
                "exponent": emit_scalar(f.exponent), "poly": emit_poly(f.poly)}
    raise ValueError("not a serializable function")


def parse_function(obj, field_tag="Q"):
    kind = obj.get("kind")
    if kind == "quasi_exponential":
        return QuasiExponential(parse_scalar_json(obj["base"], field_tag),
                                parse_poly(obj["poly"], field_tag))
    if kind == "quasi_monomial":
        return QuasiMonomial(parse_scalar_json(obj["exponent"], field_tag),
                             parse_poly(obj["poly"], field_tag))
    raise ValueError("unknown function kind")


def emit_data(d):
    return {
        "alphas": [emit_scalar(a) for a in d.alphas],
        "mus": [emit_partition(m) for m in d.mus],
        "zs": [emit_scalar(z) for z in d.zs],
        "lambdas": [emit_partition(l) for l in d.lambdas],
    }


def parse_data(obj, kind, field_tag="Q"):
    alphas = tuple(parse_scalar_json(a, field_tag) for a in obj["alphas"])
    mus = tuple(parse_partition(m) for m in obj["mus"])
    zs = tuple(parse_scalar_json(z, field_tag) for z in obj["zs"])
    lambdas = tuple(parse_partition(l) for l in obj["lambdas"])
    if kind == "quasi_exp_space":
        return DifferenceData(alphas, mus, zs, lambdas)
    if kind == "quasi_poly_space":
        return PolyData(zs, lambdas, alphas, mus)
    raise ValueError("unknown space kind")


def emit_operator(op):
    if isinstance(op, DifferenceOperator):
        direction = "T" if op.direction == 1 else "T-"
    elif isinstance(op, DifferentialOperator):
        direction = op.kind
    else:
        raise ValueError("not a serializable operator")
    return {
        "direction": direction,
        "coeffs": [emit_rational_function(c) for c in op.coeffs],
    }


def parse_operator(obj, field_tag="Q"):
    direction = obj.get("direction")
    coeffs = [parse_rational_function(c, field_tag) for c in obj["coeffs"]]
    if direction in ("T", "T-"):
        return DifferenceOperator(coeffs, 1 if direction == "T" else -1)
    if direction in ("ddx", "euler"):
        return DifferentialOperator(coeffs, direction)
    raise ValueError("unknown operator direction")


def emit_series(s):
    if s.top is None:
        return {"x_top": None, "coeffs": [], "x_min": None}
    return {
        "x_top": s.top,
        "coeffs": [emit_scalar(c) for c in s.coeffs],
        "x_min": s.trunc,
    }


def emit_psd(p):
    out = []
    for m in sorted(p.terms, reverse=True):
        entry = {"t_exp": m}
        entry.update(emit_series(p.terms[m]))
        out.append(entry)
    return out


def parse_psd(arr, field_tag="Q"):
    terms = {}
    for entry in arr:
        m = entry["t_exp"]
        top = entry["x_top"]
        trunc = entry["x_min"]
        coeffs = [parse_scalar_json(c, field_tag) for c in entry["coeffs"]]
        if top is None:
            s = SeriesAtInfinity.zero(trunc)
        else:
            s = SeriesAtInfinity(top, coeffs, trunc)
        terms[m] = s
    return PseudoDifferenceOperator(terms)


def emit_matrix(matrix):
    return [[format_scalar(e) for e in row] for row in matrix.entries]


@dataclass(frozen=True)
class Instance:
    """Parsed contents of one instance file."""

    field_tag: str
    space: object = None
    data: object = None
    sector: dict = None
    options: dict = dataclass_field(default_factory=dict)

    @property
    def depth(self):
        return int(self.options.get("depth", 8))

    @property
    def tol(self):
        return float(self.options.get("tol", 1e-9))

    @property
    def seed(self):
        return self.options.get("seed")


def parse_instance(obj):
    """Validate and load an instance file already parsed from JSON."""
    if not isinstance(obj, dict):
        raise ValueError("instance file must be a JSON object")
    field_tag = obj.get("field", "Q")
    if field_tag not in FIELD_TAGS:
        raise ValueError("field must be Q or Qi")
    space = None
    data = None
    if "space" in obj:
        space = parse_space(obj["space"], field_tag)
        if "data" in obj:
            data = parse_data(obj["data"], obj["space"].get("kind"), field_tag)
            space = space.with_data(data)
    elif "data" in obj:
        raise ValueError("data block without a space")
    sector = None
    if "sector" in obj:
        sector = dict(obj["sector"])
        for key in ("l", "m"):
            if key in sector:
                sector[key] = tuple(int(v) for v in sector[key])
        for key in ("alphas", "zs"):
            if key in sector:
                sector[key] = tuple(parse_scalar_json(v, field_tag) for v in sector[key])
    if space is None and sector is None:
        raise ValueError("instance needs a space or a sector")
    options = obj.get("options", {})
    if not isinstance(options, dict):
        raise ValueError("options must be an object")
    return Instance(field_tag, space, data, sector, dict(options))


def emit_instance(inst):
    out = {"field": inst.field_tag}
    if inst.space is not None:
        out["space"] = emit_space(inst.space)
        if inst.data is not None:
            out["data"] = emit_data(inst.data)
    if inst.sector is not None:
        sector = {}
        for key, vals in inst.sector.items():
            if key in ("l", "m"):
                sector[key] = [int(v) for v in vals]
            else:
                sector[key] = [emit_scalar(v) for v in vals]
        out["sector"] = sector
    if inst.options:
        out["options"] = inst.options
    return out
