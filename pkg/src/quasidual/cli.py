"""Command line front end: exact instance files in, exact reports out.

Subcommands cover Wronskians, exponent profiles, fundamental and quotient
operators, the duality maps, pseudo-difference inversion, eigenvalue and
Hamiltonian duality checks, and two batch verification suites.  Exit code
0 means the computation or verification succeeded, 1 means a verification
failed (the report names the first exact discrepancy), 2 means bad input.
"""

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import ioformats
from .bethe import (
    SectorShape,
    dynamical_eigenvalue_g,
    gaudin_bae_residual,
    gaudin_eigenvalue_h,
    random_sector_space,
    verify_h_eq_minus_g,
    xxx_bae_residual,
)
from .fermionrep import (
    build_weight_subspace,
    dynamical_matrix,
    eigenvalue_parameters,
    gaudin_matrix,
    spectrum_membership,
    verify_hamiltonian_duality,
)
from .fermionrep import _all_weight_subspaces
from .oreops import (
    DifferenceOperator,
    DifferentialOperator,
    bispectral_transform,
    conjugate_kernel_functions,
    formal_conjugate_difference,
    formal_conjugate_differential,
    fundamental_difference_operator,
    fundamental_differential_operator,
    quotient_conjugate_space,
    quotient_conjugate_space_left,
    quotient_difference_operator,
    quotient_differential_operator,
    regularize_difference,
    regularize_differential,
    right_divide,
    sdenom_closed_form,
    t1_map,
    t2_map,
    t3_inverse,
    t3_map,
)
from .poly import Poly, RationalFunction
from .pseudodiff import fundamental_psd, psd_invert, verify_inverse_pair
from .scalars import FIELDS, format_scalar, parse_scalar
from .spaces import (
    DifferenceData,
    QuasiExponential,
    QuasiExpSpace,
    QuasiMonomial,
    QuasiPolySpace,
    discrete_exponents,
    discrete_wronskian,
    exponents_at,
    extract_difference_data,
    extract_poly_data,
    wronskian,
)


# ---------------------------------------------------------------------------
# human-readable rendering
# ---------------------------------------------------------------------------


def format_operator(op):
    """Operators in T / d/dx notation with exact coefficients."""
    if isinstance(op, DifferenceOperator):
        return str(op)
    if op.is_zero():
        return "0"
    sym = "(d/dx)" if op.kind == "ddx" else "(x*d/dx)"
    bits = []
    for k, c in sorted(op.terms(), key=lambda t: -t[0]):
        cs = str(c)
        if k == 0:
            bits.append(cs)
            continue
        power = f"{sym}^{k}" if k != 1 else sym
        bits.append(power if cs == "1" else f"({cs})*{power}")
    return " + ".join(bits)


def format_partition(p):
    return repr(p)


def _format_data(data):
    if isinstance(data, DifferenceData):
        bases = ", ".join(
            f"{format_scalar(a)} mu={mu!r}"
            for a, mu in zip(data.alphas, data.mus))
        points = ", ".join(
            f"{format_scalar(z)} lambda={lam!r}"
            for z, lam in zip(data.zs, data.lambdas))
        return f"bases: {bases}\npoints: {points}"
    exps = ", ".join(
        f"{format_scalar(z)} lambda={lam!r}"
        for z, lam in zip(data.zs, data.lambdas))
    marks = ", ".join(
        f"{format_scalar(a)} mu={mu!r}"
        for a, mu in zip(data.alphas, data.mus))
    return f"exponents: {exps}\nmarks: {marks}"


def format_space(space):
    out = "span{" + ", ".join(repr(g) for g in space.generators) + "}"
    if space.data is not None:
        out += "\n" + _format_data(space.data)
    return out


def format_series(s):
    if s.top is None:
        return "0"
    bits = []
    for i, c in enumerate(s.coeffs):
        if not c:
            continue
        p = s.top - i
        cs = format_scalar(c)
        if p == 0:
            bits.append(cs)
        elif cs == "1":
            bits.append("x" if p == 1 else f"x^{p}")
        else:
            bits.append(f"{cs}*x" if p == 1 else f"{cs}*x^{p}")
    body = " + ".join(bits) if bits else "0"
    if not s.is_exact():
        body += f" + O(x^{s.trunc - 1})"
    return body


def format_psd(p):
    if not p.terms:
        return "0"
    bits = []
    for m in sorted(p.terms, reverse=True):
        series = format_series(p.terms[m])
        if m == 0:
            bits.append(series)
        else:
            shift = "T" if m == 1 else f"T^{m}"
            bits.append(f"({series}) {shift}")
    return "\n+ ".join(bits)


def format_matrix(matrix):
    return "\n".join(
        "[" + ", ".join(format_scalar(v) for v in row) + "]"
        for row in matrix.to_lists())


def _first_operator_difference(a, b):
    """(slot, left, right) for the leading coefficient where a and b differ."""
    if isinstance(a, DifferenceOperator) and isinstance(b, DifferenceOperator):
        if a.direction != b.direction:
            return ("shift direction", str(a.direction), str(b.direction))
        sym = "T"
        powers = sorted(
            {m for m, _ in a.terms()} | {m for m, _ in b.terms()},
            key=lambda m: -abs(m))
    elif isinstance(a, DifferentialOperator) and isinstance(
            b, DifferentialOperator):
        if a.kind != b.kind:
            return ("operator form", a.kind, b.kind)
        sym = "D" if a.kind == "ddx" else "theta"
        powers = sorted(
            {k for k, _ in a.terms()} | {k for k, _ in b.terms()},
            reverse=True)
    else:
        return ("operator form", type(a).__name__, type(b).__name__)
    for p in powers:
        ca, cb = a.coeff(p), b.coeff(p)
        if ca != cb:
            return (f"{sym}^{p}", str(ca), str(cb))
    return None


def _expect(ok, message):
    if not ok:
        raise AssertionError(message)


def _expect_operator(label, got, want):
    if got == want:
        return
    diff = _first_operator_difference(got, want)
    if diff is None:
        raise AssertionError(f"{label}: operators differ")
    slot, left, right = diff
    raise AssertionError(
        f"{label}: first differing coefficient at {slot}: {left} != {right}")


# ---------------------------------------------------------------------------
# instance plumbing
# ---------------------------------------------------------------------------


def _thread_cap():
    raw = os.environ.get("QUASIDUAL_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError("QUASIDUAL_THREADS must be an integer") from None


def _read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON in {path}: {exc}") from None


def _load_instance(args):
    inst = ioformats.parse_instance(_read_json(args.file))
    if args.field is not None and args.field != inst.field_tag:
        raise ValueError(
            f"field flag {args.field} does not match "
            f"instance field {inst.field_tag}")
    return inst


def _field_tag(args, inst=None):
    if args.field is not None:
        return args.field
    if inst is not None:
        return inst.field_tag
    return "Q"


def _parse_scalar_list(text, tag):
    toks = [tok for tok in text.split(",") if tok.strip()]
    if not toks:
        raise ValueError("empty scalar list")
    return tuple(parse_scalar(tok, FIELDS[tag]) for tok in toks)


def _parse_int_list(text):
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(
            f"expected a comma separated integer list, got {text!r}"
        ) from None


def _space_from(inst):
    if inst.space is None:
        raise ValueError("this command needs an instance with a space")
    return inst.space


def _exp_space_with_data(inst, args, tag):
    space = _space_from(inst)
    if not isinstance(space, QuasiExpSpace):
        raise ValueError("this command needs a quasi-exponential space")
    z_flag = getattr(args, "z", None)
    if z_flag is not None:
        zs = _parse_scalar_list(z_flag, tag)
        return space.with_data(extract_difference_data(space, zs))
    if space.data is not None:
        return space
    raise ValueError("difference data required: add a data block or pass --z")


def _poly_space_with_data(inst):
    space = _space_from(inst)
    if not isinstance(space, QuasiPolySpace):
        raise ValueError("this command needs a quasi-polynomial space")
    if space.data is None:
        return space.with_data(extract_poly_data(space))
    return space


def _depth(args, inst=None):
    if args.depth is not None:
        if args.depth < 1:
            raise ValueError("depth must be a positive integer")
        return args.depth
    return inst.depth if inst is not None else 8


def _tol(args, inst=None):
    if args.tol is not None:
        if args.tol <= 0:
            raise ValueError("tol must be positive")
        return args.tol
    return inst.tol if inst is not None else 1e-9


def _emit(args, payload, human):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(human)
    return 0


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def cmd_wronskian(args):
    space = _space_from(_load_instance(args))
    if isinstance(space, QuasiExpSpace):
        f = discrete_wronskian(space.generators)
    else:
        f = wronskian(space.generators)
    return _emit(args, ioformats.emit_function(f), repr(f))


def cmd_exponents(args):
    inst = _load_instance(args)
    space = _space_from(inst)
    point = parse_scalar(args.at, FIELDS[_field_tag(args, inst)])
    if isinstance(space, QuasiExpSpace):
        exps = discrete_exponents(space, point)
    else:
        exps = exponents_at(space, point)
    human = "(" + ", ".join(str(e) for e in exps) + ")"
    return _emit(args, [int(e) for e in exps], human)


def cmd_fundamental(args):
    space = _space_from(_load_instance(args))
    if isinstance(space, QuasiExpSpace):
        op = fundamental_difference_operator(space)
    else:
        op = fundamental_differential_operator(space)
    return _emit(args, ioformats.emit_operator(op), format_operator(op))


def cmd_quotient(args):
    inst = _load_instance(args)
    space = _space_from(inst)
    if isinstance(space, QuasiExpSpace):
        pair = quotient_difference_operator(space)
    else:
        pair = quotient_differential_operator(_poly_space_with_data(inst))
    payload = {
        "quotient": ioformats.emit_operator(pair.quotient),
        "divisor": ioformats.emit_operator(pair.divisor),
        "recombined": ioformats.emit_operator(pair.recombined),
    }
    human = (f"quotient:   {format_operator(pair.quotient)}\n"
             f"divisor:    {format_operator(pair.divisor)}\n"
             f"recombined: {format_operator(pair.recombined)}")
    return _emit(args, payload, human)


def cmd_map(args):
    inst = _load_instance(args)
    tag = _field_tag(args, inst)
    name = args.map_name
    if name in ("t1", "t3inv"):
        space = _exp_space_with_data(inst, args, tag)
        out = t1_map(space) if name == "t1" else t3_inverse(space)
    else:
        space = _poly_space_with_data(inst)
        out = t2_map(space) if name == "t2" else t3_map(space)
    result = ioformats.Instance(tag, space=out, data=out.data)
    return _emit(args, ioformats.emit_instance(result), format_space(out))


def cmd_psd(args):
    inst = _load_instance(args)
    tag = _field_tag(args, inst)
    depth = _depth(args, inst)
    if args.psd_action == "invert":
        space = _space_from(inst)
        if isinstance(space, QuasiExpSpace):
            space = _exp_space_with_data(inst, args, tag)
        else:
            space = _poly_space_with_data(inst)
        s = fundamental_psd(space, depth)
        inv = psd_invert(s, depth)
        payload = {
            "fundamental": ioformats.emit_psd(s),
            "inverse": ioformats.emit_psd(inv),
        }
        human = (f"fundamental:\n{format_psd(s)}\n"
                 f"inverse:\n{format_psd(inv)}")
        return _emit(args, payload, human)
    space = _poly_space_with_data(inst)
    report = verify_inverse_pair(space, depth)
    if args.json:
        payload = {
            "passed": report.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in report.checks
            ],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for c in report.checks:
            line = f"{'PASS' if c.passed else 'FAIL'} {c.name}"
            if c.detail and not c.passed:
                line += f": {c.detail}"
            print(line)
    return 0 if report.passed else 1


def _shape_for(args, inst, data=None):
    if getattr(args, "shape", None):
        tokens = args.shape
        l = m = None
        for tok in tokens:
            if tok.startswith("l="):
                l = _parse_int_list(tok[2:])
            elif tok.startswith("m="):
                m = _parse_int_list(tok[2:])
            else:
                raise ValueError(
                    f"shape token {tok!r} must look like l=1,2 or m=2,1")
        if l is None or m is None:
            raise ValueError("shape needs both l= and m= entries")
        return SectorShape(l, m)
    if inst is not None and inst.sector is not None:
        sector = inst.sector
        if "l" in sector and "m" in sector:
            return SectorShape(sector["l"], sector["m"])
    if data is not None:
        return SectorShape.from_poly_data(data)
    raise ValueError("shape required: pass --shape l=... m=...")


def cmd_eigen(args):
    inst = _load_instance(args)
    tag = _field_tag(args, inst)
    which = args.eigen_which
    if which == "h":
        v = _poly_space_with_data(inst)
        n = len(v.data.alphas)
        hs = [gaudin_eigenvalue_h(v, i) for i in range(1, n + 1)]
        human = "h = [" + ", ".join(format_scalar(h) for h in hs) + "]"
        return _emit(args, [format_scalar(h) for h in hs], human)
    if which == "g":
        w = _exp_space_with_data(inst, args, tag)
        n = len(w.data.alphas)
        gs = [dynamical_eigenvalue_g(w, i) for i in range(1, n + 1)]
        human = "g = [" + ", ".join(format_scalar(g) for g in gs) + "]"
        return _emit(args, [format_scalar(g) for g in gs], human)
    v = _poly_space_with_data(inst)
    shape = _shape_for(args, inst, v.data)
    extra = ()
    if args.alpha is not None:
        extra = _parse_scalar_list(args.alpha, tag)
    report = verify_h_eq_minus_g(v, shape, extra)
    if args.json:
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        print("h = [" + ", ".join(format_scalar(x) for x in report.h) + "]")
        print("g = [" + ", ".join(format_scalar(x) for x in report.g) + "]")
        if report.passed:
            print("eigenvalue duality verified: h_i = -g_i for every i")
        else:
            bad = next(i for i, ok in enumerate(report.duality_ok) if not ok)
            print(f"first discrepancy at index {bad + 1}: "
                  f"h = {format_scalar(report.h[bad])}, "
                  f"-g = {format_scalar(-report.g[bad])}")
    return 0 if report.passed else 1


def _sector_parameters(args, tag):
    """Grid sizes, marks and exponents for the rep subcommands."""
    sector = {}
    if getattr(args, "file", None):
        inst = ioformats.parse_instance(_read_json(args.file))
        if args.field is not None and args.field != inst.field_tag:
            raise ValueError(
                f"field flag {args.field} does not match "
                f"instance field {inst.field_tag}")
        tag = inst.field_tag if args.field is None else tag
        if inst.sector is not None:
            sector = dict(inst.sector)
    if args.l is not None:
        sector["l"] = _parse_int_list(args.l)
    if args.m is not None:
        sector["m"] = _parse_int_list(args.m)
    if args.alpha is not None:
        sector["alphas"] = _parse_scalar_list(args.alpha, tag)
    if args.z is not None:
        sector["zs"] = _parse_scalar_list(args.z, tag)
    k = args.k
    n = args.n
    if k is None:
        k = len(sector["l"]) if "l" in sector else None
    if n is None:
        n = len(sector["m"]) if "m" in sector else None
    if k is None and "zs" in sector:
        k = len(sector["zs"])
    if n is None and "alphas" in sector:
        n = len(sector["alphas"])
    if k is None or n is None:
        raise ValueError("grid size required: pass --k and --n")
    if "alphas" not in sector or "zs" not in sector:
        raise ValueError("parameters required: pass --alpha and --z")
    return int(k), int(n), sector


def cmd_rep(args):
    tag = _field_tag(args)
    if args.rep_which == "duality":
        k, n, sector = _sector_parameters(args, tag)
        alphas, zs = sector["alphas"], sector["zs"]
        ws = None
        if "l" in sector and "m" in sector:
            ws = build_weight_subspace(k, n, sector["l"], sector["m"])
        ok = verify_hamiltonian_duality(k, n, alphas, zs, ws)
        if ok:
            return _emit(args, {"passed": True},
                         "hamiltonian duality verified: "
                         "rho(H_i) = -rho(G_i) on every sector")
        reflected = tuple(1 - z for z in zs)
        spaces = [ws] if ws is not None else list(_all_weight_subspaces(k, n))
        for space in spaces:
            for i in range(1, n + 1):
                gm = gaudin_matrix(i, alphas, zs, space)
                dm = -dynamical_matrix(i, reflected, alphas, space)
                if gm != dm:
                    shape = space.shape
                    if args.json:
                        print(json.dumps({
                            "passed": False,
                            "l": list(shape.l),
                            "m": list(shape.m),
                            "index": i,
                            "h_matrix": ioformats.emit_matrix(gm),
                            "minus_g_matrix": ioformats.emit_matrix(dm),
                        }, indent=2, sort_keys=True))
                        return 1
                    print("hamiltonian duality failed at sector "
                          f"l={tuple(shape.l)} m={tuple(shape.m)} index {i}")
                    print(f"rho(H_{i}):\n{format_matrix(gm)}")
                    print(f"-rho(G_{i}):\n{format_matrix(dm)}")
                    return 1
        print("hamiltonian duality failed")
        return 1
    if args.file is None:
        raise ValueError("spectrum needs an instance file")
    inst = _load_instance(args)
    v = _poly_space_with_data(inst)
    shape = _shape_for(args, inst, v.data)
    if any(x == 0 for x in shape.l) or any(x == 0 for x in shape.m):
        raise ValueError("spectrum membership needs a reduced shape")
    data = v.data
    report = verify_h_eq_minus_g(v, shape)
    space = build_weight_subspace(
        len(shape.l), len(shape.m), shape.l, shape.m)
    zh, zg = eigenvalue_parameters(data.zs, shape.l)
    rows = []
    for i in range(1, len(shape.m) + 1):
        in_h = spectrum_membership(
            gaudin_matrix(i, data.alphas, zh, space), report.h[i - 1])
        in_g = spectrum_membership(
            dynamical_matrix(i, zg, data.alphas, space), report.g[i - 1])
        rows.append({
            "index": i,
            "h": format_scalar(report.h[i - 1]),
            "g": format_scalar(report.g[i - 1]),
            "h_in_spectrum": bool(in_h),
            "g_in_spectrum": bool(in_g),
        })
    all_ok = report.passed and all(
        r["h_in_spectrum"] and r["g_in_spectrum"] for r in rows)
    if args.json:
        print(json.dumps(
            {"dimension": space.dim, "rows": rows, "passed": all_ok},
            indent=2, sort_keys=True))
    else:
        print(f"weight subspace dimension {space.dim}")
        for r in rows:
            print(f"index {r['index']}: h = {r['h']} "
                  f"(in spectrum: {r['h_in_spectrum']}), "
                  f"g = {r['g']} (in spectrum: {r['g_in_spectrum']})")
        if not all_ok:
            print("note: membership is stated under a nonvanishing "
                  "weight-function hypothesis; a failure here does not "
                  "contradict the eigenvalue identity")
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# randomized inputs for the suites
# ---------------------------------------------------------------------------

_BASE_POOL = tuple(
    Fraction(n, d) for n in (1, 2, 3, -1, -2, 5) for d in (1, 2))
_EXPONENT_POOL = (
    Fraction(1, 3), Fraction(1, 2), Fraction(2, 5),
    Fraction(5, 7), Fraction(3, 4), Fraction(-1, 5))


def _random_poly(rng, degree):
    coeffs = [Fraction(rng.randint(-4, 4), rng.choice((1, 2, 3)))
              for _ in range(degree + 1)]
    coeffs[0] = Fraction(rng.randint(1, 3), rng.choice((1, 2)))
    coeffs[0] *= rng.choice((1, -1))
    coeffs[-1] = Fraction(rng.randint(1, 3)) * rng.choice((1, -1))
    return Poly(coeffs)


def random_quasi_exponential(rng, max_degree=2):
    base = rng.choice(_BASE_POOL)
    return QuasiExponential(base, _random_poly(rng, rng.randint(0, max_degree)))


def random_exp_space(rng, max_classes=2, max_degree=3):
    """Independent generators: distinct degrees within each base class."""
    gens = []
    for base in rng.sample(_BASE_POOL, rng.randint(1, max_classes)):
        degrees = rng.sample(range(max_degree + 1), rng.randint(1, 2))
        for d in sorted(degrees):
            gens.append(QuasiExponential(base, _random_poly(rng, d)))
    return QuasiExpSpace(gens)


def random_poly_space(rng, max_classes=2, max_degree=3):
    gens = []
    for z in rng.sample(_EXPONENT_POOL, rng.randint(1, max_classes)):
        degrees = rng.sample(range(max_degree + 1), rng.randint(1, 2))
        for d in sorted(degrees):
            gens.append(QuasiMonomial(z, _random_poly(rng, d)))
    return QuasiPolySpace(gens)


def random_difference_space(rng):
    """Quasi-exponential space with consistent attached data."""
    v, _ = random_sector_space(rng)
    return t3_map(v)


def generate_instance(seed, k, n, bounds=None):
    """Deterministic admissible instance with k generators and n marks."""
    k, n = int(k), int(n)
    if not (1 <= k <= 3 and 1 <= n <= 3):
        raise ValueError("k and n must be between 1 and 3")
    max_dim, max_boxes = bounds if bounds is not None else (3, 9)
    rng = random.Random(seed)
    for _ in range(200):
        try:
            v, shape = random_sector_space(
                rng, max_dim=max_dim, max_boxes=max_boxes)
        except ValueError:
            continue
        if len(shape.l) == k and len(shape.m) == n:
            return ioformats.Instance(
                "Q", space=v, data=v.data, options={"seed": seed})
    raise ValueError("retry budget exhausted while generating an instance")


def cmd_generate(args):
    seed = args.seed if args.seed is not None else 1
    inst = generate_instance(seed, args.k, args.n)
    print(json.dumps(ioformats.emit_instance(inst), indent=2, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# golden examples
# ---------------------------------------------------------------------------


def _golden_exp_space():
    x = Poly.x()
    return QuasiExpSpace([
        QuasiExponential(Fraction(1), x - Fraction(2, 3)),
        QuasiExponential(Fraction(1), x * x),
        QuasiExponential(Fraction(2), x),
    ])


def _golden_mixed_space():
    x = Poly.x()
    return QuasiExpSpace([
        QuasiExponential(Fraction(1), x),
        QuasiExponential(Fraction(1), x * x),
        QuasiExponential(Fraction(-1, 2), x),
    ])


def _golden_poly_generators():
    x = Poly.x()
    return [
        QuasiMonomial(Fraction(0), x - 1),
        QuasiMonomial(Fraction(0), (x - 1) * (x - 1)),
        QuasiMonomial(Fraction(1, 2), x - 1),
    ]


def _golden_fundamental():
    x = Poly.x()
    return DifferenceOperator([
        RationalFunction(1),
        RationalFunction(-3 * (x + 3), 2 * (x + 2)),
        RationalFunction(0),
        RationalFunction(x + 3, 2 * x),
    ])


def _paper_discrete_wronskian():
    w = discrete_wronskian(_golden_exp_space().generators)
    want = QuasiExponential(
        Fraction(2),
        Poly.from_roots([Fraction(0), Fraction(1), Fraction(-8, 3)]))
    _expect(w == want, f"discrete Wronskian golden: {w!r} != {want!r}")


def _paper_discrete_exponents():
    w = _golden_exp_space()
    for point, want in (
            (Fraction(0), (3, 1, 0)),
            (Fraction(-8, 3), (3, 1, 0)),
            (Fraction(1), (3, 2, 0))):
        got = discrete_exponents(w, point)
        _expect(got == want,
                f"exponents at {point}: {got} != {want}")


def _paper_mixed_span_exponents():
    w = _golden_mixed_space()
    for point, want in (
            (Fraction(0), (3, 2, 1)),
            (Fraction(-1), (4, 2, 0)),
            (Fraction(-2), (3, 1, 0))):
        got = discrete_exponents(w, point)
        _expect(got == want,
                f"exponents at {point}: {got} != {want}")


def _paper_data_extraction():
    w = _golden_exp_space()
    data = extract_difference_data(w, (Fraction(-8, 3), Fraction(1)))
    _expect(sorted(data.alphas) == [1, 2],
            f"extracted bases {sorted(data.alphas)} != [1, 2]")
    lams = tuple(tuple(l.parts) for l in data.lambdas)
    _expect(lams == ((1,), (1, 1)),
            f"extracted exponent partitions {lams} != ((1,), (1, 1))")
    wd = _golden_mixed_space()
    d0 = extract_difference_data(wd, (Fraction(0),))
    _expect(tuple(d0.lambdas[0].parts) == (1, 1, 1),
            f"partition at 0: {d0.lambdas[0]!r} != (1,1,1)")
    d1 = extract_difference_data(wd, (Fraction(-1),))
    _expect(tuple(d1.lambdas[0].parts) == (2, 1),
            f"partition at -1: {d1.lambdas[0]!r} != (2,1)")


def _paper_differential_wronskian():
    gens = _golden_poly_generators()
    w = wronskian(gens)
    want = QuasiMonomial(
        Fraction(-3, 2),
        Poly.from_roots([Fraction(1)] * 3, lead=Fraction(-1, 4)))
    _expect(w == want, f"Wronskian golden: {w!r} != {want!r}")
    got = exponents_at(QuasiPolySpace(gens), Fraction(1))
    _expect(got == (3, 2, 1), f"exponents at 1: {got} != (3, 2, 1)")


def _paper_fundamental_operator():
    w = _golden_mixed_space()
    op = fundamental_difference_operator(w)
    _expect_operator("fundamental annihilator", op, _golden_fundamental())
    for g in w.generators:
        _expect(op.annihilates(g), f"annihilator misses {g!r}")


def _paper_operator_division():
    x = Poly.x()
    big = DifferenceOperator([
        RationalFunction(1), RationalFunction(-4), RationalFunction(4)])
    small = DifferenceOperator([
        RationalFunction(1), RationalFunction(-2 * (x + 1), x)])
    pair = right_divide(big, small)
    want = DifferenceOperator([
        RationalFunction(1), RationalFunction(-2 * x, x + 1)])
    _expect_operator("division quotient", pair.quotient, want)
    _expect(pair.remainder.is_zero(),
            f"division remainder {pair.remainder} != 0")
    _expect_operator("division recombined", pair.recombined, big)


def _paper_quotient_space():
    x = Poly.x()
    w1 = QuasiExpSpace([QuasiExponential(Fraction(2), x)])
    q = quotient_conjugate_space(w1)
    want = QuasiExpSpace([QuasiExponential(Fraction(1, 2), x + 1)])
    _expect(q == want, f"quotient space: {q!r} != {want!r}")
    op = fundamental_difference_operator(q, direction=-1)
    want_op = DifferenceOperator(
        [RationalFunction(1), RationalFunction(-2 * x, x + 1)], direction=-1)
    _expect_operator("quotient annihilator", op, want_op)
    _expect(quotient_conjugate_space_left(q) == w1,
            "left quotient does not undo the right quotient")
    wd = _golden_mixed_space()
    _expect(quotient_conjugate_space_left(quotient_conjugate_space(wd)) == wd,
            "left quotient does not undo the right quotient (3-dim)")


def _paper_hat_recomposition():
    from .oreops import _symbol_at_infinity
    w = _golden_mixed_space()
    pair = quotient_difference_operator(w)
    _expect(pair.remainder.is_zero(), "hat division left a remainder")
    sym = _symbol_at_infinity(pair.recombined)
    want = Poly.from_roots([Fraction(1)] * 3 + [Fraction(-1, 2)] * 2)
    _expect(sym == want, f"hat symbol {sym} != {want}")


def _paper_casorati_closed_form():
    x = Poly.x()
    ladder = [
        QuasiExponential(Fraction(2), Poly([Fraction(1)])),
        QuasiExponential(Fraction(2), x),
        QuasiExponential(Fraction(3), Poly([Fraction(1)])),
    ]
    full = discrete_wronskian(ladder)
    _expect(full.poly.is_constant(), "ladder Wronskian is not constant")
    want = sdenom_closed_form((Fraction(2), Fraction(3)), (2, 1))
    _expect(full.poly[0] == want and full.base == Fraction(12),
            f"closed form {full.poly[0]} != {want}")


def _paper_duality_map_data():
    w = _golden_exp_space()
    data = extract_difference_data(w, (Fraction(-8, 3), Fraction(1)))
    out = t1_map(w.with_data(data))
    _expect(out.data.zs == (Fraction(11, 3), Fraction(0)),
            f"transformed points {out.data.zs} != (11/3, 0)")
    lams = tuple(tuple(l.parts) for l in out.data.lambdas)
    _expect(lams == ((1,), (2,)),
            f"conjugated exponent partitions {lams} != ((1,), (2,))")
    mus = sorted(tuple(m.parts) for m in out.data.mus)
    _expect(mus == [(1,), (2,)],
            f"conjugated multiplicity partitions {mus} != [(1,), (2,)]")


def _paper_regularized_operators():
    x = Poly.x()
    w = _golden_mixed_space()
    s = fundamental_difference_operator(w)
    d0 = extract_difference_data(w, (Fraction(0),))
    _expect_operator("regularized form at 0",
                     regularize_difference(w, d0),
                     (x * (x + 1) * (x + 2)) * s)
    d1 = extract_difference_data(w, (Fraction(-1),))
    _expect_operator("regularized form at -1",
                     regularize_difference(w, d1),
                     (x * (x + 2)) * s)


def _expected_inverse_spans():
    v0 = QuasiPolySpace([
        QuasiMonomial(Fraction(-3), Poly([Fraction(1, 2), 0, 0, 1])),
        QuasiMonomial(Fraction(-3), Poly([0, 0, 1])),
        QuasiMonomial(Fraction(-3), Poly([Fraction(-1, 2), 1])),
    ])
    v1 = QuasiPolySpace([
        QuasiMonomial(Fraction(-3), Poly([-1, 0, 0, 1])),
        QuasiMonomial(Fraction(-3), Poly([-1, 1])),
    ])
    return v0, v1


def _paper_inverse_duality_spans():
    w = _golden_mixed_space()
    want0, want1 = _expected_inverse_spans()
    v0 = t3_inverse(w.with_data(extract_difference_data(w, (Fraction(0),))))
    _expect(v0 == want0, f"inverse-map span at 0: {v0!r} != {want0!r}")
    _expect(v0.data.zs == (Fraction(-3),),
            f"inverse-map exponents {v0.data.zs} != (-3,)")
    v1 = t3_inverse(w.with_data(extract_difference_data(w, (Fraction(-1),))))
    _expect(v1 == want1, f"inverse-map span at -1: {v1!r} != {want1!r}")


def _paper_bispectral_transpose():
    w = _golden_mixed_space()
    d0 = extract_difference_data(w, (Fraction(0),))
    reg = regularize_difference(w, d0)
    bis = bispectral_transform(reg)
    _expect(isinstance(bis, DifferentialOperator),
            "transpose of a difference operator is not differential")
    _expect_operator("transpose involution",
                     bispectral_transform(bis), reg)
    v0 = t3_inverse(w.with_data(d0))
    _expect_operator("transpose intertwines the regularized forms",
                     bispectral_transform(regularize_differential(v0)), reg)


def _paper_duality_roundtrip():
    w = _golden_mixed_space()
    for z in (Fraction(0), Fraction(-1)):
        v = t3_inverse(w.with_data(extract_difference_data(w, (z,))))
        back = t3_map(v)
        _expect(back == w, f"round trip through z={z} lost the space")
        _expect(back.data.zs == (z,),
                f"round trip data {back.data.zs} != ({z},)")


def paper_example_tests():
    return [
        ("paper-01-discrete-wronskian", _paper_discrete_wronskian),
        ("paper-02-discrete-exponents", _paper_discrete_exponents),
        ("paper-03-mixed-span-exponents", _paper_mixed_span_exponents),
        ("paper-04-data-extraction", _paper_data_extraction),
        ("paper-05-differential-wronskian", _paper_differential_wronskian),
        ("paper-06-fundamental-operator", _paper_fundamental_operator),
        ("paper-07-operator-division", _paper_operator_division),
        ("paper-08-quotient-space", _paper_quotient_space),
        ("paper-09-hat-recomposition", _paper_hat_recomposition),
        ("paper-10-casorati-closed-form", _paper_casorati_closed_form),
        ("paper-11-duality-map-data", _paper_duality_map_data),
        ("paper-12-regularized-operators", _paper_regularized_operators),
        ("paper-13-inverse-duality-spans", _paper_inverse_duality_spans),
        ("paper-14-bispectral-transpose", _paper_bispectral_transpose),
        ("paper-15-duality-roundtrip", _paper_duality_roundtrip),
    ]


# ---------------------------------------------------------------------------
# randomized property checks
# ---------------------------------------------------------------------------

_ONE_FN = QuasiExponential(Fraction(1), Poly([Fraction(1)]))


def _tprod(h, n):
    """h * Th * ... * T^{n-1}h; the empty product for n = 0."""
    out = _ONE_FN
    for j in range(n):
        out = out * h.shift(j)
    return out


def _delta(f):
    """(T - 1) applied to a quasi-exponential."""
    return QuasiExponential(f.base, f.base * f.poly.shift(1) - f.poly)


def check_wronskian_scale(rng, rounds=30):
    for _ in range(rounds):
        n = rng.randint(1, 3)
        fs = [random_quasi_exponential(rng) for _ in range(n)]
        h = random_quasi_exponential(rng)
        left = discrete_wronskian([h * f for f in fs])
        right = _tprod(h, n) * discrete_wronskian(fs)
        _expect(left == right,
                f"row scaling identity: {left!r} != {right!r}")


def check_wronskian_one_row(rng, rounds=30):
    for _ in range(rounds):
        n = rng.randint(1, 3)
        fs = [random_quasi_exponential(rng) for _ in range(n)]
        left = discrete_wronskian([_ONE_FN] + fs)
        right = discrete_wronskian([_delta(f) for f in fs])
        _expect(left == right,
                f"constant row identity: {left!r} != {right!r}")


def check_wronskian_ratio(rng, rounds=20):
    for _ in range(rounds):
        n = rng.randint(2, 3)
        base = rng.choice(_BASE_POOL)
        c = Fraction(rng.randint(1, 4)) * rng.choice((1, -1))
        f1 = QuasiExponential(base, Poly([c]))
        rest = [random_quasi_exponential(rng) for _ in range(n - 1)]
        left = discrete_wronskian([f1] + rest)
        ratios = [QuasiExponential(f.base / base, f.poly * (1 / c))
                  for f in rest]
        right = _tprod(f1, n) * discrete_wronskian(
            [_delta(r) for r in ratios])
        _expect(left == right,
                f"leading ratio identity: {left!r} != {right!r}")


def check_wronskian_composite(rng, rounds=12):
    for _ in range(rounds):
        n = rng.randint(1, 2)
        m = rng.randint(1, 3)
        fs = [random_quasi_exponential(rng, max_degree=1) for _ in range(n)]
        hs = [random_quasi_exponential(rng, max_degree=1) for _ in range(m)]
        left = discrete_wronskian(
            [discrete_wronskian(fs + [h]) for h in hs])
        shifted = discrete_wronskian([f.shift(1) for f in fs])
        right = _tprod(shifted, m - 1) * discrete_wronskian(fs + hs)
        _expect(left == right,
                f"composite Wronskian identity: {left!r} != {right!r}")


def check_difference_recomposition(rng, rounds=12):
    for _ in range(rounds):
        w = random_exp_space(rng)
        pair = quotient_difference_operator(w)
        _expect(pair.remainder.is_zero(), "hat division left a remainder")
        hat = pair.recombined
        expected_order = 0
        for base, polys in w.classes().items():
            top = max(p.degree for p in polys)
            expected_order += top + 1
            for j in range(top + 1):
                mono = QuasiExponential(base, Poly([Fraction(0)] * j + [1]))
                _expect(hat.annihilates(mono),
                        f"hat operator misses {mono!r}")
        _expect(hat.order == expected_order,
                f"hat order {hat.order} != {expected_order}")


def check_differential_recomposition(rng, rounds=12):
    for _ in range(rounds):
        v = random_poly_space(rng)
        pair = quotient_differential_operator(v)
        _expect(pair.remainder.is_zero(), "hat division left a remainder")
        hat = pair.recombined
        expected_order = 0
        for z, polys in v.classes().items():
            top = max(p.degree for p in polys)
            expected_order += top + 1
            for b in range(top + 1):
                mono = QuasiMonomial(z + b, Poly([Fraction(1)]))
                _expect(hat.annihilates(mono),
                        f"hat operator misses {mono!r}")
        _expect(hat.order == expected_order,
                f"hat order {hat.order} != {expected_order}")


def check_conjugate_annihilation(rng, rounds=12):
    for _ in range(rounds):
        w = random_exp_space(rng)
        s_dag = fundamental_difference_operator(w).conjugate()
        for h in conjugate_kernel_functions(w):
            _expect(s_dag.annihilates(h),
                    f"conjugate annihilator misses {h!r}")
        pair = quotient_difference_operator(w)
        q_dag = formal_conjugate_difference(pair.quotient)
        for g in quotient_conjugate_space(w).generators:
            _expect(q_dag.annihilates(g),
                    f"conjugate quotient misses {g!r}")


def check_dual_annihilation(rng, rounds=10):
    for _ in range(rounds):
        v = random_poly_space(rng, max_classes=2, max_degree=2)
        v = v.with_data(extract_poly_data(v))
        pair = quotient_differential_operator(v)
        conj = formal_conjugate_differential(pair.quotient)
        for g in t2_map(v).generators:
            _expect(conj.annihilates(g),
                    f"conjugate quotient misses {g!r}")


def _class_partitions(space):
    """base -> multiplicity partition, read off the echelon degrees."""
    out = {}
    for base, polys in space.canonical_classes().items():
        degrees = sorted((p.degree for p in polys), reverse=True)
        r = len(degrees)
        out[base] = tuple(d - r + j for j, d in enumerate(degrees, start=1))
    return out


def _conjugate_parts(parts):
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= i)
                 for i in range(1, parts[0] + 1))


def check_quotient_dimensions(rng, rounds=12):
    for _ in range(rounds):
        w = random_exp_space(rng)
        mus = _class_partitions(w)
        q = quotient_conjugate_space(w)
        want_dim = sum(mu[0] for mu in mus.values())
        _expect(q.dim == want_dim,
                f"quotient dimension {q.dim} != {want_dim}")
        got = _class_partitions(q)
        for base, mu in mus.items():
            conj = _conjugate_parts(mu)
            want = tuple(
                sorted((mu[0] + conj[j - 1] - j for j in range(1, mu[0] + 1)),
                       reverse=True))
            inv = 1 / base
            _expect(inv in got, f"quotient class {format_scalar(inv)} missing")
            degrees = sorted(
                (p.degree
                 for p in q.canonical_classes()[inv]), reverse=True)
            _expect(tuple(degrees) == want,
                    f"quotient degrees {degrees} != {want} "
                    f"in class {format_scalar(inv)}")


def check_quotient_involution(rng, rounds=12):
    for _ in range(rounds):
        w = random_exp_space(rng)
        _expect(quotient_conjugate_space_left(quotient_conjugate_space(w)) == w,
                "left quotient does not undo the right quotient")
        q = quotient_conjugate_space(w)
        _expect(quotient_conjugate_space(quotient_conjugate_space_left(q)) == q,
                "right quotient does not undo the left quotient")


def check_casorati_closed_form(rng, rounds=12):
    for _ in range(rounds):
        count = rng.randint(1, 3)
        alphas = tuple(rng.sample(_BASE_POOL, count))
        ps = tuple(rng.randint(1, 3) for _ in range(count))
        ladder = [
            QuasiExponential(a, Poly([Fraction(0)] * j + [1]))
            for a, p in zip(alphas, ps) for j in range(p)
        ]
        full = discrete_wronskian(ladder)
        _expect(full.poly.is_constant(),
                "ladder Wronskian is not constant")
        want = sdenom_closed_form(alphas, ps)
        _expect(full.poly[0] == want,
                f"closed form {full.poly[0]} != {want}")


def check_exponent_transform(rng, rounds=8):
    for _ in range(rounds):
        w = random_difference_space(rng)
        data = w.data
        out = t1_map(w)
        _expect(out.data.zs == tuple(1 - z for z in data.zs),
                f"points {out.data.zs} not reflected")
        want_l = tuple(l.conjugate() for l in data.lambdas)
        _expect(out.data.lambdas == want_l,
                f"exponent partitions {out.data.lambdas} != {want_l}")
        want_m = tuple(m.conjugate() for m in data.mus)
        _expect(out.data.mus == want_m,
                f"multiplicity partitions {out.data.mus} != {want_m}")


def check_bispectral_involution(rng, rounds=15):
    for _ in range(rounds):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            terms[rng.randint(0, 3)] = RationalFunction(
                _random_poly(rng, rng.randint(0, 3)))
        op = DifferentialOperator.from_terms(terms, "euler")
        _expect_operator("transpose involution",
                         bispectral_transform(bispectral_transform(op)), op)


def check_bispectral_intertwine(rng, rounds=6):
    for _ in range(rounds):
        v, _ = random_sector_space(rng)
        left = regularize_difference(t3_map(v))
        right = bispectral_transform(regularize_differential(v))
        _expect_operator("transpose intertwines the regularized forms",
                         left, right)


def check_psd_inverse(rng, rounds=3, depth=8):
    for _ in range(rounds):
        v, _ = random_sector_space(rng, max_dim=2, max_boxes=3)
        report = verify_inverse_pair(v, depth)
        if report.passed:
            continue
        bad = report.failures()[0]
        raise AssertionError(f"{bad.name}: {bad.detail}")


def check_eigenvalue_duality(rng, rounds=6):
    for _ in range(rounds):
        v, shape = random_sector_space(rng)
        report = verify_h_eq_minus_g(v, shape)
        if report.passed:
            continue
        bad = next(i for i, ok in enumerate(report.duality_ok) if not ok)
        raise AssertionError(
            f"eigenvalue duality failed at index {bad + 1}: "
            f"h = {format_scalar(report.h[bad])}, "
            f"-g = {format_scalar(-report.g[bad])}")


def _distinct_scalars(rng, count, forbid_zero=False):
    pool = [Fraction(a, b) for a in range(-6, 7) for b in (1, 2, 3)
            if a or not forbid_zero]
    vals = []
    while len(vals) < count:
        v = rng.choice(pool)
        if v not in vals:
            vals.append(v)
    return tuple(vals)


def check_hamiltonian_duality(rng, rounds=3):
    for _ in range(rounds):
        k = rng.randint(1, 2)
        n = rng.randint(1, 2)
        alphas = _distinct_scalars(rng, n, forbid_zero=True)
        zs = _distinct_scalars(rng, k)
        _expect(verify_hamiltonian_duality(k, n, alphas, zs),
                f"hamiltonian duality failed on the {k} x {n} grid "
                f"at alphas={alphas} zs={zs}")


def check_bethe_residuals(rng, rounds=3, tol=1e-9):
    done = 0
    for _ in range(rounds * 10):
        if done >= rounds:
            break
        v, shape = random_sector_space(rng)
        report = gaudin_bae_residual(v, shape, tol)
        if not report.admissible:
            continue
        _expect(report.max_residual <= tol,
                f"Gaudin residual {report.max_residual} above {tol}")
        _expect(report.eigenvalue_gap <= tol,
                f"eigenvalue gap {report.eigenvalue_gap} above {tol}")
        w = t1_map(t3_map(v))
        try:
            xreport = xxx_bae_residual(w, shape, tol)
        except ValueError:
            continue
        _expect(xreport.passed,
                f"XXX residual {xreport.max_residual} above {tol}")
        done += 1
    _expect(done >= rounds,
            f"only {done} admissible draws out of {rounds} requested")


def property_tests(seed, depth, tol):
    cases = [
        ("prop-01-wronskian-scale", check_wronskian_scale, {}),
        ("prop-02-wronskian-one-row", check_wronskian_one_row, {}),
        ("prop-03-wronskian-ratio", check_wronskian_ratio, {}),
        ("prop-04-wronskian-composite", check_wronskian_composite, {}),
        ("prop-05-difference-recomposition",
         check_difference_recomposition, {}),
        ("prop-06-differential-recomposition",
         check_differential_recomposition, {}),
        ("prop-07-conjugate-annihilation", check_conjugate_annihilation, {}),
        ("prop-08-dual-annihilation", check_dual_annihilation, {}),
        ("prop-09-quotient-dimensions", check_quotient_dimensions, {}),
        ("prop-10-quotient-involution", check_quotient_involution, {}),
        ("prop-11-casorati-closed-form", check_casorati_closed_form, {}),
        ("prop-12-exponent-transform", check_exponent_transform, {}),
        ("prop-13-bispectral-involution", check_bispectral_involution, {}),
        ("prop-14-bispectral-intertwine", check_bispectral_intertwine, {}),
        ("prop-15-psd-inverse", check_psd_inverse, {"depth": depth}),
        ("prop-16-eigenvalue-duality", check_eigenvalue_duality, {}),
        ("prop-17-hamiltonian-duality", check_hamiltonian_duality, {}),
        ("prop-18-bethe-residuals", check_bethe_residuals, {"tol": tol}),
    ]
    tests = []
    for tid, fn, extra in cases:
        def run(fn=fn, tid=tid, extra=extra):
            fn(random.Random(f"{seed}:{tid}"), **extra)
        tests.append((tid, run))
    return tests


def _run_tests(tests):
    cap = _thread_cap()

    def run(item):
        tid, fn = item
        try:
            fn()
            return (tid, True, "")
        except Exception as exc:
            return (tid, False, str(exc) or type(exc).__name__)

    if cap > 1 and len(tests) > 1:
        with ThreadPoolExecutor(max_workers=cap) as pool:
            results = list(pool.map(run, tests))
    else:
        results = [run(t) for t in tests]
    return sorted(results)


def cmd_suite(args):
    if args.suite_name == "paper-examples":
        tests = paper_example_tests()
    else:
        seed = args.seed if args.seed is not None else 0
        tests = property_tests(seed, _depth(args), _tol(args))
    results = _run_tests(tests)
    if args.json:
        payload = {
            "suite": args.suite_name,
            "results": [
                {"id": tid, "passed": ok, "detail": detail}
                for tid, ok, detail in results
            ],
            "passed": all(ok for _, ok, _ in results),
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for tid, ok, detail in results:
            line = f"{'PASS' if ok else 'FAIL'} {tid}"
            if detail and not ok:
                line += f": {detail}"
            print(line)
    return 0 if all(ok for _, ok, _ in results) else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quasidual",
        description="Exact operators, duality maps and eigenvalue checks "
                    "for quasi-exponential and quasi-polynomial spaces.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit machine readable JSON")
    common.add_argument("--field", choices=("Q", "Qi"), default=None,
                        help="scalar field for command line values")
    common.add_argument("--depth", type=int, default=None,
                        help="series truncation depth (default 8)")
    common.add_argument("--tol", type=float, default=None,
                        help="numeric tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized draws")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wronskian", parents=[common],
                       help="Wronskian of the instance space")
    p.add_argument("file")
    p.set_defaults(handler=cmd_wronskian)

    p = sub.add_parser("exponents", parents=[common],
                       help="exponent profile of the space at a point")
    p.add_argument("file")
    p.add_argument("--at", required=True,
                   help="evaluation point (exact scalar)")
    p.set_defaults(handler=cmd_exponents)

    p = sub.add_parser("fundamental", parents=[common],
                       help="monic annihilator of the instance space")
    p.add_argument("file")
    p.set_defaults(handler=cmd_fundamental)

    p = sub.add_parser("quotient", parents=[common],
                       help="quotient operator and its recomposition")
    p.add_argument("file")
    p.set_defaults(handler=cmd_quotient)

    p = sub.add_parser("map", parents=[common],
                       help="apply one of the duality maps")
    p.add_argument("map_name", choices=("t1", "t2", "t3", "t3inv"))
    p.add_argument("file")
    p.add_argument("--z", default=None,
                   help="comma separated singular points for data extraction")
    p.set_defaults(handler=cmd_map)

    p = sub.add_parser("psd", parents=[common],
                       help="pseudo-difference inversion and verification")
    p.add_argument("psd_action", choices=("invert", "verify"))
    p.add_argument("file")
    p.add_argument("--z", default=None,
                   help="comma separated singular points for data extraction")
    p.set_defaults(handler=cmd_psd)

    p = sub.add_parser("eigen", parents=[common],
                       help="exact eigenvalues and the duality check")
    p.add_argument("eigen_which", choices=("h", "g", "duality"))
    p.add_argument("file")
    p.add_argument("--shape", nargs="+", default=None,
                   metavar="l=1,2 m=2,1",
                   help="sector shape as l= and m= integer lists")
    p.add_argument("--alpha", default=None,
                   help="comma separated extension marks")
    p.add_argument("--z", default=None,
                   help="comma separated singular points for data extraction")
    p.set_defaults(handler=cmd_eigen)

    p = sub.add_parser("rep", parents=[common],
                       help="Hamiltonian matrices on weight subspaces")
    p.add_argument("rep_which", choices=("duality", "spectrum"))
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--alpha", default=None,
                   help="comma separated marks (n values)")
    p.add_argument("--z", default=None,
                   help="comma separated exponents (k values)")
    p.add_argument("--l", default=None,
                   help="comma separated row margins")
    p.add_argument("--m", default=None,
                   help="comma separated column margins")
    p.add_argument("--shape", nargs="+", default=None,
                   metavar="l=1,2 m=2,1",
                   help="sector shape as l= and m= integer lists")
    p.set_defaults(handler=cmd_rep)

    p = sub.add_parser("suite", parents=[common],
                       help="batch verification suites")
    p.add_argument("suite_name", choices=("paper-examples", "properties"))
    p.set_defaults(handler=cmd_suite)

    p = sub.add_parser("generate", parents=[common],
                       help="emit a reproducible admissible instance")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=cmd_generate)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
