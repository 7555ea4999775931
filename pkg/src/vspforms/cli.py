"""Command-line front end.

Every command takes a JSON payload (``--input FILE`` or stdin) and prints a
single line of canonical JSON: sorted keys, canonical scalar strings.

Exit codes:
  0  success
  2  contract violation (malformed or invalid input)
  3  unsupported decision (e.g. rational points over Q(s,t)) or exhausted search budget
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import jsonschema

from vspforms import __version__
from vspforms.chow import pbundle_intersection, quadric_link_divisors, sarkisov_numerology
from vspforms.conics import (
    conic_invariants,
    descend_rational_point,
    has_rational_point,
    parametrize,
    polar_line,
    verify_point,
)
from vspforms.errors import ContractError, FactorizationLimitError, SearchLimitError, UnsupportedFieldError
from vspforms.involutions import (
    InvolutionBaseScheme,
    classify_base_scheme,
    involution_length,
    typeI_lattice_verify,
)
from vspforms.serialize import (
    canonical_dumps,
    decode_form,
    decode_line,
    decode_point,
    decode_quadratic_form,
    decode_scalar,
    decode_scheme,
    encode,
    encode_raw,
)
from vspforms.vsp import (
    A3_THEOREM,
    apolar_check,
    apolar_decompose,
    decide_cylinders,
    hilbert_rational_point,
    incidence_locus,
    is_special_line,
    random_line,
    stratum_classify,
    trisecant_line,
    veronese_images,
    veronese_pullback,
)

VERSION_TAG = f"vspforms/{__version__}"
EXIT_OK, EXIT_CONTRACT, EXIT_UNSUPPORTED = 0, 2, 3

# --- schemas ------------------------------------------------------------------------

_SCALAR = {"type": ["string", "integer"]}
_VEC3 = {"type": "array", "items": _SCALAR, "minItems": 3, "maxItems": 3}
_GRAM = {"type": "array", "items": _VEC3, "minItems": 3, "maxItems": 3}
_SCHEME = {
    "type": "object",
    "required": ["type"],
    "properties": {
        "type": {"enum": ["reduced", "double_plus_one", "curvilinear"]},
        "points": {"type": "array", "items": _VEC3, "minItems": 3, "maxItems": 3},
        "point": _VEC3,
        "direction": _VEC3,
        "other": _VEC3,
        "tangent": _VEC3,
        "second_order": _VEC3,
    },
}
_LINE = {
    "type": "object",
    "required": ["pluecker", "basis"],
    "properties": {
        "pluecker": {"type": "array", "items": _SCALAR, "minItems": 10, "maxItems": 10},
        "basis": {
            "type": "array",
            "minItems": 5,
            "maxItems": 5,
            "items": {"type": "array", "items": _SCALAR, "minItems": 6, "maxItems": 6},
        },
    },
}
_FORM_PROPS = {"gram": _GRAM, "form": {"type": "string"}}


def _schema(required=(), needs_form=True, **props):
    schema = {"type": "object", "properties": {**(_FORM_PROPS if needs_form else {}), **props}}
    if required:
        schema["required"] = list(required)
    if needs_form:
        schema["anyOf"] = [{"required": ["gram"]}, {"required": ["form"]}]
    return schema


@dataclass
class Outcome:
    result: object
    certificate: object = None
    status: str = "ok"


@dataclass(frozen=True)
class Command:
    handler: Callable[[dict, int | None], Outcome]
    schema: dict
    citation: str = ""
    needs_payload: bool = True


# --- handlers -------------------------------------------------------------------------


def _conic_invariants(p, seed):
    inv = conic_invariants(decode_quadratic_form(p))
    return Outcome({"smooth": inv.smooth, "det": encode(inv.det), "dual": encode(inv.dual.gram)})


def _conic_solve(p, seed):
    f = decode_quadratic_form(p)
    supplied = decode_point(p["witness"], "/witness") if "witness" in p else None
    if f.field != "QQ":
        f.require_smooth()
        if supplied is not None and verify_point(f, supplied.coords):
            return Outcome({"status": "solvable", "witness": encode(supplied), "witness_verified": True})
        raise UnsupportedFieldError(
            "decision unsupported over this field; "
            + ("supplied witness is not on the conic" if supplied else "no witness known"),
            pointer="/gram",
        )
    cert = has_rational_point(f)
    result = {"status": cert.status, "witness": encode(cert.witness)}
    if supplied is not None:
        result["witness_verified"] = verify_point(f, supplied.coords)
    return Outcome(result, {"obstruction": cert.obstruction, "legendre": list(cert.legendre)})


def _conic_polar(p, seed):
    f = decode_quadratic_form(p)
    u = decode_point(p["point"], "/point")
    line = polar_line(f, u.coords)
    return Outcome({"line": encode(line), "contains_point": line.contains(u.coords)})


def _conic_parametrize(p, seed):
    f = decode_quadratic_form(p)
    pt = decode_point(p["point"], "/point")
    par = parametrize(f, pt.coords)
    result = {"components": encode(par)}
    if "at" in p:
        t, u = (decode_scalar(v, f"/at/{i}") for i, v in enumerate(p["at"]))
        result["image"] = encode(par(t, u))
    return Outcome(result)


def _conic_descend(p, seed):
    f = decode_quadratic_form(p)
    pt = decode_point(p["point"], "/point")
    out = descend_rational_point(f, pt.coords)
    return Outcome({"point": encode(out), "on_conic": f(out.coords) == 0})


def _vsp_decompose(p, seed):
    dec = apolar_decompose(decode_quadratic_form(p))
    return Outcome(
        {"forms": [encode_raw(q) for q in dec.scheme.points], "coefficients": encode(dec.coefficients)}
    )


def _vsp_apolar(p, seed):
    res = apolar_check(decode_quadratic_form(p), decode_scheme(p["scheme"]))
    return Outcome({"apolar": res.apolar, "coefficients": encode(res.coefficients)})


def _vsp_stratum(p, seed):
    return Outcome({"stratum": stratum_classify(decode_quadratic_form(p), decode_scheme(p["scheme"])).value})


def _basis(p):
    if "basis" not in p:
        return None
    return tuple(tuple(decode_scalar(x, f"/basis/{i}/{j}") for j, x in enumerate(r)) for i, r in enumerate(p["basis"]))


def _vsp_trisecant(p, seed):
    f = decode_quadratic_form(p)
    z = decode_scheme(p["scheme"])
    basis = _basis(p)
    line = trisecant_line(f, z, basis)
    return Outcome({"line": encode(line), "images": encode(veronese_images(f, z, line.basis))})


def _vsp_pullback(p, seed):
    f = decode_quadratic_form(p)
    scheme = None
    if "line" in p:
        line = decode_line(p["line"])
    elif "scheme" in p:
        scheme = decode_scheme(p["scheme"])
        line = trisecant_line(f, scheme, _basis(p))
    elif p.get("random"):
        line = random_line(f, p.get("seed", seed if seed is not None else 0), _basis(p))
    else:
        raise ContractError("pullback needs 'line', 'scheme' or 'random': true", pointer="")
    res = veronese_pullback(f, line)
    result = {
        "line": encode(line),
        "conics": [str(c) for c in res.conics],
        "length": res.length,
        "length_d4": res.length_d4,
        "trisecant": res.trisecant,
    }
    if scheme is not None:
        result["contains_scheme"] = all(
            c(q.coords) == 0 for c in res.conics for q in scheme.support
        )
    return Outcome(result)


def _vsp_special(p, seed):
    f = decode_quadratic_form(p)
    x = decode_point(p["point"], "/point")
    return Outcome({"special": is_special_line(f, x.coords), "dual_value": encode(f.dual()(x.coords))})


def _vsp_incidence(p, seed):
    f = decode_quadratic_form(p)
    x = decode_point(p["point"], "/point")
    line = incidence_locus(f, x.coords)
    return Outcome({"line": encode(line), "contains_point": line.contains(x.coords)})


def _vsp_cylinders(p, seed):
    f = decode_quadratic_form(p)
    witness = decode_point(p["witness"], "/witness").coords if "witness" in p else None
    rep = decide_cylinders(f, witness)
    result = {
        "A2": rep.a2,
        "A3": rep.a3,
        "decision": rep.status,
        "witness": encode(rep.witness),
        "conic_point": encode(rep.conic_point),
        "witness_verified": rep.witness_verified,
        "note": rep.note,
    }
    certificate = {"A2": rep.a2_reference, "A3": rep.a3_reference}
    if rep.certificate is not None:
        certificate["conic"] = {
            "status": rep.certificate.status,
            "obstruction": rep.certificate.obstruction,
            "legendre": list(rep.certificate.legendre),
        }
    return Outcome(result, certificate, status="ok" if rep.status == "decided" else "unsupported")


def _vsp_hilbert(p, seed):
    f = decode_quadratic_form(p)
    x = hilbert_rational_point(f)
    return Outcome({"point": encode(x), "special": is_special_line(f, x.coords)})


def _involution_classify(p, seed):
    z = decode_scheme(p["scheme"])
    gens = None
    if "generators" in p:
        gens = tuple(decode_form(g, f"/generators/{i}") for i, g in enumerate(p["generators"]))
    return Outcome({"type": classify_base_scheme(InvolutionBaseScheme(z, gens)).value})


def _involution_type1(p, seed):
    pts = [decode_point(q, f"/points/{i}").coords for i, q in enumerate(p["points"])]
    rep = typeI_lattice_verify(*pts)
    return Outcome(
        {
            "basis": ["H", "e1", "e2", "e3"],
            "classes": {k: list(v) for k, v in rep.classes.items()},
            "identities": [
                {"name": c.name, "lhs": encode(c.lhs), "rhs": encode(c.rhs), "holds": c.holds}
                for c in rep.checks
            ],
            "all_hold": rep.all_hold,
        }
    )


def _involution_length(p, seed):
    gens = [decode_form(g, f"/generators/{i}") for i, g in enumerate(p["generators"])]
    return Outcome(involution_length(gens, p.get("degree", 3)))


def _chow_triple(p, seed):
    value = pbundle_intersection(p["c1"], p["c2"], p["classes"])
    return Outcome({"c1": p["c1"], "c2": p["c2"], "classes": p["classes"], "value": encode(value)})


def _chow_sarkisov(p, seed):
    return Outcome({k: encode(v) for k, v in sarkisov_numerology().items()})


def _chow_quadric(p, seed):
    rep = quadric_link_divisors()
    return Outcome(encode(rep))


_CLASS = {"oneOf": [{"type": "string"}, {"type": "array", "items": _SCALAR, "minItems": 2, "maxItems": 2}]}

COMMANDS: dict[str, Command] = {
    "conic invariants": Command(_conic_invariants, _schema()),
    "conic solve": Command(
        _conic_solve, _schema(witness=_VEC3), "Legendre's theorem; witness found inside Holzer's bound"
    ),
    "conic polar": Command(_conic_polar, _schema(["point"], point=_VEC3)),
    "conic parametrize": Command(
        _conic_parametrize,
        _schema(["point"], point=_VEC3, at={"type": "array", "items": _SCALAR, "minItems": 2, "maxItems": 2}),
    ),
    "conic descend": Command(
        _conic_descend, _schema(["point"], point=_VEC3), "conjugate tangent lines meet in a rational point"
    ),
    "vsp decompose": Command(_vsp_decompose, _schema()),
    "vsp apolar-check": Command(_vsp_apolar, _schema(["scheme"], scheme=_SCHEME)),
    "vsp stratum": Command(
        _vsp_stratum,
        _schema(["scheme"], scheme=_SCHEME),
        "orbits O, S2, C6 of VSP(f) versus reduced / double / triple apolar schemes",
    ),
    "vsp trisecant": Command(_vsp_trisecant, _schema(["scheme"], scheme=_SCHEME, basis=_LINE["properties"]["basis"])),
    "vsp pullback": Command(
        _vsp_pullback,
        _schema(
            scheme=_SCHEME, line=_LINE, random={"type": "boolean"}, seed={"type": "integer"},
            basis=_LINE["properties"]["basis"],
        ),
    ),
    "vsp special-line": Command(
        _vsp_special, _schema(["point"], point=_VEC3), "special lines of VSP(f) form the dual conic"
    ),
    "vsp incidence": Command(
        _vsp_incidence, _schema(["point"], point=_VEC3), "lines meeting a given line: its polar for the dual conic"
    ),
    "vsp cylinders": Command(_vsp_cylinders, _schema(witness=_VEC3), A3_THEOREM),
    "vsp hilbert-point": Command(
        _vsp_hilbert, _schema(), "Hilbert scheme of lines of VSP(f) is P(V*); tangent descent"
    ),
    "involution classify": Command(
        _involution_classify,
        _schema(["scheme"], needs_form=False, scheme=_SCHEME, generators={"type": "array", "items": {"type": "string"}}),
    ),
    "involution verify-type1": Command(
        _involution_type1,
        _schema(["points"], needs_form=False, points={"type": "array", "items": _VEC3, "minItems": 3, "maxItems": 3}),
        "canonical class -(e+e') and pullbacks (2e+e')/3, (e+2e')/3 on the blow-up of three points",
    ),
    "involution length": Command(
        _involution_length,
        _schema(
            ["generators"], needs_form=False,
            generators={"type": "array", "items": {"type": "string"}, "minItems": 1},
            degree={"type": "integer", "minimum": 3},
        ),
    ),
    "chow triple": Command(
        _chow_triple,
        _schema(
            ["c1", "c2", "classes"], needs_form=False,
            c1={"type": "integer"}, c2={"type": "integer"},
            classes={"type": "array", "items": _CLASS, "minItems": 3, "maxItems": 3},
        ),
        "Grothendieck relation xi^2 - c1 xi A + c2 A^2 = 0, xi A^2 = 1",
    ),
    "chow sarkisov": Command(
        _chow_sarkisov,
        _schema(needs_form=False),
        "K_Y^3 = K^3 - 6K^2.G + 12K.G^2 - 8(G+)^3 across the flop and the blow-down of a plane with normal bundle O(-1)",
        needs_payload=False,
    ),
    "chow quadric-link": Command(
        _chow_quadric,
        _schema(needs_form=False),
        "projection from a line onto a quadric threefold: -K_Y = 2 q_*Z'",
        needs_payload=False,
    ),
}


# --- dispatch -----------------------------------------------------------------------


def _pointer(error: jsonschema.ValidationError) -> str:
    return "".join(f"/{p}" for p in error.absolute_path)


def _envelope(name) -> dict:
    return {
        "version": VERSION_TAG,
        "command": name,
        "status": "error",
        "result": None,
        "certificate": None,
        "citation": None,
        "error": None,
    }


def run(request: dict, seed: int | None = None) -> tuple[dict, int]:
    """Execute one request envelope ``{"command", "payload", "version"?, "seed"?}``."""
    name = request.get("command")
    response = _envelope(name)
    cmd = COMMANDS.get(name)
    if cmd is None:
        response.update(status="error", error={"pointer": "/command", "message": f"unknown command {name!r}"})
        return response, EXIT_CONTRACT
    payload = request.get("payload") or {}
    seed = request.get("seed", seed)
    if cmd.citation:
        response["citation"] = cmd.citation
    errors = sorted(jsonschema.Draft202012Validator(cmd.schema).iter_errors(payload), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        response.update(status="error", error={"pointer": _pointer(err), "message": err.message})
        return response, EXIT_CONTRACT
    try:
        outcome = cmd.handler(payload, seed)
    except (UnsupportedFieldError, SearchLimitError, FactorizationLimitError) as exc:
        response.update(
            status="unsupported",
            error={"pointer": getattr(exc, "pointer", ""), "message": str(exc)},
        )
        return response, EXIT_UNSUPPORTED
    except ContractError as exc:
        response.update(status="error", error={"pointer": exc.pointer, "message": str(exc)})
        return response, EXIT_CONTRACT
    response["status"] = outcome.status
    response["result"] = outcome.result
    if outcome.certificate is not None:
        response["certificate"] = encode(outcome.certificate)
    return response, EXIT_OK if outcome.status == "ok" else EXIT_UNSUPPORTED


def run_batch(requests: list[dict], seed: int | None = None, jobs: int = 1) -> list[tuple[dict, int]]:
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda r: run(r, seed), requests))
    return [run(r, seed) for r in requests]


def _read_json(path: str | None):
    text = Path(path).read_text(encoding="utf-8") if path and path != "-" else sys.stdin.read()
    return text


def _parse_requests(text: str) -> list[dict]:
    text = text.strip()
    if not text:
        return []
    if text.startswith("["):
        return json.loads(text)
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def _emit(lines: list[str], output: str | None):
    data = "".join(line + "\n" for line in lines)
    if output and output != "-":
        Path(output).write_text(data, encoding="utf-8")
    else:
        sys.stdout.write(data)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vspforms",
        description="Exact computations for forms of the quintic del Pezzo threefold.",
        epilog="exit codes: 0 success, 2 contract violation, 3 unsupported decision or exhausted search. "
        "QF_MAX_SEARCH overrides the witness-search budget.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--batch", action="store_true", help="read request envelopes (JSON array or JSON lines)")
    parser.add_argument("--jobs", type=int, default=1, help="worker threads for --batch")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default=argparse.SUPPRESS, help="payload file (default: stdin)")
    common.add_argument("--output", default=argparse.SUPPRESS, help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    parser.add_argument("--input", default=argparse.SUPPRESS, help="request file for --batch")
    parser.add_argument("--output", default=argparse.SUPPRESS)
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    groups = parser.add_subparsers(dest="group")
    by_group: dict[str, argparse._SubParsersAction] = {}
    for name in COMMANDS:
        group, action = name.split(" ")
        if group not in by_group:
            gp = groups.add_parser(group, help=f"{group} commands")
            by_group[group] = gp.add_subparsers(dest="action", required=True)
        sp = by_group[group].add_parser(action, parents=[common], help=COMMANDS[name].citation or None)
        if name == "chow triple":
            sp.add_argument("--c1", type=int)
            sp.add_argument("--c2", type=int)
            sp.add_argument("--classes", help="three comma-separated classes, e.g. 'K,K,Gamma' or '-2*xi-4*A,...'")

    from vspforms.report import add_report_parser

    add_report_parser(groups, common)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = getattr(args, "seed", None)
    output = getattr(args, "output", None)
    if args.batch:
        requests = _parse_requests(_read_json(getattr(args, "input", None)))
        results = run_batch(requests, seed, args.jobs)
        _emit([canonical_dumps(r) for r, _ in results], output)
        return max((code for _, code in results), default=EXIT_OK)
    if args.group is None:
        parser.print_help()
        return EXIT_CONTRACT
    if args.group == "report":
        from vspforms.report import run_report

        response, code = run_report(args)
        _emit([canonical_dumps(response)], output)
        return code
    name = f"{args.group} {args.action}"
    cmd = COMMANDS[name]
    payload: dict = {}
    if name == "chow triple" and args.classes is not None:
        payload = {"c1": args.c1, "c2": args.c2, "classes": [c.strip() for c in args.classes.split(",")]}
    elif cmd.needs_payload or getattr(args, "input", None):
        raw = _read_json(getattr(args, "input", None))
        try:
            payload = json.loads(raw) if raw.strip() else {}
        except json.JSONDecodeError as exc:
            response = _envelope(name)
            response["error"] = {"pointer": "", "message": f"invalid JSON: {exc}"}
            _emit([canonical_dumps(response)], output)
            return EXIT_CONTRACT
        if isinstance(payload, dict) and "command" in payload and "payload" in payload:
            payload = payload["payload"]
    response, code = run({"command": name, "payload": payload}, seed)
    _emit([canonical_dumps(response)], output)
    return code


if __name__ == "__main__":
    sys.exit(main())
