"""JSON command-line front end.

One request per invocation, read from a file or stdin, one JSON response on
stdout.  Responses are byte-identical for identical requests: keys are
sorted, all numbers are serialized as exact rational strings or explicit
float literals, and verification batches are seeded.

Request shape (unknown top-level keys are rejected)::

    {
      "command": "transform" | "roots" | "moments" | "verify",
      "transform": {"family": "...", "params": {...}},
      "input": {"roots": ["1", "3/2"]} or {"coeffs": ["2", "-3", "1"]},
      "precision_bits": 256,
      "moments": {"k_max": 6, "mu": ["1/2", "1"]},
      "verify": {"instances": 50, "max_degree": 6, "seed": 0, "k_max": 4},
      "tolerances": {"ratio_identity": "1/1000000000"}
    }

Exit codes: 0 ok, 1 validation problem (codes bad_request, invalid_params,
degenerate_basis), 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional, Tuple

from .catalog import Q_FAMILIES, TransformSpec, make_transform
from .errors import (
    DegenerateBasisError,
    OracleError,
    PoleError,
    ValidationError,
    ZeroMapError,
)
from .basis import apply_zero_map
from .moments import check_q_functional, check_ratio_identity, moment_closed
from .poly import Polynomial, isolate_real_roots, refine_root
from .scalar import Scalar
from .verify import (
    default_mu_samples,
    regularity_det,
    run_zero_map_batch,
)

_DEFAULT_PRECISION = 256
_ROOT_WIDTH = Scalar.exact(1) / 2**32
_COMMANDS = ("transform", "roots", "moments", "verify")
_KNOWN_KEYS = {
    "command",
    "transform",
    "input",
    "precision_bits",
    "moments",
    "verify",
    "tolerances",
}


class _BadRequest(Exception):
    pass


def _scalar_str(s: Scalar) -> str:
    return str(s)


def _parse_scalar(text, what: str) -> Scalar:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise _BadRequest(f"{what} must be a rational string or integer")
    try:
        return Scalar.exact(text)
    except ZeroMapError as exc:
        raise _BadRequest(f"{what}: {exc}") from exc


def _parse_scalar_list(values, what: str) -> List[Scalar]:
    if not isinstance(values, list) or not values:
        raise _BadRequest(f"{what} must be a nonempty list")
    return [_parse_scalar(v, what) for v in values]


def _parse_transform(request) -> TransformSpec:
    block = request.get("transform")
    if not isinstance(block, dict) or "family" not in block:
        raise _BadRequest("transform.family is required for this command")
    family = block["family"]
    params = block.get("params", {})
    if not isinstance(params, dict):
        raise _BadRequest("transform.params must be an object")
    return make_transform(family, params)


def _parse_input_polynomial(request) -> Polynomial:
    block = request.get("input")
    if not isinstance(block, dict):
        raise _BadRequest("input with roots or coeffs is required")
    has_roots = "roots" in block
    has_coeffs = "coeffs" in block
    if has_roots == has_coeffs:
        raise _BadRequest("input must contain exactly one of roots, coeffs")
    if has_roots:
        return Polynomial.from_roots(_parse_scalar_list(block["roots"], "input.roots"))
    return Polynomial(_parse_scalar_list(block["coeffs"], "input.coeffs"))


def _root_intervals(p: Polynomial) -> List[List[str]]:
    if p.degree < 1:
        return []
    out = []
    for interval in isolate_real_roots(p).intervals:
        lo, hi = refine_root(p, interval, _ROOT_WIDTH)
        out.append([_scalar_str(lo), _scalar_str(hi)])
    return out


def _cmd_transform(request, precision_bits: int) -> dict:
    spec = _parse_transform(request)
    p = _parse_input_polynomial(request)
    image = apply_zero_map(p, spec)
    return {
        "output_coeffs": [_scalar_str(c) for c in image.coeffs],
        "root_intervals": _root_intervals(image),
        "target": str(spec.target),
    }


def _cmd_roots(request, precision_bits: int) -> dict:
    p = _parse_input_polynomial(request)
    if p.is_zero():
        raise ValidationError("cannot isolate roots of the zero polynomial")
    rs = isolate_real_roots(p)
    return {
        "root_intervals": _root_intervals(p),
        "real_count": rs.real_count,
    }


def _cmd_moments(request, precision_bits: int) -> dict:
    spec = _parse_transform(request)
    block = request.get("moments")
    if not isinstance(block, dict):
        raise _BadRequest("moments options are required for this command")
    k_max = block.get("k_max", 6)
    if not isinstance(k_max, int) or k_max < 0:
        raise _BadRequest("moments.k_max must be a nonnegative integer")
    mus = _parse_scalar_list(block.get("mu", []), "moments.mu")
    table = []
    for mu in mus:
        values = [moment_closed(spec, k, mu) for k in range(k_max + 1)]
        table.append(
            {
                "mu": _scalar_str(mu),
                "moments": [_scalar_str(v) for v in values],
                "ratios": [
                    _scalar_str(values[k + 1] / values[k])
                    for k in range(k_max)
                    if not values[k].is_zero()
                ],
            }
        )
    return {"table": table}


def _cmd_verify(request, precision_bits: int, seed_override: Optional[int]) -> dict:
    spec = _parse_transform(request)
    block = request.get("verify", {})
    if not isinstance(block, dict):
        raise _BadRequest("verify options must be an object")
    instances = block.get("instances", 50)
    max_degree = block.get("max_degree", 6)
    seed = block.get("seed", 0)
    k_max = block.get("k_max", 4)
    for name, value in (
        ("instances", instances),
        ("max_degree", max_degree),
        ("seed", seed),
        ("k_max", k_max),
    ):
        if not isinstance(value, int) or (name != "seed" and value < 1):
            raise _BadRequest(f"verify.{name} must be a positive integer")
    if seed_override is not None:
        seed = seed_override
    tolerances = request.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise _BadRequest("tolerances must be an object")
    ratio_tol = tolerances.get("ratio_identity")

    # the finite families are regular only up to their atom count, and their
    # usable ratio indices are bounded too; clamp rather than fail
    mu_count = 3
    if spec.degree_cap is not None:
        mu_count = min(mu_count, spec.degree_cap + 1)
        k_max = min(k_max, spec.degree_cap)
    if spec.pair_cap is not None:
        k_max = min(k_max, spec.pair_cap)
    mus = default_mu_samples(spec, mu_count)
    regularity = regularity_det(spec, mus)
    report = {
        "zero_map": run_zero_map_batch(
            spec, instances=instances, max_degree=max_degree, seed=seed
        ).to_dict(),
        "ratio_identity": check_ratio_identity(
            spec,
            k_max,
            mus,
            tolerance=_parse_scalar(ratio_tol, "tolerances.ratio_identity")
            if ratio_tol is not None
            else None,
            precision_bits=precision_bits,
        ).to_dict(),
        "regularity_det": _scalar_str(regularity),
    }
    q_ok = True
    if spec.family in Q_FAMILIES:
        residuals = [check_q_functional(spec, k, mus[0]) for k in range(k_max + 1)]
        report["q_functional_residuals"] = [_scalar_str(r) for r in residuals]
        q_ok = all(r.is_zero() for r in residuals)
    report["passed"] = (
        report["zero_map"]["passed"]
        and report["ratio_identity"]["passed"]
        and not regularity.is_zero()
        and q_ok
    )
    return {"report": report}


def run(request: dict, seed_override: Optional[int] = None) -> Tuple[dict, int]:
    """Dispatch one request; returns (response, exit_code)."""
    try:
        if not isinstance(request, dict):
            raise _BadRequest("request must be a JSON object")
        unknown = set(request) - _KNOWN_KEYS
        if unknown:
            raise _BadRequest(f"unknown request keys: {sorted(unknown)}")
        command = request.get("command")
        if command not in _COMMANDS:
            raise _BadRequest(f"command must be one of {list(_COMMANDS)}")
        precision_bits = request.get("precision_bits", _DEFAULT_PRECISION)
        if not isinstance(precision_bits, int) or precision_bits < 64:
            raise _BadRequest("precision_bits must be an integer >= 64")
        if command == "transform":
            body = _cmd_transform(request, precision_bits)
        elif command == "roots":
            body = _cmd_roots(request, precision_bits)
        elif command == "moments":
            body = _cmd_moments(request, precision_bits)
        else:
            body = _cmd_verify(request, precision_bits, seed_override)
        response = {"status": "ok", "error": None}
        response.update(body)
        return response, 0
    except _BadRequest as exc:
        return _error("bad_request", str(exc)), 1
    except DegenerateBasisError as exc:
        return _error("degenerate_basis", str(exc)), 1
    except (ValidationError, PoleError, OracleError) as exc:
        return _error("invalid_params", str(exc)), 1
    except ZeroDivisionError as exc:
        return _error("invalid_params", f"division by zero: {exc}"), 1
    except Exception as exc:  # pragma: no cover - defensive
        return _error("internal_error", f"{type(exc).__name__}: {exc}"), 2


def _error(code: str, message: str) -> dict:
    return {"status": "error", "error": {"code": code, "message": message}}


def _render(response: dict, fmt: str) -> str:
    if fmt == "pretty":
        return json.dumps(response, sort_keys=True, indent=2) + "\n"
    return json.dumps(response, sort_keys=True, separators=(",", ":")) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="zeromap",
        description="Zero-mapping polynomial transforms: JSON in, JSON out.",
    )
    parser.add_argument(
        "--input",
        default="-",
        metavar="FILE",
        help="request file, or - for stdin (default)",
    )
    parser.add_argument(
        "--precision-bits",
        type=int,
        default=None,
        help="override the request's working precision",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="override the verify batch seed (env: ZEROMAP_SEED)",
    )
    parser.add_argument(
        "--format", choices=("json", "pretty"), default="json", help="output format"
    )
    args = parser.parse_args(argv)

    seed = args.seed
    if seed is None and os.environ.get("ZEROMAP_SEED"):
        try:
            seed = int(os.environ["ZEROMAP_SEED"])
        except ValueError:
            seed = None

    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, "r", encoding="utf-8") as handle:
                text = handle.read()
        request = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        response, code = _error("bad_request", f"cannot read request: {exc}"), 1
        sys.stdout.write(_render(response, args.format))
        return code

    if args.precision_bits is not None and isinstance(request, dict):
        request = dict(request)
        request["precision_bits"] = args.precision_bits

    response, code = run(request, seed_override=seed)
    sys.stdout.write(_render(response, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
