"""Command-line front end.

Canonical machine output is JSON on stdout (sorted keys, fixed separators);
aligned text tables render the same data under --text.  The run manifest
rides along minus its wall time, which goes to stderr so reruns stay
byte-identical.  Exit codes: 0 ok, 2 schema/parse, 3 hypothesis violation,
4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from .abelian import HypothesisError, smith_normal_form, quotient, AbelianGroup, characters
from .grpoly import Potential
from .jacobi import GradedIdealSpec
from .sectors import CONVENTION_ID, hh_table, rhom_table, rhom_m_support
from . import factorization as mf
from . import orlov as orlov_mod
from . import spectra
from . import serialize

TOOL_VERSION = "0.1.0"

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_HYPOTHESIS = 3
EXIT_INTERNAL = 4


class InternalCheckError(RuntimeError):
    pass


def _manifest(command: str, payload: bytes) -> dict:
    return {
        "command": command,
        "input_hash": hashlib.sha256(payload).hexdigest(),
        "convention": CONVENTION_ID,
        "tool_version": TOOL_VERSION,
    }


def _emit(args, data: dict, text: str | None = None) -> None:
    if getattr(args, "text", False) and text is not None:
        sys.stdout.write(text + "\n")
    else:
        sys.stdout.write(serialize.dumps_canonical(data) + "\n")


def _load_json(path: str) -> tuple[dict, bytes]:
    try:
        with open(path, "rb") as fh:
            payload = fh.read()
        return json.loads(payload), payload
    except (OSError, json.JSONDecodeError) as exc:
        raise serialize.SchemaError(f"cannot read {path}: {exc}") from exc


def _load_ring(path: str):
    data, payload = _load_json(path)
    ring, potential = serialize.ring_from_json(data)
    return ring, potential, payload


def _parse_window(spec: str) -> tuple[int, int, int, int]:
    try:
        m_part, t_part = spec.split(":")
        m_lo, m_hi = (int(x) for x in m_part.split(".."))
        t_lo, t_hi = (int(x) for x in t_part.split(".."))
    except ValueError as exc:
        raise serialize.SchemaError(f"bad window {spec!r}; expected a..b:c..d") from exc
    return m_lo, m_hi, t_lo, t_hi


def _z_window_elements(ring, m_lo, m_hi):
    group = ring.group
    if group.free_rank != 1 or group.torsion:
        raise HypothesisError(
            "integer windows apply to free rank-one gradings; "
            "pass explicit internal degrees for other groups"
        )
    return [group.element([k]) for k in range(m_lo, m_hi + 1)]


def cmd_hochschild(args) -> int:
    ring, potential, payload = _load_ring(args.ring)
    if potential is None:
        raise serialize.SchemaError("problem file has no potential")
    t_lo, t_hi = -6, 6
    m_list = None
    if args.window:
        m_lo, m_hi, t_lo, t_hi = _parse_window(args.window)
        m_list = _z_window_elements(ring, m_lo, m_hi)
    if args.homology:
        table, warnings = hh_table(ring, potential, t_lo, t_hi)
    else:
        if m_list is None:
            m_list = rhom_m_support(ring, potential, t_lo, t_hi)
        table = rhom_table(ring, potential, m_list, t_lo, t_hi)
        warnings = []
    agreement = None
    if args.brute:
        if args.homology:
            raise serialize.SchemaError("--brute cross-checks the cohomology table")
        brute = mf.hh_bruteforce(ring, potential, m_list, t_lo, t_hi)
        mismatched = [
            cell
            for cell in {(m, t) for m in m_list for t in range(t_lo, t_hi + 1)}
            if table.dim(*cell) != brute.dim(*cell)
        ]
        if mismatched:
            raise InternalCheckError(
                f"closed-form and brute-force tables disagree at {sorted(mismatched)[:3]}"
            )
        agreement = "100%"
    data = {
        "manifest": _manifest("hochschild", payload),
        "warnings": warnings,
        "table": serialize.table_to_json(table),
    }
    if agreement:
        data["agreement"] = agreement
    _emit(args, data, serialize.table_to_text(table))
    return EXIT_OK


def cmd_mf(args) -> int:
    ring, potential, payload = _load_ring(args.ring)
    if potential is None:
        raise serialize.SchemaError("problem file has no potential")

    def load_mf(path):
        data, _ = _load_json(path)
        return serialize.factorization_from_json(ring, potential, data)

    out: dict = {"manifest": _manifest(f"mf {args.action}", payload)}
    if args.action == "validate":
        f = load_mf(args.file)
        report = mf.validate(f)
        out["ok"] = report.ok
        out["issues"] = list(report.issues)
    elif args.action == "diagonal":
        diag = mf.diagonal(ring, potential)
        out["factorization"] = serialize.factorization_to_json(diag)
        out["ring"] = serialize.ring_to_json(diag.ring, diag.potential)
    elif args.action == "dual":
        f = mf.require_valid(load_mf(args.file))
        out["factorization"] = serialize.factorization_to_json(mf.dual(f))
    elif args.action == "box":
        f = mf.require_valid(load_mf(args.file))
        g = mf.require_valid(load_mf(args.other))
        prod = mf.box(f, g)
        out["factorization"] = serialize.factorization_to_json(prod)
        out["ring"] = serialize.ring_to_json(prod.ring, prod.potential)
    elif args.action == "cone":
        data, _ = _load_json(args.file)
        morphism = serialize.morphism_from_json(ring, potential, data)
        mf.require_valid(morphism.source)
        mf.require_valid(morphism.target)
        out["factorization"] = serialize.factorization_to_json(mf.cone(morphism))
    elif args.action == "hom":
        f = mf.require_valid(load_mf(args.file))
        g = mf.require_valid(load_mf(args.other)) if args.other else f
        m = ring.group.element([int(x) for x in args.twist.split(",")]) if args.twist else ring.group.zero()
        table = mf.hom_cohomology(f, g, m, args.t_lo, args.t_hi)
        out["table"] = serialize.table_to_json(table)
    elif args.action == "support":
        f = mf.require_valid(load_mf(args.file))
        p = serialize.parse_polynomial(ring, args.p)
        res = mf.null_homotopy_test(f, p)
        out["null_homotopic"] = res.null_homotopic
        out["message"] = res.message
        if res.homotopy is not None:
            out["homotopy"] = {
                "a": [[str(q) for q in row] for row in res.homotopy.a.data],
                "b": [[str(q) for q in row] for row in res.homotopy.b.data],
            }
    else:
        raise serialize.SchemaError(f"unknown mf action {args.action!r}")
    _emit(args, out)
    return EXIT_OK


def cmd_orlov(args) -> int:
    if args.weights:
        weights = tuple(int(x) for x in args.weights.split(","))
        report = orlov_mod.orlov_classify_weights(orlov_mod.WeightSequence(weights))
        payload = args.weights.encode()
    else:
        ring, potential, payload = _load_ring(args.ring)
        if potential is None:
            raise serialize.SchemaError("problem file has no potential")
        report = orlov_mod.orlov_classify_ring(ring, potential)
    data = {
        "manifest": _manifest("orlov", payload),
        "a": report.a_degree,
        "branch": report.branch,
        "H_order": report.h_order,
        "exceptional_count": report.exceptional_count,
        "exceptional_labels": list(report.exceptional_labels),
    }
    if report.dynkin_label:
        data["label"] = report.dynkin_label
    _emit(args, data)
    return EXIT_OK


def cmd_fermat_rdim(args) -> int:
    weights = tuple(int(x) for x in args.weights.split(","))
    report = spectra.fermat_bounds(orlov_mod.WeightSequence(weights))
    data = {
        "manifest": _manifest("fermat-rdim", args.weights.encode()),
        "lower": report.lower,
        "upper": report.upper,
        "verdict": report.verdict,
        "hypothesis": report.hypothesis,
        "lower_witness": [list(p) for p in report.lower_witness.parts] if report.lower_witness else None,
        "upper_witness": [list(p) for p in report.upper_witness.parts] if report.upper_witness else None,
    }
    _emit(args, data)
    return EXIT_OK


def cmd_nl_dim(args) -> int:
    ring, potential, payload = _load_ring(args.ring)
    if potential is None:
        raise serialize.SchemaError("problem file has no potential")
    p = serialize.parse_polynomial(ring, args.p)
    ideal = None
    gens = []
    if args.ideal:
        spec, _ = _load_json(args.ideal)
        gens.extend(serialize.parse_polynomial(ring, s) for s in spec.get("generators", []))
    if args.ideal_min_witness is not None:
        from .jacobi import witness_slice_degrees
        from .grpoly import monomial_basis

        for wdeg in range(args.ideal_min_witness, args.ideal_min_witness + max(ring.variable_weights())):
            for m in witness_slice_degrees(ring, wdeg):
                for mono in monomial_basis(ring, m):
                    gens.append(ring.monomial(mono))
    if gens:
        ideal = GradedIdealSpec(ring, tuple(gens))
    report = spectra.nl_dimension_principal(potential, p, ideal)
    data = {
        "manifest": _manifest("nl-dim", payload),
        "value": report.value,
        "nilpotent_order": report.order,
        "degenerate": report.degenerate,
        "hypothesis": report.hypothesis,
    }
    _emit(args, data)
    return EXIT_OK


def cmd_grading(args) -> int:
    if args.action == "snf":
        rows = [[int(x) for x in row.split(",")] for row in args.matrix.split(";")]
        u, d, v = smith_normal_form(rows)
        data = {"U": u, "D": d, "V": v}
        payload = args.matrix.encode()
    elif args.action == "quotient":
        relations = (
            [[int(x) for x in row.split(",")] for row in args.relations.split(";")]
            if args.relations
            else []
        )
        group, _ = quotient(args.rank, relations)
        data = serialize.group_to_json(group)
        payload = f"{args.rank}|{args.relations}".encode()
    elif args.action == "dual":
        torsion = tuple(int(x) for x in args.torsion.split(",")) if args.torsion else ()
        group = AbelianGroup(0, torsion)
        chars = characters(group)
        data = {
            "order": group.order(),
            "characters": [[str(v) for v in chi.values] for chi in chars],
        }
        payload = (args.torsion or "").encode()
    else:
        raise serialize.SchemaError(f"unknown grading action {args.action!r}")
    data = {"manifest": _manifest(f"grading {args.action}", payload), **data}
    _emit(args, data)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grmf")
    parser.add_argument("--text", action="store_true", help="render tables as text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hochschild", help="sector-formula invariant tables")
    p.add_argument("--ring", required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--homology", action="store_true")
    mode.add_argument("--cohomology", action="store_true")
    p.add_argument("--window", help="m_lo..m_hi:t_lo..t_hi")
    p.add_argument("--brute", action="store_true", help="cross-check against the explicit complex")
    p.set_defaults(func=cmd_hochschild)

    p = sub.add_parser("mf", help="matrix factorization operations")
    p.add_argument("action", choices=["validate", "cone", "box", "dual", "hom", "diagonal", "support"])
    p.add_argument("--ring", required=True)
    p.add_argument("--file")
    p.add_argument("--other")
    p.add_argument("--p", help="polynomial for support tests")
    p.add_argument("--twist", help="comma-separated internal degree")
    p.add_argument("--t-lo", type=int, default=-2)
    p.add_argument("--t-hi", type=int, default=2)
    p.set_defaults(func=cmd_mf)

    p = sub.add_parser("orlov", help="decomposition trichotomy report")
    p.add_argument("--weights")
    p.add_argument("--ring")
    p.set_defaults(func=cmd_orlov)

    p = sub.add_parser("fermat-rdim", help="generation-dimension bounds")
    p.add_argument("--weights", required=True)
    p.set_defaults(func=cmd_fermat_rdim)

    p = sub.add_parser("nl-dim", help="principal-ideal dimension from nilpotent order")
    p.add_argument("--ring", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--ideal")
    p.add_argument("--ideal-min-witness", type=int)
    p.set_defaults(func=cmd_nl_dim)

    p = sub.add_parser("grading", help="group computations")
    p.add_argument("action", choices=["snf", "quotient", "dual"])
    p.add_argument("--matrix", help="rows as a;b;c with comma-separated entries")
    p.add_argument("--rank", type=int)
    p.add_argument("--relations")
    p.add_argument("--torsion")
    p.set_defaults(func=cmd_grading)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.monotonic()
    try:
        code = args.func(args)
    except serialize.SchemaError as exc:
        sys.stderr.write(f"schema error: {exc}\n")
        return EXIT_SCHEMA
    except HypothesisError as exc:
        sys.stderr.write(f"hypothesis violated: {exc}\n")
        return EXIT_HYPOTHESIS
    except InternalCheckError as exc:
        sys.stderr.write(f"internal inconsistency: {exc}\n")
        return EXIT_INTERNAL
    sys.stderr.write(f"wall_time_ms={int((time.monotonic() - start) * 1000)}\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
