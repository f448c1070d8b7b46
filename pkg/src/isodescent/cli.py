"""Command-line front end.

Bundles are JSON files describing a field, an invariant form, and group
generators; the subcommands run descent, the balance chain alone, the
characteristic-polynomial census, or one of the packaged nonexistence
certificates, and emit a JSON report.  Reports are deterministic: the same
bundle and tool version always produce the same bytes apart from the
timing_seconds field.

Exit codes: 0 when every certificate in the report is true, 2 when the run
completed but some certificate is false, 1 on any input problem (unreadable
file, malformed bundle, invalid field data).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__ as TOOL_VERSION
from . import linalg as la
from .counterexamples import no_invariant_symmetric_form, verify_prop5, verify_prop6
from .descent import (
    DEFAULT_GROUP_CAP,
    GroupRep,
    balance,
    descend,
)
from .errors import BundleFormatError, IsodescentError, NegativeValuation
from .exactfield import make_descriptor
from .forms import GramForm
from .lattice import stabilize, standard_lattice

DEFAULT_PRECISION_START = 32
DEFAULT_ENUM_CAP = 1000000

FORM_KINDS = ("symmetric", "alternating", "hermitian")
VERIFY_TAGS = ("lemma", "prop5", "prop6")


# ---------------------------------------------------------------------------
# bundle ingestion


def _expect(cond: bool, where: str, why: str):
    if not cond:
        raise BundleFormatError(f"{where}: {why}")


def _parse_entry(field, raw, where: str):
    """One matrix entry: a rational string or a power-basis coefficient list."""
    if isinstance(raw, (str, int)):
        try:
            return field.rational(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise BundleFormatError(f"{where}: bad rational {raw!r} ({exc})")
    if isinstance(raw, list):
        _expect(all(isinstance(c, (str, int)) for c in raw), where,
                "coefficient vectors hold strings or integers")
        try:
            return field.element(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise BundleFormatError(f"{where}: bad coefficient vector ({exc})")
    raise BundleFormatError(
        f"{where}: entries are rational strings or coefficient lists, "
        f"got {type(raw).__name__}")


def _parse_matrix(field, raw, where: str):
    _expect(isinstance(raw, list) and raw, where, "must be a nonempty matrix")
    n = len(raw)
    out = []
    for i, row in enumerate(raw):
        _expect(isinstance(row, list) and len(row) == n, f"{where}[{i}]",
                f"must be a row of length {n}")
        out.append([_parse_entry(field, v, f"{where}[{i}][{j}]")
                    for j, v in enumerate(row)])
    return out


def load_bundle(path: str, max_group_order=None, precision_start=None):
    """Read and validate a bundle file; returns (GroupRep, options dict).

    All GroupRep invariants (closure under the cap, every element an
    isometry) are re-checked during construction.
    """
    try:
        with open(path, "rb") as fh:
            text = fh.read()
    except OSError as exc:
        raise BundleFormatError(f"{path}: {exc}")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleFormatError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}")

    _expect(isinstance(raw, dict), path, "top level must be an object")
    _expect(raw.get("schema") == 1, "schema",
            f"unsupported schema {raw.get('schema')!r}, expected 1")

    fld = raw.get("field")
    _expect(isinstance(fld, dict), "field", "must be an object")
    for key in ("n", "ell"):
        _expect(isinstance(fld.get(key), int), f"field.{key}",
                "must be an integer")
    subgroup = fld.get("subgroup", [1])
    _expect(isinstance(subgroup, list) and
            all(isinstance(h, int) for h in subgroup),
            "field.subgroup", "must be a list of integers")
    involution = fld.get("involution")
    _expect(involution is None or isinstance(involution, int),
            "field.involution", "must be an integer or null")
    prime_choice = fld.get("prime_choice", 0)
    _expect(isinstance(prime_choice, int), "field.prime_choice",
            "must be an integer")

    opts = raw.get("options", {})
    _expect(isinstance(opts, dict), "options", "must be an object")
    options = {
        "max_group_order": opts.get("max_group_order", DEFAULT_GROUP_CAP),
        "precision_start": opts.get("precision_start", DEFAULT_PRECISION_START),
        "enumeration_cap": opts.get("enumeration_cap", DEFAULT_ENUM_CAP),
    }
    for key, val in options.items():
        _expect(isinstance(val, int) and val > 0, f"options.{key}",
                "must be a positive integer")
    if max_group_order is not None:
        options["max_group_order"] = max_group_order
    if precision_start is not None:
        options["precision_start"] = precision_start

    field = make_descriptor(
        fld["n"], fld["ell"], subgroup=tuple(subgroup),
        prime_choice=prime_choice, involution=involution,
        precision_start=options["precision_start"])

    frm = raw.get("form")
    _expect(isinstance(frm, dict), "form", "must be an object")
    kind = frm.get("kind")
    _expect(kind in FORM_KINDS, "form.kind", f"must be one of {FORM_KINDS}")
    gram = _parse_matrix(field, frm.get("gram"), "form.gram")
    twist = frm.get("twist", 0)
    _expect(isinstance(twist, int), "form.twist", "must be an integer")
    form = GramForm(field, gram, kind, twist=twist)

    gens_raw = raw.get("generators")
    _expect(isinstance(gens_raw, list) and gens_raw, "generators",
            "must be a nonempty list of matrices")
    gens = [_parse_matrix(field, g, f"generators[{i}]")
            for i, g in enumerate(gens_raw)]
    for i, g in enumerate(gens):
        _expect(len(g) == form.dim, f"generators[{i}]",
                f"must be {form.dim}x{form.dim} to match the form")

    rep = GroupRep(field, gens, form, cap=options["max_group_order"])
    return rep, options


# ---------------------------------------------------------------------------
# report serialization


def _ser_scalar(x) -> list:
    return x.serialize()


def _ser_matrix(m) -> list:
    return [[_ser_scalar(x) for x in row] for row in m]


def _ser_residue(x) -> list:
    return list(x.coeffs)


def _ser_residue_matrix(m) -> list:
    return [[_ser_residue(x) for x in row] for row in m]


def _ser_poly(cp) -> list:
    """Characteristic polynomial, low degree first."""
    return [_ser_scalar(c) for c in cp]


def _ser_poly_residue(cp) -> list:
    return [_ser_residue(c) for c in cp]


def _reduce_poly_or_none(cp):
    out = []
    for c in cp:
        try:
            out.append(_ser_residue(c.reduce()))
        except NegativeValuation:
            out.append(None)
    return out


def _descent_result_dict(res) -> dict:
    return {
        "field": res.descriptor.describe(),
        "group_order": res.group_order,
        "image_order": res.image_order,
        "kernel_size": res.kernel_size,
        "scale_power": res.scale_power,
        "chain_steps": res.chain_steps,
        "invariant_exponents": list(res.invariant_exps),
        "block_dims": list(res.block_dims),
        "block_kinds": list(res.block_kinds),
        "lattice_basis": _ser_matrix(res.lattice_basis),
        "dual_basis": _ser_matrix(res.dual_basis),
        "reduced_form_gram": _ser_residue_matrix(res.f0_gram),
        "reduced_generators": [_ser_residue_matrix(res.rho_bar[i])
                               for i in range(len(res.rho_bar))],
        "charpoly_table": [_ser_poly(cp) for cp in res.charpoly_table_K],
        "charpoly_table_mod_lambda": [_ser_poly_residue(cp)
                                      for cp in res.charpoly_table_k],
        "charpoly_classes": [
            {"charpoly_mod_lambda": [list(c) for c in key], "count": cnt}
            for key, cnt in res.charpoly_classes],
        "kernel_explanations": res.kernel_explanations,
        "certificates": res.certificates,
    }


def _make_report(command: str, digest: str, result: dict, started: float) -> dict:
    return {
        "version": TOOL_VERSION,
        "command": command,
        "input_sha256": digest,
        "result": result,
        "timing_seconds": round(time.monotonic() - started, 6),
    }


def _emit(report: dict, out_path):
    payload = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _file_digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _summarize(line: str, out_path):
    """Human-readable one-liner; kept off stdout when the JSON goes there."""
    stream = sys.stdout if out_path else sys.stderr
    stream.write(line + "\n")


def _exit_code(certificates: dict) -> int:
    return 0 if all(certificates.values()) else 2


# ---------------------------------------------------------------------------
# subcommands


def cmd_descend(bundle_path: str, out_path=None, max_group_order=None,
                precision_start=None) -> int:
    started = time.monotonic()
    digest = _file_digest(bundle_path)
    rep, _ = load_bundle(bundle_path, max_group_order, precision_start)
    res = descend(rep)
    report = _make_report("descend", digest, _descent_result_dict(res), started)
    _emit(report, out_path)
    certs = res.certificates
    flags = " ".join(f"{k}={'yes' if v else 'NO'}" for k, v in sorted(certs.items()))
    _summarize(
        f"descend: group {res.group_order}, image {res.image_order}, "
        f"blocks {tuple(res.block_dims)} {tuple(res.block_kinds)}; {flags}",
        out_path)
    return _exit_code(certs)


def cmd_balance(bundle_path: str, out_path=None, max_group_order=None,
                precision_start=None) -> int:
    started = time.monotonic()
    digest = _file_digest(bundle_path)
    rep, _ = load_bundle(bundle_path, max_group_order, precision_start)
    lat = stabilize(standard_lattice(rep.field, rep.form.dim), rep.generators)
    bal = balance(lat, rep.form, generators=rep.generators)
    certs = {
        "chain_terminated": True,
        "invariants_binary": all(v in (0, 1) for v in bal.invariants),
    }
    result = {
        "field": rep.field.describe(),
        "scale_power": bal.scale_power,
        "chain_steps": bal.steps,
        "invariant_exponents": list(bal.invariants),
        "lattice_basis": _ser_matrix(bal.lattice.basis),
        "dual_basis": _ser_matrix(bal.dual.basis),
        "certificates": certs,
    }
    report = _make_report("balance", digest, result, started)
    _emit(report, out_path)
    _summarize(
        f"balance: {bal.steps} growth steps, scale {bal.scale_power}, "
        f"invariants {bal.invariants}", out_path)
    return _exit_code(certs)


def cmd_charpoly(bundle_path: str, out_path=None, max_group_order=None,
                 precision_start=None) -> int:
    """Characteristic-polynomial census of the whole group, no balance run."""
    started = time.monotonic()
    digest = _file_digest(bundle_path)
    rep, _ = load_bundle(bundle_path, max_group_order, precision_start)
    rows = []
    classes = {}
    for i, m in enumerate(rep.elements):
        cp = la.charpoly(m, rep.field)
        ser = _ser_poly(cp)
        rows.append({
            "element_index": i,
            "charpoly": ser,
            "charpoly_mod_lambda": _reduce_poly_or_none(cp),
        })
        key = json.dumps(ser)
        classes[key] = classes.get(key, 0) + 1
    result = {
        "field": rep.field.describe(),
        "group_order": rep.order,
        "rows": rows,
        "classes": [{"charpoly": json.loads(k), "count": v}
                    for k, v in sorted(classes.items())],
        "certificates": {"closure_complete": True},
    }
    report = _make_report("charpoly", digest, result, started)
    _emit(report, out_path)
    _summarize(
        f"charpoly: {rep.order} elements, {len(classes)} distinct polynomials",
        out_path)
    return 0


def cmd_verify(tag: str, ell: int, out_path=None, enum_cap=None) -> int:
    started = time.monotonic()
    if tag not in VERIFY_TAGS:
        raise BundleFormatError(f"verify: unknown tag {tag!r}, expected "
                                f"one of {VERIFY_TAGS}")
    digest = hashlib.sha256(
        json.dumps({"ell": ell, "tag": tag}, sort_keys=True).encode()).hexdigest()
    if tag == "lemma":
        cert = no_invariant_symmetric_form(ell)
    elif tag == "prop5":
        cert = verify_prop5(ell)
    else:
        cert = verify_prop6(ell, enum_cap=enum_cap or DEFAULT_ENUM_CAP)
    result = cert.to_dict()
    result["certificates"] = {"verdict": cert.verdict}
    report = _make_report("verify", digest, result, started)
    _emit(report, out_path)
    _summarize(
        f"verify {tag} (ell={ell}): "
        f"{'holds' if cert.verdict else 'FAILED'} over {cert.search_space}",
        out_path)
    return 0 if cert.verdict else 2


# ---------------------------------------------------------------------------
# argument wiring


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isodescent",
        description=("Reduce finite isometry groups to odd characteristic "
                     "with certified invariants, or check the packaged "
                     "boundary counterexamples."))
    sub = parser.add_subparsers(dest="command", required=True)

    def add_bundle_cmd(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("bundle", help="JSON bundle path")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--max-group-order", type=int, default=None,
                       help=f"closure cap (default {DEFAULT_GROUP_CAP})")
        p.add_argument("--precision-start", type=int, default=None,
                       help=f"initial lambda-adic working precision "
                            f"(default {DEFAULT_PRECISION_START})")
        return p

    add_bundle_cmd("descend", "run the full descent and report certificates")
    add_bundle_cmd("balance", "run only the lattice balance chain")
    add_bundle_cmd("charpoly", "characteristic-polynomial census of the group")

    v = sub.add_parser("verify", help="check a packaged nonexistence certificate")
    v.add_argument("tag", choices=VERIFY_TAGS)
    v.add_argument("--ell", type=int, required=True, help="odd prime residue "
                   "characteristic")
    v.add_argument("--out", help="write the JSON report here instead of stdout")
    v.add_argument("--enum-cap", type=int, default=None,
                   help=f"largest solution space to enumerate exhaustively "
                        f"(default {DEFAULT_ENUM_CAP})")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "descend":
            return cmd_descend(args.bundle, args.out, args.max_group_order,
                               args.precision_start)
        if args.command == "balance":
            return cmd_balance(args.bundle, args.out, args.max_group_order,
                               args.precision_start)
        if args.command == "charpoly":
            return cmd_charpoly(args.bundle, args.out, args.max_group_order,
                                args.precision_start)
        if args.command == "verify":
            return cmd_verify(args.tag, args.ell, args.out, args.enum_cap)
    except IsodescentError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
