"""Command-line front end: ``idealcert <subcommand> ...``.

Exit status is 0 for a feasible/true answer, 2 for infeasible/false and 1
for malformed input (message on stderr).
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import kernel, membership, residue
from .membership import GeneratorSystem
from .poly import HomogeneousSection, Polynomial, parse
from .quadrature import fs_quadrature

EXIT_OK, EXIT_ERROR, EXIT_NO = 0, 1, 2
DIGITS = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# input helpers


def _split(text, sep=";"):
    parts = [p.strip() for p in text.split(sep)]
    if not parts or any(not p for p in parts):
        raise UsageError(f"empty item in {text!r}")
    return parts


def _int_list(text):
    try:
        return [int(x) for x in _split(text, ",")]
    except ValueError:
        raise UsageError(f"expected comma separated integers, got {text!r}") from None


def _read_target(text, stdin):
    if text == "-":
        text = stdin.read().strip()
    return text


def _infer_n(texts):
    """Largest variable index in the strings (at least 1); that is n for z1..zn and z0..zn alike."""
    idx = [int(k) for t in texts for k in re.findall(r"z(\d+)", t)]
    return max(max(idx, default=0), 1)


def _system(args, texts=None):
    gens = _split(args.gens)
    n = args.n if args.n is not None else _infer_n(gens + list(texts or []))
    degrees = _int_list(args.degrees) if getattr(args, "degrees", None) else None
    return GeneratorSystem.parse(gens, n, degrees)


def _monomial(exps, base=1):
    return Polynomial.monomial(exps, base=base).to_string()


def _cofactor_lines(cofactors):
    return [f"Q{j} = {Q}" for j, Q in enumerate(cofactors, 1)]


def _cnum(c):
    return f"{c.real:.{DIGITS}g}{c.imag:+.{DIGITS}g}j"


# --------------------------------------------------------------------------
# subcommands; each returns (exit code, stdout text)


def cmd_divide(args, stdin):
    target_text = _read_target(args.target, stdin)
    G = _system(args, [target_text])
    target = parse(target_text, G.n)
    cert = membership.divide(G, target, args.r)
    if not cert:
        w = _monomial(cert.witness)
        return EXIT_NO, f"infeasible (r = {args.r}); witness monomial {w}"
    if args.json:
        return EXIT_OK, json.dumps(membership.certificate_to_json(G, target, cert), indent=2)
    lines = [f"feasible (r = {cert.r}, max deg F_j*Q_j = {cert.max_deg_fq(G)}, "
             f"verified = {str(cert.verified).lower()})"]
    return EXIT_OK, "\n".join(lines + _cofactor_lines(cert.cofactors))


def cmd_bezout(args, stdin):
    G = _system(args)
    if args.r == "auto":
        if G.m < G.n + 1:
            raise UsageError("--r auto needs at least n + 1 generators")
        r = max(sum(G.degrees) - G.n, 0)
    else:
        try:
            r = int(args.r)
        except ValueError:
            raise UsageError(f"--r must be an integer or 'auto', got {args.r!r}") from None
    cert = membership.bezout(G, r)
    if not cert:
        return EXIT_NO, f"infeasible (r = {r}); witness monomial {_monomial(cert.witness)}"
    if args.json:
        return EXIT_OK, json.dumps(membership.certificate_to_json(G, G.one(), cert), indent=2)
    head = f"feasible (r = {r}, max deg F_j*Q_j = {cert.max_deg_fq(G)})"
    return EXIT_OK, "\n".join([head] + _cofactor_lines(cert.cofactors))


def _budget_rule(text):
    m = re.fullmatch(r"\s*linear\s*:\s*(\d+)\s*", text)
    if not m:
        raise UsageError(f"budget rule must look like 'linear:c', got {text!r}")
    c = int(m.group(1))
    return lambda nu: c * nu


def cmd_power_divide(args, stdin):
    target_text = _read_target(args.target, stdin)
    G = _system(args, [target_text])
    target = parse(target_text, G.n)
    out = membership.power_divide(G, target, args.nu_max, _budget_rule(args.budget_rule))
    if not out:
        return EXIT_NO, f"infeasible for every nu <= {args.nu_max}"
    nu, cert = out
    if args.json:
        return EXIT_OK, json.dumps(membership.certificate_to_json(G, target, cert), indent=2)
    head = f"nu = {nu} (r = {cert.r}, max deg F_j*Q_j = {cert.max_deg_fq(G)})"
    return EXIT_OK, "\n".join([head] + _cofactor_lines(cert.cofactors))


def _index_key(key):
    key = key.strip()
    if key in ("", "()", "{}"):
        return ()
    try:
        return tuple(sorted(int(k) - 1 for k in key.strip("(){}").split(",")))
    except ValueError:
        raise UsageError(f"bad component key {key!r}") from None


def cmd_koszul(args, stdin):
    with open(args.components, encoding="utf-8") if args.components != "-" else stdin as fh:
        doc = json.load(fh)
    if "components" in doc:
        comps = doc["components"]
        gens = doc.get("gens")
        n = doc.get("n")
        r = doc.get("r")
    else:
        comps, gens, n, r = doc, None, None, None
    if args.gens is not None:
        gens = _split(args.gens)
    if args.n is not None:
        n = args.n
    if args.r is not None:
        r = args.r
    if gens is None or r is None:
        raise UsageError("koszul needs generators and r (flags or fields of the file)")
    if isinstance(gens, str):
        gens = _split(gens)
    if n is None:
        n = _infer_n(list(gens) + list(comps.values()))
    G = GeneratorSystem.parse(gens, n)
    phi = membership.KoszulTuple(
        args.ell, {_index_key(k): parse(v, n) for k, v in comps.items()}, r)
    out = membership.koszul_divide(G, phi)
    if not out:
        J, mono = out.witness
        label = ",".join(str(j + 1) for j in J)
        return EXIT_NO, f"infeasible (r = {r}); witness component ({label}) monomial {_monomial(mono)}"
    lines = [f"psi in degree {out.ell}:"]
    for J in sorted(out.components):
        label = ",".join(str(j + 1) for j in J)
        lines.append(f"psi[{label}] = {out.components[J]}")
    return EXIT_OK, "\n".join(lines)


def cmd_residue(args, stdin):
    target_text = _read_target(args.target, stdin)
    gens = _split(args.gens)
    if args.projective:
        n = args.n if args.n is not None else _infer_n(gens + [target_text])
        polys = [parse(t, n + 1, base=0) for t in gens]
        ci = residue.MonomialCI.from_polys(polys, homogeneous=True)
        poly = parse(target_text, n + 1, base=0)
        deg = poly.degree()
        if not poly.is_zero() and not poly.is_homogeneous(deg):
            raise UsageError("projective target must be homogeneous")
        phi = HomogeneousSection(poly, max(deg, 0))
        ok = residue.annihilates_projective(ci, phi, args.z0_power)
    else:
        n = args.n if args.n is not None else _infer_n(gens + [target_text])
        ci = residue.MonomialCI.from_polys([parse(t, n) for t in gens])
        ok = residue.annihilates(ci, parse(target_text, n))
    return (EXIT_OK, "true") if ok else (EXIT_NO, "false")


def cmd_hefer(args, stdin):
    F = parse(args.gen, args.n)
    H = kernel.hefer_decompose(F, args.n)
    names = [f"w{k}" for k in range(1, args.n + 1)] + [f"z{k}" for k in range(1, args.n + 1)]
    lines = [f"h{k} = {h.to_string(names)}" for k, h in enumerate(H.forms, 1)]
    lines.append(f"verified = {str(kernel.verify_hefer(F, H)).lower()}")
    return EXIT_OK, "\n".join(lines)


def _point(text):
    coords = []
    for item in _split(text):
        try:
            re_, im = (float(x) for x in item.split(","))
        except ValueError:
            raise UsageError(f"point coordinates must be 're,im', got {item!r}") from None
        coords.append(complex(re_, im))
    return coords


def cmd_bergman(args, stdin):
    target_text = _read_target(args.target, stdin)
    z = _point(args.at)
    n = len(z)
    target = parse(target_text, n)
    value = kernel.bergman_reproduce(target, args.r, z, fs_quadrature(n, args.resolution))
    exact = target.evaluate(z)
    return EXIT_OK, f"value = {_cnum(value)}\ndirect = {_cnum(complex(exact))}\n" \
                    f"error = {abs(value - exact):.{DIGITS}g}"


def cmd_kernel_divide(args, stdin):
    target_text = _read_target(args.target, stdin)
    G = _system(args, [target_text])
    target = parse(target_text, G.n)
    rule = fs_quadrature(G.n, args.resolution)
    kd = kernel.kernel_divide(G, target, args.r, rule)
    lines = [f"degree bound = {kd.degree_bound}"]
    for j, Q in enumerate(kd.cofactors, 1):
        lines.append(f"Q{j} = {Q.to_string(DIGITS)}")
    for j, res in enumerate(kd.fit_residuals, 1):
        lines.append(f"fit residual {j} = {res:.{DIGITS}g}")
    exact = membership.divide(G, target, kd.degree_bound)
    if exact:
        dist = kernel.projection_distance(G, target, kd.cofactors, kd.degree_bound)
        lines.append(f"projection distance = {dist:.{DIGITS}g}")
    return EXIT_OK, "\n".join(lines)


def cmd_threshold(args, stdin):
    out = membership.noll_threshold(_int_list(args.degrees), args.n, args.ell)
    return EXIT_OK, str(out)


def cmd_verify(args, stdin):
    if args.certificate == "-":
        text = stdin.read()
    else:
        with open(args.certificate, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"certificate is not valid JSON: {exc}") from None
    G, target, cert = membership.certificate_from_json(doc)
    ok = membership.verify(G, target, cert)
    return (EXIT_OK, "verified") if ok else (EXIT_NO, "not verified")


# --------------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="idealcert", description="Degree-bounded ideal membership certificates.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def system_args(sp, with_degrees=True):
        sp.add_argument("--n", type=int, help="number of affine variables")
        sp.add_argument("--gens", required=True, help="generators separated by ';'")
        if with_degrees:
            sp.add_argument("--degrees", help="declared degrees d1,d2,...")

    sp = sub.add_parser("divide", help="cofactors with sum F_j Q_j = target, deg F_j Q_j <= r")
    system_args(sp)
    sp.add_argument("--target", required=True, help="target polynomial ('-' reads stdin)")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_divide)

    sp = sub.add_parser("bezout", help="cofactors with sum F_j Q_j = 1")
    system_args(sp)
    sp.add_argument("--r", required=True, help="integer budget or 'auto'")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_bezout)

    sp = sub.add_parser("power-divide", help="smallest power of the target in the ideal")
    system_args(sp)
    sp.add_argument("--target", required=True)
    sp.add_argument("--nu-max", type=int, required=True)
    sp.add_argument("--budget-rule", required=True, help="'linear:c' meaning r(nu) = c*nu")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_power_divide)

    sp = sub.add_parser("koszul", help="solve delta_f psi = phi in the Koszul complex")
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--components", required=True, help="JSON file; keys are 1-based index lists")
    sp.add_argument("--n", type=int)
    sp.add_argument("--gens")
    sp.add_argument("--r", type=int)
    sp.set_defaults(func=cmd_koszul)

    sp = sub.add_parser("residue-annihilates", help="does target kill the residue current?")
    system_args(sp, with_degrees=False)
    sp.add_argument("--target", required=True)
    sp.add_argument("--projective", action="store_true", help="homogeneous input in z0..zn")
    sp.add_argument("--z0-power", type=int, default=0)
    sp.set_defaults(func=cmd_residue)

    sp = sub.add_parser("hefer", help="Hefer decomposition of one polynomial")
    sp.add_argument("--gen", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_hefer)

    sp = sub.add_parser("bergman", help="reproduce a polynomial by the weighted integral")
    sp.add_argument("--target", required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--at", required=True, help="point 're,im[;re,im]'")
    sp.add_argument("--resolution", type=int, default=64)
    sp.set_defaults(func=cmd_bergman)

    sp = sub.add_parser("kernel-divide", help="cofactors from the integral division formula")
    system_args(sp)
    sp.add_argument("--target", required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--resolution", type=int, default=48)
    sp.set_defaults(func=cmd_kernel_divide)

    sp = sub.add_parser("threshold", help="degree budget that guarantees solvability")
    sp.add_argument("--degrees", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ell", type=int, default=0)
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("verify", help="recheck a JSON certificate")
    sp.add_argument("--certificate", required=True, help="file path or '-' for stdin")
    sp.set_defaults(func=cmd_verify)
    return p


def run(argv=None, stdin=None, stdout=None, stderr=None):
    """Run one subcommand; returns the exit status."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        code, text = args.func(args, stdin)
    except SystemExit as exc:  # --help
        return exc.code or 0
    except UsageError as exc:
        print(f"idealcert: error: {exc}", file=stderr)
        return EXIT_ERROR
    except (ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"idealcert: error: {exc}", file=stderr)
        return EXIT_ERROR
    if text:
        print(text, file=stdout)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
