"""pda-forge command line.

Subcommands:
  design list | design show | design verify
  construct          build a PDA from a design via scheme 1 or 2
  verify             check a PDA file and print its parameters
  transpose          transpose a row-uniform PDA
  bounds             print both lower bounds for (K, F, Z)
  classify           bounds plus optimality classification for a PDA file
  hpda build | hpda verify | hpda loads
  sim flat | sim hier
  table two | table three

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.
Outputs are deterministic for a fixed seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bounds import cheng_bound, classify, wei_bound, wei_equality_possible
from .design import (DesignError, catalog, design_to_document, get_design,
                     load_design_file, verify_design)
from .hpda import (HpdaError, hpda_from_scheme1, hpda_from_scheme2,
                   hpda_loads, load_hpda, save_hpda, scheme1_r2_bound,
                   scheme2_r2_bound, verify_hpda)
from .pda import PdaError, load_pda, save_pda, transpose, verify_pda
from .schemes import CellBudgetError, SchemeSpec, construct
from .sim import (FileLibrary, SimulationError, random_flat_demand,
                  random_hier_demand, run_flat, run_hierarchical)
from .tables import (emit_table2, emit_table2_json, emit_table3,
                     emit_table3_json, fmt_decimal)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2


def _err(message: str) -> None:
    print(f"pda-forge: {message}", file=sys.stderr)


def _resolve_design(name_or_path: str):
    if os.path.exists(name_or_path):
        return load_design_file(name_or_path)
    return get_design(name_or_path)


def _write_text(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params_line(params) -> str:
    line = f"({params.K},{params.F},{params.Z},{params.S})"
    if params.g is not None:
        line += f" g={params.g}"
    return line


def _print_pda_violations(violations) -> None:
    for v in violations:
        print(f"{v.condition} at {tuple(v.cells)}: {v.message}")


def _print_params(params) -> None:
    print(_params_line(params))
    if not params.canonical_labels:
        print("note: integer labels are not 0-based contiguous; "
              "S counts distinct values")


# design ---------------------------------------------------------------

def cmd_design_list(args) -> int:
    for name, d in catalog().items():
        print(f"{name}  {d.t}-({d.v},{d.k},{d.lam})  b={d.b}")
    return EXIT_OK


def cmd_design_show(args) -> int:
    d = _resolve_design(args.name)
    _write_text(json.dumps(design_to_document(d), indent=1) + "\n",
                args.output)
    return EXIT_OK


def cmd_design_verify(args) -> int:
    d = _resolve_design(args.name)
    report = verify_design(d)
    if report.valid:
        simple = "simple" if report.is_simple else "has repeated blocks"
        print(f"valid {d.t}-({d.v},{d.k},{d.lam}) design, b={report.b}, "
              f"{simple}")
        return EXIT_OK
    for subset, count in report.violations:
        labels = tuple(d.label_of(r) for r in subset)
        print(f"t-subset {labels} lies in {count} blocks, expected {d.lam}")
    for idx, size in report.size_violations:
        print(f"block {idx} has size {size}, expected k={d.k}")
    return EXIT_VERIFY


# flat arrays ----------------------------------------------------------

def cmd_construct(args) -> int:
    d = _resolve_design(args.design)
    spec = SchemeSpec("I" if args.scheme == 1 else "II", d, args.i)
    p = construct(spec, normalize=not args.no_normalize)
    from .pda import dumps_pda
    if args.output:
        save_pda(p, args.output)
        report = verify_pda(p)
        print(_params_line(report.params))
    else:
        sys.stdout.write(dumps_pda(p))
    if args.figure:
        from .figures import render_pda
        group = p.K // d.b
        render_pda(p, args.figure, title=_figure_title(spec, p),
                   group_width=group)
    return EXIT_OK


def _figure_title(spec, p) -> str:
    params = verify_pda(p).params
    return (f"scheme {spec.scheme} on {spec.design.name or 'design'} "
            f"i={spec.i}: {_params_line(params)}")


def cmd_verify(args) -> int:
    p = load_pda(args.pda)
    report = verify_pda(p)
    if args.figure:
        from .figures import render_pda
        render_pda(p, args.figure)
    if not report.ok:
        _print_pda_violations(report.violations)
        return EXIT_VERIFY
    _print_params(report.params)
    return EXIT_OK


def cmd_transpose(args) -> int:
    p = load_pda(args.pda)
    report = verify_pda(p)
    if not report.ok:
        _print_pda_violations(report.violations)
        return EXIT_VERIFY
    if report.params.row_star_count is None:
        print("rows have unequal star counts; transpose is not a PDA")
        return EXIT_VERIFY
    save_pda(transpose(p), args.output)
    return EXIT_OK


def cmd_bounds(args) -> int:
    print(f"cheng={cheng_bound(args.K, args.F, args.Z)} "
          f"wei={wei_bound(args.K, args.F, args.Z)}")
    flag = wei_equality_possible(args.K, args.F, args.Z)
    print(f"wei_equality_possible={'true' if flag else 'false'}")
    return EXIT_OK


def cmd_classify(args) -> int:
    p = load_pda(args.pda)
    report = verify_pda(p)
    if not report.ok:
        _print_pda_violations(report.violations)
        return EXIT_VERIFY
    bound_report = classify(p)
    params = report.params
    print(_params_line(params))
    print(f"cheng={bound_report.cheng} wei={bound_report.wei}")
    print(f"wei_equality_possible="
          f"{'true' if bound_report.wei_equality_possible else 'false'}")
    print(f"classification={bound_report.classification}")
    if bound_report.caveat:
        print(f"caveat: {bound_report.caveat}")
    return EXIT_OK


# hierarchical arrays --------------------------------------------------

def cmd_hpda_build(args) -> int:
    d = _resolve_design(args.design)
    build = hpda_from_scheme1 if args.scheme == 1 else hpda_from_scheme2
    q = build(d, args.i)
    from .hpda import dumps_hpda
    if args.output:
        save_hpda(q, args.output)
        print(f"(K1={q.K1},K2={q.K2},F={q.F},Z1={q.Z1},Z2={q.Z2}) "
              f"|Sm|={len(q.sm)}")
        loads = hpda_loads(q)
        bound_fn = scheme1_r2_bound if args.scheme == 1 else scheme2_r2_bound
        bound = bound_fn(d, args.i)
        print(f"R1={loads.R1} ({fmt_decimal(loads.R1)}) "
              f"R2={loads.R2} ({fmt_decimal(loads.R2)})")
        print(f"R2 bound: {bound} ({fmt_decimal(bound)})")
    else:
        sys.stdout.write(dumps_hpda(q))
    if args.figure:
        from .figures import render_hpda
        render_hpda(q, args.figure)
    return EXIT_OK


def cmd_hpda_verify(args) -> int:
    q = load_hpda(args.hpda)
    report = verify_hpda(q)
    if not report.ok:
        for v in report.violations:
            where = "" if v.subarray is None else f" (subarray {v.subarray})"
            print(f"{v.condition}{where} at {tuple(v.cells)}: {v.message}")
        return EXIT_VERIFY
    print(f"(K1={q.K1},K2={q.K2},F={q.F},Z1={q.Z1},Z2={q.Z2}) "
          f"|Sm|={len(q.sm)} valid")
    return EXIT_OK


def cmd_hpda_loads(args) -> int:
    q = load_hpda(args.hpda)
    report = verify_hpda(q)
    if not report.ok:
        print(f"{len(report.violations)} violations; run hpda verify")
        return EXIT_VERIFY
    loads = hpda_loads(q)
    print(f"R1={loads.R1} ({fmt_decimal(loads.R1)})")
    print(f"R2={loads.R2} ({fmt_decimal(loads.R2)})")
    print(f"T_serial={loads.serial_delay} "
          f"({fmt_decimal(loads.serial_delay)})")
    print(f"T_parallel={loads.parallel_delay} "
          f"({fmt_decimal(loads.parallel_delay)})")
    return EXIT_OK


# simulation -----------------------------------------------------------

def _parse_demand_csv(text: str):
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise ValueError(f"demand must be comma-separated integers, "
                         f"got {text!r}") from None


def _frac_str(q) -> str:
    return str(q)


def _sim_report_doc(report) -> dict:
    doc = {
        "transmissions": report.transmissions,
        "all_decoded": report.all_decoded,
        "decoded_ok": [list(x) if isinstance(x, tuple) else x
                       for x in report.decoded_ok],
    }
    if report.measured_R is not None:
        doc["measured_R"] = _frac_str(report.measured_R)
        doc["measured_R_decimal"] = fmt_decimal(report.measured_R)
    if report.measured_R1 is not None:
        doc["mirror_transmissions"] = list(report.mirror_transmissions)
        doc["measured_R1"] = _frac_str(report.measured_R1)
        doc["measured_R2"] = _frac_str(report.measured_R2)
        doc["measured_R1_decimal"] = fmt_decimal(report.measured_R1)
        doc["measured_R2_decimal"] = fmt_decimal(report.measured_R2)
        doc["coding_delay_serial"] = fmt_decimal(report.coding_delay_serial)
        doc["coding_delay_parallel"] = fmt_decimal(
            report.coding_delay_parallel)
    if report.trace is not None:
        doc["trace"] = [
            {key: (list(map(list, val)) if key == "cells" else val)
             for key, val in entry.items()}
            for entry in report.trace
        ]
    return doc


def cmd_sim_flat(args) -> int:
    p = load_pda(args.pda)
    report = verify_pda(p)
    if not report.ok:
        _print_pda_violations(report.violations)
        return EXIT_VERIFY
    n_files = args.files if args.files else p.K
    if args.demand:
        demand = _parse_demand_csv(args.demand)
    else:
        demand = random_flat_demand(p.K, n_files, args.seed)
    lib = FileLibrary.generate(n_files, p.F, packet_bytes=args.packet_bytes,
                               seed=args.seed)
    sim = run_flat(p, lib, demand, trace=args.trace)
    print(json.dumps(_sim_report_doc(sim), indent=1))
    return EXIT_OK if sim.all_decoded else EXIT_VERIFY


def cmd_sim_hier(args) -> int:
    q = load_hpda(args.hpda)
    report = verify_hpda(q)
    if not report.ok:
        print(f"{len(report.violations)} violations; run hpda verify")
        return EXIT_VERIFY
    n_files = args.files if args.files else q.K1 * q.K2
    if args.demand:
        flat = _parse_demand_csv(args.demand)
        if len(flat) != q.K1 * q.K2:
            raise ValueError(f"demand must list {q.K1 * q.K2} file indices")
        demand = [flat[k1 * q.K2:(k1 + 1) * q.K2] for k1 in range(q.K1)]
    else:
        demand = random_hier_demand(q.K1, q.K2, n_files, args.seed)
    lib = FileLibrary.generate(n_files, q.F, packet_bytes=args.packet_bytes,
                               seed=args.seed)
    sim = run_hierarchical(q, lib, demand, trace=args.trace)
    print(json.dumps(_sim_report_doc(sim), indent=1))
    return EXIT_OK if sim.all_decoded else EXIT_VERIFY


# tables ---------------------------------------------------------------

def cmd_table_two(args) -> int:
    d = _resolve_design(args.design)
    i_list = _parse_demand_csv(args.i) if args.i else None
    if args.json:
        text = json.dumps(emit_table2_json(d, i_list), indent=1) + "\n"
    else:
        text = emit_table2(d, i_list)
    _write_text(text, args.output)
    return EXIT_OK


def cmd_table_three(args) -> int:
    extra = {}
    for path in args.design_file or ():
        d = load_design_file(path)
        if not verify_design(d).valid:
            _err(f"{path}: design fails verification")
            return EXIT_VERIFY
        extra[d.name] = d
    if args.json:
        text = json.dumps(emit_table3_json(extra_designs=extra),
                          indent=1) + "\n"
    else:
        text = emit_table3(extra_designs=extra)
    _write_text(text, args.output)
    return EXIT_OK


# parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pda-forge",
        description="Construct, verify, bound, and simulate placement "
                    "delivery arrays built from combinatorial designs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="design catalog and checks")
    design_sub = p_design.add_subparsers(dest="design_command", required=True)
    p = design_sub.add_parser("list", help="list catalog designs")
    p.set_defaults(func=cmd_design_list)
    p = design_sub.add_parser("show", help="print a design document")
    p.add_argument("name", help="catalog name or design file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_design_show)
    p = design_sub.add_parser("verify", help="check the design axioms")
    p.add_argument("name", help="catalog name or design file")
    p.set_defaults(func=cmd_design_verify)

    p = sub.add_parser("construct", help="build a PDA from a design")
    p.add_argument("--scheme", type=int, choices=(1, 2), required=True)
    p.add_argument("--design", required=True,
                   help="catalog name or design file")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--no-normalize", action="store_true",
                   help="keep 1-based construction labels")
    p.add_argument("-o", "--output")
    p.add_argument("--figure", help="also render the grid to this PNG")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="verify a PDA file")
    p.add_argument("pda")
    p.add_argument("--figure", help="also render the grid to this PNG")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("transpose", help="transpose a row-uniform PDA")
    p.add_argument("pda")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_transpose)

    p = sub.add_parser("bounds", help="lower bounds on S for (K,F,Z)")
    p.add_argument("K", type=int)
    p.add_argument("F", type=int)
    p.add_argument("Z", type=int)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("classify", help="bounds and optimality class")
    p.add_argument("pda")
    p.set_defaults(func=cmd_classify)

    p_hpda = sub.add_parser("hpda", help="hierarchical arrays")
    hpda_sub = p_hpda.add_subparsers(dest="hpda_command", required=True)
    p = hpda_sub.add_parser("build", help="lift a scheme PDA to an HPDA")
    p.add_argument("--scheme", type=int, choices=(1, 2), required=True)
    p.add_argument("--design", required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--figure", help="also render the grids to this PNG")
    p.set_defaults(func=cmd_hpda_build)
    p = hpda_sub.add_parser("verify", help="verify an HPDA file")
    p.add_argument("hpda")
    p.set_defaults(func=cmd_hpda_verify)
    p = hpda_sub.add_parser("loads", help="transmission loads of an HPDA")
    p.add_argument("hpda")
    p.set_defaults(func=cmd_hpda_loads)

    p_sim = sub.add_parser("sim", help="run the delivery protocol")
    sim_sub = p_sim.add_subparsers(dest="sim_command", required=True)
    p = sim_sub.add_parser("flat", help="simulate a PDA scheme")
    p.add_argument("--pda", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--demand", help="comma-separated file indices")
    p.add_argument("--files", type=int,
                   help="library size (default: number of users)")
    p.add_argument("--packet-bytes", type=int, default=64)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_sim_flat)
    p = sim_sub.add_parser("hier", help="simulate an HPDA scheme")
    p.add_argument("--hpda", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--demand",
                   help="comma-separated file indices, row-major K1 x K2")
    p.add_argument("--files", type=int)
    p.add_argument("--packet-bytes", type=int, default=64)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_sim_hier)

    p_table = sub.add_parser("table", help="emit the comparison tables")
    table_sub = p_table.add_subparsers(dest="table_command", required=True)
    p = table_sub.add_parser("two", help="flat-scheme comparison table")
    p.add_argument("--design", required=True)
    p.add_argument("--i", help="comma-separated i values")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table_two)
    p = table_sub.add_parser("three", help="hierarchical comparison table")
    p.add_argument("--design-file", action="append",
                   help="extra design JSON (repeatable)")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table_three)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SimulationError as exc:
        _err(f"decode failure: {exc}")
        return EXIT_VERIFY
    except (DesignError, PdaError, HpdaError, CellBudgetError) as exc:
        _err(str(exc))
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        _err(str(exc))
        return EXIT_USAGE


def run() -> None:
    raise SystemExit(main())
