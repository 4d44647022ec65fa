"""Placement delivery arrays from combinatorial designs.

Construction of flat and hierarchical placement delivery arrays from
t-designs, axiom verification, lower bounds on the number of coded
transmissions, an XOR delivery simulator, and comparison tables.
"""

from .bounds import (BoundReport, cheng_bound, classify, wei_bound,
                     wei_equality_possible)
from .design import (Design, DesignError, catalog, design_to_document,
                     get_design, lambda_s, lambda_s_formula, load_design,
                     load_design_file, verify_design)
from .hpda import (Hpda, HpdaError, HpdaLoads, HpdaReport, hpda_from_document,
                   hpda_from_scheme1, hpda_from_scheme2, hpda_loads,
                   hpda_to_document, load_hpda, save_hpda, scheme1_r2_bound,
                   scheme2_r2_bound, verify_hpda)
from .pda import (STAR, Pda, PdaError, PdaParams, PdaReport, Violation,
                  load_pda, normalize, pda_from_document, pda_to_csv,
                  pda_to_document, regularity, save_pda, transpose,
                  verify_pda)
from .schemes import (CellBudgetError, PredictedParams, SchemeSpec,
                      construct, predicted_params, scheme1_construct,
                      scheme1_params, scheme2_construct, scheme2_params,
                      subset_rank)
from .sim import (FileLibrary, SimReport, SimulationError,
                  random_flat_demand, random_hier_demand, run_flat,
                  run_hierarchical)
from .tables import (SchemeRow, emit_table2, emit_table2_json, emit_table3,
                     emit_table3_json, fmt_decimal, fmt_ratio,
                     known_scheme_params, table2_rows, table3_rows)

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "CellBudgetError", "Design", "DesignError",
    "FileLibrary", "Hpda", "HpdaError", "HpdaLoads", "HpdaReport",
    "Pda", "PdaError", "PdaParams", "PdaReport", "PredictedParams",
    "STAR", "SchemeRow", "SchemeSpec", "SimReport", "SimulationError",
    "Violation", "catalog", "cheng_bound", "classify", "construct",
    "design_to_document", "emit_table2", "emit_table2_json", "emit_table3",
    "emit_table3_json", "fmt_decimal", "fmt_ratio", "get_design",
    "hpda_from_document", "hpda_from_scheme1", "hpda_from_scheme2",
    "hpda_loads", "hpda_to_document", "known_scheme_params", "lambda_s",
    "lambda_s_formula", "load_design", "load_design_file", "load_hpda",
    "load_pda", "normalize", "pda_from_document", "pda_to_csv",
    "pda_to_document", "predicted_params", "random_flat_demand",
    "random_hier_demand", "regularity", "run_flat", "run_hierarchical",
    "save_hpda", "save_pda", "scheme1_construct", "scheme1_params",
    "scheme1_r2_bound", "scheme2_construct", "scheme2_params",
    "scheme2_r2_bound", "subset_rank", "table2_rows", "table3_rows",
    "transpose", "verify_design", "verify_hpda", "verify_pda",
    "wei_bound", "wei_equality_possible",
]
