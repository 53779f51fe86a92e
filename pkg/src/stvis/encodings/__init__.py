from .cnf import CnfFormula, add_at_most_k, read_dimacs, write_dimacs, write_var_map
from .dpll import SolverVerdict, Status, solve_cnf
from .encode import (
    decode_model,
    encode_gp_sat,
    encode_visibility_ilp,
    encode_visibility_sat,
    max_via_sat,
)
from .lp import LpModel, solve_with_scipy, write_lp

__all__ = [
    "CnfFormula", "LpModel", "SolverVerdict", "Status",
    "add_at_most_k", "decode_model", "encode_gp_sat", "encode_visibility_ilp",
    "encode_visibility_sat", "max_via_sat", "read_dimacs", "solve_cnf",
    "solve_with_scipy", "write_dimacs", "write_lp", "write_var_map",
]
