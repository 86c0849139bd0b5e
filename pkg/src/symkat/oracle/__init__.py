"""Reference semantics, fuzzing harness and benchmark generators."""
from .generators import gen_combinatorial, gen_slices, gen_topology
from .semantics import (Concrete, OracleLimit, differing_inputs, distinguishing_depth, eval_traces,
                        input_prefixed, naive_bisim)
