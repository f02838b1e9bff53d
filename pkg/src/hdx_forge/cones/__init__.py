from .certificate import (BrokenPath, ConeCertificate, ConeError, ConeReport, IllegalStep,
                          MissingEdgeScript, NonTrivialTerminal, Script, certificate_hash,
                          export_cone, export_cone_string, import_cone, import_cone_string,
                          mirror_step, script_tr_counts, validate_cone)
from .constructors import (DimensionTooSmall, EmptyFactor, EmptyY, InvalidInputCone, JoinResult,
                           PreconditionViolated, RadiusBudget, ScriptBuilder, add_vertices_in,
                           budget_A, budget_C, cone_add_vertices, cone_join_basic,
                           cone_join_from_zero, cone_join_general, cone_join_in, cone_join_nac,
                           cone_star, join_zero_cone_in, radius_budget, star_cone_in)
from .engine import EngineReport, Filtration, Layer, ProviderContractViolated, induction_engine
from .providers import (ClassConditionUnmet, NoIsotropicTransversalLine, NoTransversalLine,
                        anchored_family_cone, at_relation, c_seed_conditions, d_seed_conditions,
                        provider_A, provider_C, provider_D)
from .search import BudgetExhausted, Disconnected, bfs_zero_cone, generic_cone_search
from .transfer import NotWeakCnModel, TransferReport, edge_map_case, subdivision_transfer
