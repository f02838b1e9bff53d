from .coefficients import CoeffGroup, GroupAxiomError, cyclic, from_permutations, load_table, parse_group, symmetric
from .cochains import (Cochain0, Cochain1, CochainError, CochainSpace, DimensionTooSmall, NotACocycle,
                       NotAntisymmetric, TriangleValues, action, d0, d1, d1_ordered, d_minus1, dist,
                       is_cocycle, norm)
from .spectral import (LocalSpectralReport, SpectralReport, local_spectral_report, random_walk_lambda2,
                       spectral_target_local, trickling_down)
from .exact import ExactResult, SearchSpaceTooLarge, h0_cb_exact, h1_cb_exhaustive, weighted_cheeger
from .bounds import (ConeBound, InvalidWitness, NoSymmetryWitness, SymmetryWitness, cosystolic_bound,
                     h1_lower_bound_from_cone, is_vacuous, radius_h1_bound)
from .contract import InvalidCone, contract_cocycle, holonomy
from .pi1 import BudgetExceeded, Pi1Report, h1_triviality_pi1, presentation
