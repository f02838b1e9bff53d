from .core import (ComplexError, EmptyFactor, FormatError, NotPartite, NotPure, PartiteComplex,
                   SimplexNotInComplex, WeightFn, coset_complex, coset_complex_from_spaces,
                   export_complex, export_string, import_complex, import_string, join, link_of,
                   typed_isomorphic, unique_rows, vertex_link_profile, weight)
from .linalg import VectorSpace, gaussian_binomial
from .buildings import (FormSpace, FormKindMismatch, SubspaceComplex, WittIndexZero,
                        isotropic_flag_complex, opposite_group_model, oriflamme_complex,
                        standard_flag, transversal_complex_A)
