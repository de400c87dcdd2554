"""Curvature and spectral stability of invariant metrics on multiplicity-free
compact homogeneous spaces, with a numerical Einstein solver and regeneration
of the published stability tables."""

from .errors import (ConflictingTriple, ConstructionFailed, DivergedFromBasin,
                     FamilyUnavailable, FlagstabError, IndexOutOfRange,
                     JacobianSingular, NoConvergence, NonPositiveValue,
                     NotEinstein, SearchBudgetExceeded, StepTooLarge,
                     UnknownSpace, UnsupportedN)
from .spaces import (InvariantMetric, SpaceModel, SymmetryGroup,
                     apply_permutation, build_space, canonicalize_metric,
                     catalog_ids, catalog_space, detect_symmetries, load_space,
                     scale_normalize, space_from_json, space_to_json)
from .curvature import (CurveSpec, RicciData, affine_curve, einstein_residual,
                        einstein_residual_exact, normalized_scalar_curvature,
                        prescribed_ricci_curve_f5, ricci_eigenvalues,
                        ricci_eigenvalues_exact, ricci_tensor_components,
                        saddle_curve_f4, scalar_curvature,
                        scalar_curvature_exact, scn_derivative_along_curve)
from .stability import (SpectralReport, StabilityMatrix, assemble_lp,
                        assemble_lp_exact, cluster_spectrum, distinguish,
                        distinguishing_reason, homothety_fingerprint,
                        stability_report, sym_eigen, tt_extremes)
from .roots import Polynomial, real_roots
from .solver import (Ansatz, Solution, SolutionSet, refine, solve_einstein,
                     solve_with_ansatz)
from .flags import (PairIndex, build_fn, classic_metric, f5_new_metrics,
                    fn_formula_crosscheck, lp_reduced, negreiros_candidates,
                    ricci_reduced)
from .report import CaseBundle, CaseRow, build_case, case_ids, parse, render

__version__ = "0.1.0"
