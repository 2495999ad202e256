"""spectralift: the transfer principle for orthogonally invariant functions
of symmetric matrices, with exact polyhedral calculus underneath.

Layer map
---------
matdecomp   eigendecomposition / SVD / conjugation (X = U^T Diag(lam) U)
symmetry    value partitions, stabilizers fix(x), orbit dimension formulas
polyfun     exact max-affine calculus: subdifferentials, stratification A_f,
            Fenchel conjugation, the duality map J_f    (rationals all the way)
lift        spectral values, subdifferential certificates, distance /
            projection / prox transfer, lifted strata and duality
idlab       numerical probes: Moreau gradients, projection derivatives,
            prox-regularity, identifiability sequences, partial smoothness
cli         JSON command-line front end (eig / stratify / prox-path / verify)
"""

from .errors import (AmbiguousProjectionError, BudgetExceededError,
                     DomainError, EnumerationCapError, InputError,
                     SpectraliftError)
from .matdecomp import (EigenPair, OrthMatrix, SVDTriple, SymMatrix,
                        conjugate_by, default_grouping_tol, diag_embed,
                        eig_sym, stabilizer_sample, svd)
from .symmetry import (Partition, PermutationElement, StabilizerDescriptor,
                       fix_group, local_symmetry_probe, orbit_dim,
                       partition_of, sort_desc, stabilizer_dim,
                       sym_membership)
from .polyhedra import GenPolyhedron, HPolyhedron, RelOpenPoly, RelOpenUnion
from .polyfun import (ConjugateOracle, MaxAffineFn, Stratification, Stratum,
                      aff_hull, biconjugate_check, conjugate_stratification,
                      conjugate_value, dual_map, fenchel_young_check,
                      normal_cone, polar, rb_contains, ri_contains, ri_point,
                      stratify, tangent_cone)
from .vsets import VectorSet, point_piece
from .lift import (LiftedStratification, LiftedStratum, SpectralFn,
                   SpectralSubdiffCert, SingSubdiffCert, lift_dim,
                   lift_stratification, numerical_tangent_dim, sing_project,
                   sing_subdiff, sing_subdiff_membership, sing_value,
                   spectral_conjugate_value, spectral_distance, spectral_project,
                   spectral_prox, spectral_ri_aff_rb, spectral_subdiff,
                   spectral_subdiff_membership, spectral_value, vector_prox)
from .reports import IdentificationTrace, ProbeReport, SpectrumPattern
from .idlab import (identifiability_test, local_uniqueness_check,
                    moreau_gradient_check, numeric_conjugate,
                    orbit_distance_samples, partial_smoothness_check,
                    projection_derivative_check, prox_regularity_probe,
                    proximal_identification_run)

__version__ = "0.1.0"
