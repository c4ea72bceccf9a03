"""Finite étale groupoids, their convolution algebras, and exhaustive checks of the
submodule, slice and Galois correspondences at desk scale."""

from .algebra import (AlgebraElement, convolve, delta, element, involution, is_intertwiner,
                      is_normalizer, open_support, reduced_norm)
from .galois import (Cocycle, SpectralGrading, cocycle_from_spectral, fourier_component,
                     projection_cocycle, remark_counterexample, spectral_grading_of_cocycle,
                     validate_cocycle, verify_galois_bijection)
from .groupoid import (ArrowSet, FiniteGroupoid, cyclic, disjoint, is_bisection, pair, product,
                       structure_report, sym, transformation, unit_groupoid, validate_groupoid)
from .groups import FiniteGroup, cyclic_group, klein_group, symmetric_group
from .parsing import parse_element, parse_expression, parse_spec
from .scalars import QQi
from .semigroup import germ_groupoid, validate_action, validate_inverse_semigroup
from .submodule import (algebra_to_subgroupoid, commutant_of_diagonal, is_slice,
                        left_module_closure, module_of_open_set, normalizer_cutoff,
                        open_set_of_subspace, verify_module_correspondence,
                        verify_psi_isomorphism)
from .subspace import Subspace, span_reduce

__version__ = "0.1.0"
