"""Vertex algebras of vertex algebroids and their twisted modules, in exact arithmetic."""

from .algebroid import (CommAlgebra, LieAlgebroid, LieAlgebroidModule, Tca, VertexAlgebroid,
                        algebroid_of_tca, check_comm_algebra, check_lie_algebroid,
                        check_lie_algebroid_module, check_tca, check_vertex_algebroid,
                        lie_algebroid_quotient, rescale_tca, tca_of_algebroid)
from .automorphism import (GradedEndomorphism, SectorGrading, check_algebroid_endomorphism,
                           check_sector_grading, fixed_subalgebroid, overlap_ideal)
from .errors import (AlgebroidError, InputError, InternalConsistencyError, MembershipError,
                     WindowError)
from .io import parse_input
from .kernels import BACKEND
from .loop import bracket, build_loop_lie, triangular_split, verify_lie_axioms, verify_locality
from .report import Report
from .twisted import (TwistedFiber, build_MB, check_fiber_conditions, fiber_context,
                      fiber_restriction, induce_twisted, is_simple_graded, radical_J,
                      relations_W, simple_quotient, verify_commutator_transfer,
                      verify_twisted_jacobi)
from .vertex import (build_vb, check_functoriality, extend_automorphism, field_coefficient,
                     induce_vacuum, translation_D, verify_jacobi_identity)

__version__ = "0.1.0"
