"""Complex geodesics of strongly convex domains in C^n: stationary
discs, conormal lifts, the Lempert Riemann map, tangency loci against an
inner domain, and holomorphic extension of boundary data."""

__version__ = "0.1.0"

from .circle import (CircleGrid, TrigSeries, analyze, synthesize,
                     hilbert_conjugate, cauchy_extend, negative_tail_norm,
                     log_lift)
from .domains import (ConvexDomain, ConvexityCertificate, Bump, NAMED_BUMPS,
                      make_ball, make_ellipsoid, make_perturbed_ball, certify,
                      unit_outward_conormal, tangency_order_constant)
from .discs import (AnalyticDisc, SolverSettings, MoebiusMap, ProbeReport,
                    ball_geodesic, solve_from_center_direction,
                    solve_two_point, reparametrize, extremality_probe,
                    kobayashi_distance, poincare_distance,
                    boundary_hausdorff)
from .lifts import (ConormalLift, lift_from_disc, move_pole, projectivize,
                    boundary_conormality_residual, disc_separation_integral)
from .lempert import RiemannMapSample, psi, psi_inverse
from .tangency import (TangencyPoint, TangencyLocus, tangency_residual,
                       solve_tangent_disc, trace_locus, jacobian_certificate,
                       push_domain_through_psi, pi_set_sample)
from .extension import (BoundaryFunction, DiscTrace, ExtensionReport,
                        ConsistencyReport, ReconstructionResult,
                        NAMED_FUNCTIONS, restrict, extension_defect,
                        relative_defect, extend_along_disc, morera_integrals,
                        extension_report, consistency_check, reconstruct,
                        tangent_line_disc, tangent_line_family,
                        counterexample_harness, CounterexampleReport)
from .errors import (GeodiscError, PreconditionError, WindingNumberError,
                     SolverDivergence, HypothesisViolation)
