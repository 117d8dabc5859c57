"""GRIL: generalized rank invariant landscapes for 2-parameter persistence."""

from .complexes import (BiFiltration, GridPoint, GridSpec, PreBiFiltration,
                        Simplex, SimplicialComplex, lower_star,
                        normalize_and_snap, simplex, snap, subcomplex_at,
                        validate)
from .worms import (BoundaryPath, DiscreteWorm, boundary_path, worm_contains,
                    worm_nested, worm_region)
from .zigzag import (Barcode, ZigzagFiltration, count_full_bars, zigzag_barcode)
from .genrank import (IntervalRegion, PosetDiagram, compute_rank, diagram_rank,
                      homology_space, induced_map, rank_oracle, rectangle_rank,
                      restrict_to_path)
from .gril import (AssignmentS, GrilQuery, GrilVector, assignment,
                   compute_gril, compute_gril_vector, directional_probe,
                   gril_distance, reconstruct_rank)
from .filtrations import (AttributedGraph, forman_ricci, hks,
                          hks_rc_bifiltration, hourglass_bifiltration,
                          hourglass_generate, knn_density_bifiltration)

__version__ = "0.1.0"
