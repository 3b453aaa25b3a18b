"""Projected barcodes of multi-parameter sublevel persistence and the distances built on them."""

from .complex import (GridSpec, MultiFiltration, PointCloud2D, SimplicialComplex, build_complex,
                      distance_field, freudenthal_grid, gaussian_kde, make_bifiltration,
                      read_cloud, read_filtration, sample_circle_dataset, write_cloud, write_filtration)
from .distances import (LineSpec, OptimizerConfig, ProjectionVector, UpsilonEvaluator,
                        fibered_matching_distance, ism_gamma, ism_truncated, projected_barcode,
                        sliced_gamma, upsilon, upsilon_subgradient)
from .matching import MatchWitness, bottleneck, convolution_distance_1d, epsilon_matching_exists
from .persistence import (Bar, Filtration1D, GradedBarcode, lower_star_filtration, reduce_persistence,
                          sublevel_barcode, superlevel_barcode)
from .sheaf import (Interval1D, Rectangle, RectangleModuleSum, StaircaseSupport, convolve_intervals,
                    pushforward_rectangles, restrict_to_line, scale_interval)

__version__ = "0.1.0"
