"""Lower and upper bounds on the dimension of low-distortion Euclidean embeddings
of manifolds, sparse vectors and finite point sets, with desk-scale
Monte Carlo checks of those bounds."""
from .bounds import (
    BoundConstants,
    CoveringBoundResult,
    DistortionBudget,
    ManifoldDescriptor,
    Regime,
    chord_lower_from_geodesic,
    covering_lower_bound,
    curvature_bounds,
    embedding_lb_from_covering,
    embedding_lb_from_width,
    geodesic_upper_from_chord,
    hyperbolic_ball_volume,
    jl_lower_bound,
    main_lower_bound,
    optimal_delta,
    reach_regime,
    rip_lower_bound,
    unit_ball_volume,
    wakin_upper_bound,
)
from .estimators import (
    DistortionReport,
    NetResult,
    PointCloud,
    WidthEstimate,
    diameter,
    distortion,
    gaussian_project,
    gaussian_width_mc,
    greedy_net,
    minimal_embedding_dim_search,
    packing_count,
)
from .models import Ball, FlatTorus, ModelFamily, Sphere, descriptor, embed_isometric, sample
from .sparse import SparseVectorSet, SubsetFamily, build_subset_family, family_to_vectors, rip_experiment

__version__ = "0.1.0"
