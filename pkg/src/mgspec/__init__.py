"""Spectral gap of the Kirchhoff Laplacian on compact metric graphs."""
from .bounds import BoundReport, audit, evaluate_bounds, smallest_positive_root
from .discrete import CombinatorialGraph, alpha1, normalized_laplacian, von_below, von_below_inv
from .errors import MGSpecError
from .families import closed_form_lambda1, make_exponential_chain, make_family
from .fem import Mesh, Spectrum, eigenpairs, refine_until
from .graph import MetricGraph, build_graph, graph_metrics, load_graph, metric_diameter, save_graph
from .sturm_liouville import PumpkinChain, StepWeight, SmoothWeight, chain_weight, sl_lambda1
from .surgery import apply_surgery, reduce_to_pumpkin_chain, scale_graph

__version__ = "0.1.0"
