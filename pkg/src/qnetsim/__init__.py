"""Random-graph models of satellite- and fiber-based photonic quantum networks."""
from .channel import (DEFAULT_FIBER, DEFAULT_SATELLITE, FiberParams, SatelliteParams, link_prob,
                      p_fiber, p_sat, sample_positions, sat_distance)
from .config import NetworkConfig
from .ensemble import (EnsembleResult, SweepSpec, calibrate_radius, data_collapse,
                       run_ensemble, run_robustness, sweep)
from .graph import Graph, read_edgelist, write_edgelist
from .graphcore import ComponentPartition, bfs_distances, components, min_edge_cut
from .metrics import (LogNormalFit, MetricReport, avg_clustering, avg_shortest_path,
                      connectivity_threshold, degree_stats, diameter, kmed_closed_form,
                      lognormal_fit, lognormal_pdf, metric_report, small_world_prediction)
from .netgen import generate, generate_ba, generate_er, generate_ofbqi, generate_sbqi
from .robustness import (RobustnessCurve, critical_threshold, edge_cut_attack, n_iso,
                         random_link_failure, random_node_failure, targeted_attack)

__version__ = "0.1.0"
