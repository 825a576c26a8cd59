from nrurn.analysis.drift import F_map, drift_h, drift_h_tilde, jacobian, jacobian_uniform
from nrurn.analysis.spectral import compute_b, spectral_summary, check_stability, check_contraction
from nrurn.analysis.linear import linear_drift_matrix, linear_equilibrium
