from nrurn.asymptotics.covariance import (solve_lyapunov, sigma1, matrix_exponential, lambda2_quadrature,
                                          noise_covariance)
from nrurn.asymptotics.regime import classify_regime, regime_of, Scaling, AsymptoticReport
