#pragma once

// Finite-difference curvature of a sampled metric field. This is the slow,
// implementation-independent oracle against the analytic conformal-change
// route: it never sees jets of the immersion, only metric samples.

#include <Eigen/Dense>

#include <functional>

#include "moebius/tensor.hpp"

namespace moebius {

using MetricField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

// Christoffel symbols Gamma[k](i,j) = Gamma^k_ij at x, first metric
// derivatives by Richardson-extrapolated central differences.
std::vector<Eigen::MatrixXd> christoffels_fd(const MetricField& g, const Eigen::VectorXd& x,
                                             double step = 5e-3);

// Full (0,4) curvature tensor R(i,j,k,l) = <R(d_i,d_j)d_k, d_l> at x.
Tensor4 riemann_from_metric_fd(const MetricField& g, const Eigen::VectorXd& x, double step = 5e-3);

} // namespace moebius
