#pragma once

// Classical pointwise submanifold package: induced metric, adapted orthonormal
// frames, second fundamental form, mean curvature, shape operators, and the
// Gauss-equation curvature tensor of the induced metric.

#include <Eigen/Dense>

#include <vector>

#include "moebius/chart.hpp"
#include "moebius/tensor.hpp"

namespace moebius {

inline constexpr double kUmbilicEpsDefault = 1e-12;

struct FundamentalData {
    int n = 0;  // intrinsic dimension
    int p = 0;  // codimension
    int m = 0;  // ambient dimension

    Eigen::MatrixXd g;               // n x n induced metric, coordinate basis
    Eigen::MatrixXd g_inv;           // n x n
    Eigen::MatrixXd tangent_frame;   // m x n, orthonormal ambient columns e_a
    Eigen::MatrixXd normal_frame;    // m x p, orthonormal ambient columns N_xi
    Eigen::MatrixXd frame_coords;    // n x n, e_a = sum_i frame_coords(i,a) d_i
    Eigen::MatrixXd normal_projector; // m x m, P_N = I - Q Q^T

    // alpha[xi](a,b) = <alpha(e_a, e_b), N_xi> in the orthonormal frames.
    std::vector<Eigen::MatrixXd> alpha;
    // Shape operators A_xi in the orthonormal tangent frame (= alpha[xi]).
    std::vector<Eigen::MatrixXd> shape_ops;

    Eigen::VectorXd H;          // p components of the mean curvature vector
    Eigen::VectorXd H_ambient;  // m
    double alpha_sq = 0.0;      // ||alpha||^2
    double H_sq = 0.0;          // ||H||^2

    // alpha(d_i, d_j) as ambient vectors (coordinate basis), for frame-free
    // consumers.
    std::vector<Eigen::VectorXd> alpha_coords; // n*n entries, m each
    const Eigen::VectorXd& alpha_coord(int i, int j) const {
        return alpha_coords[static_cast<size_t>(i) * n + j];
    }
};

FundamentalData fundamental_data(const Jet3& jet);
FundamentalData fundamental_data(const ImmersionChart& chart, const Eigen::VectorXd& x);

// rho^2 = n/(n-1) (||alpha||^2 - n ||H||^2); vanishes exactly at umbilics.
double rho_squared(const FundamentalData& fd);

// Throws UmbilicPoint when rho^2 <= eps.
void require_non_umbilic(const FundamentalData& fd, double eps = kUmbilicEpsDefault);

// Curvature tensor of the induced metric via the Gauss equation, components
// in the orthonormal tangent frame: R(a,b,c,d) = <R(e_a,e_b)e_c, e_d>.
Tensor4 gauss_curvature_tensor(const FundamentalData& fd);

// Same tensor in the chart coordinate basis.
Tensor4 gauss_curvature_tensor_coords(const FundamentalData& fd);

} // namespace moebius
