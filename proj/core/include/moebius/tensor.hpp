#pragma once

#include <Eigen/Dense>

#include <vector>

namespace moebius {

// Dense (0,4) curvature tensor on a small tangent space. Component order
// follows R(i,j,k,l) = < R(e_i, e_j) e_k, e_l >.
struct Tensor4 {
    int n = 0;
    std::vector<double> a;

    Tensor4() = default;
    explicit Tensor4(int dim) : n(dim), a(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}

    double& operator()(int i, int j, int k, int l) {
        return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
    }
    double operator()(int i, int j, int k, int l) const {
        return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
    }
};

// R(X,Y,Y,X) with all arguments given in the tensor's basis.
double curvature_quadform(const Tensor4& R, const Eigen::VectorXd& X, const Eigen::VectorXd& Y);

// Sectional curvature of the plane spanned by X and Y, metric in same basis.
double sectional_curvature(const Tensor4& R, const Eigen::MatrixXd& g, const Eigen::VectorXd& X,
                           const Eigen::VectorXd& Y);

// Ric(j,k) = g^{il} R(i,j,k,l).
Eigen::MatrixXd ricci_from_riemann(const Tensor4& R, const Eigen::MatrixXd& g_inv);

// s = tr_g Ric / (n (n-1)); equals c on a space form of curvature c.
double normalized_scalar(const Eigen::MatrixXd& ric, const Eigen::MatrixXd& g_inv);

// Change of basis: R'(a,b,c,d) = R(i,j,k,l) W(i,a) W(j,b) W(k,c) W(l,d).
Tensor4 change_basis(const Tensor4& R, const Eigen::MatrixXd& W);

// Max violation of the algebraic curvature symmetries (skew pairs, pair
// interchange, first Bianchi); used by tests.
double curvature_symmetry_residual(const Tensor4& R);

} // namespace moebius
