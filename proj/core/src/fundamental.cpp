#include "moebius/fundamental.hpp"

#include <cmath>

namespace moebius {

// ---------------------------------------------------------------------------
// Tensor4 helpers

double curvature_quadform(const Tensor4& R, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
    const int n = R.n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        if (X[i] == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            if (Y[j] == 0.0) continue;
            for (int k = 0; k < n; ++k) {
                if (Y[k] == 0.0) continue;
                for (int l = 0; l < n; ++l)
                    acc += R(i, j, k, l) * X[i] * Y[j] * Y[k] * X[l];
            }
        }
    }
    return acc;
}

double sectional_curvature(const Tensor4& R, const Eigen::MatrixXd& g, const Eigen::VectorXd& X,
                           const Eigen::VectorXd& Y) {
    double gxx = X.dot(g * X), gyy = Y.dot(g * Y), gxy = X.dot(g * Y);
    double denom = gxx * gyy - gxy * gxy;
    return curvature_quadform(R, X, Y) / denom;
}

Eigen::MatrixXd ricci_from_riemann(const Tensor4& R, const Eigen::MatrixXd& g_inv) {
    const int n = R.n;
    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) acc += g_inv(i, l) * R(i, j, k, l);
            ric(j, k) = acc;
        }
    return ric;
}

double normalized_scalar(const Eigen::MatrixXd& ric, const Eigen::MatrixXd& g_inv) {
    const int n = static_cast<int>(ric.rows());
    double tr = (g_inv * ric).trace();
    return tr / (n * (n - 1));
}

Tensor4 change_basis(const Tensor4& R, const Eigen::MatrixXd& W) {
    const int n = R.n;
    // stepwise contraction, one index at a time
    Tensor4 t1(n), t2(n), t3(n), out(n);
    for (int a = 0; a < n; ++a)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double acc = 0.0;
                    for (int i = 0; i < n; ++i) acc += R(i, j, k, l) * W(i, a);
                    t1(a, j, k, l) = acc;
                }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double acc = 0.0;
                    for (int j = 0; j < n; ++j) acc += t1(a, j, k, l) * W(j, b);
                    t2(a, b, k, l) = acc;
                }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int l = 0; l < n; ++l) {
                    double acc = 0.0;
                    for (int k = 0; k < n; ++k) acc += t2(a, b, k, l) * W(k, c);
                    t3(a, b, c, l) = acc;
                }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double acc = 0.0;
                    for (int l = 0; l < n; ++l) acc += t3(a, b, c, l) * W(l, d);
                    out(a, b, c, d) = acc;
                }
    return out;
}

double curvature_symmetry_residual(const Tensor4& R) {
    const int n = R.n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double r = R(i, j, k, l);
                    worst = std::max(worst, std::abs(r + R(j, i, k, l)));
                    worst = std::max(worst, std::abs(r + R(i, j, l, k)));
                    worst = std::max(worst, std::abs(r - R(k, l, i, j)));
                    // first Bianchi over the first three slots
                    double b = R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l);
                    worst = std::max(worst, std::abs(b));
                }
    return worst;
}

// ---------------------------------------------------------------------------
// FundamentalData

FundamentalData fundamental_data(const Jet3& jet) {
    if (jet.order < 2) throw SpecInvalid("fundamental data needs order >= 2 jets");
    FundamentalData fd;
    fd.n = jet.n;
    fd.m = jet.m;
    fd.p = jet.m - jet.n;
    const int n = fd.n, m = fd.m, p = fd.p;

    fd.g = jet.d1.transpose() * jet.d1;
    fd.g_inv = fd.g.inverse();

    // Modified Gram-Schmidt on d1 columns in index order; frame_coords tracks
    // the coordinate coefficients so tangent_frame = d1 * frame_coords.
    fd.tangent_frame = Eigen::MatrixXd::Zero(m, n);
    fd.frame_coords = Eigen::MatrixXd::Identity(n, n);
    for (int a = 0; a < n; ++a) {
        Eigen::VectorXd v = jet.d1.col(a);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
        w[a] = 1.0;
        for (int b = 0; b < a; ++b) {
            double c = fd.tangent_frame.col(b).dot(v);
            v -= c * fd.tangent_frame.col(b);
            w -= c * fd.frame_coords.col(b);
        }
        double nv = v.norm();
        if (nv < 1e-12) throw RankDeficient("tangent frame collapsed during orthonormalization");
        fd.tangent_frame.col(a) = v / nv;
        fd.frame_coords.col(a) = w / nv;
    }

    // Normal frame: project the ambient basis onto the complement and
    // orthonormalize in index order (deterministic tie-breaking).
    Eigen::MatrixXd Q = fd.tangent_frame;
    fd.normal_projector = Eigen::MatrixXd::Identity(m, m) - Q * Q.transpose();
    fd.normal_frame = Eigen::MatrixXd::Zero(m, p);
    int found = 0;
    for (int c = 0; c < m && found < p; ++c) {
        Eigen::VectorXd v = fd.normal_projector.col(c);
        for (int b = 0; b < found; ++b) v -= fd.normal_frame.col(b).dot(v) * fd.normal_frame.col(b);
        double nv = v.norm();
        if (nv > 1e-8) fd.normal_frame.col(found++) = v / nv;
    }
    if (found != p) throw RankDeficient("could not complete the normal frame");

    // alpha(d_i, d_j) ambient = normal projection of the second derivatives.
    fd.alpha_coords.assign(static_cast<size_t>(n) * n, Eigen::VectorXd::Zero(m));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            fd.alpha_coords[static_cast<size_t>(i) * n + j] = fd.normal_projector * jet.d2v(i, j);

    // frame components
    fd.alpha.assign(p, Eigen::MatrixXd::Zero(n, n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Eigen::VectorXd s = Eigen::VectorXd::Zero(m);
            for (int i = 0; i < n; ++i) {
                double wa = fd.frame_coords(i, a);
                if (wa == 0.0) continue;
                for (int j = 0; j < n; ++j) {
                    double wb = fd.frame_coords(j, b);
                    if (wb == 0.0) continue;
                    s += wa * wb * fd.alpha_coord(i, j);
                }
            }
            for (int xi = 0; xi < p; ++xi) fd.alpha[xi](a, b) = fd.normal_frame.col(xi).dot(s);
        }
    fd.shape_ops = fd.alpha;

    fd.H = Eigen::VectorXd::Zero(p);
    for (int xi = 0; xi < p; ++xi) fd.H[xi] = fd.alpha[xi].trace() / n;
    fd.H_ambient = fd.normal_frame * fd.H;

    fd.alpha_sq = 0.0;
    for (int xi = 0; xi < p; ++xi) fd.alpha_sq += fd.alpha[xi].squaredNorm();
    fd.H_sq = fd.H.squaredNorm();
    return fd;
}

FundamentalData fundamental_data(const ImmersionChart& chart, const Eigen::VectorXd& x) {
    return fundamental_data(evaluate_jet(chart, x, 2));
}

double rho_squared(const FundamentalData& fd) {
    return fd.n / (fd.n - 1.0) * (fd.alpha_sq - fd.n * fd.H_sq);
}

void require_non_umbilic(const FundamentalData& fd, double eps) {
    if (rho_squared(fd) <= eps)
        throw UmbilicPoint("umbilic point: rho^2 = " + std::to_string(rho_squared(fd)));
}

Tensor4 gauss_curvature_tensor(const FundamentalData& fd) {
    const int n = fd.n, p = fd.p;
    Tensor4 R(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double acc = 0.0;
                    for (int xi = 0; xi < p; ++xi)
                        acc += fd.alpha[xi](a, d) * fd.alpha[xi](b, c) -
                               fd.alpha[xi](a, c) * fd.alpha[xi](b, d);
                    R(a, b, c, d) = acc;
                }
    return R;
}

Tensor4 gauss_curvature_tensor_coords(const FundamentalData& fd) {
    const int n = fd.n;
    Tensor4 R(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    R(i, j, k, l) = fd.alpha_coord(i, l).dot(fd.alpha_coord(j, k)) -
                                    fd.alpha_coord(i, k).dot(fd.alpha_coord(j, l));
    return R;
}

} // namespace moebius
