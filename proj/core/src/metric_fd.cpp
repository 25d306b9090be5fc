#include "moebius/metric_fd.hpp"

namespace moebius {

namespace {

using MatFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

Eigen::MatrixXd central_rich(const MatFn& f, const Eigen::VectorXd& x, int i, double h) {
    auto diff = [&](double step) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        return ((f(xp) - f(xm)) / (2.0 * step)).eval();
    };
    return (4.0 * diff(h / 2) - diff(h)) / 3.0;
}

} // namespace

std::vector<Eigen::MatrixXd> christoffels_fd(const MetricField& g, const Eigen::VectorXd& x,
                                             double step) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd g0 = g(x);
    Eigen::MatrixXd gi = g0.inverse();
    std::vector<Eigen::MatrixXd> dg(n);
    for (int k = 0; k < n; ++k) dg[k] = central_rich(g, x, k, step);

    std::vector<Eigen::MatrixXd> gamma(n, Eigen::MatrixXd::Zero(n, n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l)
                    acc += gi(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                gamma[k](i, j) = 0.5 * acc;
            }
    return gamma;
}

Tensor4 riemann_from_metric_fd(const MetricField& g, const Eigen::VectorXd& x, double step) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd g0 = g(x);
    auto gamma_flat = [&](const Eigen::VectorXd& y) {
        auto ga = christoffels_fd(g, y, step);
        Eigen::MatrixXd flat(n, n * n);
        for (int k = 0; k < n; ++k) flat.block(0, k * n, n, n) = ga[k];
        return flat;
    };
    std::vector<Eigen::MatrixXd> dgamma(n);  // dgamma[i]: derivative of the flat layout
    for (int i = 0; i < n; ++i) dgamma[i] = central_rich(gamma_flat, x, i, step);
    auto dG = [&](int i, int l, int j, int k) { return dgamma[i](j, l * n + k); };

    std::vector<Eigen::MatrixXd> ga = christoffels_fd(g, x, step);

    // mixed components first: R(i,j,k,l) holds the coefficient of d_l in
    // R(d_i, d_j) d_k
    Tensor4 R(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double acc = dG(i, l, j, k) - dG(j, l, i, k);
                    for (int mth = 0; mth < n; ++mth)
                        acc += ga[l](i, mth) * ga[mth](j, k) - ga[l](j, mth) * ga[mth](i, k);
                    R(i, j, k, l) = acc;
                }
    // lower the last index: R_{ijkl} = g_{ml} Rmixed^m_{ijk}
    Tensor4 out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double acc = 0.0;
                    for (int mth = 0; mth < n; ++mth) acc += g0(mth, l) * R(i, j, k, mth);
                    out(i, j, k, l) = acc;
                }
    return out;
}

} // namespace moebius
