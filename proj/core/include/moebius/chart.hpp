#pragma once

// Immersion charts with third-order jets.
//
// A chart is an evaluatable map f: U c R^n -> R^m (m = n + p) together with a
// jet source. Built-in families carry an exact source (the map written in
// Taylor arithmetic); user maps get a finite-difference source. Both answer
// taylor(x, degree), the degree-truncated expansion of f around x, which is
// all every downstream pipeline consumes.

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "moebius/errors.hpp"
#include "moebius/taylor.hpp"

namespace moebius {

struct DomainBox {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    int dim() const { return static_cast<int>(lower.size()); }
    void validate() const;
    bool contains(const Eigen::VectorXd& x, double margin = 0.0) const;

    static DomainBox cube(int n, double lo, double hi);
};

struct Jet3 {
    int order = 0;   // highest derivative order actually filled (1..3)
    int n = 0;       // intrinsic dimension
    int m = 0;       // ambient dimension

    Eigen::VectorXd value;                // m
    Eigen::MatrixXd d1;                   // m x n
    std::vector<Eigen::MatrixXd> d2;      // n entries of m x n; d2v(i,j) = col j of d2[i]
    std::vector<Eigen::MatrixXd> d3;      // n*n entries of m x n

    Eigen::VectorXd d2v(int i, int j) const { return d2[i].col(j); }
    Eigen::VectorXd d3v(int i, int j, int k) const { return d3[static_cast<size_t>(i) * n + j].col(k); }

    static Jet3 zeros(int n, int m, int order);
};

// Fills a Jet3 (up to `order`) from the Taylor expansion of an ambient map.
Jet3 jet_from_taylor(const TVec& f, int n, int order);

class JetSource {
public:
    virtual ~JetSource() = default;
    // Taylor expansion of the map around x, trusted through `degree` (0..4).
    virtual TVec taylor(const Eigen::VectorXd& x, int degree) const = 0;
    virtual bool exact() const = 0;
    // Margin the evaluation point must keep from the domain boundary.
    virtual double required_margin() const { return 0.0; }
};

using PointMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using TaylorMap = std::function<TVec(const TVec&)>;

class ExactJetSource final : public JetSource {
public:
    explicit ExactJetSource(TaylorMap fn) : fn_(std::move(fn)) {}
    TVec taylor(const Eigen::VectorXd& x, int degree) const override;
    bool exact() const override { return true; }

private:
    TaylorMap fn_;
};

struct FdConfig {
    double step = 1e-3;         // base step for orders 1-2
    double step3 = 5e-3;        // step for third (and fourth) derivatives
};

class FiniteDifferenceJetSource final : public JetSource {
public:
    FiniteDifferenceJetSource(PointMap map, FdConfig cfg = {}) : map_(std::move(map)), cfg_(cfg) {}
    TVec taylor(const Eigen::VectorXd& x, int degree) const override;
    bool exact() const override { return false; }
    double required_margin() const override { return 4.0 * std::max(cfg_.step, cfg_.step3); }

private:
    PointMap map_;
    FdConfig cfg_;
};

class ImmersionChart {
public:
    ImmersionChart() = default;
    ImmersionChart(int intrinsic_dim, int ambient_dim, DomainBox domain,
                   std::shared_ptr<const JetSource> source, std::string label);

    int n() const { return n_; }
    int m() const { return m_; }
    int codim() const { return m_ - n_; }
    const DomainBox& domain() const { return domain_; }
    const std::string& label() const { return label_; }
    bool exact() const { return source_->exact(); }

    // Degree-truncated Taylor expansion at an interior point.
    TVec taylor(const Eigen::VectorXd& x, int degree) const;

    // Plain evaluation, usable as a PointMap for finite-difference oracles.
    Eigen::VectorXd point(const Eigen::VectorXd& x) const;
    PointMap point_map() const;

private:
    int n_ = 0, m_ = 0;
    DomainBox domain_;
    std::shared_ptr<const JetSource> source_;
    std::string label_;
};

// Jets up to `order` (1..3); unused slots stay zero and order records what is
// filled. Throws DomainViolation off-domain and RankDeficient when d1 drops
// rank beyond tolerance.
Jet3 evaluate_jet(const ImmersionChart& chart, const Eigen::VectorXd& x, int order);

// Central differences with one Richardson extrapolation level.
// Error orders: O(step^4) for order 1, O(step^2) for orders 2-3 after
// extrapolation (conservative bounds; see README for measured behavior).
Jet3 fd_jet_oracle(const PointMap& map, const Eigen::VectorXd& x, int order, double step = 1e-3,
                   int ambient_dim = -1);

// ---------------------------------------------------------------------------
// Ambient transformations (conformal maps of R^m) and reparametrizations.

struct AmbientMap {
    std::string label;
    TaylorMap apply;
    PointMap apply_point;
};

AmbientMap ambient_dilation(int m, double factor);
AmbientMap ambient_translation(const Eigen::VectorXd& offset);
AmbientMap ambient_rotation(const Eigen::MatrixXd& orthogonal);
// x -> center + (x - center)/|x - center|^2
AmbientMap ambient_inversion(const Eigen::VectorXd& center);

ImmersionChart compose_ambient(const ImmersionChart& chart, const AmbientMap& map);

// chart'(x) = chart(A x + b); A must be invertible. The new domain must map
// into the original one.
ImmersionChart reparametrize_affine(const ImmersionChart& chart, const Eigen::MatrixXd& A,
                                    const Eigen::VectorXd& b, DomainBox new_domain);

// Builds a chart around a user point map (finite-difference jets).
ImmersionChart make_fd_chart(int intrinsic_dim, int ambient_dim, DomainBox domain, PointMap map,
                             std::string label, FdConfig cfg = {});

// Builds a chart from a Taylor-arithmetic map (exact jets).
ImmersionChart make_exact_chart(int intrinsic_dim, int ambient_dim, DomainBox domain, TaylorMap map,
                                std::string label);

} // namespace moebius
