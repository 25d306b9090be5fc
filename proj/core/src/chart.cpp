#include "moebius/chart.hpp"

#include <cmath>

namespace moebius {

// ---------------------------------------------------------------------------
// DomainBox

void DomainBox::validate() const {
    if (lower.size() != upper.size() || lower.size() < 1)
        throw SpecInvalid("domain box needs matching lower/upper of dimension >= 1");
    for (int i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i]))
            throw SpecInvalid("domain box needs lower < upper on every axis");
}

bool DomainBox::contains(const Eigen::VectorXd& x, double margin) const {
    if (x.size() != lower.size()) return false;
    for (int i = 0; i < x.size(); ++i)
        if (x[i] < lower[i] + margin || x[i] > upper[i] - margin) return false;
    return true;
}

DomainBox DomainBox::cube(int n, double lo, double hi) {
    DomainBox b;
    b.lower = Eigen::VectorXd::Constant(n, lo);
    b.upper = Eigen::VectorXd::Constant(n, hi);
    b.validate();
    return b;
}

// ---------------------------------------------------------------------------
// Jet3

Jet3 Jet3::zeros(int n, int m, int order) {
    Jet3 j;
    j.order = order;
    j.n = n;
    j.m = m;
    j.value = Eigen::VectorXd::Zero(m);
    j.d1 = Eigen::MatrixXd::Zero(m, n);
    j.d2.assign(n, Eigen::MatrixXd::Zero(m, n));
    j.d3.assign(static_cast<size_t>(n) * n, Eigen::MatrixXd::Zero(m, n));
    return j;
}

Jet3 jet_from_taylor(const TVec& f, int n, int order) {
    const int m = static_cast<int>(f.size());
    Jet3 j = Jet3::zeros(n, m, order);
    for (int a = 0; a < m; ++a) j.value[a] = f[a].value();
    if (order >= 1)
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < n; ++i) j.d1(a, i) = f[a].d1(i);
    if (order >= 2)
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) j.d2[i](a, k) = f[a].d2(i, k);
    if (order >= 3)
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) j.d3[static_cast<size_t>(i) * n + k](a, l) = f[a].d3(i, k, l);
    return j;
}

// ---------------------------------------------------------------------------
// Exact source

TVec ExactJetSource::taylor(const Eigen::VectorXd& x, int degree) const {
    return fn_(seed_variables(x, degree));
}

// ---------------------------------------------------------------------------
// Finite-difference source

namespace {

using StencilFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

Eigen::VectorXd central1(const StencilFn& f, const Eigen::VectorXd& x, int i, double h) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    return (f(xp) - f(xm)) / (2.0 * h);
}

Eigen::VectorXd central1_rich(const StencilFn& f, const Eigen::VectorXd& x, int i, double h) {
    return (4.0 * central1(f, x, i, h / 2) - central1(f, x, i, h)) / 3.0;
}

Eigen::VectorXd central2(const StencilFn& f, const Eigen::VectorXd& x, int i, int j, double h) {
    if (i == j) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        return (f(xp) - 2.0 * f(x) + f(xm)) / (h * h);
    }
    Eigen::VectorXd a = x, b = x, c = x, d = x;
    a[i] += h; a[j] += h;
    b[i] -= h; b[j] -= h;
    c[i] += h; c[j] -= h;
    d[i] -= h; d[j] += h;
    return (f(a) + f(b) - f(c) - f(d)) / (4.0 * h * h);
}

Eigen::VectorXd central2_rich(const StencilFn& f, const Eigen::VectorXd& x, int i, int j, double h) {
    return (4.0 * central2(f, x, i, j, h / 2) - central2(f, x, i, j, h)) / 3.0;
}

// d^3/dx_i dx_j dx_k: outer central difference (with Richardson) of the inner
// Richardson second difference.
Eigen::VectorXd central3(const StencilFn& f, const Eigen::VectorXd& x, int i, int j, int k, double h) {
    StencilFn inner = [&](const Eigen::VectorXd& y) { return central2_rich(f, y, j, k, h); };
    return central1_rich(inner, x, i, h);
}

// d^4: outer second difference of the inner second difference (no outer
// Richardson; only used for degree-4 expansions of user-supplied maps).
Eigen::VectorXd central4(const StencilFn& f, const Eigen::VectorXd& x, int i, int j, int k, int l,
                         double h) {
    StencilFn inner = [&](const Eigen::VectorXd& y) { return central2_rich(f, y, k, l, h); };
    return central2(inner, x, i, j, h);
}

} // namespace

TVec FiniteDifferenceJetSource::taylor(const Eigen::VectorXd& x, int degree) const {
    const int n = static_cast<int>(x.size());
    auto ctx = TaylorContext::get(n);
    Eigen::VectorXd f0 = map_(x);
    const int m = static_cast<int>(f0.size());

    std::vector<Eigen::VectorXd> coeffs(ctx->nmono(), Eigen::VectorXd::Zero(m));
    coeffs[0] = f0;

    auto set_coeff = [&](std::array<std::uint8_t, kTaylorMaxVars> exps, const Eigen::VectorXd& deriv) {
        Monomial mm;
        mm.exps = exps;
        double fact = 1.0;
        static const double f[5] = {1, 1, 2, 6, 24};
        for (int v = 0; v < kTaylorMaxVars; ++v) fact *= f[exps[v]];
        coeffs[ctx->index_of(exps)] = deriv / fact;
    };

    if (degree >= 1)
        for (int i = 0; i < n; ++i) {
            std::array<std::uint8_t, kTaylorMaxVars> e{};
            e[i] = 1;
            set_coeff(e, central1_rich(map_, x, i, cfg_.step));
        }
    if (degree >= 2)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                std::array<std::uint8_t, kTaylorMaxVars> e{};
                e[i] += 1;
                e[j] += 1;
                set_coeff(e, central2_rich(map_, x, i, j, cfg_.step));
            }
    if (degree >= 3)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    std::array<std::uint8_t, kTaylorMaxVars> e{};
                    e[i] += 1;
                    e[j] += 1;
                    e[k] += 1;
                    set_coeff(e, central3(map_, x, i, j, k, cfg_.step3));
                }
    if (degree >= 4)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int k = j; k < n; ++k)
                    for (int l = k; l < n; ++l) {
                        std::array<std::uint8_t, kTaylorMaxVars> e{};
                        e[i] += 1;
                        e[j] += 1;
                        e[k] += 1;
                        e[l] += 1;
                        set_coeff(e, central4(map_, x, i, j, k, l, cfg_.step3));
                    }

    TVec out;
    out.reserve(m);
    for (int a = 0; a < m; ++a) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(ctx->nmono());
        for (int idx = 0; idx < ctx->nmono(); ++idx)
            if (ctx->mono(idx).degree <= degree) c[idx] = coeffs[idx][a];
        out.push_back(TVal::from_coeffs(ctx, degree, std::move(c)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// ImmersionChart

ImmersionChart::ImmersionChart(int intrinsic_dim, int ambient_dim, DomainBox domain,
                               std::shared_ptr<const JetSource> source, std::string label)
    : n_(intrinsic_dim), m_(ambient_dim), domain_(std::move(domain)), source_(std::move(source)),
      label_(std::move(label)) {
    domain_.validate();
    if (domain_.dim() != n_) throw SpecInvalid("chart domain dimension mismatch");
    if (m_ <= n_) throw SpecInvalid("immersion needs ambient dim > intrinsic dim");
}

TVec ImmersionChart::taylor(const Eigen::VectorXd& x, int degree) const {
    if (!domain_.contains(x, source_->required_margin()))
        throw DomainViolation("point outside chart domain (margin " +
                              std::to_string(source_->required_margin()) + "): " + label_);
    TVec f = source_->taylor(x, degree);
    if (static_cast<int>(f.size()) != m_) throw SpecInvalid("evaluator ambient dimension mismatch");
    return f;
}

Eigen::VectorXd ImmersionChart::point(const Eigen::VectorXd& x) const {
    TVec f = taylor(x, 0);
    Eigen::VectorXd v(m_);
    for (int a = 0; a < m_; ++a) v[a] = f[a].value();
    return v;
}

PointMap ImmersionChart::point_map() const {
    ImmersionChart copy = *this;
    return [copy](const Eigen::VectorXd& x) { return copy.point(x); };
}

Jet3 evaluate_jet(const ImmersionChart& chart, const Eigen::VectorXd& x, int order) {
    if (order < 1 || order > 3) throw SpecInvalid("jet order must be 1, 2 or 3");
    Jet3 j = jet_from_taylor(chart.taylor(x, order), chart.n(), order);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j.d1);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smax <= 0.0 || smin / smax < 1e-10)
        throw RankDeficient("chart differential rank-deficient at queried point: " + chart.label());
    return j;
}

Jet3 fd_jet_oracle(const PointMap& map, const Eigen::VectorXd& x, int order, double step,
                   int ambient_dim) {
    if (order < 1 || order > 3) throw SpecInvalid("jet order must be 1, 2 or 3");
    FdConfig cfg;
    cfg.step = step;
    cfg.step3 = 5.0 * step;
    FiniteDifferenceJetSource src(map, cfg);
    TVec f = src.taylor(x, order);
    (void)ambient_dim;
    return jet_from_taylor(f, static_cast<int>(x.size()), order);
}

// ---------------------------------------------------------------------------
// Ambient maps

AmbientMap ambient_dilation(int m, double factor) {
    (void)m;
    AmbientMap map;
    map.label = "dilation(" + std::to_string(factor) + ")";
    map.apply = [factor](const TVec& x) { return factor * x; };
    map.apply_point = [factor](const Eigen::VectorXd& x) { return (factor * x).eval(); };
    return map;
}

AmbientMap ambient_translation(const Eigen::VectorXd& offset) {
    AmbientMap map;
    map.label = "translation";
    map.apply = [offset](const TVec& x) {
        TVec r = x;
        for (size_t i = 0; i < r.size(); ++i) r[i] += offset[static_cast<int>(i)];
        return r;
    };
    map.apply_point = [offset](const Eigen::VectorXd& x) { return (x + offset).eval(); };
    return map;
}

AmbientMap ambient_rotation(const Eigen::MatrixXd& orthogonal) {
    AmbientMap map;
    map.label = "rotation";
    Eigen::MatrixXd Q = orthogonal;
    map.apply = [Q](const TVec& x) {
        TVec r(x.size(), TVal::constant(x[0].ctx(), 0.0));
        for (int i = 0; i < Q.rows(); ++i)
            for (int j = 0; j < Q.cols(); ++j)
                if (Q(i, j) != 0.0) r[i] += Q(i, j) * x[j];
        return r;
    };
    map.apply_point = [Q](const Eigen::VectorXd& x) { return (Q * x).eval(); };
    return map;
}

AmbientMap ambient_inversion(const Eigen::VectorXd& center) {
    AmbientMap map;
    map.label = "inversion";
    Eigen::VectorXd c = center;
    map.apply = [c](const TVec& x) {
        TVec d = x;
        for (size_t i = 0; i < d.size(); ++i) d[i] -= c[static_cast<int>(i)];
        TVal inv = recip(squared_norm(d));
        TVec r = inv * d;
        for (size_t i = 0; i < r.size(); ++i) r[i] += c[static_cast<int>(i)];
        return r;
    };
    map.apply_point = [c](const Eigen::VectorXd& x) {
        Eigen::VectorXd d = x - c;
        return (c + d / d.squaredNorm()).eval();
    };
    return map;
}

namespace {

class ComposedSource final : public JetSource {
public:
    ComposedSource(std::shared_ptr<const JetSource> inner, AmbientMap map)
        : inner_(std::move(inner)), map_(std::move(map)) {}
    TVec taylor(const Eigen::VectorXd& x, int degree) const override {
        return map_.apply(inner_->taylor(x, degree));
    }
    bool exact() const override { return inner_->exact(); }
    double required_margin() const override { return inner_->required_margin(); }

private:
    std::shared_ptr<const JetSource> inner_;
    AmbientMap map_;
};

} // namespace

ImmersionChart compose_ambient(const ImmersionChart& chart, const AmbientMap& map) {
    // Route through the chart's public taylor() so domain checks stay active.
    class Wrap final : public JetSource {
    public:
        Wrap(ImmersionChart inner, AmbientMap map) : inner_(std::move(inner)), map_(std::move(map)) {}
        TVec taylor(const Eigen::VectorXd& x, int degree) const override {
            return map_.apply(inner_.taylor(x, degree));
        }
        bool exact() const override { return inner_.exact(); }
        double required_margin() const override { return 0.0; }

    private:
        ImmersionChart inner_;
        AmbientMap map_;
    };
    auto wrapped = std::make_shared<Wrap>(chart, map);
    return ImmersionChart(chart.n(), chart.m(), chart.domain(), wrapped,
                          chart.label() + "+" + map.label);
}

namespace {

// Evaluates a Taylor polynomial (around y0) at y0 + delta, where the deltas
// are Taylor values with zero constant term.
TVec substitute_shifted(const TVec& poly, const TVec& delta, int degree) {
    auto ctx_in = poly[0].ctx();      // context of the inner chart variables
    auto ctx_out = delta[0].ctx();    // context of the outer variables
    const int n_in = ctx_in->nvars();

    // delta powers: dp[i][e] = delta_i^e
    std::vector<std::vector<TVal>> dp(n_in);
    for (int i = 0; i < n_in; ++i) {
        dp[i].resize(kTaylorMaxDeg + 1, TVal::constant(ctx_out, 1.0));
        for (int e = 1; e <= kTaylorMaxDeg; ++e) dp[i][e] = dp[i][e - 1] * delta[i];
    }

    TVec out(poly.size(), TVal::constant(ctx_out, 0.0));
    for (size_t a = 0; a < poly.size(); ++a) {
        TVal acc = TVal::constant(ctx_out, 0.0);
        for (int idx = 0; idx < ctx_in->nmono(); ++idx) {
            const Monomial& mono = ctx_in->mono(idx);
            if (mono.degree > degree) break;
            double cf = poly[a].coeff(idx);
            if (cf == 0.0) continue;
            TVal term = TVal::constant(ctx_out, cf);
            for (int v = 0; v < n_in; ++v)
                if (mono.exps[v] > 0) term = term * dp[v][mono.exps[v]];
            acc += term;
        }
        out[a] = acc.truncated(degree);
    }
    return out;
}

class AffineReparamSource final : public JetSource {
public:
    AffineReparamSource(ImmersionChart inner, Eigen::MatrixXd A, Eigen::VectorXd b)
        : inner_(std::move(inner)), A_(std::move(A)), b_(std::move(b)) {}

    TVec taylor(const Eigen::VectorXd& x, int degree) const override {
        Eigen::VectorXd y0 = A_ * x + b_;
        TVec poly = inner_.taylor(y0, degree);
        TVec xv = seed_variables(x, degree);
        // delta_y = A (x - x0): zero constant term by construction
        TVec delta(A_.rows(), TVal::constant(xv[0].ctx(), 0.0));
        for (int i = 0; i < A_.rows(); ++i) {
            TVal acc = TVal::constant(xv[0].ctx(), 0.0);
            for (int j = 0; j < A_.cols(); ++j)
                if (A_(i, j) != 0.0) acc += A_(i, j) * (xv[j] - x[j]);
            delta[i] = acc;
        }
        return substitute_shifted(poly, delta, degree);
    }
    bool exact() const override { return inner_.exact(); }
    double required_margin() const override { return 0.0; }

private:
    ImmersionChart inner_;
    Eigen::MatrixXd A_;
    Eigen::VectorXd b_;
};

} // namespace

ImmersionChart reparametrize_affine(const ImmersionChart& chart, const Eigen::MatrixXd& A,
                                    const Eigen::VectorXd& b, DomainBox new_domain) {
    auto src = std::make_shared<AffineReparamSource>(chart, A, b);
    return ImmersionChart(chart.n(), chart.m(), std::move(new_domain), src,
                          chart.label() + "+reparam");
}

ImmersionChart make_fd_chart(int intrinsic_dim, int ambient_dim, DomainBox domain, PointMap map,
                             std::string label, FdConfig cfg) {
    auto src = std::make_shared<FiniteDifferenceJetSource>(std::move(map), cfg);
    return ImmersionChart(intrinsic_dim, ambient_dim, std::move(domain), src, std::move(label));
}

ImmersionChart make_exact_chart(int intrinsic_dim, int ambient_dim, DomainBox domain, TaylorMap map,
                                std::string label) {
    auto src = std::make_shared<ExactJetSource>(std::move(map));
    return ImmersionChart(intrinsic_dim, ambient_dim, std::move(domain), src, std::move(label));
}

} // namespace moebius
