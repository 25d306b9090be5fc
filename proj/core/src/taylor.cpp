#include "moebius/taylor.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

namespace moebius {

namespace {

std::uint32_t pack_key(const std::array<std::uint8_t, kTaylorMaxVars>& exps) {
    std::uint32_t k = 0;
    for (int v = 0; v < kTaylorMaxVars; ++v) k |= static_cast<std::uint32_t>(exps[v] & 0x7u) << (3 * v);
    return k;
}

void enumerate_monos(int nvars, std::vector<Monomial>& out) {
    // All exponent tuples with total degree <= kTaylorMaxDeg, ordered by
    // (degree, lexicographic), so index 0 is the constant term.
    std::vector<Monomial> all;
    Monomial m;
    // recursive enumeration over variables
    struct Rec {
        int nvars;
        std::vector<Monomial>& all;
        void go(Monomial& cur, int var, int degree_left) {
            if (var == nvars) {
                cur.degree = 0;
                for (int v = 0; v < nvars; ++v) cur.degree += cur.exps[v];
                all.push_back(cur);
                return;
            }
            for (int e = 0; e <= degree_left; ++e) {
                cur.exps[var] = static_cast<std::uint8_t>(e);
                go(cur, var + 1, degree_left - e);
            }
            cur.exps[var] = 0;
        }
    } rec{nvars, all};
    rec.go(m, 0, kTaylorMaxDeg);
    std::stable_sort(all.begin(), all.end(), [nvars](const Monomial& a, const Monomial& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        for (int v = 0; v < nvars; ++v)
            if (a.exps[v] != b.exps[v]) return a.exps[v] > b.exps[v];
        return false;
    });
    out = std::move(all);
}

double factorial_of(const Monomial& m) {
    static const double f[5] = {1, 1, 2, 6, 24};
    double r = 1;
    for (int v = 0; v < kTaylorMaxVars; ++v) r *= f[m.exps[v]];
    return r;
}

} // namespace

TaylorContext::TaylorContext(int nvars) : nvars_(nvars) {
    if (nvars < 1 || nvars > kTaylorMaxVars)
        throw SpecInvalid("taylor context supports 1..8 variables, got " + std::to_string(nvars));
    enumerate_monos(nvars, monos_);
    keys_.resize(monos_.size());
    std::unordered_map<std::uint32_t, int> lookup;
    lookup.reserve(monos_.size() * 2);
    for (int i = 0; i < nmono(); ++i) {
        keys_[i] = pack_key(monos_[i].exps);
        lookup[keys_[i]] = i;
    }
    for (int v = 0; v < nvars; ++v) {
        std::array<std::uint8_t, kTaylorMaxVars> e{};
        e[v] = 1;
        var_index_[v] = lookup.at(pack_key(e));
    }
    prod_.assign(static_cast<size_t>(nmono()) * nmono(), -1);
    for (int i = 0; i < nmono(); ++i) {
        for (int j = 0; j < nmono(); ++j) {
            if (monos_[i].degree + monos_[j].degree > kTaylorMaxDeg) continue;
            std::array<std::uint8_t, kTaylorMaxVars> e{};
            for (int v = 0; v < kTaylorMaxVars; ++v)
                e[v] = static_cast<std::uint8_t>(monos_[i].exps[v] + monos_[j].exps[v]);
            prod_[static_cast<size_t>(i) * nmono() + j] = lookup.at(pack_key(e));
        }
    }
}

int TaylorContext::index_of(const std::array<std::uint8_t, kTaylorMaxVars>& exps) const {
    std::uint32_t key = pack_key(exps);
    for (int i = 0; i < nmono(); ++i)
        if (keys_[i] == key) return i;
    return -1;
}

std::shared_ptr<const TaylorContext> TaylorContext::get(int nvars) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const TaylorContext>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(nvars);
    if (it != cache.end()) return it->second;
    auto ctx = std::shared_ptr<const TaylorContext>(new TaylorContext(nvars));
    cache[nvars] = ctx;
    return ctx;
}

// ---------------------------------------------------------------------------

TVal::TVal(std::shared_ptr<const TaylorContext> ctx, double constant)
    : ctx_(std::move(ctx)), deg_(kTaylorMaxDeg), c_(Eigen::VectorXd::Zero(ctx_->nmono())) {
    c_[0] = constant;
}

TVal TVal::constant(const std::shared_ptr<const TaylorContext>& ctx, double v) {
    return TVal(ctx, v);
}

TVal TVal::variable(const std::shared_ptr<const TaylorContext>& ctx, int var, double v, int deg) {
    TVal t(ctx, v);
    t.c_[ctx->var_index(var)] = 1.0;
    t.deg_ = deg;
    return t;
}

TVal TVal::truncated(int d) const {
    TVal t = *this;
    t.deg_ = std::min(deg_, d);
    return t;
}

TVal TVal::from_coeffs(const std::shared_ptr<const TaylorContext>& ctx, int deg,
                       Eigen::VectorXd coeffs) {
    TVal t(ctx, 0.0);
    t.deg_ = deg;
    t.c_ = std::move(coeffs);
    return t;
}

double TVal::d1(int i) const {
    std::array<std::uint8_t, kTaylorMaxVars> e{};
    e[i] = 1;
    return c_[ctx_->index_of(e)];
}

double TVal::d2(int i, int j) const {
    std::array<std::uint8_t, kTaylorMaxVars> e{};
    e[i] += 1;
    e[j] += 1;
    int idx = ctx_->index_of(e);
    Monomial m;
    m.exps = e;
    return c_[idx] * factorial_of(m);
}

double TVal::d3(int i, int j, int k) const {
    std::array<std::uint8_t, kTaylorMaxVars> e{};
    e[i] += 1;
    e[j] += 1;
    e[k] += 1;
    int idx = ctx_->index_of(e);
    Monomial m;
    m.exps = e;
    return c_[idx] * factorial_of(m);
}

TVal TVal::operator-() const {
    TVal r = *this;
    r.c_ = -r.c_;
    return r;
}

TVal& TVal::operator+=(const TVal& o) {
    deg_ = std::min(deg_, o.deg_);
    c_ += o.c_;
    return *this;
}

TVal& TVal::operator-=(const TVal& o) {
    deg_ = std::min(deg_, o.deg_);
    c_ -= o.c_;
    return *this;
}

TVal operator*(const TVal& a, const TVal& b) {
    const TaylorContext& ctx = *a.ctx_;
    TVal r(a.ctx_, 0.0);
    r.deg_ = std::min(a.deg_, b.deg_);
    const int nm = ctx.nmono();
    for (int i = 0; i < nm; ++i) {
        double ca = a.c_[i];
        if (ca == 0.0) continue;
        if (ctx.mono(i).degree > r.deg_) break;
        for (int j = 0; j < nm; ++j) {
            double cb = b.c_[j];
            if (cb == 0.0) continue;
            int tgt = ctx.prod(i, j);
            if (tgt < 0) break;  // monomials are degree-sorted
            if (ctx.mono(i).degree + ctx.mono(j).degree > r.deg_) break;
            r.c_[tgt] += ca * cb;
        }
    }
    return r;
}

TVal TVal::compose_univariate(const TVal& u, const std::array<double, kTaylorMaxDeg + 1>& fc) {
    // delta = u - u0 is nilpotent (no constant term), so Horner over delta
    // terminates exactly at the truncation degree.
    TVal delta = u;
    delta.c_[0] = 0.0;
    TVal r(u.ctx_, fc[kTaylorMaxDeg]);
    r.deg_ = u.deg_;
    for (int k = kTaylorMaxDeg - 1; k >= 0; --k) {
        r = r * delta;
        r += fc[k];
    }
    r.deg_ = u.deg_;
    return r;
}

TVal recip(const TVal& u) {
    double u0 = u.value();
    if (std::abs(u0) < 1e-300) throw Error("NumericError", "taylor reciprocal at 0");
    std::array<double, kTaylorMaxDeg + 1> fc{};
    double p = 1.0 / u0;
    for (int k = 0; k <= kTaylorMaxDeg; ++k) {
        fc[k] = (k % 2 == 0) ? p : -p;
        p /= u0;
    }
    return TVal::compose_univariate(u, fc);
}

TVal operator/(const TVal& a, const TVal& b) { return a * recip(b); }
TVal operator/(double s, const TVal& b) { return recip(b) * s; }

TVal sqrt(const TVal& u) {
    double u0 = u.value();
    if (u0 <= 0.0) throw Error("NumericError", "taylor sqrt of non-positive value");
    double s = std::sqrt(u0);
    std::array<double, kTaylorMaxDeg + 1> fc{};
    fc[0] = s;
    fc[1] = 0.5 / s;
    fc[2] = -1.0 / (8.0 * s * u0);
    fc[3] = 1.0 / (16.0 * s * u0 * u0);
    fc[4] = -5.0 / (128.0 * s * u0 * u0 * u0);
    return TVal::compose_univariate(u, fc);
}

TVal exp(const TVal& u) {
    double e0 = std::exp(u.value());
    std::array<double, kTaylorMaxDeg + 1> fc{};
    static const double inv_fact[5] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
    for (int k = 0; k <= kTaylorMaxDeg; ++k) fc[k] = e0 * inv_fact[k];
    return TVal::compose_univariate(u, fc);
}

TVal log(const TVal& u) {
    double u0 = u.value();
    if (u0 <= 0.0) throw Error("NumericError", "taylor log of non-positive value");
    std::array<double, kTaylorMaxDeg + 1> fc{};
    fc[0] = std::log(u0);
    double p = 1.0 / u0;
    for (int k = 1; k <= kTaylorMaxDeg; ++k) {
        fc[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / k;
        p /= u0;
    }
    return TVal::compose_univariate(u, fc);
}

TVal sin(const TVal& u) {
    double s = std::sin(u.value()), c = std::cos(u.value());
    static const double inv_fact[5] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
    std::array<double, kTaylorMaxDeg + 1> fc{};
    const double cyc[4] = {s, c, -s, -c};
    for (int k = 0; k <= kTaylorMaxDeg; ++k) fc[k] = cyc[k % 4] * inv_fact[k];
    return TVal::compose_univariate(u, fc);
}

TVal cos(const TVal& u) {
    double s = std::sin(u.value()), c = std::cos(u.value());
    static const double inv_fact[5] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
    std::array<double, kTaylorMaxDeg + 1> fc{};
    const double cyc[4] = {c, -s, -c, s};
    for (int k = 0; k <= kTaylorMaxDeg; ++k) fc[k] = cyc[k % 4] * inv_fact[k];
    return TVal::compose_univariate(u, fc);
}

TVal sinh(const TVal& u) {
    double s = std::sinh(u.value()), c = std::cosh(u.value());
    static const double inv_fact[5] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
    std::array<double, kTaylorMaxDeg + 1> fc{};
    for (int k = 0; k <= kTaylorMaxDeg; ++k) fc[k] = ((k % 2 == 0) ? s : c) * inv_fact[k];
    return TVal::compose_univariate(u, fc);
}

TVal cosh(const TVal& u) {
    double s = std::sinh(u.value()), c = std::cosh(u.value());
    static const double inv_fact[5] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
    std::array<double, kTaylorMaxDeg + 1> fc{};
    for (int k = 0; k <= kTaylorMaxDeg; ++k) fc[k] = ((k % 2 == 0) ? c : s) * inv_fact[k];
    return TVal::compose_univariate(u, fc);
}

TVal pow(const TVal& u, double e) {
    double u0 = u.value();
    if (u0 <= 0.0) throw Error("NumericError", "taylor pow of non-positive base");
    std::array<double, kTaylorMaxDeg + 1> fc{};
    double coef = 1.0;
    for (int k = 0; k <= kTaylorMaxDeg; ++k) {
        fc[k] = coef * std::pow(u0, e - k);
        coef *= (e - k) / (k + 1);
    }
    return TVal::compose_univariate(u, fc);
}

TVal TVal::derivative(int var) const {
    TVal r(ctx_, 0.0);
    r.deg_ = std::max(0, deg_ - 1);
    const int nm = ctx_->nmono();
    for (int i = 0; i < nm; ++i) {
        const Monomial& m = ctx_->mono(i);
        if (m.exps[var] == 0 || c_[i] == 0.0) continue;
        std::array<std::uint8_t, kTaylorMaxVars> e = m.exps;
        e[var] -= 1;
        int tgt = ctx_->index_of(e);
        r.c_[tgt] += c_[i] * m.exps[var];
    }
    return r;
}

// ---------------------------------------------------------------------------

TVal dot(const TVec& a, const TVec& b) {
    TVal r = a[0] * b[0];
    for (size_t i = 1; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}

TVal squared_norm(const TVec& a) { return dot(a, a); }

TVec operator+(const TVec& a, const TVec& b) {
    TVec r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

TVec operator-(const TVec& a, const TVec& b) {
    TVec r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

TVec operator*(const TVal& s, const TVec& a) {
    TVec r = a;
    for (auto& v : r) v = s * v;
    return r;
}

TVec operator*(double s, const TVec& a) {
    TVec r = a;
    for (auto& v : r) v *= s;
    return r;
}

TVec seed_variables(const Eigen::VectorXd& x, int deg) {
    auto ctx = TaylorContext::get(static_cast<int>(x.size()));
    TVec vars;
    vars.reserve(x.size());
    for (int i = 0; i < x.size(); ++i) vars.push_back(TVal::variable(ctx, i, x[i], deg));
    return vars;
}

// ---------------------------------------------------------------------------

TMat::TMat(int rows, int cols, const TVal& fill)
    : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

TMat TMat::identity(int n, const std::shared_ptr<const TaylorContext>& ctx) {
    TMat m(n, n, TVal::constant(ctx, 0.0));
    for (int i = 0; i < n; ++i) m(i, i) = TVal::constant(ctx, 1.0);
    return m;
}

TMat TMat::operator*(const TMat& o) const {
    TMat r(rows_, o.cols_, TVal::constant(a_[0].ctx(), 0.0));
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const TVal& aik = (*this)(i, k);
            for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

TMat TMat::transpose() const {
    TMat r(cols_, rows_, a_[0]);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

TMat TMat::solve(const TMat& b) const {
    if (rows_ != cols_) throw Error("NumericError", "TMat::solve needs a square matrix");
    TMat a = *this;
    TMat x = b;
    const int n = rows_;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a(col, col).value());
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(a(r, col).value());
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < 1e-300) throw Error("NumericError", "TMat::solve singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            for (int j = 0; j < x.cols(); ++j) std::swap(x(col, j), x(piv, j));
        }
        TVal inv = recip(a(col, col));
        for (int j = col; j < n; ++j) a(col, j) = a(col, j) * inv;
        for (int j = 0; j < x.cols(); ++j) x(col, j) = x(col, j) * inv;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            TVal factor = a(r, col);
            if (factor.value() == 0.0) {
                // still subtract: higher-order coefficients may be nonzero
                bool all_zero = factor.coeffs().isZero(0.0);
                if (all_zero) continue;
            }
            for (int j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
            for (int j = 0; j < x.cols(); ++j) x(r, j) -= factor * x(col, j);
        }
    }
    return x;
}

} // namespace moebius
