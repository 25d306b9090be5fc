#pragma once

// Truncated multivariate Taylor arithmetic (forward jet propagation).
//
// A TVal holds the Taylor polynomial of a scalar quantity around the current
// evaluation point, in up to 8 chart variables and up to total degree 4.
// Charts written against this type yield machine-precision derivatives of
// any composition of rational operations and the elementary functions below,
// which is how the built-in families supply exact jets.
//
// Coefficients are stored in the normalized convention c_m = (d^m f) / m!,
// so products are plain truncated convolutions.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "moebius/errors.hpp"

namespace moebius {

inline constexpr int kTaylorMaxDeg = 4;
inline constexpr int kTaylorMaxVars = 8;

struct Monomial {
    std::array<std::uint8_t, kTaylorMaxVars> exps{};
    int degree = 0;
};

// Per-variable-count tables: monomial list, index lookup and product map.
// Contexts are immutable and shared; get() caches one per variable count.
class TaylorContext {
public:
    static std::shared_ptr<const TaylorContext> get(int nvars);

    int nvars() const { return nvars_; }
    int nmono() const { return static_cast<int>(monos_.size()); }
    const Monomial& mono(int idx) const { return monos_[idx]; }

    // Index of the monomial with the given exponents, or -1 if degree > 4.
    int index_of(const std::array<std::uint8_t, kTaylorMaxVars>& exps) const;

    // prod(i, j) = index of mono_i * mono_j, or -1 when the degree overflows.
    int prod(int i, int j) const { return prod_[static_cast<size_t>(i) * monos_.size() + j]; }

    // Indices of degree-1 monomials (one per variable).
    int var_index(int v) const { return var_index_[v]; }

private:
    explicit TaylorContext(int nvars);

    int nvars_;
    std::vector<Monomial> monos_;
    std::vector<int> prod_;
    std::array<int, kTaylorMaxVars> var_index_{};
    std::vector<std::uint32_t> keys_;   // packed exponents, parallel to monos_
};

class TVal {
public:
    TVal() = default;
    TVal(std::shared_ptr<const TaylorContext> ctx, double constant);

    static TVal constant(const std::shared_ptr<const TaylorContext>& ctx, double v);
    static TVal variable(const std::shared_ptr<const TaylorContext>& ctx, int var, double v,
                         int deg = kTaylorMaxDeg);
    static TVal from_coeffs(const std::shared_ptr<const TaylorContext>& ctx, int deg,
                            Eigen::VectorXd coeffs);

    // Copy with a lower trusted degree (work in later products shrinks too).
    TVal truncated(int d) const;

    double value() const { return c_.size() ? c_[0] : 0.0; }
    int deg() const { return deg_; }
    const std::shared_ptr<const TaylorContext>& ctx() const { return ctx_; }
    const Eigen::VectorXd& coeffs() const { return c_; }

    // Raw coefficient in the c_m = d^m f / m! normalization.
    double coeff(int idx) const { return c_[idx]; }

    // Partial derivative values (the factorials are reapplied here).
    double d1(int i) const;
    double d2(int i, int j) const;
    double d3(int i, int j, int k) const;

    TVal operator-() const;
    TVal& operator+=(const TVal& o);
    TVal& operator-=(const TVal& o);
    TVal& operator+=(double s) { c_[0] += s; return *this; }
    TVal& operator-=(double s) { c_[0] -= s; return *this; }
    TVal& operator*=(double s) { c_ *= s; return *this; }

    friend TVal operator+(TVal a, const TVal& b) { a += b; return a; }
    friend TVal operator-(TVal a, const TVal& b) { a -= b; return a; }
    friend TVal operator+(TVal a, double s) { a += s; return a; }
    friend TVal operator+(double s, TVal a) { a += s; return a; }
    friend TVal operator-(TVal a, double s) { a -= s; return a; }
    friend TVal operator-(double s, const TVal& a) { TVal r = -a; r += s; return r; }
    friend TVal operator*(TVal a, double s) { a *= s; return a; }
    friend TVal operator*(double s, TVal a) { a *= s; return a; }
    friend TVal operator/(TVal a, double s) { a *= 1.0 / s; return a; }

    friend TVal operator*(const TVal& a, const TVal& b);
    friend TVal operator/(const TVal& a, const TVal& b);
    friend TVal operator/(double s, const TVal& b);

    // f(u) for a univariate f given by Taylor coefficients fc_k = f^(k)(u0)/k!
    // around u0 = u.value(). This is the single composition primitive behind
    // all elementary functions.
    static TVal compose_univariate(const TVal& u, const std::array<double, kTaylorMaxDeg + 1>& fc);

    // d/dx_var as a Taylor polynomial (trusted degree drops by one).
    TVal derivative(int var) const;

private:
    std::shared_ptr<const TaylorContext> ctx_;
    int deg_ = 0;
    Eigen::VectorXd c_;
};

TVal sqrt(const TVal& u);
TVal exp(const TVal& u);
TVal log(const TVal& u);
TVal sin(const TVal& u);
TVal cos(const TVal& u);
TVal sinh(const TVal& u);
TVal cosh(const TVal& u);
TVal pow(const TVal& u, double e);
TVal recip(const TVal& u);

using TVec = std::vector<TVal>;

TVal dot(const TVec& a, const TVec& b);
TVal squared_norm(const TVec& a);
TVec operator+(const TVec& a, const TVec& b);
TVec operator-(const TVec& a, const TVec& b);
TVec operator*(const TVal& s, const TVec& a);
TVec operator*(double s, const TVec& a);

// Seeds (x_1, ..., x_n) as Taylor variables around the given point.
TVec seed_variables(const Eigen::VectorXd& x, int deg = kTaylorMaxDeg);

// Dense matrix of Taylor values; just enough linear algebra for the
// frame-free pipelines (products and one LU solve).
class TMat {
public:
    TMat() = default;
    TMat(int rows, int cols, const TVal& fill);
    static TMat identity(int n, const std::shared_ptr<const TaylorContext>& ctx);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    TVal& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const TVal& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    TMat operator*(const TMat& o) const;
    TMat transpose() const;

    // Solves A X = B by Gaussian elimination with partial pivoting on the
    // constant coefficients. A must be square and nonsingular at the point.
    TMat solve(const TMat& b) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<TVal> a_;
};

} // namespace moebius
