#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fracdiff {

using Point = std::vector<double>;

/// Axis-aligned box (0, L_1) x ... x (0, L_d), 1 <= d <= 3.
class BoxDomain {
public:
    explicit BoxDomain(std::vector<double> lengths);

    std::size_t dim() const noexcept { return lengths_.size(); }
    double length(std::size_t axis) const { return lengths_.at(axis); }
    const std::vector<double>& lengths() const noexcept { return lengths_; }

    bool contains_closed(std::span<const double> x) const;
    bool contains_open(std::span<const double> x) const;
    bool on_boundary(std::span<const double> x) const { return contains_closed(x) && !contains_open(x); }

    /// sup_x |phi_n(x)| = prod_i sqrt(2/L_i), the same for every mode.
    double sup_eigenfunction() const;

    /// Smallest Dirichlet eigenvalue mu_(1,...,1).
    double principal_eigenvalue() const;

private:
    std::vector<double> lengths_;
};

/// Multi-index of positive integers labelling a Dirichlet eigenpair.
struct ModeIndex {
    std::array<int, 3> n{1, 1, 1};
    std::size_t d = 1;

    ModeIndex() = default;
    ModeIndex(std::initializer_list<int> components);

    int operator[](std::size_t axis) const { return n[axis]; }
    bool operator==(const ModeIndex&) const = default;
};

/// mu_n = pi^2 sum_i n_i^2 / L_i^2.
double eigenvalue(const BoxDomain& dom, const ModeIndex& n);

/// phi_n(x) = prod_i sqrt(2/L_i) sin(pi n_i x_i / L_i). Throws DomainError
/// if x is outside the closed box or the dimensions disagree.
double eigenfunction(const BoxDomain& dom, const ModeIndex& n, std::span<const double> x);

/// Built-in initial data with closed-form coefficients.
struct InitialData {
    enum class Kind { modes, bump };
    struct Term {
        double weight;
        ModeIndex mode;
    };

    Kind kind = Kind::modes;
    std::vector<Term> terms;  // Kind::modes: f = sum weight * phi_mode

    static InitialData mode(ModeIndex n) { return {Kind::modes, {{1.0, n}}}; }
    static InitialData sum(std::vector<Term> terms) { return {Kind::modes, std::move(terms)}; }
    /// f(x) = prod_i x_i (L_i - x_i)
    static InitialData bump() { return {Kind::bump, {}}; }

    double evaluate(const BoxDomain& dom, std::span<const double> x) const;
    std::string describe() const;
};

/// Truncated coefficient tensor fbar(n), n in [1..N]^d, row-major with the
/// last axis fastest.
class SpectralCoefficients {
public:
    SpectralCoefficients(BoxDomain dom, int max_mode, std::vector<double> coeffs, std::string source_tag,
                         double tail_l1, double l2_norm_sq);

    const BoxDomain& domain() const noexcept { return domain_; }
    int max_mode() const noexcept { return max_mode_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    const std::vector<double>& values() const noexcept { return coeffs_; }
    const std::string& source_tag() const noexcept { return source_tag_; }

    ModeIndex mode_at(std::size_t flat) const;
    double coeff(const ModeIndex& n) const;

    /// Upper bound (closed form) or estimate (quadrature) of the sum of
    /// |fbar(n)| over all modes outside the truncation box.
    double tail_l1() const noexcept { return tail_l1_; }
    /// Sum of |fbar(n)| over the resolved modes.
    double resolved_l1() const;
    /// int_D f^2, used for the Parseval check.
    double l2_norm_sq() const noexcept { return l2_norm_sq_; }

    /// Smallest eigenvalue among modes outside the truncation box.
    double first_unresolved_eigenvalue() const;

    /// Coefficients of alpha*this + gamma*other (same domain and cap).
    SpectralCoefficients combine(double alpha, const SpectralCoefficients& other, double gamma) const;

private:
    BoxDomain domain_;
    int max_mode_;
    std::vector<double> coeffs_;
    std::string source_tag_;
    double tail_l1_;
    double l2_norm_sq_;
};

/// Default per-axis cap: 64 in 1D, 32 in 2D, 16 in 3D.
int default_max_mode(std::size_t dim);

/// Closed-form projection of built-in data.
SpectralCoefficients project(const InitialData& f, const BoxDomain& dom, int max_mode);

/// Quadrature projection of arbitrary bounded f with 2N+16 Gauss-Legendre
/// nodes per axis. The tail estimate comes from a second projection onto
/// the modes between N and 2N.
SpectralCoefficients project(const std::function<double(std::span<const double>)>& f, const BoxDomain& dom,
                             int max_mode, std::string source_tag = "function");

/// Value of a truncated series together with a bound on what was dropped.
struct SeriesValue {
    double value = 0.0;
    double tail_bound = 0.0;
};

/// Dirichlet heat kernel p_D(t,x,y), truncated at N per axis. Throws
/// TruncationError when the tail bound exceeds `tolerance`.
SeriesValue heat_kernel(const BoxDomain& dom, double t, std::span<const double> x, std::span<const double> y,
                        int max_mode, double tolerance = 1e-8);

/// Generic modal sum sum_n fbar(n) G(mu_n) phi_n(x), where G is evaluated
/// once per resolved mode with nonzero coefficient and `tail_factor` bounds
/// |G(mu)| for every unresolved mode.
SeriesValue modal_sum(const SpectralCoefficients& coeffs, std::span<const double> modal_factors,
                      double tail_factor, std::span<const double> x);

/// T_D(t) f(x) = sum_n e^{-mu_n t} fbar(n) phi_n(x).
SeriesValue semigroup_apply(const SpectralCoefficients& coeffs, double t, std::span<const double> x,
                            double tolerance = 1e-6);

}  // namespace fracdiff
