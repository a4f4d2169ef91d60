#include "fracdiff/spectral.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "fracdiff/errors.hpp"
#include "fracdiff/quadrature.hpp"

namespace fracdiff {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
constexpr double kZeta3 = 1.2020569031595942854;

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    while (exp--) r *= base;
    return r;
}

// sin(pi n x / L) * sqrt(2/L) for n = 1..N at a single coordinate.
std::vector<double> axis_modes(double length, int max_mode, double x) {
    std::vector<double> out(static_cast<std::size_t>(max_mode));
    const double norm = std::sqrt(2.0 / length);
    for (int n = 1; n <= max_mode; ++n) out[std::size_t(n - 1)] = norm * std::sin(kPi * n * x / length);
    return out;
}

// sum_{k=1}^{N} exp(-pi^2 k^2 t / L^2); N < 0 means "until negligible".
double theta_partial(double length, double t, long max_mode) {
    const double a = kPi2 * t / (length * length);
    double s = 0.0;
    for (long k = 1; max_mode < 0 || k <= max_mode; ++k) {
        const double term = std::exp(-a * double(k) * double(k));
        s += term;
        if (term < 1e-18 * s || term == 0.0) break;
    }
    return s;
}

// Contract axis `axis` of a row-major tensor with shape `shape` against the
// matrix m (rows x shape[axis]).
std::vector<double> contract_axis(const std::vector<double>& data, std::vector<std::size_t>& shape,
                                  std::size_t axis, const std::vector<std::vector<double>>& m) {
    std::size_t outer = 1, inner = 1;
    for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
    for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
    const std::size_t len = shape[axis];
    const std::size_t rows = m.size();
    std::vector<double> out(outer * rows * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t q = 0; q < len; ++q) {
                const double w = m[r][q];
                const double* src = &data[(o * len + q) * inner];
                double* dst = &out[(o * rows + r) * inner];
                for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
            }
    shape[axis] = rows;
    return out;
}

struct TensorProjection {
    std::vector<double> coeffs;
    double l2_norm_sq = 0.0;
};

TensorProjection tensor_project(const std::function<double(std::span<const double>)>& f, const BoxDomain& dom,
                                int max_mode, std::size_t nodes) {
    const std::size_t d = dom.dim();
    std::vector<GaussRule> rules;
    std::vector<std::vector<std::vector<double>>> mats;
    for (std::size_t a = 0; a < d; ++a) {
        rules.push_back(gauss_legendre(nodes, 0.0, dom.length(a)));
        std::vector<std::vector<double>> m(static_cast<std::size_t>(max_mode), std::vector<double>(nodes));
        for (std::size_t q = 0; q < nodes; ++q) {
            const auto phi = axis_modes(dom.length(a), max_mode, rules[a].nodes[q]);
            for (int n = 0; n < max_mode; ++n) m[std::size_t(n)][q] = rules[a].weights[q] * phi[std::size_t(n)];
        }
        mats.push_back(std::move(m));
    }
    const std::size_t total = ipow(nodes, d);
    std::vector<double> values(total);
    Point x(d);
    double l2 = 0.0;
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        double w = 1.0;
        for (std::size_t a = d; a-- > 0;) {
            const std::size_t q = rem % nodes;
            rem /= nodes;
            x[a] = rules[a].nodes[q];
            w *= rules[a].weights[q];
        }
        values[flat] = f(x);
        l2 += w * values[flat] * values[flat];
    }
    std::vector<std::size_t> shape(d, nodes);
    for (std::size_t a = 0; a < d; ++a) values = contract_axis(values, shape, a, mats[a]);
    return {std::move(values), l2};
}

}  // namespace

BoxDomain::BoxDomain(std::vector<double> lengths) : lengths_(std::move(lengths)) {
    if (lengths_.empty() || lengths_.size() > 3) throw DomainError("BoxDomain: dimension must be 1, 2 or 3");
    for (double l : lengths_)
        if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("BoxDomain: lengths must be positive");
}

bool BoxDomain::contains_closed(std::span<const double> x) const {
    if (x.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
        if (!(x[i] >= 0.0 && x[i] <= lengths_[i])) return false;
    return true;
}

bool BoxDomain::contains_open(std::span<const double> x) const {
    if (x.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
        if (!(x[i] > 0.0 && x[i] < lengths_[i])) return false;
    return true;
}

double BoxDomain::sup_eigenfunction() const {
    double s = 1.0;
    for (double l : lengths_) s *= std::sqrt(2.0 / l);
    return s;
}

double BoxDomain::principal_eigenvalue() const {
    double mu = 0.0;
    for (double l : lengths_) mu += kPi2 / (l * l);
    return mu;
}

ModeIndex::ModeIndex(std::initializer_list<int> components) {
    if (components.size() < 1 || components.size() > 3)
        throw DomainError("ModeIndex: between one and three components");
    d = components.size();
    std::size_t i = 0;
    for (int c : components) {
        if (c < 1) throw DomainError("ModeIndex: components must be positive");
        n[i++] = c;
    }
}

namespace {

void check_mode(const BoxDomain& dom, const ModeIndex& n) {
    if (n.d != dom.dim()) throw DomainError("mode index dimension does not match the domain");
    for (std::size_t i = 0; i < n.d; ++i)
        if (n[i] < 1) throw DomainError("mode index components must be positive");
}

}  // namespace

double eigenvalue(const BoxDomain& dom, const ModeIndex& n) {
    check_mode(dom, n);
    double mu = 0.0;
    for (std::size_t i = 0; i < n.d; ++i) {
        const double k = double(n[i]) / dom.length(i);
        mu += k * k;
    }
    return kPi2 * mu;
}

double eigenfunction(const BoxDomain& dom, const ModeIndex& n, std::span<const double> x) {
    check_mode(dom, n);
    if (!dom.contains_closed(x)) throw DomainError("eigenfunction: point outside the closed box");
    double v = 1.0;
    for (std::size_t i = 0; i < n.d; ++i) {
        const double l = dom.length(i);
        // Exact zeros on the faces; sin(pi n) is not exactly 0 in floating point.
        if (x[i] == 0.0 || x[i] == l) return 0.0;
        v *= std::sqrt(2.0 / l) * std::sin(kPi * n[i] * x[i] / l);
    }
    return v;
}

double InitialData::evaluate(const BoxDomain& dom, std::span<const double> x) const {
    if (kind == Kind::bump) {
        if (!dom.contains_closed(x)) throw DomainError("InitialData: point outside the closed box");
        double v = 1.0;
        for (std::size_t i = 0; i < dom.dim(); ++i) v *= x[i] * (dom.length(i) - x[i]);
        return v;
    }
    double v = 0.0;
    for (const auto& term : terms) v += term.weight * eigenfunction(dom, term.mode, x);
    return v;
}

std::string InitialData::describe() const {
    if (kind == Kind::bump) return "bump";
    std::ostringstream os;
    os << (terms.size() == 1 && terms[0].weight == 1.0 ? "mode" : "sum");
    for (const auto& term : terms) {
        if (!(terms.size() == 1 && term.weight == 1.0)) os << ' ' << term.weight;
        for (std::size_t i = 0; i < term.mode.d; ++i) os << ' ' << term.mode[i];
        if (terms.size() > 1 && &term != &terms.back()) os << ';';
    }
    return os.str();
}

SpectralCoefficients::SpectralCoefficients(BoxDomain dom, int max_mode, std::vector<double> coeffs,
                                           std::string source_tag, double tail_l1, double l2_norm_sq)
    : domain_(std::move(dom)),
      max_mode_(max_mode),
      coeffs_(std::move(coeffs)),
      source_tag_(std::move(source_tag)),
      tail_l1_(tail_l1),
      l2_norm_sq_(l2_norm_sq) {
    if (max_mode_ < 1) throw DomainError("SpectralCoefficients: max_mode must be >= 1");
    if (coeffs_.size() != ipow(std::size_t(max_mode_), domain_.dim()))
        throw DomainError("SpectralCoefficients: coefficient count does not match N^d");
}

ModeIndex SpectralCoefficients::mode_at(std::size_t flat) const {
    ModeIndex m;
    m.d = domain_.dim();
    const auto n = std::size_t(max_mode_);
    for (std::size_t a = m.d; a-- > 0;) {
        m.n[a] = int(flat % n) + 1;
        flat /= n;
    }
    return m;
}

double SpectralCoefficients::coeff(const ModeIndex& n) const {
    check_mode(domain_, n);
    std::size_t flat = 0;
    for (std::size_t a = 0; a < n.d; ++a) {
        if (n[a] > max_mode_) return 0.0;
        flat = flat * std::size_t(max_mode_) + std::size_t(n[a] - 1);
    }
    return coeffs_[flat];
}

double SpectralCoefficients::resolved_l1() const {
    double s = 0.0;
    for (double c : coeffs_) s += std::abs(c);
    return s;
}

double SpectralCoefficients::first_unresolved_eigenvalue() const {
    const double base = domain_.principal_eigenvalue();
    const double bump = double(max_mode_ + 1) * double(max_mode_ + 1) - 1.0;
    double best = std::numeric_limits<double>::infinity();
    for (double l : domain_.lengths()) best = std::min(best, base + kPi2 * bump / (l * l));
    return best;
}

SpectralCoefficients SpectralCoefficients::combine(double alpha, const SpectralCoefficients& other,
                                                   double gamma) const {
    if (other.max_mode_ != max_mode_ || other.domain_.lengths() != domain_.lengths())
        throw DomainError("SpectralCoefficients::combine: incompatible truncations");
    std::vector<double> c(coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = alpha * coeffs_[i] + gamma * other.coeffs_[i];
    const double l2 = std::pow(std::abs(alpha) * std::sqrt(l2_norm_sq_) +
                                   std::abs(gamma) * std::sqrt(other.l2_norm_sq_),
                               2);
    return SpectralCoefficients(domain_, max_mode_, std::move(c), "combination",
                                std::abs(alpha) * tail_l1_ + std::abs(gamma) * other.tail_l1_, l2);
}

int default_max_mode(std::size_t dim) {
    switch (dim) {
        case 1: return 64;
        case 2: return 32;
        default: return 16;
    }
}

SpectralCoefficients project(const InitialData& f, const BoxDomain& dom, int max_mode) {
    if (max_mode < 1) throw DomainError("project: max_mode must be >= 1");
    const std::size_t d = dom.dim();
    const std::size_t count = ipow(std::size_t(max_mode), d);
    std::vector<double> coeffs(count, 0.0);

    if (f.kind == InitialData::Kind::bump) {
        // Per axis: int_0^L sqrt(2/L) sin(n pi x/L) x (L-x) dx = sqrt(2/L) 4 L^3 / (n pi)^3, n odd.
        std::vector<std::vector<double>> axis(d);
        double all = 1.0, resolved = 1.0, l2 = 1.0;
        for (std::size_t a = 0; a < d; ++a) {
            const double l = dom.length(a);
            const double amp = std::sqrt(2.0 / l) * 4.0 * l * l * l / (kPi2 * kPi);
            axis[a].resize(std::size_t(max_mode));
            double partial = 0.0;
            for (int n = 1; n <= max_mode; ++n) {
                const double c = (n % 2 == 1) ? amp / (double(n) * n * n) : 0.0;
                axis[a][std::size_t(n - 1)] = c;
                partial += c;
            }
            all *= amp * 7.0 / 8.0 * kZeta3;
            resolved *= partial;
            l2 *= std::pow(l, 5) / 30.0;
        }
        SpectralCoefficients proto(dom, max_mode, coeffs, "bump", 0.0, l2);
        for (std::size_t flat = 0; flat < count; ++flat) {
            const auto m = proto.mode_at(flat);
            double c = 1.0;
            for (std::size_t a = 0; a < d; ++a) c *= axis[a][std::size_t(m[a] - 1)];
            coeffs[flat] = c;
        }
        return SpectralCoefficients(dom, max_mode, std::move(coeffs), "bump", std::max(0.0, all - resolved), l2);
    }

    // Merge duplicate modes before computing norms.
    std::map<std::array<int, 3>, double> merged;
    for (const auto& term : f.terms) {
        check_mode(dom, term.mode);
        merged[term.mode.n] += term.weight;
    }
    double tail = 0.0, l2 = 0.0;
    for (const auto& [n, w] : merged) {
        l2 += w * w;
        std::size_t flat = 0;
        bool inside = true;
        for (std::size_t a = 0; a < d; ++a) {
            if (n[a] > max_mode) inside = false;
            flat = flat * std::size_t(max_mode) + std::size_t(n[a] - 1);
        }
        if (inside) coeffs[flat] += w;
        else tail += std::abs(w);
    }
    return SpectralCoefficients(dom, max_mode, std::move(coeffs), f.describe(), tail, l2);
}

SpectralCoefficients project(const std::function<double(std::span<const double>)>& f, const BoxDomain& dom,
                             int max_mode, std::string source_tag) {
    if (max_mode < 1) throw DomainError("project: max_mode must be >= 1");
    const auto nodes = [](int n) { return std::size_t(2 * n + 16); };
    auto main = tensor_project(f, dom, max_mode, nodes(max_mode));
    auto wide = tensor_project(f, dom, 2 * max_mode, nodes(2 * max_mode));
    SpectralCoefficients wide_coeffs(dom, 2 * max_mode, wide.coeffs, source_tag, 0.0, wide.l2_norm_sq);
    double shell = 0.0;
    for (std::size_t flat = 0; flat < wide.coeffs.size(); ++flat) {
        const auto m = wide_coeffs.mode_at(flat);
        bool outside = false;
        for (std::size_t a = 0; a < m.d; ++a) outside |= m[a] > max_mode;
        if (outside) shell += std::abs(wide.coeffs[flat]);
    }
    // The shell [N+1, 2N] stands in for the whole unresolved tail; doubled for margin.
    return SpectralCoefficients(dom, max_mode, std::move(main.coeffs), std::move(source_tag), 2.0 * shell,
                                main.l2_norm_sq);
}

SeriesValue heat_kernel(const BoxDomain& dom, double t, std::span<const double> x, std::span<const double> y,
                        int max_mode, double tolerance) {
    if (!(t > 0.0)) throw DomainError("heat_kernel: t must be positive");
    if (!dom.contains_closed(x) || !dom.contains_closed(y)) throw DomainError("heat_kernel: point outside box");
    double value = 1.0, all = 1.0, resolved = 1.0;
    for (std::size_t a = 0; a < dom.dim(); ++a) {
        const double l = dom.length(a);
        const auto sx = axis_modes(l, max_mode, x[a]);
        const auto sy = axis_modes(l, max_mode, y[a]);
        const double rate = kPi2 * t / (l * l);
        double s = 0.0;
        for (int n = 1; n <= max_mode; ++n)
            s += std::exp(-rate * double(n) * n) * sx[std::size_t(n - 1)] * sy[std::size_t(n - 1)];
        value *= s;
        all *= theta_partial(l, t, -1);
        resolved *= theta_partial(l, t, max_mode);
    }
    const double sup = dom.sup_eigenfunction();
    SeriesValue out{value, sup * sup * std::max(0.0, all - resolved)};
    if (out.tail_bound > tolerance) throw TruncationError("heat_kernel: truncation tail too large", out.tail_bound);
    return out;
}

SeriesValue modal_sum(const SpectralCoefficients& coeffs, std::span<const double> modal_factors,
                      double tail_factor, std::span<const double> x) {
    const auto& dom = coeffs.domain();
    if (!dom.contains_closed(x)) throw DomainError("modal_sum: point outside the closed box");
    if (modal_factors.size() != coeffs.size()) throw DomainError("modal_sum: factor count mismatch");
    const int n_max = coeffs.max_mode();
    std::vector<std::vector<double>> axis(dom.dim());
    for (std::size_t a = 0; a < dom.dim(); ++a) {
        axis[a] = axis_modes(dom.length(a), n_max, x[a]);
        if (x[a] == 0.0 || x[a] == dom.length(a)) std::fill(axis[a].begin(), axis[a].end(), 0.0);
    }
    const auto& c = coeffs.values();
    double value = 0.0;
    for (std::size_t flat = 0; flat < c.size(); ++flat) {
        if (c[flat] == 0.0) continue;
        const auto m = coeffs.mode_at(flat);
        double phi = 1.0;
        for (std::size_t a = 0; a < m.d; ++a) phi *= axis[a][std::size_t(m[a] - 1)];
        value += c[flat] * modal_factors[flat] * phi;
    }
    return {value, dom.sup_eigenfunction() * coeffs.tail_l1() * tail_factor};
}

SeriesValue semigroup_apply(const SpectralCoefficients& coeffs, double t, std::span<const double> x,
                            double tolerance) {
    if (!(t > 0.0)) throw DomainError("semigroup_apply: t must be positive");
    std::vector<double> factors(coeffs.size(), 0.0);
    for (std::size_t flat = 0; flat < factors.size(); ++flat)
        if (coeffs.values()[flat] != 0.0)
            factors[flat] = std::exp(-eigenvalue(coeffs.domain(), coeffs.mode_at(flat)) * t);
    auto out = modal_sum(coeffs, factors, std::exp(-coeffs.first_unresolved_eigenvalue() * t), x);
    if (out.tail_bound > tolerance)
        throw TruncationError("semigroup_apply: truncation tail too large", out.tail_bound);
    return out;
}

}  // namespace fracdiff
