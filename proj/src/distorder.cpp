#include "fracdiff/distorder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fracdiff/errors.hpp"
#include "fracdiff/parallel.hpp"
#include "fracdiff/quadrature.hpp"
#include "fracdiff/specfun.hpp"
#include "fracdiff/subord.hpp"

namespace fracdiff {

namespace {

constexpr double kPi = std::numbers::pi;

bool in_open_unit(double b) { return b > 0.0 && b < 1.0; }

}  // namespace

double DensityPart::operator()(double beta) const {
    if (beta < beta0 || beta > beta1) return 0.0;
    switch (shape) {
        case DensityShape::uniform: return scale;
        case DensityShape::linear: return scale * (beta - beta0) / (beta1 - beta0);
    }
    return 0.0;
}

OrderMeasure::OrderMeasure(std::vector<Atom> atoms, std::optional<DensityPart> density)
    : atoms_(std::move(atoms)), density_(std::move(density)) {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const auto& a = atoms_[i];
        if (!in_open_unit(a.beta)) throw ValidationError("order measure: atom order must lie in (0,1)");
        if (!(a.weight > 0.0) || !std::isfinite(a.weight))
            throw ValidationError("order measure: atom weight must be positive and finite");
        if (i > 0 && !(a.beta > atoms_[i - 1].beta))
            throw ValidationError("order measure: atom orders must be strictly increasing");
    }
    if (density_) {
        const auto& d = *density_;
        if (!in_open_unit(d.beta0) || !in_open_unit(d.beta1) || !(d.beta0 < d.beta1))
            throw ValidationError("order measure: density support must satisfy 0 < beta0 < beta1 < 1");
        if (d.nodes < 32) throw ValidationError("order measure: density needs at least 32 quadrature nodes");
        if (!(d.scale > 0.0) || !std::isfinite(d.scale))
            throw ValidationError("order measure: density scale must be positive and finite");
    }
    if (atoms_.empty() && !density_) throw ValidationError("order measure: empty measure");

    for (const auto& a : atoms_) {
        orders_.push_back(a.beta);
        masses_.push_back(a.weight);
    }
    if (density_) {
        const auto rule = gauss_legendre(density_->nodes, density_->beta0, density_->beta1);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            orders_.push_back(rule.nodes[q]);
            masses_.push_back(rule.weights[q] * (*density_)(rule.nodes[q]));
        }
    }
    caputo_weights_.resize(orders_.size());
    for (std::size_t k = 0; k < orders_.size(); ++k)
        caputo_weights_[k] = std::tgamma(1.0 - orders_[k]) * masses_[k];
}

OrderMeasure OrderMeasure::caputo(double beta) {
    if (!in_open_unit(beta)) throw ValidationError("OrderMeasure::caputo: beta must lie in (0,1)");
    return OrderMeasure({Atom{beta, 1.0 / std::tgamma(1.0 - beta)}});
}

double OrderMeasure::min_order() const {
    double lo = 1.0;
    for (const auto& a : atoms_) lo = std::min(lo, a.beta);
    if (density_) lo = std::min(lo, density_->beta0);
    return lo;
}

double OrderMeasure::max_order() const {
    double hi = 0.0;
    for (const auto& a : atoms_) hi = std::max(hi, a.beta);
    if (density_) hi = std::max(hi, density_->beta1);
    return hi;
}

MeasureDiagnostics diagnose_measure(const OrderMeasure& m, double ceiling) {
    MeasureDiagnostics out;
    for (const auto& a : m.atoms()) {
        out.total_mass += a.weight;
        out.inverse_gap_integral += a.weight / (1.0 - a.beta);
    }
    if (const auto& d = m.density()) {
        const double b0 = d->beta0, b1 = d->beta1;
        const double tol = 1e-10;
        out.total_mass += integrate([&](double b) { return (*d)(b); }, b0, b1, 0.0, tol).value;
        out.inverse_gap_integral +=
            integrate([&](double b) { return (*d)(b) / (1.0 - b); }, b0, b1, 0.0, tol).value;
        out.density_constant = integrate(
            [&](double b) { return std::sin(kPi * b) * std::tgamma(1.0 - b) * (*d)(b); }, b0, b1, 0.0, tol)
                                   .value;
    }
    if (!(out.total_mass > 0.0) || !std::isfinite(out.total_mass)) {
        out.violation = "total mass must be finite and positive";
    } else if (!(out.inverse_gap_integral <= ceiling)) {
        out.violation = "integral of mu(d beta)/(1-beta) exceeds ceiling " + std::to_string(ceiling);
    } else if (m.density() && !(out.density_constant > 0.0)) {
        out.violation = "density constant int sin(pi b) Gamma(1-b) p(b) db must be positive";
    }
    out.accepted = out.violation.empty();
    return out;
}

MeasureDiagnostics validate_measure(const OrderMeasure& m, double ceiling) {
    auto diag = diagnose_measure(m, ceiling);
    if (!diag.accepted) throw ValidationError("order measure rejected: " + diag.violation);
    return diag;
}

OrderMeasure parse_measure(std::istream& in) {
    std::vector<Atom> atoms;
    std::optional<DensityPart> density;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ConfigError("measure line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "atom") {
            Atom a;
            if (!(ls >> a.beta >> a.weight)) fail("expected 'atom <beta> <weight>'");
            atoms.push_back(a);
        } else if (kind == "density") {
            if (density) fail("only one density line is supported");
            DensityPart d;
            if (!(ls >> d.beta0 >> d.beta1 >> d.nodes)) fail("expected 'density <beta0> <beta1> <nodes>'");
            std::string shape;
            if (ls >> shape) {
                if (shape == "uniform") d.shape = DensityShape::uniform;
                else if (shape == "linear") d.shape = DensityShape::linear;
                else fail("unknown density shape '" + shape + "'");
                if (!(ls >> d.scale)) d.scale = 1.0;
            }
            density = d;
        } else {
            fail("unknown directive '" + kind + "'");
        }
        std::string extra;
        if (ls.clear(), ls >> extra) fail("trailing tokens");
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.beta < b.beta; });
    return OrderMeasure(std::move(atoms), density);
}

OrderMeasure load_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open measure file '" + path + "'");
    return parse_measure(in);
}

double psi_w(const OrderMeasure& m, double s) {
    if (!(s >= 0.0)) throw DomainError("psi_w: s must be nonnegative");
    if (s == 0.0) return 0.0;
    double total = 0.0;
    const auto& orders = m.orders();
    const auto& nu = m.caputo_weights();
    for (std::size_t k = 0; k < orders.size(); ++k) total += nu[k] * std::pow(s, orders[k]);
    return total;
}

double levy_tail(const OrderMeasure& m, double t) {
    if (!(t > 0.0)) throw DomainError("levy_tail: t must be positive");
    double total = 0.0;
    const auto& orders = m.orders();
    const auto& mass = m.masses();
    for (std::size_t k = 0; k < orders.size(); ++k) total += mass[k] * std::pow(t, -orders[k]);
    return total;
}

EigenSolution h_eigen(const OrderMeasure& m, double t, double lambda, double abs_tol) {
    if (!(t > 0.0)) throw DomainError("h_eigen: t must be positive");
    if (!(lambda > 0.0)) throw DomainError("h_eigen: lambda must be positive");
    const auto& orders = m.orders();
    const auto& nu = m.caputo_weights();
    std::vector<double> cosines(orders.size()), sines(orders.size());
    for (std::size_t k = 0; k < orders.size(); ++k) {
        cosines[k] = nu[k] * std::cos(kPi * orders[k]);
        sines[k] = nu[k] * std::sin(kPi * orders[k]);
    }
    SymbolFn symbol = [&](double r) {
        const double log_r = std::log(r);
        double c = 0.0, s = 0.0;
        for (std::size_t k = 0; k < orders.size(); ++k) {
            const double rb = std::exp(orders[k] * log_r);
            c += cosines[k] * rb;
            s += sines[k] * rb;
        }
        return std::pair{c, s};
    };
    // Peaks sit where one component of the symbol balances lambda.
    std::vector<double> peaks;
    const std::size_t n_atoms = m.atoms().size();
    auto add_peaks = [&](double beta, double weight) {
        if (!(weight > 0.0)) return;
        peaks.push_back(std::pow(lambda / weight, 1.0 / beta));
        const double c = std::cos(kPi * beta);
        if (c < 0.0) peaks.push_back(std::pow(lambda / (weight * -c), 1.0 / beta));
    };
    for (std::size_t k = 0; k < n_atoms; ++k) add_peaks(orders[k], nu[k]);
    if (const auto& d = m.density()) {
        double total = 0.0;
        for (std::size_t k = n_atoms; k < orders.size(); ++k) total += nu[k];
        add_peaks(d->beta0, total);
        add_peaks(0.5 * (d->beta0 + d->beta1), total);
        add_peaks(d->beta1, total);
    }
    const auto res = spectral_inversion(t, lambda, symbol, m.min_order(), peaks, 1e-3 * abs_tol, 1e-14);
    EigenSolution out{t, lambda, res.value, res.abs_error};
    if (!(out.est_error <= abs_tol))
        throw ConvergenceError("h_eigen: quadrature did not reach tolerance", out.est_error);
    return out;
}

double k_bound(const OrderMeasure& m, double t) {
    if (!(t > 0.0)) throw DomainError("k_bound: t must be positive");
    const auto& d = m.density();
    if (!d) throw ValidationError("k_bound: requires a density part");
    const double c = diagnose_measure(m, std::numeric_limits<double>::infinity()).density_constant;
    if (!(c > 0.0)) throw ValidationError("k_bound: density constant must be positive");
    const double b0 = d->beta0, b1 = d->beta1;
    return (std::tgamma(1.0 - b1) * std::pow(t, b1 - 1.0) + std::tgamma(1.0 - b0) * std::pow(t, b0 - 1.0)) /
           (c * kPi);
}

namespace {

void require_atoms_only(const OrderMeasure& m, const char* who) {
    if (!m.atoms_only()) throw ValidationError(std::string(who) + ": requires an atoms-only measure");
}

// Scale of each atom's standard subordinator for an increment of length dx.
std::vector<double> increment_scales(const OrderMeasure& m, double dx) {
    std::vector<double> scales;
    for (const auto& a : m.atoms()) {
        const double amplitude = std::pow(a.weight * std::tgamma(1.0 - a.beta), 1.0 / a.beta);
        scales.push_back(amplitude * std::pow(dx, 1.0 / a.beta));
    }
    return scales;
}

double composite_increment(const OrderMeasure& m, const std::vector<double>& scales, RngStream& rng) {
    double inc = 0.0;
    for (std::size_t i = 0; i < scales.size(); ++i)
        inc += scales[i] * sample_stable(StableIndex(m.atoms()[i].beta), rng);
    return inc;
}

}  // namespace

double sample_composite_subordinator(const OrderMeasure& m, double x, RngStream& rng) {
    require_atoms_only(m, "sample_composite_subordinator");
    if (!(x > 0.0)) throw DomainError("sample_composite_subordinator: x must be positive");
    return composite_increment(m, increment_scales(m, x), rng);
}

std::vector<double> sample_inverse_composite_path(const OrderMeasure& m, const std::vector<double>& times,
                                                  RngStream& rng, double dx, std::size_t step_budget) {
    require_atoms_only(m, "sample_inverse_composite");
    if (!(dx > 0.0)) throw DomainError("sample_inverse_composite: dx must be positive");
    if (!std::is_sorted(times.begin(), times.end()))
        throw DomainError("sample_inverse_composite: times must be sorted");
    const auto scales = increment_scales(m, dx);
    std::vector<double> out;
    out.reserve(times.size());
    double w = 0.0;
    std::size_t steps = 0;
    for (double t : times) {
        if (!(t > 0.0)) throw DomainError("sample_inverse_composite: t must be positive");
        while (w <= t) {
            if (++steps > step_budget) throw ResourceError("sample_inverse_composite: step budget exceeded");
            w += composite_increment(m, scales, rng);
        }
        out.push_back((double(steps) - 0.5) * dx);
    }
    return out;
}

double sample_inverse_composite(const OrderMeasure& m, double t, RngStream& rng, double dx,
                                std::size_t step_budget) {
    return sample_inverse_composite_path(m, {t}, rng, dx, step_budget).front();
}

SampleSummary g_density_mc(const OrderMeasure& m, double t, double x, std::size_t n_paths, std::uint64_t seed,
                           unsigned threads) {
    require_atoms_only(m, "g_density_mc");
    if (!(t > 0.0) || !(x > 0.0)) throw DomainError("g_density_mc: t and x must be positive");
    auto values = map_indexed(n_paths, threads, [&](std::size_t i) {
        RngStream rng(seed, i);
        const double w = sample_composite_subordinator(m, x, rng);
        return w < t ? levy_tail(m, t - w) : 0.0;
    });
    return summarize(values);
}

}  // namespace fracdiff
