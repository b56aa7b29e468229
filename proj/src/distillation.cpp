#include "thermocone/distillation.hpp"

#include "thermocone/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tc {

InfoTriple info_quantities(const Vec& p, const GibbsContext& ctx) {
    check_dims(p, ctx);
    check_state(p, 1e-9);
    InfoTriple t;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0) t.D += p[i] * std::log(p[i] / ctx.gamma[i]);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0) continue;
        double u = std::abs(std::log(p[i] / ctx.gamma[i]) - t.D);
        t.V += p[i] * u * u;
        t.Y += p[i] * u * u * u;
    }
    return t;
}

void Ensemble::add(const Vec& p, const GibbsContext& ctx, std::size_t copies) {
    check_dims(p, ctx);
    for (std::size_t k = 0; k < copies; ++k) parts.push_back({p, ctx});
}

double Ensemble::free_energy() const {
    double s = 0;
    for (auto& s_ : parts) s += info_quantities(s_.p, s_.ctx).D;
    return s / beta;
}

double Ensemble::sigma() const {
    double s = 0;
    for (auto& s_ : parts) s += info_quantities(s_.p, s_.ctx).V;
    return std::sqrt(s) / beta;
}

double Ensemble::kappa() const {
    double s = 0;
    for (auto& s_ : parts) s += info_quantities(s_.p, s_.ctx).Y;
    return std::cbrt(s) / beta;
}

namespace {

constexpr double merge_tol = 1e-9;

void normalise(std::vector<RatioGroup>& g) {
    std::sort(g.begin(), g.end(), [](const RatioGroup& a, const RatioGroup& b) { return a.log_ratio > b.log_ratio; });
    std::vector<RatioGroup> out;
    for (auto& x : g) {
        if (!out.empty()) {
            auto& y = out.back();
            bool both_empty = std::isinf(x.log_ratio) && std::isinf(y.log_ratio);
            if (both_empty || std::abs(x.log_ratio - y.log_ratio) <= merge_tol) {
                // keep the ratio of the merged mass
                if (!both_empty && x.P + y.P > 0) y.log_ratio = std::log((x.P + y.P) / (x.G + y.G));
                y.P += x.P;
                y.G += x.G;
                continue;
            }
        }
        out.push_back(x);
    }
    g.swap(out);
}

}  // namespace

std::vector<RatioGroup> ratio_groups(const Vec& p, const GibbsContext& ctx) {
    check_dims(p, ctx);
    std::vector<RatioGroup> g;
    for (std::size_t i = 0; i < p.size(); ++i)
        g.push_back({p[i] > 0 ? std::log(p[i] / ctx.gamma[i]) : -std::numeric_limits<double>::infinity(), p[i],
                     ctx.gamma[i]});
    normalise(g);
    return g;
}

std::vector<RatioGroup> tensor(const std::vector<RatioGroup>& a, const std::vector<RatioGroup>& b) {
    if (double(a.size()) * double(b.size()) > 1e8) throw std::length_error("ratio-group product too large");
    std::vector<RatioGroup> g;
    g.reserve(a.size() * b.size());
    for (auto& x : a)
        for (auto& y : b) g.push_back({x.log_ratio + y.log_ratio, x.P * y.P, x.G * y.G});
    normalise(g);
    if (g.size() > max_groups) throw std::length_error("ratio-group count exceeds cap");
    return g;
}

std::vector<RatioGroup> ratio_groups(const Ensemble& e) {
    std::vector<RatioGroup> g{{0.0, 1.0, 1.0}};
    for (auto& s : e.parts) g = tensor(g, ratio_groups(s.p, s.ctx));
    return g;
}

double curve_value(const std::vector<RatioGroup>& g, double x) {
    double cp = 0, cg = 0;
    for (auto& r : g) {
        if (x <= cg + r.G) return cp + (r.G > 0 ? (x - cg) / r.G * r.P : 0.0);
        cp += r.P;
        cg += r.G;
    }
    return std::min(cp, 1.0);
}

double curve_inverse(const std::vector<RatioGroup>& g, double y) {
    if (y <= 0) return 0;
    double cp = 0, cg = 0;
    for (auto& r : g) {
        if (r.P <= 0) break;
        if (cp + r.P >= y - 1e-15) return std::min(cg + std::max(0.0, y - cp) / r.P * r.G, cg + r.G);
        cp += r.P;
        cg += r.G;
    }
    return cg;
}

double exact_distillation_error(const Ensemble& e, double x_target) {
    if (!(x_target > 0)) throw std::invalid_argument("target weight must be positive");
    return std::max(0.0, 1 - curve_value(ratio_groups(e), std::min(x_target, 1.0)));
}

double exact_distillation_error(const Ensemble& e, std::size_t level, const GibbsContext& target) {
    if (level >= target.dim()) throw std::out_of_range("target level out of range");
    return exact_distillation_error(e, target.gamma[level]);
}

double work_error(const Ensemble& e, double W, double x_target) {
    double x = x_target * std::exp(-e.beta * W);
    if (x >= 1) return 0;
    return exact_distillation_error(e, x);
}

double exact_work(const Ensemble& e, double eps, double x_target) {
    if (eps < 0 || eps >= 1) throw std::invalid_argument("error must lie in [0,1)");
    double x = curve_inverse(ratio_groups(e), 1 - eps);
    return std::log(x_target / x) / e.beta;
}

double erasure_cost(std::size_t bits, double beta, double eps) {
    Ensemble e;
    e.beta = beta;
    e.add({0.5, 0.5}, GibbsContext::thermal({0.0, 0.0}, beta), bits);
    return -exact_work(e, eps, std::pow(0.5, double(bits)));
}

double optimal_error_asymptotic(double dF, double sigma) {
    if (sigma < 0) throw std::invalid_argument("negative fluctuation");
    if (sigma == 0) return dF >= 0 ? 0.0 : 1.0;
    return normal_cdf(-dF / sigma);
}

double single_shot_bound(double dF, double sigma, double kappa) {
    if (sigma == 0) return optimal_error_asymptotic(dF, sigma);
    double k = kappa / sigma;
    return std::min(1.0, optimal_error_asymptotic(dF, sigma) + berry_esseen_c * k * k * k);
}

double dissipation_coefficient(double eps) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("error must lie in (0,1)");
    double x = normal_quantile(eps);
    return -x * (1 - eps) + normal_pdf(x);
}

double dissipated_free_energy(double dF, double sigma) {
    return (1 - normal_cdf(-dF / sigma)) * dF + std::exp(-dF * dF / (2 * sigma * sigma)) * sigma / std::sqrt(2 * M_PI);
}

Rates application_rates(const Ensemble& e, double eps, const PureSpec* pure) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("error must lie in (0,1)");
    Rates r;
    const double F = e.free_energy(), s = e.sigma(), z = normal_quantile(eps);
    r.W_ext = F + s * z;
    double S = 0;
    for (auto& part : e.parts)
        for (double x : part.p)
            if (x > 0) S -= x * std::log(x);
    r.W_cost_erasure = S / e.beta - s * z;
    r.encoding_rate = e.parts.empty() ? 0 : (e.beta * F + e.beta * s * z) / double(e.parts.size());
    if (pure) {
        double n = double(pure->N), var = pure->mean_H2 - pure->mean_H * pure->mean_H;
        r.W_ext_pure = n * (pure->mean_H + pure->logZ / e.beta + std::sqrt(var / n) * z);
    }
    return r;
}

}  // namespace tc
