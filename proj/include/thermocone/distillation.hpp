#pragma once

#include "thermocone/core.hpp"

namespace tc {

struct InfoTriple {
    double D = 0, V = 0, Y = 0;
};
InfoTriple info_quantities(const Vec& p, const GibbsContext& ctx);

struct Subsystem {
    Vec p;
    GibbsContext ctx;
};

struct Ensemble {
    std::vector<Subsystem> parts;
    double beta = 1;

    void add(const Vec& p, const GibbsContext& ctx, std::size_t copies = 1);
    double free_energy() const;  // sum D / beta
    double sigma() const;        // sqrt(sum V) / beta
    double kappa() const;        // cbrt(sum Y) / beta
};

// distribution compressed to groups of equal probability-to-Gibbs ratio
struct RatioGroup {
    double log_ratio;  // -inf for empty levels
    double P, G;
};
inline constexpr std::size_t max_groups = 10000000;
std::vector<RatioGroup> ratio_groups(const Vec& p, const GibbsContext& ctx);
std::vector<RatioGroup> ratio_groups(const Ensemble& e);
std::vector<RatioGroup> tensor(const std::vector<RatioGroup>& a, const std::vector<RatioGroup>& b);
double curve_value(const std::vector<RatioGroup>& g, double x);
// smallest x with curve value >= y
double curve_inverse(const std::vector<RatioGroup>& g, double y);

// minimal infidelity of reaching a flat target of Gibbs weight x_target
double exact_distillation_error(const Ensemble& e, double x_target);
double exact_distillation_error(const Ensemble& e, std::size_t level, const GibbsContext& target);
// with a two-level battery: W > 0 extracted, W < 0 invested
double work_error(const Ensemble& e, double W, double x_target = 1.0);
// largest extractable work (most negative for costs) at error eps
double exact_work(const Ensemble& e, double eps, double x_target = 1.0);
double erasure_cost(std::size_t bits, double beta, double eps);

double optimal_error_asymptotic(double dF, double sigma);
double single_shot_bound(double dF, double sigma, double kappa);
inline constexpr double berry_esseen_c = 0.4748;

double dissipation_coefficient(double eps);
double dissipated_free_energy(double dF, double sigma);

struct Rates {
    double W_ext = 0, W_ext_pure = 0, W_cost_erasure = 0, encoding_rate = 0;
};
// pure variant: N identical pure subsystems with energy mean and second moment
struct PureSpec {
    std::size_t N = 0;
    double mean_H = 0, mean_H2 = 0, logZ = 0;
};
Rates application_rates(const Ensemble& e, double eps, const PureSpec* pure = nullptr);

}  // namespace tc
