#pragma once

#include "thermocone/core.hpp"

#include <cstdint>

namespace tc {

inline constexpr std::size_t max_enum_dim = 8;

Vec extreme_point(const Vec& p, const GibbsContext& ctx, const Order& order);

struct Extreme {
    Order order;
    Vec point;
};
std::vector<Extreme> future_extremes(const Vec& p, const GibbsContext& ctx, std::size_t dmax = max_enum_dim);
std::vector<Vec> future_extreme_points(const Vec& p, const GibbsContext& ctx, std::size_t dmax = max_enum_dim);

// entries returned in the original index order of p; levels ranked by size
std::vector<Vec> tangent_vectors_zero_beta(const Vec& p);
// entries returned per level; chamber lists levels by position
std::vector<Vec> tangent_vectors_thermal(const Vec& p, const GibbsContext& ctx, const Order& chamber);

Vec project_to_simplex(Vec t);

enum class Region { Future, Past, Incomparable, Equivalent };
const char* region_name(Region r);
Region classify(const Vec& q, const Vec& p, const GibbsContext& ctx);
Region classify(const ThermoCurve& fq, const ThermoCurve& fp);

struct Volumes {
    double plus = 0, empty = 0, minus = 0;
    double se_plus = 0, se_empty = 0, se_minus = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};
Volumes cone_volumes_closed_form(const Vec& p, const GibbsContext& ctx);
Volumes cone_volumes_mc(const Vec& p, const GibbsContext& ctx, std::size_t samples, std::uint64_t seed,
                        unsigned threads = 0);

Vec sample_simplex(std::size_t d, std::uint64_t seed, std::uint64_t index);

std::vector<Vec> sample_schmidt_spectrum(int N, int M, std::size_t count, std::uint64_t seed);

}  // namespace tc
