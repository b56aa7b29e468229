#pragma once

#include "thermocone/cones.hpp"
#include "thermocone/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace testing {

// brute-force majorisation: every sorted prefix sum of p dominates q
inline bool prefix_majorises(tc::Vec p, tc::Vec q, double tol = 1e-12) {
    std::sort(p.rbegin(), p.rend());
    std::sort(q.rbegin(), q.rend());
    double a = 0, b = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        a += p[i];
        b += q[i];
        if (a < b - tol) return false;
    }
    return true;
}

// value of the thermo curve of p evaluated from scratch at x
inline double curve_at(const tc::Vec& p, const tc::Vec& g, double x) {
    std::vector<std::size_t> idx(p.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return p[a] * g[b] > p[b] * g[a]; });
    double cx = 0, cy = 0;
    for (auto i : idx) {
        if (x <= cx + g[i]) return cy + (x - cx) / g[i] * p[i];
        cx += g[i];
        cy += p[i];
    }
    return 1;
}

// dense-grid comparison of two thermo curves
inline bool grid_above(const tc::Vec& p, const tc::Vec& q, const tc::Vec& g, int n = 4000, double tol = 1e-10) {
    for (int k = 0; k <= n; ++k) {
        double x = double(k) / n;
        if (curve_at(p, g, x) < curve_at(q, g, x) - tol) return false;
    }
    return true;
}

inline double l1(const tc::Vec& a, const tc::Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

inline double sum(const tc::Vec& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace testing
