#include "thermocone/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tc {

double QubitState::coherence() const { return std::hypot(x, y) / 2; }

CoherentTO::CoherentTO(double p_, double c_, double g_) : p(p_), c(std::abs(c_)), g(g_) {
    if (!(g > 0 && g < 1)) throw std::invalid_argument("thermal weight must lie in (0,1)");
    if (p < 0 || p > 1 || c * c > p * (1 - p) + 1e-12) throw std::invalid_argument("not a valid qubit state");
}

// the other extreme point: the opposite level gets filled first
double CoherentTO::swapped() const {
    auto fill = [](double mass, double w, double x) {  // curve value at x with level (mass, w) first
        return x <= w ? mass * x / w : mass + (1 - mass) * (x - w) / (1 - w);
    };
    if (p >= g) return 1 - fill(p, g, 1 - g);
    return fill(1 - p, 1 - g, g);
}

double CoherentTO::rhs(double q) const {
    if (std::abs(p - g) < 1e-14) return std::abs(q - g) < 1e-12 ? c : 0.0;
    double a = q * (1 - g) - g * (1 - p), b = p * (1 - g) - g * (1 - q);
    return c * std::sqrt(std::max(0.0, a * b)) / std::abs(p - g);
}

bool CoherentTO::in_future(double q, double d) const {
    double lo = std::min(p, swapped()), hi = std::max(p, swapped());
    if (q < lo - 1e-12 || q > hi + 1e-12) return false;
    return std::abs(d) <= rhs(q) + 1e-12;
}

double CoherentTO::q1(double d) const {
    if (c == 0) throw std::domain_error("boundary undefined without coherence");
    double lin = (p - g) - 2 * g * p * (1 - g);
    double root = std::sqrt(c * c * (1 - 2 * g) * (1 - 2 * g) + 4 * g * (1 - g) * d * d);
    return ((p - g) * root / c - lin) / (2 * g * (1 - g));
}

double CoherentTO::q2(double d) const {
    double lin = (p - g) - 2 * g * p * (1 - g);
    double c0 = -g * (1 - p) * (p * (1 - g) - g);
    double A = d * d * g * (1 - g) - c * c, B = d * d * lin + 2 * g * c * c, C = d * d * c0 - c * c * g * g;
    double roots[2];
    int n = 0;
    if (std::abs(A) < 1e-15) {
        if (B != 0) roots[n++] = -C / B;
    } else {
        double disc = B * B - 4 * A * C;
        if (disc < 0) return std::numeric_limits<double>::quiet_NaN();
        double s = std::sqrt(disc);
        roots[n++] = (-B + s) / (2 * A);
        roots[n++] = (-B - s) / (2 * A);
    }
    for (int k = 0; k < n; ++k) {
        double q = roots[k];
        if (q < -1e-12 || q > 1 + 1e-12) continue;
        if ((q - g) * (p - g) >= 0 && std::abs(q - g) >= std::abs(p - g) - 1e-12) return q;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double CoherentTO::q1_stated(double d) const {
    return ((g - p) * std::sqrt(c * c * (1 - 2 * g) * (1 - 2 * g) + 4 * g * d * d * (1 - g))) / (2 * g * c * (g - 1)) +
           ((p - g) - 2 * g * p * (1 - g)) / (2 * g * c * (g - 1));
}

double CoherentTO::q2_stated(double d) const {
    double t1 = (2 * g * c * c +
                 std::sqrt(c * c * (p - g) * (p - g) * ((1 - 2 * g) * (1 - 2 * g) * d * d - 4 * c * c * (g - 1) * g))) /
                (2 * (d * d + (g - 1) * g * c * c));
    double t2 = d * d * (p - g - 2 * g * p * (1 - g)) / (2 * (d * d - (1 - g) * g * c * c));
    return t1 + t2;
}

double CoherentTO::d_cross() const {
    auto h = [&](double d) {
        double q = q1(d);
        return d * d - q * (1 - q);
    };
    double lo = c, hi = 0.5;
    if (h(lo) >= 0) return lo;
    while (hi - lo > 1e-12) {
        double mid = (lo + hi) / 2;
        (h(mid) < 0 ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

double gp_delta(const QubitState& s, double zeta) {
    return std::sqrt((s.z - zeta) * (s.z - zeta) + (s.x * s.x + s.y * s.y) * (1 - zeta * zeta));
}

GPCones gp_qubit_cones(const QubitState& s, double zeta) {
    if (!(zeta >= 0 && zeta < 1)) throw std::invalid_argument("zeta must lie in [0,1)");
    GPCones c;
    double dl = gp_delta(s, zeta);
    c.R_plus = dl + zeta * s.z;
    c.R_minus = dl - zeta * s.z;
    double k = 1 - zeta * zeta;
    c.R1 = (c.R_minus + zeta * zeta) / k;
    c.R2 = (c.R_plus - zeta * zeta) / k;
    c.z1 = zeta * (1 + c.R1);
    c.z2 = zeta * (1 - c.R2);
    return c;
}

bool gp_reachable(const QubitState& from, const QubitState& to, double zeta) {
    auto a = gp_qubit_cones(from, zeta), b = gp_qubit_cones(to, zeta);
    return a.R_plus >= b.R_plus - 1e-12 && a.R_minus >= b.R_minus - 1e-12;
}

bool in_gp_disks(const GPCones& c, const QubitState& s, double) {
    double r2 = s.x * s.x + s.y * s.y;
    return r2 + (s.z - c.z1) * (s.z - c.z1) <= c.R1 * c.R1 + 1e-12 &&
           r2 + (s.z - c.z2) * (s.z - c.z2) <= c.R2 * c.R2 + 1e-12;
}

}  // namespace tc
