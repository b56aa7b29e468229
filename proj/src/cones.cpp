#include "thermocone/cones.hpp"

#include "thermocone/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace tc {

Vec extreme_point(const Vec& p, const GibbsContext& ctx, const Order& order) {
    check_dims(p, ctx);
    ThermoCurve f = thermo_curve(p, ctx);
    Vec r(p.size());
    double x = 0, y0 = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        x += ctx.gamma[order[k]];
        double y = k + 1 == order.size() ? 1.0 : curve_value(f, std::min(x, 1.0));
        r[order[k]] = y - y0;
        y0 = y;
    }
    return r;
}

std::vector<Extreme> future_extremes(const Vec& p, const GibbsContext& ctx, std::size_t dmax) {
    const std::size_t d = p.size();
    if (d > dmax) throw std::invalid_argument("dimension too large for permutation enumeration");
    std::vector<Extreme> out;
    Order ord(d);
    std::iota(ord.begin(), ord.end(), 0);
    do {
        Vec v = extreme_point(p, ctx, ord);
        bool dup = std::any_of(out.begin(), out.end(), [&](const Extreme& e) {
            for (std::size_t i = 0; i < d; ++i)
                if (std::abs(e.point[i] - v[i]) > 1e-12) return false;
            return true;
        });
        if (!dup) out.push_back({ord, v});
    } while (std::next_permutation(ord.begin(), ord.end()));
    return out;
}

std::vector<Vec> future_extreme_points(const Vec& p, const GibbsContext& ctx, std::size_t dmax) {
    std::vector<Vec> r;
    for (auto& e : future_extremes(p, ctx, dmax)) r.push_back(e.point);
    return r;
}

std::vector<Vec> tangent_vectors_zero_beta(const Vec& p) {
    const std::size_t d = p.size();
    Order o(d);
    std::iota(o.begin(), o.end(), 0);
    std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
    std::vector<Vec> ts;
    double head = 0;
    for (std::size_t n = 1; n <= d; ++n) {
        double pn = p[o[n - 1]];
        Vec t(d);
        if (d == 1) {
            t[0] = 1;
        } else {
            double t1 = head - (double(n) - 2) * pn;
            t[o[0]] = t1;
            for (std::size_t i = 1; i + 1 < d; ++i) t[o[i]] = pn;
            t[o[d - 1]] = 1 - t1 - (double(d) - 2) * pn;
        }
        ts.push_back(t);
        head += pn;
    }
    return ts;
}

std::vector<Vec> tangent_vectors_thermal(const Vec& p, const GibbsContext& ctx, const Order& chamber) {
    check_dims(p, ctx);
    const std::size_t d = p.size();
    if (chamber.size() != d) throw std::invalid_argument("chamber size mismatch");
    BetaOrder bo = beta_order(p, ctx);
    std::vector<Vec> ts;
    double X = 0, Y = 0;
    for (std::size_t n = 0; n < d; ++n) {
        std::size_t lev = bo.perm[n];
        X += ctx.gamma[lev];
        Y += p[lev];
        double s = p[lev] / ctx.gamma[lev];
        Vec t(d, 0.0);
        if (d == 1) {
            t[0] = 1;
        } else {
            double first = Y - s * (X - ctx.gamma[chamber[0]]);
            t[chamber[0]] = first;
            double mid = 0;
            for (std::size_t k = 1; k + 1 < d; ++k) mid += t[chamber[k]] = s * ctx.gamma[chamber[k]];
            t[chamber[d - 1]] = 1 - first - mid;
        }
        ts.push_back(t);
    }
    return ts;
}

Vec project_to_simplex(Vec t) {
    const std::size_t d = t.size();
    for (std::size_t m = d; m >= 2; --m) {
        double a = t[m - 2], b = t[m - 1];
        t[m - 2] = std::min(a + b, a);
        t[m - 1] = std::max(b, 0.0);
    }
    for (double& x : t) {
        if (x < -1e-12) throw std::domain_error("pairwise map cannot repair a negative leading entry");
        x = std::max(x, 0.0);
    }
    return t;
}

const char* region_name(Region r) {
    switch (r) {
        case Region::Future: return "future";
        case Region::Past: return "past";
        case Region::Incomparable: return "incomparable";
        case Region::Equivalent: return "equivalent";
    }
    return "?";
}

Region classify(const ThermoCurve& fq, const ThermoCurve& fp) {
    bool down = curve_above(fp, fq), up = curve_above(fq, fp);
    if (down && up) return Region::Equivalent;
    if (down) return Region::Future;
    if (up) return Region::Past;
    return Region::Incomparable;
}

Region classify(const Vec& q, const Vec& p, const GibbsContext& ctx) {
    check_dims(q, ctx);
    return classify(thermo_curve(q, ctx), thermo_curve(p, ctx));
}

Volumes cone_volumes_closed_form(const Vec& p, const GibbsContext& ctx) {
    if (p.size() != 3 || ctx.beta != 0) throw std::invalid_argument("closed-form volumes need d=3 and beta=0");
    Vec s = sorted_desc(p);
    Volumes v;
    v.plus = (3 * s[0] - 1) * (3 * s[0] - 1) - 3 * (s[1] - s[0]) * (s[1] - s[0]);
    v.minus = 12 * s[1] * s[2] - (s[0] < 0.5 ? 3 * (1 - 2 * s[0]) * (1 - 2 * s[0]) : 0.0);
    v.empty = 1 - v.plus - v.minus;
    return v;
}

Vec sample_simplex(std::size_t d, std::uint64_t seed, std::uint64_t index) {
    auto rng = stream_engine(seed, index);
    std::exponential_distribution<double> ex;
    Vec x(d);
    double s = 0;
    for (auto& v : x) s += v = ex(rng);
    for (auto& v : x) v /= s;
    return x;
}

Volumes cone_volumes_mc(const Vec& p, const GibbsContext& ctx, std::size_t samples, std::uint64_t seed,
                        unsigned threads) {
    check_dims(p, ctx);
    if (samples == 0) throw std::invalid_argument("no samples");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, samples / 1000)));
    const ThermoCurve fp = thermo_curve(p, ctx);
    struct Count {
        std::size_t plus = 0, minus = 0;
    };
    // samples come in fixed blocks, each drawn from its own stream
    constexpr std::size_t block = 4096;
    const std::size_t blocks = (samples + block - 1) / block;
    std::vector<Count> counts(threads);
    auto work = [&](unsigned t) {
        Count c;
        std::exponential_distribution<double> ex;
        Vec q(p.size());
        for (std::size_t b = blocks * t / threads; b < blocks * (t + 1) / threads; ++b) {
            auto rng = stream_engine(seed, b);
            for (std::size_t i = b * block; i < std::min(samples, (b + 1) * block); ++i) {
                double s = 0;
                for (auto& x : q) s += x = ex(rng);
                for (auto& x : q) x /= s;
                ThermoCurve fq = thermo_curve(q, ctx);
                if (curve_above(fp, fq)) ++c.plus;
                if (curve_above(fq, fp)) ++c.minus;
            }
        }
        counts[t] = c;
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();
    Count tot;
    for (auto& c : counts) {
        tot.plus += c.plus;
        tot.minus += c.minus;
    }
    Volumes v;
    const double n = double(samples);
    v.samples = samples;
    v.seed = seed;
    v.plus = tot.plus / n;
    v.minus = tot.minus / n;
    v.empty = std::max(0.0, 1 - v.plus - v.minus);
    auto se = [n](double f) { return std::sqrt(f * (1 - f) / n); };
    v.se_plus = se(v.plus);
    v.se_minus = se(v.minus);
    v.se_empty = se(v.empty);
    return v;
}

std::vector<Vec> sample_schmidt_spectrum(int N, int M, std::size_t count, std::uint64_t seed) {
    if (N < 1 || M < N) throw std::invalid_argument("need 1 <= N <= M");
    if (N * M > 64) throw std::invalid_argument("dimensions too large for direct sampling");
    std::vector<Vec> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        auto rng = stream_engine(seed, s);
        std::normal_distribution<double> g;
        Eigen::MatrixXcd psi(N, M);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < M; ++j) psi(i, j) = {g(rng), g(rng)};
        psi /= psi.norm();
        Eigen::MatrixXcd rho = psi * psi.adjoint();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
        Vec l(es.eigenvalues().data(), es.eigenvalues().data() + N);
        for (auto& x : l) x = std::max(x, 0.0);
        out.push_back(sorted_desc(l));
    }
    return out;
}

}  // namespace tc
