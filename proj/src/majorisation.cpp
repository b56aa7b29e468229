#include "thermocone/majorisation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tc {

namespace {

Order desc_perm(const Vec& p) {
    Order o(p.size());
    std::iota(o.begin(), o.end(), 0);
    std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
    return o;
}

}  // namespace

double fidelity(const Vec& p, const Vec& q) {
    if (p.size() != q.size()) throw std::invalid_argument("dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::sqrt(std::max(0.0, p[i] * q[i]));
    return s * s;
}

ApproxResult approx_majorise_optimal(const Vec& p, const Vec& q) {
    check_state(p, 1e-9);
    check_state(q, 1e-9);
    if (p.size() != q.size()) throw std::invalid_argument("dimension mismatch");
    const std::size_t d = p.size();
    Order op = desc_perm(p);
    Vec ps(d), qs = sorted_desc(q);
    for (std::size_t i = 0; i < d; ++i) ps[i] = p[op[i]];

    ApproxResult res;
    Vec opt(d);
    std::size_t l = d + 1;  // 1-based end of the unprocessed tail
    while (l > 1) {
        std::size_t best_k = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < l; ++k) {
            double dq = 0, dp = 0;
            for (std::size_t i = k; i < l; ++i) {
                dq += qs[i - 1];
                dp += ps[i - 1];
            }
            double r = dp > 0 ? dq / dp : std::numeric_limits<double>::infinity();
            if (r < best) {
                best = r;
                best_k = k;
            }
        }
        if (!std::isfinite(best)) best = 0;
        for (std::size_t i = best_k; i < l; ++i) opt[i - 1] = best * ps[i - 1];
        res.segments.push_back({best_k, best});
        l = best_k;
    }
    res.optimal.assign(d, 0);
    for (std::size_t i = 0; i < d; ++i) res.optimal[op[i]] = opt[i];
    res.fidelity = fidelity(p, res.optimal);
    return res;
}

double vidal_probability(const Vec& p, const Vec& q) {
    if (p.size() != q.size()) throw std::invalid_argument("dimension mismatch");
    Vec a = sorted_desc(p), b = sorted_desc(q);
    double ta = 0, tb = 0, best = 1;
    for (std::size_t k = a.size(); k-- > 0;) {
        ta += a[k];
        tb += b[k];
        if (tb > 0) best = std::min(best, ta / tb);
    }
    return std::clamp(best, 0.0, 1.0);
}

AuxPair probabilistic_aux(const Vec& p, double P) {
    if (!(P > 0) || P > 1) throw std::invalid_argument("probability must lie in (0,1]");
    Vec s = sorted_desc(p);
    const std::size_t d = s.size();
    AuxPair r;
    r.tilde = s;
    r.hat = s;
    for (std::size_t i = 0; i < d; ++i) {
        r.tilde[i] = P * s[i];
        r.hat[i] = s[i] / P;
    }
    r.tilde[0] += 1 - P;
    r.hat[0] += 1 - 1 / P;

    std::size_t n0 = 1;
    double head = 0;
    for (std::size_t n = 1; n <= d; ++n) {
        double Pn = (double(n) - 1) * s[n - 1] - head + 1;
        if (P < Pn) n0 = n;
        head += s[n - 1];
    }
    if (n0 > 1) {
        double avg = std::accumulate(r.hat.begin(), r.hat.begin() + n0, 0.0) / n0;
        std::fill(r.hat.begin(), r.hat.begin() + n0, avg);
    }
    return r;
}

bool catalyses(const Vec& p, const Vec& q, const Vec& c, const GibbsContext& sys, const GibbsContext& cat) {
    check_dims(p, sys);
    check_dims(q, sys);
    check_dims(c, cat);
    return thermomajorises(tensor(p, c), tensor(q, c), tensor(sys, cat));
}

bool catalyses(const Vec& p, const Vec& q, const Vec& c) {
    return catalyses(p, q, c, GibbsContext::uniform(p.size()), GibbsContext::uniform(c.size()));
}

Vec renyi_grid() {
    Vec a;
    for (int i = 0; i < 41; ++i) a.push_back(std::exp2(-10.0 + 20.0 * i / 40.0));
    a.push_back(0);
    a.push_back(1);
    return a;
}

double renyi_entropy(const Vec& p, double alpha) {
    if (alpha == 0) return std::log(double(std::count_if(p.begin(), p.end(), [](double x) { return x > 0; })));
    if (alpha == 1) {
        double h = 0;
        for (double x : p)
            if (x > 0) h -= x * std::log(x);
        return h;
    }
    if (std::isinf(alpha)) return -std::log(*std::max_element(p.begin(), p.end()));
    double s = 0;
    for (double x : p)
        if (x > 0) s += std::pow(x, alpha);
    return std::log(s) / (1 - alpha);
}

TrumpResult trumping_witness(const Vec& p, const Vec& q, const Vec& alphas) {
    if (p.size() != q.size()) throw std::invalid_argument("dimension mismatch");
    TrumpResult r;
    Vec a = sorted_desc(p), b = sorted_desc(q);
    if (a == b) return r;
    for (double al : alphas) {
        double hp = renyi_entropy(a, al), hq = renyi_entropy(b, al);
        if (hp > hq + 1e-12 * std::max(1.0, std::abs(hq))) {
            r.verdict = Verdict::Fail;
            r.alpha = al;
            return r;
        }
    }
    // a vanishing entry in the target leaves the negative-order conditions undecided
    if (b.back() == 0) r.verdict = Verdict::Inconclusive;
    return r;
}

}  // namespace tc
