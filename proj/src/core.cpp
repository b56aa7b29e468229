#include "thermocone/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tc {

Embedding rational_embedding(const Vec& gamma, double tol, long cap) {
    const std::size_t d = gamma.size();
    Embedding best;
    best.err = INFINITY;
    std::vector<long> c(d);
    std::vector<std::pair<double, std::size_t>> frac(d);
    for (long D = static_cast<long>(d); D <= cap; ++D) {
        long s = 0;
        for (std::size_t i = 0; i < d; ++i) {
            double v = gamma[i] * D;
            c[i] = static_cast<long>(std::floor(v));
            frac[i] = {v - c[i], i};
            s += c[i];
        }
        long rem = D - s;
        if (rem > 0) {
            std::partial_sort(frac.begin(), frac.begin() + rem, frac.end(),
                              [](auto& a, auto& b) { return a.first > b.first; });
            for (long k = 0; k < rem; ++k) ++c[frac[k].second];
        }
        if (std::any_of(c.begin(), c.end(), [](long v) { return v == 0; })) continue;
        double err = 0;
        for (std::size_t i = 0; i < d; ++i) err = std::max(err, std::abs(double(c[i]) / D - gamma[i]));
        if (err < best.err) {
            best.D = D;
            best.counts = c;
            best.err = err;
            if (err <= tol) break;
        }
    }
    if (best.D == 0) throw std::domain_error("no embedding with positive block sizes");
    return best;
}

GibbsContext GibbsContext::thermal(const Vec& energies, double beta) {
    if (energies.empty()) throw std::invalid_argument("empty spectrum");
    if (beta < 0) throw std::invalid_argument("negative beta");
    GibbsContext c;
    c.energies = energies;
    c.beta = beta;
    double e0 = *std::min_element(energies.begin(), energies.end());
    c.gamma.resize(energies.size());
    double z = 0;
    for (std::size_t i = 0; i < energies.size(); ++i) z += c.gamma[i] = std::exp(-beta * (energies[i] - e0));
    for (auto& g : c.gamma) g /= z;
    return c;
}

GibbsContext GibbsContext::from_gamma(const Vec& gamma) {
    check_state(gamma, 1e-12);
    GibbsContext c;
    c.beta = 1;
    c.gamma = gamma;
    for (double g : gamma) {
        if (!(g > 0)) throw std::invalid_argument("gamma must be strictly positive");
        c.energies.push_back(-std::log(g));
    }
    return c;
}

GibbsContext GibbsContext::uniform(std::size_t d) { return thermal(Vec(d, 0.0), 0.0); }

const Embedding& GibbsContext::embedding() const {
    std::call_once(lazy_->once, [this] { lazy_->emb = rational_embedding(gamma); });
    return lazy_->emb;
}

GibbsContext tensor(const GibbsContext& a, const GibbsContext& b) {
    if (a.beta != b.beta && a.dim() > 1 && b.dim() > 1)
        throw std::invalid_argument("tensor product of contexts at different temperatures");
    GibbsContext c;
    c.beta = a.dim() > 1 ? a.beta : b.beta;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) {
            c.energies.push_back(a.energies[i] + b.energies[j]);
            c.gamma.push_back(a.gamma[i] * b.gamma[j]);
        }
    return c;
}

Vec tensor(const Vec& a, const Vec& b) {
    Vec r;
    r.reserve(a.size() * b.size());
    for (double x : a)
        for (double y : b) r.push_back(x * y);
    return r;
}

void check_state(const Vec& p, double tol) {
    if (p.empty()) throw std::invalid_argument("empty state");
    double s = 0;
    for (double x : p) {
        if (!(x >= 0)) throw std::invalid_argument("negative or NaN entry in state");
        s += x;
    }
    if (std::abs(s - 1) > tol) throw std::invalid_argument("state not normalised");
}

void check_dims(const Vec& p, const GibbsContext& ctx) {
    if (p.size() != ctx.dim()) throw std::invalid_argument("dimension mismatch");
}

double total_variation(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / 2;
}

Vec sorted_desc(Vec p) {
    std::sort(p.begin(), p.end(), std::greater<>());
    return p;
}

BetaOrder beta_order(const Vec& p, const GibbsContext& ctx) {
    check_dims(p, ctx);
    BetaOrder b;
    b.perm.resize(p.size());
    std::iota(b.perm.begin(), b.perm.end(), 0);
    // compare p_i/g_i > p_j/g_j without dividing
    std::stable_sort(b.perm.begin(), b.perm.end(), [&](std::size_t i, std::size_t j) {
        return p[i] * ctx.gamma[j] > p[j] * ctx.gamma[i];
    });
    for (auto i : b.perm) b.sorted.push_back(p[i]);
    return b;
}

Vec embed(const Vec& p, const GibbsContext& ctx) {
    check_dims(p, ctx);
    const auto& e = ctx.embedding();
    Vec r;
    r.reserve(e.D);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (e.counts[i] == 0) throw std::domain_error("zero embedding block");
        r.insert(r.end(), e.counts[i], p[i] / e.counts[i]);
    }
    return r;
}

ThermoCurve curve_in_order(const Vec& v, const Vec& gamma, const Order& order) {
    ThermoCurve c;
    c.elbows.reserve(order.size() + 1);
    c.elbows.push_back({0, 0});
    double x = 0, y = 0;
    for (auto i : order) {
        x += gamma[i];
        y += v[i];
        c.elbows.push_back({x, y});
    }
    c.elbows.back() = {1.0, c.elbows.back().y};
    return c;
}

ThermoCurve thermo_curve(const Vec& p, const GibbsContext& ctx) {
    return curve_in_order(p, ctx.gamma, beta_order(p, ctx).perm);
}

double curve_value(const ThermoCurve& c, double x) {
    const auto& e = c.elbows;
    if (x < -1e-15 || x > 1 + 1e-15) throw std::out_of_range("curve argument outside [0,1]");
    if (x <= e.front().x) return e.front().y;
    if (x >= e.back().x) return e.back().y;
    auto it = std::upper_bound(e.begin(), e.end(), x, [](double v, const Point& p) { return v < p.x; });
    const Point& b = *it;
    const Point& a = *(it - 1);
    if (b.x == a.x) return b.y;
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

bool curve_above(const ThermoCurve& a, const ThermoCurve& b, double tol) {
    for (const auto& pt : b.elbows)
        if (curve_value(a, pt.x) < pt.y - tol) return false;
    for (const auto& pt : a.elbows)
        if (pt.y < curve_value(b, pt.x) - tol) return false;
    return true;
}

bool thermomajorises(const Vec& p, const Vec& q, const GibbsContext& ctx) {
    check_dims(q, ctx);
    return curve_above(thermo_curve(p, ctx), thermo_curve(q, ctx));
}

bool majorises(const Vec& p, const Vec& q) {
    if (p.size() != q.size()) throw std::invalid_argument("dimension mismatch");
    return thermomajorises(p, q, GibbsContext::uniform(p.size()));
}

namespace {

// least concave majorant of points sorted by x
std::vector<Point> upper_hull(const std::vector<Point>& pts) {
    std::vector<Point> h;
    for (const auto& p : pts) {
        while (h.size() >= 2) {
            const Point& a = h[h.size() - 2];
            const Point& b = h.back();
            // drop b if it lies on or below segment a-p
            double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            if (cross >= 0) h.pop_back();
            else break;
        }
        h.push_back(p);
    }
    return h;
}

}  // namespace

Vec join_flat(const Vec& p, const Vec& q) {
    if (p.size() != q.size()) throw std::invalid_argument("dimension mismatch");
    Vec a = sorted_desc(p), b = sorted_desc(q);
    const std::size_t d = a.size();
    // cumulative maximum, then pool adjacent blocks until the increments are non-increasing
    Vec cum(d + 1, 0.0);
    double pa = 0, pb = 0;
    for (std::size_t i = 0; i < d; ++i) {
        pa += a[i];
        pb += b[i];
        cum[i + 1] = std::max(pa, pb);
    }
    struct Block {
        double sum;
        std::size_t len;
    };
    std::vector<Block> st;
    for (std::size_t i = 0; i < d; ++i) {
        st.push_back({cum[i + 1] - cum[i], 1});
        while (st.size() >= 2) {
            auto& u = st[st.size() - 2];
            auto& v = st.back();
            if (v.sum * u.len > u.sum * v.len) {
                u.sum += v.sum;
                u.len += v.len;
                st.pop_back();
            } else break;
        }
    }
    Vec r;
    for (auto& bl : st) r.insert(r.end(), bl.len, bl.sum / bl.len);
    return r;
}

Join majorisation_join(const Vec& p, const Vec& q, const GibbsContext& ctx) {
    check_dims(p, ctx);
    check_dims(q, ctx);
    Join j;
    ThermoCurve fp = thermo_curve(p, ctx), fq = thermo_curve(q, ctx);
    std::vector<double> xs;
    for (auto& e : fp.elbows) xs.push_back(e.x);
    for (auto& e : fq.elbows) xs.push_back(e.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a - b) <= 1e-15; }),
             xs.end());
    std::vector<Point> pts;
    for (double x : xs) pts.push_back({x, std::max(curve_value(fp, x), curve_value(fq, x))});
    j.curve.elbows = upper_hull(pts);

    const std::size_t d = p.size();
    if (ctx.beta == 0 || std::all_of(ctx.gamma.begin(), ctx.gamma.end(),
                                     [&](double g) { return g == ctx.gamma[0]; })) {
        j.state = join_flat(p, q);
        j.embedded = *j.state;
        return j;
    }
    j.embedded = join_flat(embed(p, ctx), embed(q, ctx));

    if (d > 8) return j;
    // look for a level order whose partial sums contain every elbow of the join
    Order ord(d);
    std::iota(ord.begin(), ord.end(), 0);
    do {
        Vec cx(d + 1, 0.0);
        for (std::size_t k = 0; k < d; ++k) cx[k + 1] = cx[k] + ctx.gamma[ord[k]];
        bool ok = true;
        for (auto& e : j.curve.elbows) {
            bool hit = std::any_of(cx.begin(), cx.end(), [&](double x) { return std::abs(x - e.x) <= 1e-12; });
            if (!hit) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        Vec r(d);
        for (std::size_t k = 0; k < d; ++k)
            r[ord[k]] = curve_value(j.curve, std::min(cx[k + 1], 1.0)) - curve_value(j.curve, cx[k]);
        j.state = r;
        break;
    } while (std::next_permutation(ord.begin(), ord.end()));
    return j;
}

bool is_stochastic(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    if ((m.array() < -tol).any()) return false;
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        if (std::abs(m.col(c).sum() - 1) > tol) return false;
    return true;
}

bool is_gibbs_preserving(const Matrix& m, const GibbsContext& ctx) {
    if (m.rows() != static_cast<Eigen::Index>(ctx.dim()) || !is_stochastic(m)) return false;
    Eigen::Map<const Eigen::VectorXd> g(ctx.gamma.data(), ctx.dim());
    return ((m * g) - g).cwiseAbs().maxCoeff() <= 1e-10;
}

Vec apply(const Matrix& m, const Vec& p) {
    if (m.cols() != static_cast<Eigen::Index>(p.size())) throw std::invalid_argument("dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> v(p.data(), p.size());
    Eigen::VectorXd r = m * v;
    return Vec(r.data(), r.data() + r.size());
}

}  // namespace tc
