#include "thermocone/memtp.hpp"

#include "thermocone/cones.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tc {

JointState JointState::product(const Vec& p, std::size_t N) {
    if (N == 0) throw std::invalid_argument("memory dimension must be positive");
    JointState r;
    r.d = p.size();
    r.N = N;
    r.entries.resize(r.d * N);
    for (std::size_t s = 0; s < r.d; ++s)
        for (std::size_t m = 0; m < N; ++m) r.entries[s * N + m] = p[s] / N;
    return r;
}

Vec JointState::system() const {
    Vec v(d, 0.0);
    for (std::size_t s = 0; s < d; ++s)
        for (std::size_t m = 0; m < N; ++m) v[s] += entries[s * N + m];
    return v;
}

Vec JointState::memory() const {
    Vec v(N, 0.0);
    for (std::size_t s = 0; s < d; ++s)
        for (std::size_t m = 0; m < N; ++m) v[m] += entries[s * N + m];
    return v;
}

void JointState::thermalise_memory() { *this = product(system(), N); }

Vec two_level_thermalise(Vec s, std::size_t i, std::size_t j, double lambda, double gi, double gj) {
    if (i >= s.size() || j >= s.size()) throw std::out_of_range("level index out of range");
    if (i == j) throw std::invalid_argument("two-level thermalisation needs distinct levels");
    if (lambda < 0 || lambda > 1) throw std::invalid_argument("lambda outside [0,1]");
    double t = s[i] + s[j], w = gi / (gi + gj);
    s[i] = (1 - lambda) * s[i] + lambda * t * w;
    s[j] = (1 - lambda) * s[j] + lambda * t * (1 - w);
    return s;
}

Vec two_level_thermalise(const Vec& p, std::size_t i, std::size_t j, double lambda, const GibbsContext& ctx) {
    check_dims(p, ctx);
    if (i >= p.size() || j >= p.size()) throw std::out_of_range("level index out of range");
    return two_level_thermalise(p, i, j, lambda, ctx.gamma[i], ctx.gamma[j]);
}

JointState two_level_thermalise(JointState r, std::size_t i, std::size_t j, double lambda, const GibbsContext& ctx) {
    if (i >= r.entries.size() || j >= r.entries.size()) throw std::out_of_range("level index out of range");
    r.entries = two_level_thermalise(r.entries, i, j, lambda, ctx.gamma[i / r.N], ctx.gamma[j / r.N]);
    return r;
}

Matrix beta_swap_matrix(double Ei, double Ej, double beta) {
    if (Ej < Ei) throw std::invalid_argument("beta swap expects E_j >= E_i");
    double e = std::exp(-beta * (Ej - Ei));
    Matrix m(2, 2);
    m << 1 - e, 1, e, 0;
    return m;
}

Vec beta_swapped(const Vec& p, std::size_t i, std::size_t j, const GibbsContext& ctx) {
    check_dims(p, ctx);
    std::size_t lo = ctx.gamma[i] >= ctx.gamma[j] ? i : j, hi = lo == i ? j : i;
    double e = ctx.gamma[hi] / ctx.gamma[lo];
    Vec r = p;
    r[lo] = (1 - e) * p[lo] + p[hi];
    r[hi] = e * p[lo];
    return r;
}

SwapRoles swap_roles(const Vec& p, std::size_t i, std::size_t j, const GibbsContext& ctx) {
    double gi = ctx.gamma[i], gj = ctx.gamma[j];
    if (gi > gj) return {i, j};
    if (gj > gi) return {j, i};
    // equal weights: the emptier level is swept round by round
    if (p[i] * gj < p[j] * gi) return {j, i};
    return {i, j};
}

namespace {

double joint_free_energy(const JointState& r, const GibbsContext& ctx) {
    double s = 0;
    for (std::size_t k = 0; k < r.entries.size(); ++k) {
        double x = r.entries[k];
        if (x > 0) s += x * std::log(x * r.N / ctx.gamma[k / r.N]);
    }
    return s;
}

}  // namespace

void swap_rounds(JointState& r, std::size_t i, std::size_t j, const GibbsContext& ctx, std::vector<Vec>* log,
                 std::vector<double>* free_energy) {
    if (i == j || i >= r.d || j >= r.d) throw std::invalid_argument("bad level pair");
    auto roles = swap_roles(r.system(), i, j, ctx);
    const double gl = ctx.gamma[roles.low], gp = ctx.gamma[roles.pivot];
    const double w = gl / (gl + gp);
    const std::size_t N = r.N;
    for (std::size_t k = 0; k < N; ++k) {
        double& piv = r.entries[roles.pivot * N + k];
        for (std::size_t m = 0; m < N; ++m) {
            double& b = r.entries[roles.low * N + m];
            double t = b + piv;
            b = t * w;
            piv = t * (1 - w);
            if (free_energy) free_energy->push_back(joint_free_energy(r, ctx));
        }
        if (log) log->push_back(r.system());
    }
}

ProtocolRun run_beta_swap_protocol(const Vec& p, std::size_t i, std::size_t j, std::size_t N,
                                   const GibbsContext& ctx, Variant variant, bool record_free_energy) {
    check_dims(p, ctx);
    ProtocolRun run;
    JointState r = JointState::product(p, N);
    if (record_free_energy) run.free_energy.push_back(joint_free_energy(r, ctx));
    swap_rounds(r, i, j, ctx, &run.log, record_free_energy ? &run.free_energy : nullptr);
    run.joint = r;
    run.memory_before = r.memory();
    if (variant == Variant::Full) r.thermalise_memory();
    run.system = r.system();
    run.memory = r.memory();
    return run;
}

namespace {

double binom(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    double r = 1;
    for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
    return r;
}

}  // namespace

double closed_form_b(double b, double c, int k, int j, double G12) {
    if (k == 0) return b;
    const double G21 = 1 - G12;
    double sc = 0, sb = 0;
    for (int i = 0; i < k; ++i) sc += binom(j + i - 1, i) * std::pow(G12, i);
    for (int i = 1; i <= j; ++i) sb += binom(j + k - 1 - i, k - 1) * std::pow(G21, j - i);
    return G12 * std::pow(G21, j - 1) * c * sc + b * std::pow(G12, k) * sb;
}

double closed_form_c(double b, double c, int N, int j, double G12) {
    const double G21 = 1 - G12;
    double sc = 0, sb = 0;
    for (int i = 0; i < j; ++i) sc += binom(N + i - 1, i) * std::pow(G12, i);
    for (int i = 0; i < N; ++i) sb += binom(i + j - 1, j - 1) * std::pow(G21, i);
    return c * std::pow(G21, N) * sc + b * G21 * std::pow(G12, j - 1) * sb;
}

Convergence convergence_functions(const Vec& pair, double G12, int N) {
    if (pair.size() != 2) throw std::invalid_argument("two-level input expected");
    if (N < 1 || !(G12 >= 0.5 && G12 < 1)) throw std::invalid_argument("need N >= 1 and 1/2 <= G12 < 1");
    const double G21 = 1 - G12, b = pair[0], c = pair[1];
    const double x = 4 * G12 * G21;
    // (G21 G12)^N / (N B(N,N))
    const double tail = std::exp(N * std::log(G21 * G12) + std::lgamma(2.0 * N) - 2 * std::lgamma(double(N))) / N;
    Convergence r;
    r.E = ((G21 - G12) * 0.5 * reg_inc_beta(std::min(x, 1.0), N, 0.5) + tail) / G21;
    const double Inn = reg_inc_beta(G21, N, N);
    r.F = (1 - Inn) - (G21 / G12) * (1 - Inn - tail / G21);
    r.q = {b * r.F + c * (1 - r.E), b * (1 - r.F) + c * r.E};
    const double e = G21 / G12;
    r.distance = std::abs(r.q[1] - b * e);
    if (std::abs(G12 - 0.5) < 1e-15)
        r.predicted = std::abs(b - c) / std::sqrt(M_PI * N);
    else
        r.predicted = std::pow(x, N) * std::abs(b * G21 - c * G12) /
                      ((G12 - G21) * (G12 - G21) * (N + 1) * std::sqrt(M_PI * N));
    return r;
}

std::vector<Transposition> decompose(const Vec& p, const GibbsContext& ctx, const Order& target) {
    const std::size_t d = p.size();
    if (target.size() != d) throw std::invalid_argument("target order size mismatch");
    Order cur = beta_order(p, ctx).perm;
    std::vector<Transposition> out;
    for (std::size_t pos = 0; pos < d; ++pos) {
        auto it = std::find(cur.begin() + pos, cur.end(), target[pos]);
        if (it == cur.end()) throw std::invalid_argument("target is not a permutation");
        for (std::size_t k = it - cur.begin(); k > pos; --k) {
            out.push_back({cur[k - 1], cur[k]});
            std::swap(cur[k - 1], cur[k]);
        }
    }
    return out;
}

ComposeResult compose_protocol(const ProtocolSpec& spec, const Vec& p, const GibbsContext& ctx) {
    check_dims(p, ctx);
    ComposeResult res;
    res.target = extreme_point(p, ctx, spec.target);
    Order cur = beta_order(p, ctx).perm;
    for (auto& t : spec.swaps) {
        auto a = std::find(cur.begin(), cur.end(), t.i), b = std::find(cur.begin(), cur.end(), t.j);
        if (a == cur.end() || b == cur.end() || std::abs(a - b) != 1)
            throw std::invalid_argument("transposition of levels that are not adjacent in the running order");
        std::iter_swap(a, b);
    }
    JointState r = JointState::product(p, spec.N);
    for (auto& t : spec.swaps) {
        swap_rounds(r, t.i, t.j, ctx);
        if (spec.variant == Variant::Full) r.thermalise_memory();
    }
    res.system = r.system();
    res.distance = total_variation(res.system, res.target);
    return res;
}

Vec correction_apply(const std::vector<Transposition>& swaps, const Vec& p) {
    auto perm = [](Vec v, const Transposition& t) {
        std::swap(v[t.i], v[t.j]);
        return v;
    };
    Vec out(p.size(), 0.0);
    for (std::size_t l = 0; l < swaps.size(); ++l) {
        Vec v = p;
        for (std::size_t k = 0; k < l; ++k) v = perm(v, swaps[k]);
        Vec pv = perm(v, swaps[l]);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= pv[i];
        for (std::size_t k = l + 1; k < swaps.size(); ++k) v = perm(v, swaps[k]);
        for (std::size_t i = 0; i < v.size(); ++i) out[i] += v[i];
    }
    return out;
}

double battery_error(const Vec& joint, const GibbsContext& joint_ctx, double gB1) {
    double f = curve_value(thermo_curve(joint, joint_ctx), gB1);
    return std::max(0.0, 1 - f);
}

WorkResult work_extraction_with_memory(const Vec& p, const GibbsContext& ctx, double W, std::size_t N) {
    check_dims(p, ctx);
    if (W < 0) throw std::invalid_argument("negative work");
    const std::size_t d = p.size();
    GibbsContext bat = GibbsContext::thermal({0.0, W}, ctx.beta);
    GibbsContext jctx = tensor(ctx, bat);
    Vec pSB = tensor(p, Vec{1.0, 0.0});
    const double gB1 = bat.gamma[1];

    WorkResult res;
    res.eps_TO = battery_error(pSB, jctx, gB1);

    // extreme points ordered like the target: every charged-battery level ahead of every empty one
    Order up(d), down(d);
    for (std::size_t s = 0; s < d; ++s) {
        up[s] = 2 * s + 1;
        down[s] = 2 * s;
    }
    double best = INFINITY;
    Order bu = up;
    std::sort(bu.begin(), bu.end());
    do {
        Order bd = down;
        std::sort(bd.begin(), bd.end());
        do {
            Order ord = bu;
            ord.insert(ord.end(), bd.begin(), bd.end());
            double e = battery_error(extreme_point(pSB, jctx, ord), jctx, gB1);
            if (e < best - 1e-15) {
                best = e;
                res.target = ord;
            }
        } while (std::next_permutation(bd.begin(), bd.end()));
    } while (std::next_permutation(bu.begin(), bu.end()));

    ProtocolSpec spec;
    spec.target = res.target;
    spec.swaps = decompose(pSB, jctx, res.target);
    spec.N = N;
    spec.variant = Variant::Truncated;
    auto out = compose_protocol(spec, pSB, jctx);
    res.eps_N = battery_error(out.system, jctx, gB1);
    return res;
}

Cooling cooling_with_memory(double ES, double EM, double beta) {
    if (std::abs(ES - 2 * EM) < 1e-12) throw std::invalid_argument("degenerate coupling: E_S = 2 E_M");
    Cooling c;
    auto e = [beta](double x) { return std::exp(beta * x); };
    double q1 = (e(EM) + e(EM + ES) + e(2 * EM + ES) + e(EM + 2 * ES) + e(ES)) /
                ((e(ES) + 1) * (e(EM - ES) + 1) * (e(EM + ES) + 1));
    double q2 = (e(EM) + e(2 * EM + ES) + e(ES)) / ((e(ES) + 1) * (e(EM) + e(ES)) * (e(EM + ES) + 1));
    c.q = {q1, q2};
    double z = 1 + std::exp(-beta * ES);
    c.gamma_s = {1 / z, std::exp(-beta * ES) / z};
    c.distance = 1 / ((std::exp(-beta * ES) + 1) * (std::cosh(beta * EM) + std::cosh(beta * ES)));

    // levels |s m>: 00, 01, 10, 11
    GibbsContext joint = GibbsContext::thermal({0, EM, ES, ES + EM}, beta);
    GibbsContext mem = GibbsContext::thermal({0, EM}, beta);
    Vec r = tensor(Vec{0.0, 1.0}, mem.gamma);
    auto th = [&](std::size_t i, std::size_t j) { r = two_level_thermalise(r, i, j, 1.0, joint); };
    th(1, 2);            // 01 <-> 10
    th(0, 2), th(1, 3);  // system flip for each memory level
    th(0, 3);            // 00 <-> 11
    th(0, 1), th(2, 3);  // memory flip for each system level
    c.simulated = {r[0] + r[1], r[2] + r[3]};
    c.simulated_distance = std::abs(c.simulated[0] - c.gamma_s[0]) + std::abs(c.simulated[1] - c.gamma_s[1]);
    return c;
}

}  // namespace tc
