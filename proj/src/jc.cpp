#include "thermocone/jc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace tc::jc {

namespace {

constexpr cplx I(0, 1);

// Rabi factors with the top excited level treated as uncoupled
struct Rabi {
    double gt;
    int n_max;
    double s(int n) const { return n < 0 || n >= n_max ? 0.0 : std::sin(gt * std::sqrt(n + 1.0)); }
    double c(int n) const { return n < 0 || n >= n_max ? 1.0 : std::cos(gt * std::sqrt(n + 1.0)); }
};

Rabi rabi(const JCParams& p, int n_max) { return {p.g * p.tau, n_max}; }

void check_params(const JCParams& p) {
    if (p.n_max < 1) throw std::invalid_argument("cutoff must be at least 1");
    if (p.g < 0 || p.tau < 0) throw std::invalid_argument("coupling and time must be non-negative");
}

void check_cutoff(const CavityState& rho, const JCParams& p) {
    if (rho.n_max() != p.n_max) throw std::invalid_argument("cavity cutoff does not match parameters");
}

CMatrix product_state(const CMatrix& rho, const Eigen::Matrix2cd& chi) {
    const int N = int(rho.rows());
    CMatrix out(2 * N, 2 * N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) out(2 * n + a, 2 * m + b) = rho(n, m) * chi(a, b);
    return out;
}

}  // namespace

double CavityState::tail_mass(int width) const {
    double t = 0;
    for (int n = std::max(0, n_max() - width + 1); n <= n_max(); ++n) t += population(n);
    return t;
}

void CavityState::validate(bool check_tail) const {
    if (rho.rows() != rho.cols() || rho.rows() < 2) throw std::invalid_argument("cavity state must be square");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw std::invalid_argument("cavity state not Hermitian");
    if (std::abs(rho.trace().real() - 1) > 1e-9) throw std::invalid_argument("cavity state not normalised");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw std::invalid_argument("cavity state not positive");
    if (check_tail && tail_mass() > tail_tol) throw std::domain_error("Fock cutoff too small for this state");
}

CavityState CavityState::coherent(cplx alpha, int n_max) {
    Eigen::VectorXcd psi(n_max + 1);
    psi(0) = std::exp(-std::norm(alpha) / 2);
    for (int n = 1; n <= n_max; ++n) psi(n) = psi(n - 1) * alpha / std::sqrt(double(n));
    return {psi * psi.adjoint()};
}

CavityState CavityState::fock(int k, int n_max) {
    if (k < 0 || k > n_max) throw std::out_of_range("Fock level outside cutoff");
    CMatrix r = CMatrix::Zero(n_max + 1, n_max + 1);
    r(k, k) = 1;
    return {r};
}

CavityState CavityState::diagonal(const std::vector<double>& p) {
    CMatrix r = CMatrix::Zero(p.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r(i, i) = p[i];
    return {r};
}

int default_cutoff(double alpha_abs2) {
    return int(std::ceil(alpha_abs2 + 10 * std::sqrt(alpha_abs2 + 1) + 10));
}

Eigen::Matrix2cd AtomState::matrix() const {
    Eigen::Matrix2cd m;
    m << q, r, std::conj(r), 1 - q;
    return m;
}

bool AtomState::valid(double tol) const { return q >= -tol && q <= 1 + tol && std::norm(r) <= q * (1 - q) + tol; }

double trace_distance(const AtomState& a, const AtomState& b) {
    return 2 * std::sqrt((a.q - b.q) * (a.q - b.q) + std::norm(a.r - b.r));
}

CMatrix hamiltonian(const JCParams& p) {
    check_params(p);
    const int N = p.n_max + 1;
    CMatrix H = CMatrix::Zero(2 * N, 2 * N);
    for (int n = 0; n < N; ++n) {
        H(2 * n, 2 * n) = p.omega * (n - 0.5);
        H(2 * n + 1, 2 * n + 1) = p.omega * (n + 0.5);
    }
    for (int n = 0; n + 1 < N; ++n) {
        double v = p.g * std::sqrt(n + 1.0);
        H(2 * (n + 1), 2 * n + 1) = v;
        H(2 * n + 1, 2 * (n + 1)) = v;
    }
    return H;
}

CMatrix jc_unitary(const JCParams& p) {
    check_params(p);
    const int N = p.n_max + 1;
    const double t = p.tau;
    CMatrix U = CMatrix::Zero(2 * N, 2 * N);
    U(0, 0) = std::exp(I * (p.omega * t / 2));
    for (int n = 0; n + 1 < N; ++n) {
        cplx ph = std::exp(-I * ((n + 0.5) * p.omega * t));
        double th = p.g * t * std::sqrt(n + 1.0);
        int lo = 2 * (n + 1), hi = 2 * n + 1;
        U(lo, lo) = U(hi, hi) = ph * std::cos(th);
        U(lo, hi) = U(hi, lo) = -I * ph * std::sin(th);
    }
    U(2 * N - 1, 2 * N - 1) = std::exp(-I * ((N - 0.5) * p.omega * t));
    return U;
}

CMatrix jc_unitary_spectral(const JCParams& p) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hamiltonian(p));
    Eigen::VectorXcd ph = (-I * p.tau * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Reduced reduced_closed_form(const CavityState& rho, const AtomState& chi, const JCParams& p) {
    check_params(p);
    check_cutoff(rho, p);
    const int N = p.n_max + 1;
    const Rabi R = rabi(p, p.n_max);
    const double w = p.omega, t = p.tau, q = chi.q;
    const cplx r = chi.r;
    auto P = [&](int n, int m) { return rho.element(n, m); };

    CMatrix s = CMatrix::Zero(N, N), x = CMatrix::Zero(N, N);
    s(0, 0) += q * P(0, 0);
    for (int n = 0; n + 1 < N; ++n) {
        cplx v = std::exp(I * ((n + 1) * w * t)) * (q * P(0, n + 1) * R.c(n) + I * r * P(0, n) * R.s(n));
        s(0, n + 1) += v;
        s(n + 1, 0) += std::conj(v);
    }
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) {
            cplx ph = std::exp(-I * ((n - m) * w * t));
            bool up = n + 1 < N && m + 1 < N;
            s(n, m) += ph * q * P(n + 1, m + 1) * R.s(n) * R.s(m);
            s(n, m) += ph * (1 - q) * P(n, m) * R.c(n) * R.c(m);
            if (up) {
                s(n + 1, m + 1) += ph * q * P(n + 1, m + 1) * R.c(n) * R.c(m);
                s(n + 1, m + 1) += ph * (1 - q) * P(n, m) * R.s(n) * R.s(m);
                x(n + 1, m + 1) += I * ph * R.c(n) * R.s(m) * P(n + 1, m) * r;
            }
            x(n, m) += I * ph * R.c(n) * R.s(m) * P(n, m + 1) * std::conj(r);
        }
    s += x + x.adjoint().eval();

    Reduced out{s, {}};
    double qt = 0;
    cplx diag = 0, dbl = 0, up = 0, down = 0;
    for (int n = 0; n < N; ++n) {
        qt += q * P(n, n).real() * R.c(n - 1) * R.c(n - 1) + (1 - q) * P(n, n).real() * R.s(n) * R.s(n) +
              2 * (I * r * P(n + 1, n)).real() * R.s(n) * R.c(n);
        diag += P(n, n) * R.c(n - 1) * R.c(n);
        dbl += P(n, n + 2) * R.s(n) * R.s(n + 1);
        up += P(n, n + 1) * R.s(n) * (R.c(n - 1) + R.c(n + 1));
        down += P(n, n + 1) * R.s(n) * R.c(n + 1);
    }
    cplx e = std::exp(I * (w * t));
    out.atom.q = qt;
    out.atom.r = e * (r * diag + std::conj(r) * dbl + I * q * up - I * down);
    return out;
}

Evolution evolve(const CavityState& rho, const AtomState& chi, const JCParams& p, bool check_tail) {
    check_params(p);
    check_cutoff(rho, p);
    rho.validate(check_tail);
    if (!chi.valid(1e-10)) throw std::invalid_argument("atom state not positive");
    const int N = p.n_max + 1;
    CMatrix U = jc_unitary(p);
    Evolution ev;
    ev.joint = U * product_state(rho.rho, chi.matrix()) * U.adjoint();
    ev.cavity = CMatrix::Zero(N, N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) ev.cavity(n, m) = ev.joint(2 * n, 2 * m) + ev.joint(2 * n + 1, 2 * m + 1);
    cplx gg = 0, ge = 0;
    for (int n = 0; n < N; ++n) {
        gg += ev.joint(2 * n, 2 * n);
        ge += ev.joint(2 * n, 2 * n + 1);
    }
    ev.atom = {gg.real(), ge};
    return ev;
}

AuxTerms aux_terms(const CavityState& rho, const JCParams& p) {
    check_params(p);
    check_cutoff(rho, p);
    const Rabi R = rabi(p, p.n_max);
    auto P = [&](int n, int m) { return rho.element(n, m); };
    cplx s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (int n = 0; n <= p.n_max; ++n) {
        s1 += P(n, n) * R.c(n - 1) * R.c(n);
        s2 += P(n, n + 1) * R.s(n) * (R.c(n - 1) + R.c(n + 1));
        s3 += P(n, n + 2) * R.s(n) * R.s(n + 1);
        s4 += P(n, n + 1) * R.s(n) * R.c(n + 1);
    }
    cplx e = std::exp(I * (p.omega * p.tau));
    return {e * s1 - 1.0, I * e * s2, e * s3, -I * e * s4};
}

CatalystResult catalytic_atom(const CavityState& rho, const JCParams& p, bool check_tail) {
    rho.validate(check_tail);
    auto a = aux_terms(rho, p);
    double den = std::norm(a.a1) - std::norm(a.a3);
    if (std::abs(den) < 1e-14) throw std::domain_error("singular catalytic constraint");
    cplx A = (a.a3 * std::conj(a.a4) - std::conj(a.a1) * a.a4) / den;
    cplx B = (a.a3 * std::conj(a.a2) - std::conj(a.a1) * a.a2) / den;

    const Rabi R = rabi(p, p.n_max);
    double num = 0, dd = 0;
    for (int n = 0; n <= p.n_max; ++n) {
        double sn = R.s(n), cn = R.c(n);
        cplx off = rho.element(n + 1, n);
        num += rho.population(n) * sn * sn + 2 * (I * A * off).real() * sn * cn;
        dd += (rho.population(n) + rho.population(n + 1)) * sn * sn - 2 * (I * B * off).real() * sn * cn;
    }
    if (std::abs(dd) < 1e-300) throw std::domain_error("catalytic population undefined");

    CatalystResult res;
    res.atom.q = num / dd;
    res.atom.r = A + B * res.atom.q;
    if (!res.atom.valid()) {
        res.reason = "solution outside the state space";
        return res;
    }
    auto ev = evolve(rho, res.atom, p, check_tail);
    res.residual = trace_distance(ev.atom, res.atom);
    res.feasible = true;
    return res;
}

AtomState catalytic_atom_affine(const CavityState& rho, const JCParams& p) {
    // atom map is affine in (q, Re r, Im r); chi = |e><e| + q Z + x X + y Y
    auto image = [&](const AtomState& a) {
        CMatrix U = jc_unitary(p);
        const int N = p.n_max + 1;
        CMatrix j = U * product_state(rho.rho, a.matrix()) * U.adjoint();
        cplx gg = 0, ge = 0;
        for (int n = 0; n < N; ++n) {
            gg += j(2 * n, 2 * n);
            ge += j(2 * n, 2 * n + 1);
        }
        return Eigen::Vector3d(gg.real(), ge.real(), ge.imag());
    };
    // linear parts from traceless generators, which need not be positive
    AtomState base{0, 0};
    Eigen::Vector3d b0 = image(base);
    Eigen::Matrix3d M;
    AtomState z{1, 0}, xg{0, 1}, yg{0, I};
    M.col(0) = image(z) - b0;
    M.col(1) = image(xg) - b0;
    M.col(2) = image(yg) - b0;
    Eigen::Vector3d sol = (Eigen::Matrix3d::Identity() - M).fullPivLu().solve(b0);
    return {sol(0), cplx(sol(1), sol(2))};
}

double incoherent_catalyst(const std::vector<double>& pops, const JCParams& p) {
    double num = 0, den = 0;
    for (std::size_t n = 0; n < pops.size(); ++n) {
        double s = std::sin(p.g * p.tau * std::sqrt(n + 1.0));
        double next = n + 1 < pops.size() ? pops[n + 1] : 0.0;
        num += pops[n] * s * s;
        den += (pops[n] + next) * s * s;
    }
    if (den == 0) throw std::domain_error("catalytic population undefined");
    return num / den;
}

double mean_n(const CMatrix& rho) {
    double m = 0;
    for (int n = 0; n < rho.rows(); ++n) m += n * rho(n, n).real();
    return m;
}

double mean_n2(const CMatrix& rho) {
    double m = 0;
    for (int n = 0; n < rho.rows(); ++n) m += double(n) * n * rho(n, n).real();
    return m;
}

double g2(const CMatrix& rho) {
    double m = mean_n(rho);
    if (m <= 0) throw std::domain_error("second-order coherence undefined for the vacuum");
    return (mean_n2(rho) - m) / (m * m);
}

double correlation_closed_form(const CavityState& rho, const AtomState& chi, const JCParams& p) {
    const Rabi R = rabi(p, p.n_max);
    double s = 0;
    for (int n = 0; n <= p.n_max; ++n) {
        double sn = R.s(n), cn = R.c(n);
        double y = 2 * (chi.r * rho.element(n + 1, n)).imag() * sn * cn;
        s += n * ((1 - chi.q) * rho.population(n) * cn * cn + y + chi.q * rho.population(n + 1) * sn * sn);
    }
    return s;
}

double g2_catalytic(const CavityState& rho, const AtomState& chi, const JCParams& p) {
    double m = mean_n(rho.rho);
    return g2(rho.rho) - 2 / (m * m) * (correlation_closed_form(rho, chi, p) - (1 - chi.q) * m);
}

double correlation_matrix(const CMatrix& joint) {
    double s = 0;
    for (int n = 0; 2 * n + 1 < joint.rows(); ++n) s += n * joint(2 * n + 1, 2 * n + 1).real();
    return s;
}

double moment_transfer_residual(const CMatrix& initial, const CMatrix& joint) {
    const int N = int(joint.rows()) / 2;
    double nS = 0, nS2 = 0, nC = 0;
    for (int n = 0; n < N; ++n) {
        double pn = joint(2 * n, 2 * n).real() + joint(2 * n + 1, 2 * n + 1).real();
        nS += n * pn;
        nS2 += double(n) * n * pn;
        nC += joint(2 * n + 1, 2 * n + 1).real();
    }
    return std::abs(nS2 - mean_n2(initial) - 2 * (nS * nC - correlation_matrix(joint)));
}

double wigner_range(int n_max) { return std::sqrt(2.0 * n_max) + 3; }

WignerField wigner(const CMatrix& rho, double range, double step) {
    const int N = int(rho.rows());
    const double need = wigner_range(N - 1);
    if (range == 0) range = need;
    if (range < need - 1e-12) throw std::invalid_argument("Wigner grid does not cover the cutoff");
    if (!(step > 0)) throw std::invalid_argument("grid step must be positive");
    const int K = int(std::ceil(range / step - 1e-9));
    WignerField f;
    for (int k = -K; k <= K; ++k) f.axis.push_back(k * step);
    const int G = int(f.axis.size());
    f.W = Eigen::MatrixXd::Zero(G, G);

    // sqrt(m!/(m+k)!) (-1)^m / pi
    std::vector<std::vector<double>> coef(N);
    for (int k = 0; k < N; ++k)
        for (int m = 0; m + k < N; ++m)
            coef[k].push_back((m % 2 ? -1.0 : 1.0) / M_PI *
                              std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(m + k + 1.0))));

    std::vector<double> L(N);
    for (int i = 0; i < G; ++i)
        for (int j = 0; j < G; ++j) {
            cplx a(f.axis[i], f.axis[j]);
            double r2 = std::norm(a), x = 2 * r2, damp = std::exp(-r2);
            cplx pw = 1;
            double w = 0;
            for (int k = 0; k < N; ++k) {
                int len = N - k;
                L[0] = 1;
                if (len > 1) L[1] = 1 + k - x;
                for (int m = 1; m + 1 < len; ++m) L[m + 1] = ((2 * m + 1 + k - x) * L[m] - (m + k) * L[m - 1]) / (m + 1);
                for (int m = 0; m < len; ++m) {
                    cplx term = coef[k][m] * pw * damp * L[m];
                    w += k == 0 ? rho(m, m).real() * term.real() : 2 * (rho(m + k, m) * term).real();
                }
                pw *= std::sqrt(2.0) * std::conj(a);
            }
            f.W(i, j) = w;
        }

    auto wt = [&](int i) { return i == 0 || i == G - 1 ? 0.5 : 1.0; };
    double tot = 0, abs_tot = 0;
    for (int i = 0; i < G; ++i)
        for (int j = 0; j < G; ++j) {
            double c = wt(i) * wt(j) * step * step;
            tot += c * f.W(i, j);
            abs_tot += c * std::abs(f.W(i, j));
        }
    f.integral = tot;
    if (std::abs(tot - 1) > 1e-3) throw std::runtime_error("Wigner normalisation check failed");
    f.wln = std::max(0.0, std::log(abs_tot));
    return f;
}

double squeezing_xi(const CMatrix& rho) {
    const int N = int(rho.rows());
    cplx ma = 0, ma2 = 0;
    for (int n = 0; n + 1 < N; ++n) ma += std::sqrt(n + 1.0) * rho(n + 1, n);  // <a>
    for (int n = 0; n + 2 < N; ++n) ma2 += std::sqrt((n + 1.0) * (n + 2.0)) * rho(n + 2, n);
    double nn = mean_n(rho);
    // X1^2 = (a^2 + a+^2 + 2 n + 1) / 2
    double x = std::sqrt(2.0) * ma.real();
    double x2 = (2 * ma2.real() + 2 * nn + 1) / 2;
    return std::sqrt(2 * std::max(0.0, x2 - x * x));
}

std::vector<ScanPoint> scan(const CavityState& rho, JCParams base, const std::vector<double>& taus, Witness w,
                            unsigned threads) {
    rho.validate(true);
    std::vector<ScanPoint> out(taus.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < taus.size();) {
            JCParams p = base;
            p.tau = taus[i];
            ScanPoint& pt = out[i];
            pt.tau = taus[i];
            try {
                auto c = catalytic_atom(rho, p);
                pt.atom = c.atom;
                pt.residual = c.residual;
                pt.feasible = c.feasible;
            } catch (const std::domain_error&) {
                pt.feasible = false;
            }
            if (!pt.feasible) continue;
            CMatrix cav = reduced_closed_form(rho, pt.atom, p).cavity;
            pt.g2 = g2(cav);
            switch (w) {
                case Witness::G2: pt.witness = pt.g2; break;
                case Witness::Squeezing: pt.witness = squeezing_xi(cav); break;
                case Witness::WLN: pt.witness = wigner(cav).wln; break;
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = unsigned(std::min<std::size_t>(threads, std::max<std::size_t>(1, taus.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace tc::jc
