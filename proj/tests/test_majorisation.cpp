#include "helpers.hpp"
#include "thermocone/majorisation.hpp"

#include <doctest.h>

using namespace tc;
using namespace testing;

TEST_CASE("optimal approximate majorisation") {
    auto r = approx_majorise_optimal({0.7, 0.2, 0.1}, {0.75, 0.13, 0.12});
    CHECK(r.optimal[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(r.optimal[1] == doctest::Approx(0.5 / 3).epsilon(1e-14));
    CHECK(r.optimal[2] == doctest::Approx(0.25 / 3).epsilon(1e-14));
    CHECK(prefix_majorises(r.optimal, {0.75, 0.13, 0.12}));
    CHECK(r.fidelity == doctest::Approx(fidelity({0.7, 0.2, 0.1}, r.optimal)));
    // scaling factors grow from the tail to the head
    REQUIRE(r.segments.size() == 2);
    CHECK(r.segments[0].second < r.segments[1].second);

    auto same = approx_majorise_optimal({0.6, 0.3, 0.1}, {0.5, 0.3, 0.2});
    CHECK(same.fidelity == doctest::Approx(1.0));
    for (int i = 0; i < 3; ++i) CHECK(same.optimal[i] == doctest::Approx(Vec{0.6, 0.3, 0.1}[i]));

    // unsorted input keeps its index order
    auto u = approx_majorise_optimal({0.1, 0.7, 0.2}, {0.12, 0.75, 0.13});
    CHECK(u.optimal[1] == doctest::Approx(0.75));
    CHECK(u.optimal[0] == doctest::Approx(0.25 / 3));
    CHECK_THROWS(approx_majorise_optimal({0.5, 0.6}, {0.5, 0.5}));
}

TEST_CASE("optimal approximation beats a grid search over majorising states") {
    for (int k = 0; k < 2; ++k) {
        Vec p = sorted_desc(sample_simplex(4, 51, k)), q = sorted_desc(sample_simplex(4, 52, k));
        double F = approx_majorise_optimal(p, q).fidelity;
        const int n = 1000;
        double best = 0;
        double q1 = q[0], q2 = q1 + q[1], q3 = q2 + q[2];
        for (int a = 0; a <= n; ++a) {
            if (a < q1 * n - 1e-9) continue;
            for (int b = 0; b <= a && a + b <= n; ++b) {
                if (a + b < q2 * n - 1e-9) continue;
                for (int c = 0; c <= b && a + b + c <= n; ++c) {
                    int e = n - a - b - c;
                    if (e > c || a + b + c < q3 * n - 1e-9) continue;
                    double s = std::sqrt(p[0] * a / n) + std::sqrt(p[1] * b / n) + std::sqrt(p[2] * c / n) +
                               std::sqrt(p[3] * e / n);
                    best = std::max(best, s * s);
                }
            }
        }
        CHECK(best <= F + 1e-12);
        // square roots amplify the grid spacing near small entries
        CHECK(best >= F - 5e-3);
    }
}

TEST_CASE("optimal approximation dominates random majorising states") {
    Vec p = sorted_desc(sample_simplex(4, 61, 0)), q = sorted_desc(sample_simplex(4, 62, 0));
    double F = approx_majorise_optimal(p, q).fidelity;
    int hits = 0;
    for (int k = 0; hits < 10000 && k < 2000000; ++k) {
        Vec s = sample_simplex(4, 63, k);
        if (!prefix_majorises(s, q, 0)) continue;
        ++hits;
        CHECK(fidelity(p, s) <= F + 1e-12);
    }
    CHECK(hits == 10000);
}

TEST_CASE("conversion probability") {
    CHECK(vidal_probability({0.6, 0.4}, {0.6, 0.4}) == 1);
    CHECK(vidal_probability({0.6, 0.4}, {0.5, 0.5}) == doctest::Approx(0.8));
    CHECK(vidal_probability({0.5, 0.25, 0.25, 0}, {0.4, 0.4, 0.1, 0.1}) == 0);
    for (int k = 0; k < 500; ++k) {
        Vec p = sample_simplex(4, 71, k), q = sample_simplex(4, 72, k);
        double P = vidal_probability(p, q);
        CHECK(P >= 0);
        CHECK(P <= 1);
        // entanglement order runs opposite to the thermodynamic one
        CHECK((P >= 1 - 1e-12) == prefix_majorises(q, p, 1e-12));
    }
}

TEST_CASE("auxiliary states for probabilistic conversions") {
    auto one = probabilistic_aux({0.6, 0.4}, 1);
    CHECK(one.tilde == Vec{0.6, 0.4});
    CHECK(one.hat == Vec{0.6, 0.4});
    auto h = probabilistic_aux({0.6, 0.4}, 0.5);
    CHECK(h.tilde[0] == doctest::Approx(0.8));
    CHECK(h.tilde[1] == doctest::Approx(0.2));
    CHECK(h.hat[0] == doctest::Approx(0.5));
    CHECK(h.hat[1] == doctest::Approx(0.5));
    CHECK_THROWS(probabilistic_aux({0.6, 0.4}, 0));

    int agree = 0;
    for (int k = 0; k < 500; ++k) {
        Vec p = sorted_desc(sample_simplex(4, 81, k)), q = sample_simplex(4, 82, k);
        double P = 0.05 + 0.95 * sample_simplex(2, 83, k)[0];
        auto a = probabilistic_aux(p, P);
        CHECK(std::is_sorted(a.tilde.rbegin(), a.tilde.rend()));
        CHECK(std::is_sorted(a.hat.rbegin(), a.hat.rend()));
        CHECK(sum(a.hat) == doctest::Approx(1));
        Vec qs = sorted_desc(q);
        bool cond = true;
        double Pk = 0, Qk = 0;
        for (int i = 0; i < 3; ++i) {
            Pk += p[i];
            Qk += qs[i];
            if (P > (1 - Qk) / (1 - Pk) + 1e-12) cond = false;
        }
        bool maj = prefix_majorises(a.tilde, q, 1e-12);
        CHECK(maj == cond);
        agree += maj;
    }
    CHECK(agree > 0);
}

TEST_CASE("catalytic majorisation") {
    Vec p{0.5, 0.25, 0.25, 0}, q{0.4, 0.4, 0.1, 0.1}, c{0.6, 0.4};
    CHECK_FALSE(majorises(p, q));
    CHECK_FALSE(majorises(q, p));
    CHECK(catalyses(p, q, c));
    Vec jp = sorted_desc(tensor(p, c)), jq = sorted_desc(tensor(q, c));
    Vec wp{0.30, 0.20, 0.15, 0.15, 0.10, 0.10, 0, 0}, wq{0.24, 0.24, 0.16, 0.16, 0.06, 0.06, 0.04, 0.04};
    for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(jp[i] - wp[i]) <= 1e-12);
        CHECK(std::abs(jq[i] - wq[i]) <= 1e-12);
    }
    // system-major ordering
    CHECK(tensor(p, c)[1] == doctest::Approx(0.2));
    CHECK_FALSE(catalyses(p, q, {0.5, 0.5}));
    CHECK_FALSE(catalyses(p, q, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
    CHECK(catalyses(p, q, {1}) == majorises(p, q));
    CHECK(catalyses({0.7, 0.3}, {0.6, 0.4}, {1}));
}

TEST_CASE("no catalyst helps an incomparable qutrit pair") {
    Vec p{0.6, 0.2, 0.2}, q{0.45, 0.45, 0.1};
    REQUIRE_FALSE(majorises(p, q));
    REQUIRE_FALSE(majorises(q, p));
    const int n = 20;
    for (int a = 0; a <= n; ++a) {
        CHECK_FALSE(catalyses(p, q, {double(a) / n, 1 - double(a) / n}));
        for (int b = 0; a + b <= n; ++b) {
            Vec c{double(a) / n, double(b) / n, double(n - a - b) / n};
            CHECK_FALSE(catalyses(p, q, c));
            CHECK_FALSE(catalyses(q, p, c));
        }
    }
}

TEST_CASE("Renyi trumping witness") {
    Vec grid = renyi_grid();
    CHECK(grid.size() == 43);
    CHECK(renyi_entropy({0.5, 0.5}, 2) == doctest::Approx(std::log(2.0)));
    CHECK(renyi_entropy({0.5, 0.25, 0.25}, 0) == doctest::Approx(std::log(3.0)));
    CHECK(renyi_entropy({0.5, 0.25, 0.25}, 1 + 1e-7) == doctest::Approx(renyi_entropy({0.5, 0.25, 0.25}, 1)));

    CHECK(trumping_witness({0.6, 0.4}, {0.6, 0.4}).verdict == Verdict::Pass);
    CHECK(trumping_witness({0.7, 0.2, 0.1}, {0.5, 0.3, 0.2}).verdict == Verdict::Pass);
    CHECK(trumping_witness({0.5, 0.3, 0.2}, {0.7, 0.2, 0.1}).verdict == Verdict::Fail);
    // target with a vanishing entry cannot be decided by the positive orders alone
    auto z = trumping_witness({0.7, 0.3, 0}, {0.5, 0.5, 0});
    CHECK(z.verdict == Verdict::Inconclusive);
    CHECK(trumping_witness({0.5, 0.25, 0.25, 0}, {0.4, 0.4, 0.1, 0.1}).verdict == Verdict::Pass);
    for (int k = 0; k < 300; ++k) {
        Vec p = sample_simplex(4, 91, k), q = sample_simplex(4, 92, k);
        if (majorises(p, q)) CHECK(trumping_witness(p, q).verdict != Verdict::Fail);
        if (trumping_witness(p, q).verdict == Verdict::Fail) CHECK_FALSE(majorises(p, q));
    }
}
