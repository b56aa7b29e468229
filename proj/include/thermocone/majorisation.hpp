#pragma once

#include "thermocone/core.hpp"

#include <utility>

namespace tc {

struct ApproxResult {
    Vec optimal;  // in the index order of p
    double fidelity = 1;
    std::vector<std::pair<std::size_t, double>> segments;  // (l_j, r_j), l_j 1-based on sorted p
};

double fidelity(const Vec& p, const Vec& q);
ApproxResult approx_majorise_optimal(const Vec& p, const Vec& q);

double vidal_probability(const Vec& p, const Vec& q);

struct AuxPair {
    Vec tilde, hat;
};
AuxPair probabilistic_aux(const Vec& p, double P);

bool catalyses(const Vec& p, const Vec& q, const Vec& c, const GibbsContext& sys, const GibbsContext& cat);
bool catalyses(const Vec& p, const Vec& q, const Vec& c);

enum class Verdict { Pass, Fail, Inconclusive };
struct TrumpResult {
    Verdict verdict = Verdict::Pass;
    double alpha = 0;  // first violated order when verdict is Fail
};

Vec renyi_grid();
double renyi_entropy(const Vec& p, double alpha);
// necessary conditions only: H_alpha(p) <= H_alpha(q) on the grid
TrumpResult trumping_witness(const Vec& p, const Vec& q, const Vec& alphas = renyi_grid());

}  // namespace tc
