#pragma once

#include "thermocone/core.hpp"
#include "thermocone/special.hpp"

namespace tc {

struct JointState {
    Vec entries;  // index s*N + m
    std::size_t d = 0, N = 0;

    static JointState product(const Vec& p, std::size_t N);  // p with uniform memory
    Vec system() const;
    Vec memory() const;
    void thermalise_memory();
};

Vec two_level_thermalise(Vec s, std::size_t i, std::size_t j, double lambda, double gi, double gj);
Vec two_level_thermalise(const Vec& p, std::size_t i, std::size_t j, double lambda, const GibbsContext& ctx);
JointState two_level_thermalise(JointState r, std::size_t i, std::size_t j, double lambda, const GibbsContext& ctx);

Matrix beta_swap_matrix(double Ei, double Ej, double beta);
Vec beta_swapped(const Vec& p, std::size_t i, std::size_t j, const GibbsContext& ctx);

enum class Variant { Full, Truncated };

struct ProtocolRun {
    Vec system;
    Vec memory;         // after the variant's final step
    Vec memory_before;  // before any final memory thermalisation
    JointState joint;   // before any final memory thermalisation
    std::vector<Vec> log;          // system marginal after each round
    std::vector<double> free_energy;  // D(r || gamma x eta) after every step, when requested
};

// role of each level in a two-level swap: low keeps the larger Gibbs weight, pivot is thermalised round by round
struct SwapRoles {
    std::size_t low, pivot;
};
SwapRoles swap_roles(const Vec& p, std::size_t i, std::size_t j, const GibbsContext& ctx);

// N rounds of N unit-strength thermalisations on an existing joint state
void swap_rounds(JointState& r, std::size_t i, std::size_t j, const GibbsContext& ctx,
                 std::vector<Vec>* log = nullptr, std::vector<double>* free_energy = nullptr);

ProtocolRun run_beta_swap_protocol(const Vec& p, std::size_t i, std::size_t j, std::size_t N,
                                   const GibbsContext& ctx, Variant variant, bool record_free_energy = false);

// entries of the joint state during a two-level swap; b, c are initial joint entries, G12 > 0 the low-level weight
double closed_form_b(double b, double c, int k, int j, double G12);
double closed_form_c(double b, double c, int N, int j, double G12);

struct Convergence {
    double E = 0, F = 0;
    Vec q;                   // predicted final pair
    double distance = 0;     // exact, from q
    double predicted = 0;    // leading-order asymptotic distance
};
// pair = (population of low level, population of pivot level)
Convergence convergence_functions(const Vec& pair, double G12, int N);

struct Transposition {
    std::size_t i, j;
};
struct ProtocolSpec {
    Order target;  // level order of the target extreme point
    std::vector<Transposition> swaps;
    std::size_t N = 1;
    Variant variant = Variant::Full;
};

// adjacent transpositions taking the beta-order of p to the target order
std::vector<Transposition> decompose(const Vec& p, const GibbsContext& ctx, const Order& target);

struct ComposeResult {
    Vec system;
    Vec target;
    double distance = 0;
};
ComposeResult compose_protocol(const ProtocolSpec& spec, const Vec& p, const GibbsContext& ctx);

// correction term of a sequence of transpositions at infinite temperature
Vec correction_apply(const std::vector<Transposition>& swaps, const Vec& p);

struct WorkResult {
    double eps_N = 1;
    double eps_TO = 1;
    Order target;
};
// failure probability of lifting a two-level battery by W
double battery_error(const Vec& joint, const GibbsContext& joint_ctx, double gB1);
WorkResult work_extraction_with_memory(const Vec& p, const GibbsContext& ctx, double W, std::size_t N);

struct Cooling {
    Vec q, gamma_s, simulated;
    double distance = 0, simulated_distance = 0;
};
Cooling cooling_with_memory(double ES, double EM, double beta);

}  // namespace tc
