#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace tc::jc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double tail_tol = 1e-10;

// density matrix on Fock levels 0..n_max
struct CavityState {
    CMatrix rho;

    int n_max() const { return int(rho.rows()) - 1; }
    double population(int n) const { return n <= n_max() ? rho(n, n).real() : 0.0; }
    cplx element(int n, int m) const { return n <= n_max() && m <= n_max() ? rho(n, m) : cplx(0); }
    double tail_mass(int width = 5) const;
    void validate(bool check_tail = true) const;

    static CavityState coherent(cplx alpha, int n_max);
    static CavityState fock(int k, int n_max);
    static CavityState diagonal(const std::vector<double>& p);
};

int default_cutoff(double alpha_abs2);

// q is the ground population, r = <g|chi|e>
struct AtomState {
    double q = 1;
    cplx r = 0;

    Eigen::Matrix2cd matrix() const;
    double excited() const { return 1 - q; }
    bool valid(double tol = 1e-12) const;
};
double trace_distance(const AtomState& a, const AtomState& b);  // trace norm of the difference

struct JCParams {
    double omega = 2 * 3.14159265358979323846, g = 3.14159265358979323846, tau = 0;
    int n_max = 20;
};

// joint basis index 2 n + a with a = 0 ground, 1 excited
CMatrix jc_unitary(const JCParams& p);
CMatrix jc_unitary_spectral(const JCParams& p);  // diagonalise the truncated Hamiltonian
CMatrix hamiltonian(const JCParams& p);

struct Reduced {
    CMatrix cavity;
    AtomState atom;
};
Reduced reduced_closed_form(const CavityState& rho, const AtomState& chi, const JCParams& p);

struct Evolution {
    CMatrix joint;
    CMatrix cavity;
    AtomState atom;
};
Evolution evolve(const CavityState& rho, const AtomState& chi, const JCParams& p, bool check_tail = true);

struct AuxTerms {
    cplx a1, a2, a3, a4;  // including the free phase factor
};
AuxTerms aux_terms(const CavityState& rho, const JCParams& p);

struct CatalystResult {
    bool feasible = false;
    AtomState atom;
    double residual = 0;  // trace norm between returned and initial atom
    std::string reason;
};
CatalystResult catalytic_atom(const CavityState& rho, const JCParams& p, bool check_tail = true);
// independent route: affine fixed point of the simulated atom map
AtomState catalytic_atom_affine(const CavityState& rho, const JCParams& p);
double incoherent_catalyst(const std::vector<double>& pops, const JCParams& p);

double mean_n(const CMatrix& rho);
double mean_n2(const CMatrix& rho);
double g2(const CMatrix& rho);
double g2_catalytic(const CavityState& rho, const AtomState& chi, const JCParams& p);
double correlation_closed_form(const CavityState& rho, const AtomState& chi, const JCParams& p);
double correlation_matrix(const CMatrix& joint);  // <n_S (x) |e><e|>
double moment_transfer_residual(const CMatrix& initial, const CMatrix& joint);

struct WignerField {
    std::vector<double> axis;
    Eigen::MatrixXd W;  // W(i, j) at (axis[i], axis[j])
    double integral = 0, wln = 0;
};
double wigner_range(int n_max);
WignerField wigner(const CMatrix& rho, double range = 0, double step = 0.05);
double squeezing_xi(const CMatrix& rho);

enum class Witness { G2, Squeezing, WLN };
struct ScanPoint {
    double tau = 0;
    bool feasible = false;
    AtomState atom;
    double residual = 0;
    double witness = 0;
    double g2 = 0;
};
std::vector<ScanPoint> scan(const CavityState& rho, JCParams base, const std::vector<double>& taus,
                            Witness w = Witness::G2, unsigned threads = 0);

}  // namespace tc::jc
