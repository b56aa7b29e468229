#pragma once

namespace tc {

struct QubitState {
    double x = 0, y = 0, z = 0;

    static QubitState from_population(double ground, double coherence) { return {2 * coherence, 0, 2 * ground - 1}; }
    double ground() const { return (1 + z) / 2; }
    double coherence() const;  // modulus of the off-diagonal element
};

// thermal-operation cone of a qubit with ground population p and real coherence c, thermal ground weight g
struct CoherentTO {
    double p, c, g;

    CoherentTO(double p, double c, double g);
    double rhs(double q) const;               // largest reachable coherence at ground population q
    bool in_future(double q, double d) const;
    double swapped() const;                   // incoherent beta-swap of p
    double q1(double d) const;                // future boundary
    double q2(double d) const;                // boundary of the states that reach (p, c); NaN if absent
    double q1_stated(double d) const;
    double q2_stated(double d) const;
    double d_cross() const;                   // q1 meets the pure-state boundary
};

struct GPCones {
    double R_plus, R_minus;
    double R1, R2;  // disk radii
    double z1, z2;  // disk centres on the z axis
};
double gp_delta(const QubitState& s, double zeta);
GPCones gp_qubit_cones(const QubitState& s, double zeta);
bool gp_reachable(const QubitState& from, const QubitState& to, double zeta);
bool in_gp_disks(const GPCones& c, const QubitState& s, double zeta);

}  // namespace tc
