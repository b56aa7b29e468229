#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace tc {

using Vec = std::vector<double>;
using Order = std::vector<std::size_t>;  // position -> level
using Matrix = Eigen::MatrixXd;

inline constexpr double cmp_tol = 1e-12;
inline constexpr double embed_tol = 1e-9;
inline constexpr long embed_cap = 1000000;

struct Embedding {
    long D = 0;
    std::vector<long> counts;
    double err = 0;  // max_i |D_i/D - gamma_i|
};

// smallest D <= cap reaching tol; otherwise the best D found
Embedding rational_embedding(const Vec& gamma, double tol = embed_tol, long cap = embed_cap);

class GibbsContext {
public:
    Vec energies;
    double beta = 0;
    Vec gamma;

    GibbsContext() = default;
    static GibbsContext thermal(const Vec& energies, double beta);
    static GibbsContext from_gamma(const Vec& gamma);
    static GibbsContext uniform(std::size_t d);

    std::size_t dim() const { return gamma.size(); }
    const Embedding& embedding() const;

private:
    struct Lazy {
        std::once_flag once;
        Embedding emb;
    };
    std::shared_ptr<Lazy> lazy_ = std::make_shared<Lazy>();
};

GibbsContext tensor(const GibbsContext& a, const GibbsContext& b);
Vec tensor(const Vec& a, const Vec& b);  // system-major

void check_state(const Vec& p, double tol = 1e-12);
void check_dims(const Vec& p, const GibbsContext& ctx);
double total_variation(const Vec& a, const Vec& b);
Vec sorted_desc(Vec p);

struct BetaOrder {
    Order perm;
    Vec sorted;
};
BetaOrder beta_order(const Vec& p, const GibbsContext& ctx);

Vec embed(const Vec& p, const GibbsContext& ctx);

struct Point {
    double x, y;
};
struct ThermoCurve {
    std::vector<Point> elbows;
};

ThermoCurve thermo_curve(const Vec& p, const GibbsContext& ctx);
// curve of v walked in the given order, no sorting; v may be a quasi-probability
ThermoCurve curve_in_order(const Vec& v, const Vec& gamma, const Order& order);
double curve_value(const ThermoCurve& c, double x);
bool curve_above(const ThermoCurve& a, const ThermoCurve& b, double tol = cmp_tol);
bool thermomajorises(const Vec& p, const Vec& q, const GibbsContext& ctx);
bool majorises(const Vec& p, const Vec& q);

struct Join {
    ThermoCurve curve;
    Vec embedded;              // join of the embedded vectors
    std::optional<Vec> state;  // d-dim vector when the join curve is a curve of one
};
Join majorisation_join(const Vec& p, const Vec& q, const GibbsContext& ctx);
Vec join_flat(const Vec& p, const Vec& q);

bool is_stochastic(const Matrix& m, double tol = 1e-10);
bool is_gibbs_preserving(const Matrix& m, const GibbsContext& ctx);
Vec apply(const Matrix& m, const Vec& p);

}  // namespace tc
