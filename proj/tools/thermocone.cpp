#include "thermocone/cones.hpp"
#include "thermocone/core.hpp"
#include "thermocone/distillation.hpp"
#include "thermocone/jc.hpp"
#include "thermocone/memtp.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

using json = nlohmann::ordered_json;

namespace {

constexpr const char* version = "0.1.0";

struct Infeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double num(double x) {
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::stod(buf);
}

json num(const tc::Vec& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

tc::Vec checked_state(tc::Vec p) {
    if (p.empty()) throw std::invalid_argument("empty state");
    double s = 0;
    for (double x : p) {
        if (!(x >= 0)) throw std::invalid_argument("state has a negative or non-finite entry");
        s += x;
    }
    if (std::abs(s - 1) > 1e-9) throw std::invalid_argument("state is not normalised (sum " + fmt(s) + ")");
    if (std::abs(s - 1) > 1e-14) {
        std::cerr << "warning: renormalising state with sum " << fmt(s) << "\n";
        for (double& x : p) x /= s;
    }
    return p;
}

struct Options {
    std::string out, format = "json", config;
    unsigned threads = 0;
    std::uint64_t seed = 12345;
    tc::Vec p, energies, gamma;
    double beta = 0;
};

tc::GibbsContext context(const Options& o, std::size_t d) {
    if (!o.gamma.empty()) {
        if (o.gamma.size() != d) throw std::invalid_argument("gamma and state differ in dimension");
        return tc::GibbsContext::from_gamma(checked_state(o.gamma));
    }
    tc::Vec e = o.energies.empty() ? tc::Vec(d, 0.0) : o.energies;
    if (e.size() != d) throw std::invalid_argument("energies and state differ in dimension");
    return tc::GibbsContext::thermal(e, o.beta);
}

// options of the run, excluding plumbing that does not affect results
std::string spec_string(const CLI::App& app) {
    std::string s;
    auto add = [&](const CLI::App* a, const std::string& prefix) {
        for (const CLI::Option* opt : a->get_options()) {
            std::string name = opt->get_single_name();
            if (name == "help" || name == "config" || name == "out" || name == "threads" || name == "wigner-out") continue;
            std::string v;
            if (opt->count() > 0) {
                for (auto& r : opt->results()) v += (v.empty() ? "" : ",") + r;
            } else {
                v = opt->get_default_str();
            }
            s += prefix + name + "=" + v + "\n";
        }
    };
    add(&app, "");
    for (const CLI::App* sub : app.get_subcommands()) add(sub, sub->get_name() + ".");
    return s;
}

class Output {
public:
    Output(const Options& o, const CLI::App& app) : o_(o) {
        std::string spec = spec_string(app);
        header_ = {{"tool", "thermocone"}, {"version", version}, {"seed", o.seed}, {"spec", spec}};
        for (auto& c : spec)
            if (c == '\n') c = ';';
        csv_header_ = std::string("# thermocone ") + version + " seed=" + std::to_string(o.seed) + " spec=" + spec;
    }

    void json_doc(json body) const {
        json doc{{"header", header_}};
        for (auto& [k, v] : body.items()) doc[k] = v;
        write(doc.dump(2) + "\n");
    }

    void csv(const std::vector<std::string>& cols, const std::vector<std::vector<double>>& rows) const {
        std::ostringstream s;
        s << csv_header_ << "\n";
        for (std::size_t i = 0; i < cols.size(); ++i) s << (i ? "," : "") << cols[i];
        s << "\n";
        for (auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << fmt(r[i]);
            s << "\n";
        }
        write(s.str());
    }

    bool wants_csv() const { return o_.format == "csv"; }
    bool to_stdout() const { return o_.out.empty(); }

private:
    void write(const std::string& text) const {
        if (o_.out.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(o_.out);
        if (!f) throw std::runtime_error("cannot open " + o_.out);
        f << text;
    }
    const Options& o_;
    json header_;
    std::string csv_header_;
};

json volumes_json(const tc::Volumes& v) {
    return {{"plus", num(v.plus)},          {"empty", num(v.empty)},       {"minus", num(v.minus)},
            {"se_plus", num(v.se_plus)},    {"se_empty", num(v.se_empty)}, {"se_minus", num(v.se_minus)},
            {"samples", v.samples},         {"seed", v.seed}};
}

json volumes_block(const tc::Vec& p, const tc::GibbsContext& ctx, std::size_t samples, const Options& o) {
    json j;
    if (p.size() == 3 && ctx.beta == 0) j["closed_form"] = volumes_json(tc::cone_volumes_closed_form(p, ctx));
    if (samples > 0) j["monte_carlo"] = volumes_json(tc::cone_volumes_mc(p, ctx, samples, o.seed, o.threads));
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermal cones, majorisation and catalysis toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    Options o;
    app.set_config("--config", "", "TOML experiment spec");
    app.add_option("--out", o.out, "output file (stdout when empty)");
    app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", o.threads, "worker threads, 0 for all cores");
    app.add_option("--seed", o.seed, "random seed")->envname("THERMOCONE_SEED");

    auto state_opts = [&](CLI::App* s, bool need_p) {
        auto* opt = s->add_option("--p", o.p, "state, comma separated")->delimiter(',');
        if (need_p) opt->required();
        s->add_option("--energies", o.energies, "energy levels")->delimiter(',');
        s->add_option("--gamma", o.gamma, "Gibbs distribution (instead of energies)")->delimiter(',');
        s->add_option("--beta", o.beta, "inverse temperature")->check(CLI::NonNegativeNumber);
    };

    auto* curve = app.add_subcommand("curve", "thermomajorisation curve of a state");
    state_opts(curve, true);

    std::size_t samples = 100000;
    auto* cones = app.add_subcommand("cones", "future extreme points, tangent vectors and cone volumes");
    state_opts(cones, true);
    cones->add_option("--samples", samples, "Monte Carlo samples");

    auto* volume = app.add_subcommand("volume", "volumes of the thermal cones");
    state_opts(volume, true);
    volume->add_option("--samples", samples, "Monte Carlo samples");

    std::size_t d = 0, N = 1, lvl_i = 0, lvl_j = 1;
    std::string variant = "full";
    auto* memtp = app.add_subcommand("memtp", "memory-assisted beta-swap protocol");
    state_opts(memtp, true);
    memtp->add_option("--d", d, "system dimension (checked against the state)");
    memtp->add_option("--N", N, "memory size")->check(CLI::PositiveNumber);
    memtp->add_option("--i", lvl_i, "first level");
    memtp->add_option("--j", lvl_j, "second level");
    memtp->add_option("--variant", variant)->check(CLI::IsMember({"full", "truncated"}));

    bool landauer = false;
    double eps = 0;
    std::size_t bits = 0, copies = 1;
    std::vector<double> work;
    auto* distill = app.add_subcommand("distill", "exact work and error in single-shot distillation");
    state_opts(distill, false);
    distill->add_flag("--landauer", landauer, "cost of erasing one bit");
    distill->add_option("--bits", bits, "erase this many unknown bits");
    distill->add_option("--epsilon", eps, "allowed error")->check(CLI::Range(0.0, 1.0));
    distill->add_option("--copies", copies, "identical copies of the state");
    distill->add_option("--work", work, "battery charges for an error curve")->delimiter(',');

    double alpha = 1 / std::sqrt(2.0), omega = 2 * M_PI, g = M_PI;
    std::vector<double> taus, tau_range;
    int nmax = 0;
    std::string witness = "g2", wigner_out;
    auto* cat = app.add_subcommand("catalysis", "catalytic atom for a coherent cavity");
    cat->add_option("--alpha", alpha, "coherent amplitude");
    cat->add_option("--omega", omega, "frequency");
    cat->add_option("--g", g, "coupling")->check(CLI::NonNegativeNumber);
    cat->add_option("--tau", taus, "interaction times")->delimiter(',');
    cat->add_option("--tau-range", tau_range, "start,stop,step")->delimiter(',')->expected(3);
    cat->add_option("--nmax", nmax, "Fock cutoff, default from the amplitude");
    cat->add_option("--witness", witness)->check(CLI::IsMember({"g2", "xi", "wln"}));
    cat->add_option("--wigner-out", wigner_out, "CSV of the Wigner field (x,p,W) at the first catalytic time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        Output out(o, app);
        if (curve->parsed() || cones->parsed() || volume->parsed() || memtp->parsed() ||
            (distill->parsed() && !o.p.empty()))
            o.p = checked_state(o.p);

        if (curve->parsed()) {
            auto ctx = context(o, o.p.size());
            auto c = tc::thermo_curve(o.p, ctx);
            std::vector<std::vector<double>> rows;
            json el = json::array();
            for (auto& pt : c.elbows) {
                rows.push_back({pt.x, pt.y});
                el.push_back({num(pt.x), num(pt.y)});
            }
            if (out.wants_csv())
                out.csv({"x", "y"}, rows);
            else
                out.json_doc({{"p", num(o.p)}, {"gamma", num(ctx.gamma)}, {"elbows", el}});
        } else if (cones->parsed() || volume->parsed()) {
            auto ctx = context(o, o.p.size());
            json body{{"p", num(o.p)}, {"gamma", num(ctx.gamma)}, {"beta", num(ctx.beta)}};
            if (cones->parsed()) {
                json ex = json::array();
                for (auto& e : tc::future_extremes(o.p, ctx)) ex.push_back({{"order", e.order}, {"point", num(e.point)}});
                body["future_extremes"] = ex;
                auto tv = ctx.beta == 0 ? tc::tangent_vectors_zero_beta(o.p)
                                        : tc::tangent_vectors_thermal(o.p, ctx, tc::beta_order(o.p, ctx).perm);
                json t = json::array();
                for (auto& v : tv) t.push_back(num(v));
                body["tangent_vectors"] = t;
            }
            body["volumes"] = volumes_block(o.p, ctx, samples, o);
            out.json_doc(body);
        } else if (memtp->parsed()) {
            if (d != 0 && d != o.p.size()) throw std::invalid_argument("--d does not match the state");
            auto ctx = context(o, o.p.size());
            auto run = tc::run_beta_swap_protocol(o.p, lvl_i, lvl_j, N, ctx,
                                                  variant == "full" ? tc::Variant::Full : tc::Variant::Truncated);
            if (out.wants_csv()) {
                std::vector<std::string> cols{"round"};
                for (std::size_t k = 0; k < o.p.size(); ++k) cols.push_back("p" + std::to_string(k));
                std::vector<std::vector<double>> rows;
                for (std::size_t r = 0; r < run.log.size(); ++r) {
                    rows.push_back({double(r + 1)});
                    rows.back().insert(rows.back().end(), run.log[r].begin(), run.log[r].end());
                }
                out.csv(cols, rows);
            } else {
                json log = json::array();
                for (auto& v : run.log) log.push_back(num(v));
                out.json_doc({{"p", num(o.p)},
                              {"gamma", num(ctx.gamma)},
                              {"N", N},
                              {"levels", {lvl_i, lvl_j}},
                              {"system", num(run.system)},
                              {"memory", num(run.memory)},
                              {"rounds", log}});
            }
        } else if (distill->parsed()) {
            if (o.beta <= 0) throw std::invalid_argument("distillation needs a positive beta");
            json body{{"beta", num(o.beta)}, {"epsilon", num(eps)}};
            std::string text;
            if (landauer || bits > 0) {
                std::size_t b = landauer ? 1 : bits;
                double W = tc::erasure_cost(b, o.beta, eps);
                body["bits"] = b;
                body["W"] = num(W);
                text = "W = " + fmt(W) + "\n";
            } else {
                if (o.p.empty()) throw std::invalid_argument("distill needs --p, --landauer or --bits");
                tc::Ensemble e;
                e.beta = o.beta;
                e.add(o.p, context(o, o.p.size()), copies);
                double W = tc::exact_work(e, eps);
                body["copies"] = copies;
                body["W"] = num(W);
                body["free_energy"] = num(e.free_energy());
                body["sigma"] = num(e.sigma());
                text = "W = " + fmt(W) + "\n";
                if (!work.empty()) {
                    json curve_pts = json::array();
                    std::vector<std::vector<double>> rows;
                    for (double w : work) {
                        double err = tc::work_error(e, w);
                        double asym = tc::optimal_error_asymptotic(e.free_energy() - w, e.sigma());
                        rows.push_back({w, err, asym});
                        curve_pts.push_back({{"W", num(w)}, {"error", num(err)}, {"asymptotic", num(asym)}});
                    }
                    body["curve"] = curve_pts;
                    if (out.wants_csv()) {
                        out.csv({"W", "error", "asymptotic"}, rows);
                        return 0;
                    }
                }
            }
            if (out.to_stdout() && !out.wants_csv() && work.empty())
                std::cout << text;
            else
                out.json_doc(body);
        } else if (cat->parsed()) {
            namespace jc = tc::jc;
            if (!tau_range.empty()) {
                if (!(tau_range[2] > 0) || tau_range[1] < tau_range[0]) throw std::invalid_argument("bad --tau-range");
                for (double t = tau_range[0]; t <= tau_range[1] + 1e-12; t += tau_range[2]) taus.push_back(t);
            }
            if (taus.empty()) throw std::invalid_argument("catalysis needs --tau or --tau-range");
            jc::JCParams par;
            par.omega = omega;
            par.g = g;
            par.n_max = nmax > 0 ? nmax : jc::default_cutoff(alpha * alpha);
            auto rho = jc::CavityState::coherent(alpha, par.n_max);
            auto w = witness == "g2" ? jc::Witness::G2 : witness == "xi" ? jc::Witness::Squeezing : jc::Witness::WLN;
            auto pts = jc::scan(rho, par, taus, w, o.threads);
            json arr = json::array();
            std::vector<std::vector<double>> rows;
            for (auto& pt : pts) {
                rows.push_back({pt.tau, pt.g2, pt.residual, pt.atom.q, pt.atom.r.real(), pt.atom.r.imag(), pt.witness,
                                double(pt.feasible)});
                json j{{"tau", num(pt.tau)}, {"feasible", pt.feasible}};
                if (pt.feasible)
                    j.update({{"q", num(pt.atom.q)},
                              {"r", {num(pt.atom.r.real()), num(pt.atom.r.imag())}},
                              {"residual", num(pt.residual)},
                              {"g2", num(pt.g2)},
                              {witness, num(pt.witness)}});
                arr.push_back(j);
            }
            if (out.wants_csv())
                out.csv({"t", "g2", "residual", "q", "re_r", "im_r", "witness", "feasible"}, rows);
            else
                out.json_doc({{"alpha", num(alpha)}, {"omega", num(omega)}, {"g", num(g)}, {"n_max", par.n_max}, {"points", arr}});
            if (!wigner_out.empty()) {
                auto hit = std::find_if(pts.begin(), pts.end(), [](auto& pt) { return pt.feasible; });
                if (hit == pts.end()) throw Infeasible("no catalytic time for the Wigner field");
                jc::JCParams at = par;
                at.tau = hit->tau;
                auto field = jc::wigner(jc::reduced_closed_form(rho, hit->atom, at).cavity);
                Options wo = o;
                wo.out = wigner_out;
                wo.format = "csv";
                std::vector<std::vector<double>> cells;
                for (std::size_t i = 0; i < field.axis.size(); ++i)
                    for (std::size_t j = 0; j < field.axis.size(); ++j)
                        cells.push_back({field.axis[i], field.axis[j], field.W(i, j)});
                Output(wo, app).csv({"x", "p", "W"}, cells);
            }
            if (pts.size() == 1 && !pts[0].feasible) throw Infeasible("no catalytic atom state at this time");
        }
    } catch (const Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
