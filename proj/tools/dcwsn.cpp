// Command-line front end: deployment generation, connection-probability
// oracles, radius formulas, reference-table reproduction, connectivity
// sweeps, routing/power runs and the deterministic family search.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "dcwsn/dcwsn.hpp"

using namespace dcwsn;

namespace {

// stdout by default, file with --out; an unopenable path is an I/O error
class OutStream {
public:
    explicit OutStream(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::ios_base::failure("cannot open output file: " + path);
        }
    }
    std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

struct GlobalOpts {
    std::uint64_t seed = 1;
    std::uint32_t reps = 5;
    std::string out;
    bool full = false;
};

std::vector<std::uint64_t> default_ns(bool full) {
    if (full) return {100000, 200000, 400000, 600000, 800000, 1000000};
    return {100000, 200000};
}

void cmd_gen(const GlobalOpts& g, std::uint32_t n, double wedge, bool polar,
             const std::string& scheme, double delta, std::uint32_t L, bool fix_d,
             std::uint32_t d, const std::string& radius_kind, const std::string& cn,
             const std::string& edges_out, bool stats) {
    Deployment dep = sample_uniform_disk(
        n, g.seed, wedge, polar ? DiskSampler::Polar : DiskSampler::Wedge);
    OutStream out(g.out);
    if (scheme.empty()) {
        write_deployment_csv(dep, out.get());
        return;
    }
    SchemeKind kind = parse_scheme(scheme);
    std::uint32_t Lr = L, dr = d;
    if (fix_d) Lr = static_cast<std::uint32_t>(std::ceil(d / delta));
    else dr = d_from_delta(delta, L);
    CnPreset preset = CnPreset::parse(cn);
    double r = radius_for(kind, parse_radius_kind(radius_kind), n, delta, Lr, dr, preset);
    Pcg32 sched_rng(g.seed, 1);
    std::vector<Schedule> schedules;
    for (std::size_t i = 0; i < dep.size(); ++i)
        schedules.push_back(kind == SchemeKind::Contiguous
                                ? gen_contiguous(Lr, dr, sched_rng)
                                : gen_random_selection(Lr, dr, sched_rng));
    SpatialIndex idx(dep);
    DCGraph graph = build_dc_graph(dep, schedules, r, idx);
    if (!edges_out.empty()) {
        std::ofstream ef(edges_out);
        if (!ef) throw std::ios_base::failure("cannot open edge file: " + edges_out);
        ef << "u,v\n";
        graph.for_each_edge([&](std::uint32_t u, std::uint32_t v) {
            ef << u << ',' << v << '\n';
        });
    }
    if (stats) {
        ComponentStats st = components(graph);
        out.get() << "component_count,largest_size,largest_fraction,"
                     "second_largest_size,isolated_count,origin_component_size\n"
                  << st.component_count << ',' << st.largest_size << ','
                  << fmt_g(st.largest_fraction) << ',' << st.second_largest_size
                  << ',' << st.isolated_count << ',' << st.origin_component_size
                  << '\n';
    } else {
        write_deployment_csv(dep, out.get());
    }
}

void cmd_gamma(const GlobalOpts& g, const std::string& model, std::uint32_t L,
               std::uint32_t d, std::uint64_t trials, std::uint32_t colors,
               std::uint32_t pool, std::uint32_t keys) {
    OutStream out(g.out);
    Pcg32 rng(g.seed);
    out.get() << "model,L,d,analytic,exact,empirical,std_err,trials\n";
    if (model == "dcc" || model == "dcr") {
        SchemeKind kind = parse_scheme(model);
        SchemeSpec spec{kind, L, d};
        auto est = gamma_empirical(spec, trials, rng);
        double exact = kind == SchemeKind::Contiguous ? gamma_contiguous(d, L)
                                                      : gamma_random_exact(d, L);
        out.get() << model << ',' << L << ',' << d << ',' << fmt_g(spec.gamma())
                  << ',' << fmt_g(exact) << ',' << fmt_g(est.p_hat) << ','
                  << fmt_g(est.std_err) << ',' << trials << '\n';
    } else if (model == "color") {
        ColorModel m{colors};
        auto est = gamma_empirical_vb(m, trials, rng);
        out.get() << "color," << colors << ",1," << fmt_g(m.gamma()) << ','
                  << fmt_g(m.gamma()) << ',' << fmt_g(est.p_hat) << ','
                  << fmt_g(est.std_err) << ',' << trials << '\n';
    } else if (model == "key") {
        KeyModel m{pool, keys};
        auto est = gamma_empirical_vb(m, trials, rng);
        out.get() << "key," << pool << ',' << keys << ',' << fmt_g(m.gamma()) << ','
                  << fmt_g(m.gamma()) << ',' << fmt_g(est.p_hat) << ','
                  << fmt_g(est.std_err) << ',' << trials << '\n';
    } else {
        throw std::invalid_argument("unknown model: " + model);
    }
}

void cmd_radius(const GlobalOpts& g, const std::string& formula, std::uint64_t n,
                double delta, std::uint32_t L, std::uint32_t d,
                const std::string& cn_name) {
    OutStream out(g.out);
    CnPreset cn = CnPreset::parse(cn_name);
    double r = 0.0;
    if (formula == "rgg") r = rgg_radius(n, cn);
    else if (formula == "weak") r = weak_radius(n, delta, cn);
    else if (formula == "optimal-dcc") r = optimal_dcc_radius(n, delta, L, cn);
    else if (formula == "optimal-dcr") r = optimal_dcr_radius(n, delta, d, cn);
    else throw std::invalid_argument("unknown formula: " + formula);
    double weak = weak_radius(n, delta, cn);
    double rgg = rgg_radius(n, cn);
    out.get() << "formula,n,delta,L,d,cn,radius,ratio_weak_over_opt,"
                 "ratio_opt_over_rgg\n"
              << formula << ',' << n << ',' << fmt_g(delta) << ',' << L << ',' << d
              << ',' << cn.name() << ',' << fmt_g(r) << ',' << fmt_g(weak / r) << ','
              << fmt_g(r / rgg) << '\n';
}

void cmd_tables(const GlobalOpts& g) {
    OutStream out(g.out);
    TablesReport rep = reproduce_tables();
    out.get() << rep.text;
    out.get() << "# max diff excluding documented anomalies: "
              << fmt_g(rep.max_diff_regular) << '\n';
}

void cmd_sweep(const GlobalOpts& g, ExperimentConfig cfg, bool cn_mode) {
    cfg.seed = g.seed;
    cfg.repetitions = g.reps;
    if (g.full) cfg.ns = default_ns(true);
    if (!g.out.empty()) cfg.out = g.out;
    auto rows = cn_mode ? run_cn_sweep(cfg) : run_component_sweep(cfg);
    OutStream out(cfg.out);
    write_rows_csv(out.get(), rows);
}

void cmd_route(const GlobalOpts& g, std::uint64_t n, double delta, std::uint32_t L,
               std::uint64_t max_slots, double sd_distance, bool power_csv) {
    PowerProfile profile = default_power_profile();
    OutStream out(g.out);
    if (power_csv)
        out.get() << "scheme,radius_kind,tx_only,operational,total\n";
    else
        out.get() << "n,scheme,radius_kind,relax,delivered,hops,slots,n_prime,"
                     "total_tx_slots\n";
    std::uint32_t d = d_from_delta(delta, L);
    std::uint64_t row_index = 0;
    for (const auto& sc : default_routing_scenarios()) {
        std::vector<RoutingTrialResult> trials(g.reps);
        parallel_trials(g.reps, [&](std::uint32_t t) {
            trials[t] =
                run_routing_trial(sc, n, delta, L, d, CnPreset::loglog(), sd_distance,
                                  max_slots, substream(g.seed, row_index, t), profile);
        });
        for (const auto& tr : trials) {
            if (power_csv) {
                out.get() << sc.name << ',' << radius_kind_name(sc.radius) << ','
                          << fmt_g(tr.tx_only) << ',' << fmt_g(tr.operational) << ','
                          << fmt_g(tr.total_power) << '\n';
            } else {
                out.get() << n << ',' << sc.name << ','
                          << radius_kind_name(sc.radius) << ','
                          << fmt_g(tr.relax_used) << ','
                          << (tr.delivered ? 1 : 0) << ',' << tr.hops << ','
                          << tr.slots << ',' << tr.n_prime << ','
                          << tr.total_tx_slots << '\n';
            }
        }
        ++row_index;
    }
}

void cmd_detsched(const GlobalOpts& g, std::uint32_t L, std::uint32_t d,
                  std::uint32_t k, std::uint64_t max_attempts, bool overlap_only,
                  bool verify) {
    OutStream out(g.out);
    if (k == 0) k = default_family_k(L);
    Pcg32 rng(g.seed);
    auto rep = search_family(L, d, k, max_attempts, rng,
                             overlap_only ? FamilyRequirement::OverlapOnly
                                          : FamilyRequirement::OverlapAndCoverage);
    out.get() << "attempts," << rep.attempts << "\n"
              << "pairwise_failures," << rep.pairwise_failures << "\n"
              << "coverage_failures," << rep.coverage_failures << "\n"
              << "found," << (rep.found() ? 1 : 0) << "\n";
    if (rep.found()) {
        for (const auto& s : rep.family->schedules)
            out.get() << "schedule," << s.to_string() << '\n';
        if (verify) {
            auto chk = check_family(rep.family->schedules);
            out.get() << "verify_pairwise_overlap," << (chk.pairwise_overlap ? 1 : 0)
                      << "\nverify_full_coverage," << (chk.full_coverage ? 1 : 0)
                      << '\n';
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"duty-cycled wireless sensor network connectivity simulator"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--reps", g.reps, "repetitions per configuration");
    app.add_option("--out", g.out, "output file (default stdout)");
    app.add_flag("--full", g.full, "paper-scale n grid (slow)");

    // gen
    auto* gen = app.add_subcommand("gen", "deployment generation and graph export");
    std::uint32_t gen_n = 1000;
    double gen_wedge = kDefaultWedgeAngle;
    bool gen_polar = false, gen_stats = false, gen_fixd = false;
    std::string gen_scheme, gen_radius = "weak", gen_cn = "loglog", gen_edges;
    double gen_delta = 0.05;
    std::uint32_t gen_L = 100, gen_d = 5;
    gen->add_option("--n", gen_n, "points (origin is added)")->required();
    gen->add_option("--wedge-angle", gen_wedge, "triangle wedge angle");
    gen->add_flag("--polar", gen_polar, "exact polar sampler instead of the wedge");
    gen->add_option("--scheme", gen_scheme, "dcc|dcr: also build the graph");
    gen->add_option("--delta", gen_delta, "duty-cycle ratio");
    gen->add_option("--L", gen_L, "cycle length");
    gen->add_option("--d", gen_d, "awake slots");
    gen->add_flag("--fix-d", gen_fixd, "derive L from d/delta");
    gen->add_option("--radius", gen_radius, "rgg|weak|optimal");
    gen->add_option("--cn", gen_cn, "c(n) preset");
    gen->add_option("--edges-out", gen_edges, "edge list CSV path");
    gen->add_flag("--stats", gen_stats, "print component stats row");

    // gamma
    auto* gam = app.add_subcommand("gamma", "connection probability oracles");
    std::string gam_model = "dcc";
    std::uint32_t gam_L = 100, gam_d = 5, gam_colors = 3, gam_pool = 100,
                  gam_keys = 5;
    std::uint64_t gam_trials = 1000000;
    gam->add_option("--model", gam_model, "dcc|dcr|color|key");
    gam->add_option("--L", gam_L, "cycle length");
    gam->add_option("--d", gam_d, "awake slots");
    gam->add_option("--trials", gam_trials, "Monte Carlo pairs");
    gam->add_option("--colors", gam_colors, "colors for the color model");
    gam->add_option("--pool", gam_pool, "key pool size");
    gam->add_option("--keys", gam_keys, "keys per node");

    // radius
    auto* rad = app.add_subcommand("radius", "closed-form radii");
    std::string rad_formula = "weak", rad_cn = "loglog";
    std::uint64_t rad_n = 200000;
    double rad_delta = 0.05;
    std::uint32_t rad_L = 100, rad_d = 5;
    rad->add_option("--formula", rad_formula,
                    "rgg|weak|optimal-dcc|optimal-dcr");
    rad->add_option("--n", rad_n, "node count");
    rad->add_option("--delta", rad_delta, "duty-cycle ratio");
    rad->add_option("--L", rad_L, "cycle length");
    rad->add_option("--d", rad_d, "awake slots");
    rad->add_option("--cn", rad_cn, "c(n) preset");

    // tables
    auto* tab = app.add_subcommand("tables", "reproduce the reference ratio tables");

    // sweep / cn-sweep
    auto* swp = app.add_subcommand("sweep", "largest-component sweep");
    auto* cns = app.add_subcommand("cn-sweep", "necessity sweep over c(n) presets");
    std::string swp_config, cns_config;
    std::string swp_scheme = "dcc", swp_radius = "weak", swp_cn = "loglog";
    std::string cns_scheme = "dcc", cns_radius = "optimal",
                cns_cn = "const:1,const:-1,neg_loglog,neg_loglog_sq";
    std::vector<std::uint64_t> swp_ns, cns_ns;
    std::vector<double> swp_deltas, cns_deltas;
    std::uint32_t swp_L = 100, cns_L = 100;
    bool swp_fixd = false, cns_fixd = false;
    swp->add_option("--config", swp_config, "key=value config file");
    swp->add_option("--scheme", swp_scheme, "dcc|dcr");
    swp->add_option("--radius", swp_radius, "rgg|weak|optimal");
    swp->add_option("--cn", swp_cn, "c(n) preset");
    swp->add_option("--n", swp_ns, "node counts");
    swp->add_option("--delta", swp_deltas, "duty-cycle ratios");
    swp->add_option("--L", swp_L, "cycle length");
    swp->add_flag("--fix-d", swp_fixd, "derive L from d/delta");
    cns->add_option("--config", cns_config, "key=value config file");
    cns->add_option("--scheme", cns_scheme, "dcc|dcr");
    cns->add_option("--radius", cns_radius, "rgg|weak|optimal");
    cns->add_option("--cn", cns_cn, "comma list of c(n) presets");
    cns->add_option("--n", cns_ns, "node counts");
    cns->add_option("--delta", cns_deltas, "duty-cycle ratios");
    cns->add_option("--L", cns_L, "cycle length");
    cns->add_flag("--fix-d", cns_fixd, "derive L from d/delta");

    // route / power
    auto* rte = app.add_subcommand("route", "Send(M,S,D) runs over the scenarios");
    auto* pwr = app.add_subcommand("power", "per-run power accounting");
    std::uint64_t rte_n = 200000, rte_slots = 5000;
    double rte_delta = 0.05, rte_sd = 0.1;
    std::uint32_t rte_L = 100;
    for (auto* sub : {rte, pwr}) {
        sub->add_option("--n", rte_n, "node count");
        sub->add_option("--delta", rte_delta, "duty-cycle ratio");
        sub->add_option("--L", rte_L, "cycle length");
        sub->add_option("--max-slots", rte_slots, "timeout horizon");
        sub->add_option("--sd-distance", rte_sd, "source-destination distance");
    }

    // detsched
    auto* det = app.add_subcommand("detsched", "minimum-radius family search");
    std::uint32_t det_L = 600, det_d = 30, det_k = 0;
    std::uint64_t det_attempts = 1000;
    bool det_overlap_only = false, det_verify = false;
    det->add_option("--L", det_L, "cycle length");
    det->add_option("--d", det_d, "awake slots");
    det->add_option("--k", det_k, "family size (0 = ceil(2 ln L))");
    det->add_option("--max-attempts", det_attempts, "sampling budget");
    det->add_flag("--overlap-only", det_overlap_only,
                  "accept families on pairwise overlap alone");
    det->add_flag("--verify", det_verify, "re-run the family check on the result");

    // lets --seed/--reps/--out/--full appear after the subcommand too
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            cmd_gen(g, gen_n, gen_wedge, gen_polar, gen_scheme, gen_delta, gen_L,
                    gen_fixd, gen_d, gen_radius, gen_cn, gen_edges, gen_stats);
        else if (gam->parsed())
            cmd_gamma(g, gam_model, gam_L, gam_d, gam_trials, gam_colors, gam_pool,
                      gam_keys);
        else if (rad->parsed())
            cmd_radius(g, rad_formula, rad_n, rad_delta, rad_L, rad_d, rad_cn);
        else if (tab->parsed())
            cmd_tables(g);
        else if (swp->parsed() || cns->parsed()) {
            bool cn_mode = cns->parsed();
            const std::string& config = cn_mode ? cns_config : swp_config;
            ExperimentConfig cfg;
            if (!config.empty()) cfg = load_config_file(config);
            CLI::App* sub = cn_mode ? cns : swp;
            std::map<std::string, std::string> kv;
            auto override_if = [&](const std::string& flag, const std::string& key,
                                   const std::string& val) {
                if (sub->get_option(flag)->count() > 0 || config.empty())
                    kv[key] = val;
            };
            override_if("--scheme", "scheme", cn_mode ? cns_scheme : swp_scheme);
            override_if("--radius", "radius", cn_mode ? cns_radius : swp_radius);
            override_if("--cn", "cn", cn_mode ? cns_cn : swp_cn);
            apply_config_kv(cfg, kv);
            const auto& ns = cn_mode ? cns_ns : swp_ns;
            const auto& deltas = cn_mode ? cns_deltas : swp_deltas;
            if (!ns.empty()) cfg.ns = ns;
            else if (config.empty()) cfg.ns = default_ns(g.full);
            if (!deltas.empty()) cfg.deltas = deltas;
            if (sub->get_option("--L")->count() > 0) cfg.L = cn_mode ? cns_L : swp_L;
            if (sub->get_option("--fix-d")->count() > 0)
                cfg.fix_d = cn_mode ? cns_fixd : swp_fixd;
            cmd_sweep(g, cfg, cn_mode);
        } else if (rte->parsed() || pwr->parsed()) {
            cmd_route(g, rte_n, rte_delta, rte_L, rte_slots, rte_sd, pwr->parsed());
        } else if (det->parsed()) {
            cmd_detsched(g, det_L, det_d, det_k, det_attempts, det_overlap_only,
                         det_verify);
        }
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
