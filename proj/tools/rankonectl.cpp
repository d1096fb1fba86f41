#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "rankone/config.hpp"
#include "rankone/kernels.hpp"
#include "rankone/verify.hpp"

namespace fs = std::filesystem;
using namespace rankone;

namespace {

int cmd_verify_geometry(const std::string& preset, const std::string& config_path,
                        size_t samples, uint64_t seed, const std::string& out_dir) {
    SpaceParams sp;
    if (!config_path.empty()) {
        sp = load_scenario_file(config_path).space;
    } else {
        sp = SpaceParams::preset(preset);
    }
    auto rep = run_geometry_fuzz(sp, samples, seed);

    fs::create_directories(out_dir);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 4; ++i)
        rows.push_back({static_cast<double>(i + 1), rep.worst_item[i],
                        static_cast<double>(rep.applicable[i])});
    rows.push_back({5.0, rep.worst_decom_iwas, static_cast<double>(rep.samples)});
    write_csv((fs::path(out_dir) / "geometry_slacks.csv").string(),
              "item,worst_slack,applicable_samples", rows);

    const bool ok = rep.pass();
    std::cout << (ok ? "geometry fuzz: all slacks within tolerance\n"
                     : "geometry fuzz: slack violation detected\n");
    return ok ? 0 : 1;
}

int cmd_verify_spherical(const std::string& preset, const std::string& out_dir) {
    SpaceParams sp = SpaceParams::preset(preset);
    auto rep = run_spherical_checks(sp);

    fs::create_directories(out_dir);
    std::vector<std::vector<double>> rows;
    for (double lam : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        for (int j = 1; j <= 40; ++j) {
            const double t = 0.25 * j;
            const Complex v = spherical_function(Complex(lam), t, sp);
            rows.push_back({lam, t, v.real(), v.imag()});
        }
    }
    write_csv((fs::path(out_dir) / "sph_table.csv").string(), "lambda,t,re,im", rows);

    bool ok = rep.crossover_worst < 1e-6;
    for (const auto& sv : rep.hcest) ok = ok && sv.flag == QuantityFlag::Stable;
    if (preset == "H3") ok = ok && rep.h3_oracle_max_rel < 1e-8 && rep.gamma_ones_max_dev < 1e-10;
    std::cout << "crossover mismatch: " << rep.crossover_worst << "\n";
    if (preset == "H3")
        std::cout << "closed-form oracle max rel err: " << rep.h3_oracle_max_rel << "\n";
    std::cout << (ok ? "spherical checks passed\n" : "spherical checks FAILED\n");
    return ok ? 0 : 1;
}

int cmd_synth(const std::string& config_path, const std::string& out_override) {
    ScenarioConfig cfg = load_scenario_file(config_path);
    const std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;
    MultiplierExpr m = parse_multiplier(cfg.multiplier_expr, cfg.multiplier_params);

    SynthesisOptions opts;
    opts.epsilon = cfg.kernel_epsilon;
    opts.t_max = cfg.kernel_t_max;
    opts.n_points = cfg.kernel_n_points;
    opts.series_crossover = cfg.spherical_crossover;
    opts.max_terms = cfg.spherical_max_terms;
    RadialKernel k = synthesize_kernel(m, cfg.space, opts);

    fs::create_directories(out_dir);
    std::vector<std::vector<double>> rows;
    for (size_t j = 0; j < k.grid.size(); ++j)
        rows.push_back({k.grid[j], k.values[j].real(), k.values[j].imag()});
    write_csv((fs::path(out_dir) / "kernel.csv").string(), "t,re,im", rows);
    std::cout << "kernel written (" << k.grid.size() << " samples)\n";
    return 0;
}

int cmd_certify(const std::string& config_path, uint64_t seed_override, bool seed_given,
                const std::string& out_override, double tol_override, bool tol_given) {
    ScenarioConfig cfg = load_scenario_file(config_path);
    if (seed_given) cfg.seed = seed_override;
    if (tol_given) cfg.tol_override = tol_override;
    const std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;

    MultiplierExpr m = parse_multiplier(cfg.multiplier_expr, cfg.multiplier_params);
    const Exponent p(cfg.p);
    int worst_exit = 0;
    for (size_t qi = 0; qi < cfg.q_list.size(); ++qi) {
        const Exponent q(cfg.q_list[qi]);
        auto rep = theorem_certificate(cfg.space, p, q, m,
                                       variant_from_string(cfg.variant),
                                       cfg.certificate_options());
        std::string dir = out_dir;
        if (cfg.q_list.size() > 1) dir = (fs::path(out_dir) / ("q" + std::to_string(qi))).string();
        emit_report(rep, dir);
        std::cout << "q = " << q.p << ": verdict " << rep.verdict << "\n";
        worst_exit = std::max(worst_exit, exit_code_for(rep));
    }
    return worst_exit;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank-one symmetric space multiplier toolbox"};
    app.require_subcommand(1);

    std::string preset = "H3", config_path, out_dir = ".";
    size_t samples = 100000;
    uint64_t seed = 0;
    double tol = 0.0;

    auto* geo = app.add_subcommand("verify-geometry", "fuzz the coordinate comparison bounds");
    geo->add_option("--preset", preset, "space preset (H3, H4, CH2)");
    geo->add_option("--config", config_path, "scenario config JSON");
    geo->add_option("--samples", samples, "number of fuzz samples");
    geo->add_option("--seed", seed, "rng seed");
    geo->add_option("--out", out_dir, "output directory");

    auto* sph = app.add_subcommand("verify-spherical", "cross-validate spherical evaluation");
    sph->add_option("--preset", preset, "space preset (H3, H4, CH2)");
    sph->add_option("--out", out_dir, "output directory");

    auto* synth = app.add_subcommand("synth", "synthesize a radial kernel");
    synth->add_option("--config", config_path, "scenario config JSON")->required();
    synth->add_option("--out", out_dir, "output directory override");

    auto* cert = app.add_subcommand("certify", "evaluate the multiplier certificate");
    cert->add_option("--config", config_path, "scenario config JSON")->required();
    auto* seed_opt = cert->add_option("--seed", seed, "rng seed override");
    auto* out_opt = cert->add_option("--out", out_dir, "output directory override");
    auto* tol_opt = cert->add_option("--tol", tol, "quadrature tolerance override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (geo->parsed()) return cmd_verify_geometry(preset, config_path, samples, seed, out_dir);
        if (sph->parsed()) return cmd_verify_spherical(preset, out_dir);
        if (synth->parsed()) return cmd_synth(config_path, out_dir);
        if (cert->parsed())
            return cmd_certify(config_path, seed, seed_opt->count() > 0,
                               out_opt->count() > 0 ? out_dir : "", tol, tol_opt->count() > 0);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
