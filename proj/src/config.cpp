#include "rankone/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rankone {

using nlohmann::ordered_json;

CertificateOptions ScenarioConfig::certificate_options() const {
    CertificateOptions opts;
    opts.synth.epsilon = kernel_epsilon;
    opts.synth.t_max = kernel_t_max;
    opts.synth.n_points = kernel_n_points;
    opts.synth.series_crossover = spherical_crossover;
    opts.synth.max_terms = spherical_max_terms;
    opts.seed = seed;
    if (tol_override) opts.nbar_tol = *tol_override;
    return opts;
}

namespace {

ScenarioConfig parse_json(const ordered_json& j) {
    ScenarioConfig cfg;
    if (j.contains("space")) {
        const auto& s = j.at("space");
        if (s.is_string()) {
            cfg.space_label = s.get<std::string>();
            try {
                cfg.space = SpaceParams::preset(cfg.space_label);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what(), "space");
            }
        } else if (s.is_object()) {
            if (!s.contains("m_alpha")) throw ConfigError("space.m_alpha missing", "space.m_alpha");
            const int ma = s.at("m_alpha").get<int>();
            const int m2a = s.value("m_2alpha", 0);
            try {
                cfg.space = SpaceParams(ma, m2a);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what(), "space");
            }
            cfg.space_label = "(" + std::to_string(ma) + "," + std::to_string(m2a) + ")";
        } else {
            throw ConfigError("space must be a preset name or {m_alpha, m_2alpha}", "space");
        }
    }
    if (j.contains("p")) cfg.p = j.at("p").get<double>();
    if (!(cfg.p > 1.0) || !std::isfinite(cfg.p))
        throw ConfigError("p must lie in (1, inf)", "p");

    if (j.contains("q")) {
        cfg.q_list.clear();
        if (j.at("q").is_array())
            for (const auto& v : j.at("q")) cfg.q_list.push_back(v.get<double>());
        else
            cfg.q_list = {j.at("q").get<double>()};
    }
    const double pprime = cfg.p / (cfg.p - 1.0);
    for (double q : cfg.q_list) {
        if (!(q >= std::min(cfg.p, pprime) - 1e-12) || !(q <= std::max(cfg.p, pprime) + 1e-12))
            throw ConfigError("q = " + std::to_string(q) + " outside [p, p']", "q");
    }

    if (j.contains("multiplier")) {
        const auto& m = j.at("multiplier");
        if (!m.contains("expr")) throw ConfigError("multiplier.expr missing", "multiplier.expr");
        cfg.multiplier_expr = m.at("expr").get<std::string>();
        if (m.contains("params"))
            for (const auto& [key, val] : m.at("params").items())
                cfg.multiplier_params[key] = val.get<double>();
    }
    if (j.contains("variant")) {
        cfg.variant = j.at("variant").get<std::string>();
        if (cfg.variant != "main" && cfg.variant != "main_i")
            throw ConfigError("variant must be 'main' or 'main_i'", "variant");
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();

    if (j.contains("kernel")) {
        const auto& k = j.at("kernel");
        cfg.kernel_epsilon = k.value("epsilon", cfg.kernel_epsilon);
        cfg.kernel_t_max = k.value("t_max", cfg.kernel_t_max);
        cfg.kernel_n_points = k.value("n_points", cfg.kernel_n_points);
        if (!(cfg.kernel_epsilon > 0.0)) throw ConfigError("kernel.epsilon must be > 0", "kernel.epsilon");
        if (cfg.kernel_n_points < 16) throw ConfigError("kernel.n_points too small", "kernel.n_points");
    }
    if (j.contains("spherical")) {
        const auto& s = j.at("spherical");
        cfg.spherical_crossover = s.value("crossover", cfg.spherical_crossover);
        cfg.spherical_max_terms = s.value("max_terms", cfg.spherical_max_terms);
        if (!(cfg.spherical_crossover > 0.0 && cfg.spherical_crossover <= 1.0))
            throw ConfigError("spherical.crossover must lie in (0, 1]", "spherical.crossover");
    }
    if (j.contains("tol")) cfg.tol_override = j.at("tol").get<double>();
    return cfg;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

} // namespace

ScenarioConfig load_scenario(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what(), "<root>");
    }
    return parse_json(j);
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path, "<file>");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

std::string certificate_to_json(const CertificateReport& rep) {
    ordered_json j;
    j["space"] = {{"m_alpha", rep.sp.m_alpha}, {"m_2alpha", rep.sp.m_2alpha}};
    j["p"] = rep.p;
    j["q"] = rep.q;
    j["variant"] = to_string(rep.variant);
    j["multiplier"] = rep.multiplier;
    j["seed"] = rep.seed;
    j["epsilon"] = rep.epsilon;
    ordered_json gates = ordered_json::object();
    for (const auto& [name, g] : rep.gates) {
        ordered_json gj;
        gj["pass"] = g.pass;
        if (!g.detail.empty()) gj["detail"] = g.detail;
        gates[name] = gj;
    }
    j["gates"] = gates;
    ordered_json quants = ordered_json::object();
    for (const auto& [name, q] : rep.quantities) {
        ordered_json qj;
        if (std::isfinite(q.value)) qj["value"] = q.value;
        else qj["value"] = format_double(q.value);
        qj["flag"] = to_string(q.flag);
        qj["drift"] = std::isfinite(q.drift) ? ordered_json(q.drift) : ordered_json(format_double(q.drift));
        if (!q.note.empty()) qj["note"] = q.note;
        quants[name] = qj;
    }
    j["quantities"] = quants;
    j["verdict"] = rep.verdict;
    return j.dump(2) + "\n";
}

std::string certificate_to_markdown(const CertificateReport& rep) {
    std::ostringstream os;
    os << "# Multiplier certificate\n\n";
    os << "space (" << rep.sp.m_alpha << "," << rep.sp.m_2alpha << "), p = " << rep.p
       << ", q = " << rep.q << ", variant " << to_string(rep.variant) << "\n\n";
    os << "multiplier: `" << rep.multiplier << "`\n\n";
    os << "## Gates\n\n| gate | pass | detail |\n|---|---|---|\n";
    for (const auto& [name, g] : rep.gates)
        os << "| " << name << " | " << (g.pass ? "yes" : "no") << " | " << g.detail << " |\n";
    os << "\n## Quantities\n\n| quantity | value | flag | drift | note |\n|---|---|---|---|---|\n";
    for (const auto& [name, q] : rep.quantities)
        os << "| " << name << " | " << format_double(q.value) << " | " << to_string(q.flag)
           << " | " << format_double(q.drift) << " | " << q.note << " |\n";
    os << "\n**verdict: " << rep.verdict << "**\n";
    return os.str();
}

std::string certificate_to_csv(const CertificateReport& rep) {
    std::ostringstream os;
    os << "quantity,level,value\n";
    for (const auto& [name, q] : rep.quantities)
        for (size_t i = 0; i < q.ladder.size(); ++i)
            os << name << "," << i << "," << format_double(q.ladder[i]) << "\n";
    return os.str();
}

EmittedFiles emit_report(const CertificateReport& rep, const std::string& out_dir,
                         const std::vector<std::string>& formats) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    EmittedFiles out;
    auto write = [&](const std::string& name, const std::string& text) {
        const std::string path = (fs::path(out_dir) / name).string();
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << text;
        out.paths.push_back(path);
    };
    for (const auto& fmt : formats) {
        if (fmt == "json") write("certificate.json", certificate_to_json(rep));
        else if (fmt == "csv") write("certificate.csv", certificate_to_csv(rep));
        else if (fmt == "markdown") write("certificate.md", certificate_to_markdown(rep));
        else throw std::invalid_argument("unknown report format '" + fmt + "'");
    }
    return out;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) f << ",";
            f << format_double(row[i]);
        }
        f << "\n";
    }
}

int exit_code_for(const CertificateReport& rep) {
    if (!rep.gates_passed()) return 3;
    if (rep.verdict != "stable") return 4;
    return 0;
}

} // namespace rankone
