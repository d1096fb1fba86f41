#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "rankone/certificate.hpp"
#include "rankone/config.hpp"

using namespace rankone;

TEST_CASE("scenario config parsing and validation") {
    auto cfg = load_scenario(R"json({
        "space": "H3",
        "p": 1.5,
        "q": [2.0],
        "multiplier": {"expr": "heat(tau)", "params": {"tau": 1.0}},
        "variant": "main",
        "seed": 7,
        "kernel": {"epsilon": 1e-4, "t_max": 12.0, "n_points": 1024}
    })json");
    CHECK(cfg.space == SpaceParams::preset("H3"));
    CHECK(cfg.p == 1.5);
    CHECK(cfg.q_list.size() == 1);
    CHECK(cfg.seed == 7);
    CHECK(cfg.kernel_n_points == 1024);
    CHECK(cfg.multiplier_params.at("tau") == 1.0);

    // explicit multiplicities
    auto cfg2 = load_scenario(R"json({"space": {"m_alpha": 3, "m_2alpha": 0}, "p": 1.2})json");
    CHECK(cfg2.space.dimension() == 4);

    // q outside [p, p'] points at the offending field
    try {
        load_scenario(R"json({"space": "H3", "p": 1.5, "q": [3.5]})json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field == "q");
    }
    CHECK_THROWS_AS(load_scenario(R"json({"space": "H9"})json"), ConfigError);
    CHECK_THROWS_AS(load_scenario(R"json({"p": 0.5})json"), ConfigError);
    CHECK_THROWS_AS(load_scenario("{not json"), ConfigError);
    CHECK_THROWS_AS(load_scenario(R"json({"variant": "sideways"})json"), ConfigError);
    CHECK_THROWS_AS(load_scenario(R"json({"kernel": {"epsilon": -1.0}})json"), ConfigError);
}

TEST_CASE("gate failure reporting") {
    // p = 2 is a hypothesis violation, reported through gates with exit code 3
    const auto h3 = SpaceParams::preset("H3");
    CertificateOptions opts;
    auto rep = theorem_certificate(h3, Exponent(2.0), Exponent(2.0), heat_multiplier(1.0),
                                   Variant::Main, opts);
    CHECK(!rep.gates_passed());
    CHECK(rep.verdict == "fail");
    CHECK(exit_code_for(rep) == 3);

    // odd multiplier trips the evenness gate
    auto rep2 = theorem_certificate(h3, Exponent(1.5), Exponent(2.0),
                                    parse_multiplier("z*exp(-z^2)"), Variant::Main, opts);
    CHECK(!rep2.gates_passed());
    CHECK(exit_code_for(rep2) == 3);

    // q out of range
    auto rep3 = theorem_certificate(h3, Exponent(1.5), Exponent(3.5), heat_multiplier(1.0),
                                    Variant::Main, opts);
    CHECK(!rep3.gates_passed());
}

TEST_CASE("report serialization") {
    CertificateReport rep;
    rep.sp = SpaceParams::preset("H3");
    rep.p = 1.5;
    rep.q = 2.0;
    rep.multiplier = "heat(1)";
    rep.gates.push_back({"p_in_range", {true, ""}});
    Quantity q;
    q.value = 1.25;
    q.flag = QuantityFlag::Stable;
    q.drift = 0.01;
    q.ladder = {1.3, 1.25};
    rep.quantities.push_back({"mh_constant", q});
    rep.verdict = "stable";

    const std::string json = certificate_to_json(rep);
    CHECK(json.find("\"verdict\": \"stable\"") != std::string::npos);
    CHECK(json.find("\"mh_constant\"") != std::string::npos);
    CHECK(certificate_to_json(rep) == json);  // deterministic

    const std::string md = certificate_to_markdown(rep);
    CHECK(md.find("| mh_constant |") != std::string::npos);
    const std::string csv = certificate_to_csv(rep);
    CHECK(csv.find("mh_constant,0,1.3") != std::string::npos);

    // empty-quantity report stays valid with a not-applicable verdict
    CertificateReport empty;
    empty.sp = SpaceParams::preset("H3");
    const std::string ej = certificate_to_json(empty);
    CHECK(ej.find("\"verdict\": \"not-applicable\"") != std::string::npos);

    // emitted files land in the output directory
    auto files = emit_report(rep, "build_test_artifacts");
    CHECK(files.paths.size() == 3);
    for (const auto& p : files.paths) CHECK(std::filesystem::exists(p));
    std::filesystem::remove_all("build_test_artifacts");
}

TEST_CASE("quantity names match the documented schema") {
    const auto& names = certificate_quantity_names();
    CHECK(names.size() >= 8);
    // names are unique
    for (size_t i = 0; i < names.size(); ++i)
        for (size_t j = i + 1; j < names.size(); ++j) CHECK(names[i] != names[j]);
}
