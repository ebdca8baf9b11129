#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "ghzlab/experiment.hpp"

using namespace ghzlab;

namespace {

constexpr double kPi = std::numbers::pi;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig oracle_config() {
    ExperimentConfig cfg;
    cfg.n = 3;
    cfg.model = Model::Oracle;
    cfg.settings = {SettingPattern::parse("XXX"), SettingPattern::parse("ZZZ")};
    return cfg;
}

} // namespace

TEST_CASE("format_double is shortest round-trip") {
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(-1.0) == "-1");
    CHECK(format_double(0.0) == "0");

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double v = uni(rng);
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("config validation reports the offending field") {
    ExperimentConfig cfg = oracle_config();
    CHECK_NOTHROW(cfg.validate());

    SECTION("n out of range") {
        cfg.n = 1;
        CHECK_THROWS_WITH(cfg.validate(), Catch::Matchers::ContainsSubstring("'n'"));
        cfg.n = 11;
        CHECK_THROWS_AS(cfg.validate(), domain_error);
    }
    SECTION("settings must be present and sized") {
        cfg.settings.clear();
        CHECK_THROWS_WITH(cfg.validate(), Catch::Matchers::ContainsSubstring("'settings'"));
        cfg = oracle_config();
        cfg.settings.push_back(SettingPattern::parse("XX"));
        CHECK_THROWS_WITH(cfg.validate(), Catch::Matchers::ContainsSubstring("'settings'"));
    }
    SECTION("phases are required exactly when the model is amplitude") {
        cfg.model = Model::Amplitude;
        CHECK_THROWS_WITH(cfg.validate(), Catch::Matchers::ContainsSubstring("'phases'"));
        cfg.phases = PhaseAssignment({kPi / 2, 0.0, 0.0});
        CHECK_NOTHROW(cfg.validate());
        cfg.phases = PhaseAssignment({kPi / 2, 0.0});
        CHECK_THROWS_AS(cfg.validate(), domain_error);
    }
    SECTION("sampling only draws from the oracle") {
        cfg.model = Model::Amplitude;
        cfg.phases = PhaseAssignment({kPi / 2, 0.0, 0.0});
        cfg.shots = 10;
        CHECK_THROWS_WITH(cfg.validate(), Catch::Matchers::ContainsSubstring("'shots'"));
    }
    SECTION("lhv configs are pinned to the three-particle constraint set") {
        cfg.model = Model::Lhv;
        CHECK_THROWS_AS(cfg.validate(), domain_error);
        cfg.settings = {SettingPattern::parse("XXX"), SettingPattern::parse("XYY"),
                        SettingPattern::parse("YXY"), SettingPattern::parse("YYX")};
        CHECK_NOTHROW(cfg.validate());
    }
    SECTION("output path must not be empty") {
        cfg.output = OutputSpec{"", OutputFormat::Json};
        CHECK_THROWS_WITH(cfg.validate(), Catch::Matchers::ContainsSubstring("output.path"));
    }
}

TEST_CASE("config JSON round trip") {
    ExperimentConfig cfg = oracle_config();
    cfg.phases = PhaseAssignment({kPi / 2, 0.0, 0.0});
    cfg.shots = 500;
    cfg.seed = 99;
    cfg.output = OutputSpec{"out.json", OutputFormat::Csv};
    CHECK(ExperimentConfig::from_json(cfg.to_json()) == cfg);

    SECTION("schema version is enforced") {
        ojson j = cfg.to_json();
        j["schema_version"] = 2;
        CHECK_THROWS_WITH(ExperimentConfig::from_json(j),
                          Catch::Matchers::ContainsSubstring("schema_version"));
    }
    SECTION("missing fields are named") {
        ojson j = cfg.to_json();
        j.erase("model");
        CHECK_THROWS_WITH(ExperimentConfig::from_json(j),
                          Catch::Matchers::ContainsSubstring("'model'"));
    }
}

TEST_CASE("oracle records") {
    const ExperimentReport report = run_experiment(oracle_config());
    REQUIRE(report.records.size() == 2);
    const CorrelationRecord& xxx = report.records[0];
    CHECK(xxx.provenance == "oracle");
    CHECK(xxx.value_kind == "probability");
    CHECK(std::abs(xxx.expectation - (-1.0)) < 1e-12);
    REQUIRE(xxx.values.size() == 8);
    CHECK(std::abs(xxx.values[0b111] - 0.25) < 1e-12);
    CHECK(std::abs(xxx.values[0b000]) < 1e-12);
    CHECK_FALSE(xxx.cross_check.has_value());
    CHECK(std::abs(report.records[1].expectation) < 1e-12);
}

TEST_CASE("amplitude records carry the indicator table and phases") {
    ExperimentConfig cfg;
    cfg.n = 3;
    cfg.model = Model::Amplitude;
    cfg.settings = {SettingPattern::parse("XXX")};
    cfg.phases = PhaseAssignment({kPi / 2, 0.0, 0.0});
    const ExperimentReport report = run_experiment(cfg);
    const CorrelationRecord& r = report.records.front();
    CHECK(r.provenance == "amplitude");
    CHECK(r.value_kind == "indicator");
    CHECK(r.phases == cfg.phases);
    CHECK(r.indicators_exact == true);
    for (std::uint64_t i = 0; i < 8; ++i)
        CHECK(r.values[i] == (OutcomePattern::from_index(3, i).minus_count() % 2 ? 1.0 : 0.0));
    // the four supported patterns all have product -1
    CHECK(r.expectation == -1.0);
}

TEST_CASE("oracle runs cross-check supplied phases on all-X settings") {
    ExperimentConfig cfg = oracle_config();
    cfg.phases = PhaseAssignment({kPi / 2, 0.0, 0.0});
    const ExperimentReport report = run_experiment(cfg);
    REQUIRE(report.records[0].cross_check.has_value());
    CHECK(report.records[0].cross_check->match);
    CHECK_FALSE(report.records[1].cross_check.has_value());  // ZZZ is not all-X

    cfg.phases = PhaseAssignment({0.0, 0.0, 0.0});
    const ExperimentReport bad = run_experiment(cfg);
    CHECK_FALSE(bad.records[0].cross_check->match);
    CHECK(bad.records[0].cross_check->discrepancies.size() == 8);
}

TEST_CASE("sampled records") {
    ExperimentConfig cfg = oracle_config();
    cfg.shots = 10000;
    cfg.seed = 5;
    const ExperimentReport report = run_experiment(cfg);
    const CorrelationRecord& r = report.records[0];
    CHECK(r.provenance == "sampled");
    CHECK(r.shots == 10000);
    CHECK(r.seed == 5);  // seed + record index
    CHECK(report.records[1].seed == 6);
    REQUIRE(r.standard_error.has_value());
    double total = 0.0;
    for (double v : r.values) total += v;
    CHECK(std::abs(total - 1.0) < 1e-9);
    // XXX products are all -1 on the support
    CHECK(r.expectation == -1.0);

    SECTION("sampled expectation stays within five sigma of exact") {
        ExperimentConfig exact_cfg = oracle_config();
        const ExperimentReport exact = run_experiment(exact_cfg);
        const double se = std::max(*report.records[1].standard_error, 1e-2);
        CHECK(std::abs(report.records[1].expectation - exact.records[1].expectation) < 5 * se);
    }
}

TEST_CASE("lhv run embeds the paradox summary") {
    ExperimentConfig cfg;
    cfg.n = 3;
    cfg.model = Model::Lhv;
    cfg.settings = {SettingPattern::parse("XXX"), SettingPattern::parse("XYY"),
                    SettingPattern::parse("YXY"), SettingPattern::parse("YYX")};
    const ExperimentReport report = run_experiment(cfg);
    REQUIRE(report.lhv.has_value());
    CHECK(report.lhv->max_satisfied == 3);
    CHECK(report.lhv->constraint_count == 4);
    CHECK(report.lhv->mermin_classical_max == 2);
    CHECK(std::abs(report.lhv->mermin_quantum_value - 4.0) < 1e-9);
    CHECK(report.lhv->product_identity_holds);
    CHECK(report.lhv->forced_xxx_product == +1);
    CHECK(report.lhv->witness_count == 32);

    // the first witness (all +1) predicts +++ for every setting
    REQUIRE(report.records.size() == 4);
    for (const CorrelationRecord& r : report.records) {
        CHECK(r.provenance == "lhv");
        CHECK(r.values[0] == 1.0);
        CHECK(r.expectation == 1.0);
    }
}

TEST_CASE("report JSON round trip is field-for-field") {
    ExperimentConfig cfg = oracle_config();
    cfg.phases = PhaseAssignment({kPi / 2, 0.0, 0.0});
    cfg.shots = 1000;
    cfg.seed = 3;
    const ExperimentReport report = run_experiment(cfg);
    CHECK(ExperimentReport::from_json(report.to_json()) == report);

    SECTION("through text as well") {
        const std::string text = report.to_json_text();
        CHECK(ExperimentReport::from_json(ojson::parse(text)) == report);
    }

    SECTION("lhv summaries round trip too") {
        ExperimentConfig lhv_cfg;
        lhv_cfg.n = 3;
        lhv_cfg.model = Model::Lhv;
        lhv_cfg.settings = {SettingPattern::parse("XXX"), SettingPattern::parse("XYY"),
                            SettingPattern::parse("YXY"), SettingPattern::parse("YYX")};
        const ExperimentReport lhv_report = run_experiment(lhv_cfg);
        CHECK(ExperimentReport::from_json(lhv_report.to_json()) == lhv_report);
    }
}

TEST_CASE("identical configs give byte-identical JSON across thread counts") {
    ExperimentConfig cfg;
    cfg.n = 3;
    cfg.model = Model::Oracle;
    cfg.settings = {SettingPattern::parse("XXX"), SettingPattern::parse("XYY"),
                    SettingPattern::parse("YXY"), SettingPattern::parse("YYX"),
                    SettingPattern::parse("ZZZ")};
    cfg.shots = 10000;
    cfg.seed = 42;
    const std::string once = run_experiment(cfg, 1).to_json_text();
    const std::string again = run_experiment(cfg, 1).to_json_text();
    const std::string threaded = run_experiment(cfg, 4).to_json_text();
    CHECK(once == again);
    CHECK(once == threaded);
}

TEST_CASE("golden regression report") {
    const std::string dir = GHZLAB_TEST_DIR;
    const ExperimentConfig cfg = ExperimentConfig::load(dir + "/golden/regression_config.json");
    const std::string expected = slurp(dir + "/golden/regression_report.json");
    CHECK(run_experiment(cfg, 1).to_json_text() == expected);
    CHECK(run_experiment(cfg, 4).to_json_text() == expected);
}

TEST_CASE("CSV rendering") {
    ExperimentConfig cfg = oracle_config();
    const ExperimentReport report = run_experiment(cfg);
    const std::string csv = report.to_csv();

    std::istringstream lines(csv);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "settings,pattern,value,value_kind,provenance");
    std::size_t rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 16);  // two records, eight patterns each
    CHECK(csv.find("XXX,---,0.25,probability,oracle") != std::string::npos);
    CHECK(csv.find("ZZZ,+++,0.5,probability,oracle") != std::string::npos);
}

TEST_CASE("reports write where asked") {
    const std::string path = "test_experiment_tmp_report.json";
    const ExperimentReport report = run_experiment(oracle_config());
    write_report(report, path, OutputFormat::Json);
    CHECK(slurp(path) == report.to_json_text());
    std::remove(path.c_str());
    CHECK_THROWS_AS(write_report(report, "no_such_dir/x.json", OutputFormat::Json), domain_error);
}

TEST_CASE("config loading errors") {
    CHECK_THROWS_WITH(ExperimentConfig::load("missing_config.json"),
                      Catch::Matchers::ContainsSubstring("cannot open"));
    const std::string path = "test_experiment_bad_config.json";
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK_THROWS_WITH(ExperimentConfig::load(path),
                      Catch::Matchers::ContainsSubstring("not valid JSON"));
    std::remove(path.c_str());
}
