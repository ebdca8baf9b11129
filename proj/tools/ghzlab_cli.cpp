// ghzlab -- command-line driver for the GHZ correlation laboratory.
//
// Exit codes: 0 success, 1 verification mismatch, 2 bad config or arguments,
// 3 internal consistency failure.

#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ghzlab/ghzlab.hpp"

namespace {

using namespace ghzlab;

// Accepts "0.75", "pi", "-pi/2", "2pi/3", "3*pi/4" (and a literal UTF-8 pi).
double parse_angle(std::string text) {
    for (std::size_t pos; (pos = text.find("\xcf\x80")) != std::string::npos;)
        text.replace(pos, 2, "pi");
    std::erase(text, ' ');
    if (text.empty()) throw domain_error("empty angle");

    const std::size_t pi_pos = text.find("pi");
    const auto to_number = [](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw domain_error("cannot parse angle component '" + s + "'");
        }
        if (used != s.size())
            throw domain_error("cannot parse angle component '" + s + "'");
        return v;
    };
    if (pi_pos == std::string::npos) return to_number(text);

    std::string coef = text.substr(0, pi_pos);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    double value = std::numbers::pi;
    if (coef == "-") value = -value;
    else if (!coef.empty() && coef != "+") value *= to_number(coef);

    std::string rest = text.substr(pi_pos + 2);
    if (!rest.empty()) {
        if (rest.front() != '/')
            throw domain_error("cannot parse angle '" + text + "'");
        value /= to_number(rest.substr(1));
    }
    return value;
}

std::vector<double> parse_angle_list(const std::string& text) {
    std::vector<double> angles;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ','))
        angles.push_back(parse_angle(token));
    if (angles.empty()) throw domain_error("empty phase list");
    return angles;
}

SettingConstraint parse_constraint(const std::string& text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
        throw domain_error("constraint '" + text + "' must look like XYY=+1");
    SettingConstraint c;
    c.settings = SettingPattern::parse(text.substr(0, eq));
    const std::string target = text.substr(eq + 1);
    if (target == "+1" || target == "1") c.target = +1;
    else if (target == "-1") c.target = -1;
    else throw domain_error("constraint target must be +1 or -1, got '" + target + "'");
    return c;
}

// Odd-minus reference the solver defaults to: the paper's all-minus pattern
// when n is odd, otherwise a single leading minus.
OutcomePattern default_reference(std::size_t n) {
    std::vector<int> signs(n, -1);
    if (n % 2 == 0) std::fill(signs.begin() + 1, signs.end(), +1);
    return OutcomePattern(std::move(signs));
}

void emit(const ExperimentReport& report, const std::string& output_path, OutputFormat format) {
    if (output_path.empty()) return;
    write_report(report, output_path, format);
    std::cout << "wrote " << output_path << "\n";
}

void print_record(const CorrelationRecord& r) {
    std::cout << "settings " << r.settings.str() << "  provenance " << r.provenance
              << "  expectation " << format_double(r.expectation);
    if (r.standard_error)
        std::cout << "  standard_error " << format_double(*r.standard_error);
    std::cout << "\n";
    std::cout << "  pattern  " << r.value_kind << "\n";
    for (std::size_t i = 0; i < r.values.size(); ++i)
        std::cout << "  " << OutcomePattern::from_index(r.settings.size(), i).str()
                  << "  " << format_double(r.values[i]) << "\n";
}

int run_table(std::size_t n, const std::vector<std::string>& setting_names,
              std::uint64_t shots, std::uint64_t seed,
              const std::string& output_path, const std::string& format_name_str,
              unsigned threads) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.model = Model::Oracle;
    for (const std::string& s : setting_names) cfg.settings.push_back(SettingPattern::parse(s));
    cfg.shots = shots;
    cfg.seed = seed;
    const ExperimentReport report = run_experiment(cfg, threads);
    for (const CorrelationRecord& r : report.records) print_record(r);
    emit(report, output_path, format_from_name(format_name_str));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GHZ correlation laboratory: state-vector oracle, local-amplitude model, "
                 "and exhaustive local-hidden-variable analysis"};
    app.require_subcommand(1);

    std::size_t n = 3;
    std::vector<std::string> setting_names;
    std::string phases_text, reference_text, branch = "positive";
    std::string output_path, format_text = "json", config_path;
    std::string resolution_text = "pi/8";
    std::vector<std::string> constraint_texts;
    std::uint64_t shots = 100000, seed = 0;
    unsigned threads = 1;

    auto* table = app.add_subcommand("table", "oracle joint probabilities for GHZ_n");
    table->add_option("--n", n, "particle count")->capture_default_str();
    table->add_option("--settings", setting_names, "setting patterns, e.g. XXX ZZZ");
    table->add_option("--output", output_path, "write a report file");
    table->add_option("--format", format_text, "json or csv")->capture_default_str();

    auto* amp = app.add_subcommand("amp", "local-amplitude correlation and indicator table");
    amp->add_option("--n", n, "particle count")->capture_default_str();
    amp->add_option("--phases", phases_text, "comma-separated phases, e.g. pi/2,0,0");
    amp->add_option("--reference", reference_text,
                    "odd-minus reference pattern to solve for (use --reference=---)");
    amp->add_option("--branch", branch, "positive or negative reference correlation")
        ->check(CLI::IsMember({"positive", "negative"}))->capture_default_str();
    amp->add_option("--output", output_path, "write a report file");
    amp->add_option("--format", format_text, "json or csv")->capture_default_str();

    auto* verify = app.add_subcommand(
        "verify", "check amplitude-model support against the oracle for all-X settings");
    verify->add_option("--n", n, "particle count")->capture_default_str();
    verify->add_option("--phases", phases_text, "phases to verify (default: solved)");
    verify->add_option("--reference", reference_text, "reference pattern for the solver");

    auto* lhv = app.add_subcommand("lhv", "exhaustive deterministic LHV analysis of the "
                                          "three-particle constraints");
    lhv->add_option("--output", output_path, "write a report file");
    lhv->add_option("--format", format_text, "json or csv")->capture_default_str();

    auto* mermin = app.add_subcommand("mermin", "classical bound vs quantum value of the "
                                                "Mermin expression");

    auto* sample = app.add_subcommand("sample", "Monte Carlo measurement simulation");
    sample->add_option("--n", n, "particle count")->capture_default_str();
    sample->add_option("--settings", setting_names, "setting patterns (default XXX)");
    sample->add_option("--shots", shots, "sample count")->capture_default_str();
    sample->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sample->add_option("--output", output_path, "write a report file");
    sample->add_option("--format", format_text, "json or csv")->capture_default_str();

    auto* fit = app.add_subcommand("fit", "grid-search per-setting phases against "
                                          "expectation constraints");
    fit->add_option("--resolution", resolution_text, "grid step, e.g. pi/8")->capture_default_str();
    fit->add_option("--constraint", constraint_texts,
                    "constraints like XXX=-1 (default: the four GHZ constraints)");
    fit->add_option("--threads", threads, "worker threads")->capture_default_str();

    auto* run = app.add_subcommand("run", "run a full experiment config file");
    run->add_option("--config", config_path, "JSON config path")->required();
    run->add_option("--output", output_path, "override the config's output path");
    run->add_option("--format", format_text, "override the output format");
    run->add_option("--threads", threads, "worker threads")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(table)) {
            if (setting_names.empty()) setting_names = {std::string(n, 'X')};
            return run_table(n, setting_names, 0, 0, output_path, format_text, 1);
        }

        if (app.got_subcommand(amp)) {
            const PhaseAssignment phases = phases_text.empty()
                ? solve_phases(reference_text.empty() ? default_reference(n)
                                                      : OutcomePattern::parse(reference_text),
                               branch == "negative" ? PhaseBranch::Negative : PhaseBranch::Positive)
                : PhaseAssignment(parse_angle_list(phases_text));
            if (!phases_text.empty() && amp->count("--n") > 0 && phases.size() != n)
                throw domain_error("--phases lists " + std::to_string(phases.size()) +
                                   " entries but --n is " + std::to_string(n));
            const IndicatorTable tbl = full_table(phases);
            std::cout << "phases";
            for (double t : phases.thetas()) std::cout << " " << format_double(t);
            std::cout << "\n  pattern  correlation  indicator  exact\n";
            for (const IndicatorRow& row : tbl.rows())
                std::cout << "  " << row.pattern.str() << "  " << format_double(row.correlation)
                          << "  " << format_double(row.indicator.value) << "  "
                          << (row.indicator.exact ? "yes" : "no") << "\n";
            if (!output_path.empty()) {
                ExperimentConfig cfg;
                cfg.n = phases.size();
                cfg.model = Model::Amplitude;
                cfg.settings = {SettingPattern::uniform(phases.size(), Axis::X)};
                cfg.phases = phases;
                emit(run_experiment(cfg), output_path, format_from_name(format_text));
            }
            return 0;
        }

        if (app.got_subcommand(verify)) {
            const OutcomePattern reference = reference_text.empty()
                ? default_reference(n) : OutcomePattern::parse(reference_text);
            const PhaseAssignment phases = phases_text.empty()
                ? solve_phases(reference) : PhaseAssignment(parse_angle_list(phases_text));
            if (phases.size() != n)
                throw domain_error("--phases needs exactly n entries");
            const IndicatorTable tbl = full_table(phases);
            const auto oracle_support =
                support(ghz_state(n), SettingPattern::uniform(n, Axis::X));
            const SupportMatch match = support_match(tbl, oracle_support);
            std::cout << "amplitude support vs oracle (GHZ_" << n << ", all-X): "
                      << (match.match ? "match" : "MISMATCH") << "\n";
            for (const OutcomePattern& p : match.discrepancies)
                std::cout << "  discrepancy " << p.str() << "\n";
            return match.match ? 0 : 1;
        }

        if (app.got_subcommand(lhv)) {
            const ParadoxReport r = paradox_report();
            std::cout << "constraints:\n";
            for (const SettingConstraint& c : r.constraints)
                std::cout << "  " << c.settings.str() << " -> " << (c.target > 0 ? "+1" : "-1")
                          << "\n";
            std::cout << "assignments checked: " << r.assignments_checked << "\n"
                      << "product identity E(XYY)E(YXY)E(YYX) = E(XXX): "
                      << (r.product_identity_holds ? "holds for all" : "VIOLATED") << "\n"
                      << "forced LHV prediction for XXX: "
                      << (r.forced_xxx_product > 0 ? "+1" : "-1") << "\n"
                      << "quantum prediction for XXX: "
                      << format_double(r.quantum_xxx_expectation) << "\n"
                      << "max satisfied: " << r.max_satisfied << " of " << r.constraint_count
                      << "\n"
                      << "witnesses: " << r.witness_count << " (first: " << r.first_witness.str()
                      << ")\n";
            if (!output_path.empty()) {
                ExperimentConfig cfg;
                cfg.n = 3;
                cfg.model = Model::Lhv;
                for (const SettingConstraint& c : r.constraints) cfg.settings.push_back(c.settings);
                emit(run_experiment(cfg), output_path, format_from_name(format_text));
            }
            return 0;
        }

        if (app.got_subcommand(mermin)) {
            const MerminAnalysis m = mermin_analysis();
            std::cout << "classical maximum: " << m.classical_max << "\n"
                      << "quantum value: " << format_double(m.quantum_value) << "\n";
            return 0;
        }

        if (app.got_subcommand(sample)) {
            if (setting_names.empty()) setting_names = {std::string(n, 'X')};
            ExperimentConfig cfg;
            cfg.n = n;
            cfg.model = Model::Oracle;
            for (const std::string& s : setting_names)
                cfg.settings.push_back(SettingPattern::parse(s));
            cfg.shots = shots;
            cfg.seed = seed;
            const ExperimentReport report = run_experiment(cfg);
            for (const CorrelationRecord& r : report.records) print_record(r);
            emit(report, output_path, format_from_name(format_text));
            return 0;
        }

        if (app.got_subcommand(fit)) {
            std::vector<SettingConstraint> constraints;
            if (constraint_texts.empty()) {
                constraints = ghz_constraints();
            } else {
                for (const std::string& t : constraint_texts)
                    constraints.push_back(parse_constraint(t));
            }
            const double resolution = parse_angle(resolution_text);
            const FitResult result = fit_phases(constraints, resolution, threads);
            std::cout << "constraints:\n";
            for (const SettingConstraint& c : constraints)
                std::cout << "  " << c.settings.str() << " -> " << (c.target > 0 ? "+1" : "-1")
                          << " (model " << format_double(model_expectation(result.phases, c.settings))
                          << ")\n";
            for (std::size_t i = 1; i <= result.phases.particles(); ++i)
                std::cout << "particle " << i << ": theta_X "
                          << format_double(result.phases.at(i, Axis::X)) << "  theta_Y "
                          << format_double(result.phases.at(i, Axis::Y)) << "\n";
            std::cout << "residual " << format_double(result.residual) << "\n";
            return 0;
        }

        if (app.got_subcommand(run)) {
            ExperimentConfig cfg = ExperimentConfig::load(config_path);
            const ExperimentReport report = run_experiment(cfg, threads);
            std::string path = output_path;
            OutputFormat format = cfg.output ? cfg.output->format : OutputFormat::Json;
            if (path.empty() && cfg.output) path = cfg.output->path;
            if (run->count("--format") > 0) format = format_from_name(format_text);
            if (path.empty()) {
                std::cout << report.render(format);
            } else {
                write_report(report, path, format);
                std::cout << "wrote " << path << "\n";
            }
            return 0;
        }
    } catch (const consistency_error& e) {
        std::cerr << "internal consistency error: " << e.what() << "\n";
        return 3;
    } catch (const domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
