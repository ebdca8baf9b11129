// experiment.hpp -- experiment configs, correlation records, and report I/O.
//
// The driver always prepares the n-particle GHZ state; the model field picks
// which engine produces the per-setting records. Reports serialize to JSON
// (schema_version 1, fixed field order, shortest-round-trip floats) or to
// CSV with the fixed column order settings,pattern,value,value_kind,provenance.
// Identical configs produce byte-identical JSON regardless of thread count.
#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ghzlab/amplitude_model.hpp"
#include "ghzlab/errors.hpp"
#include "ghzlab/lhv.hpp"
#include "ghzlab/patterns.hpp"
#include "ghzlab/sampling.hpp"
#include "ghzlab/state_vector.hpp"

namespace ghzlab {

using ojson = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Shortest representation that parses back to the identical double.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

enum class Model { Oracle, Amplitude, Lhv };
enum class OutputFormat { Json, Csv };

inline std::string model_name(Model m) {
    switch (m) {
    case Model::Oracle: return "oracle";
    case Model::Amplitude: return "amplitude";
    case Model::Lhv: return "lhv";
    }
    throw domain_error("unknown model");
}

inline Model model_from_name(const std::string& s) {
    if (s == "oracle") return Model::Oracle;
    if (s == "amplitude") return Model::Amplitude;
    if (s == "lhv") return Model::Lhv;
    throw domain_error("config field 'model': expected oracle, amplitude or lhv, got '" + s + "'");
}

inline std::string format_name(OutputFormat f) {
    return f == OutputFormat::Json ? "json" : "csv";
}

inline OutputFormat format_from_name(const std::string& s) {
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    throw domain_error("config field 'format': expected json or csv, got '" + s + "'");
}

namespace detail {

inline const ojson& require_field(const ojson& j, const char* name) {
    if (!j.contains(name))
        throw domain_error(std::string("missing config field '") + name + "'");
    return j.at(name);
}

template <typename T>
T field_as(const ojson& j, const char* name) {
    try {
        return require_field(j, name).template get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw domain_error(std::string("config field '") + name + "': " + e.what());
    }
}

} // namespace detail

struct OutputSpec {
    std::string path;
    OutputFormat format = OutputFormat::Json;

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct ExperimentConfig {
    std::size_t n = 0;
    Model model = Model::Oracle;
    std::vector<SettingPattern> settings;
    std::optional<PhaseAssignment> phases;
    std::uint64_t shots = 0;  // 0 = exact mode
    std::uint64_t seed = 0;
    std::optional<OutputSpec> output;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

    void validate(std::size_t cap = kDefaultParticleCap) const {
        if (n < 2 || n > cap)
            throw domain_error("config field 'n': must lie in 2.." + std::to_string(cap));
        if (settings.empty())
            throw domain_error("config field 'settings': must name at least one pattern");
        for (const SettingPattern& s : settings)
            if (s.size() != n)
                throw domain_error("config field 'settings': pattern " + s.str() +
                                   " does not have n=" + std::to_string(n) + " axes");
        if (model == Model::Amplitude && !phases)
            throw domain_error("config field 'phases': required when model is amplitude");
        if (model == Model::Lhv && phases)
            throw domain_error("config field 'phases': not accepted when model is lhv");
        if (phases && phases->size() != n)
            throw domain_error("config field 'phases': needs exactly n=" +
                               std::to_string(n) + " entries");
        if (shots > 0 && model != Model::Oracle)
            throw domain_error("config field 'shots': sampling draws from the oracle "
                               "distribution; amplitude and lhv models are exact-only");
        if (model == Model::Lhv) {
            if (n != 3)
                throw domain_error("config field 'n': the lhv model analyzes the "
                                   "three-particle constraint set, so n must be 3");
            const std::vector<std::string> expected = {"XXX", "XYY", "YXY", "YYX"};
            bool ok = settings.size() == expected.size();
            for (std::size_t i = 0; ok && i < expected.size(); ++i)
                ok = settings[i].str() == expected[i];
            if (!ok)
                throw domain_error("config field 'settings': the lhv model expects "
                                   "exactly XXX, XYY, YXY, YYX in that order");
        }
        if (output && output->path.empty())
            throw domain_error("config field 'output.path': must not be empty");
    }

    ojson to_json() const {
        ojson j;
        j["schema_version"] = kSchemaVersion;
        j["n"] = n;
        j["model"] = model_name(model);
        ojson names = ojson::array();
        for (const SettingPattern& s : settings) names.push_back(s.str());
        j["settings"] = std::move(names);
        if (phases) j["phases"] = phases->thetas();
        j["shots"] = shots;
        j["seed"] = seed;
        if (output) {
            ojson o;
            o["path"] = output->path;
            o["format"] = format_name(output->format);
            j["output"] = std::move(o);
        }
        return j;
    }

    static ExperimentConfig from_json(const ojson& j) {
        const int version = detail::field_as<int>(j, "schema_version");
        if (version != kSchemaVersion)
            throw domain_error("config field 'schema_version': expected " +
                               std::to_string(kSchemaVersion) + ", got " + std::to_string(version));
        ExperimentConfig cfg;
        cfg.n = detail::field_as<std::size_t>(j, "n");
        cfg.model = model_from_name(detail::field_as<std::string>(j, "model"));
        for (const std::string& s : detail::field_as<std::vector<std::string>>(j, "settings"))
            cfg.settings.push_back(SettingPattern::parse(s));
        if (j.contains("phases"))
            cfg.phases = PhaseAssignment(detail::field_as<std::vector<double>>(j, "phases"));
        if (j.contains("shots")) cfg.shots = detail::field_as<std::uint64_t>(j, "shots");
        if (j.contains("seed")) cfg.seed = detail::field_as<std::uint64_t>(j, "seed");
        if (j.contains("output")) {
            const ojson& o = j.at("output");
            OutputSpec spec;
            spec.path = detail::field_as<std::string>(o, "path");
            spec.format = format_from_name(detail::field_as<std::string>(o, "format"));
            cfg.output = std::move(spec);
        }
        return cfg;
    }

    static ExperimentConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw domain_error("cannot open config file '" + path + "'");
        ojson j;
        try {
            j = ojson::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw domain_error("config file '" + path + "' is not valid JSON: " + e.what());
        }
        return from_json(j);
    }
};

struct CorrelationRecord {
    SettingPattern settings;
    std::string provenance;  // oracle | amplitude | lhv | sampled
    std::string value_kind;  // probability | indicator
    double expectation = 0.0;
    std::vector<double> values;  // one per pattern, canonical order
    std::optional<PhaseAssignment> phases;
    std::optional<bool> indicators_exact;
    std::optional<double> standard_error;
    std::optional<std::uint64_t> shots;
    std::optional<std::uint64_t> seed;
    std::optional<SupportMatch> cross_check;

    friend bool operator==(const CorrelationRecord&, const CorrelationRecord&) = default;

    ojson to_json() const {
        ojson j;
        j["settings"] = settings.str();
        j["provenance"] = provenance;
        j["value_kind"] = value_kind;
        j["expectation"] = expectation;
        ojson rows = ojson::array();
        for (std::size_t i = 0; i < values.size(); ++i) {
            ojson row;
            row["pattern"] = OutcomePattern::from_index(settings.size(), i).str();
            row["value"] = values[i];
            rows.push_back(std::move(row));
        }
        j["values"] = std::move(rows);
        if (phases) j["phases"] = phases->thetas();
        if (indicators_exact) j["indicators_exact"] = *indicators_exact;
        if (standard_error) j["standard_error"] = *standard_error;
        if (shots) j["shots"] = *shots;
        if (seed) j["seed"] = *seed;
        if (cross_check) {
            ojson c;
            c["match"] = cross_check->match;
            ojson d = ojson::array();
            for (const OutcomePattern& p : cross_check->discrepancies) d.push_back(p.str());
            c["discrepancies"] = std::move(d);
            j["cross_check"] = std::move(c);
        }
        return j;
    }

    static CorrelationRecord from_json(const ojson& j) {
        CorrelationRecord r;
        r.settings = SettingPattern::parse(detail::field_as<std::string>(j, "settings"));
        r.provenance = detail::field_as<std::string>(j, "provenance");
        r.value_kind = detail::field_as<std::string>(j, "value_kind");
        r.expectation = detail::field_as<double>(j, "expectation");
        for (const ojson& row : detail::require_field(j, "values")) {
            const OutcomePattern p = OutcomePattern::parse(detail::field_as<std::string>(row, "pattern"));
            const std::size_t idx = static_cast<std::size_t>(p.index());
            if (r.values.size() <= idx) r.values.resize(idx + 1, 0.0);
            r.values[idx] = detail::field_as<double>(row, "value");
        }
        if (j.contains("phases"))
            r.phases = PhaseAssignment(detail::field_as<std::vector<double>>(j, "phases"));
        if (j.contains("indicators_exact"))
            r.indicators_exact = detail::field_as<bool>(j, "indicators_exact");
        if (j.contains("standard_error"))
            r.standard_error = detail::field_as<double>(j, "standard_error");
        if (j.contains("shots")) r.shots = detail::field_as<std::uint64_t>(j, "shots");
        if (j.contains("seed")) r.seed = detail::field_as<std::uint64_t>(j, "seed");
        if (j.contains("cross_check")) {
            const ojson& c = j.at("cross_check");
            SupportMatch m;
            m.match = detail::field_as<bool>(c, "match");
            for (const ojson& p : detail::require_field(c, "discrepancies"))
                m.discrepancies.push_back(OutcomePattern::parse(p.get<std::string>()));
            r.cross_check = std::move(m);
        }
        return r;
    }
};

struct LhvSummary {
    std::vector<SettingConstraint> constraints;
    std::size_t assignments_checked = 0;
    bool product_identity_holds = false;
    int forced_xxx_product = 0;
    double quantum_xxx_expectation = 0.0;
    std::size_t max_satisfied = 0;
    std::size_t constraint_count = 0;
    std::size_t witness_count = 0;
    std::string first_witness;
    int mermin_classical_max = 0;
    double mermin_quantum_value = 0.0;

    friend bool operator==(const LhvSummary&, const LhvSummary&) = default;

    ojson to_json() const {
        ojson j;
        ojson cs = ojson::array();
        for (const SettingConstraint& c : constraints) {
            ojson e;
            e["settings"] = c.settings.str();
            e["target"] = c.target;
            cs.push_back(std::move(e));
        }
        j["constraints"] = std::move(cs);
        j["assignments_checked"] = assignments_checked;
        j["product_identity_holds"] = product_identity_holds;
        j["forced_xxx_product"] = forced_xxx_product;
        j["quantum_xxx_expectation"] = quantum_xxx_expectation;
        j["max_satisfied"] = max_satisfied;
        j["constraint_count"] = constraint_count;
        j["witness_count"] = witness_count;
        j["first_witness"] = first_witness;
        j["mermin_classical_max"] = mermin_classical_max;
        j["mermin_quantum_value"] = mermin_quantum_value;
        return j;
    }

    static LhvSummary from_json(const ojson& j) {
        LhvSummary s;
        for (const ojson& e : detail::require_field(j, "constraints")) {
            SettingConstraint c;
            c.settings = SettingPattern::parse(detail::field_as<std::string>(e, "settings"));
            c.target = detail::field_as<int>(e, "target");
            s.constraints.push_back(std::move(c));
        }
        s.assignments_checked = detail::field_as<std::size_t>(j, "assignments_checked");
        s.product_identity_holds = detail::field_as<bool>(j, "product_identity_holds");
        s.forced_xxx_product = detail::field_as<int>(j, "forced_xxx_product");
        s.quantum_xxx_expectation = detail::field_as<double>(j, "quantum_xxx_expectation");
        s.max_satisfied = detail::field_as<std::size_t>(j, "max_satisfied");
        s.constraint_count = detail::field_as<std::size_t>(j, "constraint_count");
        s.witness_count = detail::field_as<std::size_t>(j, "witness_count");
        s.first_witness = detail::field_as<std::string>(j, "first_witness");
        s.mermin_classical_max = detail::field_as<int>(j, "mermin_classical_max");
        s.mermin_quantum_value = detail::field_as<double>(j, "mermin_quantum_value");
        return s;
    }
};

struct ExperimentReport {
    int schema_version = kSchemaVersion;
    ExperimentConfig config;
    std::vector<CorrelationRecord> records;
    std::optional<LhvSummary> lhv;

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;

    ojson to_json() const {
        ojson j;
        j["schema_version"] = schema_version;
        j["config"] = config.to_json();
        ojson rs = ojson::array();
        for (const CorrelationRecord& r : records) rs.push_back(r.to_json());
        j["records"] = std::move(rs);
        if (lhv) j["lhv"] = lhv->to_json();
        return j;
    }

    static ExperimentReport from_json(const ojson& j) {
        ExperimentReport rep;
        rep.schema_version = detail::field_as<int>(j, "schema_version");
        if (rep.schema_version != kSchemaVersion)
            throw domain_error("report schema_version " + std::to_string(rep.schema_version) +
                               " is not supported");
        rep.config = ExperimentConfig::from_json(detail::require_field(j, "config"));
        for (const ojson& r : detail::require_field(j, "records"))
            rep.records.push_back(CorrelationRecord::from_json(r));
        if (j.contains("lhv")) rep.lhv = LhvSummary::from_json(j.at("lhv"));
        return rep;
    }

    std::string to_json_text() const { return to_json().dump(2) + "\n"; }

    // Fixed column order; one row per (settings, pattern). Summary blocks are
    // JSON-only.
    std::string to_csv() const {
        std::string out = "settings,pattern,value,value_kind,provenance\n";
        for (const CorrelationRecord& r : records) {
            for (std::size_t i = 0; i < r.values.size(); ++i) {
                out += r.settings.str();
                out += ',';
                out += OutcomePattern::from_index(r.settings.size(), i).str();
                out += ',';
                out += format_double(r.values[i]);
                out += ',';
                out += r.value_kind;
                out += ',';
                out += r.provenance;
                out += '\n';
            }
        }
        return out;
    }

    std::string render(OutputFormat format) const {
        return format == OutputFormat::Json ? to_json_text() : to_csv();
    }
};

namespace detail {

inline CorrelationRecord oracle_record(const ExperimentConfig& cfg, const StateVector& state,
                                       std::size_t index) {
    const SettingPattern& settings = cfg.settings[index];
    const JointDistribution dist = joint_probabilities(state, settings);
    CorrelationRecord r;
    r.settings = settings;
    r.value_kind = "probability";
    if (cfg.shots == 0) {
        r.provenance = "oracle";
        r.expectation = expectation(state, settings);
        r.values = dist.values();
    } else {
        // Per-record stream: seed + record index, so records are independent
        // of each other and of evaluation order.
        const std::uint64_t record_seed = cfg.seed + index;
        const SampleCounts counts = sample_outcomes(dist, cfg.shots, record_seed);
        const ExpectationEstimate est = estimate_expectation(counts);
        r.provenance = "sampled";
        r.expectation = est.mean;
        r.values = frequencies(counts).values();
        r.standard_error = est.standard_error;
        r.shots = cfg.shots;
        r.seed = record_seed;
    }
    if (cfg.phases && settings.all_x()) {
        const IndicatorTable table = full_table(*cfg.phases);
        r.cross_check = support_match(table, dist.support(kSupportTolerance));
    }
    return r;
}

inline CorrelationRecord amplitude_record(const ExperimentConfig& cfg, std::size_t index) {
    const SettingPattern& settings = cfg.settings[index];
    const IndicatorTable table = full_table(*cfg.phases);
    CorrelationRecord r;
    r.settings = settings;
    r.provenance = "amplitude";
    r.value_kind = "indicator";
    r.phases = *cfg.phases;
    r.indicators_exact = table.all_exact();
    double num = 0.0, den = 0.0;
    r.values.reserve(table.rows().size());
    for (const IndicatorRow& row : table.rows()) {
        r.values.push_back(row.indicator.value);
        num += row.pattern.product() * row.indicator.value;
        den += row.indicator.value;
    }
    r.expectation = den > 0.0 ? num / den : 0.0;
    return r;
}

inline CorrelationRecord lhv_record(const ExperimentConfig& cfg, const LhvAssignment& witness,
                                    std::size_t index) {
    const SettingPattern& settings = cfg.settings[index];
    CorrelationRecord r;
    r.settings = settings;
    r.provenance = "lhv";
    r.value_kind = "indicator";
    // A deterministic assignment predicts exactly one outcome pattern.
    std::vector<int> signs(settings.size());
    for (std::size_t i = 1; i <= settings.size(); ++i)
        signs[i - 1] = witness.value(i, settings.at(i));
    const OutcomePattern predicted{std::move(signs)};
    r.values.assign(std::size_t{1} << settings.size(), 0.0);
    r.values[predicted.index()] = 1.0;
    r.expectation = predicted.product();
    return r;
}

} // namespace detail

inline ExperimentReport run_experiment(const ExperimentConfig& cfg, unsigned threads = 1) {
    cfg.validate();
    ExperimentReport report;
    report.config = cfg;
    report.records.resize(cfg.settings.size());

    if (cfg.model == Model::Lhv) {
        const ParadoxReport paradox = paradox_report();
        const MerminAnalysis mermin = mermin_analysis();
        LhvSummary summary;
        summary.constraints = paradox.constraints;
        summary.assignments_checked = paradox.assignments_checked;
        summary.product_identity_holds = paradox.product_identity_holds;
        summary.forced_xxx_product = paradox.forced_xxx_product;
        summary.quantum_xxx_expectation = paradox.quantum_xxx_expectation;
        summary.max_satisfied = paradox.max_satisfied;
        summary.constraint_count = paradox.constraint_count;
        summary.witness_count = paradox.witness_count;
        summary.first_witness = paradox.first_witness.str();
        summary.mermin_classical_max = mermin.classical_max;
        summary.mermin_quantum_value = mermin.quantum_value;
        for (std::size_t i = 0; i < cfg.settings.size(); ++i)
            report.records[i] = detail::lhv_record(cfg, paradox.first_witness, i);
        report.lhv = std::move(summary);
        return report;
    }

    const auto make_record = [&](std::size_t i) {
        if (cfg.model == Model::Amplitude) return detail::amplitude_record(cfg, i);
        return detail::oracle_record(cfg, ghz_state(cfg.n), i);
    };

    if (threads <= 1 || cfg.settings.size() <= 1) {
        for (std::size_t i = 0; i < cfg.settings.size(); ++i)
            report.records[i] = make_record(i);
    } else {
        // Records land at their config position, so output order never
        // depends on completion order.
        const unsigned workers =
            std::min<unsigned>(threads, static_cast<unsigned>(cfg.settings.size()));
        std::vector<std::future<void>> futures;
        for (unsigned w = 0; w < workers; ++w) {
            futures.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t i = w; i < cfg.settings.size(); i += workers)
                    report.records[i] = make_record(i);
            }));
        }
        for (auto& f : futures) f.get();
    }
    return report;
}

// Writes the report where the config asks (or to the explicit path), using
// the config's format unless overridden.
inline void write_report(const ExperimentReport& report, const std::string& path,
                         OutputFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw domain_error("cannot open output file '" + path + "'");
    out << report.render(format);
}

} // namespace ghzlab
