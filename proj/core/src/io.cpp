#include "quantdyn/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "quantdyn/quantize.hpp"
#include "quantdyn/random.hpp"

namespace quantdyn {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw Error("format_double: conversion failed");
    return {buffer, ptr};
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError("not a number: '" + text + "'");
    }
    return value;
}

RealVector parse_vector(const std::string& text) {
    RealVector out;
    std::string token;
    std::istringstream stream(text);
    while (std::getline(stream, token, ',')) {
        out.push_back(parse_double(token));
    }
    if (out.empty()) throw ParseError("empty vector literal");
    return out;
}

// ----------------------------------------------------------------------------
// CSV
// ----------------------------------------------------------------------------

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,eta";
    for (std::size_t j = 1; j <= traj.n; ++j) out << ",y_" << j;
    for (std::size_t j = 1; j <= traj.n; ++j) out << ",w_" << j;
    out << ",delta\n";
    for (const auto& record : traj.records) {
        out << record.t << ',' << format_double(record.eta);
        for (double y : record.y) out << ',' << format_double(y);
        const double delta = record.w.delta;
        for (std::size_t j = 0; j < traj.n; ++j) {
            out << ',' << format_double(delta * static_cast<double>(record.w.signs[j]));
        }
        out << ',' << format_double(delta) << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string token;
    std::istringstream stream(line);
    while (std::getline(stream, token, ',')) fields.push_back(token);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& in, QuantizationMode mode) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("trajectory CSV: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    if (header.size() < 4 || header.front() != "t" || header[1] != "eta" ||
        header.back() != "delta" || (header.size() - 3) % 2 != 0) {
        throw ParseError("trajectory CSV: malformed header");
    }
    const std::size_t n = (header.size() - 3) / 2;
    for (std::size_t j = 0; j < n; ++j) {
        if (header[2 + j] != "y_" + std::to_string(j + 1) ||
            header[2 + n + j] != "w_" + std::to_string(j + 1)) {
            throw ParseError("trajectory CSV: malformed header");
        }
    }

    Trajectory traj;
    traj.n = n;
    traj.mode = mode;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError("trajectory CSV: row has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(header.size()));
        }
        TrajectoryRecord record;
        const double t_value = parse_double(fields[0]);
        record.t = static_cast<std::int64_t>(t_value);
        if (static_cast<double>(record.t) != t_value) {
            throw ParseError("trajectory CSV: non-integer t '" + fields[0] + "'");
        }
        record.eta = parse_double(fields[1]);
        record.y.resize(n);
        for (std::size_t j = 0; j < n; ++j) record.y[j] = parse_double(fields[2 + j]);
        const double delta = parse_double(fields.back());
        std::vector<std::int8_t> signs(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            const double w = parse_double(fields[2 + n + j]);
            signs[j] = w > 0.0 ? std::int8_t{1} : (w < 0.0 ? std::int8_t{-1} : std::int8_t{0});
        }
        try {
            record.w = QuantizedWeight(delta, SignPattern(std::move(signs)), mode);
        } catch (const InvalidValue& e) {
            throw ParseError("trajectory CSV: row t = " + fields[0] + ": " + e.what());
        }

        // Re-check the recorded state against the float weights.
        const QuantizedWeight expected = normalized_project(record.y, mode);
        if (!expected.same_state(record.w) || std::abs(expected.delta - delta) > 1e-9) {
            throw ParseError("trajectory CSV: row t = " + fields[0] +
                             " is inconsistent with its projection");
        }
        const auto expected_t = static_cast<std::int64_t>(traj.records.size());
        if (record.t != expected_t) {
            throw ParseError("trajectory CSV: records not consecutive at t = " + fields[0]);
        }
        traj.records.push_back(std::move(record));
    }
    if (traj.records.empty()) throw ParseError("trajectory CSV: no records");
    return traj;
}

void write_sign_matrix_csv(std::ostream& out,
                           const std::vector<std::vector<std::int8_t>>& matrix) {
    for (const auto& row : matrix) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k > 0) out << ',';
            out << static_cast<int>(row[k]);
        }
        out << '\n';
    }
}

// ----------------------------------------------------------------------------
// JSON helpers
// ----------------------------------------------------------------------------

namespace {

[[noreturn]] void fail_field(const std::string& path, const std::string& message) {
    throw ParseError(path + ": " + message);
}

const json& field(const json& doc, const std::string& path, const std::string& key) {
    if (!doc.is_object()) fail_field(path, "expected an object");
    auto it = doc.find(key);
    if (it == doc.end()) fail_field(path + "." + key, "missing");
    return *it;
}

double number_field(const json& doc, const std::string& path) {
    if (!doc.is_number()) fail_field(path, "expected a number");
    return doc.get<double>();
}

std::int64_t integer_field(const json& doc, const std::string& path) {
    if (!doc.is_number_integer()) fail_field(path, "expected an integer");
    return doc.get<std::int64_t>();
}

std::uint64_t seed_field(const json& doc, const std::string& path) {
    if (!doc.is_number_unsigned() && !doc.is_number_integer()) {
        fail_field(path, "expected an integer seed");
    }
    return doc.get<std::uint64_t>();
}

RealVector vector_field(const json& doc, const std::string& path) {
    if (!doc.is_array() || doc.empty()) fail_field(path, "expected a nonempty array");
    RealVector out;
    out.reserve(doc.size());
    for (const auto& x : doc) {
        if (!x.is_number()) fail_field(path, "expected numeric entries");
        out.push_back(x.get<double>());
    }
    return out;
}

QuantizationMode mode_from_string(const std::string& text, const std::string& path) {
    if (text == "binary") return QuantizationMode::Binary;
    if (text == "ternary") return QuantizationMode::Ternary;
    fail_field(path, "expected \"binary\" or \"ternary\"");
}

RealVector draw_unit_teacher(std::uint64_t seed, std::size_t n) {
    GaussianSampler sampler(seed, streams::kTeacher);
    RealVector w(n);
    while (true) {
        sampler.fill(w);
        const double w_norm = norm(w);
        if (w_norm == 0.0) continue;
        bool has_zero = false;
        for (double& x : w) {
            x /= w_norm;
            if (x == 0.0) has_zero = true;
        }
        if (!has_zero) return w;
    }
}

}  // namespace

json config_to_json(const ExperimentConfig& config) {
    json teacher;
    teacher["w_star"] = config.teacher.w_star;
    if (config.teacher.v) {
        teacher["v"] = *config.teacher.v;
    } else {
        teacher["v_norm_sq"] = config.teacher.v_norm_sq;
    }

    json schedule;
    switch (config.schedule.kind()) {
        case LearningRateSchedule::Kind::Constant:
            schedule = {{"kind", "constant"}, {"eta", config.schedule.parameter()}};
            break;
        case LearningRateSchedule::Kind::Harmonic:
            schedule = {{"kind", "harmonic"}, {"a", config.schedule.parameter()}};
            break;
        case LearningRateSchedule::Kind::Table:
            schedule = {{"kind", "table"},
                        {"values", config.schedule.values()},
                        {"repeat_last", config.schedule.repeat_last()}};
            break;
    }

    json gradient;
    if (config.gradient_source == GradientSource::Population) {
        gradient = {{"source", "population"}};
    } else {
        gradient = {{"source", "sampled"},
                    {"batch", config.batch_size},
                    {"seed", config.sample_seed}};
    }

    json doc;
    doc["label"] = config.label;
    doc["mode"] = to_string(config.mode);
    doc["teacher"] = std::move(teacher);
    doc["schedule"] = std::move(schedule);
    doc["iterations"] = config.iterations;
    if (config.y0) {
        doc["y0"] = *config.y0;
    } else {
        doc["y0"] = {{"seed", config.y0_seed}, {"scale", config.y0_scale}};
    }
    doc["gradient"] = std::move(gradient);
    doc["update_rule"] = to_string(config.update_rule);
    if (config.sign_tail) {
        doc["outputs"] = {{"sign_tail", *config.sign_tail}};
    }
    return doc;
}

ExperimentConfig config_from_json(const json& doc) {
    const json& root = doc.contains("config") ? doc.at("config") : doc;
    if (!root.is_object()) throw ParseError("config: expected an object");
    ExperimentConfig config;

    if (root.contains("label")) {
        if (!root.at("label").is_string()) fail_field("config.label", "expected a string");
        config.label = root.at("label").get<std::string>();
    }
    const json& mode = field(root, "config", "mode");
    if (!mode.is_string()) fail_field("config.mode", "expected a string");
    config.mode = mode_from_string(mode.get<std::string>(), "config.mode");

    // Teacher: explicit arrays or seeded draws, resolved here.
    const json& teacher = field(root, "config", "teacher");
    const json& w_star_doc = field(teacher, "config.teacher", "w_star");
    RealVector w_star;
    if (w_star_doc.is_array()) {
        w_star = vector_field(w_star_doc, "config.teacher.w_star");
    } else if (w_star_doc.is_object()) {
        const auto seed = seed_field(field(w_star_doc, "config.teacher.w_star", "seed"),
                                     "config.teacher.w_star.seed");
        const auto n = integer_field(field(w_star_doc, "config.teacher.w_star", "n"),
                                     "config.teacher.w_star.n");
        if (n < 1) fail_field("config.teacher.w_star.n", "must be at least 1");
        w_star = draw_unit_teacher(seed, static_cast<std::size_t>(n));
    } else {
        fail_field("config.teacher.w_star", "expected an array or a {seed, n} object");
    }
    const double w_norm = norm(w_star);
    if (w_norm == 0.0) throw InvalidValue("config.teacher.w_star: zero vector");
    if (std::abs(w_norm - 1.0) > 1e-12) {
        // Loss and dynamics assume a unit teacher; normalize rather than reject.
        for (double& x : w_star) x /= w_norm;
    }

    std::optional<RealVector> v;
    if (teacher.contains("v")) {
        const json& v_doc = teacher.at("v");
        if (v_doc.is_array()) {
            v = vector_field(v_doc, "config.teacher.v");
        } else if (v_doc.is_object()) {
            const auto seed =
                seed_field(field(v_doc, "config.teacher.v", "seed"), "config.teacher.v.seed");
            const auto m =
                integer_field(field(v_doc, "config.teacher.v", "m"), "config.teacher.v.m");
            if (m < 1) fail_field("config.teacher.v.m", "must be at least 1");
            GaussianSampler sampler(seed, streams::kSecondLayer);
            RealVector draw(static_cast<std::size_t>(m));
            sampler.fill(draw);
            v = std::move(draw);
        } else {
            fail_field("config.teacher.v", "expected an array or a {seed, m} object");
        }
    }
    if (v) {
        config.teacher = Teacher::from_v(std::move(w_star), std::move(*v));
        if (teacher.contains("v_norm_sq")) {
            const double declared = number_field(teacher.at("v_norm_sq"),
                                                 "config.teacher.v_norm_sq");
            if (std::abs(declared - config.teacher.v_norm_sq) >
                1e-9 * std::max(1.0, declared)) {
                throw InvalidValue("config.teacher.v_norm_sq: inconsistent with v");
            }
        }
    } else {
        if (!teacher.contains("v_norm_sq")) {
            fail_field("config.teacher.v_norm_sq", "missing (required without v)");
        }
        const double v_norm_sq =
            number_field(teacher.at("v_norm_sq"), "config.teacher.v_norm_sq");
        config.teacher = Teacher::population_only(std::move(w_star), v_norm_sq);
    }

    // Schedule.
    const json& schedule = field(root, "config", "schedule");
    const json& kind = field(schedule, "config.schedule", "kind");
    if (!kind.is_string()) fail_field("config.schedule.kind", "expected a string");
    const std::string kind_text = kind.get<std::string>();
    if (kind_text == "constant") {
        config.schedule = LearningRateSchedule::constant(
            number_field(field(schedule, "config.schedule", "eta"), "config.schedule.eta"));
    } else if (kind_text == "harmonic") {
        config.schedule = LearningRateSchedule::harmonic(
            number_field(field(schedule, "config.schedule", "a"), "config.schedule.a"));
    } else if (kind_text == "table") {
        const RealVector values = vector_field(
            field(schedule, "config.schedule", "values"), "config.schedule.values");
        bool repeat_last = true;
        if (schedule.contains("repeat_last")) {
            if (!schedule.at("repeat_last").is_boolean()) {
                fail_field("config.schedule.repeat_last", "expected a boolean");
            }
            repeat_last = schedule.at("repeat_last").get<bool>();
        }
        config.schedule = LearningRateSchedule::table(values, repeat_last);
    } else {
        fail_field("config.schedule.kind", "expected constant, harmonic, or table");
    }

    config.iterations =
        integer_field(field(root, "config", "iterations"), "config.iterations");

    // Start point.
    const json& y0 = field(root, "config", "y0");
    if (y0.is_array()) {
        config.y0 = vector_field(y0, "config.y0");
    } else if (y0.is_object()) {
        config.y0_seed = seed_field(field(y0, "config.y0", "seed"), "config.y0.seed");
        if (y0.contains("scale")) {
            config.y0_scale = number_field(y0.at("scale"), "config.y0.scale");
        }
    } else {
        fail_field("config.y0", "expected an array or a {seed, scale} object");
    }

    // Gradient source.
    if (root.contains("gradient")) {
        const json& gradient = root.at("gradient");
        const json& source = field(gradient, "config.gradient", "source");
        if (!source.is_string()) fail_field("config.gradient.source", "expected a string");
        const std::string source_text = source.get<std::string>();
        if (source_text == "population") {
            config.gradient_source = GradientSource::Population;
        } else if (source_text == "sampled") {
            config.gradient_source = GradientSource::Sampled;
            if (gradient.contains("batch")) {
                config.batch_size = static_cast<int>(
                    integer_field(gradient.at("batch"), "config.gradient.batch"));
            }
            if (gradient.contains("seed")) {
                config.sample_seed = seed_field(gradient.at("seed"), "config.gradient.seed");
            }
        } else {
            fail_field("config.gradient.source", "expected population or sampled");
        }
    }

    if (root.contains("update_rule")) {
        const json& rule = root.at("update_rule");
        if (!rule.is_string()) fail_field("config.update_rule", "expected a string");
        const std::string rule_text = rule.get<std::string>();
        if (rule_text == "quant") {
            config.update_rule = UpdateRule::Quant;
        } else if (rule_text == "binaryconnect") {
            config.update_rule = UpdateRule::BinaryConnectStyle;
        } else if (rule_text == "pgd") {
            throw InvalidValue(
                "config.update_rule: true-gradient PGD is not available; the gradient of the "
                "binary-activation loss is almost everywhere zero, so the update would never "
                "move. Use \"quant\" or \"binaryconnect\".");
        } else {
            fail_field("config.update_rule", "expected quant or binaryconnect");
        }
    }

    if (root.contains("outputs")) {
        const json& outputs = root.at("outputs");
        if (!outputs.is_object()) fail_field("config.outputs", "expected an object");
        if (outputs.contains("sign_tail")) {
            config.sign_tail = static_cast<int>(
                integer_field(outputs.at("sign_tail"), "config.outputs.sign_tail"));
        }
    }

    config.validate();
    return config;
}

json manifest_for(const ExperimentConfig& resolved_config) {
    json doc;
    doc["tool"] = "quantdyn";
    doc["schema"] = 1;
    doc["config"] = config_to_json(resolved_config);
    return doc;
}

// ----------------------------------------------------------------------------
// Reports
// ----------------------------------------------------------------------------

json to_json(const QuantizedWeight& w) {
    json doc;
    doc["mode"] = to_string(w.mode);
    doc["delta"] = w.delta;
    std::vector<int> signs(w.signs.size());
    for (std::size_t i = 0; i < w.signs.size(); ++i) signs[i] = w.signs[i];
    doc["signs"] = std::move(signs);
    doc["vector"] = w.vector();
    return doc;
}

json to_json(const RecurrenceReport& report) {
    json doc;
    doc["target"] = to_json(report.target);
    doc["visit_times"] = report.visit_times;
    doc["visit_count"] = report.visit_count;
    doc["first_visit"] = report.first_visit ? json(*report.first_visit) : json();
    doc["gaps"] = report.gaps;
    return doc;
}

json to_json(const ConditionReport& report) {
    json doc;
    doc["mode"] = to_string(report.mode);
    doc["satisfied"] = report.satisfied;
    doc["margin"] = report.margin;
    if (report.binary) {
        json details;
        details["sum_below"] = report.binary->sum_below;
        details["bound"] = report.binary->bound;
        details["below_threshold_coordinates"] = report.binary->below_threshold_coordinates;
        details["contributions"] = report.binary->contributions;
        details["teacher_quantized"] = report.binary->teacher_quantized;
        doc["binary"] = std::move(details);
    }
    if (report.ternary) {
        json details;
        json vertices = json::array();
        for (const auto& z : report.ternary->vertices.vertices) vertices.push_back(to_json(z));
        details["vertices"] = std::move(vertices);
        details["lambdas"] = report.ternary->lambdas;
        details["lambda_tail_sum"] = report.ternary->lambda_tail_sum;
        doc["ternary"] = std::move(details);
    }
    return doc;
}

json to_json(const RegionEntryTimes& times) {
    json doc;
    doc["orthant_entry"] = times.orthant_entry ? json(*times.orthant_entry) : json("not yet");
    doc["cone_entry"] = times.cone_entry ? json(*times.cone_entry) : json("not yet");
    return doc;
}

json to_json(const std::vector<CoordinateOscillation>& report) {
    json doc = json::array();
    for (const auto& entry : report) {
        json item;
        item["coordinate"] = entry.coordinate;
        item["sign_change_count"] = entry.sign_change_count;
        item["last_change_t"] = entry.last_change_t ? json(*entry.last_change_t) : json();
        item["attained_signs"] = entry.attained_signs;
        doc.push_back(std::move(item));
    }
    return doc;
}

json to_json(const std::vector<VertexVisitStats>& stats) {
    json doc = json::array();
    for (const auto& entry : stats) {
        json item;
        item["vertex"] = to_json(entry.vertex);
        item["lambda"] = entry.lambda;
        item["empirical_freq"] = entry.empirical_freq;
        item["visits"] = entry.visits;
        doc.push_back(std::move(item));
    }
    return doc;
}

}  // namespace quantdyn
