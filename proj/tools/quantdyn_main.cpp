// quantdyn command-line front end.
//
// Subcommands: project, run, analyze, verify, conditions.
// Exit codes: 0 success, 1 verification failure, 2 parse/format error,
// 3 invalid value, 4 dimension mismatch.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "quantdyn/analysis.hpp"
#include "quantdyn/dynamics.hpp"
#include "quantdyn/io.hpp"
#include "quantdyn/quantize.hpp"
#include "quantdyn/verification.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace quantdyn;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitInvalidValue = 3;
constexpr int kExitDimensionMismatch = 4;

std::string vector_text(const RealVector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_double(v[i]);
    }
    return out + ")";
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return doc;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

Teacher teacher_from_flags(const std::string& vec_text, const std::string& file_text,
                           double v_norm_sq) {
    RealVector w_star;
    if (!vec_text.empty()) {
        w_star = parse_vector(vec_text);
    } else if (!file_text.empty()) {
        const json doc = read_json_file(file_text);
        if (!doc.contains("w_star") || !doc.at("w_star").is_array()) {
            throw ParseError(file_text + ": expected an object with a \"w_star\" array");
        }
        w_star = doc.at("w_star").get<RealVector>();
    } else {
        throw InvalidValue("teacher required: pass --teacher-vec or --teacher-file");
    }
    const double w_norm = norm(w_star);
    if (w_norm == 0.0) throw InvalidValue("teacher: zero vector");
    if (std::abs(w_norm - 1.0) > 1e-12) {
        std::cerr << "warning: teacher not unit-norm (|w*| = " << format_double(w_norm)
                  << "); normalizing\n";
        for (double& x : w_star) x /= w_norm;
    }
    return Teacher::population_only(std::move(w_star), v_norm_sq);
}

// ---------------------------------------------------------------------------
// project
// ---------------------------------------------------------------------------

int cmd_project(const std::string& vec_text, const std::string& mode_text, bool as_json) {
    const RealVector y = parse_vector(vec_text);
    const QuantizationMode mode =
        mode_text == "ternary" ? QuantizationMode::Ternary : QuantizationMode::Binary;
    if (is_zero(y)) throw InvalidValue("project: zero vector has no projection direction");

    const QuantizedWeight projection =
        mode == QuantizationMode::Binary ? project_binary(y) : project_ternary(y);
    const QuantizedWeight normalized = normalized_project(y, mode);

    std::optional<BruteForceResult> oracle;
    std::optional<bool> oracle_ok;
    double oracle_gap = 0.0;
    if (y.size() <= 12) {
        oracle = brute_force_project(y, mode);
        RealVector diff = y;
        const RealVector p = projection.vector();
        for (std::size_t i = 0; i < y.size(); ++i) diff[i] -= p[i];
        oracle_gap = std::abs(norm(diff) - std::sqrt(oracle->distance_sq));
        oracle_ok = oracle_gap <= 1e-10;
    }

    if (as_json) {
        json doc;
        doc["input"] = y;
        doc["mode"] = to_string(mode);
        doc["projection"] = to_json(projection);
        doc["normalized"] = to_json(normalized);
        if (oracle_ok) {
            doc["oracle"] = {{"distance_gap", oracle_gap},
                             {"ok", *oracle_ok},
                             {"optimal_patterns", oracle->optimal_patterns}};
        } else {
            doc["oracle"] = "skipped (n > 12)";
        }
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << "projection " << vector_text(projection.vector())
                  << "  delta=" << format_double(projection.delta) << '\n';
        std::cout << "normalized " << vector_text(normalized.vector())
                  << "  delta=" << format_double(normalized.delta) << '\n';
        if (oracle_ok) {
            std::cout << "oracle " << (*oracle_ok ? "ok" : "MISMATCH")
                      << " (distance gap " << format_double(oracle_gap) << ")\n";
        } else {
            std::cout << "oracle skipped (n > 12)\n";
        }
    }
    if (oracle_ok && !*oracle_ok) return kExitVerificationFailure;
    return kExitOk;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

ExperimentConfig preset_config(const std::string& name) {
    if (name == "example1") return example1_config({0.5, 0.5, 0.5, 0.5});
    if (name == "synthetic-fig2") return synthetic_fig2_config(QuantizationMode::Binary);
    if (name == "synthetic-fig2-ternary") {
        return synthetic_fig2_config(QuantizationMode::Ternary);
    }
    throw InvalidValue("unknown preset '" + name +
                       "' (available: example1, synthetic-fig2, synthetic-fig2-ternary)");
}

void execute_run(const ExperimentConfig& config, const fs::path& out_dir) {
    const Trajectory traj = run(config);
    fs::create_directories(out_dir);

    std::ostringstream trajectory_csv;
    write_trajectory_csv(trajectory_csv, traj);
    write_text_file(out_dir / "trajectory.csv", trajectory_csv.str());

    std::optional<std::size_t> tail;
    if (config.sign_tail) tail = static_cast<std::size_t>(*config.sign_tail);
    std::ostringstream signs_csv;
    write_sign_matrix_csv(signs_csv, sign_matrix(traj, tail));
    write_text_file(out_dir / "signs.csv", signs_csv.str());

    write_text_file(out_dir / "manifest.json", manifest_for(*traj.config).dump(2) + "\n");
}

int cmd_run(const std::string& preset, const std::vector<std::string>& config_paths,
            const fs::path& out_dir, std::optional<std::uint64_t> seed_override,
            std::optional<std::int64_t> iterations_override, bool print_config) {
    std::vector<ExperimentConfig> configs;
    std::vector<std::string> names;
    if (!preset.empty()) {
        configs.push_back(preset_config(preset));
        names.push_back(preset);
    }
    for (const auto& path : config_paths) {
        configs.push_back(config_from_json(read_json_file(path)));
        names.push_back(fs::path(path).stem().string());
    }
    if (configs.empty()) throw InvalidValue("run: pass --preset or --config");

    for (auto& config : configs) {
        if (seed_override) {
            config.y0.reset();
            config.y0_seed = *seed_override;
        }
        if (iterations_override) config.iterations = *iterations_override;
        config.validate();
        if (!config.schedule.sum_diverges()) {
            std::cerr << "warning: schedule sum does not diverge; the recurrence guarantees "
                         "assume it does\n";
        }
    }

    if (print_config) {
        for (const auto& config : configs) std::cout << config_to_json(config).dump(2) << '\n';
        return kExitOk;
    }

    if (configs.size() == 1) {
        execute_run(configs.front(), out_dir);
        std::cerr << "wrote " << (out_dir / "trajectory.csv").string() << ", signs.csv, "
                  << "manifest.json\n";
        return kExitOk;
    }

    // Batch mode: independent runs, one subdirectory each, concurrent.
    std::vector<std::future<void>> tasks;
    tasks.reserve(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const fs::path sub = out_dir / (std::to_string(i) + "-" + names[i]);
        tasks.push_back(std::async(std::launch::async, execute_run, configs[i], sub));
    }
    for (auto& task : tasks) task.get();
    std::cerr << "wrote " << configs.size() << " runs under " << out_dir.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int cmd_analyze(const std::string& run_dir, const std::string& trajectory_path,
                const std::string& manifest_path, const std::string& teacher_vec,
                double v_norm_sq, const std::string& mode_text, double tail_fraction,
                std::size_t window, const std::string& out_path) {
    std::optional<ExperimentConfig> config;
    fs::path csv_path;
    if (!run_dir.empty()) {
        config = config_from_json(read_json_file(fs::path(run_dir) / "manifest.json"));
        csv_path = fs::path(run_dir) / "trajectory.csv";
    } else {
        if (trajectory_path.empty()) {
            throw InvalidValue("analyze: pass --run-dir or --trajectory");
        }
        csv_path = trajectory_path;
        if (!manifest_path.empty()) {
            config = config_from_json(read_json_file(manifest_path));
        }
    }

    QuantizationMode mode;
    Teacher teacher;
    if (config) {
        mode = config->mode;
        teacher = config->teacher;
    } else {
        if (teacher_vec.empty()) {
            throw InvalidValue("analyze: pass --manifest or --teacher-vec");
        }
        mode = mode_text == "ternary" ? QuantizationMode::Ternary : QuantizationMode::Binary;
        teacher = teacher_from_flags(teacher_vec, "", v_norm_sq);
    }

    std::ifstream in(csv_path);
    if (!in) throw ParseError("cannot open " + csv_path.string());
    Trajectory traj = read_trajectory_csv(in, mode);
    require_same_dimension(teacher.n(), traj.n, "analyze: teacher vs trajectory");
    traj.config = config;

    const QuantizedWeight optimum = normalized_project(teacher.w_star, mode);
    json report;
    report["mode"] = to_string(mode);
    report["n"] = traj.n;
    report["records"] = traj.size();
    report["optimum"] = to_json(optimum);
    report["recurrence"] = to_json(detect_recurrence(traj, optimum));

    const std::size_t effective_window = std::min(window, traj.size());
    const auto cycle = detect_cycle(traj, effective_window);
    report["cycle"] = {{"window", effective_window},
                       {"period", cycle ? json(*cycle) : json()}};

    const auto limit_set = tail_limit_set(traj, tail_fraction);
    json states = json::array();
    const VertexSet teacher_vertices = vertex_set(teacher.w_star);
    bool subset = true;
    for (const auto& w : limit_set) {
        states.push_back(to_json(w));
        bool found = false;
        for (const auto& z : teacher_vertices.vertices) {
            if (z.signs == w.signs) found = true;
        }
        subset = subset && found;
    }
    report["tail_limit_set"] = {{"tail_fraction", tail_fraction},
                                {"size", limit_set.size()},
                                {"subset_of_teacher_vertex_set", subset},
                                {"states", std::move(states)}};

    report["region_entry_times"] = to_json(region_entry_times(traj, teacher));
    report["oscillation"] = to_json(sign_oscillation_report(traj));
    report["condition"] = to_json(mode == QuantizationMode::Binary
                                      ? check_binary_condition(teacher)
                                      : check_ternary_condition(teacher));
    if (mode == QuantizationMode::Ternary) {
        report["visit_frequency"] = to_json(visit_frequency_vs_lambda(traj, teacher, 0.5));
    }

    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
        std::cerr << "wrote " << out_path << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(std::uint64_t seed, std::size_t instances, std::uint64_t samples,
               double corrupt_constant, const std::string& out_path) {
    const McAgreementReport report =
        run_mc_agreement(seed, instances, samples, 4.0, corrupt_constant);

    json doc;
    doc["seed"] = seed;
    doc["samples"] = report.samples;
    doc["z_threshold"] = report.z_threshold;
    doc["all_pass"] = report.all_pass;
    json items = json::array();
    for (const auto& check : report.instances) {
        items.push_back({{"n", check.n},
                         {"m", check.m},
                         {"instance_seed", check.instance_seed},
                         {"max_z_grad", check.max_z_grad},
                         {"z_loss", check.z_loss},
                         {"pass", check.pass}});
        std::cerr << "instance seed=" << check.instance_seed << " n=" << check.n
                  << " m=" << check.m << " max_z_grad=" << format_double(check.max_z_grad)
                  << " z_loss=" << format_double(check.z_loss)
                  << (check.pass ? "  ok" : "  FAIL") << '\n';
    }
    doc["instances"] = std::move(items);

    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
        std::cerr << "wrote " << out_path << '\n';
    }
    return report.all_pass ? kExitOk : kExitVerificationFailure;
}

// ---------------------------------------------------------------------------
// conditions
// ---------------------------------------------------------------------------

int cmd_conditions(const std::string& teacher_vec, const std::string& teacher_file,
                   const std::string& mode_text) {
    const Teacher teacher = teacher_from_flags(teacher_vec, teacher_file, 1.0);
    const ConditionReport report = mode_text == "ternary" ? check_ternary_condition(teacher)
                                                          : check_binary_condition(teacher);
    std::cout << to_json(report).dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantized training dynamics: projections, runs, and recurrence analysis"};
    app.require_subcommand(1);

    // project
    auto* project = app.add_subcommand("project", "project a vector onto the quantized set");
    std::string project_vec, project_mode = "binary";
    bool project_json = false;
    project->add_option("--vec", project_vec, "comma-separated vector, e.g. 2,1,0.1")
        ->required();
    project->add_option("--mode", project_mode, "binary or ternary")
        ->check(CLI::IsMember({"binary", "ternary"}));
    project->add_flag("--json", project_json, "machine-readable output");

    // run
    auto* run_cmd = app.add_subcommand("run", "run an experiment and write CSV artifacts");
    std::string run_preset;
    std::vector<std::string> run_configs;
    std::string run_out = "run_out";
    std::optional<std::uint64_t> run_seed;
    std::optional<std::int64_t> run_iterations;
    bool run_print_config = false;
    run_cmd->add_option("--preset", run_preset,
                        "example1, synthetic-fig2, or synthetic-fig2-ternary");
    run_cmd->add_option("--config", run_configs,
                        "experiment config JSON (repeat for a concurrent batch)");
    run_cmd->add_option("--out", run_out, "output directory (default run_out)");
    run_cmd->add_option("--seed", run_seed, "override: restart from a fresh seeded y0");
    run_cmd->add_option("--iterations", run_iterations, "override the iteration budget");
    run_cmd->add_flag("--print-config", run_print_config,
                      "print the resolved config instead of running");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "recurrence/cycle/limit-set report");
    std::string analyze_run_dir, analyze_traj, analyze_manifest, analyze_teacher_vec;
    std::string analyze_mode = "binary", analyze_out;
    double analyze_v_norm_sq = 1.0, analyze_tail = 0.5;
    std::size_t analyze_window = 1000;
    analyze->add_option("--run-dir", analyze_run_dir, "directory written by `run`");
    analyze->add_option("--trajectory", analyze_traj, "trajectory CSV path");
    analyze->add_option("--manifest", analyze_manifest, "manifest JSON path");
    analyze->add_option("--teacher-vec", analyze_teacher_vec, "teacher as comma-separated vector");
    analyze->add_option("--v-norm-sq", analyze_v_norm_sq, "second-layer norm squared");
    analyze->add_option("--mode", analyze_mode, "binary or ternary")
        ->check(CLI::IsMember({"binary", "ternary"}));
    analyze->add_option("--tail", analyze_tail, "tail fraction for limit sets (default 0.5)");
    analyze->add_option("--window", analyze_window, "cycle detection window (default 1000)");
    analyze->add_option("--out", analyze_out, "report path (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "Monte-Carlo vs closed-form agreement suite");
    std::uint64_t verify_seed = 20240901;
    std::size_t verify_instances = 20;
    std::uint64_t verify_samples = 1000000;
    double verify_corrupt = 1.0;
    std::string verify_out;
    verify->add_option("--seed", verify_seed, "suite seed");
    verify->add_option("--instances", verify_instances, "number of random instances");
    verify->add_option("--samples", verify_samples, "Monte-Carlo draws per estimate");
    verify->add_option("--out", verify_out, "report path (default stdout)");
    verify
        ->add_option("--corrupt-constant", verify_corrupt,
                     "negative-control hook: scale the closed forms")
        ->group("");  // test hook, hidden from --help

    // conditions
    auto* conditions = app.add_subcommand("conditions", "recurrence condition report");
    std::string cond_teacher_vec, cond_teacher_file, cond_mode = "binary";
    conditions->add_option("--teacher-vec", cond_teacher_vec, "teacher as comma-separated vector");
    conditions->add_option("--teacher-file", cond_teacher_file, "JSON file with a w_star array");
    conditions->add_option("--mode", cond_mode, "binary or ternary")
        ->check(CLI::IsMember({"binary", "ternary"}));

    try {
        app.parse(argc, argv);
        if (project->parsed()) return cmd_project(project_vec, project_mode, project_json);
        if (run_cmd->parsed()) {
            return cmd_run(run_preset, run_configs, run_out, run_seed, run_iterations,
                           run_print_config);
        }
        if (analyze->parsed()) {
            return cmd_analyze(analyze_run_dir, analyze_traj, analyze_manifest,
                               analyze_teacher_vec, analyze_v_norm_sq, analyze_mode,
                               analyze_tail, analyze_window, analyze_out);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_seed, verify_instances, verify_samples, verify_corrupt,
                              verify_out);
        }
        if (conditions->parsed()) {
            return cmd_conditions(cond_teacher_vec, cond_teacher_file, cond_mode);
        }
        return kExitOk;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDimensionMismatch;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const InvalidValue& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidValue;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidValue;
    }
}
