// Acceptance suite: one line per criterion, nonzero exit when any fails.
//
// Each criterion pins its tolerances in code; the suite is fully seeded and
// deterministic, so a pass is reproducible bit for bit.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../support/instances.hpp"
#include "quantdyn/analysis.hpp"
#include "quantdyn/io.hpp"
#include "quantdyn/quantize.hpp"
#include "quantdyn/verification.hpp"

using namespace quantdyn;
using namespace quantdyn::testing;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool pass = true;
    std::string detail;

    void fail(const std::string& message) {
        pass = false;
        if (detail.empty()) detail = message;
    }
    void note(const std::string& message) {
        if (detail.empty()) detail = message;
    }
};

RealVector random_nonzero(GaussianSampler& sampler, std::size_t n) {
    RealVector x(n);
    do {
        sampler.fill(x);
    } while (is_zero(x));
    return x;
}

double distance_to(const RealVector& y, const QuantizedWeight& w) {
    const RealVector p = w.vector();
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - p[i]) * (y[i] - p[i]);
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// 1. Projection oracle equivalence
// ---------------------------------------------------------------------------

Check criterion_projection_oracle() {
    Check check;
    GaussianSampler sampler(1001, 0);
    double worst = 0.0;
    for (std::size_t n = 2; n <= 8; ++n) {
        for (int rep = 0; rep < 10000; ++rep) {
            const RealVector y = random_nonzero(sampler, n);
            const double binary_gap =
                std::abs(distance_to(y, project_binary(y)) -
                         std::sqrt(brute_force_project(y, QuantizationMode::Binary).distance_sq));
            const double ternary_gap =
                std::abs(distance_to(y, project_ternary(y)) -
                         std::sqrt(brute_force_project(y, QuantizationMode::Ternary).distance_sq));
            worst = std::max({worst, binary_gap, ternary_gap});
            if (binary_gap > 1e-10 || ternary_gap > 1e-10) {
                check.fail("distance gap above 1e-10 at n = " + std::to_string(n));
            }
        }
    }
    check.note("70000 vectors per mode, worst distance gap " + format_double(worst));
    return check;
}

// ---------------------------------------------------------------------------
// 2. Support threshold
// ---------------------------------------------------------------------------

Check criterion_support_threshold() {
    Check check;
    GaussianSampler sampler(1002, 0);
    int zeroed = 0;
    const int total = 10000;
    for (int rep = 0; rep < total; ++rep) {
        const std::size_t n = 2 + rep % 11;
        RealVector y = random_nonzero(sampler, n);
        const std::size_t j = rep % n;
        double rest_l1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j) rest_l1 += std::abs(y[i]);
        }
        if (rest_l1 == 0.0) {
            --rep;
            continue;
        }
        y[j] = 0.999 * sampler.next_uniform() * rest_l1 / (5.0 * static_cast<double>(n) - 1.0);
        if (std::abs(y[j]) >= l1_norm(y) / (5.0 * static_cast<double>(n))) {
            check.fail("planting failed");
            continue;
        }
        if (project_ternary(y).signs[j] == 0) {
            ++zeroed;
        } else {
            check.fail("coordinate below |y|_1/(5n) survived at n = " + std::to_string(n));
        }
    }
    check.note(std::to_string(zeroed) + "/" + std::to_string(total) + " planted coordinates zeroed");
    return check;
}

// ---------------------------------------------------------------------------
// 3. Monte-Carlo agreement for the closed forms
// ---------------------------------------------------------------------------

Check criterion_mc_agreement() {
    Check check;
    const McAgreementReport report = run_mc_agreement(20240901, 20, 1000000, 4.0, 1.0);
    double worst = 0.0;
    for (const auto& instance : report.instances) {
        worst = std::max({worst, instance.max_z_grad, instance.z_loss});
        if (!instance.pass) {
            check.fail("instance seed " + std::to_string(instance.instance_seed) +
                       " outside 4 standard errors");
        }
    }
    check.note("20 instances x 1e6 draws, worst z-score " + format_double(worst));
    return check;
}

// ---------------------------------------------------------------------------
// 4. Period-3 example exactness
// ---------------------------------------------------------------------------

Check criterion_example1_exact() {
    Check check;
    const ExperimentConfig config = example1_config({0.5, 0.5, 0.5, 0.5}, 0.1, 1.0, 1003);
    const Trajectory traj = run(config);
    const QuantizedWeight optimum =
        normalized_project(config.teacher.w_star, QuantizationMode::Binary);
    for (std::int64_t t = 0; t <= 1000; ++t) {
        if (!traj.records[static_cast<std::size_t>(t)].w.same_state(
                traj.records[static_cast<std::size_t>(t + 3)].w)) {
            check.fail("period 3 broken at t = " + std::to_string(t));
        }
    }
    for (const auto& record : traj.records) {
        if (record.w.same_state(optimum)) {
            check.fail("optimum visited at t = " + std::to_string(record.t));
        }
    }
    check.note("w^{t+3} = w^t exactly on [0, 1000]; optimum never visited");
    return check;
}

// ---------------------------------------------------------------------------
// 5-9. Long-run dynamics suites
// ---------------------------------------------------------------------------

struct RunInstance {
    Teacher teacher;
    Trajectory trajectory;
};

std::vector<RunInstance> g_growth_pool;  // instances shared with criterion 9

Check criterion_binary_recurrence() {
    Check check;
    int instance_id = 0;
    for (const std::size_t n : {std::size_t{4}, std::size_t{8}}) {
        const double margin_floor = 0.2 / std::sqrt(static_cast<double>(n));
        for (int rep = 0; rep < 5; ++rep, ++instance_id) {
            const Teacher teacher =
                make_binary_recurrence_teacher(n, 500 + static_cast<std::uint64_t>(instance_id));
            const ConditionReport condition = check_binary_condition(teacher);
            if (!condition.satisfied || condition.margin < margin_floor) {
                check.fail("constructed teacher misses the margin floor");
                continue;
            }
            ExperimentConfig config = experiment_for(
                teacher, QuantizationMode::Binary, 10000,
                900 + static_cast<std::uint64_t>(instance_id), 0.5);
            const Trajectory traj = run(config);
            const QuantizedWeight optimum =
                normalized_project(teacher.w_star, QuantizationMode::Binary);
            const RecurrenceReport recurrence = detect_recurrence(traj, optimum);

            // Visits inside the final 50%, spread over its quarters.
            int in_window = 0;
            int quarters[4] = {0, 0, 0, 0};
            for (const auto t : recurrence.visit_times) {
                if (t >= 5000) {
                    ++in_window;
                    ++quarters[std::min<std::int64_t>(3, (t - 5000) / 1250)];
                }
            }
            int quarters_hit = 0;
            for (const int q : quarters) quarters_hit += q > 0 ? 1 : 0;
            if (in_window < 10) {
                check.fail("instance " + std::to_string(instance_id) + ": only " +
                           std::to_string(in_window) + " visits in the final 50%");
            }
            if (quarters_hit < 3) {
                check.fail("instance " + std::to_string(instance_id) +
                           ": visits not spread across the final 50%");
            }
            g_growth_pool.push_back({teacher, traj});
        }
    }
    check.note("10 teachers (n = 4, 8), margin >= 0.2/sqrt(n), visits spread over the tail");
    return check;
}

Check criterion_ternary_confinement() {
    Check check;
    int instance_id = 0;
    for (const std::size_t n : {std::size_t{4}, std::size_t{8}}) {
        for (int rep = 0; rep < 5; ++rep, ++instance_id) {
            const Teacher teacher =
                make_regular_ternary_teacher(n, 600 + static_cast<std::uint64_t>(instance_id));
            ExperimentConfig config = experiment_for(
                teacher, QuantizationMode::Ternary, 10000,
                910 + static_cast<std::uint64_t>(instance_id), 0.25);
            const Trajectory traj = run(config);
            const auto tail = tail_limit_set(traj, 0.5);
            const VertexSet lambda = vertex_set(teacher.w_star);
            if (tail.size() > n) {
                check.fail("instance " + std::to_string(instance_id) + ": tail set larger than n");
            }
            for (const auto& w : tail) {
                if (!lambda.find(w)) {
                    check.fail("instance " + std::to_string(instance_id) +
                               ": tail state outside the vertex set");
                }
            }
            g_growth_pool.push_back({teacher, traj});
        }
    }
    check.note("10 regular teachers (n = 4, 8): tail-50% sets inside Lambda(w*), size <= n");
    return check;
}

Check criterion_ternary_recurrence() {
    Check check;
    int instance_id = 0;
    for (const std::size_t n : {std::size_t{4}, std::size_t{8}}) {
        for (int rep = 0; rep < 5; ++rep, ++instance_id) {
            const Teacher teacher =
                make_ternary_recurrence_teacher(n, 700 + static_cast<std::uint64_t>(instance_id));
            const ConditionReport condition = check_ternary_condition(teacher);
            if (!condition.satisfied || condition.ternary->lambda_tail_sum > 0.5) {
                check.fail("constructed teacher misses 0 < sum lambda <= 0.5");
                continue;
            }
            ExperimentConfig config = experiment_for(
                teacher, QuantizationMode::Ternary, 10000,
                920 + static_cast<std::uint64_t>(instance_id), 0.25);
            const Trajectory traj = run(config);
            const QuantizedWeight optimum =
                normalized_project(teacher.w_star, QuantizationMode::Ternary);
            const RecurrenceReport recurrence = detect_recurrence(traj, optimum);
            if (recurrence.visit_count < 10) {
                check.fail("instance " + std::to_string(instance_id) + ": only " +
                           std::to_string(recurrence.visit_count) + " visits");
            }
            g_growth_pool.push_back({teacher, traj});
        }
    }
    check.note("10 teachers with 0 < sum_{j>=2} lambda_j <= 0.5, optimum visited >= 10 times");
    return check;
}

Check criterion_oscillation() {
    Check check;
    int instance_id = 0;
    for (const std::size_t n : {std::size_t{4}, std::size_t{8}}) {
        const double threshold = 1.0 / std::sqrt(static_cast<double>(n));
        for (int rep = 0; rep < 5; ++rep, ++instance_id) {
            const Teacher teacher =
                make_oscillation_teacher(n, 800 + static_cast<std::uint64_t>(instance_id));
            ExperimentConfig config = experiment_for(
                teacher, QuantizationMode::Binary, 10000,
                930 + static_cast<std::uint64_t>(instance_id), 0.5);
            const Trajectory traj = run(config);
            for (std::size_t j = 0; j < n; ++j) {
                if (std::abs(teacher.w_star[j]) >= threshold) continue;
                int positive = 0, negative = 0, alternations = 0;
                int previous = 0;
                for (const auto& record : traj.records) {
                    const int s = record.w.signs[j];
                    positive += s > 0 ? 1 : 0;
                    negative += s < 0 ? 1 : 0;
                    if (previous != 0 && s != previous) ++alternations;
                    previous = s;
                }
                if (positive < 3 || negative < 3 || alternations < 3) {
                    check.fail("instance " + std::to_string(instance_id) + " coordinate " +
                               std::to_string(j) + ": +" + std::to_string(positive) + "/-" +
                               std::to_string(negative) + " visits, " +
                               std::to_string(alternations) + " alternations");
                }
            }
            g_growth_pool.push_back({teacher, traj});
        }
    }
    check.note("10 teachers: every below-threshold coordinate attains both signs >= 3 times");
    return check;
}

Check criterion_norm_growth() {
    Check check;
    if (g_growth_pool.empty()) {
        check.fail("no trajectories collected from criteria 5-8");
        return check;
    }
    double worst_ratio = HUGE_VAL;
    for (std::size_t i = 0; i < g_growth_pool.size(); ++i) {
        const auto& [teacher, traj] = g_growth_pool[i];
        double previous = dot(traj.records.front().y, teacher.w_star);
        for (std::size_t k = 1; k < traj.size(); ++k) {
            const double current = dot(traj.records[k].y, teacher.w_star);
            if (current < previous) {
                check.fail("instance " + std::to_string(i) +
                           ": <y, w*> decreased at t = " + std::to_string(k));
                break;
            }
            previous = current;
        }
        const double ratio =
            l1_norm(traj.records.back().y) / l1_norm(traj.records.front().y);
        worst_ratio = std::min(worst_ratio, ratio);
        if (ratio <= 10.0) {
            check.fail("instance " + std::to_string(i) + ": |y|_1 grew only " +
                       format_double(ratio) + "x");
        }
    }
    check.note(std::to_string(g_growth_pool.size()) +
               " trajectories, smallest |y|_1 growth " + format_double(worst_ratio) + "x");
    return check;
}

// ---------------------------------------------------------------------------
// 10. Geometry counting and property suites
// ---------------------------------------------------------------------------

Check criterion_geometry() {
    Check check;
    for (std::size_t n = 1; n <= 4; ++n) {
        if (!(enumerate_geometry_counts(n) == count_geometry(n))) {
            check.fail("enumeration disagrees with the closed form at n = " + std::to_string(n));
        }
    }

    GaussianSampler sampler(1010, 0);
    double worst = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        const std::size_t n = 2 + rep % 7;
        const RealVector x = random_nonzero(sampler, n);
        const VertexSet lambda = vertex_set(x);
        if (lambda.empty() || lambda.size() > n) {
            check.fail("vertex set size out of range");
            continue;
        }
        if (!lambda.find(normalized_project(x, QuantizationMode::Ternary))) {
            check.fail("normalized projection not a vertex");
        }
        // Round-trip a random nonnegative combination.
        RealVector mu(lambda.size());
        for (double& m : mu) m = 0.05 + 1.95 * sampler.next_uniform();
        RealVector y(n, 0.0);
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            const auto& z = lambda.vertices[i];
            for (std::size_t j = 0; j < n; ++j) {
                y[j] += mu[i] * z.delta * static_cast<double>(z.signs[j]);
            }
        }
        const auto recovered = decompose_in_cone(y, lambda);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double err = std::abs(recovered[i] - mu[i]) / std::max(1.0, std::abs(mu[i]));
            worst = std::max(worst, err);
            if (err > 1e-10) check.fail("decomposition round-trip above 1e-10");
        }
    }
    check.note("counts exact for n <= 4; 10000 round-trips, worst relative error " +
               format_double(worst));
    return check;
}

// ---------------------------------------------------------------------------
// 11. Byte-identical reruns through the CLI
// ---------------------------------------------------------------------------

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Check criterion_determinism() {
    Check check;
    const fs::path base = fs::temp_directory_path() / "quantdyn_acceptance_runs";
    fs::remove_all(base);
    const std::string cli = QUANTDYN_CLI_PATH;
    const auto invoke = [&cli](const std::string& args) {
        return std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    };

    for (const std::string preset : {"example1", "synthetic-fig2", "synthetic-fig2-ternary"}) {
        const fs::path a = base / (preset + "-a");
        const fs::path b = base / (preset + "-b");
        const fs::path c = base / (preset + "-c");
        if (invoke("run --preset " + preset + " --out " + a.string()) != 0 ||
            invoke("run --preset " + preset + " --out " + b.string()) != 0 ||
            invoke("run --config " + (a / "manifest.json").string() + " --out " + c.string()) !=
                0) {
            check.fail(preset + ": CLI run failed");
            continue;
        }
        for (const std::string file : {"trajectory.csv", "signs.csv", "manifest.json"}) {
            const std::string reference = read_file(a / file);
            if (reference.empty() || reference != read_file(b / file) ||
                reference != read_file(c / file)) {
                check.fail(preset + ": " + file + " differs between reruns");
            }
        }
    }
    check.note("3 presets: rerun and manifest-replay byte-identical across all artifacts");
    return check;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        std::function<Check()> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "projection oracle equivalence (<= 1e-10)", criterion_projection_oracle},
        {2, "support threshold |y_j| < |y|_1/(5n) => w_j = 0", criterion_support_threshold},
        {3, "coarse gradient and loss match Monte Carlo (4 SE)", criterion_mc_agreement},
        {4, "period-3 example exact, optimum never visited", criterion_example1_exact},
        {5, "binary recurrence: >= 10 spread visits", criterion_binary_recurrence},
        {6, "ternary confinement: tail inside Lambda(w*)", criterion_ternary_confinement},
        {7, "ternary recurrence: >= 10 visits", criterion_ternary_recurrence},
        {8, "oscillation: both signs attained >= 3 times", criterion_oscillation},
        {9, "norm growth: <y, w*> monotone, |y|_1 up 10x", criterion_norm_growth},
        {10, "geometry counts and decomposition round-trips", criterion_geometry},
        {11, "byte-identical reruns from manifests", criterion_determinism},
    };

    bool all_pass = true;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Check check;
        try {
            check = criterion.body();
        } catch (const std::exception& e) {
            check.pass = false;
            check.detail = std::string("exception: ") + e.what();
        }
        const auto seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream line;
        line << (check.pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id << ": "
             << criterion.name << " — " << check.detail << " (" << std::fixed
             << std::setprecision(1) << seconds << "s)";
        std::cout << line.str() << std::endl;
        all_pass = all_pass && check.pass;
    }
    std::cout << (all_pass ? "ACCEPTANCE: all criteria passed"
                           : "ACCEPTANCE: some criteria FAILED")
              << std::endl;
    return all_pass ? 0 : 1;
}
