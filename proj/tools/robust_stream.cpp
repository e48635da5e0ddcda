//
// robust-stream: experiment front end.
//
// Subcommands ingest a stream (file or generator), run the corresponding
// streaming algorithm, and write summary.json plus one `round,value` CSV per
// metric series into --out. Exit codes: 0 success, 1 success with an
// algorithm-level warning (e.g. the oversampling constant fell below the
// running condition number), 2 error.
//

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

#include "robuststream/robuststream.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace robuststream;

namespace {

struct Artifacts {
    json summary;
    std::vector<MetricSeries> series;
    bool warning = false;
};

// 17-significant-digit doubles in JSON, matching the CSV convention
json jnum(double x) { return json::parse(format_double(x)); }

void write_artifacts(const fs::path& out_dir, Artifacts art) {
    fs::create_directories(out_dir);
    for (const auto& s : art.series)
        write_metric_series((out_dir / (s.name + ".csv")).string(), s);
    std::ofstream out(out_dir / "summary.json");
    out << art.summary.dump(2) << '\n';
}

int thread_budget() {
    if (const char* env = std::getenv("ROBUST_STREAM_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Fans trial bodies out across the thread budget; results land by seed order.
template <class Fn>
std::vector<json> run_trials(int trials, std::uint64_t seed, Fn&& body) {
    std::vector<json> results(static_cast<std::size_t>(trials));
    int budget = thread_budget();
    std::vector<std::future<void>> inflight;
    for (int t = 0; t < trials; ++t) {
        inflight.push_back(std::async(std::launch::async, [&, t] {
            results[static_cast<std::size_t>(t)] = body(derive_seed(seed, static_cast<std::uint64_t>(t)), t);
        }));
        if (static_cast<int>(inflight.size()) >= budget) {
            inflight.front().get();
            inflight.erase(inflight.begin());
        }
    }
    for (auto& f : inflight) f.get();
    return results;
}

json echo_common(const std::string& sub, double eps, std::uint64_t seed) {
    json j;
    j["subcommand"] = sub;
    j["eps"] = jnum(eps);
    j["seed"] = seed;
    return j;
}

double slope_of(const std::vector<Vector>& rows) {
    double sxx = 0.0, sxy = 0.0;
    for (const auto& r : rows) {
        sxx += r(0) * r(0);
        sxy += r(0) * r(1);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

double mean_sq_residual(const std::vector<Vector>& rows, const Vector& coeff) {
    if (rows.empty()) return 0.0;
    double total = 0.0;
    for (const auto& r : rows) {
        double res = r(r.size() - 1) - coeff.dot(r.head(coeff.size()));
        total += res * res;
    }
    return total / static_cast<double>(rows.size());
}

Artifacts run_embed(const std::string& input, int p, double eps, double c, std::uint64_t n_bound,
                    std::uint64_t seed) {
    auto rows = read_row_csv(input);
    if (rows.empty()) throw std::runtime_error("embed: empty input stream");
    if (n_bound == 0) n_bound = rows.size();

    RowSampler sampler(rows.front().size(),
                       SamplerConfig::embedding(p, eps, c, n_bound, seed));
    Artifacts art;
    MetricSeries kept{"sampled_rows", {}};
    MetricSeries tau{"tau", {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto dec = sampler.process_row(rows[i]);
        kept.push(i + 1, static_cast<double>(sampler.current_embedding().size()));
        tau.push(i + 1, dec.tau);
    }
    art.series = {kept, tau};
    art.warning = sampler.oversampling_warnings() > 0;
    art.summary = echo_common("embed", eps, seed);
    art.summary["p"] = p;
    art.summary["oversampling_c"] = jnum(c);
    art.summary["n_bound"] = n_bound;
    art.summary["alpha"] = jnum(sampler.alpha());
    art.summary["rows_seen"] = sampler.rounds_seen();
    art.summary["rows_sampled"] = sampler.current_embedding().size();
    art.summary["tau_sum"] = jnum(sampler.tau_sum());
    art.summary["kappa_running"] = jnum(sampler.kappa_running());
    art.summary["kappa_stream"] = jnum(sampler.kappa_stream());
    art.summary["oversampling_warnings"] = sampler.oversampling_warnings();
    return art;
}

Artifacts run_regress(const std::string& input, double eps, double c, std::uint64_t n_bound,
                      std::uint64_t seed) {
    auto rows = read_row_csv(input);  // augmented: features..., target
    if (rows.empty()) throw std::runtime_error("regress: empty input stream");
    if (n_bound == 0) n_bound = rows.size();

    RowSampler sampler(rows.front().size(),
                       SamplerConfig::embedding(2, eps, c, n_bound, seed));
    Artifacts art;
    MetricSeries loss{"prefix_loss", {}};
    std::vector<Vector> prefix;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        sampler.process_row(rows[i]);
        prefix.push_back(rows[i]);
        auto reg = sampler.regress();
        loss.push(i + 1, mean_sq_residual(prefix, reg.coefficients));
    }
    auto reg = sampler.regress();
    art.series = {loss};
    art.warning = sampler.oversampling_warnings() > 0;
    art.summary = echo_common("regress", eps, seed);
    art.summary["oversampling_c"] = jnum(c);
    art.summary["n_bound"] = n_bound;
    art.summary["rows_sampled"] = sampler.current_embedding().size();
    art.summary["regularized"] = reg.regularized;
    art.summary["kappa_running"] = jnum(sampler.kappa_running());
    json coeffs = json::array();
    for (Eigen::Index j = 0; j < reg.coefficients.size(); ++j)
        coeffs.push_back(jnum(reg.coefficients(j)));
    art.summary["coefficients"] = coeffs;
    return art;
}

Artifacts run_lowrank(const std::string& input, int k, double eps, double c,
                      std::uint64_t n_bound, std::uint64_t seed) {
    auto rows = read_row_csv(input);
    if (rows.empty()) throw std::runtime_error("lowrank: empty input stream");
    if (n_bound == 0) n_bound = rows.size();

    RowSampler sampler(rows.front().size(), SamplerConfig::ridge(k, eps, c, n_bound, seed));
    for (const auto& r : rows) sampler.process_row(r);
    auto lr = sampler.low_rank();

    double cost = 0.0;
    for (const auto& r : rows) {
        Vector res = r - lr.projection * r;
        cost += res.squaredNorm();
    }

    Artifacts art;
    art.warning = sampler.oversampling_warnings() > 0 || lr.rank_deficient;
    art.summary = echo_common("lowrank", eps, seed);
    art.summary["k"] = k;
    art.summary["oversampling_c"] = jnum(c);
    art.summary["n_bound"] = n_bound;
    art.summary["rows_sampled"] = sampler.current_embedding().size();
    art.summary["projection_rank"] = lr.rank;
    art.summary["rank_deficient"] = lr.rank_deficient;
    art.summary["projection_cost"] = jnum(cost);
    art.summary["kappa_running"] = jnum(sampler.kappa_running());
    return art;
}

Artifacts run_coreset(const std::string& input, int k, int z, double eps, std::size_t leaf_size,
                      double c0, double c1, std::uint64_t n_bound, std::uint64_t seed) {
    auto rows = read_row_csv(input);
    if (rows.empty()) throw std::runtime_error("coreset: empty input stream");
    if (n_bound == 0) n_bound = rows.size();

    ClusteringConfig cfg;
    cfg.k = k;
    cfg.z = z;
    cfg.eps = eps;
    cfg.leaf_size = leaf_size;
    cfg.n_bound = n_bound;
    cfg.c0 = c0;
    cfg.c1 = c1;
    cfg.seed = seed;
    CoresetTree tree(cfg);

    MetricSeries stored{"stored_points", {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        tree.insert({rows[i], 1.0});
        stored.push(i + 1, static_cast<double>(tree.stored_points()));
    }
    auto coreset = tree.query();
    auto centers = lloyd_refine(coreset, k, z, seed);

    std::vector<WeightedPoint> full;
    for (const auto& r : rows) full.push_back({r, 1.0});

    Artifacts art;
    art.series = {stored};
    art.summary = echo_common("coreset", eps, seed);
    art.summary["k"] = k;
    art.summary["z"] = z;
    art.summary["leaf_size"] = leaf_size;
    art.summary["n_bound"] = n_bound;
    art.summary["c0"] = jnum(c0);
    art.summary["c1"] = jnum(c1);
    art.summary["points_seen"] = tree.points_seen();
    art.summary["coreset_size"] = coreset.size();
    art.summary["max_levels"] = tree.max_levels();
    art.summary["coreset_cost"] = jnum(kz_cost(coreset, centers.centers, z));
    art.summary["full_cost"] = jnum(kz_cost(full, centers.centers, z));
    json cj = json::array();
    for (const auto& cvec : centers.centers) {
        json one = json::array();
        for (Eigen::Index j = 0; j < cvec.size(); ++j) one.push_back(jnum(cvec(j)));
        cj.push_back(one);
    }
    art.summary["centers"] = cj;
    return art;
}

Artifacts run_sparsify(const std::string& input, double eps, double c, std::uint64_t seed,
                       const fs::path& out_dir) {
    EdgeStream es = read_edge_list(input);
    if (es.edges.empty()) throw std::runtime_error("sparsify: empty edge stream");
    if (es.m_bound == 0) throw std::runtime_error("sparsify: header must provide m_bound");

    SparsifierConfig cfg{es.n, es.m_bound, eps, c, seed};
    CutSparsifier sp(cfg);
    MetricSeries kept{"kept_edges", {}};
    for (std::size_t i = 0; i < es.edges.size(); ++i) {
        sp.process_edge(es.edges[i]);
        kept.push(i + 1, static_cast<double>(sp.kept().size()));
    }
    fs::create_directories(out_dir);
    write_edge_list((out_dir / "sparsifier.txt").string(), es.n, es.m_bound, sp.h_edges());

    Artifacts art;
    art.series = {kept};
    art.summary = echo_common("sparsify", eps, seed);
    art.summary["n"] = es.n;
    art.summary["m_bound"] = es.m_bound;
    art.summary["rho_c"] = jnum(c);
    art.summary["rho"] = jnum(sp.rho());
    art.summary["edges_seen"] = sp.edges_seen();
    art.summary["kept_edges"] = sp.kept().size();
    art.summary["kappa_proxy"] = jnum(sp.kappa_proxy());
    return art;
}

Artifacts attack_regression_flip(std::size_t batches, std::size_t batch_size, double distance,
                                 double eps, double c, double sgd_step, std::uint64_t seed) {
    auto stream = regression_flip_stream(batches, batch_size, distance, derive_seed(seed, 1));
    std::uint64_t n_bound = batches * batch_size;

    RowSampler sampler(2, SamplerConfig::embedding(2, eps, c, n_bound, derive_seed(seed, 2)));
    SgdRegressor sgd(1, sgd_step);

    MetricSeries robust{"robust_loss", {}};
    MetricSeries baseline{"baseline_loss", {}};
    MetricSeries robust_slope{"robust_slope", {}};
    MetricSeries baseline_slope{"baseline_slope", {}};
    std::vector<Vector> prefix;
    for (std::size_t b = 0; b < stream.size(); ++b) {
        for (const auto& row : stream[b]) {
            sampler.process_row(row);
            prefix.push_back(row);
        }
        sgd.update(stream[b]);
        Vector rc = sampler.regress().coefficients;
        robust.push(b + 1, mean_sq_residual(prefix, rc));
        baseline.push(b + 1, mean_sq_residual(prefix, sgd.coefficients()));
        robust_slope.push(b + 1, rc(0));
        baseline_slope.push(b + 1, sgd.coefficients()(0));
    }

    Artifacts art;
    art.series = {robust, baseline, robust_slope, baseline_slope};
    art.summary = echo_common("attack", eps, seed);
    art.summary["scenario"] = "regression-flip";
    art.summary["batches"] = batches;
    art.summary["batch_size"] = batch_size;
    art.summary["distance_l"] = jnum(distance);
    art.summary["sgd_step"] = jnum(sgd_step);
    art.summary["oversampling_c"] = jnum(c);
    art.summary["final_robust_slope"] = jnum(robust_slope.points.back().second);
    art.summary["final_baseline_slope"] = jnum(baseline_slope.points.back().second);
    art.summary["prefix_optimal_slope"] = jnum(slope_of(prefix));
    art.summary["baseline_diverged"] = sgd.diverged();
    return art;
}

Artifacts attack_distant_cluster(std::size_t batches, std::size_t batch_size, double distance,
                                 double eps, int k, std::size_t leaf_size, double decay,
                                 std::uint64_t seed) {
    auto stream = distant_cluster_stream(batches, batch_size, distance, derive_seed(seed, 1));

    ClusteringConfig cfg;
    cfg.k = k;
    cfg.z = 2;
    cfg.eps = eps;
    cfg.leaf_size = leaf_size;
    cfg.n_bound = batches * batch_size;
    cfg.seed = derive_seed(seed, 2);
    CoresetTree tree(cfg);
    DecayKMeans decayed(k, decay, derive_seed(seed, 3));

    MetricSeries robust{"robust_loss", {}};
    MetricSeries baseline{"baseline_loss", {}};
    std::vector<WeightedPoint> full;
    std::vector<Vector> robust_centers;
    for (std::size_t b = 0; b < stream.size(); ++b) {
        for (const auto& p : stream[b]) {
            tree.insert({p, 1.0});
            full.push_back({p, 1.0});
        }
        decayed.update(stream[b]);
        auto refined = lloyd_refine(tree.query(), k, 2, derive_seed(seed, 100 + b));
        robust_centers = refined.centers;
        robust.push(b + 1, kz_cost(full, refined.centers, 2) / static_cast<double>(full.size()));
        baseline.push(b + 1, kz_cost(full, decayed.centers(), 2) / static_cast<double>(full.size()));
    }

    auto centers_json = [](const std::vector<Vector>& cs) {
        json out = json::array();
        for (const auto& cvec : cs) {
            json one = json::array();
            for (Eigen::Index j = 0; j < cvec.size(); ++j) one.push_back(jnum(cvec(j)));
            out.push_back(one);
        }
        return out;
    };

    Artifacts art;
    art.series = {robust, baseline};
    art.summary = echo_common("attack", eps, seed);
    art.summary["scenario"] = "distant-cluster";
    art.summary["batches"] = batches;
    art.summary["batch_size"] = batch_size;
    art.summary["distance_l"] = jnum(distance);
    art.summary["k"] = k;
    art.summary["leaf_size"] = leaf_size;
    art.summary["decay"] = jnum(decay);
    art.summary["robust_centers"] = centers_json(robust_centers);
    art.summary["baseline_centers"] = centers_json(decayed.centers());
    return art;
}

Artifacts attack_kernel_nullspace(std::size_t batches, std::size_t batch_size, int d,
                                  int sketch_rows, double eps, double c, std::uint64_t seed) {
    std::uint64_t n_bound = batches * batch_size;
    SignSketch sketch(sketch_rows, static_cast<Eigen::Index>(n_bound), d + 1, derive_seed(seed, 1));
    auto attack = kernel_attack_stream(sketch, batches, batch_size, d, derive_seed(seed, 2));

    RowSampler sampler(d + 1, SamplerConfig::embedding(2, eps, c, n_bound, derive_seed(seed, 3)));
    MetricSeries robust{"robust_loss", {}};
    MetricSeries baseline{"baseline_loss", {}};
    std::vector<Vector> prefix;
    for (std::size_t b = 0; b < attack.batches.size(); ++b) {
        for (const auto& row : attack.batches[b]) {
            sampler.process_row(row);
            sketch.update(row);
            prefix.push_back(row);
        }
        robust.push(b + 1, mean_sq_residual(prefix, sampler.regress().coefficients));
        baseline.push(b + 1, mean_sq_residual(prefix, sketch_regress(sketch).coefficients));
    }

    double rl = robust.points.back().second;
    double bl = baseline.points.back().second;
    Artifacts art;
    art.series = {robust, baseline};
    art.summary = echo_common("attack", eps, seed);
    art.summary["scenario"] = "kernel-nullspace";
    art.summary["batches"] = batches;
    art.summary["batch_size"] = batch_size;
    art.summary["d"] = d;
    art.summary["sketch_rows"] = sketch_rows;
    art.summary["oversampling_c"] = jnum(c);
    art.summary["sketch_residual"] = jnum(attack.sketch_residual);
    art.summary["final_robust_loss"] = jnum(rl);
    art.summary["final_baseline_loss"] = jnum(bl);
    art.summary["loss_ratio"] = jnum(rl > 0.0 ? bl / rl : std::numeric_limits<double>::infinity());
    return art;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust-stream: importance-sampling streaming algorithms and adversarial attack experiments"};
    app.require_subcommand(1);

    std::string input, out_dir = "out", scenario = "regression-flip", l_flag = "auto";
    int p = 2, k = 2, z = 2, sketch_rows = 60, d = 10, trials = 1;
    double eps = 0.5, c = 40.0, c0 = 10.0, c1 = 8.0, decay = 1.0, sgd_step = 0.008;
    std::uint64_t n_bound = 0, seed = 1;
    std::size_t leaf_size = 256, batches = 16, batch_size = 100;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--eps", eps, "accuracy parameter")->check(CLI::Range(1e-9, 0.999999));
        sub->add_option("--trials", trials, "independent seeded trials")->check(CLI::PositiveNumber);
    };

    CLI::App* embed = app.add_subcommand("embed", "L_p subspace embedding by online sensitivity sampling");
    embed->add_option("--input", input, "row CSV")->required();
    embed->add_option("--p", p, "norm (1 or 2)")->check(CLI::IsMember({1, 2}));
    embed->add_option("--C", c, "oversampling constant");
    embed->add_option("--n-bound", n_bound, "a-priori stream length bound (default: input length)");
    add_common(embed);

    CLI::App* regress = app.add_subcommand("regress", "streaming least squares over sampled augmented rows");
    regress->add_option("--input", input, "row CSV with trailing target column")->required();
    regress->add_option("--C", c, "oversampling constant");
    regress->add_option("--n-bound", n_bound, "stream length bound");
    add_common(regress);

    CLI::App* lowrank = app.add_subcommand("lowrank", "low-rank approximation via ridge leverage sampling");
    lowrank->add_option("--input", input, "row CSV")->required();
    lowrank->add_option("--k", k, "target rank")->check(CLI::PositiveNumber);
    lowrank->add_option("--C", c, "oversampling constant");
    lowrank->add_option("--n-bound", n_bound, "stream length bound");
    add_common(lowrank);

    CLI::App* coreset = app.add_subcommand("coreset", "merge-and-reduce (k,z)-clustering coreset");
    coreset->add_option("--input", input, "point CSV")->required();
    coreset->add_option("--k", k, "centers")->check(CLI::PositiveNumber);
    coreset->add_option("--z", z, "power (1 or 2)")->check(CLI::IsMember({1, 2}));
    coreset->add_option("--leaf-size", leaf_size, "leaf buffer size");
    coreset->add_option("--c0", c0, "sample-size constant");
    coreset->add_option("--c1", c1, "sensitivity-bound constant");
    coreset->add_option("--n-bound", n_bound, "stream length bound");
    add_common(coreset);

    CLI::App* sparsify = app.add_subcommand("sparsify", "streaming cut sparsifier");
    sparsify->add_option("--input", input, "edge list with `n m_bound` header")->required();
    sparsify->add_option("--C", c, "rho constant (default 4)");
    add_common(sparsify);

    CLI::App* attack = app.add_subcommand("attack", "adversarial scenarios: robust vs baseline");
    attack->add_option("--scenario", scenario, "regression-flip | distant-cluster | kernel-nullspace")
        ->check(CLI::IsMember({"regression-flip", "distant-cluster", "kernel-nullspace"}));
    attack->add_option("--batches", batches, "number of batches");
    attack->add_option("--batch-size", batch_size, "points per batch");
    attack->add_option("--L", l_flag, "attack distance, or 'auto' for 10*sqrt(batches)");
    attack->add_option("--C", c, "oversampling constant");
    attack->add_option("--k", k, "centers (distant-cluster)");
    attack->add_option("--leaf-size", leaf_size, "coreset leaf size (distant-cluster)");
    attack->add_option("--decay", decay, "baseline decay (distant-cluster)");
    attack->add_option("--sgd-step", sgd_step, "baseline step (regression-flip)");
    attack->add_option("--d", d, "feature dimension (kernel-nullspace)");
    attack->add_option("--sketch-rows", sketch_rows, "sketch rows (kernel-nullspace)");
    add_common(attack);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (embed->parsed() && p == 1 && embed->count("--C") == 0) c = 80.0;
    if (sparsify->parsed() && sparsify->count("--C") == 0) c = 4.0;

    try {
        auto run_one = [&](std::uint64_t trial_seed, const fs::path& dir) -> bool {
            Artifacts art;
            if (embed->parsed()) {
                art = run_embed(input, p, eps, c, n_bound, trial_seed);
            } else if (regress->parsed()) {
                art = run_regress(input, eps, c, n_bound, trial_seed);
            } else if (lowrank->parsed()) {
                art = run_lowrank(input, k, eps, c, n_bound, trial_seed);
            } else if (coreset->parsed()) {
                art = run_coreset(input, k, z, eps, leaf_size, c0, c1, n_bound, trial_seed);
            } else if (sparsify->parsed()) {
                art = run_sparsify(input, eps, c, trial_seed, dir);
            } else {
                double distance = l_flag == "auto"
                                      ? 10.0 * std::sqrt(static_cast<double>(batches))
                                      : std::stod(l_flag);
                if (scenario == "regression-flip")
                    art = attack_regression_flip(batches, batch_size, distance, eps, c, sgd_step, trial_seed);
                else if (scenario == "distant-cluster")
                    art = attack_distant_cluster(batches, batch_size, distance, eps, k, leaf_size, decay, trial_seed);
                else
                    art = attack_kernel_nullspace(batches, batch_size, d, sketch_rows, eps, c, trial_seed);
            }
            write_artifacts(dir, art);
            return art.warning;
        };

        bool warning = false;
        if (trials == 1) {
            warning = run_one(seed, out_dir);
        } else {
            auto results = run_trials(trials, seed, [&](std::uint64_t trial_seed, int t) {
                bool w = run_one(trial_seed, fs::path(out_dir) / ("trial_" + std::to_string(t)));
                return json{{"trial", t}, {"warning", w}};
            });
            json index;
            index["trials"] = trials;
            index["seed"] = seed;
            index["runs"] = results;
            fs::create_directories(out_dir);
            std::ofstream out(fs::path(out_dir) / "summary.json");
            out << index.dump(2) << '\n';
            for (const auto& r : results) warning |= r.at("warning").get<bool>();
        }
        return warning ? 1 : 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
