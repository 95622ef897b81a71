// causalkit command-line tool: simulate linear-Gaussian SEM data, run
// structure discovery, orient with interventional evidence, evaluate, and
// reproduce the CI-count and faithfulness-volume benchmarks.
//
// Exit codes: 0 success, 1 usage error, 2 data/numeric error, 3 internal
// invariant violation. All outputs are written atomically and all
// randomness derives from explicit seeds, so identical invocations produce
// byte-identical outputs (timings are only emitted with --timings).

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "causalkit/bench.hpp"
#include "causalkit/ci.hpp"
#include "causalkit/discovery.hpp"
#include "causalkit/errors.hpp"
#include "causalkit/graph.hpp"
#include "causalkit/io.hpp"
#include "causalkit/rng.hpp"
#include "causalkit/sem.hpp"

namespace ck = causalkit;
using ck::io::json;

namespace {

constexpr const char* kVersion = "causalkit 0.1.0";

int resolve_threads() {
    const char* env = std::getenv("CAUSALKIT_THREADS");
    if (!env) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0)
        throw ck::DataError("CAUSALKIT_THREADS must be a non-negative integer");
    if (v == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
    return static_cast<int>(v);
}

json config_echo(const std::map<std::string, std::string>& entries) {
    json out;
    for (const auto& [k, v] : entries) out[k] = v;
    return out;
}

// ------------------------------------------------------------ simulate

struct SimulateArgs {
    int p = 10;
    double density = 0.3;
    int n = 1000;
    std::uint64_t seed = 0;
    double weight_lo = 0.25, weight_hi = 1.0;
    std::string intervention_path;  // sample the intervened SEM instead
    std::string sem_path;           // reuse an existing SEM instead of drawing one
    std::string out_data, out_graph, out_sem;
};

int run_simulate(const SimulateArgs& a) {
    ck::LinearGaussianSem sem;
    if (!a.sem_path.empty()) {
        sem = ck::io::sem_from_json(ck::io::load_json(a.sem_path));
    } else {
        const ck::Dag dag = ck::random_dag(a.p, a.density, a.seed);
        sem = ck::random_sem(dag, a.weight_lo, a.weight_hi, ck::derive_seed(a.seed, 1));
    }
    ck::LinearGaussianSem sampled = sem;
    if (!a.intervention_path.empty()) {
        const ck::Intervention iv =
            ck::io::intervention_from_json(ck::io::load_json(a.intervention_path));
        sampled = ck::apply_intervention(sem, iv);
    }
    const Eigen::MatrixXd data = ck::sample(sampled, a.n, ck::derive_seed(a.seed, 2));
    ck::io::atomic_write(a.out_data, ck::io::samples_to_csv(data));
    if (!a.out_graph.empty())
        ck::io::atomic_write(a.out_graph, ck::io::dag_to_json(sem.dag()).dump(2) + "\n");
    if (!a.out_sem.empty())
        ck::io::atomic_write(a.out_sem, ck::io::sem_to_json(sem).dump(2) + "\n");
    std::cout << "simulate: wrote " << data.rows() << " rows x " << data.cols()
              << " columns\n";
    return 0;
}

// ------------------------------------------------------------ discover

struct DiscoverArgs {
    std::string algo;
    std::string oracle_path, data_path;
    double alpha = 0.01;
    std::uint64_t seed = 0;
    int sp_max_p = 7;
    int gsp_depth = 4;
    std::string report_path;
    bool timings = false;
};

int run_discover(const DiscoverArgs& a) {
    std::unique_ptr<ck::CiProvider> provider;
    int p = 0;
    if (!a.oracle_path.empty()) {
        const ck::Dag truth = ck::io::dag_from_json(ck::io::load_json(a.oracle_path));
        p = truth.node_count();
        provider = std::make_unique<ck::GraphOracle>(truth);
    } else {
        const Eigen::MatrixXd data =
            ck::io::samples_from_csv(ck::io::load_text(a.data_path));
        p = static_cast<int>(data.cols());
        provider = std::make_unique<ck::FisherZProvider>(data, a.alpha);
    }

    ck::DiscoveryReport report;
    if (a.algo == "pc") {
        report = ck::pc(*provider, p);
    } else if (a.algo == "sp") {
        report = ck::sp(*provider, p, a.sp_max_p);
    } else if (a.algo == "gsp") {
        ck::GspOptions opt;
        opt.dfs_depth = a.gsp_depth;
        opt.seed = a.seed;
        report = ck::gsp(*provider, p, opt);
    } else {
        report = ck::gas(*provider, p);
    }
    report.config["mode"] = a.oracle_path.empty() ? "data" : "oracle";
    report.config["input"] = a.oracle_path.empty() ? a.data_path : a.oracle_path;
    report.config["seed"] = std::to_string(a.seed);
    report.config["sp_max_p"] = std::to_string(a.sp_max_p);
    report.config["gsp_depth"] = std::to_string(a.gsp_depth);
    if (a.oracle_path.empty()) report.config["alpha"] = std::to_string(a.alpha);

    ck::io::atomic_write(a.report_path,
                         ck::io::report_to_json(report, a.timings).dump(2) + "\n");
    std::cout << "discover: " << report.algorithm << " used " << report.ci_queries
              << " CI queries\n";
    return 0;
}

// ------------------------------------------------------------ orient-interventional

struct OrientArgs {
    std::string pdag_path;
    std::string sem_path, interventions_path;  // exact mode
    std::string obs_path, manifest_path;       // data mode
    double alpha = 0.01;
    std::string out_path;
};

std::vector<ck::InterventionEvidence> exact_evidence(const ck::LinearGaussianSem& sem,
                                                     const json& manifest) {
    if (!manifest.contains("interventions") || !manifest["interventions"].is_array())
        throw ck::DataError("interventions JSON: missing \"interventions\" array");
    const Eigen::MatrixXd base_cov = ck::covariance(sem);
    const Eigen::VectorXd base_mean = ck::mean_vector(sem);
    std::vector<ck::InterventionEvidence> evidence;
    int id = 0;
    for (const auto& entry : manifest["interventions"]) {
        const ck::Intervention iv = ck::io::intervention_from_json(entry);
        const ck::LinearGaussianSem post = ck::apply_intervention(sem, iv);
        const Eigen::MatrixXd post_cov = ck::covariance(post);
        const Eigen::VectorXd post_mean = ck::mean_vector(post);
        ck::InterventionEvidence ev;
        ev.intervention_id = id;
        ev.targets = iv.targets();
        for (int node = 1; node <= sem.node_count(); ++node) {
            if (ev.targets.count(node)) continue;
            const double dmu = std::fabs(post_mean(node - 1) - base_mean(node - 1));
            const double dvar =
                std::fabs(post_cov(node - 1, node - 1) - base_cov(node - 1, node - 1));
            ck::InvarianceResult r;
            r.intervention_id = id;
            r.node = node;
            r.changed = dmu > 1e-9 || dvar > 1e-9;
            r.statistic = std::max(dmu, dvar);
            ev.invariance.push_back(r);
        }
        evidence.push_back(std::move(ev));
        ++id;
    }
    return evidence;
}

std::vector<ck::InterventionEvidence> sampled_evidence(const Eigen::MatrixXd& obs,
                                                       const json& manifest, double alpha) {
    if (!manifest.contains("interventions") || !manifest["interventions"].is_array())
        throw ck::DataError("intervention manifest: missing \"interventions\" array");
    std::vector<ck::InterventionEvidence> evidence;
    int id = 0;
    for (const auto& entry : manifest["interventions"]) {
        if (!entry.contains("targets") || !entry.contains("data"))
            throw ck::DataError("intervention manifest: each entry needs \"targets\" and \"data\"");
        ck::InterventionEvidence ev;
        ev.intervention_id = id;
        for (const auto& t : entry["targets"]) ev.targets.insert(t.get<int>());
        const Eigen::MatrixXd intv =
            ck::io::samples_from_csv(ck::io::load_text(entry["data"].get<std::string>()));
        if (intv.cols() != obs.cols())
            throw ck::DataError("intervention manifest: column count mismatch in " +
                                entry["data"].get<std::string>());
        for (int node = 1; node <= obs.cols(); ++node) {
            if (ev.targets.count(node)) continue;
            std::vector<double> o(obs.rows()), v(intv.rows());
            for (int r = 0; r < obs.rows(); ++r) o[r] = obs(r, node - 1);
            for (int r = 0; r < intv.rows(); ++r) v[r] = intv(r, node - 1);
            ev.invariance.push_back(ck::marginal_invariance_test(o, v, alpha, id, node));
        }
        evidence.push_back(std::move(ev));
        ++id;
    }
    return evidence;
}

int run_orient(const OrientArgs& a) {
    const ck::Pdag base = ck::io::pdag_from_json(ck::io::load_json(a.pdag_path));
    std::vector<ck::InterventionEvidence> evidence;
    std::string mode;
    if (!a.sem_path.empty()) {
        mode = "exact";
        const ck::LinearGaussianSem sem =
            ck::io::sem_from_json(ck::io::load_json(a.sem_path));
        if (sem.node_count() != base.node_count())
            throw ck::DataError("orient-interventional: SEM and PDAG node counts differ");
        evidence = exact_evidence(sem, ck::io::load_json(a.interventions_path));
    } else {
        mode = "sampled";
        const Eigen::MatrixXd obs = ck::io::samples_from_csv(ck::io::load_text(a.obs_path));
        if (obs.cols() != base.node_count())
            throw ck::DataError("orient-interventional: data and PDAG node counts differ");
        evidence = sampled_evidence(obs, ck::io::load_json(a.manifest_path), a.alpha);
    }

    const ck::Pdag oriented = ck::interventional_orient(base, evidence);

    json out;
    out["version"] = kVersion;
    out["pdag"] = ck::io::pdag_to_json(oriented);
    json evs = json::array();
    for (const auto& ev : evidence) {
        json e;
        e["intervention_id"] = ev.intervention_id;
        e["targets"] = std::vector<int>(ev.targets.begin(), ev.targets.end());
        json inv = json::array();
        for (const auto& r : ev.invariance)
            inv.push_back(json{{"node", r.node}, {"changed", r.changed}});
        e["invariance"] = std::move(inv);
        evs.push_back(std::move(e));
    }
    out["evidence"] = std::move(evs);
    out["config"] = config_echo({{"mode", mode},
                                 {"pdag", a.pdag_path},
                                 {"alpha", std::to_string(a.alpha)}});
    ck::io::atomic_write(a.out_path, out.dump(2) + "\n");
    std::cout << "orient-interventional: " << oriented.undirected_count()
              << " undirected edges remain\n";
    return 0;
}

// ------------------------------------------------------------ eval

int run_eval(const std::string& g1_path, const std::string& g2_path,
             const std::string& out_path) {
    const ck::Pdag g1 = ck::io::pdag_from_json(ck::io::load_json(g1_path));
    const ck::Pdag g2 = ck::io::pdag_from_json(ck::io::load_json(g2_path));
    const int d = ck::shd(g1, g2);
    const int ds = ck::skeleton_shd(g1, g2);
    json out;
    out["version"] = kVersion;
    out["shd"] = d;
    out["skeleton_shd"] = ds;
    out["config"] = config_echo({{"g1", g1_path}, {"g2", g2_path}});
    if (!out_path.empty()) ck::io::atomic_write(out_path, out.dump(2) + "\n");
    std::cout << "shd " << d << " skeleton_shd " << ds << "\n";
    return 0;
}

// ------------------------------------------------------------ faithfulness-volume

int run_volume(std::vector<double> lambdas, std::int64_t draws, std::uint64_t seed,
               double box_lo, double box_hi, const std::string& out_path) {
    if (lambdas.empty()) lambdas = {0.0, 0.001, 0.01, 0.05, 0.1, 0.2};
    const auto estimates =
        ck::unfaithful_volume_grid(lambdas, draws, box_lo, box_hi, seed, resolve_threads());
    std::string text;
    for (const auto& est : estimates) {
        json line;
        line["version"] = kVersion;
        line["lambda"] = est.lambda;
        line["draws"] = est.draws;
        line["violations"] = est.violations;
        line["fraction"] = est.fraction;
        line["box"] = json::array({est.box_lo, est.box_hi});
        line["seed"] = est.seed;
        text += line.dump() + "\n";
    }
    ck::io::atomic_write(out_path, text);
    std::cout << "faithfulness-volume: " << estimates.size() << " lambda values, " << draws
              << " draws each\n";
    return 0;
}

// ------------------------------------------------------------ ci-bench

struct CiBenchArgs {
    std::vector<int> p_values{3, 4, 5};
    double density = 0.3;
    int instances = 10;
    std::uint64_t seed = 0;
    std::vector<std::string> algos{"pc", "gsp", "gas"};
    int sp_max_p = 7;
    int gsp_depth = 4;
    bool timings = false;
    std::string out_path;
};

int run_ci_bench(const CiBenchArgs& a) {
    ck::BenchConfig config;
    config.p_values = a.p_values;
    config.instances_per_p = a.instances;
    config.density = a.density;
    config.seed = a.seed;
    config.algorithms = a.algos;
    config.sp_guard = a.sp_max_p;
    config.gsp_depth = a.gsp_depth;
    config.threads = resolve_threads();
    const auto rows = ck::ci_count_benchmark(config);
    ck::io::atomic_write(a.out_path, ck::to_tsv(rows, a.timings));
    std::cout << "ci-bench: " << rows.size() << " rows\n";
    return 0;
}

// ------------------------------------------------------------ mec

int run_mec(const std::string& graph_path, const std::string& essential_path,
            const std::string& enumerate_path, const std::string& count_path, int guard) {
    const ck::Dag dag = ck::io::dag_from_json(ck::io::load_json(graph_path));
    if (!essential_path.empty()) {
        ck::io::atomic_write(essential_path,
                             ck::io::pdag_to_json(ck::essential_graph(dag)).dump(2) + "\n");
        std::cout << "mec: wrote essential graph\n";
    }
    if (!enumerate_path.empty() || !count_path.empty()) {
        const auto members = ck::enumerate_mec(dag, guard);
        if (!enumerate_path.empty()) {
            json out;
            out["version"] = kVersion;
            out["count"] = members.size();
            json dags = json::array();
            for (const auto& g : members) dags.push_back(ck::io::dag_to_json(g));
            out["dags"] = std::move(dags);
            ck::io::atomic_write(enumerate_path, out.dump(2) + "\n");
        }
        if (!count_path.empty()) {
            json out;
            out["version"] = kVersion;
            out["count"] = members.size();
            ck::io::atomic_write(count_path, out.dump(2) + "\n");
        }
        std::cout << "mec: class has " << members.size() << " members\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal structure discovery toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "generate a random SEM and sample data");
    simulate->add_option("--p", sim.p, "node count")->check(CLI::PositiveNumber);
    simulate->add_option("--density", sim.density, "edge probability")
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--n", sim.n, "sample count")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "random seed");
    simulate->add_option("--weight-lo", sim.weight_lo, "weight magnitude lower bound");
    simulate->add_option("--weight-hi", sim.weight_hi, "weight magnitude upper bound");
    simulate->add_option("--sem", sim.sem_path, "sample an existing SEM JSON instead");
    simulate->add_option("--intervention", sim.intervention_path,
                         "apply this intervention JSON before sampling");
    simulate->add_option("--out-data", sim.out_data, "samples CSV path")->required();
    simulate->add_option("--out-graph", sim.out_graph, "graph JSON path (observational graph)");
    simulate->add_option("--out-sem", sim.out_sem, "SEM JSON path (observational SEM)");

    DiscoverArgs dis;
    auto* discover = app.add_subcommand("discover", "run a structure-discovery algorithm");
    discover->add_option("--algo", dis.algo, "pc | sp | gsp | gas")
        ->required()
        ->check(CLI::IsMember({"pc", "sp", "gsp", "gas"}));
    auto* oracle_opt =
        discover->add_option("--oracle", dis.oracle_path, "ground-truth graph JSON");
    auto* data_opt = discover->add_option("--data", dis.data_path, "samples CSV");
    oracle_opt->excludes(data_opt);
    data_opt->excludes(oracle_opt);
    discover->add_option("--alpha", dis.alpha, "test level for data mode")
        ->check(CLI::Range(0.0, 1.0));
    discover->add_option("--seed", dis.seed, "seed for GSP's initial permutation");
    discover->add_option("--sp-max-p", dis.sp_max_p, "SP enumeration guard");
    discover->add_option("--gsp-depth", dis.gsp_depth, "GSP covered-edge DFS depth");
    discover->add_option("--report", dis.report_path, "report JSON path")->required();
    discover->add_flag("--timings", dis.timings, "include wall time in the report");

    OrientArgs ori;
    auto* orient = app.add_subcommand("orient-interventional",
                                      "orient a CPDAG with interventional evidence");
    orient->add_option("--pdag", ori.pdag_path, "base CPDAG JSON")->required();
    auto* sem_opt = orient->add_option("--sem", ori.sem_path, "SEM JSON (exact mode)");
    auto* iv_opt = orient->add_option("--interventions", ori.interventions_path,
                                      "interventions JSON (exact mode)");
    auto* obs_opt = orient->add_option("--obs", ori.obs_path, "observational CSV (data mode)");
    auto* man_opt = orient->add_option("--intv-manifest", ori.manifest_path,
                                       "manifest JSON with per-intervention data files");
    sem_opt->needs(iv_opt);
    iv_opt->needs(sem_opt);
    obs_opt->needs(man_opt);
    man_opt->needs(obs_opt);
    sem_opt->excludes(obs_opt);
    obs_opt->excludes(sem_opt);
    orient->add_option("--alpha", ori.alpha, "invariance test level (data mode)")
        ->check(CLI::Range(0.0, 1.0));
    orient->add_option("--out", ori.out_path, "output JSON path")->required();

    std::string eval_g1, eval_g2, eval_out;
    auto* eval = app.add_subcommand("eval", "structural Hamming distance between two graphs");
    eval->add_option("--g1", eval_g1, "first graph JSON")->required();
    eval->add_option("--g2", eval_g2, "second graph JSON")->required();
    eval->add_option("--out", eval_out, "result JSON path");

    std::vector<double> vol_lambdas;
    std::int64_t vol_draws = 100000;
    std::uint64_t vol_seed = 0;
    double vol_lo = -1.0, vol_hi = 1.0;
    std::string vol_out;
    auto* volume = app.add_subcommand("faithfulness-volume",
                                      "lambda-strong-unfaithfulness volume, 3-node model");
    volume->add_option("--lambda", vol_lambdas,
                       "lambda threshold(s); default grid 0,0.001,0.01,0.05,0.1,0.2");
    volume->add_option("--draws", vol_draws, "Monte-Carlo draws")->check(CLI::PositiveNumber);
    volume->add_option("--seed", vol_seed, "random seed");
    volume->add_option("--box-lo", vol_lo, "weight box lower bound");
    volume->add_option("--box-hi", vol_hi, "weight box upper bound");
    volume->add_option("--out", vol_out, "JSONL output path")->required();

    CiBenchArgs bench;
    auto* ci_bench = app.add_subcommand("ci-bench", "oracle CI-count comparison table");
    ci_bench->add_option("--p", bench.p_values, "node counts");
    ci_bench->add_option("--density", bench.density, "edge probability")
        ->check(CLI::Range(0.0, 1.0));
    ci_bench->add_option("--instances", bench.instances, "instances per node count")
        ->check(CLI::PositiveNumber);
    ci_bench->add_option("--seed", bench.seed, "random seed");
    ci_bench->add_option("--algos", bench.algos, "algorithms to run");
    ci_bench->add_option("--sp-max-p", bench.sp_max_p, "SP enumeration guard");
    ci_bench->add_option("--gsp-depth", bench.gsp_depth, "GSP covered-edge DFS depth");
    ci_bench->add_flag("--timings", bench.timings, "include wall time in the table");
    ci_bench->add_option("--out", bench.out_path, "TSV output path")->required();

    std::string mec_graph, mec_essential, mec_enumerate, mec_count;
    int mec_guard = 10;
    auto* mec = app.add_subcommand("mec", "essential graph and MEC enumeration utilities");
    mec->add_option("--graph", mec_graph, "DAG JSON")->required();
    mec->add_option("--essential", mec_essential, "essential graph JSON path");
    mec->add_option("--enumerate", mec_enumerate, "enumeration JSON path");
    mec->add_option("--count", mec_count, "class-size JSON path");
    mec->add_option("--guard", mec_guard, "enumeration node-count guard");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints the message
        return code == 0 ? 0 : 1;      // usage errors exit 1 (--help/--version exit 0)
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*discover) {
            if (dis.oracle_path.empty() && dis.data_path.empty()) {
                std::cerr << "discover: exactly one of --oracle or --data is required\n";
                return 1;
            }
            return run_discover(dis);
        }
        if (*orient) {
            if (ori.sem_path.empty() && ori.obs_path.empty()) {
                std::cerr << "orient-interventional: provide --sem/--interventions or "
                             "--obs/--intv-manifest\n";
                return 1;
            }
            return run_orient(ori);
        }
        if (*eval) return run_eval(eval_g1, eval_g2, eval_out);
        if (*volume) return run_volume(vol_lambdas, vol_draws, vol_seed, vol_lo, vol_hi, vol_out);
        if (*ci_bench) return run_ci_bench(bench);
        if (*mec)
            return run_mec(mec_graph, mec_essential, mec_enumerate, mec_count, mec_guard);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const ck::GuardExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ck::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
