// End-to-end checks of the causalkit binary: exit codes, file outputs, and
// rerun determinism. Invoked as: cli_tests <path-to-causalkit>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "causalkit/graph.hpp"
#include "causalkit/io.hpp"

namespace fs = std::filesystem;
namespace ck = causalkit;

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what) {
    if (ok) {
        std::cout << "[ok] " << what << "\n";
    } else {
        std::cout << "[FAIL] " << what << "\n";
        ++g_failures;
    }
}

int run(const std::string& cmd) {
    const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <causalkit-binary>\n";
        return 2;
    }
    const std::string bin = argv[1];
    const fs::path dir = fs::temp_directory_path() / "causalkit_cli_tests";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto path = [&](const std::string& name) { return (dir / name).string(); };

    // simulate writes data plus graph
    expect(run(bin + " simulate --p 6 --density 0.4 --n 200 --seed 7 --out-data " +
               path("d.csv") + " --out-graph " + path("g.json") + " --out-sem " +
               path("sem.json")) == 0,
           "simulate exits 0");
    {
        const auto data = ck::io::samples_from_csv(ck::io::load_text(path("d.csv")));
        expect(data.rows() == 200 && data.cols() == 6, "simulate wrote 200x6 samples");
        const ck::Dag g = ck::io::dag_from_json(ck::io::load_json(path("g.json")));
        expect(g.node_count() == 6, "simulate wrote the graph");
    }

    // oracle discovery recovers the essential graph
    expect(run(bin + " discover --algo pc --oracle " + path("g.json") + " --report " +
               path("r_pc.json")) == 0,
           "discover pc exits 0");
    {
        const auto report = ck::io::load_json(path("r_pc.json"));
        const ck::Pdag learned = ck::io::pdag_from_json(report["pdag"]);
        const ck::Dag truth = ck::io::dag_from_json(ck::io::load_json(path("g.json")));
        expect(learned == ck::essential_graph(truth), "pc oracle output is the essential graph");
        expect(report["elapsed_ms"].get<double>() == 0.0, "timings off by default");
    }

    // data-mode discovery runs
    expect(run(bin + " discover --algo gsp --data " + path("d.csv") +
               " --alpha 0.01 --seed 3 --report " + path("r_gsp.json")) == 0,
           "discover gsp on data exits 0");

    // mutually exclusive input flags
    expect(run(bin + " discover --algo pc --oracle " + path("g.json") + " --data " +
               path("d.csv") + " --report " + path("r_bad.json")) == 1,
           "oracle and data flags are mutually exclusive");

    // sp guard: p=8 exceeds the default guard of 7 -> usage error
    expect(run(bin + " simulate --p 8 --density 0.3 --n 10 --seed 1 --out-data " +
               path("d8.csv") + " --out-graph " + path("g8.json")) == 0,
           "simulate p=8");
    expect(run(bin + " discover --algo sp --oracle " + path("g8.json") + " --report " +
               path("r_sp8.json")) == 1,
           "sp refuses p beyond the guard with exit 1");

    // unknown flag and unreadable file
    expect(run(bin + " discover --algo pc --oracle " + path("g.json") +
               " --no-such-flag --report " + path("x.json")) == 1,
           "unknown flag exits 1");
    expect(run(bin + " discover --algo pc --oracle " + path("missing.json") + " --report " +
               path("x.json")) == 2,
           "unreadable input exits 2");

    // eval
    expect(run(bin + " eval --g1 " + path("g.json") + " --g2 " + path("g.json") + " --out " +
               path("eval.json")) == 0,
           "eval exits 0");
    expect(ck::io::load_json(path("eval.json"))["shd"].get<int>() == 0, "eval shd 0 on itself");

    // mec utilities
    expect(run(bin + " mec --graph " + path("g.json") + " --essential " + path("ess.json") +
               " --count " + path("count.json")) == 0,
           "mec exits 0");
    {
        const ck::Dag truth = ck::io::dag_from_json(ck::io::load_json(path("g.json")));
        const ck::Pdag ess = ck::io::pdag_from_json(ck::io::load_json(path("ess.json")));
        expect(ess == ck::essential_graph(truth), "mec essential graph matches");
    }

    // orient-interventional, sampled mode, driven entirely through the CLI
    {
        const ck::Dag fork(3, {{1, 2}, {1, 3}});
        const ck::LinearGaussianSem sem(fork, {{{1, 2}, 1.0}, {{1, 3}, 1.0}}, {1, 1, 1});
        ck::io::atomic_write(path("fork_sem.json"), ck::io::sem_to_json(sem).dump() + "\n");
        ck::io::atomic_write(path("fork_base.json"),
                             ck::io::pdag_to_json(ck::essential_graph(fork)).dump() + "\n");
        ck::io::atomic_write(path("iv2.json"),
                             "{\"targets\":[{\"node\":2,\"kind\":\"do\",\"value\":1.0}]}\n");
        ck::io::atomic_write(path("iv3.json"),
                             "{\"targets\":[{\"node\":3,\"kind\":\"do\",\"value\":1.0}]}\n");
        ck::io::atomic_write(path("manifest.json"),
                             "{\"interventions\":[{\"targets\":[2],\"data\":\"" +
                                 path("iv2.csv") + "\"},{\"targets\":[3],\"data\":\"" +
                                 path("iv3.csv") + "\"}]}\n");
        expect(run(bin + " simulate --sem " + path("fork_sem.json") +
                   " --n 4000 --seed 5 --out-data " + path("fork_obs.csv")) == 0,
               "simulate from an existing SEM");
        expect(run(bin + " simulate --sem " + path("fork_sem.json") + " --intervention " +
                   path("iv2.json") + " --n 4000 --seed 6 --out-data " + path("iv2.csv")) == 0,
               "simulate under do(X2)");
        expect(run(bin + " simulate --sem " + path("fork_sem.json") + " --intervention " +
                   path("iv3.json") + " --n 4000 --seed 7 --out-data " + path("iv3.csv")) == 0,
               "simulate under do(X3)");
        expect(run(bin + " orient-interventional --pdag " + path("fork_base.json") +
                   " --obs " + path("fork_obs.csv") + " --intv-manifest " +
                   path("manifest.json") + " --alpha 0.01 --out " + path("fork_out.json")) == 0,
               "orient-interventional sampled mode exits 0");
        const ck::Pdag oriented =
            ck::io::pdag_from_json(ck::io::load_json(path("fork_out.json"))["pdag"]);
        expect(oriented == ck::Pdag(3, {{1, 2}, {1, 3}}, {}),
               "sampled interventions fully direct the fork");
    }

    // faithfulness-volume
    expect(run(bin + " faithfulness-volume --lambda 0 --draws 20000 --seed 1 --out " +
               path("v.jsonl")) == 0,
           "faithfulness-volume exits 0");

    // ci-bench
    expect(run(bin + " ci-bench --p 3 --p 4 --instances 2 --density 0.4 --seed 5 --out " +
               path("bench.tsv")) == 0,
           "ci-bench exits 0");

    // rerun determinism: byte-identical outputs for every subcommand
    struct Recheck {
        std::string cmd;
        std::string file;
    };
    const std::vector<Recheck> rechecks = {
        {bin + " simulate --p 6 --density 0.4 --n 200 --seed 7 --out-data " + path("d2.csv") +
             " --out-graph " + path("g2.json"),
         "d2.csv"},
        {bin + " discover --algo pc --oracle " + path("g.json") + " --report " +
             path("r2.json"),
         "r2.json"},
        {bin + " faithfulness-volume --lambda 0.1 --draws 20000 --seed 1 --out " +
             path("v2.jsonl"),
         "v2.jsonl"},
        {bin + " ci-bench --p 3 --instances 2 --density 0.4 --seed 5 --out " +
             path("bench2.tsv"),
         "bench2.tsv"},
    };
    for (const auto& rc : rechecks) {
        expect(run(rc.cmd) == 0, "determinism first run: " + rc.file);
        const std::string first = ck::io::load_text(path(rc.file));
        expect(run(rc.cmd) == 0, "determinism second run: " + rc.file);
        expect(ck::io::load_text(path(rc.file)) == first, "byte-identical rerun: " + rc.file);
    }

    fs::remove_all(dir);
    if (g_failures) {
        std::cout << g_failures << " cli check(s) failed\n";
        return 1;
    }
    std::cout << "all cli checks passed\n";
    return 0;
}
