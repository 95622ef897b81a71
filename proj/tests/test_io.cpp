#include <doctest.h>

#include <filesystem>

#include "causalkit/errors.hpp"
#include "causalkit/io.hpp"
#include "causalkit/rng.hpp"
#include "causalkit/sem.hpp"

using namespace causalkit;
namespace fs = std::filesystem;

TEST_CASE("graph json round trip") {
    const Pdag g(4, {{1, 2}, {3, 2}}, {{3, 4}});
    CHECK(io::pdag_from_json(io::pdag_to_json(g)) == g);

    const Dag d = random_dag(6, 0.5, 3);
    CHECK(io::dag_from_json(io::dag_to_json(d)) == d);

    // a DAG file must not carry undirected edges
    CHECK_THROWS_AS(io::dag_from_json(io::pdag_to_json(g)), DataError);
    CHECK_THROWS_AS(io::pdag_from_json(io::json{{"directed", 5}}), DataError);
    CHECK_THROWS_AS(io::pdag_from_json(io::json{{"p", 2}, {"directed", {{1, 2}, {2, 1}}}}),
                    DataError);
}

TEST_CASE("sem and intervention json round trip") {
    const Dag g = random_dag(5, 0.5, 9);
    const LinearGaussianSem sem = random_sem(g, 0.25, 1.0, 10);
    const LinearGaussianSem back = io::sem_from_json(io::sem_to_json(sem));
    CHECK(back.dag() == sem.dag());
    CHECK(back.weights() == sem.weights());
    CHECK(back.noise_vars() == sem.noise_vars());

    const Intervention iv({{2, InterventionKind::Do, 1.5},
                           {4, InterventionKind::Shift, -2.0},
                           {5, InterventionKind::ScaleNoise, 3.0}});
    const Intervention back_iv = io::intervention_from_json(io::intervention_to_json(iv));
    CHECK(back_iv.targets() == iv.targets());
    CHECK(back_iv.mechanisms().size() == 3);
    CHECK_THROWS_AS(io::intervention_from_json(io::json{{"targets", {{{"node", 1}, {"kind", "zap"}}}}}),
                    DataError);
}

TEST_CASE("covariance json") {
    Eigen::MatrixXd cov(2, 2);
    cov << 1.0, 0.25, 0.25, 2.0;
    CHECK(io::covariance_from_json(io::covariance_to_json(cov)) == cov);
    CHECK_THROWS_AS(io::covariance_from_json(io::json{{"p", 3}, {"matrix", {{1.0}}}}),
                    DataError);
}

TEST_CASE("samples csv round trip is exact") {
    const Dag g = random_dag(4, 0.6, 21);
    const Eigen::MatrixXd data = sample(random_sem(g, 0.25, 1.0, 22), 50, 23);
    const Eigen::MatrixXd back = io::samples_from_csv(io::samples_to_csv(data));
    CHECK(back == data);

    CHECK_THROWS_AS(io::samples_from_csv("A,B\n1,2\n"), DataError);       // bad header
    CHECK_THROWS_AS(io::samples_from_csv("X1,X2\n1\n"), DataError);       // ragged row
    CHECK_THROWS_AS(io::samples_from_csv("X1,X2\n1,zebra\n"), DataError); // bad number
    CHECK_THROWS_AS(io::samples_from_csv("X1,X2\n"), DataError);          // no rows
}

TEST_CASE("atomic write leaves no temp file behind") {
    const fs::path dir = fs::temp_directory_path() / "causalkit_io_test";
    fs::create_directories(dir);
    const fs::path target = dir / "out.txt";
    io::atomic_write(target, "payload");
    CHECK(io::load_text(target) == "payload");
    CHECK_FALSE(fs::exists(target.string() + ".tmp"));
    io::atomic_write(target, "replaced");
    CHECK(io::load_text(target) == "replaced");
    fs::remove_all(dir);
}
