#include "tpmvc/pipeline.hpp"

#include "synthetic.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace tpmvc;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("tpmvc_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Writes a blob dataset plus manifest to disk; returns the manifest path.
fs::path write_blob_manifest(const fs::path& dir, int n, int clusters, int views,
                             std::uint64_t seed, bool with_labels) {
    const auto blobs = tpmvc::testing::make_blobs(n, clusters, views, 6, 6.0, seed);
    std::string view_list;
    for (int v = 0; v < views; ++v) {
        const std::string name = "view" + std::to_string(v) + ".csv";
        write_csv_matrix((dir / name).string(), blobs.views[static_cast<std::size_t>(v)]);
        view_list += (v ? std::string(", ") : std::string()) + "\"" + name + "\"";
    }
    if (with_labels) {
        std::ofstream labels(dir / "labels.csv");
        for (int l : blobs.labels) labels << l << '\n';
    }
    const fs::path manifest = dir / "manifest.json";
    std::ofstream out(manifest);
    out << "{\n  \"name\": \"blobs\",\n  \"views\": [" << view_list << "],\n";
    if (with_labels) out << "  \"labels\": \"labels.csv\",\n";
    out << "  \"clusters\": " << clusters << "\n}\n";
    return manifest;
}

}  // namespace

TEST_CASE("csv matrices round-trip bit-exactly") {
    const fs::path dir = fresh_dir("csv");
    std::mt19937_64 rng(81);
    Eigen::MatrixXd m(7, 3);
    for (Eigen::Index i = 0; i < 7; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            m(i, j) = tpmvc::testing::gaussian(rng) * std::pow(10.0, (i % 5) - 2);
    m(0, 0) = 1.0 / 3.0;
    m(1, 1) = -0.1;
    const std::string path = (dir / "m.csv").string();
    write_csv_matrix(path, m);
    const Eigen::MatrixXd back = load_csv_matrix(path);
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    for (Eigen::Index i = 0; i < 7; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) CHECK(back(i, j) == m(i, j));
}

TEST_CASE("load_dataset reads aligned views and reports bad files by name") {
    const fs::path dir = fresh_dir("load");
    Eigen::MatrixXd a(4, 2), b(4, 3);
    a.setRandom();
    b.setRandom();
    write_csv_matrix((dir / "a.csv").string(), a);
    write_csv_matrix((dir / "b.csv").string(), b);

    DatasetManifest manifest;
    manifest.base_dir = dir.string();
    manifest.view_paths = {"a.csv", "b.csv"};
    manifest.clusters = 2;
    const Dataset dataset = load_dataset(manifest);
    REQUIRE(dataset.views.size() == 2);
    CHECK(dataset.views[0].rows() == 4);
    CHECK(dataset.views[1].cols() == 3);
    CHECK(dataset.labels.empty());

    Eigen::MatrixXd shorter(3, 2);
    shorter.setRandom();
    write_csv_matrix((dir / "short.csv").string(), shorter);
    manifest.view_paths = {"a.csv", "short.csv"};
    try {
        load_dataset(manifest);
        FAIL("expected row count mismatch");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("short.csv") != std::string::npos);
    }

    manifest.view_paths = {"a.csv", "gone.csv"};
    try {
        load_dataset(manifest);
        FAIL("expected missing file");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("gone.csv") != std::string::npos);
    }

    manifest.view_paths = {"a.csv"};
    manifest.labels_path = "labels.csv";
    std::ofstream(dir / "labels.csv") << "1\n2\n1\n";  // three labels, four rows
    try {
        load_dataset(manifest);
        FAIL("expected label count mismatch");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("labels.csv") != std::string::npos);
    }
}

TEST_CASE("load_manifest parses fields and rejects bad documents") {
    const fs::path dir = fresh_dir("manifest");
    std::ofstream(dir / "ok.json")
        << R"({"name":"toy","views":["x.csv"],"labels":"y.csv","clusters":4})";
    const DatasetManifest manifest = load_manifest((dir / "ok.json").string());
    CHECK(manifest.name == "toy");
    CHECK(manifest.view_paths == std::vector<std::string>{"x.csv"});
    CHECK(manifest.labels_path == "y.csv");
    CHECK(manifest.clusters == 4);
    CHECK(manifest.base_dir == dir.string());

    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK_THROWS_AS(load_manifest((dir / "broken.json").string()), std::runtime_error);
    std::ofstream(dir / "noviews.json") << R"({"views":[],"clusters":2})";
    CHECK_THROWS_AS(load_manifest((dir / "noviews.json").string()), std::runtime_error);
    CHECK_THROWS_AS(load_manifest((dir / "absent.json").string()), std::runtime_error);
}

TEST_CASE("run_pipeline clusters synthetic blobs") {
    const fs::path dir = fresh_dir("pipeline");
    const fs::path manifest_path = write_blob_manifest(dir, 210, 3, 3, 7, true);
    const DatasetManifest manifest = load_manifest(manifest_path.string());

    PipelineConfig cfg;
    cfg.solver.seed = 7;
    cfg.solver.lambda1 = cfg.solver.lambda2 = 2.0;
    cfg.solver.max_iter = 400;
    const PipelineOutput out = run_pipeline(manifest, cfg);

    CHECK(out.report.converged);
    CHECK(out.report.anchor_count == 21);  // ceil(0.1 * 210)
    CHECK(out.report.effective_knn == 5);
    REQUIRE(out.report.acc_score.has_value());
    CHECK(*out.report.acc_score >= 0.95);
    CHECK(*out.report.nmi_score >= 0.0);
    CHECK(out.report.wall_time_sec > 0.0);
    CHECK(out.result.labels.size() == 210);
}

TEST_CASE("run_pipeline with one cluster labels everything 1") {
    const fs::path dir = fresh_dir("single");
    const fs::path manifest_path = write_blob_manifest(dir, 60, 1, 2, 11, false);
    const DatasetManifest manifest = load_manifest(manifest_path.string());
    PipelineConfig cfg;
    cfg.solver.seed = 11;
    const PipelineOutput out = run_pipeline(manifest, cfg);
    for (int label : out.result.labels) CHECK(label == 1);
    CHECK_FALSE(out.report.acc_score.has_value());
}

TEST_CASE("pipeline outputs are byte-identical across reruns") {
    const fs::path dir = fresh_dir("determinism");
    const fs::path manifest_path = write_blob_manifest(dir, 120, 3, 2, 23, true);
    const DatasetManifest manifest = load_manifest(manifest_path.string());
    PipelineConfig cfg;
    cfg.solver.seed = 23;

    const PipelineOutput first = run_pipeline(manifest, cfg);
    const PipelineOutput second = run_pipeline(manifest, cfg);
    write_outputs((dir / "out_a").string(), first.result, first.report);
    write_outputs((dir / "out_b").string(), second.result, second.report);

    CHECK(slurp(dir / "out_a" / "labels.csv") == slurp(dir / "out_b" / "labels.csv"));
    CHECK(slurp(dir / "out_a" / "metrics.json") == slurp(dir / "out_b" / "metrics.json"));
    CHECK(slurp(dir / "out_a" / "trace.csv") == slurp(dir / "out_b" / "trace.csv"));
}

TEST_CASE("write_outputs file shapes") {
    const fs::path dir = fresh_dir("outputs");

    ClusteringResult result;
    result.fused_indicator = Eigen::MatrixXd::Zero(3, 2);
    result.fused_indicator(0, 0) = 1.0;
    result.fused_indicator(1, 1) = 1.0;
    result.fused_indicator(2, 0) = 1.0;
    result.labels = {1, 2, 1};
    result.anchor_labels = {{2, 1}, {1, 1}};
    result.converged = false;
    result.iterations = 0;

    RunReport report;
    report.dataset = "tiny";
    report.clusters = 2;
    report.anchor_count = 2;

    SUBCASE("empty trace writes a header-only trace.csv") {
        write_outputs((dir / "empty").string(), result, report);
        CHECK(slurp(dir / "empty" / "trace.csv") ==
              "iter,r1,r2,r3,r4,objective,alpha_1,alpha_2\n");
        CHECK(slurp(dir / "empty" / "labels.csv") == "sample_index,label\n1,1\n2,2\n3,1\n");
        CHECK(slurp(dir / "empty" / "anchors_labels.csv") ==
              "view,anchor_index,label\n1,1,2\n1,2,1\n2,1,1\n2,2,1\n");
        // no ground truth: metrics.json carries no values
        CHECK(slurp(dir / "empty" / "metrics.json") == "{}\n");
    }

    SUBCASE("trace rows and metrics re-parse to the written values") {
        IterationTrace entry;
        entry.iteration = 1;
        entry.residual = {0.5, 1.0 / 3.0, 0.25, 0.2};
        entry.objective = 12.5;
        entry.view_weights = Eigen::VectorXd(2);
        entry.view_weights << 0.75, 0.25;
        result.trace.push_back(entry);
        report.acc_score = 2.0 / 3.0;
        report.nmi_score = 0.5;
        report.purity_score = 1.0;

        write_outputs((dir / "full").string(), result, report);
        const std::string trace = slurp(dir / "full" / "trace.csv");
        CHECK(trace.find("0.33333333333333331") != std::string::npos);
        // json numbers are shortest-round-trip, still lossless on re-parse
        const std::string metrics = slurp(dir / "full" / "metrics.json");
        CHECK(metrics.find("0.6666666666666666") != std::string::npos);
        const std::string rep = slurp(dir / "full" / "report.json");
        CHECK(rep.find("\"converged\": false") != std::string::npos);
        CHECK(rep.find("\"dataset\": \"tiny\"") != std::string::npos);
    }
}

TEST_CASE("command-line tool exit codes") {
    const fs::path dir = fresh_dir("cli");
    const fs::path manifest_path = write_blob_manifest(dir, 80, 2, 2, 31, true);

    const std::string base = std::string(TPMVC_CLI_PATH) + " --data " + manifest_path.string();
    const std::string quiet = " > /dev/null 2>&1";

    // success, including a run stopped at the iteration cap
    const int ok = std::system(
        (base + " --out " + (dir / "out").string() + " --seed 31" + quiet).c_str());
    CHECK(ok == 0);
    const int capped = std::system(
        (base + " --out " + (dir / "capped").string() + " --max-iter 3" + quiet).c_str());
    CHECK(capped == 0);
    CHECK(fs::exists(dir / "capped" / "labels.csv"));

    // errors surface as nonzero exits
    const int missing = std::system(
        (std::string(TPMVC_CLI_PATH) + " --data " + (dir / "nope.json").string() + quiet)
            .c_str());
    CHECK(missing != 0);
    const int badflag = std::system((base + " --p 7" + quiet).c_str());
    CHECK(badflag != 0);
}
