#pragma once

#include "tpmvc/solver.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace tpmvc {

/// Dataset description: one headerless CSV matrix per view (rows = samples,
/// aligned by row index), optional integer label file, cluster count.
struct DatasetManifest {
    std::string name;
    std::vector<std::string> view_paths;  // resolved against base_dir when relative
    std::string labels_path;              // empty when no ground truth
    int clusters = 0;
    std::string base_dir;
};

struct Dataset {
    std::vector<Eigen::MatrixXd> views;
    std::vector<int> labels;  // empty when the manifest has none
};

struct PipelineConfig {
    ProblemConfig solver;
    double anchor_rate = 0.1;   // m = max(c, ceil(rate * n)), capped at 1024
    Eigen::Index anchors = 0;   // absolute anchor count; overrides the rate when > 0
    int knn = 5;
    bool normalize = true;      // per-view min-max feature rescaling
    int clusters = 0;           // overrides the manifest when > 0
};

struct RunReport {
    std::string dataset;
    PipelineConfig config;      // effective values, echoed to report.json
    Eigen::Index anchor_count = 0;
    int effective_knn = 0;
    int clusters = 0;
    int iterations = 0;
    bool converged = false;
    std::optional<double> acc_score;
    std::optional<double> nmi_score;
    std::optional<double> purity_score;
    double wall_time_sec = 0.0;
};

struct PipelineOutput {
    RunReport report;
    ClusteringResult result;
};

/// Parse a JSON manifest. Relative view/label paths are resolved against the
/// manifest's directory.
DatasetManifest load_manifest(const std::string& path);

/// Load all views and optional labels; every error names the offending file.
Dataset load_dataset(const DatasetManifest& manifest);

/// normalize -> anchors -> graphs -> solver -> metrics. Deterministic for a
/// fixed seed.
PipelineOutput run_pipeline(const DatasetManifest& manifest, const PipelineConfig& cfg);

/// Write labels.csv, anchors_labels.csv, metrics.json, trace.csv, report.json
/// into out_dir (created if needed). Floats round-trip at 17 significant
/// digits.
void write_outputs(const std::string& out_dir, const ClusteringResult& result,
                   const RunReport& report);

// CSV helpers shared by the loader, the writer, and test fixtures.
Eigen::MatrixXd load_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m);
std::vector<int> load_labels_csv(const std::string& path);

}  // namespace tpmvc
