#include "tpmvc/pipeline.hpp"

#include "tpmvc/graph.hpp"
#include "tpmvc/metrics.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tpmvc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double parse_double(std::string_view token, const std::string& path, std::size_t line_no) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::runtime_error("parse error in " + path + " line " + std::to_string(line_no) +
                                 ": bad number '" + std::string(token) + "'");
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (fs::path(base_dir) / p).string();
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

json config_json(const RunReport& report) {
    const PipelineConfig& cfg = report.config;
    return json{{"lambda1", cfg.solver.lambda1},
                {"lambda2", cfg.solver.lambda2},
                {"p", cfg.solver.p},
                {"mu_init", cfg.solver.mu_init},
                {"mu_max", cfg.solver.mu_max},
                {"eta", cfg.solver.eta},
                {"tol", cfg.solver.tol},
                {"max_iter", cfg.solver.max_iter},
                {"seed", cfg.solver.seed},
                {"anchor_rate", cfg.anchor_rate},
                {"anchors", cfg.anchors},
                {"knn", cfg.knn},
                {"normalize", cfg.normalize},
                {"clusters", report.clusters}};
}

}  // namespace

Eigen::MatrixXd load_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (start <= view.size()) {
            std::size_t comma = view.find(',', start);
            if (comma == std::string_view::npos) comma = view.size();
            row.push_back(parse_double(trim(view.substr(start, comma - start)), path, line_no));
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("parse error in " + path + " line " +
                                     std::to_string(line_no) + ": ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("parse error in " + path + ": no data rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out = open_output(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << fmt17(m(i, j));
        }
        out << '\n';
    }
}

std::vector<int> load_labels_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing file: " + path);
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty()) continue;
        int value = 0;
        const auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), value);
        if (ec != std::errc{} || ptr != view.data() + view.size())
            throw std::runtime_error("parse error in " + path + " line " +
                                     std::to_string(line_no) + ": bad label '" +
                                     std::string(view) + "'");
        labels.push_back(value);
    }
    if (labels.empty()) throw std::runtime_error("parse error in " + path + ": no labels");
    return labels;
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error("parse error in " + path + ": " + e.what());
    }
    DatasetManifest manifest;
    manifest.base_dir = fs::path(path).parent_path().string();
    try {
        manifest.name = doc.value("name", std::string{});
        for (const auto& v : doc.at("views")) manifest.view_paths.push_back(v.get<std::string>());
        if (doc.contains("labels") && !doc["labels"].is_null())
            manifest.labels_path = doc["labels"].get<std::string>();
        manifest.clusters = doc.at("clusters").get<int>();
    } catch (const json::exception& e) {
        throw std::runtime_error("parse error in " + path + ": " + e.what());
    }
    if (manifest.view_paths.empty())
        throw std::runtime_error("parse error in " + path + ": manifest lists no views");
    if (manifest.clusters < 1)
        throw std::runtime_error("parse error in " + path + ": clusters must be >= 1");
    return manifest;
}

Dataset load_dataset(const DatasetManifest& manifest) {
    Dataset dataset;
    Eigen::Index n = -1;
    std::string first_path;
    for (const auto& rel : manifest.view_paths) {
        const std::string path = resolve(manifest.base_dir, rel);
        Eigen::MatrixXd view = load_csv_matrix(path);
        if (n < 0) {
            n = view.rows();
            first_path = path;
        } else if (view.rows() != n) {
            throw std::runtime_error("row count mismatch: " + path + " has " +
                                     std::to_string(view.rows()) + " rows, " + first_path +
                                     " has " + std::to_string(n));
        }
        dataset.views.push_back(std::move(view));
    }
    if (!manifest.labels_path.empty()) {
        const std::string path = resolve(manifest.base_dir, manifest.labels_path);
        dataset.labels = load_labels_csv(path);
        if (static_cast<Eigen::Index>(dataset.labels.size()) != n)
            throw std::runtime_error("row count mismatch: " + path + " has " +
                                     std::to_string(dataset.labels.size()) + " labels for " +
                                     std::to_string(n) + " samples");
    }
    return dataset;
}

PipelineOutput run_pipeline(const DatasetManifest& manifest, const PipelineConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();

    Dataset dataset = load_dataset(manifest);
    const Eigen::Index n = dataset.views[0].rows();
    const int clusters = cfg.clusters > 0 ? cfg.clusters : manifest.clusters;

    if (cfg.normalize)
        for (auto& view : dataset.views) view = normalize_minmax(view);

    Eigen::Index m = cfg.anchors;
    if (m <= 0) {
        m = std::max<Eigen::Index>(clusters,
                                   static_cast<Eigen::Index>(std::ceil(cfg.anchor_rate *
                                                                       static_cast<double>(n))));
        m = std::min<Eigen::Index>({m, Eigen::Index{1024}, n});
    }
    const int k = std::max(1, std::min<int>(cfg.knn, static_cast<int>(m) - 1));

    const AnchorSet anchors = select_anchors(dataset.views, m, cfg.solver.seed);
    std::vector<AnchorGraph> graphs;
    graphs.reserve(dataset.views.size());
    for (std::size_t v = 0; v < dataset.views.size(); ++v)
        graphs.push_back(
            knn_simplex_graph(pairwise_sqdist(dataset.views[v], anchors.coordinates[v]), k));

    PipelineOutput out;
    out.result = run(graphs, clusters, cfg.solver);

    out.report.dataset = manifest.name;
    out.report.config = cfg;
    out.report.anchor_count = m;
    out.report.effective_knn = k;
    out.report.clusters = clusters;
    out.report.iterations = out.result.iterations;
    out.report.converged = out.result.converged;
    if (!dataset.labels.empty()) {
        out.report.acc_score = acc(out.result.labels, dataset.labels);
        out.report.nmi_score = nmi(out.result.labels, dataset.labels);
        out.report.purity_score = purity(out.result.labels, dataset.labels);
    }
    out.report.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

void write_outputs(const std::string& out_dir, const ClusteringResult& result,
                   const RunReport& report) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    {
        std::ofstream out = open_output(dir / "labels.csv");
        out << "sample_index,label\n";
        for (std::size_t i = 0; i < result.labels.size(); ++i)
            out << (i + 1) << ',' << result.labels[i] << '\n';
    }

    {
        std::ofstream out = open_output(dir / "anchors_labels.csv");
        out << "view,anchor_index,label\n";
        for (std::size_t v = 0; v < result.anchor_labels.size(); ++v)
            for (std::size_t i = 0; i < result.anchor_labels[v].size(); ++i)
                out << (v + 1) << ',' << (i + 1) << ',' << result.anchor_labels[v][i] << '\n';
    }

    {
        json metrics = json::object();
        if (report.acc_score) metrics["acc"] = *report.acc_score;
        if (report.nmi_score) metrics["nmi"] = *report.nmi_score;
        if (report.purity_score) metrics["purity"] = *report.purity_score;
        std::ofstream out = open_output(dir / "metrics.json");
        out << metrics.dump(2) << '\n';
    }

    {
        std::ofstream out = open_output(dir / "trace.csv");
        const std::size_t views = result.anchor_labels.size();
        out << "iter,r1,r2,r3,r4,objective";
        for (std::size_t v = 1; v <= views; ++v) out << ",alpha_" << v;
        out << '\n';
        for (const auto& entry : result.trace) {
            out << entry.iteration;
            for (double r : entry.residual) out << ',' << fmt17(r);
            out << ',' << fmt17(entry.objective);
            for (Eigen::Index v = 0; v < entry.view_weights.size(); ++v)
                out << ',' << fmt17(entry.view_weights(v));
            out << '\n';
        }
    }

    {
        json doc{{"dataset", report.dataset},
                 {"config", config_json(report)},
                 {"anchor_count", report.anchor_count},
                 {"effective_knn", report.effective_knn},
                 {"clusters", report.clusters},
                 {"iterations", report.iterations},
                 {"converged", report.converged},
                 {"wall_time_sec", report.wall_time_sec}};
        if (report.acc_score) {
            doc["metrics"] = json{{"acc", *report.acc_score},
                                  {"nmi", *report.nmi_score},
                                  {"purity", *report.purity_score}};
        }
        std::ofstream out = open_output(dir / "report.json");
        out << doc.dump(2) << '\n';
    }
}

}  // namespace tpmvc
