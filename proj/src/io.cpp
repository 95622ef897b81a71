#include "causalkit/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "causalkit/errors.hpp"

namespace causalkit::io {

namespace {

json edges_to_json(const std::vector<Edge>& edges) {
    json out = json::array();
    for (const auto& [i, j] : edges) out.push_back(json::array({i, j}));
    return out;
}

std::vector<Edge> edges_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw DataError(std::string("graph JSON: ") + what + " must be an array");
    std::vector<Edge> out;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            throw DataError(std::string("graph JSON: each ") + what +
                            " entry must be a pair of integers");
        out.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return out;
}

int p_from_json(const json& j, const char* schema) {
    if (!j.is_object() || !j.contains("p") || !j["p"].is_number_integer())
        throw DataError(std::string(schema) + ": missing integer field \"p\"");
    return j["p"].get<int>();
}

// Shortest representation that round-trips exactly.
std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    double back;
    std::sscanf(buf, "%lf", &back);
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, x);
        std::sscanf(shorter, "%lf", &back);
        if (back == x) return shorter;
    }
    return buf;
}

}  // namespace

json pdag_to_json(const Pdag& g) {
    json out;
    out["p"] = g.node_count();
    out["directed"] = edges_to_json(g.directed_edges());
    out["undirected"] = edges_to_json(g.undirected_edges());
    return out;
}

json dag_to_json(const Dag& g) {
    json out;
    out["p"] = g.node_count();
    out["directed"] = edges_to_json(g.edges());
    out["undirected"] = json::array();
    return out;
}

Pdag pdag_from_json(const json& j) {
    const int p = p_from_json(j, "graph JSON");
    std::vector<Edge> directed, undirected;
    if (j.contains("directed")) directed = edges_from_json(j["directed"], "directed");
    if (j.contains("undirected")) undirected = edges_from_json(j["undirected"], "undirected");
    return Pdag(p, directed, undirected);
}

Dag dag_from_json(const json& j) {
    const int p = p_from_json(j, "graph JSON");
    if (j.contains("undirected") && !j["undirected"].empty())
        throw DataError("graph JSON: a DAG must have an empty \"undirected\" list");
    std::vector<Edge> directed;
    if (j.contains("directed")) directed = edges_from_json(j["directed"], "directed");
    return Dag(p, directed);
}

json sem_to_json(const LinearGaussianSem& sem) {
    json out;
    out["p"] = sem.node_count();
    json edges = json::array();
    for (const auto& [edge, w] : sem.weights())
        edges.push_back(json::array({edge.first, edge.second, w}));
    out["edges"] = std::move(edges);
    out["noise_vars"] = sem.noise_vars();
    out["noise_means"] = sem.noise_means();
    return out;
}

LinearGaussianSem sem_from_json(const json& j) {
    const int p = p_from_json(j, "SEM JSON");
    if (!j.contains("edges") || !j["edges"].is_array())
        throw DataError("SEM JSON: missing \"edges\" array");
    std::vector<Edge> edges;
    std::map<Edge, double> weights;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 3)
            throw DataError("SEM JSON: each edge must be [i, j, weight]");
        const Edge edge{e[0].get<int>(), e[1].get<int>()};
        edges.push_back(edge);
        weights[edge] = e[2].get<double>();
    }
    std::vector<double> vars(p, 1.0), means(p, 0.0);
    if (j.contains("noise_vars")) vars = j["noise_vars"].get<std::vector<double>>();
    if (j.contains("noise_means")) means = j["noise_means"].get<std::vector<double>>();
    return LinearGaussianSem(Dag(p, edges), std::move(weights), std::move(vars),
                             std::move(means));
}

json intervention_to_json(const Intervention& iv) {
    json targets = json::array();
    for (const auto& m : iv.mechanisms()) {
        const char* kind = m.kind == InterventionKind::Do      ? "do"
                           : m.kind == InterventionKind::Shift ? "shift"
                                                               : "scale";
        targets.push_back(json{{"node", m.node}, {"kind", kind}, {"value", m.value}});
    }
    return json{{"targets", std::move(targets)}};
}

Intervention intervention_from_json(const json& j) {
    if (!j.is_object() || !j.contains("targets") || !j["targets"].is_array())
        throw DataError("intervention JSON: missing \"targets\" array");
    std::vector<Mechanism> mechs;
    for (const auto& t : j["targets"]) {
        Mechanism m;
        if (!t.contains("node") || !t.contains("kind"))
            throw DataError("intervention JSON: target needs \"node\" and \"kind\"");
        m.node = t["node"].get<int>();
        const std::string kind = t["kind"].get<std::string>();
        if (kind == "do")
            m.kind = InterventionKind::Do;
        else if (kind == "shift")
            m.kind = InterventionKind::Shift;
        else if (kind == "scale")
            m.kind = InterventionKind::ScaleNoise;
        else
            throw DataError("intervention JSON: unknown kind \"" + kind + "\"");
        m.value = t.value("value", 0.0);
        mechs.push_back(m);
    }
    return Intervention(std::move(mechs));
}

Eigen::MatrixXd covariance_from_json(const json& j) {
    const int p = p_from_json(j, "covariance JSON");
    if (!j.contains("matrix") || !j["matrix"].is_array() ||
        static_cast<int>(j["matrix"].size()) != p)
        throw DataError("covariance JSON: \"matrix\" must be a p x p array");
    Eigen::MatrixXd out(p, p);
    for (int r = 0; r < p; ++r) {
        const auto& row = j["matrix"][r];
        if (!row.is_array() || static_cast<int>(row.size()) != p)
            throw DataError("covariance JSON: row " + std::to_string(r + 1) +
                            " has wrong length");
        for (int c = 0; c < p; ++c) out(r, c) = row[c].get<double>();
    }
    return out;
}

json covariance_to_json(const Eigen::MatrixXd& cov) {
    json rows = json::array();
    for (int r = 0; r < cov.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < cov.cols(); ++c) row.push_back(cov(r, c));
        rows.push_back(std::move(row));
    }
    return json{{"p", cov.rows()}, {"matrix", std::move(rows)}};
}

json report_to_json(const DiscoveryReport& report, bool with_timings) {
    json out;
    out["version"] = "causalkit 0.1.0";
    out["algorithm"] = report.algorithm;
    out["pdag"] = pdag_to_json(report.output);
    out["ci_queries"] = report.ci_queries;
    out["elapsed_ms"] = with_timings ? report.elapsed_ms : 0.0;
    out["converged"] = report.converged;
    out["config"] = report.config;
    return out;
}

std::string samples_to_csv(const Eigen::MatrixXd& samples) {
    std::string out;
    for (int c = 0; c < samples.cols(); ++c) {
        if (c) out += ",";
        out += "X" + std::to_string(c + 1);
    }
    out += "\n";
    for (int r = 0; r < samples.rows(); ++r) {
        for (int c = 0; c < samples.cols(); ++c) {
            if (c) out += ",";
            out += format_double(samples(r, c));
        }
        out += "\n";
    }
    return out;
}

Eigen::MatrixXd samples_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("samples CSV: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    {
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) header.push_back(cell);
    }
    const int p = static_cast<int>(header.size());
    for (int c = 0; c < p; ++c)
        if (header[c] != "X" + std::to_string(c + 1))
            throw DataError("samples CSV: header must be X1..Xp, got \"" + header[c] +
                            "\" in column " + std::to_string(c + 1));

    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw DataError("samples CSV: bad number \"" + cell + "\" on line " +
                                std::to_string(line_no));
            }
        }
        if (static_cast<int>(row.size()) != p)
            throw DataError("samples CSV: line " + std::to_string(line_no) + " has " +
                            std::to_string(row.size()) + " cells, expected " +
                            std::to_string(p));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("samples CSV: no data rows");
    Eigen::MatrixXd out(rows.size(), p);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < p; ++c) out(static_cast<int>(r), c) = rows[r][c];
    return out;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw DataError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

std::string load_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << content;
        if (!out) throw DataError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw DataError("cannot rename " + tmp.string() + " to " + path.string());
}

}  // namespace causalkit::io
