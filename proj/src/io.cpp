#include "swvar/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace swvar {

using nlohmann::json;

namespace {

std::string fmt(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    const auto res = std::from_chars(s.data() + b, s.data() + e, v);
    if (res.ec != std::errc() || res.ptr != s.data() + e) throw ConfigError("not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) out.push_back(cur);
    return out;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

template <class T>
T field(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("penalty key '") + key + "': " + e.what());
    }
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string trajectory_to_csv(const Trajectory& traj) {
    traj.validate();
    std::string out = "t";
    for (Eigen::Index j = 0; j < traj.data.cols(); ++j) out += ",z" + std::to_string(j + 1);
    if (traj.exo) {
        for (Eigen::Index j = 0; j < traj.exo->cols(); ++j) out += ",u" + std::to_string(j + 1);
    }
    out += '\n';
    for (Eigen::Index t = 0; t < traj.data.rows(); ++t) {
        out += std::to_string(t);
        for (Eigen::Index j = 0; j < traj.data.cols(); ++j) out += "," + fmt(traj.data(t, j));
        if (traj.exo) {
            for (Eigen::Index j = 0; j < traj.exo->cols(); ++j) out += "," + fmt((*traj.exo)(t, j));
        }
        out += '\n';
    }
    return out;
}

Trajectory trajectory_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("trajectory CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_line(line);
    if (header.empty() || header[0] != "t") throw ConfigError("trajectory CSV must start with column 't'");
    std::size_t pz = 0, pu = 0;
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (!header[i].empty() && header[i][0] == 'z' && pu == 0) ++pz;
        else if (!header[i].empty() && header[i][0] == 'u') ++pu;
        else throw ConfigError("unexpected trajectory column '" + header[i] + "'");
    }
    if (pz == 0) throw ConfigError("trajectory CSV has no z columns");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_line(line);
        if (f.size() != header.size()) throw ConfigError("trajectory row has the wrong number of fields");
        std::vector<double> r;
        for (std::size_t i = 1; i < f.size(); ++i) r.push_back(parse_double(f[i]));
        rows.push_back(std::move(r));
    }
    Trajectory traj;
    traj.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(pz));
    if (pu) traj.exo = Matrix(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(pu));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (std::size_t j = 0; j < pz; ++j) traj.data(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = rows[t][j];
        for (std::size_t j = 0; j < pu; ++j) {
            (*traj.exo)(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = rows[t][pz + j];
        }
    }
    traj.validate();
    return traj;
}

std::string matrix_to_csv(const Matrix& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += fmt(m(i, j));
        }
        out += '\n';
    }
    return out;
}

Matrix matrix_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> r;
        for (const auto& f : split_line(line)) r.push_back(parse_double(f));
        if (!rows.empty() && r.size() != rows.front().size()) throw ConfigError("ragged matrix CSV");
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw ConfigError("matrix CSV is empty");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return m;
}

PenaltySpec penalty_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("penalty config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("penalty config must be an object");
    const std::string type = field<std::string>(j, "type");
    if (type == "l1") return PenaltySpec::l1();
    if (type == "group") {
        auto groups = field<std::vector<std::vector<std::size_t>>>(j, "groups");
        std::vector<double> weights;
        if (j.contains("weights")) weights = field<std::vector<double>>(j, "weights");
        return PenaltySpec::group(std::move(groups), std::move(weights));
    }
    if (type == "owl") return PenaltySpec::owl(field<std::vector<double>>(j, "weights"));
    if (type == "ksupport") return PenaltySpec::ksupport(field<std::size_t>(j, "k"));
    if (type == "nuclear") return PenaltySpec::nuclear(field<std::size_t>(j, "rows"), field<std::size_t>(j, "cols"));
    if (type == "own_other") {
        const double scale = j.contains("exo_scale") ? field<double>(j, "exo_scale") : 1.0;
        return PenaltySpec::own_other(field<std::size_t>(j, "p"), field<std::size_t>(j, "d_a"),
                                      j.contains("d_b") ? field<std::size_t>(j, "d_b") : 0, scale);
    }
    throw ConfigError("unknown penalty type '" + type + "'");
}

std::string fit_to_json(const FitResult& fit, bool include_trace, const std::optional<ErrorMetrics>& metrics) {
    json j;
    j["coeffs"] = matrix_json(fit.coeffs);
    j["iters"] = fit.iters;
    j["converged"] = fit.converged;
    j["lambda_used"] = fit.lambda_used;
    if (fit.low_rank) j["low_rank"] = matrix_json(*fit.low_rank);
    if (fit.sparse) j["sparse"] = matrix_json(*fit.sparse);
    if (include_trace) j["objective_trace"] = fit.objective_trace;
    if (metrics) j["metrics"] = json::parse(metrics_to_json(*metrics));
    return j.dump(2) + "\n";
}

std::string metrics_to_json(const ErrorMetrics& m) {
    json j;
    j["frob_err"] = m.frob_err;
    j["rel_err"] = m.rel_err;
    j["pred_err"] = m.pred_err;
    j["max_row_l2"] = m.max_row_l2;
    return j.dump();
}

std::string dependence_report_to_json(const DependenceReport& r) {
    json j;
    j["c_factor"] = r.c_factor;
    j["rho"] = r.rho;
    j["op_norm"] = r.op_norm;
    j["m_upper"] = r.m_upper;
    j["m_lower"] = r.m_lower;
    j["truncation_terms"] = r.truncation_terms;
    j["tail_bound"] = r.tail_bound;
    return j.dump(2) + "\n";
}

}  // namespace swvar
