#include "lmar/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lmar/errors.hpp"

namespace lmar {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        // trim surrounding spaces
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos
                             ? std::string{}
                             : field.substr(b, e - b + 1));
    }
    return fields;
}

double parse_double(const std::string& s, const std::string& path) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw BadInputError("unparsable number '" + s + "' in " + path);
    }
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    const auto nr = static_cast<Eigen::Index>(rows.size());
    if (nr == 0) throw BadInputError("empty matrix in model file");
    const auto nc = static_cast<Eigen::Index>(rows.at(0).size());
    Eigen::MatrixXd m(nr, nc);
    for (Eigen::Index r = 0; r < nr; ++r) {
        const auto& row = rows.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != nc) {
            throw BadInputError("ragged matrix in model file");
        }
        for (Eigen::Index c = 0; c < nc; ++c) {
            m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
    }
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = arr.at(static_cast<std::size_t>(i)).get<double>();
    }
    return v;
}

}  // namespace

TraceData read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw BadInputError("cannot open trace file " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw BadInputError("empty trace file " + path);
    }
    const auto header = split_csv_line(line);
    TraceData trace;
    if (header == std::vector<std::string>{"t_seconds", "x_mm", "y_mm", "z_mm"}) {
        trace.is_3d = true;
    } else if (header == std::vector<std::string>{"t_seconds", "value_mm"}) {
        trace.is_3d = false;
    } else {
        throw BadInputError("trace header must be t_seconds,value_mm or "
                            "t_seconds,x_mm,y_mm,z_mm in " + path);
    }

    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        const std::size_t expected = trace.is_3d ? 4 : 2;
        if (fields.size() != expected) {
            throw BadInputError("row with " + std::to_string(fields.size()) +
                                " fields (expected " + std::to_string(expected) +
                                ") in " + path);
        }
        times.push_back(parse_double(fields[0], path));
        if (trace.is_3d) {
            trace.points.emplace_back(parse_double(fields[1], path),
                                      parse_double(fields[2], path),
                                      parse_double(fields[3], path));
        } else {
            trace.values.push_back(parse_double(fields[1], path));
        }
    }
    if (times.size() < 2) {
        throw BadSeriesError("trace needs at least two samples: " + path);
    }
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) {
        throw BadSeriesError("timestamps not strictly increasing in " + path);
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double step = times[i] - times[i - 1];
        if (!(step > 0.0)) {
            throw BadSeriesError("timestamps not strictly increasing in " + path);
        }
        if (std::abs(step - dt) > 1e-6) {
            throw BadSeriesError("gapped trace: spacing " + format_double(step) +
                                 " s at row " + std::to_string(i + 1) +
                                 " differs from " + format_double(dt) + " s in " +
                                 path);
        }
    }
    trace.sample_rate_hz = 1.0 / dt;
    return trace;
}

void write_trace_1d(const std::string& path, const TimeSeries& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadInputError("cannot write trace file " + path);
    out << "t_seconds,value_mm\n";
    const double dt = 1.0 / series.sample_rate_hz();
    const auto& v = series.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        out << format_double(static_cast<double>(i) * dt) << ','
            << format_double(v[i]) << '\n';
    }
}

void write_trace_3d(const std::string& path, const Trace3d& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadInputError("cannot write trace file " + path);
    out << "t_seconds,x_mm,y_mm,z_mm\n";
    const double dt = 1.0 / trace.sample_rate_hz;
    for (std::size_t i = 0; i < trace.points.size(); ++i) {
        const auto& p = trace.points[i];
        out << format_double(static_cast<double>(i) * dt) << ','
            << format_double(p[0]) << ',' << format_double(p[1]) << ','
            << format_double(p[2]) << '\n';
    }
}

void save_model(const std::string& path, const ModelFile& model) {
    json doc;
    doc["format_version"] = model.format_version;
    doc["model_kind"] = model.model_kind;
    doc["sample_rate_hz"] = model.sample_rate_hz;
    if (model.lmar) {
        const auto& m = *model.lmar;
        json node;
        node["p"] = m.p;
        node["m"] = m.m;
        node["sigma"] = matrix_to_json(m.sigma_hat.matrix());
        node["iterations"] = m.iterations;
        node["monitor_trace"] = m.monitor_trace;
        node["exact_loglik_final"] = m.exact_loglik_final;
        node["converged"] = m.converged;
        node["best_iterate_used"] = m.best_iterate_used;
        doc["lmar"] = std::move(node);
    }
    if (model.ridge) {
        const auto& r = *model.ridge;
        json node;
        node["p"] = r.p;
        node["k"] = r.k;
        node["lambda"] = r.lambda;
        node["beta0"] = r.beta0;
        node["beta"] = vector_to_json(r.beta);
        node["resid_variance"] = r.resid_variance;
        doc["ridge"] = std::move(node);
    }
    if (model.pca) {
        json node;
        node["mean"] = vector_to_json(model.pca->mean);
        node["components"] = matrix_to_json(model.pca->components);
        node["explained_variance"] = vector_to_json(model.pca->explained_variance);
        doc["pca"] = std::move(node);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadInputError("cannot write model file " + path);
    out << doc.dump(2) << '\n';
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInputError("cannot open model file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw BadInputError("malformed model file " + path + ": " + e.what());
    }
    try {
        ModelFile model;
        model.format_version = doc.at("format_version").get<int>();
        if (model.format_version != 1) {
            throw BadInputError("unsupported model format_version in " + path);
        }
        model.model_kind = doc.at("model_kind").get<std::string>();
        model.sample_rate_hz = doc.at("sample_rate_hz").get<double>();
        if (doc.contains("lmar")) {
            const auto& node = doc.at("lmar");
            FittedModel m{
                .sigma_hat = MixtureParam(matrix_from_json(node.at("sigma"))),
                .p = node.at("p").get<int>(),
                .m = node.at("m").get<std::int64_t>(),
                .iterations = node.at("iterations").get<int>(),
                .monitor_trace =
                    node.at("monitor_trace").get<std::vector<double>>(),
                .exact_loglik_final = node.at("exact_loglik_final").get<double>(),
                .converged = node.at("converged").get<bool>(),
                .best_iterate_used = node.at("best_iterate_used").get<bool>(),
            };
            model.lmar = std::move(m);
        }
        if (doc.contains("ridge")) {
            const auto& node = doc.at("ridge");
            RidgeModel r;
            r.p = node.at("p").get<int>();
            r.k = node.at("k").get<int>();
            r.lambda = node.at("lambda").get<double>();
            r.beta0 = node.at("beta0").get<double>();
            r.beta = vector_from_json(node.at("beta"));
            r.resid_variance = node.at("resid_variance").get<double>();
            model.ridge = std::move(r);
        }
        if (doc.contains("pca")) {
            const auto& node = doc.at("pca");
            const Eigen::VectorXd mean = vector_from_json(node.at("mean"));
            const Eigen::MatrixXd comps = matrix_from_json(node.at("components"));
            const Eigen::VectorXd ev =
                vector_from_json(node.at("explained_variance"));
            if (mean.size() != 3 || comps.rows() != 3 || comps.cols() != 3 ||
                ev.size() != 3) {
                throw BadInputError("projection basis in " + path +
                                    " must be 3-dimensional");
            }
            PcaBasis basis;
            basis.mean = mean;
            basis.components = comps;
            basis.explained_variance = ev;
            model.pca = basis;
        }
        return model;
    } catch (const json::exception& e) {
        throw BadInputError("missing or mistyped field in model file " + path +
                            ": " + e.what());
    }
}

}  // namespace lmar
