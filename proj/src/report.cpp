#include "qcsense/report.hpp"

#include <charconv>
#include <ostream>

namespace qcsense {

namespace {

void put_double(std::ostream& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
}

Json vector_json(const Point& v) {
    Json arr = Json::array();
    for (Eigen::Index j = 0; j < v.size(); ++j) arr.push_back(v[j]);
    return arr;
}

Point point_from_json(const Json& j, int d) {
    if (!j.is_array() || static_cast<int>(j.size()) != d) throw std::invalid_argument("vector length must equal d");
    Point p(d);
    for (int k = 0; k < d; ++k) p[k] = j.at(k).get<double>();
    return p;
}

}  // namespace

Json to_json(const LkProfile& profile) {
    Json j;
    j["m"] = profile.m;
    j["n"] = profile.n;
    j["d_up"] = profile.d_up;
    j["L"] = profile.L;
    j["L_numerators"] = profile.L_numerators;
    if (!profile.per_column.empty()) {
        Json cols = Json::array();
        for (const auto& c : profile.per_column) cols.push_back(c.values());
        j["per_column"] = std::move(cols);
    }
    return j;
}

Json to_json(const DimensionEstimate& estimate) {
    Json j;
    j["value"] = estimate.value;
    j["flags"] = estimate.flags();
    return j;
}

Json to_json(const BoxplotStats& s) {
    Json j;
    j["q1"] = s.q1;
    j["median"] = s.q2;
    j["q3"] = s.q3;
    j["iqr"] = s.iqr;
    j["lower_whisker"] = s.lower_whisker;
    j["upper_whisker"] = s.upper_whisker;
    j["outliers"] = s.outliers;
    return j;
}

Json to_json(const SubsampleSummary& summary) {
    Json j;
    j["mode"] = summary.mode == SubsampleMode::points ? "points" : "functions";
    j["size"] = summary.size;
    j["replicates"] = summary.replicates;
    j["d_up"] = summary.d_up;
    j["seed"] = summary.seed;
    Json boxes = Json::array();
    for (std::size_t k = 0; k < summary.per_k.size(); ++k) {
        Json b = to_json(summary.per_k[k]);
        b["k"] = k;
        boxes.push_back(std::move(b));
    }
    j["boxplots"] = std::move(boxes);
    return j;
}

Json to_json(const CentralReport& report) {
    Json j;
    j["n"] = report.n;
    j["members"] = report.members;
    j["fraction"] = report.fraction;
    return j;
}

Json to_json(const CompletenessResult& result) {
    Json j = to_json(result.central);
    j["threshold"] = result.threshold;
    j["verdict"] = std::string(to_string(result.verdict));
    return j;
}

Json to_json(const InterleaveResult& r) {
    Json j;
    j["distance"] = r.distance;
    j["numerator"] = r.numerator;
    j["denominator"] = r.denominator;
    j["m"] = r.m;
    j["grids"] = {r.n_a, r.n_b};
    j["skeleton"] = r.skeleton;
    j["infimum_interval"] = {r.numerator == 0 ? 0.0 : static_cast<double>(r.numerator - 1) / r.denominator,
                             r.distance};
    Json cert;
    cert["checks"] = r.checks;
    if (r.numerator > 0) {
        cert["side"] = r.from_a ? "a" : "b";
        cert["simplex"] = simplex_vertices(r.witness_simplex);
        cert["column"] = r.witness_column;
    }
    j["certificate"] = std::move(cert);
    return j;
}

Json to_json(const RegularPairSpec& spec) {
    Json j;
    j["family"] = std::string(to_string(spec.family));
    j["d"] = spec.d;
    j["m"] = spec.m();
    j["seed"] = spec.seed;
    j["domain"] = "unit-ball";
    if (spec.family == PairFamily::linear) {
        Json dirs = Json::array();
        for (const auto& v : spec.directions) dirs.push_back(vector_json(v));
        j["directions"] = std::move(dirs);
    } else {
        Json centers = Json::array(), mats = Json::array();
        for (const auto& c : spec.centers) centers.push_back(vector_json(c));
        for (const auto& A : spec.matrices) {
            Json rows = Json::array();
            for (Eigen::Index r = 0; r < A.rows(); ++r) rows.push_back(vector_json(A.row(r).transpose()));
            mats.push_back(std::move(rows));
        }
        j["centers"] = std::move(centers);
        j["matrices"] = std::move(mats);
    }
    return j;
}

RegularPairSpec spec_from_json(const Json& j) {
    RegularPairSpec spec;
    spec.family = parse_family(j.at("family").get<std::string>());
    spec.d = j.at("d").get<int>();
    spec.seed = j.value("seed", std::uint64_t{0});
    if (spec.d < 1) throw std::invalid_argument("dimension d must be at least 1");
    if (spec.family == PairFamily::linear) {
        for (const auto& v : j.at("directions")) spec.directions.push_back(point_from_json(v, spec.d));
    } else {
        for (const auto& c : j.at("centers")) spec.centers.push_back(point_from_json(c, spec.d));
        for (const auto& rows : j.at("matrices")) {
            if (!rows.is_array() || static_cast<int>(rows.size()) != spec.d)
                throw std::invalid_argument("matrix must have d rows");
            Eigen::MatrixXd A(spec.d, spec.d);
            for (int r = 0; r < spec.d; ++r) A.row(r) = point_from_json(rows.at(r), spec.d).transpose();
            spec.matrices.push_back(std::move(A));
        }
    }
    spec.validate();
    return spec;
}

void write_replicates_csv(std::ostream& out, const SubsampleSummary& summary) {
    out << "replicate";
    for (int k = 0; k <= summary.d_up; ++k) out << ",L" << k;
    out << '\n';
    for (std::size_t r = 0; r < summary.replicate_L.size(); ++r) {
        out << r;
        for (double v : summary.replicate_L[r]) {
            out << ',';
            put_double(out, v);
        }
        out << '\n';
    }
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud) {
    for (const auto& p : cloud.points) {
        for (Eigen::Index j = 0; j < p.size(); ++j) {
            if (j) out << ',';
            put_double(out, p[j]);
        }
        out << '\n';
    }
}

}  // namespace qcsense
