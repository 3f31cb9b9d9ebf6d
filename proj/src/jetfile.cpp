#include "subgeom/jetfile.hpp"

#include <cmath>
#include <fstream>

#include "subgeom/error.hpp"

namespace subgeom {

using json = nlohmann::json;

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kSphereTol = 1e-10;

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw SchemaError(where + ": missing \"" + key + "\"");
    return obj.at(key);
}

int integer_field(const json& obj, const char* key) {
    const json& v = field(obj, key, "jet file");
    if (!v.is_number_integer()) throw SchemaError(std::string("jet file: \"") + key + "\" must be an integer");
    return v.get<int>();
}

// Flat numbers, or an array of equal-length rows flattened row by row.
std::vector<double> numbers(const json& v, const std::string& where) {
    if (!v.is_array()) throw SchemaError(where + ": expected an array");
    std::vector<double> out;
    for (const json& x : v) {
        if (x.is_number()) {
            out.push_back(x.get<double>());
        } else if (x.is_array()) {
            for (const json& y : x) {
                if (!y.is_number()) throw SchemaError(where + ": non-numeric entry");
                out.push_back(y.get<double>());
            }
        } else {
            throw SchemaError(where + ": non-numeric entry");
        }
    }
    return out;
}

std::vector<double> sized(const json& rec, const char* key, std::size_t expect, const std::string& where) {
    std::vector<double> v = numbers(field(rec, key, where), where + "." + key);
    if (v.size() != expect)
        throw SchemaError(where + "." + key + ": expected " + std::to_string(expect) + " numbers, got " +
                          std::to_string(v.size()));
    return v;
}

JetSample parse_point(const json& rec, int n, int N, const std::string& where) {
    const std::size_t nn = static_cast<std::size_t>(n), NN = static_cast<std::size_t>(N);
    JetSample s;
    const std::vector<double> u = sized(rec, "u", nn, where);
    const std::vector<double> f = sized(rec, "f", NN, where);
    const std::vector<double> df = sized(rec, "df", nn * NN, where);
    s.u = Eigen::Map<const Vec>(u.data(), n);
    s.jet.position = Eigen::Map<const Vec>(f.data(), N);
    s.jet.d1.resize(N, n);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < N; ++a) s.jet.d1(a, i) = df[static_cast<std::size_t>(i * N + a)];

    const std::vector<double> d2 = numbers(field(rec, "d2f", where), where + ".d2f");
    s.jet.d2.resize(N, pair_count(n));
    if (d2.size() == static_cast<std::size_t>(pair_count(n)) * NN) {
        for (int r = 0; r < pair_count(n); ++r)
            for (int a = 0; a < N; ++a) s.jet.d2(a, r) = d2[static_cast<std::size_t>(r * N + a)];
    } else if (d2.size() == nn * nn * NN) {
        auto at = [&](int i, int j, int a) { return d2[static_cast<std::size_t>((i * n + j) * N + a)]; };
        double scale = 0.0;
        for (double x : d2) scale = std::max(scale, std::abs(x));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int a = 0; a < N; ++a) {
                    if (std::abs(at(i, j, a) - at(j, i, a)) > kSymmetryTol * (1 + scale))
                        throw SchemaError(where + ".d2f: second derivatives are not symmetric");
                    s.jet.d2(a, pair_index(i, j, n)) = at(i, j, a);
                }
    } else {
        throw SchemaError(where + ".d2f: expected n(n+1)/2 or n*n rows of N numbers");
    }
    return s;
}

}  // namespace

JetFile jet_file_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("jet file: expected a JSON object");
    JetFile file;
    file.n = integer_field(j, "n");
    const int N = integer_field(j, "N");
    const int c = integer_field(j, "c");
    if (file.n < 1) throw SchemaError("jet file: n must be positive");
    if (c != 0 && c != 1) throw SchemaError("jet file: c must be 0 or 1");
    double radius = 1.0;
    if (c == 1 && j.contains("radius")) {
        if (!j.at("radius").is_number()) throw SchemaError("jet file: radius must be a number");
        radius = j.at("radius").get<double>();
    }
    file.ambient = c == 1 ? AmbientSpace::sphere(N - 1, radius) : AmbientSpace::euclidean(N);
    try {
        file.ambient.validate();
    } catch (const ParameterError& e) {
        throw SchemaError(std::string("jet file: ") + e.what());
    }
    if (N <= file.n) throw SchemaError("jet file: N must exceed n");

    const json& pts = field(j, "points", "jet file");
    if (!pts.is_array() || pts.empty()) throw SchemaError("jet file: points must be a nonempty array");
    for (std::size_t p = 0; p < pts.size(); ++p) {
        const std::string where = "points[" + std::to_string(p) + "]";
        JetSample s = parse_point(pts[p], file.n, N, where);
        if (c == 1) {
            const double r = s.jet.position.norm();
            const double tangential = (s.jet.d1.transpose() * s.jet.position).cwiseAbs().maxCoeff();
            if (std::abs(r - radius) > kSphereTol * (1 + radius) ||
                tangential > kSphereTol * (1 + radius) * (1 + s.jet.d1.cwiseAbs().maxCoeff()))
                throw PreconditionError(where + ": jet does not lie on the sphere of radius " + std::to_string(radius));
        }
        file.points.push_back(std::move(s));
    }
    return file;
}

JetFile read_jet_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open jet file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError("jet file " + path + ": " + e.what());
    }
    return jet_file_from_json(j);
}

json to_json(const JetFile& file) {
    const int n = file.n;
    json j;
    j["n"] = n;
    j["N"] = file.ambient.embedding_dim();
    j["c"] = file.ambient.curvature_flag;
    if (file.ambient.curvature_flag) j["radius"] = file.ambient.sphere_radius;
    json pts = json::array();
    for (const JetSample& s : file.points) {
        const Jet2& jet = s.jet;
        const int N = static_cast<int>(jet.position.size());
        std::vector<double> df, d2f;
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < N; ++a) df.push_back(jet.d1(a, i));
        for (int r = 0; r < pair_count(n); ++r)
            for (int a = 0; a < N; ++a) d2f.push_back(jet.d2(a, r));
        pts.push_back({{"u", std::vector<double>(s.u.data(), s.u.data() + s.u.size())},
                       {"f", std::vector<double>(jet.position.data(), jet.position.data() + N)},
                       {"df", df},
                       {"d2f", d2f}});
    }
    j["points"] = std::move(pts);
    return j;
}

JetFile sample_chart(const Chart& chart, const std::vector<Vec>& points) {
    JetFile file;
    file.n = chart.dim();
    file.ambient = chart.ambient();
    for (const Vec& u : points) file.points.push_back({u, chart.jet(u)});
    return file;
}

}  // namespace subgeom
