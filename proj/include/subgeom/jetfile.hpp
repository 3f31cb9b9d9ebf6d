#pragma once

// User-supplied immersions as a list of sampled 2-jets.
//
// JSON layout:
//   {"n": 2, "N": 3, "c": 0, "radius": 1.0,
//    "points": [{"u": [..n], "f": [..N], "df": [..n*N], "d2f": [..n(n+1)/2*N]}, ...]}
// N is the length of f. df is row-major n x N (row i = partial along u_i). d2f is
// row-major with one row per pair i <= j in lexicographic order (11, 12, .., 1n, 22, ..).
// A full n*n row layout is also accepted; its symmetry is checked. Nested arrays of
// rows are accepted in place of the flat lists. "radius" is read only when c = 1.

#include <string>
#include <vector>

#include <json.hpp>

#include "subgeom/immersion.hpp"

namespace subgeom {

struct JetSample {
    Vec u;
    Jet2 jet;
};

struct JetFile {
    int n = 0;
    AmbientSpace ambient;
    std::vector<JetSample> points;
};

/// Throws SchemaError on malformed documents or asymmetric full-layout d2f, and
/// PreconditionError when spherical jets leave the sphere or its tangent space.
JetFile jet_file_from_json(const nlohmann::json& j);
JetFile read_jet_file(const std::string& path);

/// Flat upper-triangular layout; round-trips through jet_file_from_json.
nlohmann::json to_json(const JetFile& file);

/// Jets of a chart at the given points, packaged as a jet file.
JetFile sample_chart(const Chart& chart, const std::vector<Vec>& points);

}  // namespace subgeom
