#pragma once

#include "lcp/body.hpp"
#include "lcp/measure.hpp"

#include "json.hpp"

#include <string>

namespace lcp {

using Json = nlohmann::ordered_json;

// Bodies:   {"type":"hpolytope","A":[[...]],"b":[...]}
//           {"type":"vpolytope","vertices":[[...]]}
//           {"type":"ball","center":[...],"radius":r}
//           {"type":"intersection","parts":[body, body]}
// Unknown keys and malformed values raise ErrorCode::Config.
Json body_to_json(const ConvexBody& K);
ConvexBody body_from_json(const Json& j);

// {"type":"uniform"|"shifted_exp"|"gaussian"|"truncated_linear"|"tabulated", ...}
Json measure1d_to_json(const Measure1D& m);
Measure1D measure1d_from_json(const Json& j);

// {"type":"uniform_body","body":{...}} | {"type":"pnorm","n":3,"p":1.5,"sigma":1}
// | {"type":"body_norm","body":{...},"p":1,"sigma":1} | {"type":"gaussian","n":3}
// | {"type":"product","factors":[...]} | {"type":"affine","base":{...},"T":[[...]],"shift":[...]}
// `default_n` fills in a missing "n" for pnorm and gaussian. General
// log-densities have no JSON form.
Json measure_to_json(const Measure& mu);
Measure measure_from_json(const Json& j, int default_n = -1);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j, const std::string& what);
Json mat_to_json(const Mat& M);
Mat mat_from_json(const Json& j, const std::string& what);

// Parses text, throwing ErrorCode::Config with the parser message.
Json parse_json(const std::string& text, const std::string& what);

// Writes through a temporary file in the same directory and renames it into
// place, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace lcp
