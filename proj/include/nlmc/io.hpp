#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "nlmc/curvature.hpp"
#include "nlmc/kernels.hpp"
#include "nlmc/movingplanes.hpp"
#include "nlmc/shapes.hpp"

namespace nlmc {

using Json = nlohmann::json;

// Construct from {"type": ..., "dim": d, "beta": b, "params": {...}}.
// Throws std::invalid_argument on malformed or unknown specs.
Kernel kernel_from_json(const Json& spec);

// Construct from {"type": ..., "params": {...}}.
Shape shape_from_json(const Json& spec);

// Inline JSON text (starts with '{' or '[') or a path to a JSON file.
Json load_json_arg(const std::string& arg);

// --- report serialization ---------------------------------------------------

Json curvature_result_json(const CurvatureResult& r);
Json constancy_json(const ConstancyReport& r);
Json profile_json(const CurvatureProfile& prof);
Json admissibility_json(const AdmissibilityReport& r);
Json critical_plane_json(const CriticalPlaneReport& r);
Json alexandrov_json(const AlexandrovProbe& p);

// --- CSV ---------------------------------------------------------------------

// %.17g rendering, locale independent; doubles round-trip exactly.
std::string g17(double v);

// '#'-prefixed metadata lines, a header row, one row per boundary point, and
// a '#'-prefixed JSON summary footer.
std::string profile_csv(const CurvatureProfile& prof, int dim,
                        const std::vector<std::string>& metadata);

// One row per sweep direction.  deficits, when nonempty, must be parallel to
// planes; a quiet NaN marks "not computed".
std::string planes_csv(const std::vector<CriticalPlaneReport>& planes, int dim,
                       const std::vector<double>& deficits,
                       const std::vector<std::string>& metadata);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace nlmc
