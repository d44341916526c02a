#include "nlmc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nlmc {

namespace {

Vec vec_from_json(const Json& a) {
  if (!a.is_array() || a.size() < 2 || a.size() > 3)
    throw std::invalid_argument("expected a point as [x, y] or [x, y, z]");
  Vec v{a[0].get<double>(), a[1].get<double>(), 0};
  if (a.size() == 3) v.z = a[2].get<double>();
  return v;
}

// JSON has no infinity; keep reports parseable.
Json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "infinite" : "-infinite";
}

}  // namespace

Kernel kernel_from_json(const Json& spec) {
  if (!spec.is_object()) throw std::invalid_argument("kernel spec must be a JSON object");
  std::string type = spec.at("type").get<std::string>();
  int dim = spec.value("dim", 2);
  double beta = spec.value("beta", 1.0);
  Json p = spec.value("params", Json::object());

  if (type == "fractional")
    return Kernel::fractional(dim, p.at("alpha").get<double>(), beta);
  if (type == "truncated_constant")
    return Kernel::truncated_constant(p.value("c", 1.0), p.at("r0").get<double>(), beta, dim);
  if (type == "step_geometric")
    return Kernel::step_geometric(p.at("a").get<double>(), p.at("q").get<double>(),
                                  p.at("b").get<double>(), p.at("g").get<double>(), beta, dim);
  if (type == "exponential")
    return Kernel::exponential(p.value("lambda", 1.0), beta, dim);
  if (type == "table")
    return Kernel::table(p.at("r").get<std::vector<double>>(),
                         p.at("j").get<std::vector<double>>(), beta, dim);
  throw std::invalid_argument("unknown kernel type: " + type);
}

Shape shape_from_json(const Json& spec) {
  if (!spec.is_object()) throw std::invalid_argument("shape spec must be a JSON object");
  std::string type = spec.at("type").get<std::string>();
  Json p = spec.value("params", Json::object());

  if (type == "polygon") {
    std::vector<Vec> verts;
    for (const Json& v : p.at("vertices")) verts.push_back(vec_from_json(v));
    return Shape::polygon(std::move(verts));
  }
  if (type == "ball") {
    Json c = p.value("center", Json::array({0.0, 0.0}));
    int dim = p.value("dim", c.size() == 3 ? 3 : 2);
    return Shape::ball(vec_from_json(c), p.at("radius").get<double>(), dim);
  }
  if (type == "ellipse")
    return Shape::ellipse(vec_from_json(p.value("center", Json::array({0.0, 0.0}))),
                          p.at("a").get<double>(), p.at("b").get<double>(),
                          p.value("angle", 0.0), p.value("samples", kDefaultCurveSamples));
  if (type == "fourier_curve")
    return Shape::fourier_curve(vec_from_json(p.value("center", Json::array({0.0, 0.0}))),
                                p.at("c0").get<double>(),
                                p.value("a", std::vector<double>{}),
                                p.value("b", std::vector<double>{}),
                                p.value("samples", kDefaultCurveSamples));
  if (type == "limacon")
    return Shape::limacon(vec_from_json(p.value("center", Json::array({0.0, 0.0}))),
                          p.at("base").get<double>(), p.at("dent").get<double>(),
                          p.value("samples", kDefaultCurveSamples));
  if (type == "ellipsoid") {
    Json ax = p.at("semi_axes");
    if (!ax.is_array() || ax.size() != 3)
      throw std::invalid_argument("ellipsoid needs semi_axes = [ax, ay, az]");
    return Shape::ellipsoid(vec_from_json(p.value("center", Json::array({0.0, 0.0, 0.0}))),
                            ax[0].get<double>(), ax[1].get<double>(), ax[2].get<double>());
  }
  if (type == "perturbed_sphere")
    return Shape::perturbed_sphere(
        vec_from_json(p.value("center", Json::array({0.0, 0.0, 0.0}))),
        p.at("r0").get<double>(), p.at("eps").get<double>(), p.at("l").get<int>(),
        p.at("m").get<int>(), p.value("n_theta", 64), p.value("n_phi", 128));
  throw std::invalid_argument("unknown shape type: " + type);
}

Json load_json_arg(const std::string& arg) {
  std::string text = arg;
  size_t first = arg.find_first_not_of(" \t\r\n");
  bool inline_json = first != std::string::npos && (arg[first] == '{' || arg[first] == '[');
  if (!inline_json) {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open JSON file: " + arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("JSON parse error: ") + e.what());
  }
}

Json curvature_result_json(const CurvatureResult& r) {
  return Json{{"value", r.value},
              {"error_estimate", r.error_estimate},
              {"converged", r.converged},
              {"levels", r.levels},
              {"eps_min", r.epsilons.empty() ? 0.0 : r.epsilons.back()},
              {"epsilons", r.epsilons},
              {"raw_values", r.raw_values}};
}

Json constancy_json(const ConstancyReport& r) {
  return Json{{"mean", r.mean},
              {"min", r.min},
              {"max", r.max},
              {"spread", r.spread},
              {"max_error_estimate", r.max_error_estimate},
              {"tol", r.tol},
              {"constant_within_tol", r.constant_within_tol},
              {"verdict", r.constant_within_tol ? "constant within tolerance"
                                                : "not constant within tolerance"}};
}

Json profile_json(const CurvatureProfile& prof) {
  Json pts = Json::array();
  for (const ProfileEntry& e : prof.entries) {
    Json row = curvature_result_json(e.curvature);
    row["point"] = Json::array({e.point.pos.x, e.point.pos.y, e.point.pos.z});
    row["param"] = e.point.param;
    row.erase("epsilons");
    row.erase("raw_values");
    pts.push_back(std::move(row));
  }
  return Json{{"points", std::move(pts)}, {"summary", constancy_json(prof.report)}};
}

Json admissibility_json(const AdmissibilityReport& r) {
  return Json{{"admissible", r.admissible},
              {"near_origin_integral", finite_or_string(r.near_origin)},
              {"tail_integral", finite_or_string(r.tail)},
              {"note", r.note}};
}

Json critical_plane_json(const CriticalPlaneReport& r) {
  Json out{{"direction", Json::array({r.direction.x, r.direction.y, r.direction.z})},
           {"s_max", r.s_max},
           {"s_min", r.s_min},
           {"lambda", r.lambda},
           {"classification", critical_kind_name(r.kind)},
           {"sym_diff", r.sym_diff},
           {"sym_diff_se", r.sym_diff_se},
           {"symmetric", r.symmetric}};
  if (r.sym_diff_exact >= 0) out["sym_diff_exact"] = r.sym_diff_exact;
  if (r.has_touch_point)
    out["touch_point"] = Json::array({r.touch_point.x, r.touch_point.y, r.touch_point.z});
  if (r.has_flat_point)
    out["flat_point"] = Json::array({r.flat_point.x, r.flat_point.y, r.flat_point.z});
  return out;
}

Json alexandrov_json(const AlexandrovProbe& p) {
  Json planes = Json::array();
  for (const CriticalPlaneReport& r : p.planes) planes.push_back(critical_plane_json(r));
  return Json{{"kernel_admissibility", admissibility_json(p.kernel_admissibility)},
              {"kernel_nondegenerate", p.kernel_nondegenerate},
              {"curvature_summary", constancy_json(p.profile.report)},
              {"curvature_constant", p.curvature_constant},
              {"planes", std::move(planes)},
              {"symmetric_all_directions", p.symmetric_all_directions},
              {"verdict", p.verdict}};
}

std::string g17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string profile_csv(const CurvatureProfile& prof, int dim,
                        const std::vector<std::string>& metadata) {
  std::string out;
  for (const std::string& m : metadata) out += "# " + m + "\n";
  out += dim == 3 ? "idx,param,x,y,z,H,err,eps_min,converged\n"
                  : "idx,param,x,y,H,err,eps_min,converged\n";
  for (size_t i = 0; i < prof.entries.size(); ++i) {
    const ProfileEntry& e = prof.entries[i];
    const CurvatureResult& c = e.curvature;
    out += std::to_string(i);
    out += ',' + g17(e.point.param);
    out += ',' + g17(e.point.pos.x) + ',' + g17(e.point.pos.y);
    if (dim == 3) out += ',' + g17(e.point.pos.z);
    out += ',' + g17(c.value) + ',' + g17(c.error_estimate);
    out += ',' + g17(c.epsilons.empty() ? 0.0 : c.epsilons.back());
    out += c.converged ? ",1\n" : ",0\n";
  }
  out += "# summary: " + constancy_json(prof.report).dump() + "\n";
  return out;
}

std::string planes_csv(const std::vector<CriticalPlaneReport>& planes, int dim,
                       const std::vector<double>& deficits,
                       const std::vector<std::string>& metadata) {
  std::string out;
  for (const std::string& m : metadata) out += "# " + m + "\n";
  out += dim == 3 ? "idx,dir_x,dir_y,dir_z,lambda,classification,sym_diff,sym_diff_se,"
                    "sym_diff_exact,deficit\n"
                  : "idx,dir_x,dir_y,lambda,classification,sym_diff,sym_diff_se,"
                    "sym_diff_exact,deficit\n";
  for (size_t i = 0; i < planes.size(); ++i) {
    const CriticalPlaneReport& r = planes[i];
    out += std::to_string(i);
    out += ',' + g17(r.direction.x) + ',' + g17(r.direction.y);
    if (dim == 3) out += ',' + g17(r.direction.z);
    out += ',' + g17(r.lambda);
    out += ',';
    out += critical_kind_name(r.kind);
    out += ',' + g17(r.sym_diff) + ',' + g17(r.sym_diff_se);
    out += ',' + (r.sym_diff_exact >= 0 ? g17(r.sym_diff_exact) : std::string("nan"));
    double d = i < deficits.size() ? deficits[i] : std::numeric_limits<double>::quiet_NaN();
    out += ',' + (std::isnan(d) ? std::string("nan") : g17(d));
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace nlmc
