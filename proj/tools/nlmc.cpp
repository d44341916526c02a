#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "nlmc/io.hpp"
#include "nlmc/rng.hpp"

using namespace nlmc;

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::fwrite(text.data(), 1, text.size(), stdout);
  else
    write_text_file(out_path, text);
}

std::vector<Vec> sweep_directions(int dim, int n) {
  std::vector<Vec> dirs;
  dirs.reserve(n);
  if (dim == 2) {
    for (int k = 0; k < n; ++k) {
      double t = 2 * kPi * k / n;
      dirs.push_back({std::cos(t), std::sin(t), 0});
    }
  } else {
    double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
      double z = 1.0 - (2.0 * k + 1.0) / n;
      double r = std::sqrt(std::max(0.0, 1 - z * z));
      dirs.push_back({r * std::cos(golden * k), r * std::sin(golden * k), z});
    }
  }
  return dirs;
}

// A deterministic interior point on the kept side of the sweep (small x . e).
Vec interior_anchor(const Shape& shape, const Vec& e, std::uint64_t seed) {
  Vec c = shape.bounding_center();
  double br = shape.bounding_radius();
  Rng rng(substream_seed(seed, 0x1a9c));
  Vec best = c;
  double best_u = kInf;
  int found = 0;
  for (int t = 0; t < 200000 && found < 512; ++t) {
    Vec x{c.x + br * rng.uniform(-1, 1), c.y + br * rng.uniform(-1, 1),
          shape.dim() == 3 ? c.z + br * rng.uniform(-1, 1) : 0};
    if (shape.classify(x) != Region::inside) continue;
    ++found;
    double u = dot(x, e);
    if (u < best_u) {
      best_u = u;
      best = x;
    }
  }
  if (found == 0) throw std::runtime_error("no interior point found for the deficit anchor");
  return best;
}

int cmd_kernel_check(const std::string& kernel_arg, const std::string& out_path,
                     const std::string& /*format*/) {
  Kernel k = kernel_from_json(load_json_arg(kernel_arg));
  Json rep{{"kernel", k.describe()},
           {"dim", k.dim()},
           {"beta", k.beta()},
           {"admissibility", admissibility_json(levy_admissibility(k))},
           {"nondegenerate_at_zero", nondegenerate_at_zero(k)}};
  emit(rep.dump(2) + "\n", out_path);
  return 0;
}

int cmd_profile(const std::string& shape_arg, const std::string& kernel_arg, int n,
                double tol, std::uint64_t seed, const std::string& out_path,
                const std::string& format) {
  Shape shape = shape_from_json(load_json_arg(shape_arg));
  Kernel kernel = kernel_from_json(load_json_arg(kernel_arg));
  EvalOptions opts;
  opts.tol = tol;
  CurvatureProfile prof = curvature_profile(shape, kernel, n, opts);

  if (format == "json") {
    Json out = profile_json(prof);
    out["shape"] = shape.describe();
    out["kernel"] = kernel.describe();
    emit(out.dump(2) + "\n", out_path);
  } else {
    std::vector<std::string> meta{"shape: " + shape.describe(),
                                  "kernel: " + kernel.describe(),
                                  "n: " + std::to_string(n), "tol: " + g17(tol),
                                  "seed: " + std::to_string(seed)};
    emit(profile_csv(prof, shape.dim(), meta), out_path);
  }
  for (const ProfileEntry& e : prof.entries)
    if (!e.curvature.converged) {
      std::cerr << "warning: extrapolation did not meet tolerance at some points\n";
      return 1;
    }
  return 0;
}

int cmd_tangent_deriv(const std::string& shape_arg, const std::string& kernel_arg, int n,
                      double tol, const std::string& out_path, const std::string& format) {
  Shape shape = shape_from_json(load_json_arg(shape_arg));
  Kernel kernel = kernel_from_json(load_json_arg(kernel_arg));
  EvalOptions opts;
  opts.tol = tol;
  std::vector<BoundaryPoint> pts = shape.boundary_sample(n);
  std::vector<CurvatureResult> res(pts.size());
  bool all_ok = true;
  for (size_t i = 0; i < pts.size(); ++i) {
    res[i] = tangential_derivative(shape, kernel, pts[i].pos, pts[i].tangent, opts);
    all_ok = all_ok && res[i].converged;
  }

  if (format == "json") {
    Json rows = Json::array();
    for (size_t i = 0; i < pts.size(); ++i) {
      Json row = curvature_result_json(res[i]);
      row["point"] = Json::array({pts[i].pos.x, pts[i].pos.y, pts[i].pos.z});
      row["tangent"] = Json::array({pts[i].tangent.x, pts[i].tangent.y, pts[i].tangent.z});
      row["param"] = pts[i].param;
      row.erase("epsilons");
      row.erase("raw_values");
      rows.push_back(std::move(row));
    }
    Json out{{"shape", shape.describe()}, {"kernel", kernel.describe()},
             {"derivatives", std::move(rows)}};
    emit(out.dump(2) + "\n", out_path);
  } else {
    std::string csv = "# shape: " + shape.describe() + "\n# kernel: " + kernel.describe() +
                      "\n# n: " + std::to_string(n) + "\n# tol: " + g17(tol) + "\n";
    csv += shape.dim() == 3 ? "idx,param,x,y,z,dH_dv,err,converged\n"
                            : "idx,param,x,y,dH_dv,err,converged\n";
    for (size_t i = 0; i < pts.size(); ++i) {
      csv += std::to_string(i) + ',' + g17(pts[i].param);
      csv += ',' + g17(pts[i].pos.x) + ',' + g17(pts[i].pos.y);
      if (shape.dim() == 3) csv += ',' + g17(pts[i].pos.z);
      csv += ',' + g17(res[i].value) + ',' + g17(res[i].error_estimate);
      csv += res[i].converged ? ",1\n" : ",0\n";
    }
    emit(csv, out_path);
  }
  return all_ok ? 0 : 1;
}

int cmd_moving_planes(const std::string& shape_arg, const std::string& kernel_arg,
                      int dirs_n, int profile_n, double tol, std::uint64_t seed,
                      const std::string& out_path, const std::string& format) {
  Shape shape = shape_from_json(load_json_arg(shape_arg));
  std::vector<Vec> dirs = sweep_directions(shape.dim(), dirs_n);
  MovingPlanesOptions mp;
  mp.seed = seed;

  std::vector<CriticalPlaneReport> planes;
  std::vector<double> deficits;
  std::string kernel_desc;
  Json out;

  if (!kernel_arg.empty()) {
    Kernel kernel = kernel_from_json(load_json_arg(kernel_arg));
    kernel_desc = kernel.describe();
    EvalOptions eopts;
    eopts.tol = tol;
    AlexandrovProbe probe = alexandrov_probe(shape, kernel, dirs, profile_n, eopts, mp);
    planes = probe.planes;
    for (const CriticalPlaneReport& r : planes) {
      Vec p = interior_anchor(shape, r.direction, seed);
      deficits.push_back(reflection_deficit(shape, kernel, r.direction, r.lambda, p));
    }
    out = alexandrov_json(probe);
    out["kernel"] = kernel_desc;
    Json jd = Json::array();
    for (double d : deficits) jd.push_back(d);
    out["deficits"] = std::move(jd);
  } else {
    for (const Vec& e : dirs) planes.push_back(critical_plane(shape, e, mp));
    Json jp = Json::array();
    for (const CriticalPlaneReport& r : planes) jp.push_back(critical_plane_json(r));
    out = Json{{"planes", std::move(jp)}};
  }
  out["shape"] = shape.describe();

  if (format == "json") {
    emit(out.dump(2) + "\n", out_path);
  } else {
    std::vector<std::string> meta{"shape: " + shape.describe(),
                                  "dirs: " + std::to_string(dirs_n),
                                  "seed: " + std::to_string(seed)};
    if (!kernel_desc.empty()) meta.push_back("kernel: " + kernel_desc);
    emit(planes_csv(planes, shape.dim(), deficits, meta), out_path);
  }
  return 0;
}

int cmd_counterexample(double tol, const std::string& out_path, const std::string& format) {
  Kernel flat = Kernel::truncated_constant(1.0, 1.0, 1.0);
  Kernel active = Kernel::exponential(1.0, 1.0);
  Shape ball = Shape::ball({0, 0, 0}, 0.2);
  Shape ellipse = Shape::ellipse({0, 0, 0}, 0.2, 0.1);

  EvalOptions opts;
  opts.tol = tol;

  struct Row {
    std::string name;
    double closed = 0, computed = 0, rel = 0, spread = 0;
  };
  std::vector<Row> rows;
  const std::vector<std::pair<std::string, const Shape*>> cases{
      {"ball(r=0.2)", &ball}, {"ellipse(0.2, 0.1)", &ellipse}};
  for (const auto& [name, shape_ptr] : cases) {
    const Shape& shape = *shape_ptr;
    Row row;
    row.name = name + " + " + flat.describe();
    row.closed = *closed_form_small_set(shape, flat);
    CurvatureProfile prof = curvature_profile(shape, flat, 8, opts);
    row.computed = prof.report.mean;
    row.rel = std::fabs(row.computed - row.closed) / std::fabs(row.closed);
    row.spread = prof.report.spread;
    rows.push_back(row);
  }
  CurvatureProfile active_prof = curvature_profile(ellipse, active, 8, opts);
  double active_rel_spread =
      active_prof.report.spread / std::max(1e-300, std::fabs(active_prof.report.mean));

  if (format == "json") {
    Json jrows = Json::array();
    for (const Row& r : rows)
      jrows.push_back(Json{{"configuration", r.name},
                           {"closed_form", r.closed},
                           {"quadrature", r.computed},
                           {"rel_diff", r.rel},
                           {"profile_spread", r.spread}});
    Json out{{"small_sets", std::move(jrows)},
             {"contrast",
              Json{{"configuration", "ellipse(0.2, 0.1) + " + active.describe()},
                   {"profile_mean", active_prof.report.mean},
                   {"profile_spread", active_prof.report.spread},
                   {"relative_spread", active_rel_spread},
                   {"constant", active_prof.report.constant_within_tol}}},
             {"conclusion",
              "both small sets have constant nonlocal curvature under the cutoff kernel, "
              "yet only one is a ball; for the everywhere-active kernel the non-ball no "
              "longer has constant curvature"}};
    emit(out.dump(2) + "\n", out_path);
    return 0;
  }

  std::string txt;
  txt += "Sets with diameter below the kernel cutoff have closed-form nonlocal curvature:\n\n";
  char line[256];
  for (const Row& r : rows) {
    std::snprintf(line, sizeof line, "  %-46s closed %.12g   quadrature %.12g   rel diff %.2e\n",
                  r.name.c_str(), r.closed, r.computed, r.rel);
    txt += line;
    std::snprintf(line, sizeof line, "  %-46s profile spread %.2e (constant along the boundary)\n",
                  "", r.spread);
    txt += line;
  }
  txt += "\nBoth sets see the identical integral at every boundary point, so the cutoff\n";
  txt += "kernel cannot tell the ellipse from the ball: constant nonlocal curvature\n";
  txt += "does not force roundness when the kernel is flat near zero.\n\n";
  std::snprintf(line, sizeof line,
                "With %s the ellipse is resolved: relative spread %.3g (%s)\n",
                active.describe().c_str(), active_rel_spread,
                active_prof.report.constant_within_tol ? "constant" : "not constant");
  txt += line;
  emit(txt, out_path);
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"nonlocal mean curvature of bounded sets: profiles, tangential "
               "derivatives, kernel checks, moving-planes symmetry diagnostics"};
  app.require_subcommand(1);

  std::string shape_arg, kernel_arg, out_path, format = "csv";
  int n = 24, dirs_n = 8;
  double tol = 1e-6;
  std::uint64_t seed = 42;

  auto add_common = [&](CLI::App* sc, bool needs_shape, bool needs_kernel) {
    if (needs_shape)
      sc->add_option("--shape", shape_arg, "shape spec: inline JSON or a file path")
          ->required();
    auto* k = sc->add_option("--kernel", kernel_arg, "kernel spec: inline JSON or a file path");
    if (needs_kernel) k->required();
    sc->add_option("--out", out_path, "write output here instead of stdout");
    sc->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sc->add_option("--tol", tol, "extrapolation tolerance");
    sc->add_option("--seed", seed, "random seed for sampled estimates");
  };

  auto* sc_kernel = app.add_subcommand("kernel-check",
                                       "admissibility and small-scale activity of a kernel");
  add_common(sc_kernel, false, true);

  auto* sc_profile = app.add_subcommand("profile", "nonlocal curvature along the boundary");
  add_common(sc_profile, true, true);
  sc_profile->add_option("--n", n, "number of boundary points");

  auto* sc_td = app.add_subcommand("tangent-deriv",
                                   "tangential derivative of the curvature along the boundary");
  add_common(sc_td, true, true);
  sc_td->add_option("--n", n, "number of boundary points");

  auto* sc_mp = app.add_subcommand("moving-planes",
                                   "critical reflection planes and symmetry measures");
  add_common(sc_mp, true, false);
  sc_mp->add_option("--dirs", dirs_n, "number of sweep directions");
  sc_mp->add_option("--n", n, "boundary points for the curvature profile (with --kernel)");

  auto* sc_ce = app.add_subcommand("counterexample",
                                   "constant curvature without roundness under a cutoff kernel");
  sc_ce->add_option("--out", out_path, "write output here instead of stdout");
  sc_ce->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sc_ce->add_option("--tol", tol, "extrapolation tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (sc_kernel->parsed()) return cmd_kernel_check(kernel_arg, out_path, format);
  if (sc_profile->parsed())
    return cmd_profile(shape_arg, kernel_arg, n, tol, seed, out_path, format);
  if (sc_td->parsed()) return cmd_tangent_deriv(shape_arg, kernel_arg, n, tol, out_path, format);
  if (sc_mp->parsed())
    return cmd_moving_planes(shape_arg, kernel_arg, dirs_n, n, tol, seed, out_path, format);
  if (sc_ce->parsed()) return cmd_counterexample(tol, out_path, format);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
