#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kirchlip/json_io.hpp"
#include "kirchlip/kirchlip.hpp"

#ifndef KIRCHLIP_DATA_DIR
#define KIRCHLIP_DATA_DIR "data"
#endif

namespace {

using kirchlip::Int;
using kirchlip::InputError;
using kirchlip::jsonio::json;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFails = 1;
constexpr int kExitInputError = 2;
constexpr int kExitResourceError = 3;
constexpr int kExitInternalError = 4;

json load_json(const std::string& path) {
  std::ifstream in(path);
  kirchlip::require(in.good(), "cannot open " + path);
  return json::parse(in);
}

Int parse_int(const std::string& s) {
  try {
    return Int(s);
  } catch (const std::invalid_argument&) {
    throw InputError("bad integer '" + s + "'");
  }
}

kirchlip::lip::PointList load_csv_points(const std::string& path) {
  std::ifstream in(path);
  kirchlip::require(in.good(), "cannot open " + path);
  kirchlip::lip::PointList pts;
  std::string line;
  while (std::getline(in, line)) {
    auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    auto comma = line.find(',');
    kirchlip::require(comma != std::string::npos,
                      "csv: expected \"x,y\" in '" + line + "'");
    auto strip = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    pts.emplace_back(parse_int(strip(line.substr(0, comma))),
                     parse_int(strip(line.substr(comma + 1))));
  }
  kirchlip::require(!pts.empty(), "csv: no data rows");
  return pts;
}

std::vector<kirchlip::cech::ObstructionFunctional> load_catalog(
    const std::string& path, bool explicit_path) {
  std::ifstream probe(path);
  if (!probe.good()) {
    kirchlip::require(!explicit_path, "cannot open " + path);
    std::cerr << "note: no obstruction catalog at " << path << "\n";
    return {};
  }
  return kirchlip::jsonio::catalog_from_json(load_json(path));
}

void emit(const json& payload) { std::cout << payload.dump() << "\n"; }

int run(int argc, char** argv) {
  CLI::App app{"window-exact calculator for progression topology, LIP "
               "interpolation, splitting and cohomology"};
  app.require_subcommand(1);
  long seed = 0;
  app.add_option("--seed", seed,
                 "seed for randomized subcommands; the standard subcommands "
                 "are deterministic and ignore it");

  int exit_code = kExitOk;

  // closure
  std::vector<std::string> closure_pts;
  auto* c_closure =
      app.add_subcommand("closure", "AC closure of a finite point set");
  c_closure->add_option("points", closure_pts, "points")->required();
  c_closure->callback([&] {
    std::vector<Int> pts;
    for (const auto& s : closure_pts) pts.push_back(parse_int(s));
    emit(kirchlip::jsonio::set_to_json(kirchlip::sets::ac_closure(pts)));
  });

  // intersect
  std::string intersect_path;
  auto* c_intersect =
      app.add_subcommand("intersect", "intersection of set expressions");
  c_intersect->add_option("sets", intersect_path, "sets.json")->required();
  c_intersect->callback([&] {
    json doc = load_json(intersect_path);
    const json& list = doc.is_array() ? doc : doc.at("sets");
    kirchlip::require(list.is_array() && list.size() >= 2,
                      "intersect: need at least two sets");
    std::optional<kirchlip::sets::SetExpression> acc =
        kirchlip::jsonio::set_from_json(list[0]);
    for (size_t i = 1; acc && i < list.size(); ++i)
      acc = kirchlip::sets::intersect(*acc,
                                      kirchlip::jsonio::set_from_json(list[i]));
    if (!acc) {
      emit(json{{"kind", "empty"}});
      return;
    }
    emit(kirchlip::jsonio::set_to_json(*acc));
  });

  // classify
  std::string classify_path, straw_arg, core_arg;
  auto* c_classify = app.add_subcommand("classify", "cover shape report");
  c_classify->add_option("cover", classify_path, "cover.json")->required();
  c_classify->add_option("--straw", straw_arg, "straw piece indices i,j,...");
  c_classify->add_option("--core", core_arg, "core piece indices k,l,...");
  c_classify->callback([&] {
    auto doc = kirchlip::jsonio::cover_from_json(load_json(classify_path));
    std::optional<kirchlip::kirch::NestSpec> spec;
    if (!straw_arg.empty() || !core_arg.empty()) {
      auto parse_indices = [](const std::string& s) {
        std::vector<int> out;
        std::istringstream in(s);
        std::string part;
        while (std::getline(in, part, ','))
          if (!part.empty()) out.push_back(std::stoi(part));
        return out;
      };
      spec = kirchlip::kirch::NestSpec{parse_indices(straw_arg),
                                       parse_indices(core_arg)};
    }
    emit(kirchlip::jsonio::classification_to_json(
        kirchlip::kirch::classify_cover(doc.pieces, spec)));
  });

  // interp
  std::string interp_path;
  auto* c_interp =
      app.add_subcommand("interp", "exact interpolation of a point table");
  c_interp->add_option("points", interp_path, "points.csv")->required();
  c_interp->callback([&] {
    auto pts = load_csv_points(interp_path);
    auto coeffs = kirchlip::lip::newton_coeffs(pts);
    auto poly = kirchlip::lip::interp_poly(pts);
    bool integral = true;
    for (const auto& q : coeffs)
      if (!kirchlip::is_integer(q)) integral = false;
    json newton = json::array();
    for (const auto& q : coeffs) newton.push_back(kirchlip::jsonio::rat_to_json(q));
    emit(json{{"poly", kirchlip::jsonio::ratpoly_to_json(poly)},
              {"newton", newton},
              {"leading", kirchlip::jsonio::rat_to_json(
                              coeffs.empty() ? kirchlip::Rat(0) : coeffs.back())},
              {"integral", integral}});
  });

  // circuit
  std::string circuit_path;
  std::string circuit_window;
  auto* c_circuit =
      app.add_subcommand("circuit", "minimal non-integrality witness search");
  c_circuit->add_option("fn", circuit_path, "fn.json")->required();
  c_circuit->add_option("--window", circuit_window, "window bound N");
  c_circuit->callback([&] {
    std::optional<Int> window;
    if (!circuit_window.empty()) window = parse_int(circuit_window);
    auto f = kirchlip::jsonio::function_from_json(load_json(circuit_path), window);
    auto c = kirchlip::lip::find_circuit(f);
    if (c) {
      emit(json{{"lip", false}, {"circuit", kirchlip::jsonio::circuit_to_json(*c)}});
      exit_code = kExitPropertyFails;
    } else {
      emit(json{{"lip", true}});
    }
  });

  // psum
  std::string psum_path;
  auto* c_psum =
      app.add_subcommand("psum", "product-sum encoding over the window");
  c_psum->add_option("fn", psum_path, "fn.json")->required();
  c_psum->callback([&] {
    auto f = kirchlip::jsonio::function_from_json(load_json(psum_path));
    emit(kirchlip::jsonio::product_sum_to_json(kirchlip::lip::product_sum_encode(f)));
  });

  // split
  std::string split_u, split_w, split_f;
  int split_stages = 1;
  auto* c_split =
      app.add_subcommand("split", "split a function on U∩W into g - h");
  c_split->add_option("--u", split_u, "U.json")->required();
  c_split->add_option("--w", split_w, "W.json")->required();
  c_split->add_option("--f", split_f, "f.json")->required();
  c_split->add_option("--stages", split_stages, "stage count")->required();
  c_split->callback([&] {
    auto u = kirchlip::jsonio::set_from_json(load_json(split_u));
    auto w = kirchlip::jsonio::set_from_json(load_json(split_w));
    auto v = kirchlip::sets::intersect(u, w);
    kirchlip::require(v.has_value(), "split: U and W do not meet");
    auto f = kirchlip::jsonio::function_from_json(load_json(split_f));
    auto ps = kirchlip::lip::product_sum_encode(f);
    auto res = kirchlip::splitter::split_stream(u, w, *v, ps, split_stages);
    emit(kirchlip::jsonio::split_to_json(res));
  });

  // cech
  std::string cech_cover, cech_cochain, cech_window, cech_catalog;
  int cech_degree = 1;
  auto* c_cech = app.add_subcommand(
      "cech", "window cohomology report or coboundary decision");
  c_cech->add_option("--cover", cech_cover, "cover.json")->required();
  c_cech->add_option("--cochain", cech_cochain, "z.json");
  c_cech->add_option("--degree", cech_degree, "cochain degree k")->required();
  c_cech->add_option("--window", cech_window, "window bound N");
  c_cech->add_option("--catalog", cech_catalog, "obstruction catalog JSON");
  c_cech->callback([&] {
    auto doc = kirchlip::jsonio::cover_from_json(load_json(cech_cover));
    Int window = cech_window.empty() ? doc.window : parse_int(cech_window);
    kirchlip::require(window >= 1, "cech: need a positive --window or a "
                                   "\"window\" field in the cover");
    kirchlip::require(cech_degree >= 0, "cech: negative degree");
    auto cx = kirchlip::cech::build_cech_complex(doc.pieces, window,
                                                 cech_degree + 1);
    if (cech_cochain.empty()) {
      emit(kirchlip::jsonio::cohomology_to_json(
          kirchlip::cech::cohomology_window(cx, cech_degree)));
      return;
    }
    auto z = kirchlip::jsonio::cochain_from_json(load_json(cech_cochain));
    kirchlip::require(z.degree == cech_degree,
                      "cech: cochain degree does not match --degree");
    auto catalog = load_catalog(cech_catalog.empty()
                                    ? std::string(KIRCHLIP_DATA_DIR) +
                                          "/obstructions.json"
                                    : cech_catalog,
                                !cech_catalog.empty());
    auto report = kirchlip::cech::is_coboundary(cx, z, catalog);
    emit(kirchlip::jsonio::coboundary_to_json(report));
    if (!report.is_coboundary) exit_code = kExitPropertyFails;
  });

  // obstruct
  std::string obstruct_path;
  auto* c_obstruct =
      app.add_subcommand("obstruct", "parity obstruction of a function");
  c_obstruct->add_option("fn", obstruct_path, "fn.json")->required();
  c_obstruct->callback([&] {
    auto f = kirchlip::jsonio::function_from_json(load_json(obstruct_path));
    for (long x : {1L, 7L, 11L, 17L})
      kirchlip::require(f.has(Int(x)),
                        "obstruct: function window must contain 1, 7, 11, 17");
    Int d = kirchlip::cech::parity_obstruction(f);
    Int cls = kirchlip::mod_floor(d, Int(2));
    std::cerr << "parity functional value " << d.get_str() << ", class "
              << cls.get_str() << " mod 2\n";
    emit(kirchlip::jsonio::int_to_json(cls));
    if (cls != 0) exit_code = kExitPropertyFails;
  });

  // cex
  int cex_steps = 0;
  std::string cex_window, cex_schedule, cex_out;
  auto* c_cex = app.add_subcommand(
      "cex", "non-LIP gluing of window-LIP pieces, with certificate");
  c_cex->add_option("--steps", cex_steps, "extension steps")->required();
  c_cex->add_option("--window", cex_window, "window bound N")->required();
  c_cex->add_option("--schedule", cex_schedule,
                    "comma list of core|straw_u|straw_w, cycled");
  c_cex->add_option("--out", cex_out, "q.json output path")->required();
  c_cex->callback([&] {
    if (cex_steps > 200)
      throw kirchlip::ResourceError("cex: step cap is 200");
    Int window = parse_int(cex_window);
    std::vector<kirchlip::cexgen::Move> schedule;
    if (cex_schedule.empty()) {
      schedule = kirchlip::cexgen::default_schedule();
    } else {
      std::istringstream in(cex_schedule);
      std::string part;
      while (std::getline(in, part, ',')) {
        if (part == "core")
          schedule.push_back(kirchlip::cexgen::Move::core);
        else if (part == "straw_u")
          schedule.push_back(kirchlip::cexgen::Move::straw_u);
        else if (part == "straw_w")
          schedule.push_back(kirchlip::cexgen::Move::straw_w);
        else
          throw InputError("cex: unknown schedule move '" + part + "'");
      }
    }
    auto run = kirchlip::cexgen::generate_counterexample(cex_steps, schedule,
                                                         window);
    auto cert = kirchlip::cexgen::certify_counterexample(run.q);
    std::ofstream out(cex_out);
    kirchlip::require(out.good(), "cannot open " + cex_out);
    out << kirchlip::jsonio::function_to_json(run.q).dump() << "\n";

    json trace = json::array();
    for (const auto& st : run.trace)
      trace.push_back(kirchlip::jsonio::pair_state_to_json(st));
    emit(json{{"steps", cex_steps},
              {"window", kirchlip::jsonio::int_to_json(window)},
              {"final", kirchlip::jsonio::pair_state_to_json(run.trace.back())},
              {"max_coeff_bits",
               static_cast<std::int64_t>(
                   kirchlip::cexgen::max_coeff_bits(run.trace.back()))},
              {"trace", trace},
              {"certificate", kirchlip::jsonio::cex_certificate_to_json(cert)}});
    if (cert.circuit) exit_code = kExitPropertyFails;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const kirchlip::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const kirchlip::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResourceError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}
