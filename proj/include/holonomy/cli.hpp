#pragma once

// Command-line surface: JSON in, JSON/SVG out, meaningful exit codes.
// Exit codes: 0 success; 2 mathematically valid rejection; 3 invalid input;
// 4 internal numeric failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "holonomy/construct.hpp"
#include "holonomy/render.hpp"

namespace holonomy::cli {

using json = nlohmann::ordered_json;

inline int log_level() {
  const char* v = std::getenv("HOLONOMY_LOG");
  if (!v) return 0;
  std::string s = v;
  if (s == "debug") return 2;
  if (s == "info") return 1;
  return 0;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[holonomy] " << msg << "\n";
}

struct Input {
  std::optional<std::pair<Isometry, Isometry>> matrices;
  std::optional<CharacterTriple> triple;
  double offset = 0.0;
  int depth = 0;
  Model model = Model::HalfPlane;
  std::uint64_t seed = 0;
  Style style;
};

namespace detail {

inline Isometry parse_matrix(const json& j, const char* name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() ||
      j[0].size() != 2 || j[1].size() != 2)
    throw Error(std::string("field '") + name + "' must be a 2x2 array");
  double a = j[0][0].get<double>(), b = j[0][1].get<double>();
  double c = j[1][0].get<double>(), d = j[1][1].get<double>();
  double det = a * d - b * c;
  if (!std::isfinite(det) || !(det > 0) || std::fabs(det - 1.0) > 1e-6) {
    // allow any positive determinant that normalizes cleanly, reject the rest
    if (!std::isfinite(det) || det <= 0)
      throw Error(std::string("matrix '") + name + "' must have positive determinant");
  }
  return Isometry{a, b, c, d};
}

inline Input parse_input(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(std::string("input is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("input must be a JSON object");
  Input in;
  if (j.contains("g") || j.contains("h")) {
    if (!j.contains("g") || !j.contains("h"))
      throw Error("matrix input needs both 'g' and 'h'");
    in.matrices = {parse_matrix(j["g"], "g"), parse_matrix(j["h"], "h")};
  }
  if (j.contains("x") || j.contains("y") || j.contains("z")) {
    if (!j.contains("x") || !j.contains("y") || !j.contains("z"))
      throw Error("triple input needs all of 'x', 'y', 'z'");
    in.triple = CharacterTriple{j["x"].get<double>(), j["y"].get<double>(),
                                j["z"].get<double>()};
  }
  if (!in.matrices && !in.triple)
    throw Error("input must contain matrices {g,h} or a triple {x,y,z}");
  if (j.contains("offset")) in.offset = j["offset"].get<double>();
  if (j.contains("depth")) in.depth = j["depth"].get<int>();
  if (j.contains("seed")) in.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("model")) {
    std::string m = j["model"].get<std::string>();
    if (m == "disc") in.model = Model::Disc;
    else if (m == "halfplane") in.model = Model::HalfPlane;
    else throw Error("model must be 'halfplane' or 'disc'");
  }
  if (j.contains("style") && j["style"].is_object()) {
    const json& s = j["style"];
    auto set = [&](const char* key, std::string& field) {
      if (s.contains(key)) field = s[key].get<std::string>();
    };
    set("background", in.style.background);
    set("edge", in.style.edge);
    set("boundary_edge", in.style.boundary_edge);
    set("axis", in.style.axis);
    set("tile", in.style.tile);
  }
  return in;
}

inline json word_json(const MoveWord& w) {
  json out = json::array();
  for (const auto& s : w.steps) {
    if (auto* m = std::get_if<BasisMove>(&s)) {
      switch (*m) {
        case BasisMove::InvertH: out.push_back("InvertH"); break;
        case BasisMove::SwapGH: out.push_back("SwapGH"); break;
        case BasisMove::MultRight: out.push_back("MultRight"); break;
      }
    } else {
      auto sc = std::get<SignChange>(s);
      static const char* names[3] = {"SignXY", "SignXZ", "SignYZ"};
      out.push_back(names[sc.i + sc.j - 1]);
    }
  }
  return out;
}

inline json matrix_json(const Isometry& m) {
  return json::array({json::array({m.a, m.b}), json::array({m.c, m.d})});
}

inline const char* regime_name(PairClass::Regime r) {
  switch (r) {
    case PairClass::Regime::BelowMinus2: return "BelowMinus2";
    case PairClass::Regime::AtMinus2: return "AtMinus2";
    case PairClass::Regime::Between: return "Between";
    case PairClass::Regime::AtPlus2: return "AtPlus2";
    case PairClass::Regime::Above2: return "Above2";
  }
  return "?";
}

struct Io {
  std::string in_file, out_file;

  std::string read_input() const {
    if (!in_file.empty()) {
      std::ifstream f(in_file);
      if (!f) throw Error("cannot open input file: " + in_file);
      std::ostringstream ss;
      ss << f.rdbuf();
      return ss.str();
    }
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }

  void write_output(const std::string& s) const {
    if (!out_file.empty()) {
      std::ofstream f(out_file);
      if (!f) throw Error("cannot open output file: " + out_file);
      f << s;
      return;
    }
    std::cout << s;
  }
};

inline std::pair<Isometry, Isometry> need_matrices(const Input& in, bool do_realize) {
  if (in.matrices) return *in.matrices;
  if (do_realize && in.triple) return realize(*in.triple);
  throw Error("this command needs matrices {g,h}; pass --realize to use a triple");
}

inline int cmd_classify(const Input& in, const Io& io, bool do_realize) {
  json out;
  if (in.matrices || (do_realize && in.triple)) {
    auto [g, h] = need_matrices(in, do_realize);
    PairClass pc = classify_pair(g, h);
    out["kappa"] = commutator(g, h).trace();
    switch (pc.kind) {
      case PairClass::Kind::Abelian: out["case"] = "Abelian"; break;
      case PairClass::Kind::VirtuallyAbelianNonAbelian: out["case"] = "VirtuallyAbelian"; break;
      case PairClass::Kind::ReducibleNonAbelian: out["case"] = "ReducibleNonAbelian"; break;
      case PairClass::Kind::Generic: out["case"] = regime_name(pc.regime); break;
    }
    out["commutator_region"] = classify_commutator(g, h).str();
    CharacterTriple t = character_of(g, h);
    out["character"] = json::array({t.x, t.y, t.z});
    out["in_V"] = in_V(t);
    out["reducible"] = is_reducible(t);
    out["abelian"] = pc.kind == PairClass::Kind::Abelian;
  } else {
    const CharacterTriple& t = *in.triple;
    double k = kappa(t);
    out["kappa"] = k;
    if (in_V(t)) out["case"] = "VirtuallyAbelian";
    else if (std::fabs(k - 2.0) <= tol::trace) out["case"] = "AtPlus2";
    else if (k > 2.0) out["case"] = "Above2";
    else if (k < -2.0 - tol::trace) out["case"] = "BelowMinus2";
    else if (k <= -2.0 + tol::trace) out["case"] = "AtMinus2";
    else out["case"] = "Between";
    // the region is trace-determined only above 2; sign probes need matrices
    if (k > 2.0 + tol::trace) out["commutator_region"] = "Hyp(0)";
    else out["commutator_region"] = nullptr;
    out["character"] = json::array({t.x, t.y, t.z});
    out["in_V"] = in_V(t);
    out["reducible"] = is_reducible(t);
    out["abelian"] = nullptr;
    out["realizable"] = in_character_variety(t);
  }
  io.write_output(out.dump(2) + "\n");
  return 0;
}

inline int cmd_normalize(const Input& in, const Io& io) {
  CharacterTriple t{0, 0, 0};
  if (in.triple) t = *in.triple;
  else if (in.matrices) t = character_of(in.matrices->first, in.matrices->second);
  try {
    NormalizeResult nr = markoff_normalize(t);
    json out;
    out["input"] = json::array({t.x, t.y, t.z});
    out["output"] = json::array({nr.triple.x, nr.triple.y, nr.triple.z});
    out["kappa"] = kappa(nr.triple);
    out["iterations"] = nr.iterations;
    out["word"] = word_json(nr.word);
    io.write_output(out.dump(2) + "\n");
    return 0;
  } catch (const InV&) {
    io.write_output(json{{"error", "in V"}}.dump(2) + "\n");
    return 2;
  } catch (const KappaTooSmall&) {
    io.write_output(json{{"error", "kappa <= 2"}}.dump(2) + "\n");
    return 2;
  }
}

inline json result_json(const ConstructionResult& r) {
  json out;
  out["case"] = case_tag_name(r.case_tag);
  out["theta"] = r.theta;
  out["corner_order"] = r.corner_order;
  out["orientation"] = r.orientation == Orientation::Left ? "Left" : "Right";
  out["twist"] = r.twist;
  out["commutator_region"] = r.commutator_region.str();
  out["basepoint"] = json::array({r.basepoint.x, r.basepoint.h});
  json verts = json::array();
  for (const auto& v : r.pentagon.v) verts.push_back(json::array({v.x, v.h}));
  out["vertices"] = verts;
  out["g_eff"] = matrix_json(r.g_eff);
  out["h_eff"] = matrix_json(r.h_eff);
  out["word"] = word_json(r.word);
  out["verified"] = true;
  return out;
}

inline int cmd_construct(const Input& in, const Io& io, bool do_realize) {
  auto [g, h] = need_matrices(in, do_realize);
  ConstructOptions opts{in.offset, in.seed};
  ConstructOutcome outcome = construct(g, h, opts);
  if (auto* nh = std::get_if<NotHolonomy>(&outcome)) {
    json out;
    out["rejected"] = true;
    out["reason"] =
        nh->reason == NotHolonomy::Reason::Abelian ? "Abelian" : "VirtuallyAbelian";
    io.write_output(out.dump(2) + "\n");
    return 2;
  }
  io.write_output(result_json(std::get<ConstructionResult>(outcome)).dump(2) + "\n");
  return 0;
}

inline int cmd_render(const Input& in, const Io& io, bool do_realize) {
  auto [g, h] = need_matrices(in, do_realize);
  if (in.depth > max_render_depth)
    throw DepthTooLarge("depth " + std::to_string(in.depth) + " exceeds " +
                        std::to_string(max_render_depth));
  if (in.depth < 0) throw DepthTooLarge("depth must be nonnegative");
  ConstructOptions opts{in.offset, in.seed};
  ConstructOutcome outcome = construct(g, h, opts);
  if (std::holds_alternative<NotHolonomy>(outcome)) {
    std::cerr << "not a holonomy representation; nothing to render\n";
    return 2;
  }
  const auto& r = std::get<ConstructionResult>(outcome);
  Scene scene;
  scene.model = in.model;
  scene.depth = in.depth;
  scene.style = in.style;
  if (in.depth == 0) {
    io.write_output(render_pentagon(r, scene));
    std::cerr << "tiles: 1\n";
  } else {
    DevelopingStats stats;
    std::string svg = render_developing(r, scene, &stats);
    io.write_output(svg);
    std::cerr << "tiles: " << stats.tiles_drawn << "\n";
  }
  return 0;
}

inline int cmd_selftest(const Io& io) {
  std::ostringstream out;
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  auto nr = markoff_normalize(CharacterTriple{0, 1, 3});
  check("normalize (0,1,3) -> (3,3,8)",
        std::fabs(nr.triple.x - 3) + std::fabs(nr.triple.y - 3) + std::fabs(nr.triple.z - 8) <
            1e-9);
  auto nr2 = markoff_normalize(CharacterTriple{-3, -3, -3});
  check("normalize (-3,-3,-3) -> (3,3,12)", std::fabs(nr2.triple.z - 12) < 1e-9);
  auto nr3 = markoff_normalize(CharacterTriple{2, 2, 3});
  check("normalize (2,2,3) -> (3,4,10)",
        std::fabs(nr3.triple.x - 3) + std::fabs(nr3.triple.y - 4) + std::fabs(nr3.triple.z - 10) <
            1e-9);

  Isometry g{1, 1, 1, 2}, h{1, -1, -1, 2};
  auto out1 = construct(g, h);
  auto* r1 = std::get_if<ConstructionResult>(&out1);
  check("(3,3,3) pair constructs as ParNeg",
        r1 && r1->case_tag == CaseTag::ParNeg && r1->theta > 0 && r1->theta < 3 * pi);

  auto [cg, chh] = realize(CharacterTriple{3, 3, 5});
  auto out2 = construct(cg, chh);
  auto* r2 = std::get_if<ConstructionResult>(&out2);
  check("kappa<-2 pair gives theta = pi",
        r2 && std::fabs(r2->theta - pi) < 1e-9);

  Isometry gp{1, 1, 0, 1}, hp{1, 0, 1, 1};
  auto out3 = construct(gp, hp);
  auto* r3 = std::get_if<ConstructionResult>(&out3);
  check("(2,2,3) pair constructs above 2", r3 && r3->theta > 2 * pi && r3->theta < 3 * pi);

  if (r2) {
    Scene scene;
    std::string svg1 = render_pentagon(*r2, scene);
    std::string svg2 = render_pentagon(*r2, scene);
    check("render determinism", svg1 == svg2 && svg1.find("<svg") != std::string::npos);
  }

  io.write_output(out.str());
  return failures == 0 ? 0 : 4;
}

}  // namespace detail

// Returns the process exit code; never throws.
inline int run(int argc, const char* const* argv) {
  CLI::App app{"hyperbolic cone-manifold structures on the punctured torus"};
  app.require_subcommand(1);

  detail::Io io;
  double offset = 0.0;
  int depth = -1;
  std::string model;
  std::uint64_t seed = 0;
  bool do_realize = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--in", io.in_file, "input JSON file (default: stdin)");
    cmd->add_option("--out", io.out_file, "output file (default: stdout)");
    cmd->add_option("--offset", offset, "basepoint displacement (HypNeg) or first sample distance (ParNeg)");
    cmd->add_option("--depth", depth, "maximum reduced word length for render");
    cmd->add_option("--model", model, "halfplane or disc");
    cmd->add_option("--seed", seed, "seed for randomized fallbacks");
    cmd->add_flag("--realize", do_realize, "realize a triple input as a matrix pair");
  };

  auto* c_classify = app.add_subcommand("classify", "classify a pair or character");
  auto* c_normalize = app.add_subcommand("normalize", "greedy trace normalization");
  auto* c_construct = app.add_subcommand("construct", "build a pentagonal fundamental domain");
  auto* c_render = app.add_subcommand("render", "emit an SVG figure");
  auto* c_selftest = app.add_subcommand("selftest", "run the built-in fixture suite");
  for (auto* c : {c_classify, c_normalize, c_construct, c_render, c_selftest}) add_common(c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (c_selftest->parsed()) return detail::cmd_selftest(io);
    Input in = detail::parse_input(io.read_input());
    if (offset != 0.0) in.offset = offset;
    if (depth >= 0) in.depth = depth;
    if (seed != 0) in.seed = seed;
    if (!model.empty()) {
      if (model == "disc") in.model = Model::Disc;
      else if (model == "halfplane") in.model = Model::HalfPlane;
      else throw Error("model must be 'halfplane' or 'disc'");
    }
    log_info("input parsed");
    if (c_classify->parsed()) return detail::cmd_classify(in, io, do_realize);
    if (c_normalize->parsed()) return detail::cmd_normalize(in, io);
    if (c_construct->parsed()) return detail::cmd_construct(in, io, do_realize);
    if (c_render->parsed()) return detail::cmd_render(in, io, do_realize);
    return 3;
  } catch (const DepthTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InV& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const KappaTooSmall& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotRealizable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericOverflow& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 4;
  } catch (const IterationCap& e) {
    std::cerr << "internal failure: " << e.what() << "\n";
    return 4;
  } catch (const ConstructionFailed& e) {
    std::cerr << "internal failure: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal failure: " << e.what() << "\n";
    return 4;
  } catch (...) {
    std::cerr << "internal failure\n";
    return 4;
  }
}

}  // namespace holonomy::cli
