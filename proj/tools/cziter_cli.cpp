#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cziter/json_io.hpp"
#include "cziter/version.hpp"

using namespace cziter;

namespace {

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_json_text(text, path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw computation_error("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw computation_error("write failed on " + path);
}

// every report names the tool version; bounds ride inside where they apply
void emit_report(Json report, const std::string& json_out) {
  if (report.is_object()) report["version"] = version_string;
  std::string text = dump_json(report);
  if (!json_out.empty()) write_text_file(json_out, text);
  std::cout << text;
}

// ---- matrix ----

Json spectrum_report_json(const SpectrumReport& rep) {
  Json units = Json::array();
  for (const UnitPair& u : rep.unit_pairs) {
    Json entry{{"alg", u.alg},
               {"geom", u.geom},
               {"cos_approx", static_cast<double>(u.cos_approx)}};
    entry["cos"] = u.cos_exact ? surd_to_json(*u.cos_exact) : Json(nullptr);
    entry["krein"] = u.krein_known
                         ? Json(Json::array({u.krein_plus, u.krein_minus}))
                         : Json(nullptr);
    units.push_back(std::move(entry));
  }
  Json reals = Json::array();
  for (const RealPair& r : rep.real_pairs)
    reals.push_back(Json{{"alg", r.alg},
                         {"geom", r.geom},
                         {"positive", r.positive},
                         {"lambda_approx", static_cast<double>(r.lambda_approx)}});
  return Json{{"dim", rep.dim},
              {"exact", rep.exact},
              {"elliptic_height", rep.elliptic_height()},
              {"plus_one", Json{{"alg", rep.plus_one.alg}, {"geom", rep.plus_one.geom}}},
              {"minus_one", Json{{"alg", rep.minus_one.alg}, {"geom", rep.minus_one.geom}}},
              {"unit_pairs", std::move(units)},
              {"real_pairs", std::move(reals)},
              {"quadruple_count", rep.quadruples.size()}};
}

const char* to_string(NondegeneracyClass c) {
  switch (c) {
    case NondegeneracyClass::Plus: return "plus";
    case NondegeneracyClass::Minus: return "minus";
    default: return "degenerate";
  }
}

void run_matrix(const std::string& input, const std::string& op,
                const std::string& json_out) {
  std::vector<std::string> warnings;
  SymplecticMatrix m{matrix_from_json(read_json_file(input), &warnings)};
  Json report;
  if (op == "check") {
    report = Json{{"dim", m.dim()},
                  {"symplectic", true},
                  {"nondegeneracy", to_string(nondegeneracy_class(m))}};
  } else if (op == "spectrum") {
    report = spectrum_report_json(spectrum(m));
  } else {
    RhoValue r = rho(m);
    report = Json{{"angle", r.angle_double()}};
    report["point"] =
        r.point ? Json(Json::array(
                      {surd_to_json(r.point->first), surd_to_json(r.point->second)}))
                : Json(nullptr);
  }
  if (!warnings.empty()) report["warnings"] = warnings;
  emit_report(std::move(report), json_out);
}

// ---- path-index ----

void run_path_index(const std::string& input, const std::string& json_out) {
  std::vector<std::string> warnings;
  SymplecticPath path = path_from_json(read_json_file(input), &warnings);
  Json report{{"dim", path.dim()},
              {"samples", path.samples().size()},
              {"cz_index", cz_index(path)},
              {"mean_index", mean_index_of_path(path)}};
  if (!warnings.empty()) report["warnings"] = warnings;
  emit_report(std::move(report), json_out);
}

// ---- iterate ----

void run_iterate(const std::string& profile_path, int k,
                 const std::string& json_out) {
  if (k < 1) throw input_error("--k must be at least 1");
  IterationProfile profile = profile_from_json(read_json_file(profile_path));
  Json indices = Json::array();
  for (int i = 1; i <= k; ++i)
    indices.push_back(int_to_json(iterated_index(profile, Int(i))));
  emit_report(std::move(indices), json_out);
}

// ---- shared target / bounds plumbing ----

struct TargetCfg {
  bool displaceable = false;
  bool prequantization = false;
  bool brieskorn = false;
  std::string betti_file;
  std::string ranks_file;
  long long a0 = 0;
  int c = 0;
  int n = 2;
  bool allow_any_a0 = false;

  void add_flags(CLI::App* sub, bool with_kind_switches) {
    if (with_kind_switches) {
      sub->add_flag("--displaceable", displaceable,
                    "displaceable target from a Betti table");
      sub->add_flag("--prequantization", prequantization,
                    "prequantization target from base Betti numbers and --c");
      sub->add_flag("--brieskorn", brieskorn, "Brieskorn target from --a0");
      sub->add_option("--custom-ranks", ranks_file,
                      "custom target from a rank-function file");
      sub->add_option("--c", c, "twist parameter (prequantization)");
      sub->add_option("--a0", a0, "Brieskorn parameter");
      sub->add_flag("--allow-any-a0", allow_any_a0,
                    "skip the a0 = +-1 mod 8 check");
    }
    sub->add_option("--betti", betti_file, "Betti table file");
    sub->add_option("--n", n, "ambient half-dimension")->required();
  }

  BettiTable read_betti() const {
    if (betti_file.empty()) throw input_error("--betti FILE is required here");
    return betti_from_json(read_json_file(betti_file));
  }

  TargetPattern make() const {
    int chosen = int(displaceable) + int(prequantization) + int(brieskorn) +
                 int(!ranks_file.empty());
    if (chosen != 1)
      throw input_error(
          "choose exactly one of --displaceable, --prequantization, "
          "--brieskorn, --custom-ranks");
    if (displaceable) return target_displaceable(read_betti(), n);
    if (prequantization) {
      BettiTable base = read_betti();
      if (base.pair_dim != 2 * n - 2)
        throw input_error("prequantization base must have dimension 2n - 2");
      return target_prequantization(base.values, c, n);
    }
    if (brieskorn) return target_brieskorn(Int(a0), n, allow_any_a0);
    return target_custom(ranks_from_json(read_json_file(ranks_file)), n);
  }
};

struct BoundsCfg {
  int K = 200;
  int depth = 8;
  int mesh = 64;
  int r_lo = 0;
  int r_hi = 0;
  bool no_asymptotic = false;
  CLI::Option* r_lo_opt = nullptr;
  CLI::Option* r_hi_opt = nullptr;

  void add_flags(CLI::App* sub) {
    sub->add_option("--K", K, "cover-count horizon (default 200)");
    sub->add_option("--depth", depth, "interval subdivision budget (default 8)");
    sub->add_option("--grid-mesh", mesh,
                    "angle grid spacing 1/mesh (default 64)");
    r_lo_opt = sub->add_option("--r-lo", r_lo, "lowest base offset r");
    r_hi_opt = sub->add_option("--r-hi", r_hi, "highest base offset r");
    r_lo_opt->needs(r_hi_opt);
    r_hi_opt->needs(r_lo_opt);
    sub->add_flag("--no-asymptotic", no_asymptotic,
                  "switch off the closed-form density certificates");
  }

  SearchBounds make() const {
    SearchBounds b;
    b.K = K;
    b.depth = depth;
    if (mesh != 64) b.theta_grid = default_theta_grid(mesh);
    if (r_lo_opt && r_lo_opt->count() > 0) b.r_range = {r_lo, r_hi};
    b.use_asymptotic_certificates = !no_asymptotic;
    return b;
  }
};

// ---- ranks ----

void run_ranks(const TargetCfg& target, bool window_set, int lo, int hi,
               const std::string& json_out) {
  TargetPattern pattern = target.make();
  Json report = ranks_to_json(pattern.ranks);
  report["provenance"] = to_string(pattern.provenance);
  if (window_set) {
    if (lo > hi) throw input_error("--window needs lo <= hi");
    Json window = Json::object();
    for (int d = lo; d <= hi; ++d)
      window[std::to_string(d)] = int_to_json(pattern.ranks.rank(Int(d)));
    report["window"] = std::move(window);
  }
  emit_report(std::move(report), json_out);
}

// ---- chi-m ----

void run_chi_m(const std::string& ranks_file, const std::string& betti_file,
               int n, const std::string& system_file,
               const std::string& json_out) {
  int chosen = int(!ranks_file.empty()) + int(!betti_file.empty()) +
               int(!system_file.empty());
  if (chosen != 1)
    throw input_error("choose exactly one of --ranks, --betti, --system");
  Json report;
  if (!ranks_file.empty()) {
    Rat v = chi_m_from_ranks(ranks_from_json(read_json_file(ranks_file)));
    report = Json{{"chi_m", rat_to_string(v)}, {"source", "ranks"}};
  } else if (!betti_file.empty()) {
    Rat v = chi_m_displaceable(betti_from_json(read_json_file(betti_file)), n);
    report = Json{{"chi_m", rat_to_string(v)}, {"source", "displaceable"}};
  } else {
    SurdSum v = chi_m_orbits(system_from_json(read_json_file(system_file)));
    report = Json{{"chi_m", surd_to_json(v)}, {"source", "orbits"}};
  }
  emit_report(std::move(report), json_out);
}

// ---- resonance ----

void run_resonance(const std::string& system_file, const std::string& ranks_file,
                   int n_window, const std::string& json_out) {
  OrbitSystem system = system_from_json(read_json_file(system_file));
  RankFunction ranks = ranks_from_json(read_json_file(ranks_file));
  ResonanceReport rep = resonance_check(system, ranks, n_window);
  emit_report(Json{{"orbit_side", rep.orbit_side},
                   {"rank_side", rep.rank_side},
                   {"windowed", rep.windowed},
                   {"abs_diff", rep.abs_diff},
                   {"tolerance", rep.tolerance},
                   {"pass", rep.pass},
                   {"N", n_window}},
              json_out);
}

// ---- feasibility / theorems ----

void run_feasibility(const TargetCfg& target, const BoundsCfg& bounds,
                     const std::string& json_out) {
  TargetPattern pattern = target.make();
  FeasibilityVerdict v = single_orbit_feasibility(pattern, bounds.make());
  Json report = verdict_to_json(v);
  report["provenance"] = to_string(pattern.provenance);
  emit_report(std::move(report), json_out);
}

void run_theorem_a(const TargetCfg& target, const BoundsCfg& bounds,
                   const std::string& json_out) {
  TheoremAReport rep =
      theorem_a_check(target.read_betti(), target.n, bounds.make());
  emit_report(theorem_a_to_json(rep), json_out);
}

void run_theorem_b(const TargetCfg& target, const BoundsCfg& bounds,
                   const std::string& json_out) {
  BettiTable base = target.read_betti();
  if (base.pair_dim != 2 * target.n - 2)
    throw input_error("theorem b base must have dimension 2n - 2");
  TheoremBReport rep =
      theorem_b_check(base.values, target.c, target.n, bounds.make());
  emit_report(theorem_b_to_json(rep), json_out);
}

void run_theorem_c(const TargetCfg& target, const BoundsCfg& bounds,
                   const std::string& json_out) {
  TheoremCReport rep =
      theorem_c_check(Int(target.a0), target.n, bounds.make());
  emit_report(theorem_c_to_json(rep), json_out);
}

// ---- emit-fixtures ----

IterationProfile hyperbolic_profile(int r, int n) {
  return IterationProfile(Int(r), {}, n);
}

OrbitSystem ellipsoid_system() {
  // irrational ellipsoid: theta1 = 1/sqrt(2), theta2 = sqrt(2) - 1
  std::vector<Orbit> orbits;
  orbits.push_back(
      {"gamma1", IterationProfile(
                     Int(2), {Angle(QuadIrrational(Int(0), Int(1), Int(2), Int(2)))}, 2)});
  orbits.push_back(
      {"gamma2", IterationProfile(
                     Int(4), {Angle(QuadIrrational(Int(-1), Int(1), Int(2), Int(1)))}, 2)});
  return OrbitSystem(std::move(orbits), 2);
}

void run_emit_fixtures(const std::string& dir, const std::string& json_out) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);  // best effort; the write reports failures
  fs::file_status st = fs::status(dir, ec);
  if (!ec && fs::is_directory(st) &&
      (st.permissions() & (fs::perms::owner_write | fs::perms::group_write |
                           fs::perms::others_write)) == fs::perms::none)
    throw computation_error("directory is read-only: " + dir);

  std::vector<std::pair<std::string, Json>> files;
  files.emplace_back("hyp2.json", profile_to_json(hyperbolic_profile(2, 2)));
  files.emplace_back("hyp3_n3.json", profile_to_json(hyperbolic_profile(3, 3)));
  files.emplace_back(
      "ell_sqrt2.json",
      profile_to_json(IterationProfile(
          Int(2), {Angle(QuadIrrational(Int(0), Int(1), Int(2), Int(2)))}, 2)));
  files.emplace_back("ellipsoid_system.json", system_to_json(ellipsoid_system()));
  files.emplace_back("ball_betti_n2.json",
                     betti_to_json(BettiTable(4, {{4, Int(1)}})));
  files.emplace_back("ball_betti_n3.json",
                     betti_to_json(BettiTable(6, {{6, Int(1)}})));
  files.emplace_back("pattern_one_betti.json",
                     betti_to_json(BettiTable(6, {{2, Int(1)}, {6, Int(1)}})));
  files.emplace_back(
      "pattern_two_b4_4_betti.json",
      betti_to_json(BettiTable(6, {{2, Int(1)}, {4, Int(4)}, {6, Int(1)}})));
  files.emplace_back("sphere_base_betti.json",
                     betti_to_json(BettiTable(2, {{0, Int(1)}, {2, Int(1)}})));
  files.emplace_back("brieskorn_a0_7.json", Json{{"a0", 7}, {"n", 3}});
  files.emplace_back("brieskorn_a0_9.json", Json{{"a0", 9}, {"n", 3}});
  files.emplace_back("ranks_brieskorn_7_3.json",
                     ranks_to_json(sh_ranks_brieskorn(Int(7), 3)));
  files.emplace_back(
      "rotation_matrix.json",
      matrix_to_json(diamond(block_R(Rat(3, 5), Rat(4, 5)), block_D(Rat(2)))));
  files.emplace_back("rotation_path.json",
                     path_to_json(rotation_path(0.75, 12)));

  Json written = Json::array();
  for (const auto& [name, body] : files) {
    write_text_file((fs::path(dir) / name).string(), dump_json(body));
    written.push_back(name);
  }
  emit_report(Json{{"directory", dir}, {"files", std::move(written)}}, json_out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cziter: Conley-Zehnder indices, iteration data, and orbit counts"};
  app.set_version_flag("--version", version_string);
  app.require_subcommand(1);

  std::string json_out;
  app.add_option("--json-out", json_out, "also write the report to this file");

  // matrix
  auto* matrix_cmd = app.add_subcommand("matrix", "inspect a symplectic matrix");
  std::string matrix_input, matrix_op = "check";
  matrix_cmd->add_option("--input", matrix_input, "matrix JSON file")->required();
  matrix_cmd->add_option("--op", matrix_op, "check | spectrum | rho")
      ->check(CLI::IsMember({"check", "spectrum", "rho"}));

  // path-index
  auto* path_cmd = app.add_subcommand("path-index", "index of a sampled path");
  std::string path_input;
  path_cmd->add_option("--input", path_input, "path JSON file")->required();

  // iterate
  auto* iterate_cmd =
      app.add_subcommand("iterate", "indices of the first K covers");
  std::string iterate_profile;
  int iterate_k = 1;
  iterate_cmd->add_option("--profile", iterate_profile, "profile JSON file")
      ->required();
  iterate_cmd->add_option("--k", iterate_k, "cover count")->required();

  // ranks
  auto* ranks_cmd = app.add_subcommand("ranks", "graded rank function");
  TargetCfg ranks_target;
  ranks_target.add_flags(ranks_cmd, true);
  std::vector<int> ranks_window;
  ranks_cmd->add_option("--window", ranks_window, "evaluate on [lo, hi]")
      ->expected(2);

  // chi-m
  auto* chi_cmd = app.add_subcommand("chi-m", "mean Euler characteristic");
  std::string chi_ranks, chi_betti, chi_system;
  int chi_n = 2;
  chi_cmd->add_option("--ranks", chi_ranks, "rank-function file");
  chi_cmd->add_option("--betti", chi_betti, "Betti table file");
  chi_cmd->add_option("--n", chi_n, "ambient half-dimension (with --betti)");
  chi_cmd->add_option("--system", chi_system, "orbit-system file");

  // resonance
  auto* res_cmd =
      app.add_subcommand("resonance", "orbit / rank resonance comparison");
  std::string res_system, res_ranks;
  int res_window = 10000;
  res_cmd->add_option("--system", res_system, "orbit-system file")->required();
  res_cmd->add_option("--ranks", res_ranks, "rank-function file")->required();
  res_cmd->add_option("--N", res_window, "enumeration window (default 10000)");

  // feasibility
  auto* feas_cmd =
      app.add_subcommand("feasibility", "single-orbit feasibility search");
  TargetCfg feas_target;
  BoundsCfg feas_bounds;
  feas_target.add_flags(feas_cmd, true);
  feas_bounds.add_flags(feas_cmd);

  // theorem
  auto* thm_cmd = app.add_subcommand("theorem", "closed-form theorem checks");
  thm_cmd->require_subcommand(1);
  auto* thm_a = thm_cmd->add_subcommand("a", "displaceable targets");
  auto* thm_b = thm_cmd->add_subcommand("b", "prequantization targets");
  auto* thm_c = thm_cmd->add_subcommand("c", "Brieskorn targets");
  TargetCfg a_target, b_target, c_target;
  BoundsCfg a_bounds, b_bounds, c_bounds;
  a_target.add_flags(thm_a, false);
  a_bounds.add_flags(thm_a);
  b_target.add_flags(thm_b, false);
  thm_b->add_option("--c", b_target.c, "twist parameter")->required();
  b_bounds.add_flags(thm_b);
  thm_c->add_option("--a0", c_target.a0, "Brieskorn parameter")->required();
  thm_c->add_option("--n", c_target.n, "ambient half-dimension")->required();
  c_bounds.add_flags(thm_c);

  // emit-fixtures
  auto* fix_cmd =
      app.add_subcommand("emit-fixtures", "write the golden fixture files");
  std::string fix_dir = "fixtures";
  fix_cmd->add_option("--dir", fix_dir, "output directory (default fixtures)");

  // let --json-out appear after the subcommand name too
  for (CLI::App* sub : {matrix_cmd, path_cmd, iterate_cmd, ranks_cmd, chi_cmd,
                        res_cmd, feas_cmd, thm_cmd, thm_a, thm_b, thm_c,
                        fix_cmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);

    if (*matrix_cmd) run_matrix(matrix_input, matrix_op, json_out);
    if (*path_cmd) run_path_index(path_input, json_out);
    if (*iterate_cmd) run_iterate(iterate_profile, iterate_k, json_out);
    if (*ranks_cmd)
      run_ranks(ranks_target, !ranks_window.empty(),
                ranks_window.empty() ? 0 : ranks_window[0],
                ranks_window.empty() ? 0 : ranks_window[1], json_out);
    if (*chi_cmd) run_chi_m(chi_ranks, chi_betti, chi_n, chi_system, json_out);
    if (*res_cmd) run_resonance(res_system, res_ranks, res_window, json_out);
    if (*feas_cmd) run_feasibility(feas_target, feas_bounds, json_out);
    if (*thm_a) run_theorem_a(a_target, a_bounds, json_out);
    if (*thm_b) run_theorem_b(b_target, b_bounds, json_out);
    if (*thm_c) run_theorem_c(c_target, c_bounds, json_out);
    if (*fix_cmd) run_emit_fixtures(fix_dir, json_out);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const computation_error& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
