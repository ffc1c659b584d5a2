#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cziter/homology.hpp"
#include "cziter/iteration.hpp"
#include "cziter/multiplicity.hpp"
#include "cziter/path.hpp"
#include "cziter/theorems.hpp"

// Wire formats. Serialization is deterministic: object keys sort
// lexicographically (nlohmann's default map storage), rationals print in
// lowest terms, and exact fields never pass through floating point.

namespace cziter {

using Json = nlohmann::json;

namespace jdetail {

inline input_error bad_field(const std::string& where, const std::string& why) {
  return input_error(where + ": " + why);
}

inline void need_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw bad_field(where, "expected an object");
}

inline const Json& field(const Json& j, const char* key,
                         const std::string& where) {
  need_object(j, where);
  auto it = j.find(key);
  if (it == j.end()) throw bad_field(where + "." + key, "missing");
  return *it;
}

}  // namespace jdetail

// integers ride as JSON numbers while they fit, decimal strings beyond
inline Json int_to_json(const Int& v) {
  static const Int lo = Int(std::numeric_limits<long long>::min());
  static const Int hi = Int(std::numeric_limits<long long>::max());
  if (v >= lo && v <= hi) return Json(v.convert_to<long long>());
  return Json(v.str());
}

inline Int int_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Int(j.get<long long>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::exception&) {
      throw jdetail::bad_field(where, "not an integer string");
    }
  }
  throw jdetail::bad_field(where, "expected an integer");
}

inline std::string rat_to_string(const Rat& v) {
  if (den(v) == 1) return num(v).str();
  return num(v).str() + "/" + den(v).str();
}

// accepts non-reduced fractions; normalizes and records a warning
inline Rat rat_from_string(const std::string& s, const std::string& where,
                           std::vector<std::string>* warnings = nullptr) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int p(s.substr(0, slash));
    Int q(s.substr(slash + 1));
    if (q == 0) throw jdetail::bad_field(where, "zero denominator");
    Rat v(p, q);
    if (warnings && (num(v) != p || den(v) != q))
      warnings->push_back(where + ": fraction " + s + " normalized to " +
                          rat_to_string(v));
    return v;
  } catch (const input_error&) {
    throw;
  } catch (const std::exception&) {
    throw jdetail::bad_field(where, "malformed fraction '" + s + "'");
  }
}

inline Rat rat_from_json(const Json& j, const std::string& where,
                         std::vector<std::string>* warnings = nullptr) {
  if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
  if (j.is_string()) return rat_from_string(j.get<std::string>(), where, warnings);
  throw jdetail::bad_field(where, "expected a fraction string");
}

// ---- matrices: {"dim": 2n, "entries": [["p/q", ...], ...]} ----

inline Json matrix_to_json(const RatMat& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(rat_to_string(m(i, j)));
    entries.push_back(std::move(row));
  }
  return Json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

inline Json matrix_to_json(const SymplecticMatrix& m) {
  return matrix_to_json(m.mat());
}

inline RatMat matrix_from_json(const Json& j,
                               std::vector<std::string>* warnings = nullptr,
                               const std::string& where = "matrix") {
  const Json& dim_j = jdetail::field(j, "dim", where);
  if (!dim_j.is_number_integer() || dim_j.get<long long>() < 1)
    throw jdetail::bad_field(where + ".dim", "expected a positive integer");
  int dim = dim_j.get<int>();
  const Json& entries = jdetail::field(j, "entries", where);
  if (!entries.is_array() || static_cast<int>(entries.size()) != dim)
    throw jdetail::bad_field(where + ".entries", "expected " +
                                                     std::to_string(dim) +
                                                     " rows");
  RatMat m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Json& row = entries[i];
    std::string rw = where + ".entries[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw jdetail::bad_field(rw, "expected " + std::to_string(dim) +
                                       " columns");
    for (int k = 0; k < dim; ++k)
      m(i, k) = rat_from_json(row[k], rw + "[" + std::to_string(k) + "]",
                              warnings);
  }
  return m;
}

// ---- paths: {"tau": t, "samples": [{"t": ..., "matrix": ...}, ...]} ----

inline Json path_to_json(const SymplecticPath& path) {
  Json samples = Json::array();
  for (const PathSample& s : path.samples())
    samples.push_back(Json{{"t", s.t}, {"matrix", matrix_to_json(s.m)}});
  return Json{{"tau", path.tau()}, {"samples", std::move(samples)}};
}

inline SymplecticPath path_from_json(const Json& j,
                                     std::vector<std::string>* warnings = nullptr,
                                     const std::string& where = "path") {
  const Json& tau_j = jdetail::field(j, "tau", where);
  if (!tau_j.is_number()) throw jdetail::bad_field(where + ".tau", "expected a number");
  const Json& samples_j = jdetail::field(j, "samples", where);
  if (!samples_j.is_array())
    throw jdetail::bad_field(where + ".samples", "expected an array");
  std::vector<PathSample> samples;
  samples.reserve(samples_j.size());
  for (size_t i = 0; i < samples_j.size(); ++i) {
    std::string sw = where + ".samples[" + std::to_string(i) + "]";
    const Json& t_j = jdetail::field(samples_j[i], "t", sw);
    if (!t_j.is_number()) throw jdetail::bad_field(sw + ".t", "expected a number");
    RatMat m = matrix_from_json(jdetail::field(samples_j[i], "matrix", sw),
                                warnings, sw + ".matrix");
    try {
      samples.push_back({t_j.get<double>(), SymplecticMatrix(std::move(m))});
    } catch (const invariant_error& e) {
      throw jdetail::bad_field(sw + ".matrix", e.what());
    } catch (const dimension_error& e) {
      throw jdetail::bad_field(sw + ".matrix", e.what());
    }
  }
  try {
    return SymplecticPath(std::move(samples), tau_j.get<double>());
  } catch (const input_error& e) {
    throw jdetail::bad_field(where, e.what());
  }
}

// ---- angles and iteration profiles ----

inline Json angle_to_json(const Angle& theta) {
  if (const auto* q = std::get_if<QuadIrrational>(&theta))
    return Json{{"kind", "quad"},
                {"p", int_to_json(q->p)},
                {"q", int_to_json(q->q)},
                {"d", int_to_json(q->d)},
                {"s", int_to_json(q->s)}};
  const auto& g = std::get<GuardedRational>(theta);
  return Json{{"kind", "rat"},
              {"num", int_to_json(num(g.value))},
              {"den", int_to_json(den(g.value))},
              {"guard", int_to_json(g.guard)}};
}

inline Angle angle_from_json(const Json& j, const std::string& where) {
  const Json& kind = jdetail::field(j, "kind", where);
  try {
    if (kind == "quad")
      return QuadIrrational(int_from_json(jdetail::field(j, "p", where), where + ".p"),
                            int_from_json(jdetail::field(j, "q", where), where + ".q"),
                            int_from_json(jdetail::field(j, "d", where), where + ".d"),
                            int_from_json(jdetail::field(j, "s", where), where + ".s"));
    if (kind == "rat")
      return GuardedRational(
          Rat(int_from_json(jdetail::field(j, "num", where), where + ".num"),
              int_from_json(jdetail::field(j, "den", where), where + ".den")),
          int_from_json(jdetail::field(j, "guard", where), where + ".guard"));
  } catch (const invariant_error& e) {
    throw jdetail::bad_field(where, e.what());
  } catch (const input_error&) {
    throw;
  } catch (const std::exception& e) {
    throw jdetail::bad_field(where, e.what());
  }
  throw jdetail::bad_field(where + ".kind", "expected 'quad' or 'rat'");
}

inline Json profile_to_json(const IterationProfile& profile) {
  Json thetas = Json::array();
  for (const Angle& th : profile.thetas()) thetas.push_back(angle_to_json(th));
  Json out{{"r", int_to_json(profile.r())},
           {"n", profile.ambient_n()},
           {"thetas", std::move(thetas)}};
  if (profile.long_data()) {
    const LongFormData& ld = *profile.long_data();
    Json p = Json::array(), w = Json::array(), q = Json::array(),
         raw = Json::array();
    for (const Int& v : ld.P) p.push_back(int_to_json(v));
    for (const Int& v : ld.W) w.push_back(int_to_json(v));
    for (const Int& v : ld.Q) q.push_back(int_to_json(v));
    for (const Angle& th : ld.theta_raw) raw.push_back(angle_to_json(th));
    out["long_data"] = Json{{"P", std::move(p)},
                            {"W", std::move(w)},
                            {"Q", std::move(q)},
                            {"theta_raw", std::move(raw)}};
  }
  return out;
}

inline IterationProfile profile_from_json(const Json& j,
                                          const std::string& where = "profile") {
  Int r = int_from_json(jdetail::field(j, "r", where), where + ".r");
  const Json& n_j = jdetail::field(j, "n", where);
  if (!n_j.is_number_integer())
    throw jdetail::bad_field(where + ".n", "expected an integer");
  const Json& thetas_j = jdetail::field(j, "thetas", where);
  if (!thetas_j.is_array())
    throw jdetail::bad_field(where + ".thetas", "expected an array");
  std::vector<Angle> thetas;
  for (size_t i = 0; i < thetas_j.size(); ++i)
    thetas.push_back(angle_from_json(
        thetas_j[i], where + ".thetas[" + std::to_string(i) + "]"));

  std::optional<LongFormData> long_data;
  if (auto it = j.find("long_data"); it != j.end() && !it->is_null()) {
    std::string lw = where + ".long_data";
    LongFormData ld;
    auto ints = [&](const char* key, std::vector<Int>& dst) {
      const Json& arr = jdetail::field(*it, key, lw);
      if (!arr.is_array()) throw jdetail::bad_field(lw + "." + key, "expected an array");
      for (size_t i = 0; i < arr.size(); ++i)
        dst.push_back(int_from_json(arr[i], lw + "." + key + "[" +
                                                std::to_string(i) + "]"));
    };
    ints("P", ld.P);
    ints("W", ld.W);
    ints("Q", ld.Q);
    const Json& raw = jdetail::field(*it, "theta_raw", lw);
    if (!raw.is_array())
      throw jdetail::bad_field(lw + ".theta_raw", "expected an array");
    for (size_t i = 0; i < raw.size(); ++i)
      ld.theta_raw.push_back(angle_from_json(
          raw[i], lw + ".theta_raw[" + std::to_string(i) + "]"));
    long_data = std::move(ld);
  }
  try {
    return IterationProfile(std::move(r), std::move(thetas), n_j.get<int>(),
                            std::move(long_data));
  } catch (const invariant_error& e) {
    throw jdetail::bad_field(where, e.what());
  }
}

// ---- Betti tables: {"dim": 2n, "betti": {"4": 1, ...}} ----

inline Json betti_to_json(const BettiTable& betti) {
  Json b = Json::object();
  for (const auto& [deg, rank] : betti.values)
    b[std::to_string(deg)] = int_to_json(rank);
  return Json{{"dim", betti.pair_dim}, {"betti", std::move(b)}};
}

inline BettiTable betti_from_json(const Json& j,
                                  const std::string& where = "betti") {
  const Json& dim_j = jdetail::field(j, "dim", where);
  if (!dim_j.is_number_integer())
    throw jdetail::bad_field(where + ".dim", "expected an integer");
  const Json& table = jdetail::field(j, "betti", where);
  jdetail::need_object(table, where + ".betti");
  std::map<int, Int> b;
  for (auto it = table.begin(); it != table.end(); ++it) {
    int deg;
    try {
      size_t used = 0;
      deg = std::stoi(it.key(), &used);
      if (used != it.key().size()) throw std::invalid_argument("trail");
    } catch (const std::exception&) {
      throw jdetail::bad_field(where + ".betti", "non-integer degree key '" +
                                                     it.key() + "'");
    }
    b[deg] = int_from_json(it.value(), where + ".betti." + it.key());
  }
  try {
    return BettiTable(dim_j.get<int>(), std::move(b));
  } catch (const input_error& e) {
    throw jdetail::bad_field(where, e.what());
  }
}

// ---- rank functions ----

inline Json ranks_to_json(const RankFunction& rf) {
  Json exc = Json::object();
  for (const auto& [deg, rank] : rf.exceptional())
    exc[deg.str()] = int_to_json(rank);
  Json tail = Json::array();
  for (const Int& r : rf.tail()) tail.push_back(int_to_json(r));
  return Json{{"exceptional", std::move(exc)},
              {"tail_start", int_to_json(rf.tail_start())},
              {"period", rf.period()},
              {"tail", std::move(tail)},
              {"direction", rf.direction()}};
}

inline RankFunction ranks_from_json(const Json& j,
                                    const std::string& where = "ranks") {
  const Json& exc_j = jdetail::field(j, "exceptional", where);
  jdetail::need_object(exc_j, where + ".exceptional");
  std::map<Int, Int> exc;
  for (auto it = exc_j.begin(); it != exc_j.end(); ++it) {
    Int deg;
    try {
      deg = Int(it.key());
    } catch (const std::exception&) {
      throw jdetail::bad_field(where + ".exceptional",
                               "non-integer degree key '" + it.key() + "'");
    }
    exc[deg] = int_from_json(it.value(), where + ".exceptional." + it.key());
  }
  Int tail_start =
      int_from_json(jdetail::field(j, "tail_start", where), where + ".tail_start");
  const Json& tail_j = jdetail::field(j, "tail", where);
  if (!tail_j.is_array())
    throw jdetail::bad_field(where + ".tail", "expected an array");
  std::vector<Int> tail;
  for (size_t i = 0; i < tail_j.size(); ++i)
    tail.push_back(
        int_from_json(tail_j[i], where + ".tail[" + std::to_string(i) + "]"));
  const Json& period_j = jdetail::field(j, "period", where);
  if (!period_j.is_number_integer() ||
      period_j.get<long long>() != static_cast<long long>(tail.size()))
    throw jdetail::bad_field(where + ".period", "must equal the tail length");
  int direction = 1;
  if (auto it = j.find("direction"); it != j.end()) {
    if (!it->is_number_integer())
      throw jdetail::bad_field(where + ".direction", "expected 1 or -1");
    direction = it->get<int>();
  }
  try {
    return RankFunction(std::move(exc), std::move(tail_start), std::move(tail),
                        direction);
  } catch (const input_error& e) {
    throw jdetail::bad_field(where, e.what());
  }
}

// ---- feasibility reports ----

inline Json certificate_to_json(const Certificate& c) {
  Json out{{"class", Json{{"r", int_to_json(c.cls.r)}, {"j", c.cls.j}}},
           {"kind", to_string(c.kind)},
           {"detail", c.detail}};
  if (c.alpha) out["alpha"] = rat_to_string(*c.alpha);
  if (c.cover) out["cover"] = int_to_json(*c.cover);
  return out;
}

inline Json bounds_to_json(const BoundsEcho& b) {
  return Json{{"K", b.K},
              {"r_lo", b.r_lo},
              {"r_hi", b.r_hi},
              {"grid_size", b.grid_size},
              {"depth", b.depth}};
}

inline Json verdict_to_json(const FeasibilityVerdict& v) {
  Json certs = Json::array();
  for (const Certificate& c : v.certificates)
    certs.push_back(certificate_to_json(c));
  Json witness;
  if (v.witness)
    witness = Json{{"profile", profile_to_json(v.witness->profile)},
                   {"matched_horizon", int_to_json(v.witness->matched_horizon)}};
  else
    witness = nullptr;
  Json unresolved = Json::array();
  for (const CandidateClass& c : v.unresolved)
    unresolved.push_back(Json{{"r", int_to_json(c.r)}, {"j", c.j}});
  Json out{{"verdict", to_string(v.kind)},
           {"witness", std::move(witness)},
           {"certificates", std::move(certs)},
           {"bounds", bounds_to_json(v.bounds)},
           {"unresolved", std::move(unresolved)}};
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

// ---- orbit systems: {"n": ..., "orbits": [{"label", "profile"}, ...]} ----

inline Json system_to_json(const OrbitSystem& system) {
  Json orbits = Json::array();
  for (const Orbit& o : system.orbits)
    orbits.push_back(
        Json{{"label", o.label}, {"profile", profile_to_json(o.profile)}});
  return Json{{"n", system.ambient_n}, {"orbits", std::move(orbits)}};
}

inline OrbitSystem system_from_json(const Json& j,
                                    const std::string& where = "system") {
  const Json& n_j = jdetail::field(j, "n", where);
  if (!n_j.is_number_integer())
    throw jdetail::bad_field(where + ".n", "expected an integer");
  const Json& orbits_j = jdetail::field(j, "orbits", where);
  if (!orbits_j.is_array())
    throw jdetail::bad_field(where + ".orbits", "expected an array");
  std::vector<Orbit> orbits;
  for (size_t i = 0; i < orbits_j.size(); ++i) {
    std::string ow = where + ".orbits[" + std::to_string(i) + "]";
    const Json& label = jdetail::field(orbits_j[i], "label", ow);
    if (!label.is_string())
      throw jdetail::bad_field(ow + ".label", "expected a string");
    orbits.push_back(
        {label.get<std::string>(),
         profile_from_json(jdetail::field(orbits_j[i], "profile", ow),
                           ow + ".profile")});
  }
  try {
    return OrbitSystem(std::move(orbits), n_j.get<int>());
  } catch (const input_error& e) {
    throw jdetail::bad_field(where, e.what());
  }
}

// exact value as a fraction string when rational, otherwise the full term
// map {"sqrt d coefficient"} plus a clearly labelled approximation
inline Json surd_to_json(const SurdSum& v) {
  if (v.is_rational()) return Json(rat_to_string(v.rational_part()));
  Json terms = Json::object();
  for (const auto& [d, coeff] : v.terms())
    terms[d.str()] = rat_to_string(coeff);
  return Json{{"terms", std::move(terms)},
              {"approx", static_cast<double>(v.to_real<Real256>())}};
}

// ---- theorem reports ----

inline Json theorem_a_to_json(const TheoremAReport& rep) {
  Json out{{"case_i", rep.case_i},
           {"case_ii", rep.case_ii},
           {"low_degree_route", rep.low_degree_route},
           {"feasibility", verdict_to_json(rep.feasibility)},
           {"final", to_string(rep.final)}};
  if (!rep.note.empty()) out["note"] = rep.note;
  return out;
}

inline Json theorem_b_to_json(const TheoremBReport& rep) {
  Json closed = Json::array();
  for (const Certificate& c : rep.closed_form)
    closed.push_back(certificate_to_json(c));
  Json out{{"feasibility", verdict_to_json(rep.feasibility)},
           {"closed_form", std::move(closed)},
           {"final", to_string(rep.final)}};
  if (!rep.note.empty()) out["note"] = rep.note;
  return out;
}

inline Json theorem_c_to_json(const TheoremCReport& rep) {
  Json out{{"final", to_string(rep.final)}};
  if (rep.delegated) out["delegated"] = theorem_a_to_json(*rep.delegated);
  if (rep.feasibility) out["feasibility"] = verdict_to_json(*rep.feasibility);
  if (rep.beta) out["beta"] = int_to_json(*rep.beta);
  if (rep.beta_certificate)
    out["beta_certificate"] = certificate_to_json(*rep.beta_certificate);
  if (!rep.note.empty()) out["note"] = rep.note;
  return out;
}

// canonical file form: two-space indent, trailing newline
inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse_json_text(const std::string& text, const std::string& where) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw jdetail::bad_field(where, "invalid JSON");
  return j;
}

}  // namespace cziter
