#pragma once

// Batch front-end: load a spec file or zoo entry, run validators, curvature
// sweeps or the full audit over a sample grid, and print the records.
//
// Exit codes: 0 success, 1 validation or audit failure, 2 input error.

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "acsm/curvature_lab.hpp"
#include "acsm/spec_file.hpp"
#include "acsm/zoo.hpp"

namespace acsm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;

struct RunConfig {
  std::optional<double> tolerance;
  std::optional<std::size_t> grid;
  std::string format = "table";
  std::string checks;
  std::optional<std::uint64_t> seed;
  std::string section;
};

struct Target {
  std::string label;
  ManifoldDescription description;
  ChartManifold manifold;
};

/// "zoo:<name>" selects a built-in entry, anything else is a spec file path.
inline Target load_target(const std::string& target) {
  Target t;
  t.label = target;
  if (target.rfind("zoo:", 0) == 0) {
    t.description = zoo_entry(target.substr(4)).description;
  } else {
    t.description = read_spec_file(target);
  }
  t.manifold = build_manifold(t.description);
  return t;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (std::string item : detail::split(s, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

inline std::set<std::string> selected_checks(const std::string& list, const std::vector<std::string>& known) {
  std::set<std::string> out;
  for (const std::string& c : split_list(list)) {
    if (std::find(known.begin(), known.end(), c) == known.end()) {
      std::string all;
      for (const auto& k : known) all += (all.empty() ? "" : ", ") + k;
      throw SpecError("unknown check '" + c + "' (available: " + all + ")");
    }
    out.insert(c);
  }
  return out;
}

inline const std::vector<std::string>& validator_groups() {
  static const std::vector<std::string> groups = {"structure", "statistical", "acs"};
  return groups;
}

/// φ-basis seed vector for --seed, from a portable uniform mapping.
inline Vector seed_vector(std::uint64_t seed, std::size_t dim) {
  std::mt19937_64 rng(seed);
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = detail::uniform(rng, -1.0, 1.0);
  return v;
}

/// Parses "e1, e2, ..., en" (optionally bracketed) into one field per
/// component.
inline std::vector<ScalarField> parse_section(std::string text, const std::vector<std::string>& coords) {
  const auto b = text.find_first_not_of(" \t");
  const auto e = text.find_last_not_of(" \t");
  if (b != std::string::npos) text = text.substr(b, e - b + 1);
  if (text.size() >= 2 && ((text.front() == '[' && text.back() == ']') || (text.front() == '(' && text.back() == ')'))) {
    text = text.substr(1, text.size() - 2);
  }
  const auto parts = detail::split(text, ',');
  if (parts.size() != coords.size()) {
    throw SpecError("section needs " + std::to_string(coords.size()) + " components, got " +
                    std::to_string(parts.size()));
  }
  return detail::parse_list(parts, coords, "section");
}

inline std::string vector_text(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + detail::json_number(v[i]);
  return s + ")";
}

/// Worst record per check, in order of first appearance. The pass flag is
/// the conjunction over all records of that check.
inline Report worst_per_check(const Report& r) {
  std::vector<std::string> order;
  std::map<std::string, Record> worst;
  for (const Record& rec : r.records()) {
    auto it = worst.find(rec.check);
    if (it == worst.end()) {
      order.push_back(rec.check);
      worst.emplace(rec.check, rec);
      continue;
    }
    const bool pass = it->second.pass && rec.pass;
    if (rec.residual > it->second.residual) it->second = rec;
    it->second.pass = pass;
  }
  Report out;
  for (const auto& c : order) out.add(worst.at(c));
  return out;
}

inline Report validate_all(const ChartManifold& m, std::span<const Point> points, const std::set<std::string>& groups,
                           std::optional<double> tolerance) {
  auto wants = [&](const char* g) { return groups.empty() || groups.count(g) != 0; };
  Report rep;
  for (const Report& r : map_points(points, [&](const Point& p) {
         PointFrame f = evaluate_frame(m, p);
         if (tolerance) f.tolerance = *tolerance;
         Report out;
         if (wants("structure")) out.append(validate_structure(f));
         if (wants("statistical")) out.append(validate_statistical(f));
         if (wants("acs")) out.append(validate_acs(f));
         return out;
       })) {
    rep.append(r);
  }
  return rep;
}

/// Per-point λ and the triple of φ-sectional values for every section, with
/// a max - min constancy summary per quantity.
inline Report curvature_sweep(const ChartManifold& m, std::span<const Point> points, const RunConfig& cfg) {
  std::vector<ScalarField> section;
  if (!cfg.section.empty()) section = parse_section(cfg.section, m.coords);
  const std::optional<Vector> seed =
      cfg.seed ? std::optional<Vector>(seed_vector(*cfg.seed, m.dim())) : std::nullopt;

  Report rep;
  for (const Report& r : map_points(points, [&](const Point& p) {
         PointFrame f = evaluate_frame(m, p);
         if (cfg.tolerance) f.tolerance = *cfg.tolerance;
         Report out;
         const LambdaValue lv = lambda_unchecked(f);
         out.value("lambda", p, lv.lambda, lv.residual, lv.residual <= f.tolerance);
         std::vector<Vector> xs;
         if (section.empty()) {
           xs = horizontal_test_vectors(phi_basis(f, seed ? *seed : default_seed(f)));
         } else {
           Vector x(m.dim());
           for (std::size_t i = 0; i < m.dim(); ++i) x[i] = section[i](p);
           xs.push_back(x);
         }
         const StatisticalCurvature sc = statistical_curvature(f, curvatures(m, p));
         for (const Vector& x : xs) {
           const PhiSectionalTriple t = phi_sectional_triple(f, sc, x);
           const std::string d = "X = " + vector_text(x);
           out.value("kphi", p, t.k_curvature, 0.0, true, d);
           out.value("kphi.riemannian", p, t.riemannian, 0.0, true, d);
           out.value("kphi.statistical", p, t.statistical, 0.0, true, d);
         }
         return out;
       })) {
    rep.append(r);
  }
  for (const char* q : {"kphi", "kphi.riemannian", "kphi.statistical"}) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const Record* r : rep.find(q)) {
      lo = std::min(lo, *r->value);
      hi = std::max(hi, *r->value);
    }
    rep.condition(std::string(q) + ".constancy", {}, hi - lo, hi - lo <= kCurvatureTolerance,
                  "min " + detail::json_number(lo) + ", max " + detail::json_number(hi));
  }
  return rep;
}

inline void emit(std::ostream& out, const Report& r, const RunConfig& cfg) {
  if (cfg.format == "json") {
    write_json_lines(out, r);
  } else {
    write_table(out, r);
  }
}

inline std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("acsm", sink);
  log->set_pattern("[%l] %v");
  log->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("ACSM_LOG")) log->set_level(spdlog::level::from_str(env));
  return log;
}

namespace detail {

inline std::string kind_name(const std::exception& e) {
#define ACSM_KIND(T) \
  if (dynamic_cast<const T*>(&e)) return #T;
  ACSM_KIND(SyntaxError)
  ACSM_KIND(UnknownIdentifier)
  ACSM_KIND(DomainError)
  ACSM_KIND(NonFinite)
  ACSM_KIND(InvalidPoint)
  ACSM_KIND(SingularMetric)
  ACSM_KIND(DegeneratePlane)
  ACSM_KIND(DegenerateSeed)
  ACSM_KIND(ExhaustedCandidates)
  ACSM_KIND(AcsViolated)
  ACSM_KIND(TorsionPresent)
  ACSM_KIND(NotHorizontal)
  ACSM_KIND(DegenerateSection)
  ACSM_KIND(PreconditionNotMet)
  ACSM_KIND(UnsupportedDimension)
  ACSM_KIND(SpecError)
#undef ACSM_KIND
  return "Error";
}

inline int code_for(const std::exception& e) {
  if (dynamic_cast<const SingularMetric*>(&e) || dynamic_cast<const AcsViolated*>(&e) ||
      dynamic_cast<const PreconditionNotMet*>(&e)) {
    return kExitFailure;
  }
  return kExitInput;
}

}  // namespace detail

/// Runs one command line (without the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);
  CLI::App app{"Almost contact statistical manifold lab"};
  app.name("acsm");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string target;
  std::string export_path;
  auto add_common = [&](CLI::App* sub, bool checks) {
    sub->add_option("target", target, "zoo:<name> or spec file path")->required();
    sub->add_option("--tol", cfg.tolerance, "tolerance override")->check(CLI::PositiveNumber);
    sub->add_option("--grid", cfg.grid, "grid points per coordinate")->check(CLI::Range(1, 1000));
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "table"}));
    sub->add_option("--seed", cfg.seed, "seed for the phi-basis sweep");
    if (checks) sub->add_option("--checks", cfg.checks, "comma-separated check groups");
  };
  CLI::App* validate = app.add_subcommand("validate", "check the structure axioms on the grid");
  add_common(validate, true);
  CLI::App* curvature = app.add_subcommand("curvature", "phi-sectional curvatures on the grid");
  add_common(curvature, false);
  curvature->add_option("--section", cfg.section, "X as comma-separated component expressions");
  CLI::App* audit_cmd = app.add_subcommand("audit", "full identity audit on the grid");
  add_common(audit_cmd, true);
  CLI::App* export_cmd = app.add_subcommand("export-zoo", "print a zoo entry as a spec file");
  export_cmd->add_option("name", target, "zoo entry name")->required();
  export_cmd->add_option("-o,--output", export_path, "write to this file instead of stdout");
  CLI::App* list_cmd = app.add_subcommand("list-zoo", "list zoo entry names");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (list_cmd->parsed()) {
      for (const std::string& n : zoo_names()) out << n << '\n';
      return kExitOk;
    }
    if (export_cmd->parsed()) {
      const std::string name = target.rfind("zoo:", 0) == 0 ? target.substr(4) : target;
      const std::string text = write_spec_text(zoo_entry(name).description);
      if (export_path.empty()) {
        out << text;
      } else {
        std::ofstream f(export_path);
        if (!(f << text)) throw SpecError("cannot write '" + export_path + "'");
        log->info("wrote {}", export_path);
      }
      return kExitOk;
    }

    const auto start = std::chrono::steady_clock::now();
    const Target t = load_target(target);
    const auto points = grid_points(t.manifold, cfg.grid);
    log->info("loaded {} (dim {}), {} grid points", t.manifold.name, t.manifold.dim(), points.size());

    const bool is_validate = validate->parsed();
    const std::set<std::string> vgroups =
        is_validate ? selected_checks(cfg.checks, validator_groups()) : std::set<std::string>{};
    const std::set<std::string> agroups =
        audit_cmd->parsed() ? selected_checks(cfg.checks, audit_groups()) : std::set<std::string>{};
    const Report validation = worst_per_check(validate_all(t.manifold, points, vgroups, cfg.tolerance));

    Report rep = validation;
    if (!is_validate) {
      if (!validation.ok()) {
        log->warn("structure failed validation; skipping {}", curvature->parsed() ? "curvature" : "audit");
      } else if (curvature->parsed()) {
        rep.append(curvature_sweep(t.manifold, points, cfg));
      } else {
        AuditOptions opt;
        opt.groups = agroups;
        opt.tolerance = cfg.tolerance;
        if (cfg.seed) opt.seed = seed_vector(*cfg.seed, t.manifold.dim());
        rep.append(audit(t.manifold, points, opt));
      }
    }
    emit(out, rep, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log->info("{} records in {:.3f} s", rep.records().size(), secs);
    if (!rep.ok()) {
      for (const auto& [check, worst] : rep.worst_by_check()) {
        if (!worst.second) log->warn("failed: {} (worst residual {})", check, worst.first);
      }
      return kExitFailure;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << detail::kind_name(e) << ": " << e.what() << '\n';
    return detail::code_for(e);
  }
}

}  // namespace acsm::cli
