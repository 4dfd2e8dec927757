#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mli/cnf.hpp"
#include "mli/errors.hpp"
#include "mli/gibbs.hpp"
#include "mli/parser.hpp"
#include "mli/report.hpp"
#include "mli/sampler.hpp"
#include "mli/sat.hpp"
#include "mli/uniqueness.hpp"

namespace {

constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  std::string program_path;
  std::string output_path;
};

mli::Program load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  mli::Program p = mli::parse_program(buf.str());
  mli::compile_clauses(p);
  return p;
}

void emit(const CommonOptions& common, const mli::ReportWriter& report) {
  std::cout << report.str();
  if (common.output_path.empty()) return;
  std::ofstream out(common.output_path);
  if (!out)
    throw mli::RejectionError("cannot write '" + common.output_path + "'");
  out << report.str();
}

void begin_report(mli::ReportWriter& r, const char* command,
                  const CommonOptions& common) {
  r.section("run");
  r.kv("tool_version", mli::kToolVersion);
  r.kv("command", command);
  r.kv("program", common.program_path);
}

std::string join_atom_texts(const mli::HerbrandStore& store,
                            const std::vector<mli::AtomId>& atoms) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += ',';
    out += store.atom_text(atoms[i]);
  }
  return out;
}

std::string bits_for(const std::vector<std::uint8_t>& values) {
  std::string out;
  out.reserve(values.size());
  for (auto v : values) out += v ? '1' : '0';
  return out;
}

std::string row_bits(std::uint64_t config, std::size_t n) {
  std::string out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out += ((config >> k) & 1) ? '1' : '0';
  return out;
}

std::map<mli::AtomId, bool> assignment_map(mli::Grounder& g,
                                           const std::string& text,
                                           const mli::Signature& sig) {
  std::map<mli::AtomId, bool> out;
  for (const auto& [atom, value] : mli::parse_ground_assignments(text, sig))
    out[g.intern_atom(atom)] = value;
  return out;
}

// ---- analyze ----

int run_analyze(const CommonOptions& common) {
  mli::Program p = load_program(common.program_path);
  mli::DeterminacyReport det = mli::check_sigma_determinate(p);

  mli::ReportWriter r;
  begin_report(r, "analyze", common);

  r.section("program");
  r.kv("types", static_cast<std::uint64_t>(p.signature.types.size()));
  r.kv("functions", static_cast<std::uint64_t>(p.signature.functions.size()));
  r.kv("predicates", static_cast<std::uint64_t>(p.signature.predicates.size()));
  r.kv("formulas", static_cast<std::uint64_t>(p.formulas.size()));
  r.kv("clauses", static_cast<std::uint64_t>(p.clauses.size()));

  r.section("formulas");
  for (std::size_t i = 0; i < p.formulas.size(); ++i) {
    r.kv("formula." + std::to_string(i),
         mli::format_double(p.formulas[i].weight) + " " +
             mli::to_string(*p.formulas[i].formula));
  }

  r.section("clauses");
  for (std::size_t i = 0; i < p.clauses.size(); ++i) {
    r.kv("clause." + std::to_string(i), mli::to_string(p.clauses[i]));
    r.kv("clause." + std::to_string(i) + ".origin",
         static_cast<std::uint64_t>(p.clauses[i].origin));
  }

  if (!p.warnings.empty()) {
    r.section("warnings");
    for (std::size_t i = 0; i < p.warnings.size(); ++i)
      r.kv("warning." + std::to_string(i), p.warnings[i]);
  }

  r.section("determinacy");
  r.kv("sigma_determinate", det.determinate);
  r.kv("clause_bound", det.clause_bound);
  for (std::size_t i = 0; i < det.clauses.size(); ++i) {
    if (det.clauses[i].determinate) continue;
    std::string vars;
    for (const auto& v : det.clauses[i].violating_variables) {
      if (!vars.empty()) vars += ' ';
      vars += v;
    }
    r.kv("clause." + std::to_string(i) + ".violating_variables", vars);
  }

  emit(common, r);
  return det.determinate ? 0 : kExitRejected;
}

// ---- uniqueness ----

int run_uniqueness(const CommonOptions& common, int depth, int window) {
  mli::Program p = load_program(common.program_path);
  mli::Grounder g(p);
  mli::UniquenessReport rep = mli::check_uniqueness(g, depth, window);

  mli::ReportWriter r;
  begin_report(r, "uniqueness", common);
  r.section("config");
  r.kv("depth", depth);
  r.kv("window", window);

  r.section("uniqueness");
  r.kv("verdict", mli::to_string(rep.verdict));
  r.kv("supremum", rep.supremum);
  r.kv("stabilized", rep.stabilized);
  r.kv("witness", g.store().atom_text(rep.witness));
  r.kv("atoms_scanned", static_cast<std::uint64_t>(rep.atoms_scanned));
  for (std::size_t d = 0; d < rep.per_depth_max.size(); ++d)
    r.kv("depth_max." + std::to_string(d), rep.per_depth_max[d]);
  r.kv("note", rep.note);

  emit(common, r);
  return 0;
}

// ---- query ----

int run_query(const CommonOptions& common, const std::string& atoms_text,
              const std::string& policy_name, const std::string& boundary_text) {
  mli::Program p = load_program(common.program_path);
  mli::Grounder g(p);

  std::vector<mli::AtomId> atoms;
  for (const auto& f : mli::parse_ground_atoms(atoms_text, p.signature))
    atoms.push_back(g.intern_atom(f));

  auto policy = mli::boundary_policy_from(policy_name);
  if (!policy)
    throw std::runtime_error("unknown boundary policy '" + policy_name + "'");
  if (*policy == mli::BoundaryPolicy::Explicit && boundary_text.empty())
    throw std::runtime_error("explicit boundary policy needs --boundary");

  mli::Volume volume = mli::build_volume(g, atoms);
  mli::BoundaryAssignment boundary;
  switch (*policy) {
    case mli::BoundaryPolicy::Free: {
      // Conditioning on nothing: clauses that leave the volume are dropped.
      mli::TruncationSpec spec;
      spec.query_atoms = atoms;
      spec.radius = 0;
      spec.policy = mli::BoundaryPolicy::Free;
      volume = mli::truncate(g, spec).volume;
      break;
    }
    case mli::BoundaryPolicy::AllZero:
      boundary = mli::uniform_boundary(volume, false);
      break;
    case mli::BoundaryPolicy::AllOne:
      boundary = mli::uniform_boundary(volume, true);
      break;
    case mli::BoundaryPolicy::Explicit:
      boundary = mli::boundary_from(
          volume, g.store(), assignment_map(g, boundary_text, p.signature));
      break;
  }

  mli::ReportWriter r;
  begin_report(r, "query", common);
  r.section("config");
  r.kv("atoms", atoms_text);
  r.kv("boundary_policy", policy_name);
  if (*policy == mli::BoundaryPolicy::Explicit)
    r.kv("boundary", boundary_text);

  r.section("boundary");
  r.kv("atoms", join_atom_texts(g.store(), volume.boundary_atoms));
  r.kv("values", bits_for(boundary.values));

  const bool all_hard =
      !p.formulas.empty() &&
      std::all_of(p.formulas.begin(), p.formulas.end(),
                  [](const mli::WeightedFormula& wf) {
                    return std::isinf(wf.weight);
                  });

  if (all_hard) {
    mli::LimitDistribution limit = mli::limit_conditional(volume, boundary);
    r.section("limit");
    r.kv("atoms", join_atom_texts(g.store(), limit.atoms));
    r.kv("max_satisfied", static_cast<std::uint64_t>(limit.max_satisfied));
    r.kv("rows", static_cast<std::uint64_t>(limit.probabilities.size()));
    for (std::size_t i = 0; i < limit.probabilities.size(); ++i) {
      r.kv("row." + std::to_string(i),
           row_bits(i, limit.atoms.size()) + " " +
               mli::format_double(limit.probabilities[i]));
    }
    r.section("marginals");
    for (std::size_t k = 0; k < limit.atoms.size(); ++k) {
      double m = 0.0;
      for (std::size_t i = 0; i < limit.probabilities.size(); ++i)
        if ((i >> k) & 1) m += limit.probabilities[i];
      r.kv(g.store().atom_text(limit.atoms[k]), m);
    }
  } else {
    mli::ConditionalDistribution cd = mli::conditional(volume, boundary);
    r.section("conditional");
    r.kv("atoms", join_atom_texts(g.store(), cd.atoms));
    r.kv("log_partition", cd.log_partition);
    r.kv("rows", static_cast<std::uint64_t>(cd.probabilities.size()));
    for (std::size_t i = 0; i < cd.probabilities.size(); ++i) {
      r.kv("row." + std::to_string(i),
           row_bits(i, cd.atoms.size()) + " " +
               mli::format_double(cd.probabilities[i]));
    }
    r.section("marginals");
    for (std::size_t k = 0; k < cd.atoms.size(); ++k) {
      double m = 0.0;
      for (std::size_t i = 0; i < cd.probabilities.size(); ++i)
        if ((i >> k) & 1) m += cd.probabilities[i];
      r.kv(g.store().atom_text(cd.atoms[k]), m);
    }
  }

  emit(common, r);
  return 0;
}

// ---- sample ----

int run_sample(const CommonOptions& common, const std::string& query_text,
               int radius, std::uint64_t sweeps, std::uint64_t burnin,
               std::uint64_t seed, const std::string& policy_name,
               const std::string& boundary_text, const std::string& trace_path) {
  mli::Program p = load_program(common.program_path);
  mli::Grounder g(p);

  auto policy = mli::boundary_policy_from(policy_name);
  if (!policy)
    throw std::runtime_error("unknown boundary policy '" + policy_name + "'");
  if (*policy == mli::BoundaryPolicy::Explicit && boundary_text.empty())
    throw std::runtime_error("explicit boundary policy needs --boundary");

  mli::TruncationSpec spec;
  for (const auto& f : mli::parse_ground_atoms(query_text, p.signature))
    spec.query_atoms.push_back(g.intern_atom(f));
  spec.radius = radius;
  spec.policy = *policy;
  if (*policy == mli::BoundaryPolicy::Explicit)
    spec.explicit_boundary = assignment_map(g, boundary_text, p.signature);

  mli::Truncation t = mli::truncate(g, spec);

  std::ofstream trace_file;
  std::ostream* trace = nullptr;
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file)
      throw mli::RejectionError("cannot write '" + trace_path + "'");
    trace = &trace_file;
  }

  mli::MarginalEstimate est =
      mli::run_chain(t, spec.query_atoms, sweeps, burnin, seed, trace);

  mli::ReportWriter r;
  begin_report(r, "sample", common);
  r.section("config");
  r.kv("query", query_text);
  r.kv("radius", radius);
  r.kv("sweeps", sweeps);
  r.kv("burnin", burnin);
  r.kv("seed", seed);
  r.kv("boundary_policy", policy_name);
  if (*policy == mli::BoundaryPolicy::Explicit) r.kv("boundary", boundary_text);
  if (!trace_path.empty()) r.kv("trace", trace_path);

  r.section("truncation");
  r.kv("volume_atoms", static_cast<std::uint64_t>(t.volume.atoms.size()));
  r.kv("boundary_atoms",
       static_cast<std::uint64_t>(t.volume.boundary_atoms.size()));
  r.kv("clauses", static_cast<std::uint64_t>(t.volume.clauses.size()));

  r.section("estimates");
  for (std::size_t k = 0; k < est.atoms.size(); ++k) {
    const std::string& name = g.store().atom_text(est.atoms[k]);
    r.kv(name, est.estimate[k]);
    r.kv(name + ".std_error", est.std_error[k]);
  }

  emit(common, r);
  return 0;
}

// ---- sensitivity ----

int run_sensitivity(const CommonOptions& common, const std::string& query_text,
                    int radius, std::uint64_t sweeps, std::uint64_t burnin,
                    std::uint64_t seed, const std::string& policies_text,
                    const std::string& boundary_text) {
  mli::Program p = load_program(common.program_path);
  mli::Grounder g(p);

  std::vector<mli::BoundaryPolicy> policies;
  std::stringstream ss(policies_text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto policy = mli::boundary_policy_from(name);
    if (!policy)
      throw std::runtime_error("unknown boundary policy '" + name + "'");
    policies.push_back(*policy);
  }

  mli::TruncationSpec base;
  for (const auto& f : mli::parse_ground_atoms(query_text, p.signature))
    base.query_atoms.push_back(g.intern_atom(f));
  base.radius = radius;
  if (!boundary_text.empty())
    base.explicit_boundary = assignment_map(g, boundary_text, p.signature);

  mli::SensitivityReport rep =
      mli::boundary_sensitivity(g, base, policies, sweeps, burnin, seed);

  mli::ReportWriter r;
  begin_report(r, "sensitivity", common);
  r.section("config");
  r.kv("query", query_text);
  r.kv("radius", radius);
  r.kv("sweeps", sweeps);
  r.kv("burnin", burnin);
  r.kv("seed", seed);
  r.kv("policies", policies_text);
  if (!boundary_text.empty()) r.kv("boundary", boundary_text);

  for (const auto& run : rep.runs) {
    r.section("run." + mli::to_string(run.policy));
    for (std::size_t k = 0; k < run.marginals.atoms.size(); ++k) {
      const std::string& atom = g.store().atom_text(run.marginals.atoms[k]);
      r.kv(atom, run.marginals.estimate[k]);
      r.kv(atom + ".std_error", run.marginals.std_error[k]);
    }
  }

  r.section("sensitivity");
  for (std::size_t k = 0; k < rep.query_atoms.size(); ++k) {
    r.kv(g.store().atom_text(rep.query_atoms[k]) + ".spread", rep.spread[k]);
  }
  r.kv("max_spread", rep.max_spread);

  emit(common, r);
  return 0;
}

// ---- sat / entail ----

void write_sat_body(mli::ReportWriter& r, const mli::SatReport& rep,
                    const char* section, const char* certified_name,
                    const char* open_name) {
  r.section(section);
  r.kv("verdict", rep.verdict == mli::SatVerdict::UnsatisfiableCertified
                      ? certified_name
                      : open_name);
  r.kv("depth", rep.depth);
  for (const auto& d : rep.per_depth) {
    const std::string prefix = "depth." + std::to_string(d.depth);
    r.kv(prefix + ".atoms", static_cast<std::uint64_t>(d.atom_count));
    r.kv(prefix + ".clauses", static_cast<std::uint64_t>(d.clause_count));
    r.kv(prefix + ".satisfiable", d.satisfiable);
  }
  if (rep.verdict == mli::SatVerdict::SatisfiableUpToDepth) {
    std::string model;
    for (const auto& [atom, value] : rep.model) {
      if (!model.empty()) model += ' ';
      model += atom + "=" + (value ? "1" : "0");
    }
    r.kv("model", model);
  }
}

int run_sat(const CommonOptions& common, int max_depth) {
  mli::Program p = load_program(common.program_path);
  mli::Grounder g(p);
  mli::SatReport rep = mli::check_satisfiable(g, max_depth);

  mli::ReportWriter r;
  begin_report(r, "sat", common);
  r.section("config");
  r.kv("max_depth", max_depth);
  write_sat_body(r, rep, "sat", "unsatisfiable-certified",
                 "satisfiable-up-to-depth");
  emit(common, r);
  return 0;
}

int run_entail(const CommonOptions& common, const std::string& formula_text,
               int max_depth) {
  mli::Program p = load_program(common.program_path);
  mli::FormulaPtr alpha = mli::parse_formula(formula_text, p.signature);
  mli::SatReport rep = mli::check_entailment(p, alpha, max_depth);

  mli::ReportWriter r;
  begin_report(r, "entail", common);
  r.section("config");
  r.kv("formula", formula_text);
  r.kv("max_depth", max_depth);
  write_sat_body(r, rep, "entailment", "entailment-certified",
                 "inconclusive");
  emit(common, r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov logic over infinite Herbrand domains"};
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&common](CLI::App* cmd) {
    cmd->add_option("program", common.program_path, "program file")->required();
    cmd->add_option("-o,--output", common.output_path,
                    "also write the report to this file");
  };

  auto* analyze = app.add_subcommand(
      "analyze", "parse, compile to clauses, check sigma-determinacy");
  add_common(analyze);

  int depth = 8;
  int window = 3;
  auto* uniqueness = app.add_subcommand(
      "uniqueness", "interaction-strength uniqueness check");
  add_common(uniqueness);
  uniqueness->add_option("--depth", depth, "scan horizon")
      ->capture_default_str();
  uniqueness->add_option("--window", window,
                         "depths the running maximum must hold steady")
      ->capture_default_str();

  std::string atoms_text;
  std::string policy_name = "all-zero";
  std::string boundary_text;
  auto* query = app.add_subcommand(
      "query", "exact conditional of chosen atoms given a boundary");
  add_common(query);
  query->add_option("--atoms", atoms_text, "comma-separated ground atoms")
      ->required();
  query->add_option("--boundary-policy", policy_name,
                    "free, all-zero, all-one, or explicit")
      ->capture_default_str();
  query->add_option("--boundary", boundary_text,
                    "explicit boundary, e.g. \"Q(0)=1,Q(s(0))=0\"");

  std::string query_text;
  int radius = 2;
  std::uint64_t sweeps = 10000;
  std::uint64_t burnin = 1000;
  std::uint64_t seed = 0;
  std::string sample_policy = "free";
  std::string sample_boundary;
  std::string trace_path;
  auto* sample = app.add_subcommand(
      "sample", "Gibbs-sample marginals on a truncation");
  add_common(sample);
  sample->add_option("--query", query_text, "comma-separated ground atoms")
      ->required();
  sample->add_option("--radius", radius, "truncation radius")
      ->capture_default_str();
  sample->add_option("--sweeps", sweeps, "post-burnin sweeps")
      ->capture_default_str();
  sample->add_option("--burnin", burnin, "burn-in sweeps")
      ->capture_default_str();
  sample->add_option("--seed", seed, "chain seed")->required();
  sample->add_option("--boundary-policy", sample_policy,
                     "free, all-zero, all-one, or explicit")
      ->capture_default_str();
  sample->add_option("--boundary", sample_boundary, "explicit boundary");
  sample->add_option("--trace", trace_path,
                     "write one line of volume state per sweep");

  std::string sens_query;
  int sens_radius = 2;
  std::uint64_t sens_sweeps = 10000;
  std::uint64_t sens_burnin = 1000;
  std::uint64_t sens_seed = 0;
  std::string policies_text = "free,all-zero,all-one";
  std::string sens_boundary;
  auto* sensitivity = app.add_subcommand(
      "sensitivity", "compare marginals across boundary policies");
  add_common(sensitivity);
  sensitivity->add_option("--query", sens_query, "comma-separated ground atoms")
      ->required();
  sensitivity->add_option("--radius", sens_radius, "truncation radius")
      ->capture_default_str();
  sensitivity->add_option("--sweeps", sens_sweeps, "post-burnin sweeps")
      ->capture_default_str();
  sensitivity->add_option("--burnin", sens_burnin, "burn-in sweeps")
      ->capture_default_str();
  sensitivity->add_option("--seed", sens_seed, "chain seed")->required();
  sensitivity->add_option("--policies", policies_text,
                          "comma-separated boundary policies")
      ->capture_default_str();
  sensitivity->add_option("--boundary", sens_boundary,
                          "explicit boundary, used by the explicit policy");

  int max_depth = 8;
  auto* sat = app.add_subcommand(
      "sat", "deepening satisfiability check for hard constraints");
  add_common(sat);
  sat->add_option("--max-depth", max_depth, "deepest truncation to try")
      ->capture_default_str();

  std::string formula_text;
  int entail_depth = 8;
  auto* entail =
      app.add_subcommand("entail", "entailment check via refutation");
  add_common(entail);
  entail->add_option("--formula", formula_text, "query formula")->required();
  entail->add_option("--max-depth", entail_depth, "deepest truncation to try")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand(analyze)) return run_analyze(common);
    if (app.got_subcommand(uniqueness))
      return run_uniqueness(common, depth, window);
    if (app.got_subcommand(query))
      return run_query(common, atoms_text, policy_name, boundary_text);
    if (app.got_subcommand(sample))
      return run_sample(common, query_text, radius, sweeps, burnin, seed,
                        sample_policy, sample_boundary, trace_path);
    if (app.got_subcommand(sensitivity))
      return run_sensitivity(common, sens_query, sens_radius, sens_sweeps,
                             sens_burnin, sens_seed, policies_text,
                             sens_boundary);
    if (app.got_subcommand(sat)) return run_sat(common, max_depth);
    if (app.got_subcommand(entail))
      return run_entail(common, formula_text, entail_depth);
  } catch (const mli::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mli::RejectionError& e) {
    std::cerr << "rejected: " << e.what() << '\n';
    return kExitRejected;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
