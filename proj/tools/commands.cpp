#include "commands.hpp"

#include "hardylab/appendix.hpp"
#include "hardylab/json_io.hpp"
#include "hardylab/optimizer.hpp"
#include "hardylab/polytope.hpp"
#include "hardylab/reference_tables.hpp"
#include "hardylab/run_record.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace hardylab::cli {

namespace {

struct TableOutcome {
  bool completed = true;
  bool within = true;
  std::string csv;
};

struct Options {
  std::string out_dir = "runs";
  bool no_save = false;
  int k = 0;
  int d = 0;
  std::string x = "1", y = "1", z = "1";
  std::string anchor;
  bool mes = false;
  std::optional<int> restarts;
  std::uint64_t seed = 1;
  std::uint64_t cap = kDefaultVertexCap;
  std::string table;
  std::string format = "csv";
  bool check = false;
};

std::string fmt(double v, int digits = 10) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Anchor parse_anchor(const std::string& text, int k) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("anchor must look like bob_less_alice:2");
  const Anchor a = anchor_from_json({{"kind", text.substr(0, colon)}, {"index", std::stoi(text.substr(colon + 1))}});
  a.validate(k);
  return a;
}

InequalityCoeffs coeffs_from(const Options& o) {
  return InequalityCoeffs(o.k, o.d, parse_rational(o.x), parse_rational(o.y), parse_rational(o.z));
}

Json coeff_params(const InequalityCoeffs& c) {
  return {{"k", c.k()}, {"d", c.d()}, {"x", to_string(c.x())}, {"y", to_string(c.y())}, {"z", to_string(c.z())}};
}

OptimizerConfig config_from(const Options& o, OptimizerConfig base) {
  if (o.restarts) base.restarts = *o.restarts;
  base.seed = o.seed;
  base.validate();
  return base;
}

void print_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << "   ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << ' ' << fmt(m(r, c), 8);
    out << '\n';
  }
}

void print_opt_summary(std::ostream& out, const OptResult& r) {
  out << "residual  " << fmt(r.residual, 3) << '\n'
      << "restarts  " << r.restarts_used << " (within 1e-6 of best: " << r.hits() << ", spread " << fmt(r.spread(), 3)
      << ")\n"
      << "seed      " << r.seed << '\n';
}

RunRecord cmd_sp(const Options& o, std::ostream& out) {
  const Scenario sc(o.k, o.d);
  const OptimizerConfig cfg = config_from(o, OptimizerConfig::sp_defaults());
  RunRecord rec;
  rec.command = "sp";
  rec.parameters = {{"k", sc.k}, {"d", sc.d}, {"restarts", cfg.restarts}};
  const OptResult r = [&] {
    if (sc.d == 2) {
      rec.parameters["method"] = "qubit_closed_form";
      return maximize_sp_qubit(sc.k, cfg);
    }
    const Anchor anchor = o.anchor.empty() ? Anchor::default_for(sc.k) : parse_anchor(o.anchor, sc.k);
    rec.parameters["anchor"] = to_json(anchor);
    return maximize_sp(sc.k, sc.d, anchor, cfg);
  }();
  rec.seed = cfg.seed;
  rec.result = to_json(r);
  out << "SP_{" << sc.k << ',' << sc.d << "} = " << fmt(r.value) << '\n';
  print_opt_summary(out, r);
  return rec;
}

RunRecord cmd_gh(const Options& o, std::ostream& out) {
  const InequalityCoeffs c = coeffs_from(o);
  const OptimizerConfig cfg = config_from(o, OptimizerConfig::gh_defaults());
  const auto restriction = o.mes ? StateRestriction::mes_only : StateRestriction::any_state;
  const OptResult r = maximize_gh(c, restriction, cfg);
  RunRecord rec;
  rec.command = "gh";
  rec.parameters = coeff_params(c);
  rec.parameters["restriction"] = o.mes ? "MES" : "QT";
  rec.parameters["restarts"] = cfg.restarts;
  rec.seed = cfg.seed;
  rec.result = to_json(r);
  out << "max GH_{" << c.k() << ',' << c.d() << "}(" << to_string(c.x()) << ',' << to_string(c.y()) << ','
      << to_string(c.z()) << ") " << (o.mes ? "[MES]" : "[QT]") << " = " << fmt(r.value) << '\n';
  print_opt_summary(out, r);
  out << "state H:\n";
  print_matrix(out, r.state.h());
  return rec;
}

RunRecord cmd_tightness(const Options& o, std::ostream& out) {
  const InequalityCoeffs c = coeffs_from(o);
  const TightnessCertificate cert = is_tight(c, o.cap);
  RunRecord rec;
  rec.command = "tightness";
  rec.parameters = coeff_params(c);
  rec.parameters["cap"] = o.cap;
  rec.result = to_json(cert);
  out << "local bound          " << to_string(cert.local_bound) << '\n'
      << "polytope dimension   " << cert.polytope_dimension << '\n'
      << "saturating vertices  " << cert.saturating_vertices << '\n'
      << "achieved rank        " << cert.achieved_rank << " (facet needs " << cert.polytope_dimension - 1 << ")\n"
      << "tight                " << (cert.tight ? "Yes" : "No") << '\n';
  return rec;
}

RunRecord cmd_ntv(const Options& o, std::ostream& out) {
  const InequalityCoeffs c = coeffs_from(o);
  const OptimizerConfig cfg = config_from(o, OptimizerConfig::gh_defaults());
  const NtvResult r = compute_ntv(c, cfg);
  RunRecord rec;
  rec.command = "ntv";
  rec.parameters = coeff_params(c);
  rec.parameters["restarts"] = cfg.restarts;
  rec.seed = cfg.seed;
  rec.result = {{"visibility", r.visibility},
                {"quantum_value", r.quantum_value},
                {"noise_value", r.noise_value},
                {"optimum", to_json(r.optimum)}};
  out << "critical visibility  " << fmt(r.visibility) << '\n'
      << "G_Q                  " << fmt(r.quantum_value) << '\n'
      << "G_N                  " << fmt(r.noise_value) << '\n';
  print_opt_summary(out, r.optimum);
  out << "state H:\n";
  print_matrix(out, r.optimum.state.h());
  return rec;
}

RunRecord cmd_verify_appendix(const Options& o, std::ostream& out) {
  const AppendixReport rep = verify_appendix(o.k);
  RunRecord rec;
  rec.command = "verify-appendix";
  rec.parameters = {{"k", o.k}};
  rec.result = to_json(rep);
  out << "printed H norm " << fmt(rep.state_norm, 8) << '\n' << "basis  orthonormality  vs re-derived\n";
  for (const auto& b : rep.bases) {
    out << b.name << "    " << fmt(b.orthonormality, 3) << "        " << fmt(b.rederived_deviation, 3) << '\n';
  }
  out << "constraint       printed        re-derived\n";
  for (const auto& c : rep.constraints) {
    out << c.label << "   " << fmt(c.printed, 3) << "   " << fmt(c.rederived, 3) << '\n';
  }
  out << "success printed    " << fmt(rep.printed_success, 8) << '\n'
      << "success re-derived " << fmt(rep.rederived_success, 8) << '\n'
      << "reported           " << fmt(rep.reported_success, 8) << '\n';
  if (rep.inconsistent_bases.empty()) {
    out << "all printed bases orthonormal within 1e-4\n";
  } else {
    out << "printed bases not orthonormal:";
    for (const auto& n : rep.inconsistent_bases) out << ' ' << n;
    out << '\n';
  }
  return rec;
}

RunRecord cmd_table(const Options& o, std::ostream& out, TableOutcome& outcome) {
  const TableName name = parse_table_name(o.table);
  if (o.format != "csv" && o.format != "json") throw std::invalid_argument("--format must be csv or json");
  const bool stochastic = name != TableName::TIGHT;
  OptimizerConfig cfg;
  if (stochastic) {
    const OptimizerConfig base = (name == TableName::I || name == TableName::II) ? OptimizerConfig::sp_defaults()
                                                                                   : OptimizerConfig::gh_defaults();
    cfg = config_from(o, base);
  }
  std::vector<TableRow> rows;
  for (const auto& cell : table_cells(name)) rows.push_back(run_table_cell(name, cell, cfg));
  outcome.completed = std::all_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.error.empty(); });
  outcome.within = std::all_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.within_tolerance; });

  RunRecord rec;
  rec.command = "table";
  rec.parameters = {{"name", to_string(name)}, {"format", o.format}};
  if (stochastic) {
    rec.parameters["restarts"] = cfg.restarts;
    rec.seed = cfg.seed;
  }
  rec.result = to_json(name, rows);
  if (o.format == "csv") {
    outcome.csv = rows_to_csv(name, rows);
    out << outcome.csv;
  } else {
    out << rec.result.dump(2) << '\n';
  }
  return rec;
}

void add_coeff_options(CLI::App* sub, Options& o) {
  sub->add_option("--x", o.x, "coefficient x (integer, fraction or decimal)")->capture_default_str();
  sub->add_option("--y", o.y, "coefficient y")->capture_default_str();
  sub->add_option("--z", o.z, "coefficient z")->capture_default_str();
}

void add_search_options(CLI::App* sub, Options& o) {
  sub->add_option("--restarts", o.restarts, "multistart restarts");
  sub->add_option("--seed", o.seed, "base seed; restart r uses seed + r")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Hardy-paradox chains, generalized Hardy inequalities and their local polytope"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out-dir", o.out_dir, "directory for run records")->capture_default_str();
  app.add_flag("--no-save", o.no_save, "do not write a run record");

  auto* sp = app.add_subcommand("sp", "maximize the nonlocal-event probability SP_{k,d}");
  sp->add_option("--k", o.k, "settings per party")->required();
  sp->add_option("--d", o.d, "outcomes per setting")->required();
  sp->add_option("--anchor", o.anchor, "computational pair, e.g. bob_less_alice:2 or alice_less_bob:3");
  add_search_options(sp, o);

  auto* gh = app.add_subcommand("gh", "maximize GH_{k,d}(x,y,z) over quantum states and measurements");
  gh->add_option("--k", o.k, "settings per party")->required();
  gh->add_option("--d", o.d, "outcomes per setting")->required();
  add_coeff_options(gh, o);
  gh->add_flag("--mes", o.mes, "restrict to the maximally entangled state");
  add_search_options(gh, o);

  auto* tight = app.add_subcommand("tightness", "decide whether GH_{k,d}(x,y,z) <= 0 is a facet");
  tight->add_option("--k", o.k, "settings per party")->required();
  tight->add_option("--d", o.d, "outcomes per setting")->required();
  add_coeff_options(tight, o);
  tight->add_option("--cap", o.cap, "maximum number of vertices to enumerate")->capture_default_str();

  auto* ntv = app.add_subcommand("ntv", "critical white-noise visibility of GH_{k,d}(x,y,z)");
  ntv->add_option("--k", o.k, "settings per party")->required();
  ntv->add_option("--d", o.d, "outcomes per setting")->required();
  add_coeff_options(ntv, o);
  add_search_options(ntv, o);

  auto* appendix = app.add_subcommand("verify-appendix", "check the embedded optimal qutrit measurements");
  appendix->add_option("--k", o.k, "3, 4 or 5")->required()->check(CLI::IsMember({3, 4, 5}));

  auto* table = app.add_subcommand("table", "reproduce a reference table");
  table->add_option("--name", o.table, "I, II, MV, TIGHT or NTV")->required();
  table->add_option("--format", o.format, "csv or json")->capture_default_str();
  table->add_flag("--check", o.check, "exit 1 when a cell misses its tolerance");
  add_search_options(table, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidArguments;
  }

  const auto start = std::chrono::steady_clock::now();
  const auto wall_start = std::chrono::system_clock::now();
  TableOutcome table_outcome;
  RunRecord rec;
  try {
    if (sp->parsed()) rec = cmd_sp(o, out);
    else if (gh->parsed()) rec = cmd_gh(o, out);
    else if (tight->parsed()) rec = cmd_tightness(o, out);
    else if (ntv->parsed()) rec = cmd_ntv(o, out);
    else if (appendix->parsed()) rec = cmd_verify_appendix(o, out);
    else rec = cmd_table(o, out, table_outcome);
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const NoViolationError& e) {
    err << "error: " << e.what() << '\n';
    return kNoViolation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kOptimizerFailure;
  }
  rec.timestamp = utc_timestamp(wall_start);
  rec.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!o.no_save) {
    try {
      const auto path = write_record(rec, o.out_dir);
      err << "record: " << path.string() << '\n';
      if (!table_outcome.csv.empty()) {
        auto csv = path;
        csv.replace_extension(".csv");
        write_text_atomic(csv, table_outcome.csv);
      }
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kOptimizerFailure;
    }
  }

  if (!table_outcome.completed) {
    err << "error: some table cells failed to compute\n";
    return kOptimizerFailure;
  }
  if (o.check && !table_outcome.within) {
    err << "check failed: some cells are outside tolerance " << fmt(table_tolerance(parse_table_name(o.table)), 3)
        << '\n';
    return kCheckFailed;
  }
  return kOk;
}

}  // namespace hardylab::cli
