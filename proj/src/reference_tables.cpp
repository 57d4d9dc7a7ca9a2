#include "hardylab/reference_tables.hpp"

#include "hardylab/polytope.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace hardylab {

namespace {

TableCell sp_cell(int k, int d, double ref) { return TableCell{k, d, {}, {}, {}, "", ref}; }

TableCell coeff_cell(int k, int d, int x, int y, int z, std::string restriction, double ref) {
  return TableCell{k, d, Rational(x), Rational(y), Rational(z), std::move(restriction), ref};
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string verdict(double v) { return v > 0.5 ? "Yes" : "No"; }

Json summary(const OptResult& r) {
  return {{"value", r.value}, {"residual", r.residual}, {"restarts_used", r.restarts_used},
          {"seed", r.seed},   {"hits", r.hits()},       {"spread", r.spread()}};
}

InequalityCoeffs coeffs_of(const TableCell& c) { return InequalityCoeffs(c.k, c.d, *c.x, *c.y, *c.z); }

}  // namespace

TableName parse_table_name(std::string_view text) {
  std::string up(text);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (up == "I") return TableName::I;
  if (up == "II") return TableName::II;
  if (up == "MV") return TableName::MV;
  if (up == "TIGHT") return TableName::TIGHT;
  if (up == "NTV") return TableName::NTV;
  throw std::invalid_argument("unknown table '" + std::string(text) + "' (expected I, II, MV, TIGHT or NTV)");
}

std::string to_string(TableName name) {
  switch (name) {
    case TableName::I: return "I";
    case TableName::II: return "II";
    case TableName::MV: return "MV";
    case TableName::TIGHT: return "TIGHT";
    case TableName::NTV: return "NTV";
  }
  return "?";
}

std::vector<TableCell> table_cells(TableName name) {
  switch (name) {
    case TableName::I:
      return {sp_cell(2, 2, 0.09017), sp_cell(3, 2, 0.17455), sp_cell(4, 2, 0.23126), sp_cell(5, 2, 0.27088),
              sp_cell(6, 2, 0.29995)};
    case TableName::II:
      return {sp_cell(2, 3, 0.141327), sp_cell(3, 3, 0.267769), sp_cell(4, 3, 0.348158), sp_cell(5, 3, 0.40184)};
    case TableName::MV: {
      const double qt111[] = {0.304951, 0.429015, 0.491126, 0.527868};
      const double mes111[] = {0.290978, 0.414408, 0.47795, 0.516216};
      const double qt211[] = {0.268075, 0.393554, 0.460468, 0.501445};
      const double mes211[] = {0.240055, 0.364543, 0.434436, 0.478489};
      std::vector<TableCell> cells;
      for (int k = 2; k <= 5; ++k) cells.push_back(coeff_cell(k, 3, 1, 1, 1, "QT", qt111[k - 2]));
      for (int k = 2; k <= 5; ++k) cells.push_back(coeff_cell(k, 3, 1, 1, 1, "MES", mes111[k - 2]));
      for (int k = 2; k <= 5; ++k) cells.push_back(coeff_cell(k, 3, 2, 1, 1, "QT", qt211[k - 2]));
      for (int k = 2; k <= 5; ++k) cells.push_back(coeff_cell(k, 3, 2, 1, 1, "MES", mes211[k - 2]));
      return cells;
    }
    case TableName::TIGHT:
      return {coeff_cell(2, 2, 1, 1, 1, "", 1), coeff_cell(3, 3, 2, 1, 1, "", 1), coeff_cell(4, 3, 1, 1, 1, "", 1),
              coeff_cell(5, 3, 1, 1, 1, "", 1), coeff_cell(6, 3, 1, 1, 1, "", 1), coeff_cell(3, 4, 2, 1, 1, "", 1),
              coeff_cell(4, 4, 1, 1, 1, "", 1), coeff_cell(5, 4, 1, 1, 1, "", 1), coeff_cell(4, 5, 1, 1, 1, "", 1)};
    case TableName::NTV:
      return {coeff_cell(3, 2, 1, 1, 1, "", 0.7698), coeff_cell(4, 2, 1, 1, 1, "", 0.811794),
              coeff_cell(5, 2, 1, 1, 1, "", 0.8411697)};
  }
  return {};
}

double table_tolerance(TableName name) {
  switch (name) {
    case TableName::I: return 1e-4;
    case TableName::II: return 1e-3;
    case TableName::MV: return 2e-3;
    case TableName::TIGHT: return 0.0;
    case TableName::NTV: return 1e-4;
  }
  return 0.0;
}

TableRow run_table_cell(TableName name, const TableCell& cell, const OptimizerConfig& cfg) {
  TableRow row;
  row.cell = cell;
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (name) {
      case TableName::I: {
        const OptResult r = maximize_sp_qubit(cell.k, cfg);
        row.computed = r.value;
        row.detail = summary(r);
        break;
      }
      case TableName::II: {
        const OptResult r = maximize_sp(cell.k, cell.d, Anchor::default_for(cell.k), cfg);
        row.computed = r.value;
        row.detail = summary(r);
        break;
      }
      case TableName::MV: {
        const auto restriction = cell.restriction == "MES" ? StateRestriction::mes_only : StateRestriction::any_state;
        const OptResult r = maximize_gh(coeffs_of(cell), restriction, cfg);
        row.computed = r.value;
        row.detail = summary(r);
        break;
      }
      case TableName::TIGHT: {
        const TightnessCertificate cert = is_tight(coeffs_of(cell));
        row.computed = cert.tight ? 1.0 : 0.0;
        row.detail = to_json(cert);
        break;
      }
      case TableName::NTV: {
        const NtvResult r = compute_ntv(coeffs_of(cell), cfg);
        row.computed = r.visibility;
        row.detail = summary(r.optimum);
        row.detail["quantum_value"] = r.quantum_value;
        row.detail["noise_value"] = r.noise_value;
        break;
      }
    }
    row.abs_deviation = std::abs(row.computed - cell.reference);
    row.within_tolerance = row.abs_deviation <= table_tolerance(name);
  } catch (const std::exception& e) {
    row.error = e.what();
    row.computed = std::nan("");
    row.abs_deviation = std::nan("");
    row.within_tolerance = false;
  }
  row.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::string rows_to_csv(TableName name, const std::vector<TableRow>& rows) {
  std::ostringstream out;
  out << "k,d,x,y,z,restriction,computed,reference,abs_deviation,within_tolerance,wall_time_seconds,error\r\n";
  const bool tight = name == TableName::TIGHT;
  for (const auto& r : rows) {
    const auto& c = r.cell;
    auto coeff = [](const std::optional<Rational>& q) { return q ? to_string(*q) : std::string(); };
    std::string computed, reference, deviation;
    if (tight) {
      computed = r.error.empty() ? verdict(r.computed) : "";
      reference = verdict(c.reference);
      deviation = r.error.empty() ? format_number(r.abs_deviation) : "";
    } else {
      computed = r.error.empty() ? format_number(r.computed) : "";
      reference = format_number(c.reference);
      deviation = r.error.empty() ? format_number(r.abs_deviation) : "";
    }
    out << c.k << ',' << c.d << ',' << coeff(c.x) << ',' << coeff(c.y) << ',' << coeff(c.z) << ','
        << csv_field(c.restriction) << ',' << computed << ',' << reference << ',' << deviation << ','
        << (r.within_tolerance ? "true" : "false") << ',' << format_number(r.wall_time_seconds) << ','
        << csv_field(r.error) << "\r\n";
  }
  return out.str();
}

Json to_json(TableName name, const std::vector<TableRow>& rows) {
  Json arr = Json::array();
  const bool tight = name == TableName::TIGHT;
  for (const auto& r : rows) {
    const auto& c = r.cell;
    Json j = {{"k", c.k}, {"d", c.d}, {"restriction", c.restriction}};
    if (c.x) {
      j["x"] = to_string(*c.x);
      j["y"] = to_string(*c.y);
      j["z"] = to_string(*c.z);
    }
    if (tight) {
      j["computed"] = r.error.empty() ? Json(verdict(r.computed)) : Json(nullptr);
      j["reference"] = verdict(c.reference);
    } else {
      j["computed"] = r.error.empty() ? Json(r.computed) : Json(nullptr);
      j["reference"] = c.reference;
    }
    j["abs_deviation"] = r.error.empty() ? Json(r.abs_deviation) : Json(nullptr);
    j["within_tolerance"] = r.within_tolerance;
    j["wall_time_seconds"] = r.wall_time_seconds;
    j["error"] = r.error;
    j["detail"] = r.detail;
    arr.push_back(std::move(j));
  }
  return {{"table", to_string(name)}, {"tolerance", table_tolerance(name)}, {"rows", std::move(arr)}};
}

}  // namespace hardylab
