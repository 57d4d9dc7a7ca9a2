#pragma once

// Sweeps behind the `table` command: the cells of each reference table, the
// printed value for each cell, and side-by-side comparison rows.

#include "hardylab/inequality.hpp"
#include "hardylab/json_io.hpp"
#include "hardylab/optimizer.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hardylab {

enum class TableName { I, II, MV, TIGHT, NTV };

/// Accepts "I", "II", "MV", "TIGHT", "NTV" (case-insensitive).
TableName parse_table_name(std::string_view text);
std::string to_string(TableName name);

struct TableCell {
  int k = 2;
  int d = 2;
  std::optional<Rational> x, y, z;  // absent for the SP tables
  std::string restriction;          // "QT", "MES" or empty
  double reference = 0.0;           // TIGHT: 1 for a printed "Yes"
};

struct TableRow {
  TableCell cell;
  double computed = 0.0;  // TIGHT: 1 when tight, 0 otherwise
  double abs_deviation = 0.0;
  bool within_tolerance = false;
  double wall_time_seconds = 0.0;
  std::string error;      // non-empty when the cell failed to compute
  Json detail;            // optimizer summary or tightness certificate
};

std::vector<TableCell> table_cells(TableName name);
/// Acceptance tolerance on |computed - reference|; 0 for TIGHT.
double table_tolerance(TableName name);

/// Computes one cell; exceptions become `error` and the row is out of tolerance.
TableRow run_table_cell(TableName name, const TableCell& cell, const OptimizerConfig& cfg);

std::string rows_to_csv(TableName name, const std::vector<TableRow>& rows);
Json to_json(TableName name, const std::vector<TableRow>& rows);

}  // namespace hardylab
