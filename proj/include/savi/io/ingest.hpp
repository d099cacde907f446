#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "savi/param.hpp"

namespace savi::io {

/// Record layouts. CSV lines are positional:
///   scalar  x
///   bit     0 | 1
///   block   n_a + n_b comma-separated bits, group a first
///   event   0 | 1 (group of the event, 1 = treatment)
/// JSON lines (detected by a leading '{') use {"x": ...} for scalar, bit and
/// event, and {"a": [...], "b": [...]} for blocks.
enum class Schema { scalar, bit, block, event };

Schema parse_schema(const std::string& name);

struct StreamRecord {
  std::size_t line = 0;
  double value = 0.0;           // scalar, bit, event
  TwoByTwoBlock block;          // block
};

/// Strict decimal/inf parse of a whole field; DataError with the line on failure.
double parse_number(std::string_view field, std::size_t line);

/// Splits on commas and trims ASCII whitespace around each field.
std::vector<std::string_view> split_fields(std::string_view line);

/// Pulls one record at a time; memory does not grow with stream length.
/// Blank lines are skipped. Throws DataError (with 1-based line) on malformed
/// rows and, at end of input, if no record was read.
class RecordReader {
 public:
  RecordReader(std::istream& in, Schema schema, int n_a = 0, int n_b = 0, bool header = false);

  std::optional<StreamRecord> next();
  std::size_t records() const noexcept { return records_; }

 private:
  StreamRecord parse_csv(std::string_view line) const;
  StreamRecord parse_json(std::string_view line) const;
  double check_value(double v) const;

  std::istream& in_;
  Schema schema_;
  int n_a_, n_b_;
  bool skip_header_;
  std::size_t line_no_ = 0;
  std::size_t records_ = 0;
  std::string buf_;
};

/// Labelled numeric row for batch inputs such as e-value panels:
/// "label,v1[,v2...]" or {"label": "...", "value": v} / {"label", "p", "e"}.
struct LabelledRow {
  std::size_t line = 0;
  std::string label;
  std::vector<double> values;
};

/// Reads every row; each must have exactly `width` numeric values.
std::vector<LabelledRow> read_labelled_rows(std::istream& in, std::size_t width, bool header = false);

/// Generic CSV table (first line is the header), for re-reading reports.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv_table(std::istream& in);

}  // namespace savi::io
