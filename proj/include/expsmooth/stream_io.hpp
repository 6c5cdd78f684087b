#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "expsmooth/calibration.hpp"
#include "expsmooth/errors.hpp"
#include "expsmooth/stats.hpp"

namespace expsmooth {

// A parsed observation plus its 1-based source line for diagnostics.
struct SeriesRecord {
  double t = 0.0;
  double x = 0.0;
  std::size_t line = 0;
};

struct OutputRecord {
  double t = 0.0;
  double x_hat = 0.0;
  double weight = 0.0;
};

enum class Format { Csv, Jsonl };

// Shortest decimal rendering that parses back to the identical double.
std::string format_double(double value);

// Reads `t,x` CSV: exact header, one record per line, `.` radix point,
// finite values only. Constant memory in the stream length.
class CsvSeriesReader {
public:
  explicit CsvSeriesReader(std::istream& in);

  std::optional<SeriesRecord> next();

private:
  std::istream* in_;
  std::size_t line_ = 0;
};

// Reads one JSON object per line with numeric "t" and "x"; other fields are
// ignored.
class JsonlSeriesReader {
public:
  explicit JsonlSeriesReader(std::istream& in) : in_(&in) {}

  std::optional<SeriesRecord> next();

private:
  std::istream* in_;
  std::size_t line_ = 0;
};

// Emits output records as CSV (`t,xhat[,weight]`, header written up front)
// or JSONL.
class RecordWriter {
public:
  RecordWriter(std::ostream& out, Format format, bool include_weight);

  void write(const OutputRecord& record);

private:
  std::ostream* out_;
  Format format_;
  bool include_weight_;
};

// Reads the writer's output back; the weight column is optional.
class OutputReader {
public:
  OutputReader(std::istream& in, Format format);

  std::optional<OutputRecord> next();

private:
  std::istream* in_;
  Format format_;
  std::size_t line_ = 0;
  bool has_weight_ = false;
};

std::string to_csv(const CalibrationReport& report);
std::string to_csv(const MomentReport& report);
std::string to_csv(const StressReport& report);

std::string to_json(const CalibrationReport& report);
std::string to_json(const MomentReport& report);
std::string to_json(const StressReport& report);

}  // namespace expsmooth
