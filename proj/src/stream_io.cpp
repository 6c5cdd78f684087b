#include "expsmooth/stream_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>
#include <system_error>

#include "json.hpp"

namespace expsmooth {

namespace {

using nlohmann::json;

double parse_finite(std::string_view field, const char* name, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(std::string("field \"") + name + "\" is not a number: \"" +
                         std::string(field) + "\"",
                     line);
  }
  if (!std::isfinite(value)) {
    throw ParseError(std::string("field \"") + name + "\" must be finite, got \"" +
                         std::string(field) + "\"",
                     line);
  }
  return value;
}

// getline with CRLF tolerance; returns false at end of stream.
bool read_line(std::istream& in, std::string& out) {
  if (!std::getline(in, out)) {
    return false;
  }
  if (!out.empty() && out.back() == '\r') {
    out.pop_back();
  }
  return true;
}

double json_number(const json& object, const char* name, std::size_t line) {
  if (!object.contains(name)) {
    throw ParseError(std::string("missing field \"") + name + "\"", line);
  }
  const json& field = object.at(name);
  if (!field.is_number()) {
    throw ParseError(std::string("field \"") + name + "\" must be numeric", line);
  }
  const double value = field.get<double>();
  if (!std::isfinite(value)) {
    throw ParseError(std::string("field \"") + name + "\" must be finite", line);
  }
  return value;
}

json parse_json_line(const std::string& text, std::size_t line) {
  try {
    json object = json::parse(text);
    if (!object.is_object()) {
      throw ParseError("expected a JSON object", line);
    }
    return object;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line);
  }
}

void write_checked(std::ostream& out, const std::string& text) {
  out << text;
  if (out.fail()) {
    throw Error("write to output stream failed");
  }
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

CsvSeriesReader::CsvSeriesReader(std::istream& in) : in_(&in) {
  std::string header;
  if (!read_line(*in_, header)) {
    throw ParseError("missing header line; expected \"t,x\"", 1);
  }
  line_ = 1;
  if (header != "t,x") {
    throw ParseError("bad header \"" + header + "\"; expected \"t,x\"", 1);
  }
}

std::optional<SeriesRecord> CsvSeriesReader::next() {
  std::string text;
  if (!read_line(*in_, text)) {
    return std::nullopt;
  }
  ++line_;
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
    throw ParseError("expected exactly two comma-separated fields, got \"" + text + "\"",
                     line_);
  }
  const std::string_view view(text);
  SeriesRecord record;
  record.t = parse_finite(view.substr(0, comma), "t", line_);
  record.x = parse_finite(view.substr(comma + 1), "x", line_);
  record.line = line_;
  return record;
}

std::optional<SeriesRecord> JsonlSeriesReader::next() {
  std::string text;
  if (!read_line(*in_, text)) {
    return std::nullopt;
  }
  ++line_;
  const json object = parse_json_line(text, line_);
  SeriesRecord record;
  record.t = json_number(object, "t", line_);
  record.x = json_number(object, "x", line_);
  record.line = line_;
  return record;
}

RecordWriter::RecordWriter(std::ostream& out, Format format, bool include_weight)
    : out_(&out), format_(format), include_weight_(include_weight) {
  if (format_ == Format::Csv) {
    write_checked(*out_, include_weight_ ? "t,xhat,weight\n" : "t,xhat\n");
  }
}

void RecordWriter::write(const OutputRecord& record) {
  std::string text;
  if (format_ == Format::Csv) {
    text = format_double(record.t) + "," + format_double(record.x_hat);
    if (include_weight_) {
      text += "," + format_double(record.weight);
    }
  } else {
    text = "{\"t\":" + format_double(record.t) + ",\"xhat\":" + format_double(record.x_hat);
    if (include_weight_) {
      text += ",\"weight\":" + format_double(record.weight);
    }
    text += "}";
  }
  text += "\n";
  write_checked(*out_, text);
}

OutputReader::OutputReader(std::istream& in, Format format) : in_(&in), format_(format) {
  if (format_ == Format::Csv) {
    std::string header;
    if (!read_line(*in_, header)) {
      throw ParseError("missing header line; expected \"t,xhat[,weight]\"", 1);
    }
    line_ = 1;
    if (header == "t,xhat") {
      has_weight_ = false;
    } else if (header == "t,xhat,weight") {
      has_weight_ = true;
    } else {
      throw ParseError("bad header \"" + header + "\"; expected \"t,xhat[,weight]\"", 1);
    }
  }
}

std::optional<OutputRecord> OutputReader::next() {
  std::string text;
  if (!read_line(*in_, text)) {
    return std::nullopt;
  }
  ++line_;
  OutputRecord record;
  if (format_ == Format::Csv) {
    const std::size_t first = text.find(',');
    if (first == std::string::npos) {
      throw ParseError("expected comma-separated fields, got \"" + text + "\"", line_);
    }
    const std::size_t second = text.find(',', first + 1);
    const std::string_view view(text);
    if (has_weight_) {
      if (second == std::string::npos) {
        throw ParseError("expected three fields, got \"" + text + "\"", line_);
      }
      record.weight = parse_finite(view.substr(second + 1), "weight", line_);
    } else if (second != std::string::npos) {
      throw ParseError("expected two fields, got \"" + text + "\"", line_);
    }
    const std::size_t t_end = first;
    const std::size_t x_end = has_weight_ ? second : text.size();
    record.t = parse_finite(view.substr(0, t_end), "t", line_);
    record.x_hat = parse_finite(view.substr(first + 1, x_end - first - 1), "xhat", line_);
  } else {
    const json object = parse_json_line(text, line_);
    record.t = json_number(object, "t", line_);
    record.x_hat = json_number(object, "xhat", line_);
    if (object.contains("weight")) {
      record.weight = json_number(object, "weight", line_);
    }
  }
  return record;
}

std::string to_csv(const CalibrationReport& r) {
  return "tau,gap,alpha,effective_n,window,half_life,variance_ratio\n" +
         format_double(r.tau) + "," + format_double(r.gap) + "," + format_double(r.alpha) +
         "," + format_double(r.effective_n) + "," + format_double(r.window) + "," +
         format_double(r.half_life) + "," + format_double(r.variance_ratio) + "\n";
}

std::string to_csv(const MomentReport& r) {
  return "empirical_mean,empirical_variance,predicted_mean,predicted_variance,alpha,"
         "samples_used\n" +
         format_double(r.empirical_mean) + "," + format_double(r.empirical_variance) +
         "," + format_double(r.predicted_mean) + "," + format_double(r.predicted_variance) +
         "," + format_double(r.alpha) + "," + std::to_string(r.samples_used) + "\n";
}

std::string to_csv(const StressReport& r) {
  return "alpha,steps,max_rel_error_v1,max_rel_error_v2,max_rel_error_v2c,max_tilde_w,"
         "max_rel_error_tilde_w,min_bar_w,max_bar_w\n" +
         format_double(r.alpha) + "," + std::to_string(r.steps) + "," +
         format_double(r.max_rel_error_v1) + "," + format_double(r.max_rel_error_v2) +
         "," + format_double(r.max_rel_error_v2c) + "," + format_double(r.max_tilde_w) +
         "," + format_double(r.max_rel_error_tilde_w) + "," + format_double(r.min_bar_w) +
         "," + format_double(r.max_bar_w) + "\n";
}

std::string to_json(const CalibrationReport& r) {
  return "{\"tau\":" + format_double(r.tau) + ",\"gap\":" + format_double(r.gap) +
         ",\"alpha\":" + format_double(r.alpha) +
         ",\"effective_n\":" + format_double(r.effective_n) +
         ",\"window\":" + format_double(r.window) +
         ",\"half_life\":" + format_double(r.half_life) +
         ",\"variance_ratio\":" + format_double(r.variance_ratio) + "}\n";
}

std::string to_json(const MomentReport& r) {
  return "{\"empirical_mean\":" + format_double(r.empirical_mean) +
         ",\"empirical_variance\":" + format_double(r.empirical_variance) +
         ",\"predicted_mean\":" + format_double(r.predicted_mean) +
         ",\"predicted_variance\":" + format_double(r.predicted_variance) +
         ",\"alpha\":" + format_double(r.alpha) +
         ",\"samples_used\":" + std::to_string(r.samples_used) + "}\n";
}

std::string to_json(const StressReport& r) {
  return "{\"alpha\":" + format_double(r.alpha) + ",\"steps\":" + std::to_string(r.steps) +
         ",\"max_rel_error_v1\":" + format_double(r.max_rel_error_v1) +
         ",\"max_rel_error_v2\":" + format_double(r.max_rel_error_v2) +
         ",\"max_rel_error_v2c\":" + format_double(r.max_rel_error_v2c) +
         ",\"max_tilde_w\":" + format_double(r.max_tilde_w) +
         ",\"max_rel_error_tilde_w\":" + format_double(r.max_rel_error_tilde_w) +
         ",\"min_bar_w\":" + format_double(r.min_bar_w) +
         ",\"max_bar_w\":" + format_double(r.max_bar_w) + "}\n";
}

}  // namespace expsmooth
