#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "ggsel/errors.hpp"
#include "ggsel/io.hpp"

namespace ggsel::io {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) throw DataError("short write to '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (nl == text.size()) break;
    pos = nl + 1;
  }
  return lines;
}

double parse_age(const std::string& field, long long line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v) || v < 0.0) {
    throw DataError("row " + std::to_string(line_no) + ": bad age_at_death '" +
                    field + "'");
  }
  return v;
}

}  // namespace

IngestResult ingest(const std::string& path, const AnalysisConfig& cfg) {
  cfg.ages.validate();
  std::string bytes = read_file(path);

  IngestResult out;
  out.path = path;
  out.digest = fnv1a64_hex(bytes);

  // Strip a UTF-8 BOM if present.
  if (bytes.rfind("\xEF\xBB\xBF", 0) == 0) bytes.erase(0, 3);
  const std::vector<std::string> lines = split_lines(bytes);
  if (lines.empty() || lines[0].empty()) {
    throw DataError("'" + path + "': missing header line");
  }
  if (lines[0] != "id,age_at_death") {
    throw DataError("'" + path + "': header must be 'id,age_at_death', got '" +
                    lines[0] + "'");
  }

  std::unordered_set<std::string> seen_ids;
  out.min_age = std::numeric_limits<double>::infinity();
  out.max_age = -std::numeric_limits<double>::infinity();
  out.sample.truncation = cfg.ages.truncation_offset();

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    const long long line_no = static_cast<long long>(i) + 1;

    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw DataError("row " + std::to_string(line_no) +
                      ": expected exactly two comma-separated fields");
    }
    const std::string id = line.substr(0, comma);
    if (id.empty()) {
      throw DataError("row " + std::to_string(line_no) + ": empty id");
    }
    if (!seen_ids.insert(id).second) {
      throw DataError("row " + std::to_string(line_no) + ": duplicate id '" + id + "'");
    }
    const double age = parse_age(line.substr(comma + 1), line_no);
    ++out.n_rows;

    if (age <= cfg.ages.truncation_age) {
      out.rejected_rows.push_back(line_no);
      continue;
    }
    out.sample.lifespans.push_back(cfg.ages.to_years_since_origin(age));
    out.min_age = std::min(out.min_age, age);
    out.max_age = std::max(out.max_age, age);
  }

  if (out.sample.lifespans.empty()) {
    throw DataError("'" + path + "': no usable rows (" +
                    std::to_string(out.rejected_rows.size()) +
                    " rejected at or below the truncation age)");
  }
  out.sample.validate();
  return out;
}

}  // namespace ggsel::io
