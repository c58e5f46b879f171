// Copyright 2026 The fastrpca Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fastrpca/matrix_io.h"

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "fastrpca/errors.h"
#include "json.hpp"

namespace fastrpca {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr char kMagic[4] = {'R', 'P', 'C', 'A'};
constexpr std::uint32_t kRawVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "raw-binary I/O assumes a little-endian host");

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(path.string() + ": read failed");
  return ss.str();
}

void WriteAll(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) throw IoError(path.string() + ": write failed");
}

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double ParseDouble(const std::string& token, const fs::path& path,
                   std::size_t line) {
  const std::string t = Trim(token);
  if (t.empty()) throw ParseError(path.string(), line, "empty field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) {
    throw ParseError(path.string(), line, "not a number: '" + t + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError(path.string(), line, "non-finite value: '" + t + "'");
  }
  return v;
}

long long ParseCount(const std::string& token, const fs::path& path,
                     std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(token.c_str(), &end, 10);
  if (token.empty() || end != token.c_str() + token.size() || errno != 0 ||
      v < 0) {
    throw ParseError(path.string(), line, "bad integer: '" + token + "'");
  }
  return v;
}

std::vector<std::string> Tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

MatrixFile ReadMatrixMarket(const fs::path& path) {
  const std::vector<std::string> lines = SplitLines(ReadAll(path));
  if (lines.empty()) throw ParseError(path.string(), 1, "empty file");
  std::vector<std::string> header = Tokens(lines[0]);
  for (auto& h : header) {
    std::transform(h.begin(), h.end(), h.begin(),
                   [](unsigned char c) { return std::tolower(c); });
  }
  if (header.size() != 5 || header[0] != "%%matrixmarket" ||
      header[1] != "matrix") {
    throw ParseError(path.string(), 1, "malformed Matrix Market header");
  }
  const bool coordinate = header[2] == "coordinate";
  if (!coordinate && header[2] != "array") {
    throw ParseError(path.string(), 1, "unknown layout '" + header[2] + "'");
  }
  if (header[3] != "real" && header[3] != "integer" && header[3] != "double") {
    throw ParseError(path.string(), 1, "unsupported field '" + header[3] + "'");
  }
  if (header[4] != "general") {
    throw ParseError(path.string(), 1,
                     "unsupported symmetry '" + header[4] + "'");
  }

  std::size_t k = 1;
  auto skip_comments = [&] {
    while (k < lines.size() &&
           (Trim(lines[k]).empty() || Trim(lines[k])[0] == '%')) {
      ++k;
    }
  };
  skip_comments();
  if (k >= lines.size()) throw ParseError(path.string(), k + 1, "missing size line");
  const std::vector<std::string> size = Tokens(lines[k]);
  const std::size_t size_line = k + 1;
  if (size.size() != (coordinate ? 3u : 2u)) {
    throw ParseError(path.string(), size_line, "malformed size line");
  }
  const auto rows = static_cast<Index>(ParseCount(size[0], path, size_line));
  const auto cols = static_cast<Index>(ParseCount(size[1], path, size_line));
  ++k;

  if (coordinate) {
    const auto nnz =
        static_cast<std::size_t>(ParseCount(size[2], path, size_line));
    std::vector<Entry> entries;
    entries.reserve(nnz);
    std::set<std::pair<Index, Index>> seen;
    for (; k < lines.size(); ++k) {
      if (Trim(lines[k]).empty() || Trim(lines[k])[0] == '%') continue;
      const std::vector<std::string> t = Tokens(lines[k]);
      if (t.size() != 3) throw ParseError(path.string(), k + 1, "expected 'i j value'");
      const auto i = static_cast<Index>(ParseCount(t[0], path, k + 1));
      const auto j = static_cast<Index>(ParseCount(t[1], path, k + 1));
      if (i < 1 || i > rows || j < 1 || j > cols) {
        throw ParseError(path.string(), k + 1, "coordinate outside dims");
      }
      if (!seen.emplace(i, j).second) {
        throw ParseError(path.string(), k + 1, "duplicate coordinate");
      }
      entries.push_back({i - 1, j - 1, ParseDouble(t[2], path, k + 1)});
    }
    if (entries.size() != nnz) {
      throw ParseError(path.string(), size_line,
                       "declared " + std::to_string(nnz) + " entries, found " +
                           std::to_string(entries.size()));
    }
    return ObservedInstance{
        SupportedMatrix::FromTriplets(rows, cols, std::move(entries))};
  }

  // Array payload is column-major.
  std::vector<double> values(static_cast<std::size_t>(rows * cols));
  std::size_t n = 0;
  for (; k < lines.size(); ++k) {
    if (Trim(lines[k]).empty() || Trim(lines[k])[0] == '%') continue;
    if (n >= values.size()) {
      throw ParseError(path.string(), k + 1, "more values than declared dims");
    }
    const auto i = static_cast<Index>(n) % std::max<Index>(rows, 1);
    const auto j = static_cast<Index>(n) / std::max<Index>(rows, 1);
    values[static_cast<std::size_t>(i * cols + j)] =
        ParseDouble(lines[k], path, k + 1);
    ++n;
  }
  if (n != values.size()) {
    throw ParseError(path.string(), lines.size(),
                     "fewer values than declared dims");
  }
  return DenseMatrix(rows, cols, std::move(values));
}

DenseMatrix ReadCsv(const fs::path& path) {
  const std::vector<std::string> lines = SplitLines(ReadAll(path));
  std::vector<double> values;
  Index rows = 0;
  Index cols = -1;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (Trim(lines[k]).empty()) continue;
    Index count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = lines[k].find(',', start);
      const std::string field = lines[k].substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      values.push_back(ParseDouble(field, path, k + 1));
      ++count;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols >= 0 && count != cols) {
      throw ParseError(path.string(), k + 1,
                       "row has " + std::to_string(count) + " fields, expected " +
                           std::to_string(cols));
    }
    cols = count;
    ++rows;
  }
  return DenseMatrix(rows, std::max<Index>(cols, 0), std::move(values));
}

template <typename T>
T LoadLe(const std::string& data, std::size_t offset) {
  T v;
  std::memcpy(&v, data.data() + offset, sizeof(T));
  return v;
}

DenseMatrix ReadRaw(const fs::path& path) {
  const std::string data = ReadAll(path);
  constexpr std::size_t kHeader = 4 + 4 + 8 + 8;
  if (data.size() < kHeader) throw ParseError(path.string(), 0, "truncated header");
  if (std::memcmp(data.data(), kMagic, 4) != 0) {
    throw ParseError(path.string(), 0, "bad magic");
  }
  const auto version = LoadLe<std::uint32_t>(data, 4);
  if (version != kRawVersion) {
    throw ParseError(path.string(), 0,
                     "unsupported version " + std::to_string(version));
  }
  const auto rows = LoadLe<std::uint64_t>(data, 8);
  const auto cols = LoadLe<std::uint64_t>(data, 16);
  if (cols != 0 && rows > (data.size() / 8) / cols) {
    throw ParseError(path.string(), 0, "payload shorter than declared dims");
  }
  const std::size_t n = static_cast<std::size_t>(rows * cols);
  if (data.size() != kHeader + 8 * n) {
    throw ParseError(path.string(), 0, "payload size does not match dims");
  }
  std::vector<double> values(n);
  std::memcpy(values.data(), data.data() + kHeader, 8 * n);
  for (double v : values) {
    if (!std::isfinite(v)) throw ParseError(path.string(), 0, "non-finite value");
  }
  return DenseMatrix(static_cast<Index>(rows), static_cast<Index>(cols),
                     std::move(values));
}

std::string CsvText(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += FormatDouble(m(i, j));
    }
    out += '\n';
  }
  return out;
}

json OptionalNumber(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

json FitJson(const std::optional<LinearFit>& fit) {
  if (!fit) return nullptr;
  return json{{"slope", fit->slope},
              {"intercept", fit->intercept},
              {"r_squared", fit->r_squared}};
}

json RecordJson(const IterationRecord& rec) {
  return json{{"iter", rec.iter},
              {"loss", rec.loss},
              {"regularizer", rec.regularizer},
              {"factor_change", rec.factor_change},
              {"reconstruction_error", OptionalNumber(rec.reconstruction_error)},
              {"factor_distance", OptionalNumber(rec.factor_distance)},
              {"elapsed_seconds", rec.elapsed_seconds},
              {"work", rec.work},
              {"sparse_nnz", rec.sparse_nnz}};
}

}  // namespace

MatrixFormat ParseMatrixFormat(std::string_view name) {
  if (name == "mm" || name == "matrix-market" || name == "mtx") {
    return MatrixFormat::kMatrixMarket;
  }
  if (name == "csv") return MatrixFormat::kCsv;
  if (name == "raw" || name == "raw-binary") return MatrixFormat::kRawBinary;
  throw ConfigError("unknown matrix format '" + std::string(name) + "'");
}

MatrixFormat FormatFromPath(const fs::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".mtx" || ext == ".mm") return MatrixFormat::kMatrixMarket;
  if (ext == ".csv") return MatrixFormat::kCsv;
  if (ext == ".bin" || ext == ".rpca") return MatrixFormat::kRawBinary;
  throw ConfigError("cannot infer matrix format of " + path.string());
}

MatrixFile ReadMatrix(const fs::path& path, MatrixFormat format) {
  switch (format) {
    case MatrixFormat::kMatrixMarket:
      return ReadMatrixMarket(path);
    case MatrixFormat::kCsv:
      return ReadCsv(path);
    case MatrixFormat::kRawBinary:
      return ReadRaw(path);
  }
  throw ConfigError("unknown matrix format");
}

void WriteMatrix(const DenseMatrix& m, const fs::path& path,
                 MatrixFormat format) {
  switch (format) {
    case MatrixFormat::kMatrixMarket: {
      std::string out = "%%MatrixMarket matrix array real general\n";
      out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
      for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
          out += FormatDouble(m(i, j));
          out += '\n';
        }
      }
      WriteAll(path, out);
      return;
    }
    case MatrixFormat::kCsv:
      WriteAll(path, CsvText(m.values()));
      return;
    case MatrixFormat::kRawBinary: {
      std::string out(kMagic, 4);
      const std::uint32_t version = kRawVersion;
      const auto rows = static_cast<std::uint64_t>(m.rows());
      const auto cols = static_cast<std::uint64_t>(m.cols());
      out.append(reinterpret_cast<const char*>(&version), 4);
      out.append(reinterpret_cast<const char*>(&rows), 8);
      out.append(reinterpret_cast<const char*>(&cols), 8);
      out.append(reinterpret_cast<const char*>(m.values().data()),
                 static_cast<std::size_t>(m.values().size()) * 8);
      WriteAll(path, out);
      return;
    }
  }
}

void WriteSupported(const SupportedMatrix& s, const fs::path& path) {
  std::string out = "%%MatrixMarket matrix coordinate real general\n";
  out += std::to_string(s.rows()) + " " + std::to_string(s.cols()) + " " +
         std::to_string(s.nnz()) + "\n";
  for (const Entry& e : s.entries()) {
    out += std::to_string(e.row + 1) + " " + std::to_string(e.col + 1) + " " +
           FormatDouble(e.value) + "\n";
  }
  WriteAll(path, out);
}

void WriteFactors(const Factor& u, const Factor& v, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string() + ": " + ec.message());
  WriteAll(dir / "U.csv", CsvText(u));
  WriteAll(dir / "V.csv", CsvText(v));
}

std::pair<Factor, Factor> ReadFactors(const fs::path& dir) {
  Factor u = ReadCsv(dir / "U.csv").values();
  Factor v = ReadCsv(dir / "V.csv").values();
  if (u.cols() != v.cols()) {
    throw IoError(dir.string() + ": U.csv and V.csv disagree on rank");
  }
  return {std::move(u), std::move(v)};
}

void WriteTraceJsonl(const IterationTrace& trace, std::ostream& out) {
  for (const IterationRecord& rec : trace.records) {
    json line = RecordJson(rec);
    line["type"] = "iteration";
    out << line.dump() << '\n';
  }
  json summary{{"type", "summary"},
               {"iterations", trace.records.empty() ? 0 : trace.records.back().iter},
               {"stopped_early", trace.stopped_early},
               {"warnings", trace.warnings}};
  if (!trace.records.empty()) {
    const IterationRecord& last = trace.records.back();
    summary["final_loss"] = last.loss;
    summary["final_reconstruction_error"] =
        OptionalNumber(last.reconstruction_error);
    summary["final_factor_distance"] = OptionalNumber(last.factor_distance);
    summary["elapsed_seconds"] = last.elapsed_seconds;
  }
  out << summary.dump() << '\n';
}

void WriteReportJsonl(const ExperimentReport& report, std::ostream& out) {
  for (std::size_t k = 0; k < report.runs.size(); ++k) {
    for (const IterationRecord& rec : report.runs[k].trace.records) {
      json line{{"type", "iteration"}, {"run", k}, {"label", report.runs[k].label}};
      line.update(RecordJson(rec));
      out << line.dump() << '\n';
    }
  }
  json runs = json::array();
  for (const RunRecord& run : report.runs) {
    runs.push_back(json{{"label", run.label},
                        {"d1", run.d1},
                        {"d2", run.d2},
                        {"p", run.p},
                        {"observed", run.observed},
                        {"eta", run.eta},
                        {"iterations", run.trace.records.empty()
                                           ? 0
                                           : run.trace.records.back().iter},
                        {"final_error", OptionalNumber(run.final_error)},
                        {"final_distance", OptionalNumber(run.final_distance)},
                        {"wall_seconds", run.wall_seconds},
                        {"decay_fit", FitJson(run.decay_fit)},
                        {"geometric_decay", run.geometric_decay},
                        {"error", run.ok() ? json(nullptr) : json(run.error)}});
  }
  json spec{{"d1", report.spec.d1},
            {"d2", report.spec.d2},
            {"r", report.spec.r},
            {"alpha", report.spec.alpha},
            {"corruption_scale", report.spec.Scale()},
            {"seed", report.spec.seed}};
  json summary{{"type", "summary"},
               {"kind", report.kind},
               {"spec", spec},
               {"runs", runs},
               {"scaling_fit", FitJson(report.scaling_fit)},
               {"notes", report.notes}};
  out << summary.dump() << '\n';
}

}  // namespace fastrpca
