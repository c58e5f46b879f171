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

#include "fastrpca/frames.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "fastrpca/errors.h"

namespace fastrpca {
namespace {

namespace fs = std::filesystem;

struct Pgm {
  Index height = 0;
  Index width = 0;
  int maxval = 0;
  std::string pixels;
};

// Next whitespace-delimited header token, skipping '#' comments.
std::string HeaderToken(const std::string& data, std::size_t& pos) {
  while (pos < data.size()) {
    if (std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    } else if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) {
    ++pos;
  }
  return data.substr(start, pos - start);
}

long HeaderNumber(const std::string& data, std::size_t& pos,
                  const fs::path& path) {
  const std::string tok = HeaderToken(data, pos);
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
        return std::isdigit(c);
      })) {
    throw ParseError(path.string(), 0, "bad PGM header field '" + tok + "'");
  }
  return std::stol(tok);
}

Pgm ReadPgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  if (HeaderToken(data, pos) != "P5") {
    throw ParseError(path.string(), 0, "not a binary PGM (P5) file");
  }
  Pgm img;
  img.width = HeaderNumber(data, pos, path);
  img.height = HeaderNumber(data, pos, path);
  img.maxval = static_cast<int>(HeaderNumber(data, pos, path));
  if (img.width < 1 || img.height < 1) {
    throw ParseError(path.string(), 0, "empty image");
  }
  if (img.maxval < 1 || img.maxval > 255) {
    throw ParseError(path.string(), 0, "maxval must lie in [1, 255]");
  }
  if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos]))) {
    throw ParseError(path.string(), 0, "truncated PGM header");
  }
  ++pos;
  const auto n = static_cast<std::size_t>(img.width * img.height);
  if (data.size() - pos < n) throw ParseError(path.string(), 0, "truncated pixels");
  img.pixels = data.substr(pos, n);
  return img;
}

}  // namespace

FrameStack ReadFrames(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError(dir.string() + ": not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  if (files.empty()) throw IoError(dir.string() + ": no frames");
  std::sort(files.begin(), files.end());

  FrameStack out;
  std::vector<Pgm> images;
  images.reserve(files.size());
  for (const fs::path& f : files) {
    Pgm img = ReadPgm(f);
    if (!images.empty() &&
        (img.width != images.front().width || img.height != images.front().height)) {
      throw IoError(f.string() + ": frame size " + std::to_string(img.width) +
                    "x" + std::to_string(img.height) + " differs from " +
                    std::to_string(images.front().width) + "x" +
                    std::to_string(images.front().height));
    }
    out.names.push_back(f.filename().string());
    images.push_back(std::move(img));
  }
  out.height = images.front().height;
  out.width = images.front().width;
  RowMatrix stack(out.pixels(), static_cast<Index>(images.size()));
  for (Index k = 0; k < stack.cols(); ++k) {
    const Pgm& img = images[static_cast<std::size_t>(k)];
    for (Index i = 0; i < stack.rows(); ++i) {
      const auto byte = static_cast<unsigned char>(img.pixels[static_cast<std::size_t>(i)]);
      stack(i, k) = std::min(1.0, static_cast<double>(byte) / img.maxval);
    }
  }
  out.stack = DenseMatrix(std::move(stack));
  return out;
}

void WritePgm(const Eigen::Ref<const Eigen::VectorXd>& column, Index height,
              Index width, const fs::path& path) {
  if (column.size() != height * width) {
    throw InvalidArgument("frame column does not match h x w");
  }
  std::string data = "P5\n" + std::to_string(width) + " " +
                     std::to_string(height) + "\n255\n";
  for (Index i = 0; i < column.size(); ++i) {
    const double v = std::clamp(column(i), 0.0, 1.0);
    data += static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v)));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError(path.string() + ": write failed");
}

void WriteFrames(const DenseMatrix& m, Index height, Index width,
                 const std::vector<std::string>& names, const fs::path& dir) {
  if (static_cast<std::size_t>(m.cols()) != names.size()) {
    throw InvalidArgument("one name per frame column");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string() + ": " + ec.message());
  for (Index k = 0; k < m.cols(); ++k) {
    WritePgm(m.values().col(k), height, width,
             dir / names[static_cast<std::size_t>(k)]);
  }
}

}  // namespace fastrpca
