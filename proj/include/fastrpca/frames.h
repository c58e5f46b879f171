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

#ifndef FASTRPCA_FRAMES_H_
#define FASTRPCA_FRAMES_H_

#include <filesystem>
#include <string>
#include <vector>

#include "fastrpca/matrix.h"

namespace fastrpca {

// Frames of one size stacked as columns of an (h w) x n matrix. Pixel
// (row y, column x) of a frame lands at stack row y w + x, i.e. the raster
// order of the image file.
struct FrameStack {
  Index height = 0;
  Index width = 0;
  std::vector<std::string> names;  // file names, sorted
  DenseMatrix stack;               // values in [0, 1]
  int maxval = 255;

  Index frames() const { return stack.cols(); }
  Index pixels() const { return height * width; }
};

// Reads every regular file in `dir` (sorted by name) as binary PGM (P5,
// maxval <= 255). Throws IoError/ParseError naming the offending file.
FrameStack ReadFrames(const std::filesystem::path& dir);

// One P5 image from a (h w)-vector in [0, 1]; values are clamped then
// rounded to the nearest of 0..255.
void WritePgm(const Eigen::Ref<const Eigen::VectorXd>& column, Index height,
              Index width, const std::filesystem::path& path);

// Writes column k of `m` to `dir`/`names[k]`.
void WriteFrames(const DenseMatrix& m, Index height, Index width,
                 const std::vector<std::string>& names,
                 const std::filesystem::path& dir);

}  // namespace fastrpca

#endif  // FASTRPCA_FRAMES_H_
