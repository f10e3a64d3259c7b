// Copyright 2026 The deanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "deanon/matching.hpp"

#include <string>

namespace deanon {

MeanVector EmpiricalMeanVector(const TraceMatrix& traces,
                               std::span<const Index> user_indices) {
  if (traces.cols() < 1) {
    throw Error(ErrorCode::kInvalidConfig, "traces have no samples");
  }
  MeanVector out;
  out.source = traces.role == TraceRole::kLearning ? MeanSource::kLearning
                                                   : MeanSource::kObserved;
  out.values.resize(static_cast<Index>(user_indices.size()));
  for (std::size_t j = 0; j < user_indices.size(); ++j) {
    const Index u = user_indices[j];
    if (u < 0 || u >= traces.rows()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "row " + std::to_string(u) + " not in traces");
    }
    // Shifted by the first sample so constant rows reproduce exactly.
    const auto row = traces.values.row(u);
    const double shift = row(0);
    out.values(static_cast<Index>(j)) =
        shift + (row.array() - shift).sum() / static_cast<double>(row.size());
  }
  return out;
}

}  // namespace deanon
