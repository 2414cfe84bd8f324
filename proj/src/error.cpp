// Copyright 2026 The invflow Authors
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

#include "invflow/error.hpp"

namespace invflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::SingularLyapunov: return "SingularLyapunov";
    case ErrorCode::RankDeficientB: return "RankDeficientB";
    case ErrorCode::BoxExcludesZero: return "BoxExcludesZero";
    case ErrorCode::XiBelowOne: return "XiBelowOne";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::AlphaNonPositive: return "AlphaNonPositive";
    case ErrorCode::VertexExplosion: return "VertexExplosion";
    case ErrorCode::OutsideEnvelope: return "OutsideEnvelope";
    case ErrorCode::UnstableVertex: return "UnstableVertex";
    case ErrorCode::ZeroState: return "ZeroState";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace invflow
