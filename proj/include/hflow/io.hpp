// Copyright 2026 The hflow Authors. All Rights Reserved.
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

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hflow/ambient.hpp"
#include "hflow/diagnostics.hpp"
#include "hflow/flow.hpp"
#include "hflow/surface.hpp"

namespace hflow {

/// Header row then one row per record, 17 significant digits, LF endings.
/// Throws IoError for an empty series or a failed write.
std::string diagnostics_csv(std::span<const DiagnosticsRecord> records);
void write_diagnostics_csv(std::span<const DiagnosticsRecord> records, const std::string& path);
void write_diagnostics_csv(const FlowTrajectory& trajectory, const std::string& path);

enum class SnapshotFormat { flat_binary, vtk_legacy };

inline constexpr std::size_t kSnapshotHeaderBytes = 64;
inline constexpr std::size_t kSnapshotNameBytes = 16;

/// Named per-point fields on a grid, each stored row-major (index i1 * n2 + i2).
struct SnapshotData {
    Grid grid;
    std::vector<std::string> names;
    std::vector<ScalarField> fields;

    const ScalarField& field(std::string_view name) const;
};

/// p1..p4, rho, lambda, Q, A2, H. Geometry must carry curvature.
SnapshotData snapshot_fields(const SurfaceState& state, const GeometryFields& geometry);

/// flat_binary: 64-byte ASCII header "HFLOW1 N1 N2 fieldcount\n" (NUL padded), a table of
/// 16-byte NUL-padded names, then each field as little-endian float64.
/// vtk_legacy: ASCII STRUCTURED_GRID whose points are f mod the lattice (first three
/// components); the fourth component and lambda, Q, A2, H are point data.
void write_snapshot(const SurfaceState& state, const GeometryFields& geometry, const AmbientSpace& ambient,
                    const std::string& path, SnapshotFormat format);

void write_flat_binary(const SnapshotData& data, const std::string& path);
SnapshotData read_flat_binary(const std::string& path);

}  // namespace hflow
