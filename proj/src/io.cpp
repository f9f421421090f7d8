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

#include "hflow/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hflow/error.hpp"

namespace hflow {

namespace {

void append_real(std::string& out, double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.append(buf, static_cast<std::size_t>(len));
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
    return v;
}

}  // namespace

std::string diagnostics_csv(std::span<const DiagnosticsRecord> records) {
    if (records.empty()) throw IoError("no diagnostics records to write");
    std::string out;
    const auto& names = DiagnosticsRecord::column_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ',';
        out += names[i];
    }
    out += '\n';
    for (const auto& r : records) {
        const auto v = r.values();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ',';
            append_real(out, v[i]);
        }
        out += '\n';
    }
    return out;
}

void write_diagnostics_csv(std::span<const DiagnosticsRecord> records, const std::string& path) {
    if (records.empty()) throw IoError("no diagnostics records to write to '" + path + "'");
    write_file(path, diagnostics_csv(records));
}

void write_diagnostics_csv(const FlowTrajectory& trajectory, const std::string& path) {
    write_diagnostics_csv(std::span<const DiagnosticsRecord>(trajectory.records), path);
}

const ScalarField& SnapshotData::field(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return fields[i];
    throw std::out_of_range("snapshot has no field " + std::string(name));
}

SnapshotData snapshot_fields(const SurfaceState& state, const GeometryFields& g) {
    if (!g.has(kCurvature)) throw std::logic_error("snapshot needs curvature fields");
    SnapshotData d;
    d.grid = state.grid;
    for (int a = 0; a < 4; ++a) {
        d.names.push_back("p" + std::to_string(a + 1));
        d.fields.push_back(state.periodic.c[a]);
    }
    d.names.push_back("rho");
    d.fields.push_back(state.rho);
    d.names.push_back("lambda");
    d.fields.push_back(g.metric.lambda);
    d.names.push_back("Q");
    d.fields.push_back(q_field(g).q);
    d.names.push_back("A2");
    d.fields.push_back(g.curvature.norm_sq_a);
    ScalarField h(g.curvature.norm_sq_h.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::sqrt(g.curvature.norm_sq_h[i]);
    d.names.push_back("H");
    d.fields.push_back(std::move(h));
    return d;
}

void write_flat_binary(const SnapshotData& d, const std::string& path) {
    std::string bytes(kSnapshotHeaderBytes, '\0');
    const std::string head = "HFLOW1 " + std::to_string(d.grid.n1) + " " + std::to_string(d.grid.n2) + " " +
                             std::to_string(d.fields.size()) + "\n";
    if (head.size() > kSnapshotHeaderBytes) throw IoError("snapshot header too long for '" + path + "'");
    std::memcpy(bytes.data(), head.data(), head.size());
    for (const auto& name : d.names) {
        if (name.size() >= kSnapshotNameBytes) throw IoError("field name '" + name + "' is too long");
        std::string slot(kSnapshotNameBytes, '\0');
        std::memcpy(slot.data(), name.data(), name.size());
        bytes += slot;
    }
    for (const auto& f : d.fields) {
        if (f.size() != d.grid.size()) throw IoError("field size does not match the grid");
        for (double v : f) {
            const std::uint64_t le = to_little_endian(std::bit_cast<std::uint64_t>(v));
            char raw[8];
            std::memcpy(raw, &le, 8);
            bytes.append(raw, 8);
        }
    }
    write_file(path, bytes);
}

SnapshotData read_flat_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string header(kSnapshotHeaderBytes, '\0');
    if (!in.read(header.data(), static_cast<std::streamsize>(header.size())))
        throw IoError("'" + path + "' is shorter than the snapshot header");
    std::istringstream hs(header.substr(0, header.find('\n')));
    std::string magic;
    std::size_t n1 = 0, n2 = 0, count = 0;
    if (!(hs >> magic >> n1 >> n2 >> count) || magic != "HFLOW1")
        throw IoError("'" + path + "' does not start with a HFLOW1 header");
    SnapshotData d;
    d.grid = Grid{n1, n2};
    for (std::size_t f = 0; f < count; ++f) {
        char slot[kSnapshotNameBytes];
        if (!in.read(slot, kSnapshotNameBytes)) throw IoError("'" + path + "' has a truncated name table");
        d.names.emplace_back(slot, strnlen(slot, kSnapshotNameBytes));
    }
    for (std::size_t f = 0; f < count; ++f) {
        ScalarField values(d.grid.size());
        for (double& v : values) {
            std::uint64_t le = 0;
            if (!in.read(reinterpret_cast<char*>(&le), 8)) throw IoError("'" + path + "' has truncated field data");
            v = std::bit_cast<double>(to_little_endian(le));
        }
        d.fields.push_back(std::move(values));
    }
    if (in.peek() != std::char_traits<char>::eof()) throw IoError("'" + path + "' has trailing bytes");
    return d;
}

namespace {

void write_vtk(const SurfaceState& state, const SnapshotData& d, const AmbientSpace& ambient,
               const std::string& path) {
    const Grid& g = state.grid;
    const Mat4 inv = inverse(ambient.lattice);
    std::string out = "# vtk DataFile Version 3.0\nhflow snapshot t=";
    append_real(out, state.time);
    out += "\nASCII\nDATASET STRUCTURED_GRID\n";
    out += "DIMENSIONS " + std::to_string(g.n1) + " " + std::to_string(g.n2) + " 1\n";
    out += "POINTS " + std::to_string(g.size()) + " double\n";
    ScalarField fourth(g.size());
    // VTK orders points with the first index fastest.
    for (std::size_t i2 = 0; i2 < g.n2; ++i2)
        for (std::size_t i1 = 0; i1 < g.n1; ++i1) {
            Vec4 coeff = mat_vec(inv, state.lift(i1, i2));
            for (double& c : coeff) c -= std::floor(c);
            const Vec4 y = mat_vec(ambient.lattice, coeff);
            for (int a = 0; a < 3; ++a) {
                if (a) out += ' ';
                append_real(out, y[a]);
            }
            out += '\n';
            fourth[g.index(i1, i2)] = y[3];
        }
    out += "POINT_DATA " + std::to_string(g.size()) + "\n";
    auto scalars = [&](const std::string& name, const ScalarField& f) {
        out += "SCALARS " + name + " double 1\nLOOKUP_TABLE default\n";
        for (std::size_t i2 = 0; i2 < g.n2; ++i2)
            for (std::size_t i1 = 0; i1 < g.n1; ++i1) {
                append_real(out, f[g.index(i1, i2)]);
                out += '\n';
            }
    };
    scalars("y4", fourth);
    for (const char* name : {"lambda", "Q", "A2", "H"}) scalars(name, d.field(name));
    write_file(path, out);
}

}  // namespace

void write_snapshot(const SurfaceState& state, const GeometryFields& geometry, const AmbientSpace& ambient,
                    const std::string& path, SnapshotFormat format) {
    const SnapshotData d = snapshot_fields(state, geometry);
    if (format == SnapshotFormat::flat_binary)
        write_flat_binary(d, path);
    else
        write_vtk(state, d, ambient, path);
}

}  // namespace hflow
