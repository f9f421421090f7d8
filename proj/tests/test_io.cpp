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

#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hflow/error.hpp"
#include "hflow/io.hpp"
#include "hflow/scenario.hpp"
#include "oracles.hpp"

using namespace hflow;
namespace fs = std::filesystem;

namespace {

const AmbientSpace& ambient() {
    static const AmbientSpace s = standard_hyperkahler_torus();
    return s;
}

fs::path scratch() {
    static const fs::path dir = [] {
        const fs::path p = fs::temp_directory_path() / ("hflow_io_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

GeometryFields geometry_of(const SurfaceState& s) {
    const DerivativeOperator ops(s.grid, s.scheme);
    return compute_geometry(s, ambient(), ops);
}

FlowTrajectory identity_run(std::size_t records) {
    RunSettings rs;
    rs.integrator.dt_mode = DtMode::fixed;
    rs.integrator.dt = 1e-3;
    rs.integrator.t_end = 1e-3 * static_cast<double>(records - 1);
    rs.diagnostics_cadence = 1;
    rs.snapshot_cadence = 0;
    return run_flow(oracle::identity_graph(8), ambient(), rs);
}

}  // namespace

TEST_CASE("diagnostics CSV has the fixed header and 14 columns per row") {
    const FlowTrajectory t = identity_run(3);
    REQUIRE(t.records.size() == 3);
    const std::string csv = diagnostics_csv(t.records);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.back() == '\n');
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "t,E,min_lambda,max_lambda,max_Q,max_A2,max_H,int_A2_dmu,area,min_beta1,min_beta2,min_mu,"
                      "min_detg,dt");
    std::string first_e;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        CHECK(std::count(lines[i].begin(), lines[i].end(), ',') == 13);
        const auto a = lines[i].find(',');
        const std::string e = lines[i].substr(a + 1, lines[i].find(',', a + 1) - a - 1);
        if (i == 1) first_e = e;
        CHECK(e == first_e);
    }
}

TEST_CASE("CSV values round trip losslessly") {
    DiagnosticsRecord r;
    r.t = 0.1;
    r.energy = 1.0 / 3.0;
    r.min_det_g = 5e-324;
    r.dt_used = -0.0;
    const std::string csv = diagnostics_csv(std::span<const DiagnosticsRecord>(&r, 1));
    const auto row = lines_of(csv)[1];
    std::vector<double> v;
    std::istringstream in(row);
    for (std::string cell; std::getline(in, cell, ',');) v.push_back(std::strtod(cell.c_str(), nullptr));
    REQUIRE(v.size() == DiagnosticsRecord::kColumns);
    const auto want = r.values();
    for (std::size_t k = 0; k + 1 < v.size(); ++k) CHECK(std::memcmp(&v[k], &want[k], sizeof(double)) == 0);
}

TEST_CASE("CSV errors") {
    CHECK_THROWS_AS(diagnostics_csv({}), IoError);
    const FlowTrajectory t = identity_run(3);
    try {
        write_diagnostics_csv(t, "/nonexistent/dir/out.csv");
        FAIL("expected an error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
    }
    const fs::path p = scratch() / "ok.csv";
    write_diagnostics_csv(t, p.string());
    CHECK(slurp(p) == diagnostics_csv(t.records));
}

TEST_CASE("flat binary snapshot has the documented layout") {
    const SurfaceState s = oracle::identity_graph(8);
    const GeometryFields g = geometry_of(s);
    const fs::path p = scratch() / "id.hflow";
    write_snapshot(s, g, ambient(), p.string(), SnapshotFormat::flat_binary);
    const std::string bytes = slurp(p);
    const std::size_t fields = 9;
    CHECK(bytes.size() == kSnapshotHeaderBytes + kSnapshotNameBytes * fields + 64 * fields * 8);
    CHECK(bytes.rfind("HFLOW1 8 8 9\n", 0) == 0);
    CHECK(bytes[13] == '\0');
    CHECK(bytes.substr(kSnapshotHeaderBytes, 3) == std::string("p1\0", 3));
    // rho is the fifth field and equals 2 on the identity graph; check its first value's raw bytes.
    const std::size_t off = kSnapshotHeaderBytes + kSnapshotNameBytes * fields + 4 * 64 * 8;
    const unsigned char two_le[8] = {0, 0, 0, 0, 0, 0, 0, 0x40};
    CHECK(std::memcmp(bytes.data() + off, two_le, 8) == 0);
}

TEST_CASE("flat binary round trip is bit exact") {
    const SurfaceState s = oracle::random_state(16, 4, 0.05);
    const GeometryFields g = geometry_of(s);
    const SnapshotData d = snapshot_fields(s, g);
    CHECK(d.names == std::vector<std::string>{"p1", "p2", "p3", "p4", "rho", "lambda", "Q", "A2", "H"});
    const fs::path p = scratch() / "rt.hflow";
    write_flat_binary(d, p.string());
    const SnapshotData back = read_flat_binary(p.string());
    CHECK(back.grid == d.grid);
    CHECK(back.names == d.names);
    REQUIRE(back.fields.size() == d.fields.size());
    for (std::size_t k = 0; k < d.fields.size(); ++k)
        CHECK(std::memcmp(back.fields[k].data(), d.fields[k].data(), d.fields[k].size() * sizeof(double)) == 0);
    CHECK(std::memcmp(back.field("lambda").data(), g.metric.lambda.data(), g.metric.lambda.size() * 8) == 0);
    CHECK_THROWS_AS(back.field("nope"), std::out_of_range);
}

TEST_CASE("reading malformed binary snapshots fails") {
    const fs::path bad = scratch() / "bad.hflow";
    {
        std::ofstream(bad, std::ios::binary) << "not a snapshot";
    }
    CHECK_THROWS_AS(read_flat_binary(bad.string()), IoError);
    CHECK_THROWS_AS(read_flat_binary((scratch() / "missing.hflow").string()), IoError);

    const SurfaceState s = oracle::identity_graph(8);
    const fs::path good = scratch() / "trail.hflow";
    write_flat_binary(snapshot_fields(s, geometry_of(s)), good.string());
    {
        std::ofstream(good, std::ios::binary | std::ios::app) << 'x';
    }
    CHECK_THROWS_AS(read_flat_binary(good.string()), IoError);
}

TEST_CASE("VTK snapshot declares a structured grid") {
    const SurfaceState s = oracle::single_shear(8, 0.05);
    const fs::path p = scratch() / "shear.vtk";
    write_snapshot(s, geometry_of(s), ambient(), p.string(), SnapshotFormat::vtk_legacy);
    const std::string text = slurp(p);
    CHECK(text.rfind("# vtk DataFile Version", 0) == 0);
    CHECK(text.find("DATASET STRUCTURED_GRID") != std::string::npos);
    CHECK(text.find("DIMENSIONS 8 8 1") != std::string::npos);
    CHECK(text.find("POINTS 64 double") != std::string::npos);
    CHECK(text.find("POINT_DATA 64") != std::string::npos);
    for (const char* name : {"y4", "lambda", "Q", "A2", "H"})
        CHECK(text.find(std::string("SCALARS ") + name + " double") != std::string::npos);
}

TEST_CASE("snapshot writes are byte-deterministic") {
    const SurfaceState s = oracle::random_state(8, 11, 0.05);
    const GeometryFields g = geometry_of(s);
    for (SnapshotFormat f : {SnapshotFormat::flat_binary, SnapshotFormat::vtk_legacy}) {
        const fs::path a = scratch() / "det_a", b = scratch() / "det_b";
        write_snapshot(s, g, ambient(), a.string(), f);
        write_snapshot(s, geometry_of(s), ambient(), b.string(), f);
        CHECK(slurp(a) == slurp(b));
    }
    CHECK_THROWS_AS(write_snapshot(s, g, ambient(), "/nonexistent/dir/x.vtk", SnapshotFormat::vtk_legacy), IoError);
}
