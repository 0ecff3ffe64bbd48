// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "headcue/cli.hpp"

namespace fs = std::filesystem;
using namespace headcue;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("headcue_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::size_t lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

std::vector<std::string> sessions_in(const fs::path& dir) {
    std::vector<std::string> out;
    for (const auto& e : fs::directory_iterator(dir / "sessions")) out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("simulate, analyze, report") {
    const fs::path dir = scratch("pipeline");
    put(dir / "sim.json", R"({"n_per_action": 1, "seed": 3})");
    std::ostringstream err;
    REQUIRE(cli::cmd_simulate((dir / "sim.json").string(), (dir / "bench").string(), err) == cli::kOk);
    const auto files = sessions_in(dir / "bench");
    REQUIRE(files.size() == 4);
    CHECK(lines(slurp(dir / "bench" / "manifest.jsonl")) == 4);

    const std::string scene = (dir / "bench" / "scene.json").string();
    REQUIRE(cli::cmd_analyze(scene, files, (dir / "out").string(), err) == cli::kOk);
    CHECK(err.str().empty());
    // transport: reach + transport records and two signal files.
    CHECK(lines(slurp(dir / "out" / "transport_bottle_000.events.jsonl")) == 2);
    CHECK(fs::exists(dir / "out" / "transport_bottle_000.reach.signals.csv"));
    CHECK(fs::exists(dir / "out" / "transport_bottle_000.transport.signals.csv"));
    CHECK(lines(slurp(dir / "out" / "drinking_000.events.jsonl")) == 1);
    const std::string report = slurp(dir / "out" / "report.txt");
    CHECK(lines(report) == 2 + 5);  // header, rule, five groups
    CHECK(lines(slurp(dir / "out" / "report.csv")) == 1 + 5);

    std::ostringstream out, rerr;
    CHECK(cli::cmd_report((dir / "out").string(), "text", out, rerr) == cli::kOk);
    CHECK(out.str() == report);
    std::ostringstream csv;
    CHECK(cli::cmd_report((dir / "out").string(), "csv", csv, rerr) == cli::kOk);
    CHECK(csv.str() == slurp(dir / "out" / "report.csv"));
    CHECK(cli::cmd_report((dir / "out").string(), "yaml", csv, rerr) == cli::kConfigError);
    fs::remove_all(dir);
}

TEST_CASE("analyze: single session, config and input errors") {
    const fs::path dir = scratch("analyze");
    put(dir / "sim.json", R"({"n_per_action": 1})");
    std::ostringstream err;
    REQUIRE(cli::cmd_simulate((dir / "sim.json").string(), (dir / "bench").string(), err) == cli::kOk);
    const std::string scene = (dir / "bench" / "scene.json").string();
    const std::string one = (dir / "bench" / "sessions" / "touch_bottle_000.jsonl").string();
    REQUIRE(cli::cmd_analyze(scene, {one}, (dir / "one").string(), err) == cli::kOk);
    std::size_t csvs = 0;
    for (const auto& e : fs::directory_iterator(dir / "one"))
        if (e.path().string().ends_with(".signals.csv")) ++csvs;
    CHECK(csvs == 1);
    CHECK(lines(slurp(dir / "one" / "report.txt")) == 3);

    put(dir / "bad_scene.json", R"({"projection_mode":"MODE_3D","targets":[{"kind":"object","object_class":"bottle"}]})");
    std::ostringstream cerr;
    CHECK(cli::cmd_analyze((dir / "bad_scene.json").string(), {one}, (dir / "never").string(), cerr) ==
          cli::kConfigError);
    CHECK_FALSE(fs::exists(dir / "never"));
    CHECK(cerr.str().find("table_plane") != std::string::npos);

    put(dir / "broken.jsonl", "{\"type\":\"header\"}\n");
    std::ostringstream perr;
    CHECK(cli::cmd_analyze(scene, {one, (dir / "broken.jsonl").string()}, (dir / "partial").string(), perr) ==
          cli::kPartialFailure);
    CHECK(fs::exists(dir / "partial" / "report.txt"));
    fs::remove_all(dir);
}

TEST_CASE("stream matches analyze") {
    const fs::path dir = scratch("stream");
    put(dir / "sim.json", R"({"n_per_action": 1, "noise_sigma": 2, "dropout_rate": 0.05})");
    std::ostringstream err;
    REQUIRE(cli::cmd_simulate((dir / "sim.json").string(), (dir / "bench").string(), err) == cli::kOk);
    const std::string scene = (dir / "bench" / "scene.json").string();
    for (const auto& file : sessions_in(dir / "bench")) {
        REQUIRE(cli::cmd_analyze(scene, {file}, (dir / "out").string(), err) == cli::kOk);
        const std::string id = fs::path(file).stem().string();
        std::ifstream in(file);
        std::ostringstream out, serr;
        CHECK(cli::cmd_stream(scene, in, out, serr) == cli::kOk);
        CHECK(out.str() == slurp(dir / "out" / (id + ".events.jsonl")));
        CHECK(serr.str().empty());
    }

    // Fault injection: a malformed line yields one diagnostic and exit 1.
    const std::string file = sessions_in(dir / "bench")[0];
    std::string text = slurp(file);
    const std::size_t cut = text.find('\n', text.find('\n') + 1) + 1;
    text.insert(cut, "{\"type\":\"frame\",\"frame_index\":\n");
    std::istringstream in(text);
    std::ostringstream out, serr;
    CHECK(cli::cmd_stream(scene, in, out, serr) == cli::kPartialFailure);
    CHECK(lines(serr.str()) == 1);
    CHECK(serr.str().rfind("stream: ", 0) == 0);
    CHECK(out.str() == slurp(dir / "out" / (fs::path(file).stem().string() + ".events.jsonl")));

    std::istringstream header_only(text.substr(0, text.find('\n') + 1));
    std::ostringstream hout, herr;
    CHECK(cli::cmd_stream(scene, header_only, hout, herr) == cli::kOk);
    CHECK(hout.str().empty());
    CHECK(herr.str().empty());
    fs::remove_all(dir);
}

TEST_CASE("run: usage errors") {
    const char* none[] = {"headcue"};
    CHECK(cli::run(1, const_cast<char**>(none)) == cli::kConfigError);
    const char* bad[] = {"headcue", "analyze", "--config"};
    CHECK(cli::run(3, const_cast<char**>(bad)) == cli::kConfigError);
    const char* missing[] = {"headcue", "simulate", "--config", "/nonexistent/sim.json", "--out", "/tmp/x"};
    CHECK(cli::run(6, const_cast<char**>(missing)) == cli::kConfigError);
}
