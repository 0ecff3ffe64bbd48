// Copyright (C) 2026 The headcue Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "headcue/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "headcue/error.hpp"
#include "headcue/online.hpp"
#include "headcue/pipeline.hpp"
#include "headcue/sim.hpp"
#include "headcue/stats.hpp"

namespace headcue::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
}

struct SessionJob {
    std::string path;
    std::optional<SessionAnalysis> analysis;
    std::string load_error;
};

}  // namespace

int cmd_analyze(const std::string& config_path, const std::vector<std::string>& session_paths,
                const std::string& out_dir, std::ostream& err) {
    SceneConfig scene;
    try {
        scene = load_scene_config(config_path);
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        err << "cannot create output directory '" << out_dir << "': " << ec.message() << '\n';
        return kConfigError;
    }

    std::vector<SessionJob> jobs(session_paths.size());
    const auto n = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        SessionJob& job = jobs[i];
        job.path = session_paths[i];
        try {
            job.analysis = analyze_session(load_session(job.path), scene);
        } catch (const Error& e) {
            job.load_error = e.what();
        }
    }

    int status = kOk;
    std::vector<AnticipationResult> all;
    for (const auto& job : jobs) {
        if (!job.analysis) {
            err << job.path << ": " << job.load_error << '\n';
            status = kPartialFailure;
            continue;
        }
        const SessionAnalysis& a = *job.analysis;
        for (const auto& e : a.errors()) err << job.path << ": " << e << '\n';
        if (!a.ok()) status = kPartialFailure;
        const std::string& id = a.header.session_id;
        try {
            std::ostringstream events;
            std::set<std::string> used;
            for (const auto& t : a.targets) {
                if (t.result) events << event_record_json(*t.result) << '\n';
                if (!t.smoothed) continue;
                std::string stem = id + "." + to_string(scene.targets[t.target_index].phase());
                if (!used.insert(stem).second) stem += "." + std::to_string(t.target_index);
                write_file(fs::path(out_dir) / (stem + ".signals.csv"), signals_to_csv(*t.smoothed));
            }
            write_file(fs::path(out_dir) / (id + ".events.jsonl"), events.str());
        } catch (const Error& e) {
            err << job.path << ": " << e.what() << '\n';
            status = kPartialFailure;
        }
        const auto results = a.results();
        all.insert(all.end(), results.begin(), results.end());
    }

    if (all.empty()) {
        err << "no anticipation results; report not written\n";
        return kPartialFailure;
    }
    try {
        const auto summaries = aggregate(all);
        write_file(fs::path(out_dir) / "report.txt", render_report(summaries, ReportFormat::text));
        write_file(fs::path(out_dir) / "report.csv", render_report(summaries, ReportFormat::csv));
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kPartialFailure;
    }
    return status;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, std::ostream& err) {
    BenchmarkConfig cfg;
    try {
        cfg = load_benchmark_config(config_path);
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    try {
        write_benchmark(make_benchmark(cfg), out_dir);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return e.code() == ErrorCode::io ? kPartialFailure : kConfigError;
    }
    return kOk;
}

int cmd_stream(const std::string& config_path, std::istream& in, std::ostream& out,
               std::ostream& err) {
    std::optional<StreamAnalyzer> analyzer;
    try {
        analyzer.emplace(load_scene_config(config_path));
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    int status = kOk;
    auto emit = [&](const std::vector<AnticipationResult>& records) {
        for (const auto& r : records) out << event_record_json(r) << '\n';
        if (!records.empty()) out.flush();
    };
    std::string line;
    while (std::getline(in, line)) {
        try {
            emit(analyzer->feed_line(line));
        } catch (const Error& e) {
            err << "stream: " << e.what() << '\n';
            status = kPartialFailure;
        }
    }
    std::vector<std::string> errors;
    emit(analyzer->finish(errors));
    for (const auto& e : errors) err << "stream: " << e << '\n';
    if (!errors.empty()) status = kPartialFailure;
    return status;
}

int cmd_report(const std::string& in_dir, const std::string& format, std::ostream& out,
               std::ostream& err) {
    ReportFormat fmt;
    try {
        fmt = parse_report_format(format);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kConfigError;
    }
    std::error_code ec;
    if (!fs::is_directory(in_dir, ec)) {
        err << "'" << in_dir << "' is not a directory\n";
        return kConfigError;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.size() > 13 &&
            name.compare(name.size() - 13, 13, ".events.jsonl") == 0)
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    int status = kOk;
    std::vector<AnticipationResult> all;
    for (const auto& path : files) {
        std::ifstream f(path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(f, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            try {
                all.push_back(parse_event_record(line));
            } catch (const Error& e) {
                err << path.string() << ":" << line_no << ": " << e.what() << '\n';
                status = kPartialFailure;
            }
        }
    }
    try {
        out << render_report(aggregate(all), fmt);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kPartialFailure;
    }
    return status;
}

int run(int argc, char** argv) {
    CLI::App app{"headcue: head-orientation anticipation of reach and transport goals"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;
    std::vector<std::string> sessions;
    auto* analyze = app.add_subcommand("analyze", "analyze recorded sessions");
    analyze->add_option("--config", config, "scene configuration (JSON)")->required();
    analyze->add_option("--out", out_dir, "output directory")->required();
    analyze->add_option("sessions", sessions, "session files (JSONL)")->required();

    auto* simulate = app.add_subcommand("simulate", "generate a synthetic benchmark");
    simulate->add_option("--config", config, "simulation configuration (JSON)")->required();
    simulate->add_option("--out", out_dir, "output directory")->required();

    auto* stream = app.add_subcommand("stream", "analyze one session read from stdin");
    stream->add_option("--config", config, "scene configuration (JSON)")->required();

    std::string in_dir;
    std::string format = "text";
    auto* report = app.add_subcommand("report", "aggregate event records into a table");
    report->add_option("--in", in_dir, "directory holding *.events.jsonl")->required();
    report->add_option("--format", format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    if (*analyze) return cmd_analyze(config, sessions, out_dir, std::cerr);
    if (*simulate) return cmd_simulate(config, out_dir, std::cerr);
    if (*stream) {
        std::ios::sync_with_stdio(false);
        return cmd_stream(config, std::cin, std::cout, std::cerr);
    }
    return cmd_report(in_dir, format, std::cout, std::cerr);
}

}  // namespace headcue::cli
