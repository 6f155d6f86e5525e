#pragma once
// Command-line front end. Every subcommand reads inputs, writes artifacts
// atomically into --out, and records itself in run_manifest.json (one file
// per output directory, keyed by subcommand, so a full pipeline run leaves a
// complete provenance trail). Exit codes: 0 success, 1 failure while running,
// 2 usage error.

#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "convoke/corpus.hpp"
#include "convoke/matching.hpp"
#include "convoke/metrics.hpp"
#include "convoke/netgraph.hpp"
#include "convoke/profiles.hpp"
#include "convoke/report.hpp"
#include "convoke/synth.hpp"
#include "convoke/version.hpp"

namespace convoke {

inline constexpr const char* kControlCohortName = "matched-controls";

namespace detail {

inline std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) {
        prev[j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline std::string suggest(const std::string& unknown, const std::vector<std::string>& known) {
    std::string best;
    std::size_t best_dist = 4; // anything further is noise, not a typo
    for (const auto& k : known) {
        std::size_t d = levenshtein(unknown, k);
        if (d < best_dist) {
            best_dist = d;
            best = k;
        }
    }
    return best;
}

inline std::string slugify(const std::string& name) {
    std::string slug;
    for (char c : name) {
        unsigned char uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            slug += static_cast<char>(std::tolower(uc));
        } else if (!slug.empty() && slug.back() != '-') {
            slug += '-';
        }
    }
    while (!slug.empty() && slug.back() == '-') {
        slug.pop_back();
    }
    return slug.empty() ? "group" : slug;
}

inline std::vector<int> parse_cutoffs(const std::string& text) {
    std::vector<int> cutoffs;
    for (const auto& part : split(text, ',')) {
        try {
            cutoffs.push_back(std::stoi(trim(part)));
        } catch (const std::exception&) {
            throw Error("bad cutoff year '" + trim(part) + "' in '" + text + "'");
        }
    }
    if (cutoffs.empty()) {
        throw Error("--cutoffs lists no years");
    }
    for (std::size_t i = 1; i < cutoffs.size(); ++i) {
        if (cutoffs[i] < cutoffs[i - 1]) {
            throw Error("cutoff years must be sorted ascending");
        }
    }
    return cutoffs;
}

// Wraps a throwing parser into a CLI11 validator so malformed flag values
// surface as usage errors rather than runtime failures.
template <typename Fn>
CLI::Validator value_check(Fn fn, const std::string& name) {
    return CLI::Validator(
        [fn](std::string& value) -> std::string {
            try {
                fn(value);
            } catch (const std::exception& e) {
                return e.what();
            }
            return {};
        },
        "", name);
}

inline std::string require_artifact(const std::filesystem::path& dir,
                                    const std::string& filename,
                                    const std::string& producer) {
    auto path = dir / filename;
    if (!std::filesystem::exists(path)) {
        throw Error("missing artifact '" + filename + "' in " + dir.string() +
                    ": run `convoke " + producer + "` to produce it");
    }
    return read_file(path);
}

struct StepRecord {
    std::string subcommand;
    std::string command;
    std::map<std::string, std::string> params;
    std::map<std::string, std::string> inputs;  // label -> content digest
    std::vector<std::string> outputs;           // filenames inside the out dir
};

inline void update_run_manifest(const std::filesystem::path& out_dir, const StepRecord& step) {
    auto path = out_dir / "run_manifest.json";
    nlohmann::ordered_json manifest;
    if (std::filesystem::exists(path)) {
        manifest = nlohmann::ordered_json::parse(read_file(path), nullptr, false);
        if (manifest.is_discarded() || !manifest.is_object()) {
            throw Error("corrupt run manifest: " + path.string());
        }
    }
    manifest["tool"] = std::string("convoke ") + kVersion;
    nlohmann::ordered_json entry;
    entry["command"] = step.command;
    entry["params"] = step.params;
    entry["inputs"] = step.inputs;
    nlohmann::ordered_json outs;
    for (const auto& name : step.outputs) {
        outs[name] = digest_file(out_dir / name);
    }
    entry["outputs"] = std::move(outs);
    entry["timestamp"] = now_iso8601_utc();
    manifest["steps"][step.subcommand] = std::move(entry);
    atomic_write_file(path, manifest.dump(2) + "\n");
}

inline std::string load_report_to_text(const LoadReport& report) {
    std::string out;
    out += "total lines:    " + std::to_string(report.total_lines) + "\n";
    out += "accepted:       " + std::to_string(report.accepted) + "\n";
    out += "rejected:       " + std::to_string(report.rejected.size()) + "\n";
    out += "syntax errors:  " + std::to_string(report.syntax_errors.size()) + "\n";
    out += "warnings:       " + std::to_string(report.warnings.size()) + "\n";
    for (const auto& [counter, tally] : report.missing_counter_tallies) {
        out += "missing counter " + counter + ": " + std::to_string(tally) +
               " record(s), treated as zero\n";
    }
    auto issues = [&out](const char* label, const std::vector<LoadIssue>& list) {
        for (const auto& issue : list) {
            out += std::string(label) + " line " + std::to_string(issue.line) + ": " +
                   issue.message + "\n";
        }
    };
    issues("syntax", report.syntax_errors);
    issues("rejected", report.rejected);
    issues("warning", report.warnings);
    return out;
}

// ---------------------------------------------------------------------------
// Subcommand argument bundles

struct IngestArgs {
    std::string corpus, out_dir;
    bool lenient = false;
};

struct ProfileArgs {
    std::string corpus, cohort, out_dir;
};

struct PoolArgs {
    std::string corpus, cohort, out_dir;
};

struct MatchArgs {
    std::string cohort, out_dir;
    std::string strategy = "propensity";
    std::string priority;
    double caliper = 0;
    bool has_caliper = false;
    bool seedless = false;
};

struct NetworkArgs {
    std::string corpus, cohort, cutoffs, out_dir;
    std::string palette = "cohort";
};

struct MetricsArgs {
    std::string corpus, cohort, window, out_dir;
};

struct SynthArgs {
    std::string config, out_dir;
    unsigned long long seed = 0;
    bool has_seed = false;
};

struct ReportArgs {
    std::string out_dir;
};

inline Corpus load_corpus_strict(const std::string& path) {
    LoadResult res = load_corpus(path);
    if (!res.report.rejected.empty()) {
        const auto& first = res.report.rejected.front();
        throw Error(std::to_string(res.report.rejected.size()) +
                    " record(s) failed validation (first at line " +
                    std::to_string(first.line) + ": " + first.message +
                    "); fix the corpus or run `convoke ingest --lenient`");
    }
    return std::move(res.corpus);
}

inline void run_ingest(const IngestArgs& a, const std::string& command, std::ostream& out) {
    std::filesystem::path dir(a.out_dir);
    LoadResult res = load_corpus(a.corpus, {a.lenient});
    atomic_write_file(dir / "ingest_report.txt", load_report_to_text(res.report));
    if (!a.lenient && !res.report.rejected.empty()) {
        const auto& first = res.report.rejected.front();
        throw Error(std::to_string(res.report.rejected.size()) +
                    " record(s) failed validation (first at line " +
                    std::to_string(first.line) + ": " + first.message +
                    "); see ingest_report.txt or rerun with --lenient");
    }
    write_corpus(res.corpus, dir / "corpus.jsonl");

    StepRecord step;
    step.subcommand = "ingest";
    step.command = command;
    step.params = {{"corpus", a.corpus}, {"lenient", a.lenient ? "true" : "false"}};
    step.inputs = {{"corpus", digest_file(a.corpus)}};
    step.outputs = {"corpus.jsonl", "ingest_report.txt"};
    update_run_manifest(dir, step);

    out << "ingested " << res.report.accepted << " record(s)";
    if (!res.report.rejected.empty()) {
        out << ", skipped " << res.report.rejected.size();
    }
    if (!res.report.warnings.empty()) {
        out << ", " << res.report.warnings.size() << " warning(s)";
    }
    out << " -> " << (dir / "corpus.jsonl").string() << "\n";
}

inline void run_profile(const ProfileArgs& a, const std::string& command, std::ostream& out) {
    std::filesystem::path dir(a.out_dir);
    Corpus corpus = load_corpus_strict(a.corpus);
    CohortSpec cohort = load_cohort(a.cohort);
    CandidatePool pool = coauthor_pool(corpus, cohort);

    std::set<AuthorId> wanted = cohort.members;
    wanted.insert(pool.candidates.begin(), pool.candidates.end());
    ProfileSet profiles = derive_profiles(corpus, wanted);
    if (!profiles.missing.empty()) {
        std::string names;
        for (const auto& m : profiles.missing) {
            names += (names.empty() ? "" : ", ") + m;
        }
        throw Error("cohort member(s) absent from the corpus: " + names);
    }
    atomic_write_file(dir / "profiles.tsv", profiles_to_tsv(profiles.profiles, &cohort.members));

    StepRecord step;
    step.subcommand = "profile";
    step.command = command;
    step.params = {{"corpus", a.corpus}, {"cohort", a.cohort}};
    step.inputs = {{"corpus", digest_file(a.corpus)}, {"cohort", digest_file(a.cohort)}};
    step.outputs = {"profiles.tsv"};
    update_run_manifest(dir, step);

    out << "profiled " << profiles.profiles.size() << " author(s) (" << cohort.members.size()
        << " cohort, " << pool.candidates.size() << " pool) -> "
        << (dir / "profiles.tsv").string() << "\n";
}

inline void run_pool(const PoolArgs& a, const std::string& command, std::ostream& out) {
    std::filesystem::path dir(a.out_dir);
    Corpus corpus = load_corpus_strict(a.corpus);
    CohortSpec cohort = load_cohort(a.cohort);
    CandidatePool pool = coauthor_pool(corpus, cohort);
    atomic_write_file(dir / "pool.txt", pool_to_text(pool));

    StepRecord step;
    step.subcommand = "pool";
    step.command = command;
    step.params = {{"corpus", a.corpus}, {"cohort", a.cohort}};
    step.inputs = {{"corpus", digest_file(a.corpus)}, {"cohort", digest_file(a.cohort)}};
    step.outputs = {"pool.txt"};
    update_run_manifest(dir, step);

    out << "pool of " << pool.candidates.size() << " candidate(s) -> "
        << (dir / "pool.txt").string() << "\n";
}

inline void run_match(const MatchArgs& a, const std::string& command, std::ostream& out) {
    std::filesystem::path dir(a.out_dir);
    CohortSpec cohort = load_cohort(a.cohort);

    ProfileSet profiles;
    profiles.profiles = profiles_from_tsv(require_artifact(dir, "profiles.tsv", "profile"));
    CandidatePool pool = pool_from_text(require_artifact(dir, "pool.txt", "pool"));

    MatchOptions opts;
    opts.strategy = parse_strategy(a.strategy);
    if (!a.priority.empty()) {
        opts.priority = parse_priority(a.priority);
    }
    if (a.has_caliper) {
        opts.caliper = a.caliper;
    }

    StandardizedSample sample = standardize(profiles, cohort.members, pool.candidates);
    PropensityModel model = fit_propensity(sample);
    MatchResult result = nn_match(sample, model, opts);

    CohortSpec controls;
    controls.name = kControlCohortName;
    controls.program_start_year = cohort.program_start_year;
    for (const auto& pair : result.pairs) {
        controls.members.insert(pair.control);
    }
    atomic_write_file(dir / "matches.tsv", matches_to_tsv(result));
    atomic_write_file(dir / "balance.tsv", balance_to_tsv(result.diagnostics, result.strategy));
    write_cohort(controls, dir / "control_cohort.txt");

    StepRecord step;
    step.subcommand = "match";
    step.command = command;
    step.params = {{"cohort", a.cohort},
                   {"strategy", a.strategy},
                   {"priority", a.priority.empty() ? "(default)" : a.priority},
                   {"caliper", a.has_caliper ? std::to_string(a.caliper) : "(none)"}};
    step.inputs = {{"cohort", digest_file(a.cohort)},
                   {"profiles.tsv", digest_hex(profiles_to_tsv(profiles.profiles))},
                   {"pool.txt", digest_file(dir / "pool.txt")}};
    step.outputs = {"matches.tsv", "balance.tsv", "control_cohort.txt"};
    update_run_manifest(dir, step);

    double worst_after = 0;
    for (const auto& row : result.diagnostics.rows) {
        worst_after = std::max(worst_after, row.smd_after);
    }
    out << "matched " << result.pairs.size() << " pair(s) via " << to_string(result.strategy)
        << ", worst after-SMD " << format_fixed(worst_after, 3) << " -> "
        << (dir / "matches.tsv").string() << "\n";
}

inline void run_network(const NetworkArgs& a, const std::string& command, std::ostream& out) {
    std::filesystem::path dir(a.out_dir);
    Corpus corpus = load_corpus_strict(a.corpus);
    CohortSpec cohort = load_cohort(a.cohort);
    std::vector<int> cutoffs = parse_cutoffs(a.cutoffs);
    std::string slug = slugify(cohort.name);

    FigureStyle style;
    style.palette = a.palette;
    StepRecord step;
    step.subcommand = "network:" + slug; // one step entry per graphed group
    step.command = command;

    for (int cutoff : cutoffs) {
        CoAuthorNetwork net = build_network(corpus, cohort.members, cutoff);
        if (!net.missing_members.empty() && cutoff == cutoffs.front()) {
            out << "note: " << net.missing_members.size()
                << " member(s) have no publications by " << cutoff
                << "; drawn as isolated nodes\n";
        }
        LayoutFigure fig = render_circular(net, style);
        std::string base = "network_" + slug + "_" + std::to_string(cutoff);
        atomic_write_file(dir / (base + ".svg"), to_svg(fig));
        atomic_write_file(dir / (base + ".dot"), to_dot(fig));
        step.outputs.push_back(base + ".svg");
        step.outputs.push_back(base + ".dot");
        if (cutoff == cutoffs.back()) {
            atomic_write_file(dir / ("adjacency_" + slug + ".txt"),
                              adjacency_to_text(net, corpus));
            step.outputs.push_back("adjacency_" + slug + ".txt");
        }
    }
    auto series = density_series(corpus, cohort.members, cutoffs);
    atomic_write_file(dir / ("density_" + slug + ".tsv"), density_series_to_tsv(series));
    step.outputs.push_back("density_" + slug + ".tsv");

    step.params = {{"corpus", a.corpus},
                   {"cohort", a.cohort},
                   {"cutoffs", a.cutoffs},
                   {"palette", a.palette}};
    step.inputs = {{"corpus", digest_file(a.corpus)}, {"cohort", digest_file(a.cohort)}};
    update_run_manifest(dir, step);

    out << "rendered " << cutoffs.size() << " cutoff(s) for '" << cohort.name
        << "', final density " << format_fixed(series.back().second, 6) << " -> "
        << (dir / ("density_" + slug + ".tsv")).string() << "\n";
}

inline void run_metrics(const MetricsArgs& a, const std::string& command, std::ostream& out) {
    std::filesystem::path dir(a.out_dir);
    Corpus corpus = load_corpus_strict(a.corpus);
    CohortSpec cohort = load_cohort(a.cohort);
    YearRange window; // unbounded unless --window given
    if (!a.window.empty()) {
        window = YearRange::parse(a.window);
    }
    std::string slug = slugify(cohort.name);

    BaselineTable baselines = build_baselines(corpus, window);
    PublicationSet set = group_publication_set(corpus, cohort.members, window, cohort.name);
    MetricsPanel pan = panel(set, corpus, baselines);
    for (const auto& w : pan.warnings) {
        out << "note: " << w << "\n";
    }
    atomic_write_file(dir / ("panel_" + slug + ".tsv"), panel_to_tsv(pan));

    auto range = corpus.year_range();
    std::vector<int> years;
    for (int y = std::max(range->from, window.from); y <= std::min(range->to, window.to); ++y) {
        years.push_back(y);
    }
    auto series = timeseries(corpus, cohort.members, baselines, PanelMetric::fwci, years);
    atomic_write_file(dir / ("fwci_series_" + slug + ".tsv"),
                      timeseries_to_tsv(series, PanelMetric::fwci));

    StepRecord step;
    step.subcommand = "metrics:" + slug;
    step.command = command;
    step.params = {{"corpus", a.corpus},
                   {"cohort", a.cohort},
                   {"window", a.window.empty() ? "(full)" : a.window}};
    step.inputs = {{"corpus", digest_file(a.corpus)}, {"cohort", digest_file(a.cohort)}};
    step.outputs = {"panel_" + slug + ".tsv", "fwci_series_" + slug + ".tsv"};
    update_run_manifest(dir, step);

    out << "panel over " << pan.publication_count << " publication(s) for '" << cohort.name
        << "' -> " << (dir / ("panel_" + slug + ".tsv")).string() << "\n";
}

inline void run_synth(const SynthArgs& a, const std::string& command, std::ostream& out) {
    std::filesystem::path dir(a.out_dir);
    SynthConfig cfg = parse_synth_config(read_file(a.config));
    if (a.has_seed) {
        cfg.seed = a.seed;
    }
    SynthOutput result = generate(cfg);
    write_corpus(result.corpus, dir / "synth_corpus.jsonl");
    write_cohort(result.cohort, dir / "synth_cohort.txt");
    atomic_write_file(dir / "synth_manifest.json", result.manifest.dump(2) + "\n");

    StepRecord step;
    step.subcommand = "synth";
    step.command = command;
    step.params = {{"config", a.config},
                   {"seed", a.has_seed ? std::to_string(a.seed) : "(from config)"}};
    step.inputs = {{"config", digest_file(a.config)}};
    step.outputs = {"synth_corpus.jsonl", "synth_cohort.txt", "synth_manifest.json"};
    update_run_manifest(dir, step);

    out << "generated " << result.corpus.records().size() << " publication(s) across "
        << result.corpus.author_index().size() << " author(s) -> "
        << (dir / "synth_corpus.jsonl").string() << "\n";
}

inline void run_report(const ReportArgs& a, const std::string& command, std::ostream& out) {
    std::filesystem::path dir(a.out_dir);
    if (!std::filesystem::is_directory(dir)) {
        throw Error("output directory does not exist: " + dir.string());
    }

    std::vector<std::string> panel_slugs;
    std::vector<std::string> density_slugs;
    std::vector<std::string> figures;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("panel_", 0) == 0 && name.size() > 10 &&
            name.substr(name.size() - 4) == ".tsv") {
            panel_slugs.push_back(name.substr(6, name.size() - 10));
        } else if (name.rfind("density_", 0) == 0 && name.substr(name.size() - 4) == ".tsv") {
            density_slugs.push_back(name.substr(8, name.size() - 12));
        } else if (name.size() > 4 && name.substr(name.size() - 4) == ".svg") {
            figures.push_back(name);
        }
    }
    std::sort(panel_slugs.begin(), panel_slugs.end());
    std::sort(density_slugs.begin(), density_slugs.end());
    std::sort(figures.begin(), figures.end());

    if (panel_slugs.size() != 2) {
        throw Error("report needs exactly two panel_<group>.tsv artifacts in " + dir.string() +
                    ", found " + std::to_string(panel_slugs.size()) +
                    ": run `convoke metrics` once per group to produce them");
    }
    // The matched-control panel always lands in the second column.
    if (panel_slugs[0] == slugify(kControlCohortName)) {
        std::swap(panel_slugs[0], panel_slugs[1]);
    }
    std::string balance = require_artifact(dir, "balance.tsv", "match");
    if (density_slugs.empty()) {
        throw Error("missing artifact 'density_<group>.tsv' in " + dir.string() +
                    ": run `convoke network` to produce it");
    }

    MetricsPanel pa = panel_from_tsv(read_file(dir / ("panel_" + panel_slugs[0] + ".tsv")));
    MetricsPanel pb = panel_from_tsv(read_file(dir / ("panel_" + panel_slugs[1] + ".tsv")));

    std::string text;
    text += "convoke " + std::string(kVersion) + " study report\n";
    text += "\n== metrics comparison ==\n\n";
    text += render_comparison(pa, pb, panel_slugs[0], panel_slugs[1]);
    text += "\n== covariate balance ==\n\n";
    text += balance;
    text += "\n== network density ==\n";
    for (const auto& slug : density_slugs) {
        text += "\n[" + slug + "]\n";
        text += read_file(dir / ("density_" + slug + ".tsv"));
    }
    text += "\n== figures ==\n\n";
    if (figures.empty()) {
        text += "(none rendered)\n";
    }
    for (const auto& f : figures) {
        text += f + "\n";
    }
    atomic_write_file(dir / "report.txt", text);

    StepRecord step;
    step.subcommand = "report";
    step.command = command;
    step.inputs = {{"panel_" + panel_slugs[0] + ".tsv",
                    digest_file(dir / ("panel_" + panel_slugs[0] + ".tsv"))},
                   {"panel_" + panel_slugs[1] + ".tsv",
                    digest_file(dir / ("panel_" + panel_slugs[1] + ".tsv"))},
                   {"balance.tsv", digest_file(dir / "balance.tsv")}};
    step.outputs = {"report.txt"};
    update_run_manifest(dir, step);

    out << "report over groups '" << panel_slugs[0] << "' and '" << panel_slugs[1] << "' -> "
        << (dir / "report.txt").string() << "\n";
}

inline std::string join_command(const std::vector<std::string>& args) {
    std::string cmd = "convoke";
    for (const auto& a : args) {
        cmd += " " + a;
    }
    return cmd;
}

} // namespace detail

// Entry point shared by the binary and the in-process tests. `args` excludes
// the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"cohort analysis over publication corpora"};
    app.name("convoke");
    app.set_version_flag("--version", std::string("convoke ") + kVersion);
    app.require_subcommand(0, 1);

    detail::IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "validate and canonicalize a corpus");
    ingest_cmd->add_option("--corpus", ingest.corpus, "publication corpus (jsonl)")->required();
    ingest_cmd->add_option("--out", ingest.out_dir, "output directory")->required();
    ingest_cmd->add_flag("--lenient", ingest.lenient,
                         "skip malformed records instead of failing");

    detail::ProfileArgs profile;
    auto* profile_cmd =
        app.add_subcommand("profile", "derive career covariates for cohort and pool");
    profile_cmd->add_option("--corpus", profile.corpus, "publication corpus (jsonl)")->required();
    profile_cmd->add_option("--cohort", profile.cohort, "cohort member file")->required();
    profile_cmd->add_option("--out", profile.out_dir, "output directory")->required();

    detail::PoolArgs pool;
    auto* pool_cmd = app.add_subcommand("pool", "derive the co-author candidate pool");
    pool_cmd->add_option("--corpus", pool.corpus, "publication corpus (jsonl)")->required();
    pool_cmd->add_option("--cohort", pool.cohort, "cohort member file")->required();
    pool_cmd->add_option("--out", pool.out_dir, "output directory")->required();

    detail::MatchArgs match;
    auto* match_cmd =
        app.add_subcommand("match", "match cohort members to pool controls 1:1");
    match_cmd->add_option("--cohort", match.cohort, "cohort member file")->required();
    match_cmd->add_option("--out", match.out_dir, "directory holding profile/pool artifacts")
        ->required();
    match_cmd->add_option("--strategy", match.strategy, "propensity or lexicographic")
        ->check(CLI::IsMember({"propensity", "lexicographic"}));
    match_cmd
        ->add_option("--priority", match.priority,
                     "comma separated covariate priority (lexicographic strategy)")
        ->check(detail::value_check([](const std::string& v) { parse_priority(v); },
                                    "PRIORITY"));
    match_cmd->add_option("--caliper", match.caliper, "max propensity score distance")
        ->check(CLI::PositiveNumber);
    match_cmd->add_flag("--seedless", match.seedless,
                        "accepted for compatibility; matching is deterministic");

    detail::NetworkArgs network;
    auto* network_cmd =
        app.add_subcommand("network", "render cumulative co-authorship networks");
    network_cmd->add_option("--corpus", network.corpus, "publication corpus (jsonl)")->required();
    network_cmd->add_option("--cohort", network.cohort, "member file for the graphed group")
        ->required();
    network_cmd->add_option("--cutoffs", network.cutoffs, "ascending cutoff years, e.g. 1996,2008")
        ->required()
        ->check(detail::value_check([](const std::string& v) { detail::parse_cutoffs(v); },
                                    "CUTOFFS"));
    network_cmd->add_option("--palette", network.palette, "cohort, control or neutral")
        ->check(CLI::IsMember({"cohort", "control", "neutral"}));
    network_cmd->add_option("--out", network.out_dir, "output directory")->required();

    detail::MetricsArgs metrics;
    auto* metrics_cmd = app.add_subcommand("metrics", "compute the bibliometric panel");
    metrics_cmd->add_option("--corpus", metrics.corpus, "publication corpus (jsonl)")->required();
    metrics_cmd->add_option("--cohort", metrics.cohort, "member file for the measured group")
        ->required();
    metrics_cmd->add_option("--window", metrics.window, "publication year window FROM:TO")
        ->check(detail::value_check([](const std::string& v) { YearRange::parse(v); },
                                    "WINDOW"));
    metrics_cmd->add_option("--out", metrics.out_dir, "output directory")->required();

    detail::SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a seeded synthetic corpus");
    synth_cmd->add_option("--config", synth.config, "synth config file")->required();
    synth_cmd->add_option("--seed", synth.seed, "override the config seed");
    synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();

    detail::ReportArgs report;
    auto* report_cmd =
        app.add_subcommand("report", "assemble a study report from prior artifacts");
    report_cmd->add_option("--out", report.out_dir, "directory holding pipeline artifacts")
        ->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        std::vector<std::string> known;
        for (const auto* sub : app.get_subcommands({})) {
            known.push_back(sub->get_name());
            for (const auto* opt : sub->get_options()) {
                for (const auto& lname : opt->get_lnames()) {
                    known.push_back("--" + lname);
                }
            }
        }
        known.insert(known.end(), {"--help", "--version"});
        for (std::size_t i = 0; i < args.size(); ++i) {
            bool is_flag = args[i].rfind("--", 0) == 0;
            if (!is_flag && i != 0) {
                continue; // option values are not typo candidates
            }
            std::string name = is_flag ? args[i].substr(0, args[i].find('=')) : args[i];
            if (std::find(known.begin(), known.end(), name) == known.end()) {
                std::string hint = detail::suggest(name, known);
                if (!hint.empty()) {
                    err << "(did you mean '" << hint << "'?)\n";
                }
                break;
            }
        }
        err << "run `convoke --help` for usage\n";
        return 2;
    }

    if (app.get_subcommands().empty()) {
        out << app.help();
        return 0;
    }

    try {
        std::string command = detail::join_command(args);
        if (ingest_cmd->parsed()) {
            detail::run_ingest(ingest, command, out);
        } else if (profile_cmd->parsed()) {
            detail::run_profile(profile, command, out);
        } else if (pool_cmd->parsed()) {
            detail::run_pool(pool, command, out);
        } else if (match_cmd->parsed()) {
            match.has_caliper = match_cmd->count("--caliper") > 0;
            detail::run_match(match, command, out);
        } else if (network_cmd->parsed()) {
            detail::run_network(network, command, out);
        } else if (metrics_cmd->parsed()) {
            detail::run_metrics(metrics, command, out);
        } else if (synth_cmd->parsed()) {
            synth.has_seed = synth_cmd->count("--seed") > 0;
            detail::run_synth(synth, command, out);
        } else if (report_cmd->parsed()) {
            detail::run_report(report, command, out);
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace convoke
