#include "wuglab/report.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>

namespace wuglab::report {

using experiments::kNumSuffixes;
using morph::Suffix;
using morph::suffix_name;

std::string fmt(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string to_csv(const std::vector<Row>& rows) {
    std::string out;
    for (const Row& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

std::string class_distribution_csv(const morph::ClassDistribution& dist) {
    std::vector<Row> rows = {{"class", "percent", "count"}};
    for (Suffix s : morph::kAllSuffixes) {
        const auto i = static_cast<std::size_t>(s);
        rows.push_back({suffix_name(s), dist.defined ? fmt(dist.percent[i], 1) : "undefined",
                        std::to_string(dist.count[i])});
    }
    rows.push_back({"N", "", std::to_string(dist.n)});
    return to_csv(rows);
}

std::string prf_csv(const experiments::PrfTable& table) {
    std::vector<Row> rows = {{"class", "precision", "recall", "f1", "gold_count", "predicted_count"}};
    for (Suffix s : morph::kAllSuffixes) {
        const auto& r = table.rows[static_cast<std::size_t>(s)];
        rows.push_back({suffix_name(s), fmt(r.precision, 3), fmt(r.recall, 3), fmt(r.f1, 3),
                        std::to_string(r.gold_count), std::to_string(r.predicted_count)});
    }
    return to_csv(rows);
}

std::string wug_items_csv(const experiments::WugReport& report) {
    std::vector<Row> rows;
    Row header = {"item", "category"};
    for (Suffix s : morph::kAllSuffixes) header.push_back(suffix_name(s));
    rows.push_back(header);
    for (std::size_t i = 0; i < report.items.size(); ++i) {
        Row row = {report.items[i].orth, report.items[i].rhyme ? "R" : "NR"};
        for (std::size_t c = 0; c < kNumSuffixes; ++c) row.push_back(fmt(report.item_prop[i][c], 4));
        rows.push_back(row);
    }
    return to_csv(rows);
}

std::string wug_categories_csv(const experiments::WugReport& report) {
    std::vector<Row> rows = {{"category", "class", "percent", "count", "n"}};
    for (Suffix s : morph::kAllSuffixes) {
        const auto c = static_cast<std::size_t>(s);
        rows.push_back({"R", suffix_name(s), fmt(report.rhyme_pct[c], 1),
                        std::to_string(report.rhyme_count[c]), std::to_string(report.n_rhyme)});
    }
    for (Suffix s : morph::kAllSuffixes) {
        const auto c = static_cast<std::size_t>(s);
        rows.push_back({"NR", suffix_name(s), fmt(report.nonrhyme_pct[c], 1),
                        std::to_string(report.nonrhyme_count[c]), std::to_string(report.n_nonrhyme)});
    }
    return to_csv(rows);
}

std::string rank_profile_csv(const experiments::RankProfile& profile) {
    std::vector<Row> rows;
    Row header = {"rank", "n"};
    for (Suffix s : morph::kAllSuffixes) header.push_back(suffix_name(s));
    rows.push_back(header);
    for (std::size_t r = 0; r < profile.k; ++r) {
        Row row = {std::to_string(r + 1), std::to_string(profile.rank_n[r])};
        for (std::size_t c = 0; c < kNumSuffixes; ++c) row.push_back(fmt(profile.rank_prop[r][c], 4));
        rows.push_back(row);
    }
    if (!profile.flagged_items.empty()) {
        Row row = {"flagged", ""};
        std::string joined;
        for (const auto& it : profile.flagged_items) joined += (joined.empty() ? "" : ";") + it;
        row.push_back(joined);
        rows.push_back(row);
    }
    return to_csv(rows);
}

std::string speaker_stats_csv(const experiments::ProductionStats& prod,
                              const experiments::RatingStats& rate) {
    std::vector<Row> rows = {
        {"class", "category", "prod_pct", "prod_n", "rating_mean", "rating_se", "rating_n"}};
    for (Suffix s : morph::kAllSuffixes) {
        const auto c = static_cast<std::size_t>(s);
        rows.push_back({suffix_name(s), "R", fmt(prod.pct_r[c], 1), std::to_string(prod.count_r[c]),
                        fmt(rate.r[c].mean, 2), fmt(rate.r[c].se, 3), std::to_string(rate.r[c].n)});
        rows.push_back({suffix_name(s), "NR", fmt(prod.pct_nr[c], 1), std::to_string(prod.count_nr[c]),
                        fmt(rate.nr[c].mean, 2), fmt(rate.nr[c].se, 3), std::to_string(rate.nr[c].n)});
    }
    rows.push_back({"overall", "R", "", std::to_string(prod.n_r), fmt(rate.overall_r.mean, 2),
                    fmt(rate.overall_r.se, 3), std::to_string(rate.overall_r.n)});
    rows.push_back({"overall", "NR", "", std::to_string(prod.n_nr), fmt(rate.overall_nr.mean, 2),
                    fmt(rate.overall_nr.se, 3), std::to_string(rate.overall_nr.n)});
    return to_csv(rows);
}

std::string correlations_csv(const experiments::CorrelationTable& table) {
    std::vector<Row> rows = {{"class", "rho", "n_items"}};
    for (Suffix s : morph::kAllSuffixes) {
        const auto& rho = table.rho[static_cast<std::size_t>(s)];
        rows.push_back({suffix_name(s), rho ? fmt(*rho, 3) : "undefined", std::to_string(table.n_items)});
    }
    return to_csv(rows);
}

std::string history_csv(const std::vector<experiments::EpochStats>& history) {
    std::vector<Row> rows = {{"epoch", "train_loss", "dev_exact_pct"}};
    for (const auto& e : history)
        rows.push_back({std::to_string(e.epoch), fmt(e.train_loss, 6), fmt(e.dev_exact_pct, 2)});
    return to_csv(rows);
}

std::string accuracy_csv(const experiments::SweepResult& sweep) {
    std::vector<Row> rows = {{"seed", "train_pct", "dev_pct", "test_pct", "status"}};
    for (const auto& o : sweep.outcomes) {
        if (o.failed)
            rows.push_back({std::to_string(o.seed), "", "", "", "failed: " + o.error});
        else
            rows.push_back({std::to_string(o.seed), fmt(o.train_acc, 2), fmt(o.dev_acc, 2),
                            fmt(o.test_acc, 2), "ok"});
    }
    return to_csv(rows);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

template <typename T>
Json per_class(const std::array<T, kNumSuffixes>& values) {
    Json j = Json::object();
    for (Suffix s : morph::kAllSuffixes) j[suffix_name(s)] = values[static_cast<std::size_t>(s)];
    return j;
}

}  // namespace

Json to_json(const morph::ClassDistribution& dist) {
    return Json{{"percent", per_class(dist.percent)},
                {"count", per_class(dist.count)},
                {"n", dist.n},
                {"defined", dist.defined}};
}

Json to_json(const experiments::PrfTable& table) {
    Json rows = Json::object();
    for (Suffix s : morph::kAllSuffixes) {
        const auto& r = table.rows[static_cast<std::size_t>(s)];
        rows[suffix_name(s)] = Json{{"precision", r.precision},
                                    {"recall", r.recall},
                                    {"f1", r.f1},
                                    {"gold_count", r.gold_count},
                                    {"predicted_count", r.predicted_count}};
    }
    return rows;
}

Json to_json(const experiments::WugReport& report) {
    Json items = Json::array();
    for (std::size_t i = 0; i < report.items.size(); ++i) {
        items.push_back(Json{{"item", report.items[i].orth},
                             {"category", report.items[i].rhyme ? "R" : "NR"},
                             {"proportion", per_class(report.item_prop[i])}});
    }
    return Json{{"items", items},
                {"rhyme_pct", per_class(report.rhyme_pct)},
                {"nonrhyme_pct", per_class(report.nonrhyme_pct)},
                {"n_rhyme", report.n_rhyme},
                {"n_nonrhyme", report.n_nonrhyme},
                {"seeds", report.seeds}};
}

Json to_json(const experiments::RankProfile& profile) {
    Json ranks = Json::array();
    for (std::size_t r = 0; r < profile.k; ++r)
        ranks.push_back(Json{{"rank", r + 1}, {"n", profile.rank_n[r]}, {"proportion", per_class(profile.rank_prop[r])}});
    return Json{{"ranks", ranks}, {"flagged_items", profile.flagged_items}, {"seeds", profile.seeds}};
}

Json to_json(const experiments::ProductionStats& stats) {
    return Json{{"R", Json{{"pct", per_class(stats.pct_r)}, {"count", per_class(stats.count_r)}, {"n", stats.n_r}}},
                {"NR", Json{{"pct", per_class(stats.pct_nr)}, {"count", per_class(stats.count_nr)}, {"n", stats.n_nr}}}};
}

namespace {

Json cell_json(const experiments::RatingCell& c) {
    return Json{{"mean", c.mean}, {"se", c.se}, {"n", c.n}};
}

}  // namespace

Json to_json(const experiments::RatingStats& stats) {
    Json r = Json::object(), nr = Json::object();
    for (Suffix s : morph::kAllSuffixes) {
        r[suffix_name(s)] = cell_json(stats.r[static_cast<std::size_t>(s)]);
        nr[suffix_name(s)] = cell_json(stats.nr[static_cast<std::size_t>(s)]);
    }
    r["overall"] = cell_json(stats.overall_r);
    nr["overall"] = cell_json(stats.overall_nr);
    return Json{{"R", r}, {"NR", nr}};
}

Json to_json(const experiments::CorrelationTable& table) {
    Json j = Json::object();
    for (Suffix s : morph::kAllSuffixes) {
        const auto& rho = table.rho[static_cast<std::size_t>(s)];
        j[suffix_name(s)] = rho ? Json(*rho) : Json();
    }
    return Json{{"rho", j}, {"n_items", table.n_items}};
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

Manifest Manifest::open(const std::string& run_dir) {
    std::filesystem::create_directories(run_dir);
    Manifest m;
    m.run_dir_ = run_dir;
    const std::string path = run_dir + "/manifest.json";
    if (std::filesystem::exists(path)) {
        try {
            m.doc_ = Json::parse(read_file(path));
        } catch (const Json::parse_error& e) {
            throw DataError("corrupt manifest at " + path + ": " + e.what());
        }
    }
    if (!m.doc_.contains("files")) m.doc_["files"] = Json::object();
    return m;
}

void Manifest::set_command(const std::string& command) { doc_["command"] = command; }

void Manifest::set_config(const std::map<std::string, std::string>& kv) {
    Json j = Json::object();
    for (const auto& [k, v] : kv) j[k] = v;
    doc_["config"] = j;
}

void Manifest::set_seeds(const std::vector<std::uint64_t>& seeds) { doc_["seeds"] = seeds; }

std::string Manifest::path(const std::string& relpath) const { return run_dir_ + "/" + relpath; }

void Manifest::emit(const std::string& relpath, std::string_view contents) {
    const std::string full = path(relpath);
    std::filesystem::create_directories(std::filesystem::path(full).parent_path());
    write_file(full, contents);
    add_file(relpath);
}

void Manifest::add_file(const std::string& relpath) {
    doc_["files"][relpath] = file_checksum(path(relpath));
}

void Manifest::save() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    doc_["updated"] = buf;
    write_file(path("manifest.json"), doc_.dump(2) + "\n");
}

}  // namespace wuglab::report
