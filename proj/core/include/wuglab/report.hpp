#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "wuglab/experiments.hpp"
#include "wuglab/morph.hpp"

namespace wuglab::report {

using Json = nlohmann::json;

/// Fixed-decimal formatting used by every CSV so reruns are byte-identical.
std::string fmt(double v, int decimals);

using Row = std::vector<std::string>;
std::string to_csv(const std::vector<Row>& rows);

/// `class,percent,count` rows in report order (en, e, zero, er, s, other)
/// plus a trailing N row.
std::string class_distribution_csv(const morph::ClassDistribution& dist);

std::string prf_csv(const experiments::PrfTable& table);
std::string wug_items_csv(const experiments::WugReport& report);
std::string wug_categories_csv(const experiments::WugReport& report);
std::string rank_profile_csv(const experiments::RankProfile& profile);
std::string speaker_stats_csv(const experiments::ProductionStats& prod,
                              const experiments::RatingStats& rate);
std::string correlations_csv(const experiments::CorrelationTable& table);
std::string history_csv(const std::vector<experiments::EpochStats>& history);
std::string accuracy_csv(const experiments::SweepResult& sweep);

Json to_json(const morph::ClassDistribution& dist);
Json to_json(const experiments::PrfTable& table);
Json to_json(const experiments::WugReport& report);
Json to_json(const experiments::RankProfile& profile);
Json to_json(const experiments::ProductionStats& stats);
Json to_json(const experiments::RatingStats& stats);
Json to_json(const experiments::CorrelationTable& table);

// ---------------------------------------------------------------------------
// Run directory manifest: config snapshot, seeds, and a checksum for every
// emitted file. Timestamps live here and only here.
// ---------------------------------------------------------------------------

class Manifest {
  public:
    /// Loads run_dir/manifest.json if present, else starts fresh. Creates
    /// the run directory.
    static Manifest open(const std::string& run_dir);

    void set_command(const std::string& command);
    void set_config(const std::map<std::string, std::string>& kv);
    void set_seeds(const std::vector<std::uint64_t>& seeds);

    /// Writes contents to run_dir/relpath and records its checksum.
    void emit(const std::string& relpath, std::string_view contents);
    /// Records an already-written file (e.g. a checkpoint).
    void add_file(const std::string& relpath);

    const std::string& dir() const { return run_dir_; }
    std::string path(const std::string& relpath) const;

    /// Saves manifest.json (refreshes the timestamp).
    void save();

  private:
    std::string run_dir_;
    Json doc_;
};

}  // namespace wuglab::report
