#include <cmath>
#include <unordered_map>

#include "wuglab/experiments.hpp"

namespace wuglab::experiments {

using morph::Suffix;

namespace {

std::unordered_map<std::string, bool> stimulus_index(const std::vector<WugItem>& stimuli) {
    std::unordered_map<std::string, bool> idx;
    for (const auto& it : stimuli) idx.emplace(it.orth, it.rhyme);
    return idx;
}

bool lookup_rhyme(const std::unordered_map<std::string, bool>& idx, const std::string& item) {
    const auto it = idx.find(item);
    if (it == idx.end()) throw DataError("speaker record references unknown item: '" + item + "'");
    return it->second;
}

Suffix classify_form(const std::string& stimulus, const std::string& form) {
    if (form.empty()) return Suffix::OTHER;
    return morph::classify_plural(stimulus, form).suffix;
}

struct Welford {
    // two-pass is unnecessary; sums suffice at this scale
    double sum = 0.0, sum_sq = 0.0;
    std::size_t n = 0;
    void push(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    RatingCell cell() const {
        RatingCell c;
        c.n = n;
        if (n == 0) return c;
        c.mean = sum / static_cast<double>(n);
        if (n >= 2) {
            const double var = (sum_sq - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1);
            c.se = std::sqrt(std::max(0.0, var) / static_cast<double>(n));
        }
        return c;
    }
};

}  // namespace

std::vector<SpeakerRecord> parse_speaker_file(const std::string& text) {
    std::vector<SpeakerRecord> records;
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto cols = split(line, ',');
        if (cols.size() != 5)
            throw ParseError("speaker file line " + std::to_string(line_no) +
                             ": expected `participant,item,task,form,value`");
        if (line_no == 1 && trim(cols[0]) == "participant") continue;  // header

        SpeakerRecord rec;
        rec.participant = trim(cols[0]);
        rec.item = trim(cols[1]);
        rec.form = trim(cols[3]);
        const std::string task = trim(cols[2]);
        const std::string value = trim(cols[4]);
        if (task == "prod") {
            rec.is_rating = false;
        } else if (task == "rate") {
            rec.is_rating = true;
            try {
                rec.rating = std::stoi(value);
            } catch (const std::exception&) {
                throw ParseError("speaker file line " + std::to_string(line_no) + ": bad rating '" + value +
                                 "'");
            }
        } else {
            throw ParseError("speaker file line " + std::to_string(line_no) + ": task must be prod or rate");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

ProductionStats speaker_production_stats(const std::vector<SpeakerRecord>& records,
                                         const std::vector<WugItem>& stimuli) {
    const auto idx = stimulus_index(stimuli);
    ProductionStats stats;
    for (const auto& rec : records) {
        if (rec.is_rating) continue;
        const bool rhyme = lookup_rhyme(idx, rec.item);
        if (rec.form.empty()) throw DataError("empty produced form for item '" + rec.item + "'");
        const Suffix cls = classify_form(rec.item, rec.form);
        if (rhyme) {
            ++stats.count_r[static_cast<std::size_t>(cls)];
            ++stats.n_r;
        } else {
            ++stats.count_nr[static_cast<std::size_t>(cls)];
            ++stats.n_nr;
        }
    }
    for (std::size_t c = 0; c < kNumSuffixes; ++c) {
        if (stats.n_r) stats.pct_r[c] = 100.0 * static_cast<double>(stats.count_r[c]) / static_cast<double>(stats.n_r);
        if (stats.n_nr)
            stats.pct_nr[c] = 100.0 * static_cast<double>(stats.count_nr[c]) / static_cast<double>(stats.n_nr);
    }
    return stats;
}

RatingStats rating_stats(const std::vector<SpeakerRecord>& records, const std::vector<WugItem>& stimuli) {
    const auto idx = stimulus_index(stimuli);
    std::array<Welford, kNumSuffixes> acc_r{}, acc_nr{};
    Welford all_r, all_nr;

    for (const auto& rec : records) {
        if (!rec.is_rating) continue;
        const bool rhyme = lookup_rhyme(idx, rec.item);
        if (rec.rating < 1 || rec.rating > 5)
            throw DataError("rating outside 1..5 for item '" + rec.item + "': " + std::to_string(rec.rating));
        const Suffix cls = classify_form(rec.item, rec.form);
        const double v = static_cast<double>(rec.rating);
        if (rhyme) {
            acc_r[static_cast<std::size_t>(cls)].push(v);
            all_r.push(v);
        } else {
            acc_nr[static_cast<std::size_t>(cls)].push(v);
            all_nr.push(v);
        }
    }

    RatingStats stats;
    for (std::size_t c = 0; c < kNumSuffixes; ++c) {
        stats.r[c] = acc_r[c].cell();
        stats.nr[c] = acc_nr[c].cell();
    }
    stats.overall_r = all_r.cell();
    stats.overall_nr = all_nr.cell();
    return stats;
}

SpeakerItemProps speaker_item_proportions(const std::vector<SpeakerRecord>& records,
                                          const std::vector<WugItem>& stimuli) {
    const auto idx = stimulus_index(stimuli);
    SpeakerItemProps props;
    props.items = stimuli;
    props.item_prop.assign(stimuli.size(), {});
    props.item_n.assign(stimuli.size(), 0);

    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < stimuli.size(); ++i) pos.emplace(stimuli[i].orth, i);

    std::vector<std::array<std::size_t, kNumSuffixes>> counts(stimuli.size());
    for (auto& a : counts) a.fill(0);

    for (const auto& rec : records) {
        if (rec.is_rating) continue;
        lookup_rhyme(idx, rec.item);  // unknown-item check
        const std::size_t i = pos.at(rec.item);
        const Suffix cls = classify_form(rec.item, rec.form);
        ++counts[i][static_cast<std::size_t>(cls)];
        ++props.item_n[i];
    }
    for (std::size_t i = 0; i < stimuli.size(); ++i)
        if (props.item_n[i])
            for (std::size_t c = 0; c < kNumSuffixes; ++c)
                props.item_prop[i][c] =
                    static_cast<double>(counts[i][c]) / static_cast<double>(props.item_n[i]);
    return props;
}

}  // namespace wuglab::experiments
