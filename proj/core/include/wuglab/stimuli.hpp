#pragma once

#include <string>
#include <vector>

namespace wuglab {

/// One wug-test stimulus: an orthographic nonce form plus its category
/// (rhyme = phonologically familiar, non-rhyme = atypical).
struct WugItem {
    std::string orth;
    bool rhyme = false;
};

/// The built-in 24 nonce nouns, 12 rhymes then 12 non-rhymes.
const std::vector<WugItem>& builtin_stimuli();

/// Loads a stimulus file: one `form,flag` line per item with flag in
/// {R, NR, 1, 0}. '#' comments and blank lines ignored.
std::vector<WugItem> parse_stimuli(const std::string& text);

std::vector<std::string> stimulus_forms(const std::vector<WugItem>& items);

}  // namespace wuglab
